//! Modular fast path for polynomial GCDs.
//!
//! Both entry points follow the same evaluate–reconstruct–verify scheme:
//! reduce the inputs modulo a word-size prime, take cheap GCDs in `F_p`
//! (directly for one variable; per evaluation point followed by Newton
//! interpolation for two), normalize the leading coefficient against the GCD
//! of the inputs' leading coefficients, lift by CRT across primes, and accept
//! a candidate only once it exactly divides both inputs over the integers.
//! The divisibility check makes the result unconditionally correct: unlucky
//! primes or evaluation points can only cost retries, and a caller falls back
//! to the pseudo-remainder sequence when every prime is exhausted (`None`).
//!
//! Degree-zero images short-circuit to a GCD of 1, which makes coprimality —
//! the overwhelmingly common case in rational-function reduction — as cheap
//! as a single evaluation.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::gcd::{content, content_wrt_l, exact_div, gcd_zm, l_coefficient};
use super::LaurentPoly;

/// 31-bit primes used for reductions, largest first.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(16);
        let mut n: u64 = (1 << 31) - 1;
        while out.len() < 16 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    n > 1
}

/// Arithmetic in `F_p` for a fixed prime `p < 2³²`.
#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    fn from_bigint(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }
}

// Dense univariate polynomials over F_p: coefficients by ascending degree,
// no trailing zeros (the zero polynomial is the empty vector).

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn up_rem(mut a: Vec<u64>, b: &[u64], fp: Fp) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = fp.inv(b[db]);
    while a.len() > db {
        let da = a.len() - 1;
        let q = fp.mul(a[da], lead_inv);
        if q != 0 {
            let shift = da - db;
            for (k, &bk) in b.iter().enumerate() {
                a[shift + k] = fp.sub(a[shift + k], fp.mul(q, bk));
            }
        }
        a.pop();
        trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

/// Monic GCD of two nonzero dense polynomials.
fn up_gcd(mut a: Vec<u64>, mut b: Vec<u64>, fp: Fp) -> Vec<u64> {
    while !b.is_empty() {
        let r = up_rem(a, &b, fp);
        a = b;
        b = r;
    }
    let lead_inv = fp.inv(*a.last().expect("gcd of nonzero inputs"));
    for x in &mut a {
        *x = fp.mul(*x, lead_inv);
    }
    a
}

fn up_eval(v: &[u64], x: u64, fp: Fp) -> u64 {
    let mut acc = 0;
    for &c in v.iter().rev() {
        acc = fp.add(fp.mul(acc, x), c);
    }
    acc
}

/// Reduces an `L`-free polynomial with `ord_M = 0` to dense form.
fn reduce_m(p: &LaurentPoly, fp: Fp) -> Vec<u64> {
    let deg = p.deg_m().expect("nonzero") as usize;
    let mut v = vec![0; deg + 1];
    for (&(_, j), c) in p.terms() {
        v[j as usize] = fp.from_bigint(c);
    }
    trim(&mut v);
    v
}

/// A two-variable polynomial reduced mod `p`, preprocessed for repeated
/// evaluation at values of `M`: terms point into a sorted table of distinct
/// `M`-exponents so the needed powers can be built incrementally per point.
struct BivModP {
    /// `(L-degree, index into m_exps, residue)`, zero residues dropped.
    terms: Vec<(usize, usize, u64)>,
    /// Sorted distinct `M`-exponents.
    m_exps: Vec<i64>,
    deg_l: usize,
}

fn reduce_lm(p: &LaurentPoly, fp: Fp) -> BivModP {
    let mut m_exps: Vec<i64> = p.terms().map(|(&(_, j), _)| j).collect();
    m_exps.sort_unstable();
    m_exps.dedup();
    let deg_l = p.deg_l().expect("nonzero") as usize;
    let mut terms = Vec::with_capacity(p.num_terms());
    for (&(i, j), c) in p.terms() {
        let r = fp.from_bigint(c);
        if r != 0 {
            let idx = m_exps.binary_search(&j).expect("exponent was collected");
            terms.push((i as usize, idx, r));
        }
    }
    BivModP { terms, m_exps, deg_l }
}

/// Evaluates at `M = m`, returning a dense polynomial in `L`.
fn eval_biv(b: &BivModP, m: u64, fp: Fp) -> Vec<u64> {
    let mut powers = Vec::with_capacity(b.m_exps.len());
    let mut prev = 0i64;
    let mut cur = 1u64;
    for &e in &b.m_exps {
        cur = fp.mul(cur, fp.pow(m, (e - prev) as u64));
        prev = e;
        powers.push(cur);
    }
    let mut out = vec![0u64; b.deg_l + 1];
    for &(l, ei, c) in &b.terms {
        out[l] = fp.add(out[l], fp.mul(c, powers[ei]));
    }
    trim(&mut out);
    out
}

/// Newton interpolation of polynomial values over distinct points: returns
/// the coefficient grid `grid[m][l]` of a two-variable polynomial matching
/// every `(point, value-in-L)` pair, with `deg_M < points.len()`.
fn interpolate(points: &[(u64, Vec<u64>)], deg_l: usize, fp: Fp) -> Vec<Vec<u64>> {
    let t = points.len();
    let mut grid: Vec<Vec<u64>> = vec![vec![0; deg_l + 1]; t];
    let mut basis: Vec<u64> = vec![1];
    for (k, (xk, vk)) in points.iter().enumerate() {
        // The partial result evaluated at M = xk (its M-support is < k).
        let mut eval = vec![0u64; deg_l + 1];
        let mut xp = 1u64;
        for row in grid.iter().take(k) {
            for (l, &g) in row.iter().enumerate() {
                eval[l] = fp.add(eval[l], fp.mul(g, xp));
            }
            xp = fp.mul(xp, *xk);
        }
        let denom_inv = fp.inv(up_eval(&basis, *xk, fp));
        let mut correction = vec![0u64; deg_l + 1];
        let mut nonzero = false;
        for (l, slot) in correction.iter_mut().enumerate() {
            let v = vk.get(l).copied().unwrap_or(0);
            *slot = fp.mul(fp.sub(v, eval[l]), denom_inv);
            nonzero |= *slot != 0;
        }
        if nonzero {
            for (m, &bm) in basis.iter().enumerate() {
                if bm != 0 {
                    for l in 0..=deg_l {
                        grid[m][l] = fp.add(grid[m][l], fp.mul(bm, correction[l]));
                    }
                }
            }
        }
        // basis ← basis · (M − xk).
        let neg_x = fp.sub(0, *xk);
        let mut next = vec![0u64; basis.len() + 1];
        for (m, &bm) in basis.iter().enumerate() {
            next[m] = fp.add(next[m], fp.mul(bm, neg_x));
            next[m + 1] = fp.add(next[m + 1], bm);
        }
        basis = next;
    }
    grid
}

/// Symmetric CRT lift: the unique `x ≡ old (mod modulus)`, `x ≡ new (mod p)`
/// with `|x| ≤ modulus·p/2`.
fn crt_lift(old: &BigInt, modulus: &BigInt, new_res: u64, fp: Fp) -> BigInt {
    let inv = fp.inv(fp.from_bigint(modulus));
    let t = fp.mul(fp.sub(new_res, fp.from_bigint(old)), inv);
    let mut x = old + modulus * BigInt::from(t);
    let full = modulus * BigInt::from(fp.p);
    if &x * 2 > full {
        x -= &full;
    }
    x
}

fn symmetric(res: u64, fp: Fp) -> BigInt {
    if res * 2 > fp.p {
        BigInt::from(res) - BigInt::from(fp.p)
    } else {
        BigInt::from(res)
    }
}

/// GCD of two `L`-free polynomials, both with `ord_M = 0`, positive degree,
/// and integer content 1. Returns the primitive GCD with positive leading
/// coefficient, or `None` if every prime was unlucky or insufficient.
pub(super) fn univariate(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let da = a.deg_m().expect("nonzero");
    let db = b.deg_m().expect("nonzero");
    let gamma: BigInt = a.coefficient(0, da).gcd(&b.coefficient(0, db));
    let mut acc: Option<(Vec<BigInt>, BigInt, usize)> = None;
    for &p in primes() {
        let fp = Fp { p };
        if fp.from_bigint(&gamma) == 0 {
            continue;
        }
        let ra = reduce_m(a, fp);
        let rb = reduce_m(b, fp);
        if ra.len() != da as usize + 1 || rb.len() != db as usize + 1 {
            // The prime divides a leading coefficient.
            continue;
        }
        let mut g = up_gcd(ra, rb, fp);
        if g.len() == 1 {
            return Some(LaurentPoly::one());
        }
        let scale = fp.from_bigint(&gamma);
        for x in &mut g {
            *x = fp.mul(*x, scale);
        }
        let deg = g.len() - 1;
        match &mut acc {
            Some((coeffs, modulus, acc_deg)) if deg == *acc_deg => {
                for (c, &r) in coeffs.iter_mut().zip(&g) {
                    *c = crt_lift(c, modulus, r, fp);
                }
                *modulus *= BigInt::from(p);
            }
            Some((_, _, acc_deg)) if deg > *acc_deg => continue,
            _ => {
                acc = Some((
                    g.iter().map(|&r| symmetric(r, fp)).collect(),
                    BigInt::from(p),
                    deg,
                ));
            }
        }
        let (coeffs, _, _) = acc.as_ref().expect("just set");
        let candidate = LaurentPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| ((0, j as i64), c.clone())),
        );
        if candidate.is_zero() {
            continue;
        }
        let Ok(mut candidate) = candidate.monomial_clear() else { continue };
        let ct = content(&candidate);
        candidate = candidate.divexact_scalar(&ct);
        if exact_div(a, &candidate).is_ok() && exact_div(b, &candidate).is_ok() {
            return Some(candidate);
        }
    }
    None
}

/// GCD of two two-variable polynomials, both with minimum exponents `(0, 0)`,
/// positive `L`-degree, and trivial content with respect to `L`. Returns the
/// primitive GCD with positive leading coefficient, or `None` if every prime
/// was unlucky or insufficient.
pub(super) fn bivariate(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let da = a.deg_l().expect("nonzero");
    let db = b.deg_l().expect("nonzero");
    let lca = l_coefficient(a, da);
    let lcb = l_coefficient(b, db);
    let gamma = gcd_zm(&lca, &lcb);
    let deg_m_gamma = gamma.deg_m().expect("leading coefficients are nonzero");
    let points_needed =
        (a.deg_m().unwrap_or(0).min(b.deg_m().unwrap_or(0)) + deg_m_gamma) as usize + 1;

    let mut acc: Option<(Vec<Vec<BigInt>>, BigInt, usize)> = None;
    for &p in primes() {
        let fp = Fp { p };
        let gamma_p = if gamma.deg_l() == Some(0) && !gamma.is_zero() {
            reduce_m(&gamma, fp)
        } else {
            continue;
        };
        if gamma_p.len() != deg_m_gamma as usize + 1 {
            continue;
        }
        let lca_p = reduce_m(&lca, fp);
        let lcb_p = reduce_m(&lcb, fp);
        if lca_p.is_empty() || lcb_p.is_empty() {
            continue;
        }
        let ra = reduce_lm(a, fp);
        let rb = reduce_lm(b, fp);

        let mut images: Vec<(u64, Vec<u64>)> = Vec::with_capacity(points_needed);
        let mut deg_min = usize::MAX;
        let mut m_val = 0u64;
        let budget = 4 * points_needed as u64 + 64;
        while images.len() < points_needed && m_val < budget {
            let m = m_val;
            m_val += 1;
            if up_eval(&lca_p, m, fp) == 0 || up_eval(&lcb_p, m, fp) == 0 {
                continue;
            }
            let ia = eval_biv(&ra, m, fp);
            let ib = eval_biv(&rb, m, fp);
            let g = up_gcd(ia, ib, fp);
            if g.len() == 1 {
                return Some(LaurentPoly::one());
            }
            let deg = g.len() - 1;
            if deg < deg_min {
                images.clear();
                deg_min = deg;
            } else if deg > deg_min {
                continue;
            }
            let scale = up_eval(&gamma_p, m, fp);
            if scale == 0 {
                continue;
            }
            let mut scaled = g;
            for x in &mut scaled {
                *x = fp.mul(*x, scale);
            }
            images.push((m, scaled));
        }
        if images.len() < points_needed {
            continue;
        }
        let grid = interpolate(&images, deg_min, fp);

        match &mut acc {
            Some((coeffs, modulus, acc_deg)) if deg_min == *acc_deg => {
                for (crow, grow) in coeffs.iter_mut().zip(&grid) {
                    for (c, &r) in crow.iter_mut().zip(grow) {
                        *c = crt_lift(c, modulus, r, fp);
                    }
                }
                *modulus *= BigInt::from(p);
            }
            Some((_, _, acc_deg)) if deg_min > *acc_deg => continue,
            _ => {
                acc = Some((
                    grid.iter()
                        .map(|row| row.iter().map(|&r| symmetric(r, fp)).collect())
                        .collect(),
                    BigInt::from(p),
                    deg_min,
                ));
            }
        }

        let (coeffs, _, _) = acc.as_ref().expect("just set");
        let candidate = LaurentPoly::from_terms(coeffs.iter().enumerate().flat_map(|(m, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(l, c)| ((l as i64, m as i64), c.clone()))
        }));
        if candidate.is_zero() {
            continue;
        }
        let Ok(cleared) = candidate.monomial_clear() else { continue };
        let cw = content_wrt_l(&cleared);
        let Ok(candidate) = exact_div(&cleared, &cw) else { continue };
        if exact_div(a, &candidate).is_ok() && exact_div(b, &candidate).is_ok() {
            return Some(candidate);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(l, m, c)| ((l, m), BigInt::from(c))))
    }

    #[test]
    fn prime_table_is_prime() {
        for &q in primes() {
            assert!(is_prime(q), "{q} is composite");
            assert!(q < 1 << 31);
        }
        assert_eq!(primes()[0], 2147483647);
    }

    #[test]
    fn field_inverse_and_crt() {
        let fp = Fp { p: 2147483647 };
        for a in [1u64, 2, 12345, 2147483646] {
            assert_eq!(fp.mul(a, fp.inv(a)), 1);
        }
        // −5 reconstructed across two primes.
        let fp2 = Fp { p: 2147483629 };
        let start = symmetric(fp.from_bigint(&BigInt::from(-5)), fp);
        let lifted = crt_lift(&start, &BigInt::from(fp.p), fp2.from_bigint(&BigInt::from(-5)), fp2);
        assert_eq!(lifted, BigInt::from(-5));
    }

    #[test]
    fn univariate_shared_factor() {
        // (M−1)(M+2) and (M−1)(M+3), primitive with ord 0.
        let a = p(&[(0, 2, 1), (0, 1, 1), (0, 0, -2)]);
        let b = p(&[(0, 2, 1), (0, 1, 2), (0, 0, -3)]);
        let g = univariate(&a, &b).unwrap();
        assert_eq!(g, p(&[(0, 1, 1), (0, 0, -1)]));
    }

    #[test]
    fn univariate_coprime_is_one() {
        let a = p(&[(0, 1, 1), (0, 0, 1)]);
        let b = p(&[(0, 1, 1), (0, 0, -1)]);
        assert!(univariate(&a, &b).unwrap().is_one());
    }

    #[test]
    fn bivariate_shared_factor() {
        let l2m2 = p(&[(2, 0, 1), (0, 2, -1)]);
        let a = &l2m2 * &p(&[(1, 0, 1), (0, 1, 1)]);
        let b = &l2m2 * &p(&[(1, 1, 1), (0, 0, 3)]);
        assert_eq!(bivariate(&a, &b).unwrap(), l2m2);
    }

    #[test]
    fn bivariate_coprime_is_one() {
        let a = p(&[(1, 0, 1), (0, 1, 1)]);
        let b = p(&[(1, 0, 1), (0, 1, -1)]);
        assert!(bivariate(&a, &b).unwrap().is_one());
    }

    #[test]
    fn interpolation_recovers_a_grid() {
        let fp = Fp { p: 2147483647 };
        // Target G = (3 + 2M + M²) + (5 + 7M)L over F_p.
        let target_rows = [[3u64, 5], [2, 7], [1, 0]];
        let eval = |m: u64| -> Vec<u64> {
            let mut v = vec![0u64; 2];
            let mut xp = 1;
            for row in &target_rows {
                for (l, &c) in row.iter().enumerate() {
                    v[l] = fp.add(v[l], fp.mul(c, xp));
                }
                xp = fp.mul(xp, m);
            }
            trim(&mut v);
            v
        };
        let points: Vec<(u64, Vec<u64>)> = (0..5).map(|m| (m, eval(m))).collect();
        let grid = interpolate(&points, 1, fp);
        for (m, row) in target_rows.iter().enumerate() {
            for (l, &c) in row.iter().enumerate() {
                assert_eq!(grid[m][l], c, "coefficient of L^{l} M^{m}");
            }
        }
        for row in grid.iter().skip(3) {
            assert!(row.iter().all(|&c| c == 0));
        }
    }
}
