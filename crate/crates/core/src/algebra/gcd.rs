//! Integer content, exact division, and greatest common divisors.
//!
//! GCDs first try the modular fast path in [`super::modgcd`] — images modulo
//! word-size primes, lifted by CRT and verified by exact division — which
//! keeps the deep-filling eliminations from drowning in intermediate
//! coefficient swell. A primitive pseudo-remainder sequence on the recursive
//! univariate representation (`L` major, coefficients in `Z[M]`), with full
//! content — integer and `M`-power — extracted at every step, remains as the
//! unconditional fallback; both paths produce the same canonical result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, LaurentPoly};

/// The integer content: the nonnegative GCD of all coefficients (0 for the
/// zero polynomial).
pub fn content(p: &LaurentPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Exact division in the Laurent ring: returns `q` with `q·d = p`, or
/// [`AlgebraError::NotDivisible`] when no such quotient exists.
///
/// Greedy leading-term division is complete here because the lexicographic
/// order is multiplicative: when a quotient exists, its leading term is forced
/// at every step. Quotient terms are also confined to the exponent box
/// `[min(p) − min(d), max(p) − max(d)]` (componentwise, a consequence of
/// Newton-polygon corners multiplying), which both rejects non-divisible
/// inputs early and bounds the loop.
pub fn exact_div(p: &LaurentPoly, d: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
    if d.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let (pmin, pmax) = (p.min_exponents().unwrap(), p.max_exponents().unwrap());
    let (dmin, dmax) = (d.min_exponents().unwrap(), d.max_exponents().unwrap());
    let qmin = (pmin.0 - dmin.0, pmin.1 - dmin.1);
    let qmax = (pmax.0 - dmax.0, pmax.1 - dmax.1);
    if qmin.0 > qmax.0 || qmin.1 > qmax.1 {
        return Err(AlgebraError::NotDivisible);
    }

    let (&(dl, dm), dc) = d.leading().unwrap();
    let dlead = dc.clone();
    let mut r = p.clone();
    let mut q = LaurentPoly::zero();
    while let Some((&(rl, rm), rc)) = r.leading() {
        let (tl, tm) = (rl - dl, rm - dm);
        if tl < qmin.0 || tl > qmax.0 || tm < qmin.1 || tm > qmax.1 {
            return Err(AlgebraError::NotDivisible);
        }
        let (tc, rem) = rc.div_rem(&dlead);
        if !rem.is_zero() {
            return Err(AlgebraError::NotDivisible);
        }
        let t = LaurentPoly::monomial(tl, tm, tc);
        r = &r - &(&t * d);
        q = &q + &t;
    }
    Ok(q)
}

/// A greatest common divisor, in the canonical normalization: monomial-free,
/// positive leading coefficient (lexicographic order, `L` major), integer
/// content equal to the GCD of the two integer contents.
///
/// `poly_gcd(p, 0)` is the normalization of `p`; `poly_gcd(0, 0) = 0`.
pub fn poly_gcd(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => LaurentPoly::zero(),
        (false, true) => p.monomial_clear().expect("nonzero"),
        (true, false) => q.monomial_clear().expect("nonzero"),
        (false, false) => {
            let a = p.monomial_clear().expect("nonzero");
            let b = q.monomial_clear().expect("nonzero");
            structural_gcd(&a, &b)
        }
    }
}

/// GCD of two nonzero ordinary polynomials whose minimum exponents are (0, 0).
///
/// Splits off the content with respect to `L` (a GCD in `Z[M]`), takes the GCD
/// of the `L`-primitive parts — modular fast path first, pseudo-remainder
/// sequence as fallback — and recombines. The result is primitive in the
/// strong sense (unit content over `Z[M]` beyond the shared one) and gets a
/// positive leading coefficient.
fn structural_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.deg_l() == Some(0) && b.deg_l() == Some(0) {
        return gcd_zm(a, b);
    }
    let ca = content_wrt_l(a);
    let cb = content_wrt_l(b);
    let c = gcd_zm(&ca, &cb);
    let u = exact_div(a, &ca).expect("content divides its polynomial");
    let v = exact_div(b, &cb).expect("content divides its polynomial");
    let core = if u.deg_l() == Some(0) || v.deg_l() == Some(0) {
        // An L-primitive polynomial of L-degree zero is ±1.
        LaurentPoly::one()
    } else {
        super::modgcd::bivariate(&u, &v)
            .unwrap_or_else(|| prs_gcd_l(u.clone(), v.clone()))
    };
    let g = &c * &core;
    if g.leading().expect("gcd of nonzero inputs is nonzero").1.is_negative() {
        -&g
    } else {
        g
    }
}

/// Primitive pseudo-remainder sequence in `L` on `L`-primitive inputs.
fn prs_gcd_l(mut u: LaurentPoly, mut v: LaurentPoly) -> LaurentPoly {
    if u.deg_l() < v.deg_l() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        let r = pseudo_rem_l(&u, &v);
        u = v;
        v = primitive_wrt_l(&r);
    }
    u
}

/// True GCD in `Z[M]` of two polynomials with no `L` dependence, including
/// integer content and common `M`-power, with positive leading coefficient.
pub(super) fn gcd_zm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    debug_assert!(a.deg_l().unwrap_or(0) == 0 && b.deg_l().unwrap_or(0) == 0);
    if a.is_zero() || b.is_zero() {
        let g = if a.is_zero() { b } else { a };
        if g.is_zero() {
            return LaurentPoly::zero();
        }
        return if g.leading().unwrap().1.is_negative() { -g } else { g.clone() };
    }
    let (sa, sb) = (a.ord_m().unwrap(), b.ord_m().unwrap());
    let shift = sa.min(sb);
    let (ca, cb) = (content(a), content(b));
    let g_int = ca.gcd(&cb);
    let u = a.mul_monomial(0, -sa).divexact_scalar(&ca);
    let v = b.mul_monomial(0, -sb).divexact_scalar(&cb);
    let core = if u.deg_m() == Some(0) || v.deg_m() == Some(0) {
        // A primitive polynomial of degree zero is ±1.
        LaurentPoly::one()
    } else {
        super::modgcd::univariate(&u, &v)
            .unwrap_or_else(|| prs_gcd_m(u.clone(), v.clone()))
    };
    let g = core.mul_monomial(0, shift).scale(&g_int);
    if g.leading().expect("nonzero").1.is_negative() {
        -&g
    } else {
        g
    }
}

/// Primitive pseudo-remainder sequence in `M` on primitive `L`-free inputs.
fn prs_gcd_m(mut u: LaurentPoly, mut v: LaurentPoly) -> LaurentPoly {
    if u.deg_m() < v.deg_m() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        let r = pseudo_rem_m(&u, &v);
        u = v;
        v = if r.is_zero() {
            r
        } else {
            let c = content(&r);
            r.mul_monomial(0, -r.ord_m().unwrap()).divexact_scalar(&c)
        };
    }
    u
}

/// The coefficient of `L^k`, as a polynomial in `M` alone.
pub(super) fn l_coefficient(p: &LaurentPoly, k: i64) -> LaurentPoly {
    LaurentPoly::from_terms(
        p.terms()
            .filter(|(&(el, _), _)| el == k)
            .map(|(&(_, em), c)| ((0, em), c.clone())),
    )
}

/// The content with respect to `L`: the `Z[M]`-GCD of all `L`-coefficients.
pub(super) fn content_wrt_l(p: &LaurentPoly) -> LaurentPoly {
    let mut degs: Vec<i64> = p.terms().map(|(&(el, _), _)| el).collect();
    degs.dedup();
    let mut acc = LaurentPoly::zero();
    for k in degs {
        acc = gcd_zm(&acc, &l_coefficient(p, k));
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Divides out the full content with respect to `L` (`primitive_wrt_l(0) = 0`).
fn primitive_wrt_l(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    exact_div(p, &content_wrt_l(p)).expect("content divides its polynomial")
}

/// Pseudo-remainder with `L` as the main variable: repeatedly scales by the
/// divisor's leading `L`-coefficient and cancels the top `L`-power, so the
/// `L`-degree strictly drops each round.
fn pseudo_rem_l(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let db = b.deg_l().expect("pseudo-division by zero");
    let lcb = l_coefficient(b, db);
    let mut r = a.clone();
    loop {
        let dr = match r.deg_l() {
            Some(d) if d >= db => d,
            _ => return r,
        };
        let lcr = l_coefficient(&r, dr);
        r = &(&lcb * &r) - &(&lcr * &b.mul_monomial(dr - db, 0));
    }
}

/// Pseudo-remainder with `M` as the main variable, on `L`-free polynomials.
fn pseudo_rem_m(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let db = b.deg_m().expect("pseudo-division by zero");
    let lcb = b.coefficient(0, db);
    let mut r = a.clone();
    loop {
        let dr = match r.deg_m() {
            Some(d) if d >= db => d,
            _ => return r,
        };
        let lcr = r.coefficient(0, dr);
        r = &r.scale(&lcb) - &b.mul_monomial(0, dr - db).scale(&lcr);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(l, m, c)| ((l, m), BigInt::from(c))))
    }

    fn l_minus_m() -> LaurentPoly {
        p(&[(1, 0, 1), (0, 1, -1)])
    }

    fn l_plus_m() -> LaurentPoly {
        p(&[(1, 0, 1), (0, 1, 1)])
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&LaurentPoly::zero()), BigInt::zero());
        assert_eq!(content(&p(&[(1, 0, 6), (0, 1, -21)])), BigInt::from(3));
        assert_eq!(content(&p(&[(1, 0, -4), (0, 0, -6)])), BigInt::from(2));
    }

    #[test]
    fn exact_div_difference_of_squares() {
        let num = p(&[(2, 0, 1), (0, 2, -1)]);
        assert_eq!(exact_div(&num, &l_minus_m()).unwrap(), l_plus_m());
    }

    #[test]
    fn exact_div_detects_non_divisibility() {
        let num = p(&[(2, 0, 1), (0, 2, -1)]);
        let den = p(&[(1, 0, 1), (0, 1, -2)]);
        assert_eq!(exact_div(&num, &den), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn exact_div_self_is_one() {
        let a = p(&[(3, -2, 5), (0, 1, -1), (-1, -1, 4)]);
        assert!(exact_div(&a, &a).unwrap().is_one());
    }

    #[test]
    fn exact_div_by_zero_and_of_zero() {
        let a = l_minus_m();
        assert_eq!(
            exact_div(&a, &LaurentPoly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
        assert!(exact_div(&LaurentPoly::zero(), &a).unwrap().is_zero());
    }

    #[test]
    fn exact_div_produces_laurent_quotients() {
        // (L⁻¹ − L) ÷ (1 − L²) = L⁻¹.
        let num = p(&[(-1, 0, 1), (1, 0, -1)]);
        let den = p(&[(0, 0, 1), (2, 0, -1)]);
        assert_eq!(exact_div(&num, &den).unwrap(), p(&[(-1, 0, 1)]));
    }

    #[test]
    fn exact_div_checks_coefficient_divisibility() {
        let num = p(&[(1, 0, 3)]);
        let den = p(&[(0, 0, 2)]);
        assert_eq!(exact_div(&num, &den), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let a = p(&[(2, 1, -2), (1, 2, 2)]); // −2L²M + 2LM² = −2LM·(L − M)
        let g = poly_gcd(&a, &LaurentPoly::zero());
        assert_eq!(g, p(&[(1, 0, 2), (0, 1, -2)])); // 2L − 2M
        assert_eq!(poly_gcd(&LaurentPoly::zero(), &LaurentPoly::zero()), LaurentPoly::zero());
    }

    #[test]
    fn gcd_of_shared_linear_factor() {
        // gcd((L−M)(M²−1), (L−M)·L) = L − M.
        let m2_minus_1 = p(&[(0, 2, 1), (0, 0, -1)]);
        let a = &l_minus_m() * &m2_minus_1;
        let b = &l_minus_m() * &LaurentPoly::var_l();
        assert_eq!(poly_gcd(&a, &b), l_minus_m());
        assert_eq!(poly_gcd(&b, &a), l_minus_m());
    }

    #[test]
    fn gcd_of_constants_is_integer_gcd() {
        assert_eq!(
            poly_gcd(&LaurentPoly::constant(6), &LaurentPoly::constant(21)),
            LaurentPoly::constant(3)
        );
    }

    #[test]
    fn gcd_of_coprime_inputs_is_one() {
        assert!(poly_gcd(&l_plus_m(), &l_minus_m()).is_one());
    }

    #[test]
    fn gcd_keeps_integer_content() {
        // gcd(2(M−1)(M+1), 4(M−1)) = 2(M−1).
        let a = p(&[(0, 2, 2), (0, 0, -2)]);
        let b = p(&[(0, 1, 4), (0, 0, -4)]);
        assert_eq!(poly_gcd(&a, &b), p(&[(0, 1, 2), (0, 0, -2)]));
    }

    #[test]
    fn gcd_strips_monomial_units_from_the_answer() {
        // A = M⁴ − L² and B = M³ − L²M share no factor, so
        // gcd(A·B, B²) = B normalized = L² − M² after clearing M and sign.
        let a_form = p(&[(0, 4, 1), (2, 0, -1)]);
        let b_form = p(&[(0, 3, 1), (2, 1, -1)]);
        let g = poly_gcd(&(&a_form * &b_form), &(&b_form * &b_form));
        assert_eq!(g, p(&[(2, 0, 1), (0, 2, -1)]));
    }

    #[test]
    fn gcd_divides_both_inputs() {
        let a = &(&l_plus_m() * &l_minus_m()) * &p(&[(0, 1, 3), (0, 0, 1)]);
        let b = &l_minus_m() * &p(&[(1, 1, 2), (0, 0, 5)]);
        let g = poly_gcd(&a, &b);
        assert!(exact_div(&a, &g).is_ok());
        assert!(exact_div(&b, &g).is_ok());
    }

    #[test]
    fn gcd_scales_with_a_common_factor() {
        // gcd(p·r, q·r) = gcd(p, q)·r up to normalization; here gcd(p, q) = 1.
        let r = p(&[(1, 1, 1), (0, 0, 7)]);
        let a = &l_plus_m() * &r;
        let b = &l_minus_m() * &r;
        assert_eq!(poly_gcd(&a, &b), r);
    }
}
