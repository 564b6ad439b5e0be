//! Independent verification of the elimination pipeline.
//!
//! The recursive-substitution route in [`crate::eliminate`] is fast but
//! monolithic, so this module cross-checks it two ways that share none of its
//! machinery:
//!
//! * **Resultants.** For fillings whose folded Ptolemy system is small, the
//!   γ unknowns are eliminated by iterated Sylvester resultants computed with
//!   fraction-free (Bareiss) determinants. Elimination theory guarantees the
//!   output vanishes on the same variety, so the computed A-polynomial must
//!   divide it exactly — divisibility, not equality, because resultants
//!   introduce their own extraneous factors.
//! * **Numeric sampling.** Roots of a computed polynomial at random `M₀` are
//!   found numerically and pushed back through the γ chain; every Ptolemy
//!   equation and the folding equation must vanish to within a small relative
//!   residual.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{exact_div, AlgebraError, LaurentPoly};
use crate::eliminate::{standard_basis_n, APolyResult, Basis, EliminateError};
use crate::farey::{walk_to, FareyError, Slope};
use crate::ptolemy::{
    lst_equations, tet_ptolemy_equation, GammaVar, ParentData, PtolemyEquation, PtolemyError,
};

/// Relative residual accepted when sampling roots numerically.
pub const RESIDUAL_THRESHOLD: f64 = 1e-8;

/// Errors surfaced by the verification oracles.
#[derive(Debug, Error)]
pub enum OracleError {
    /// Both resultant inputs were constant in the eliminand.
    #[error("resultant requires at least one input of positive degree")]
    BothConstant,

    /// An intermediate resultant vanished identically; the elimination order
    /// cannot continue and no output is guessed.
    #[error("resultant vanished identically while eliminating {stage}")]
    EliminationCollapse {
        /// The γ variable being eliminated when the collapse happened.
        stage: String,
    },

    /// The folded system has too many unknowns for resultant elimination.
    #[error("slope {slope} leaves {unknowns} \u{03b3} unknowns after folding; resultant elimination handles at most 4")]
    SystemTooLarge {
        /// The requested filling slope.
        slope: Slope,
        /// Number of γ unknowns after seeding and folding.
        unknowns: usize,
    },

    /// An algebra-layer failure (zero polynomial, failed division, …).
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    /// The walk to the slope could not be built.
    #[error(transparent)]
    Walk(#[from] FareyError),

    /// The Ptolemy system could not be generated.
    #[error(transparent)]
    Ptolemy(#[from] PtolemyError),

    /// A pipeline-level failure while preparing inputs.
    #[error(transparent)]
    Eliminate(#[from] EliminateError),
}

// ---------------------------------------------------------------------------
// Polynomials in the γ variables.
// ---------------------------------------------------------------------------

/// A polynomial in finitely many γ variables with Laurent-polynomial
/// coefficients, ordered lexicographically by exponent vector.
///
/// Keys are exponent vectors with trailing zeros trimmed, so a key is a
/// canonical name for a γ monomial regardless of how many variables are in
/// scope; the empty key is the constant term. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GammaPoly {
    terms: BTreeMap<Vec<u16>, LaurentPoly>,
}

fn trim_key(mut key: Vec<u16>) -> Vec<u16> {
    while key.last() == Some(&0) {
        key.pop();
    }
    key
}

impl GammaPoly {
    fn zero() -> Self {
        GammaPoly { terms: BTreeMap::new() }
    }

    fn constant(c: LaurentPoly) -> Self {
        let mut g = GammaPoly::zero();
        g.add_term(Vec::new(), c);
        g
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: Vec<u16>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let key = trim_key(key);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = GammaPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut key = vec![0u16; ka.len().max(kb.len())];
                for (i, slot) in key.iter_mut().enumerate() {
                    *slot = ka.get(i).copied().unwrap_or(0) + kb.get(i).copied().unwrap_or(0);
                }
                out.add_term(key, ca * cb);
            }
        }
        out
    }

    /// Degree in variable `v` (0 for the zero polynomial).
    fn deg_in(&self, v: usize) -> u16 {
        self.terms
            .keys()
            .map(|k| k.get(v).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// The coefficient of `γ_v^k`, as a polynomial in the other variables.
    fn coeff_of_power(&self, v: usize, k: u16) -> Self {
        let mut out = GammaPoly::zero();
        for (key, c) in &self.terms {
            if key.get(v).copied().unwrap_or(0) == k {
                let mut rest = key.clone();
                if v < rest.len() {
                    rest[v] = 0;
                }
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Exact division, panicking when no quotient exists: Bareiss guarantees
    /// its intermediate divisions are exact, so a failure here is a broken
    /// invariant rather than a caller error.
    fn div_exact(&self, d: &Self) -> Self {
        let (dk, dc) = d.terms.iter().next_back().expect("division by zero GammaPoly");
        let mut r = self.clone();
        let mut q = GammaPoly::zero();
        while let Some((rk, rc)) = r.terms.iter().next_back() {
            let mut key = vec![0u16; rk.len()];
            for (i, slot) in key.iter_mut().enumerate() {
                let a = rk.get(i).copied().unwrap_or(0);
                let b = dk.get(i).copied().unwrap_or(0);
                assert!(a >= b, "fraction-free elimination produced a non-exact division");
                *slot = a - b;
            }
            let c = exact_div(rc, dc)
                .expect("fraction-free elimination produced a non-exact division");
            let mut t = GammaPoly::zero();
            t.add_term(key, c);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        q
    }

    /// Extracts a γ-free polynomial; panics if any γ variable survives.
    fn into_laurent(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (key, c) in self.terms {
            assert!(key.is_empty(), "expected all \u{03b3} variables eliminated");
            out = &out + &c;
        }
        out
    }

    /// Divides out the integer content and the common `L^a M^b` monomial —
    /// unit factors that cannot contain any polynomial of interest, removed to
    /// keep iterated resultants small.
    fn reduce_units(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let mut int_content = BigInt::zero();
        let mut min_l = i64::MAX;
        let mut min_m = i64::MAX;
        for c in self.terms.values() {
            for (&(el, em), a) in c.terms() {
                min_l = min_l.min(el);
                min_m = min_m.min(em);
                if !int_content.is_one() {
                    int_content = int_content.gcd(a);
                }
            }
        }
        let terms = self
            .terms
            .into_iter()
            .map(|(k, c)| {
                let shifted = c.mul_monomial(-min_l, -min_m);
                (k, shifted.divexact_scalar(&int_content))
            })
            .collect();
        GammaPoly { terms }
    }
}

/// Sylvester resultant of `f` and `g` with respect to variable `v`, computed
/// as a fraction-free Bareiss determinant. Inputs of zero degree in `v`
/// contribute the classical `g₀^{deg f}` convention.
fn resultant_gamma(f: &GammaPoly, g: &GammaPoly, v: usize) -> GammaPoly {
    let m = f.deg_in(v) as usize;
    let n = g.deg_in(v) as usize;
    let size = m + n;
    if size == 0 {
        return GammaPoly::constant(LaurentPoly::one());
    }
    let fc: Vec<GammaPoly> = (0..=m).map(|k| f.coeff_of_power(v, k as u16)).collect();
    let gc: Vec<GammaPoly> = (0..=n).map(|k| g.coeff_of_power(v, k as u16)).collect();
    let mut mat = vec![vec![GammaPoly::zero(); size]; size];
    for i in 0..n {
        for t in 0..=m {
            mat[i][i + t] = fc[m - t].clone();
        }
    }
    for j in 0..m {
        for t in 0..=n {
            mat[n + j][j + t] = gc[n - t].clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant by Bareiss fraction-free elimination; every interior division
/// is exact by construction and asserted to be so.
fn bareiss_det(mut mat: Vec<Vec<GammaPoly>>) -> GammaPoly {
    let size = mat.len();
    let mut negate = false;
    let mut prev = GammaPoly::constant(LaurentPoly::one());
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return GammaPoly::zero();
            };
            mat.swap(k, swap);
            negate = !negate;
        }
        if k + 1 == size {
            break;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.div_exact(&prev);
            }
            mat[i][k] = GammaPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if negate {
        GammaPoly::zero().sub(&det)
    } else {
        det
    }
}

// ---------------------------------------------------------------------------
// Public resultant interface.
// ---------------------------------------------------------------------------

/// A univariate polynomial in a distinguished eliminand variable whose
/// coefficients are Laurent polynomials in `L`, `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPolyOverPoly {
    /// Coefficients by ascending power of the eliminand; the last is nonzero.
    coefficients: Vec<LaurentPoly>,
}

impl UniPolyOverPoly {
    /// Builds from coefficients by ascending power, trimming leading zeros.
    /// The zero polynomial is rejected.
    pub fn new(mut coefficients: Vec<LaurentPoly>) -> Result<Self, OracleError> {
        while coefficients.last().map_or(false, LaurentPoly::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            return Err(OracleError::Algebra(AlgebraError::ZeroPolynomial));
        }
        Ok(UniPolyOverPoly { coefficients })
    }

    /// Degree in the eliminand.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficients by ascending power of the eliminand.
    pub fn coefficients(&self) -> &[LaurentPoly] {
        &self.coefficients
    }

    fn to_gamma(&self) -> GammaPoly {
        let mut g = GammaPoly::zero();
        for (k, c) in self.coefficients.iter().enumerate() {
            g.add_term(vec![k as u16], c.clone());
        }
        g
    }
}

/// The Sylvester resultant of `f` and `g` in their eliminand, an exact
/// fraction-free determinant. Vanishes exactly when the two share a root over
/// the fraction field (or both leading terms degenerate).
pub fn sylvester_resultant(
    f: &UniPolyOverPoly,
    g: &UniPolyOverPoly,
) -> Result<LaurentPoly, OracleError> {
    if f.degree() == 0 && g.degree() == 0 {
        return Err(OracleError::BothConstant);
    }
    Ok(resultant_gamma(&f.to_gamma(), &g.to_gamma(), 0).into_laurent())
}

// ---------------------------------------------------------------------------
// Resultant elimination of small folded systems.
// ---------------------------------------------------------------------------

/// Eliminates every γ unknown from the folded Ptolemy system of `slope` by
/// iterated resultants and returns the resulting polynomial in `L`, `M`.
///
/// The system is seeded (`γ` of the removed edge is 1) and folded (the final
/// fan variable is replaced by its pivot), then variables are eliminated
/// last-introduced first — chain headings from the deepest step down, then
/// `1/0`, with `4/1` resolved by the final resultant. Only unit factors
/// (integers and `L^a M^b` monomials) are stripped between stages, so any
/// polynomial vanishing on the filling variety still divides the output.
pub fn resultant_eliminate(data: &ParentData, slope: Slope) -> Result<LaurentPoly, OracleError> {
    let walk = walk_to(slope)?;
    let (lst, _) = lst_equations(data, &walk)?;
    let (fold_pivot, fold_fan) = walk.fold_edge;

    // Variable order: 4/1, 1/0, then chain headings except the folded fan.
    let mut var_slopes: Vec<Slope> = vec![
        Slope::new(4, 1).expect("valid slope"),
        Slope::infinity(),
    ];
    for step in &walk.steps {
        if step.heading != fold_fan {
            var_slopes.push(step.heading);
        }
    }
    if var_slopes.len() > 4 {
        return Err(OracleError::SystemTooLarge { slope, unknowns: var_slopes.len() });
    }
    let index: BTreeMap<Slope, usize> =
        var_slopes.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let resolve = |gv: &GammaVar| -> Option<usize> {
        let s = match gv {
            GammaVar::One(_) => return None,
            GammaVar::Var(s) => *s,
        };
        let s = if s == fold_fan {
            if fold_pivot == data.removed_edge() {
                return None;
            }
            fold_pivot
        } else {
            s
        };
        Some(*index.get(&s).expect("every equation slope is a known variable"))
    };

    let mut system: Vec<GammaPoly> = Vec::new();
    for tet in data.outside_tets() {
        system.push(equation_to_gamma(&tet_ptolemy_equation(data, tet)?, &resolve));
    }
    for eq in &lst {
        system.push(equation_to_gamma(eq, &resolve));
    }

    for v in (0..var_slopes.len()).rev() {
        let stage = format!("\u{03b3}[{}]", var_slopes[v]);
        let (with_v, mut rest): (Vec<GammaPoly>, Vec<GammaPoly>) =
            system.into_iter().partition(|p| p.deg_in(v) > 0);
        if with_v.len() < 2 {
            return Err(OracleError::EliminationCollapse { stage });
        }
        let pivot = with_v.last().expect("nonempty").clone();
        for other in &with_v[..with_v.len() - 1] {
            let r = resultant_gamma(&pivot, other, v).reduce_units();
            if r.is_zero() {
                return Err(OracleError::EliminationCollapse { stage });
            }
            rest.push(r);
        }
        system = rest;
    }

    let mut product = LaurentPoly::one();
    for p in system {
        product = &product * &p.into_laurent();
    }
    Ok(product)
}

/// Converts a Ptolemy relation into a polynomial over the γ variables,
/// multiplying through by a monomial so no negative `L`, `M` exponents remain.
fn equation_to_gamma(
    eq: &PtolemyEquation,
    resolve: &dyn Fn(&GammaVar) -> Option<usize>,
) -> GammaPoly {
    let key_of = |a: &GammaVar, b: &GammaVar| -> Vec<u16> {
        let mut key = Vec::new();
        for gv in [a, b] {
            if let Some(i) = resolve(gv) {
                if key.len() <= i {
                    key.resize(i + 1, 0);
                }
                key[i] += 1;
            }
        }
        key
    };
    let mut g = GammaPoly::zero();
    let mut min_l = 0i64;
    let mut min_m = 0i64;
    for t in &eq.terms {
        min_l = min_l.min(t.exp_l);
        min_m = min_m.min(t.exp_m);
    }
    for t in &eq.terms {
        g.add_term(
            key_of(&t.factors.0, &t.factors.1),
            LaurentPoly::monomial(t.exp_l - min_l, t.exp_m - min_m, i64::from(t.sign)),
        );
    }
    g.add_term(
        key_of(&eq.neg_factors.0, &eq.neg_factors.1),
        LaurentPoly::monomial(-min_l, -min_m, -1),
    );
    g
}

// ---------------------------------------------------------------------------
// Numeric residual sampling.
// ---------------------------------------------------------------------------

/// One sampled `M₀` value and the outcome over all roots found there.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidualTrial {
    /// `M₀` as `(re, im)`.
    pub m0: (f64, f64),
    /// Roots of the polynomial at this `M₀` that passed root-quality checks.
    pub roots: usize,
    /// Roots skipped (poor convergence or near a chain pole).
    pub skipped: usize,
    /// Largest relative residual over all equations and checked roots.
    pub max_residual: f64,
}

/// Outcome of pushing a result's numeric roots back through the γ chain.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    /// Slope of the verified result.
    pub slope: Slope,
    /// Basis the polynomial was produced (and verified) in.
    pub basis: Basis,
    /// Acceptance threshold for relative residuals.
    pub threshold: f64,
    /// Per-trial outcomes.
    pub trials: Vec<ResidualTrial>,
    /// Total roots checked across all trials.
    pub roots_checked: usize,
    /// Total roots skipped across all trials.
    pub skipped_roots: usize,
    /// Largest relative residual seen.
    pub max_residual: f64,
    /// Whether at least one root was checked and all residuals passed.
    pub passed: bool,
}

/// Samples `trials` random `M₀` on the annulus `0.5 < |M₀| < 2`, finds the
/// roots `L₀` of the result polynomial at each, evaluates the γ chain there,
/// and reports the largest relative residual over every Ptolemy equation and
/// the folding equation. Numeric failures are reported, never raised.
pub fn numeric_residual(
    data: &ParentData,
    result: &APolyResult,
    trials: usize,
    seed: u64,
) -> Result<ResidualReport, OracleError> {
    let walk = walk_to(result.slope)?;
    let (lst, _) = lst_equations(data, &walk)?;
    let exterior: Vec<PtolemyEquation> = data
        .outside_tets()
        .into_iter()
        .map(|t| tet_ptolemy_equation(data, t))
        .collect::<Result<_, _>>()?;
    let forms = data.outside_forms()?;
    let unit = data.removed_edge();

    // In the standard basis the polynomial's L is the filled-cusp holonomy
    // coordinate; the chain lives in triangulation coordinates, related by
    // L_tri = L · M^(8−25n) for slope ±1/n.
    let l_shift: i32 = match result.basis {
        Basis::Triangulation => 0,
        Basis::Standard => {
            let n = standard_basis_n(result.slope)
                .ok_or(EliminateError::BasisUnavailable { slope: result.slope })?;
            (8 - 25 * n) as i32
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ResidualReport {
        slope: result.slope,
        basis: result.basis,
        threshold: RESIDUAL_THRESHOLD,
        trials: Vec::with_capacity(trials),
        roots_checked: 0,
        skipped_roots: 0,
        max_residual: 0.0,
        passed: false,
    };

    for _ in 0..trials {
        let radius = rng.random_range(0.5f64..2.0);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let m0 = Complex64::from_polar(radius, angle);
        let mut trial = ResidualTrial { m0: (m0.re, m0.im), roots: 0, skipped: 0, max_residual: 0.0 };

        let m0_fix = BigC::from_c64(m0);
        let mut mpow: PowCache = BTreeMap::new();
        let mut coeffs = univariate_in_l(&result.polynomial, &m0_fix, &mut mpow);
        if coeffs.len() < 2 {
            report.trials.push(trial);
            continue;
        }
        // Root-find in chain coordinates: substituting L = M^(25n−8)·L'
        // multiplies coefficient k by m0^((25n−8)k) exactly, and the
        // substituted roots are the chain inputs themselves. In the standard
        // basis this also collapses the coefficients' thousand-bit magnitude
        // spread — which would sink the f64 seeding stage — back to the
        // triangulation-coordinate scale.
        if l_shift != 0 {
            let scale = cached_pow(&m0_fix, -i64::from(l_shift), &mut mpow).expect("m0 is nonzero");
            let mut power = BigC::one();
            for c in coeffs.iter_mut().skip(1) {
                power = power.mul(&scale);
                *c = c.mul(&power);
            }
        }
        let (roots, dropped) = fixed_point_roots(&coeffs);
        trial.skipped += dropped;
        for root in roots {
            let l_tri = root;
            let mut lpow: PowCache = BTreeMap::new();
            match chain_residual(
                &walk, &lst, &exterior, &forms, unit, &l_tri, &m0_fix, &mut lpow, &mut mpow,
            ) {
                Some(res) => {
                    trial.roots += 1;
                    trial.max_residual = trial.max_residual.max(res);
                }
                None => trial.skipped += 1,
            }
        }
        report.roots_checked += trial.roots;
        report.skipped_roots += trial.skipped;
        report.max_residual = report.max_residual.max(trial.max_residual);
        report.trials.push(trial);
    }
    report.passed = report.roots_checked > 0 && report.max_residual < report.threshold;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Arbitrary-precision complex floating arithmetic.
//
// A root of the result polynomial feeds a chain of rational-function
// evaluations whose conditioning collapses near the closed forms' poles
// (M² = 1, L² = M²): the layered values there are quotients of
// near-cancelling sums, and on unlucky draws the folding difference
// amplifies root error by factors beyond 10²⁰. No machine-float format can
// certify the 1e−8 threshold through that, so root polishing and the whole
// chain run in software floats: complex numbers with `BigInt` mantissas and
// a shared binary exponent, carrying ~320 mantissa bits (≈96 decimal
// digits) with unbounded exponent range — the standard-basis polynomials
// reach M-degrees in the hundreds, so evaluations routinely visit 2^±800.
// ---------------------------------------------------------------------------

/// Mantissa bits retained after each renormalization.
const PREC: u64 = 320;

/// `(re + i·im) · 2^exp` with both mantissas sharing one exponent and the
/// larger mantissa held to [`PREC`] bits.
#[derive(Clone, Debug)]
struct BigC {
    re: BigInt,
    im: BigInt,
    exp: i64,
}

/// Exact `(mantissa, exponent)` decomposition of a finite `f64`; zero and
/// non-finite inputs decompose to zero.
fn f64_parts(x: f64) -> (BigInt, i64) {
    if x == 0.0 || !x.is_finite() {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let frac = bits & ((1u64 << 52) - 1);
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let (mant, exp) = if biased == 0 { (frac, -1074i64) } else { (frac | (1u64 << 52), biased - 1075) };
    let v = BigInt::from(mant);
    (if x < 0.0 { -v } else { v }, exp)
}

/// Nearest `f64` to `v · 2^exp`, saturating (to `±∞` or `±0`) outside the
/// float range instead of panicking.
fn parts_to_f64(v: &BigInt, exp: i64) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let bits = v.bits() as i64;
    let mag = if bits > 63 {
        (v.magnitude() >> ((bits - 63) as u64)).to_u64().expect("63-bit window")
    } else {
        v.magnitude().to_u64().expect("small magnitude")
    };
    let e = ((bits - 63).max(0) + exp).clamp(-3000, 3000);
    // Two half-sized steps so the intermediate scale cannot overflow.
    let mut x = mag as f64;
    x *= f64::powi(2.0, (e / 2) as i32);
    x *= f64::powi(2.0, (e - e / 2) as i32);
    if v.sign() == num_bigint::Sign::Minus {
        -x
    } else {
        x
    }
}

impl BigC {
    fn zero() -> BigC {
        BigC { re: BigInt::zero(), im: BigInt::zero(), exp: 0 }
    }

    fn one() -> BigC {
        BigC { re: BigInt::one(), im: BigInt::zero(), exp: 0 }
    }

    fn from_c64(z: Complex64) -> BigC {
        let (rm, re_e) = f64_parts(z.re);
        let (im_m, im_e) = f64_parts(z.im);
        let re_e = if rm.is_zero() { i64::MAX } else { re_e };
        let im_e = if im_m.is_zero() { i64::MAX } else { im_e };
        let exp = re_e.min(im_e);
        if exp == i64::MAX {
            return BigC::zero();
        }
        let re = if rm.is_zero() { rm } else { rm << ((re_e - exp) as u64) };
        let im = if im_m.is_zero() { im_m } else { im_m << ((im_e - exp) as u64) };
        BigC { re, im, exp }.normalized()
    }

    #[cfg(test)]
    fn to_c64(&self) -> Complex64 {
        Complex64::new(parts_to_f64(&self.re, self.exp), parts_to_f64(&self.im, self.exp))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Shifts the larger mantissa back down to [`PREC`] bits.
    fn normalized(mut self) -> BigC {
        let b = self.re.bits().max(self.im.bits());
        if b == 0 {
            self.exp = 0;
        } else if b > PREC {
            let s = b - PREC;
            self.re >>= s;
            self.im >>= s;
            self.exp += s as i64;
        }
        self
    }

    fn add(&self, o: &BigC) -> BigC {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let sa = self.re.bits().max(self.im.bits()) as i64 + self.exp;
        let sb = o.re.bits().max(o.im.bits()) as i64 + o.exp;
        // Absorb a negligible addend instead of materializing a huge shift.
        if sa - sb > PREC as i64 + 64 {
            return self.clone();
        }
        if sb - sa > PREC as i64 + 64 {
            return o.clone();
        }
        let exp = self.exp.min(o.exp);
        let da = (self.exp - exp) as u64;
        let db = (o.exp - exp) as u64;
        BigC { re: (&self.re << da) + (&o.re << db), im: (&self.im << da) + (&o.im << db), exp }
            .normalized()
    }

    fn sub(&self, o: &BigC) -> BigC {
        self.add(&BigC { re: -&o.re, im: -&o.im, exp: o.exp })
    }

    fn mul(&self, o: &BigC) -> BigC {
        BigC {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            exp: self.exp + o.exp,
        }
        .normalized()
    }

    /// Multiplication by an integer; exact up to renormalization.
    fn scale_int(&self, c: &BigInt) -> BigC {
        BigC { re: &self.re * c, im: &self.im * c, exp: self.exp }.normalized()
    }

    /// `None` exactly when `o` is zero. The guard shift is sized so even the
    /// smaller quotient component keeps [`PREC`] significant bits.
    fn div(&self, o: &BigC) -> Option<BigC> {
        let d = &o.re * &o.re + &o.im * &o.im;
        if d.is_zero() {
            return None;
        }
        let nre = &self.re * &o.re + &self.im * &o.im;
        let nim = &self.im * &o.re - &self.re * &o.im;
        let nb = match (nre.is_zero(), nim.is_zero()) {
            (true, true) => return Some(BigC::zero()),
            (false, true) => nre.bits(),
            (true, false) => nim.bits(),
            _ => nre.bits().min(nim.bits()),
        };
        let g = (d.bits() + PREC).saturating_sub(nb);
        Some(
            BigC { re: (nre << g) / &d, im: (nim << g) / &d, exp: self.exp - o.exp - g as i64 }
                .normalized(),
        )
    }

    fn powi(&self, e: i64) -> Option<BigC> {
        if e < 0 {
            return BigC::one().div(&self.powi(-e)?);
        }
        let mut acc = BigC::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Some(acc)
    }

    /// `|self|` as an `f64`, saturating far outside the float range.
    fn norm(&self) -> f64 {
        let ns = &self.re * &self.re + &self.im * &self.im;
        parts_to_f64(&ns, 2 * self.exp).sqrt()
    }
}

/// ~`log2|v|`, `−∞` for zero; half-bit accuracy, which is plenty for
/// certificate margins measured in tens of bits.
fn log2_mag(v: &BigC) -> f64 {
    let ns = &v.re * &v.re + &v.im * &v.im;
    if ns.is_zero() {
        return f64::NEG_INFINITY;
    }
    ns.bits() as f64 / 2.0 + v.exp as f64
}

/// Memoized integer powers of one base; the chain and the equations reuse a
/// small set of exponents thousands of times per trial.
type PowCache = BTreeMap<i64, BigC>;

/// `None` only for negative powers of zero.
fn cached_pow(base: &BigC, e: i64, cache: &mut PowCache) -> Option<BigC> {
    if let Some(v) = cache.get(&e) {
        return Some(v.clone());
    }
    let v = base.powi(e)?;
    cache.insert(e, v.clone());
    Some(v)
}

/// Polynomial evaluation in software floats with shared power caches.
fn eval_poly_fix(
    p: &LaurentPoly,
    l: &BigC,
    m: &BigC,
    lpow: &mut PowCache,
    mpow: &mut PowCache,
) -> Option<BigC> {
    let mut acc = BigC::zero();
    for (&(el, em), c) in p.terms() {
        let t = cached_pow(l, el, lpow)?.mul(&cached_pow(m, em, mpow)?).scale_int(c);
        acc = acc.add(&t);
    }
    Some(acc)
}

/// Coefficients of the polynomial as a univariate in `L` at `M = m0`,
/// ascending from the smallest `L` exponent (that monomial shift never moves
/// roots: `L = 0` is not on the variety).
fn univariate_in_l(poly: &LaurentPoly, m0: &BigC, mpow: &mut PowCache) -> Vec<BigC> {
    let Some((lmin, _)) = poly.min_exponents() else {
        return Vec::new();
    };
    let (lmax, _) = poly.max_exponents().expect("nonzero");
    let mut coeffs = vec![BigC::zero(); (lmax - lmin + 1) as usize];
    for (&(el, em), c) in poly.terms() {
        let idx = (el - lmin) as usize;
        let t = cached_pow(m0, em, mpow).expect("m0 is nonzero").scale_int(c);
        coeffs[idx] = coeffs[idx].add(&t);
    }
    while coeffs.last().map_or(false, BigC::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// All roots of the univariate: f64 Aberth–Ehrlich from Bini-style initial
/// guesses, then Newton in software floats. Returns the refined roots plus
/// the number of seeds that had to be dropped.
fn fixed_point_roots(coeffs: &[BigC]) -> (Vec<BigC>, usize) {
    let view = seeding_view(coeffs);
    let seeds = aberth_roots(&view);
    let mut out = Vec::with_capacity(seeds.len());
    let mut dropped = coeffs.len() - 1 - seeds.len();
    for s in seeds {
        match refine_root(coeffs, s) {
            Some(z) => out.push(z),
            None => dropped += 1,
        }
    }
    (out, dropped)
}

/// f64 snapshot of the coefficients for seeding, scaled by one common power
/// of two that lands the largest coefficient near unit magnitude. A uniform
/// scale does not move roots, and it keeps snapshots of uniformly huge or
/// tiny coefficient sets — routine in the standard basis — inside the
/// float range.
fn seeding_view(coeffs: &[BigC]) -> Vec<Complex64> {
    let common = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.re.bits().max(c.im.bits()) as i64 + c.exp)
        .max()
        .unwrap_or(0);
    coeffs
        .iter()
        .map(|c| {
            Complex64::new(parts_to_f64(&c.re, c.exp - common), parts_to_f64(&c.im, c.exp - common))
        })
        .collect()
}

/// Initial root guesses on circles whose radii come from the upper convex
/// hull of `(k, ln|c_k|)` — one circle per hull edge, edge width many points
/// — so clusters of wildly different magnitudes all start near their own
/// scale instead of on one shared ring.
fn bini_seeds(coeffs: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(k, u) in &pts {
        while hull.len() >= 2 {
            let (k1, u1) = hull[hull.len() - 2];
            let (k2, u2) = hull[hull.len() - 1];
            let cross = (k2 - k1) as f64 * (u - u1) - (u2 - u1) * (k - k1) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((k, u));
    }
    let mut seeds = Vec::with_capacity(coeffs.len() - 1);
    for (seg, pair) in hull.windows(2).enumerate() {
        let (k1, u1) = pair[0];
        let (k2, u2) = pair[1];
        let width = k2 - k1;
        let radius = ((u1 - u2) / width as f64).exp().clamp(1e-6, 1e6);
        for j in 0..width {
            let angle = std::f64::consts::TAU * j as f64 / width as f64 + 0.45 + 1.7 * seg as f64;
            seeds.push(Complex64::from_polar(radius, angle));
        }
    }
    seeds
}

/// Simultaneous Aberth–Ehrlich iteration in f64; robust enough on clustered
/// and magnitude-spread roots to hand every root a basin-correct seed.
fn aberth_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if !(max.is_finite() && max > 0.0) {
        return Vec::new();
    }
    let a: Vec<Complex64> = coeffs.iter().map(|c| c / max).collect();
    let mut z = bini_seeds(&a);
    let n = z.len();
    for _ in 0..400 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(&a, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-6, 1e-6) };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    } else {
                        z[i] += Complex64::new(1e-7, 2e-7);
                    }
                }
            }
            let den = Complex64::new(1.0, 0.0) - w * s;
            let dz = if den.norm() < 1e-16 { w } else { w / den };
            z[i] -= dz;
            worst = worst.max(dz.norm() / (1.0 + z[i].norm()));
        }
        if worst < 1e-12 {
            break;
        }
    }
    z
}

fn horner_with_derivative(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton-polishes an f64 seed in software floats. Iteration stops on a tiny
/// step, or on stagnation once steps are already small (clustered roots pin
/// the reachable step at eval-noise divided by a tiny derivative, well above
/// the step tolerance). Acceptance rests solely on the backward-error
/// certificate — compared in the log domain so uniformly huge or tiny
/// coefficient scales cannot underflow the comparison — so a bad seed can
/// never masquerade as a pipeline failure downstream.
fn refine_root(coeffs: &[BigC], seed: Complex64) -> Option<BigC> {
    let mut z = BigC::from_c64(seed);
    let step_tol = f64::powi(2.0, -(PREC as i32 - 48));
    let mut best = f64::INFINITY;
    let mut stagnant = 0;
    // The budget covers linear convergence at multiple roots: a step that
    // only halves per iteration still crosses the certificate's ~2⁻¹²⁸
    // distance requirement well within 256 iterations, and simple roots
    // converge quadratically in a handful anyway.
    for _ in 0..256 {
        let (p, dp) = horner_with_derivative_fix(coeffs, &z);
        let dz = p.div(&dp)?;
        z = z.sub(&dz);
        let step = dz.norm();
        let span = 1.0 + z.norm();
        if step <= step_tol * span {
            break;
        }
        // Stagnation means no new best step for a while once steps are
        // already small — a criterion linear convergence (steps shrinking by
        // any fixed ratio) never trips, unlike a step-to-step ratio test.
        if step < 1e-10 * span && step > 0.9 * best {
            stagnant += 1;
            if stagnant >= 6 {
                break;
            }
        } else {
            stagnant = 0;
        }
        best = best.min(step);
    }
    let (p, _) = horner_with_derivative_fix(coeffs, &z);
    let lp = log2_mag(&p);
    if lp == f64::NEG_INFINITY {
        return Some(z);
    }
    let lz = log2_mag(&z);
    let mut lscale = f64::NEG_INFINITY;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let lt = if i == 0 { log2_mag(c) } else { log2_mag(c) + i as f64 * lz };
        lscale = lscale.max(lt);
    }
    let lthresh = lscale + (coeffs.len() as f64).log2() - (PREC as f64 - 64.0);
    if lp <= lthresh {
        Some(z)
    } else {
        None
    }
}

fn horner_with_derivative_fix(a: &[BigC], z: &BigC) -> (BigC, BigC) {
    let mut p = BigC::zero();
    let mut dp = BigC::zero();
    for c in a.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Evaluates the γ chain at `(l_tri, m0)` and returns the largest relative
/// residual over all layered equations, both exterior equations, and the
/// folding equation; `None` when the evaluation hits an exact pole or leaves
/// the representable range.
#[allow(clippy::too_many_arguments)]
fn chain_residual(
    walk: &crate::farey::Walk,
    lst: &[PtolemyEquation],
    exterior: &[PtolemyEquation],
    forms: &BTreeMap<Slope, crate::algebra::RatFun>,
    unit: Slope,
    l_tri: &BigC,
    m0: &BigC,
    lpow: &mut PowCache,
    mpow: &mut PowCache,
) -> Option<f64> {
    let mut vals: BTreeMap<Slope, BigC> = BTreeMap::new();
    vals.insert(unit, BigC::one());
    for (&s, f) in forms {
        let den = eval_poly_fix(f.den(), l_tri, m0, lpow, mpow)?;
        let num = eval_poly_fix(f.num(), l_tri, m0, lpow, mpow)?;
        vals.insert(s, num.div(&den)?);
    }
    for step in &walk.steps {
        let o = vals.get(&step.old)?.clone();
        let p = vals.get(&step.pivot)?;
        let f = vals.get(&step.fan)?;
        let h = f.mul(f).sub(&p.mul(p)).div(&o)?;
        vals.insert(step.heading, h);
    }

    let mut worst = 0.0f64;
    for eq in exterior.iter().chain(lst) {
        worst = worst.max(equation_residual(eq, &vals, l_tri, m0, lpow, mpow)?);
    }
    let (pivot, fan) = walk.fold_edge;
    let vp = vals.get(&pivot)?;
    let vf = vals.get(&fan)?;
    worst = worst.max(vp.sub(vf).norm() / (1.0 + vp.norm() + vf.norm()));
    if worst.is_finite() {
        Some(worst)
    } else {
        None
    }
}

/// Relative residual of one Ptolemy relation at concrete γ and `(L, M)`.
fn equation_residual(
    eq: &PtolemyEquation,
    vals: &BTreeMap<Slope, BigC>,
    l0: &BigC,
    m0: &BigC,
    lpow: &mut PowCache,
    mpow: &mut PowCache,
) -> Option<f64> {
    let gv = |g: &GammaVar| -> Option<BigC> {
        match g {
            GammaVar::One(_) => Some(BigC::one()),
            GammaVar::Var(s) => vals.get(s).cloned(),
        }
    };
    let mut total = BigC::zero();
    let mut scale = 1.0f64;
    for t in &eq.terms {
        let term = cached_pow(l0, t.exp_l, lpow)?
            .mul(&cached_pow(m0, t.exp_m, mpow)?)
            .mul(&gv(&t.factors.0)?)
            .mul(&gv(&t.factors.1)?)
            .scale_int(&BigInt::from(t.sign));
        scale += term.norm();
        total = total.add(&term);
    }
    let neg = gv(&eq.neg_factors.0)?.mul(&gv(&eq.neg_factors.1)?);
    total = total.sub(&neg);
    scale += neg.norm();
    let r = total.norm() / scale;
    r.is_finite().then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::compute_apoly;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(l, m, c)| ((l, m), BigInt::from(c))))
    }

    fn uni(coeffs: &[LaurentPoly]) -> UniPolyOverPoly {
        UniPolyOverPoly::new(coeffs.to_vec()).unwrap()
    }

    fn data() -> ParentData {
        ParentData::builtin()
    }

    fn slope(s: &str) -> Slope {
        s.parse().unwrap()
    }

    #[test]
    fn resultant_of_linear_factors_is_root_difference() {
        // res(x − L, x − M) = ±(L − M).
        let f = uni(&[-&LaurentPoly::var_l(), LaurentPoly::one()]);
        let g = uni(&[-&LaurentPoly::var_m(), LaurentPoly::one()]);
        let r = sylvester_resultant(&f, &g).unwrap();
        let diff = p(&[(1, 0, 1), (0, 1, -1)]);
        assert!(r == diff || r == -&diff, "got {r:?}");
    }

    #[test]
    fn resultant_detects_shared_root() {
        // res(x² − 1, x − 1) = 0.
        let f = uni(&[LaurentPoly::constant(-1), LaurentPoly::zero(), LaurentPoly::one()]);
        let g = uni(&[LaurentPoly::constant(-1), LaurentPoly::one()]);
        assert!(sylvester_resultant(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn resultant_substitutes_the_root() {
        // res(x² + L, x + M) = M² + L.
        let f = uni(&[LaurentPoly::var_l(), LaurentPoly::zero(), LaurentPoly::one()]);
        let g = uni(&[LaurentPoly::var_m(), LaurentPoly::one()]);
        assert_eq!(sylvester_resultant(&f, &g).unwrap(), p(&[(0, 2, 1), (1, 0, 1)]));
    }

    #[test]
    fn resultant_against_a_constant_is_its_power() {
        let f = uni(&[LaurentPoly::var_l(), LaurentPoly::zero(), LaurentPoly::one()]);
        let g = uni(&[LaurentPoly::constant(5)]);
        assert_eq!(sylvester_resultant(&f, &g).unwrap(), LaurentPoly::constant(25));
    }

    #[test]
    fn both_constant_inputs_are_rejected() {
        let f = uni(&[LaurentPoly::constant(2)]);
        let g = uni(&[LaurentPoly::constant(3)]);
        assert!(matches!(sylvester_resultant(&f, &g), Err(OracleError::BothConstant)));
        assert!(matches!(
            UniPolyOverPoly::new(vec![LaurentPoly::zero()]),
            Err(OracleError::Algebra(AlgebraError::ZeroPolynomial))
        ));
    }

    #[test]
    fn resultant_is_multiplicative_in_the_first_argument() {
        // res(f·g, h) = ±res(f, h)·res(g, h) on a batch of small inputs.
        let polys = [
            uni(&[LaurentPoly::var_m(), LaurentPoly::one()]),
            uni(&[-&LaurentPoly::var_l(), LaurentPoly::constant(2), LaurentPoly::one()]),
            uni(&[LaurentPoly::constant(3), p(&[(1, 1, 1)])]),
            uni(&[p(&[(0, 1, 1), (0, 0, 1)]), LaurentPoly::var_l(), LaurentPoly::one()]),
        ];
        for f in &polys {
            for g in &polys {
                for h in &polys {
                    // Convolution product f·g.
                    let mut prod =
                        vec![LaurentPoly::zero(); f.degree() + g.degree() + 1];
                    for (i, a) in f.coefficients().iter().enumerate() {
                        for (j, b) in g.coefficients().iter().enumerate() {
                            prod[i + j] = &prod[i + j] + &(a * b);
                        }
                    }
                    let fg = UniPolyOverPoly::new(prod).unwrap();
                    let lhs = sylvester_resultant(&fg, h).unwrap();
                    let rhs = &sylvester_resultant(f, h).unwrap()
                        * &sylvester_resultant(g, h).unwrap();
                    assert!(lhs == rhs || lhs == -&rhs, "multiplicativity failed");
                }
            }
        }
    }

    #[test]
    fn staged_resultants_for_the_one_one_system() {
        // Folded system for slope 1/1 with γ[3/1] = 1 and γ[2/1] ↦ γ[1/0]:
        // variables γ[4/1] (index 0) and γ[1/0] (index 1).
        let var = |i: usize| -> GammaPoly {
            let mut g = GammaPoly::zero();
            let mut key = vec![0u16; i + 1];
            key[i] = 1;
            g.add_term(key, LaurentPoly::one());
            g
        };
        let g4 = var(0);
        let g0 = var(1);
        let c = |q: LaurentPoly| GammaPoly::constant(q);

        // M·γ0·γ4 − M²·γ4 − L and L·M·γ0·γ4 − L·γ4 − M².
        let e1 = c(LaurentPoly::var_m())
            .mul(&g0)
            .mul(&g4)
            .sub(&c(p(&[(0, 2, 1)])).mul(&g4))
            .sub(&c(LaurentPoly::var_l()));
        let e2 = c(p(&[(1, 1, 1)]))
            .mul(&g0)
            .mul(&g4)
            .sub(&c(LaurentPoly::var_l()).mul(&g4))
            .sub(&c(p(&[(0, 2, 1)])));
        // Folded layered relation γ4·γ0 + 1 − γ0².
        let e3 = g4.mul(&g0).add(&c(LaurentPoly::one())).sub(&g0.mul(&g0));

        let r1 = resultant_gamma(&e3, &e1, 1);
        let r2 = resultant_gamma(&e3, &e2, 1);

        // M³γ4³ + (−M⁴ + LM + M²)γ4² − 2LM²γ4 − L².
        let mut expected1 = GammaPoly::zero();
        expected1.add_term(vec![3], p(&[(0, 3, 1)]));
        expected1.add_term(vec![2], p(&[(0, 4, -1), (1, 1, 1), (0, 2, 1)]));
        expected1.add_term(vec![1], p(&[(1, 2, -2)]));
        expected1.add_term(vec![], p(&[(2, 0, -1)]));
        assert_eq!(r1, expected1);

        // L²Mγ4³ + (−L² + LM³ + L²M²)γ4² − 2LM²γ4 − M⁴.
        let mut expected2 = GammaPoly::zero();
        expected2.add_term(vec![3], p(&[(2, 1, 1)]));
        expected2.add_term(vec![2], p(&[(2, 0, -1), (1, 3, 1), (2, 2, 1)]));
        expected2.add_term(vec![1], p(&[(1, 2, -2)]));
        expected2.add_term(vec![], p(&[(0, 4, -1)]));
        assert_eq!(r2, expected2);
    }

    #[test]
    fn elimination_output_contains_the_one_one_polynomial() {
        let d = data();
        let res = resultant_eliminate(&d, slope("1/1")).unwrap();
        assert!(!res.is_zero());
        let tri = compute_apoly(&d, slope("1/1"), Basis::Triangulation).unwrap();
        assert!(
            exact_div(&res, &tri.polynomial).is_ok(),
            "computed polynomial does not divide the resultant output"
        );
    }

    #[test]
    fn resultant_vanishes_at_computed_roots() {
        let d = data();
        let res = resultant_eliminate(&d, slope("1/1")).unwrap();
        let tri = compute_apoly(&d, slope("1/1"), Basis::Triangulation).unwrap();
        let m0 = Complex64::new(1.17, 0.43);
        let mut mpow = PowCache::new();
        let coeffs = univariate_in_l(&tri.polynomial, &BigC::from_c64(m0), &mut mpow);
        let (roots, dropped) = fixed_point_roots(&coeffs);
        assert_eq!(dropped, 0, "root refinement dropped {dropped} roots");
        let mut checked = 0;
        for root in roots {
            let root = root.to_c64();
            let mut value = Complex64::new(0.0, 0.0);
            let mut scale = 1.0f64;
            for (&(el, em), c) in res.terms() {
                let term =
                    c.to_f64().unwrap() * root.powi(el as i32) * m0.powi(em as i32);
                value += term;
                scale += term.norm();
            }
            assert!(value.norm() / scale < 1e-8, "resultant residual too large");
            checked += 1;
        }
        assert!(checked >= 4, "too few clean roots: {checked}");
    }

    #[test]
    #[ignore = "iterated resultants for the 4-unknown 1/2 system take minutes"]
    fn elimination_output_contains_the_one_two_polynomial() {
        let d = data();
        let res = resultant_eliminate(&d, slope("1/2")).unwrap();
        let tri = compute_apoly(&d, slope("1/2"), Basis::Triangulation).unwrap();
        assert!(exact_div(&res, &tri.polynomial).is_ok());
    }

    #[test]
    fn oversized_systems_are_refused() {
        let d = data();
        match resultant_eliminate(&d, slope("1/3")) {
            Err(OracleError::SystemTooLarge { unknowns, .. }) => assert_eq!(unknowns, 5),
            other => panic!("expected SystemTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn collapse_is_reported_not_guessed() {
        // Two proportional quadratics in the last variable collapse.
        let mut f = GammaPoly::zero();
        f.add_term(vec![1], LaurentPoly::one());
        f.add_term(vec![], LaurentPoly::var_l());
        let g = f.mul(&GammaPoly::constant(LaurentPoly::var_m()));
        assert!(resultant_gamma(&f, &g, 0).is_zero());
    }

    #[test]
    fn root_finder_recovers_known_roots() {
        // (z − 1)(z − 2i)(z + 3), built by expanding the factors so the roots
        // are checked directly instead of the expansion.
        let roots = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 0.0),
        ];
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        let found = aberth_roots(&coeffs);
        assert_eq!(found.len(), 3);
        for r in roots {
            assert!(
                found.iter().any(|z| (z - r).norm() < 1e-9),
                "missing root {r}"
            );
        }
    }

    #[test]
    fn fixed_point_arithmetic_round_trips() {
        let z = Complex64::new(1.25, -0.375);
        let w = Complex64::new(-2.0, 0.5);
        let zf = BigC::from_c64(z);
        let wf = BigC::from_c64(w);
        assert!((zf.mul(&wf).to_c64() - z * w).norm() < 1e-15);
        assert!((zf.div(&wf).unwrap().to_c64() - z / w).norm() < 1e-15);
        assert!((zf.powi(-3).unwrap().to_c64() - z.powi(-3)).norm() < 1e-15);
        assert!((zf.norm() - z.norm()).abs() < 1e-15);
        assert!(BigC::one().div(&BigC::zero()).is_none());
    }

    #[test]
    fn k3_1_roots_satisfy_the_system() {
        let d = data();
        let result = compute_apoly(&d, slope("1/1"), Basis::Standard).unwrap();
        let report = numeric_residual(&d, &result, 20, 1729).unwrap();
        assert!(report.passed, "max residual {}", report.max_residual);
        assert!(report.max_residual < RESIDUAL_THRESHOLD);
        assert!(report.roots_checked >= 100, "checked {}", report.roots_checked);
        assert_eq!(report.trials.len(), 20);
    }

    #[test]
    fn triangulation_basis_residuals_pass() {
        let d = data();
        let result = compute_apoly(&d, slope("1/2"), Basis::Triangulation).unwrap();
        let report = numeric_residual(&d, &result, 5, 1729).unwrap();
        assert!(report.passed, "max residual {}", report.max_residual);
    }

    #[test]
    fn corrupted_polynomial_fails_residual_check() {
        let d = data();
        let mut result = compute_apoly(&d, slope("1/1"), Basis::Standard).unwrap();
        result.polynomial = &result.polynomial + &LaurentPoly::one();
        let report = numeric_residual(&d, &result, 10, 1729).unwrap();
        assert!(!report.passed, "corrupted polynomial passed residual check");
    }

    #[test]
    fn residual_reports_are_deterministic_for_a_seed() {
        let d = data();
        let result = compute_apoly(&d, slope("1/1"), Basis::Triangulation).unwrap();
        let a = numeric_residual(&d, &result, 6, 42).unwrap();
        let b = numeric_residual(&d, &result, 6, 42).unwrap();
        assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());
        assert_eq!(a.roots_checked, b.roots_checked);
        let c = numeric_residual(&d, &result, 6, 43).unwrap();
        assert_ne!(a.max_residual.to_bits(), c.max_residual.to_bits());
    }

    #[test]
    fn report_serializes_to_json() {
        let d = data();
        let result = compute_apoly(&d, slope("1/1"), Basis::Triangulation).unwrap();
        let report = numeric_residual(&d, &result, 2, 7).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["slope"], "1/1");
        assert_eq!(json["basis"], "triangulation");
        assert!(json["passed"].as_bool().unwrap());
        assert_eq!(json["trials"].as_array().unwrap().len(), 2);
    }
}
