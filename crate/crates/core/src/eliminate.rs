//! Recursive elimination along a walk: from Ptolemy relations to one
//! polynomial in the cusp holonomy variables.
//!
//! The pipeline starts from the closed forms of the exterior γ variables,
//! then walks the layered tetrahedra in order, solving each relation
//! `γ_old γ_heading + γ_pivot² − γ_fan² = 0` for the one new variable
//! `γ_heading = (γ_fan² − γ_pivot²)/γ_old`. Every step therefore produces a
//! rational function of `L`, `M`, and every introduced denominator is
//! recorded. The folding relation of the final edge equates two of the
//! computed values; the numerator of their difference is the raw polynomial.
//!
//! The raw numerator picks up extraneous components of two kinds. Clearing
//! denominators can smuggle pole factors into it, and it can vanish on loci
//! where some chained γ value itself vanishes — spurious solutions, since
//! the γ coordinates of a genuine decorated representation are invertible.
//! The raw polynomial is therefore stripped against both lists: any repeated
//! common factor with a recorded denominator or with the numerator of a
//! computed γ value is divided out, and the removed factors are kept so the
//! raw polynomial can be reconstructed exactly — an invariant re-checked on
//! every run.
//!
//! Results come in two peripheral bases. The triangulation basis is what the
//! elimination naturally produces; for filling slopes `±1/n` the standard
//! basis of the filled manifold is reached by the exponent substitution
//! `L^i M^j ↦ L^i M^(j+(8−25n)i)` — the meridian is unchanged and the
//! longitude picks up `8 − 25n` meridians, combining the framing change of
//! the filling with the parent's longitude offset and linking number.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    content, exact_div, poly_gcd, AlgebraError, BasisChange, LaurentPoly, RatFun,
};
use crate::farey::{walk_to, FareyError, Slope, WalkStep};
use crate::ptolemy::{tet_ptolemy_equation, ParentData, PtolemyError};

/// Errors from the elimination pipeline.
#[derive(Debug, Error)]
pub enum EliminateError {
    /// The slope is outside the computable family.
    #[error("slope {slope} is excluded: {reason}")]
    Excluded {
        /// The refused filling slope.
        slope: Slope,
        /// Why it is refused.
        reason: ExclusionReason,
    },
    /// The standard peripheral basis is only defined for slopes `±1/n`.
    #[error("no standard-basis change is available for slope {slope} (only ±1/n)")]
    BasisUnavailable {
        /// The offending slope.
        slope: Slope,
    },
    /// A closed form failed to satisfy an exterior Ptolemy relation.
    #[error("closed forms do not satisfy the Ptolemy relation of tetrahedron {tet}")]
    VerificationFailed {
        /// The exterior tetrahedron whose relation failed.
        tet: usize,
    },
    /// A chain step would divide by an identically zero γ value.
    #[error("cannot divide by g[{slope}], which is identically zero")]
    ZeroOldGamma {
        /// The slope whose value vanished.
        slope: Slope,
    },
    /// A required γ value is not in the table.
    #[error("no value computed yet for g[{slope}]")]
    MissingGamma {
        /// The slope that was looked up.
        slope: Slope,
    },
    /// Stripped factors no longer multiply back to the raw polynomial.
    #[error("internal error: stripped factors fail to reconstruct the raw polynomial for slope {slope}")]
    ReconstructionFailed {
        /// The slope being computed when the invariant broke.
        slope: Slope,
    },
    /// An underlying walk error.
    #[error(transparent)]
    Walk(#[from] FareyError),
    /// An underlying triangulation-data error.
    #[error(transparent)]
    Ptolemy(#[from] PtolemyError),
    /// An underlying polynomial-arithmetic error.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Why a filling slope is refused by [`compute_apoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    /// The filled manifold is not hyperbolic, so there is no geometric
    /// component to compute.
    NonHyperbolic,
    /// The walk degenerates to a single fold and the filled manifold repeats
    /// another slope's filling, which is handled under that slope.
    DegenerateOmitted,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::NonHyperbolic => {
                f.write_str("the filling along this slope is not hyperbolic")
            }
            ExclusionReason::DegenerateOmitted => f.write_str(
                "the walk degenerates to a single fold; the filled manifold is \
                 homeomorphic to the Dehn filling along slope 10/3 and is handled there",
            ),
        }
    }
}

/// The reason a slope is refused, or `None` if it is computable.
///
/// The six exceptional slopes `2/1`, `3/1`, `4/1`, `7/2`, `11/3`, `1/0`
/// give non-hyperbolic fillings; `5/1` gives a hyperbolic filling that
/// duplicates the one along `10/3`.
pub fn exclusion_reason(slope: Slope) -> Option<ExclusionReason> {
    match (slope.p(), slope.q()) {
        (2, 1) | (3, 1) | (4, 1) | (7, 2) | (11, 3) | (1, 0) => {
            Some(ExclusionReason::NonHyperbolic)
        }
        (5, 1) => Some(ExclusionReason::DegenerateOmitted),
        _ => None,
    }
}

/// Which peripheral basis a result is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// The basis the elimination naturally produces.
    Triangulation,
    /// The standard meridian/longitude basis of the filled manifold;
    /// available for slopes `±1/n` only.
    Standard,
}

impl Basis {
    /// The canonical name (`triangulation` or `standard`).
    pub fn name(self) -> &'static str {
        match self {
            Basis::Triangulation => "triangulation",
            Basis::Standard => "standard",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "triangulation" => Ok(Basis::Triangulation),
            "standard" => Ok(Basis::Standard),
            other => Err(format!(
                "unknown basis {other:?} (expected triangulation or standard)"
            )),
        }
    }
}

/// Values of the γ variables computed so far, plus the two lists of
/// candidate extraneous factors of the folding polynomial: every denominator
/// introduced while computing the values, and every computed value's
/// numerator (whose vanishing locus carries no genuine solution — the γ
/// coordinates of a decorated representation are invertible).
#[derive(Clone, Debug)]
pub struct GammaTable {
    values: BTreeMap<Slope, RatFun>,
    accumulated_denominators: Vec<LaurentPoly>,
    degenerate_loci: Vec<LaurentPoly>,
}

impl GammaTable {
    /// The computed value of a γ variable, if any.
    pub fn get(&self, slope: Slope) -> Option<&RatFun> {
        self.values.get(&slope)
    }

    /// Slopes with computed values, in ascending order.
    pub fn slopes(&self) -> Vec<Slope> {
        self.values.keys().copied().collect()
    }

    /// Every denominator introduced so far, in introduction order.
    pub fn accumulated_denominators(&self) -> &[LaurentPoly] {
        &self.accumulated_denominators
    }

    /// Nonconstant numerators of the computed values, in introduction order:
    /// the loci where some γ coordinate vanishes and the solution
    /// degenerates.
    pub fn degenerate_loci(&self) -> &[LaurentPoly] {
        &self.degenerate_loci
    }

    /// Both lists of candidate extraneous factors, denominators first.
    pub fn extraneous_loci(&self) -> Vec<LaurentPoly> {
        let mut loci = self.accumulated_denominators.clone();
        loci.extend(self.degenerate_loci.iter().cloned());
        loci
    }

    /// Records a computed value's numerator as a degeneration locus; a
    /// one-term numerator is a Laurent monomial unit and never vanishes.
    fn record_locus(&mut self, value: &RatFun) {
        if value.num().num_terms() > 1 {
            self.degenerate_loci.push(value.num().clone());
        }
    }

    fn require(&self, slope: Slope) -> Result<&RatFun, EliminateError> {
        self.values.get(&slope).ok_or(EliminateError::MissingGamma { slope })
    }
}

/// Seeds a table with the exterior γ values: the removed edge's constant 1
/// and the stored closed forms, each verified symbolically against every
/// exterior tetrahedron's Ptolemy relation before being accepted. The
/// closed forms' denominators are the first accumulated denominators, and
/// their numerators the first degeneration loci.
pub fn outside_gammas(data: &ParentData) -> Result<GammaTable, EliminateError> {
    let forms = data.outside_forms()?;
    let lookup = |s: Slope| forms.get(&s).cloned();
    for tet in data.outside_tets() {
        let eq = tet_ptolemy_equation(data, tet)?;
        let residual = eq.substitute(&lookup)?;
        if !residual.is_zero() {
            return Err(EliminateError::VerificationFailed { tet });
        }
    }
    let mut table = GammaTable {
        values: BTreeMap::new(),
        accumulated_denominators: Vec::new(),
        degenerate_loci: Vec::new(),
    };
    table.values.insert(data.removed_edge(), RatFun::one());
    for (slope, form) in forms {
        table.accumulated_denominators.push(form.den().clone());
        table.record_locus(&form);
        table.values.insert(slope, form);
    }
    Ok(table)
}

/// Solves one layered relation for the newly entered vertex's variable,
/// `γ_heading = (γ_fan² − γ_pivot²) / γ_old`, inserting it into the table.
/// The denominator the division introduces before reduction — the reduced
/// difference's denominator times γ_old's numerator — is accumulated, and
/// the new value's numerator is recorded as a degeneration locus.
pub fn chain_substitute(table: &mut GammaTable, step: &WalkStep) -> Result<(), EliminateError> {
    let old = table.require(step.old)?.clone();
    let pivot = table.require(step.pivot)?;
    let fan = table.require(step.fan)?;
    if old.is_zero() {
        return Err(EliminateError::ZeroOldGamma { slope: step.old });
    }
    let diff = &fan.square() - &pivot.square();
    let introduced = diff.den() * old.num();
    let heading = diff.div(&old)?;
    table.accumulated_denominators.push(introduced);
    table.record_locus(&heading);
    let previous = table.values.insert(step.heading, heading);
    debug_assert!(previous.is_none(), "walks never revisit a vertex");
    Ok(())
}

/// The raw filling polynomial: the numerator of `γ_pivot − γ_fan` for the
/// folding edge, in lowest terms, shifted monomial-free with positive
/// leading coefficient. Fails with a zero-polynomial error if the two values
/// coincide identically.
pub fn folding_polynomial(
    table: &GammaTable,
    fold_edge: (Slope, Slope),
) -> Result<LaurentPoly, EliminateError> {
    let a = table.require(fold_edge.0)?;
    let b = table.require(fold_edge.1)?;
    let diff = a - b;
    Ok(diff.num().monomial_clear()?)
}

/// Strips extraneous factors from a raw polynomial: for each locus in the
/// list — accumulated denominators and degeneration loci — repeatedly
/// divides out the (nonconstant) greatest common divisor until none remains,
/// then shifts monomial-free and removes integer content. Returns the
/// stripped polynomial and every removed factor, whose product with the
/// stripped polynomial reconstructs the input up to a monomial unit and
/// sign.
pub fn strip_extraneous(
    poly: &LaurentPoly,
    loci: &[LaurentPoly],
) -> Result<(LaurentPoly, Vec<LaurentPoly>), EliminateError> {
    if poly.is_zero() {
        return Err(AlgebraError::ZeroPolynomial.into());
    }
    let mut p = poly.clone();
    let mut removed = Vec::new();
    for d in loci {
        loop {
            let g = poly_gcd(&p, d);
            if g.num_terms() <= 1 {
                // A constant or monomial gcd is a unit times content; integer
                // content is handled once at the end.
                break;
            }
            p = exact_div(&p, &g)?;
            removed.push(g);
        }
    }
    p = p.monomial_clear()?;
    let ct = content(&p);
    if !ct.is_one() {
        p = p.divexact_scalar(&ct);
        removed.push(LaurentPoly::constant(ct));
    }
    Ok((p, removed))
}

/// Rewrites a triangulation-basis polynomial in the standard peripheral
/// basis of the `±1/n` filling (encoded by the signed integer `n`): the
/// exponent substitution `L^i M^j ↦ L^i M^(j+(8−25n)i)` followed by the
/// monomial-free shift. `n = 0` (the slope `1/0`) has no filled manifold and
/// is refused.
pub fn change_basis_1n(poly: &LaurentPoly, n: i64) -> Result<LaurentPoly, EliminateError> {
    if n == 0 {
        return Err(EliminateError::BasisUnavailable { slope: Slope::infinity() });
    }
    let ch = BasisChange::new(1, 25 * n - 8, 0, 1)?;
    Ok(poly.substitute_basis(&ch).monomial_clear()?)
}

/// Signed `n` with `slope = ±1/n`, or `None` for other slopes.
pub(crate) fn standard_basis_n(slope: Slope) -> Option<i64> {
    match slope.p() {
        1 => Some(slope.q()),
        -1 => Some(-slope.q()),
        _ => None,
    }
}

/// Size summary of a result polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APolyStats {
    /// Number of terms.
    pub terms: usize,
    /// Degree in `L` (the maximal exponent; the minimal is zero).
    pub deg_l: i64,
    /// Degree in `M`.
    pub deg_m: i64,
}

impl APolyStats {
    fn of(p: &LaurentPoly) -> Self {
        let (deg_l, deg_m) = p.max_exponents().unwrap_or((0, 0));
        APolyStats { terms: p.num_terms(), deg_l, deg_m }
    }
}

/// A computed filling polynomial with its provenance and bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct APolyResult {
    /// The filling slope.
    pub slope: Slope,
    /// The peripheral basis of `polynomial`.
    pub basis: Basis,
    /// The polynomial, monomial-free with positive leading coefficient.
    pub polynomial: LaurentPoly,
    /// Extraneous factors removed from the raw folding polynomial.
    pub stripped_factors: Vec<LaurentPoly>,
    /// Size summary of `polynomial`.
    pub stats: APolyStats,
    /// Wall-clock time of the computation in milliseconds.
    pub ms: u64,
}

impl APolyResult {
    /// The interchange JSON: the polynomial in the canonical schema plus a
    /// metadata object. `rep` records which representation rendering the
    /// caller asked for; the stored exponents are always the full-variable
    /// ones.
    pub fn to_json(&self, rep: &str) -> serde_json::Value {
        serde_json::json!({
            "polynomial": self.polynomial,
            "meta": {
                "slope": self.slope,
                "basis": self.basis,
                "rep": rep,
                "stats": self.stats,
                "stripped_factor_count": self.stripped_factors.len(),
                "ms": self.ms,
            },
        })
    }
}

/// Runs the full pipeline for one filling slope:
///
/// 1. refuse excluded slopes (and, for the standard basis, slopes other
///    than `±1/n`);
/// 2. walk the Farey triangulation to the slope;
/// 3. seed the exterior γ values and chain-substitute along the walk;
/// 4. take the folding polynomial and strip extraneous factors, re-checking
///    that the removed factors reconstruct the raw polynomial;
/// 5. change basis if requested.
pub fn compute_apoly(
    data: &ParentData,
    slope: Slope,
    basis: Basis,
) -> Result<APolyResult, EliminateError> {
    let start = Instant::now();
    if let Some(reason) = exclusion_reason(slope) {
        return Err(EliminateError::Excluded { slope, reason });
    }
    let standard_n = match basis {
        Basis::Triangulation => None,
        Basis::Standard => {
            Some(standard_basis_n(slope).ok_or(EliminateError::BasisUnavailable { slope })?)
        }
    };

    let walk = walk_to(slope)?;
    let mut table = outside_gammas(data)?;
    for step in &walk.steps {
        chain_substitute(&mut table, step)?;
    }
    let raw = folding_polynomial(&table, walk.fold_edge)?;
    let (stripped, factors) = strip_extraneous(&raw, &table.extraneous_loci())?;

    let mut product = stripped.clone();
    for f in &factors {
        product = &product * f;
    }
    if product.monomial_clear()? != raw {
        return Err(EliminateError::ReconstructionFailed { slope });
    }

    let polynomial = match standard_n {
        Some(n) => change_basis_1n(&stripped, n)?,
        None => stripped,
    };
    let stats = APolyStats::of(&polynomial);
    Ok(APolyResult {
        slope,
        basis,
        polynomial,
        stripped_factors: factors,
        stats,
        ms: start.elapsed().as_millis() as u64,
    })
}
