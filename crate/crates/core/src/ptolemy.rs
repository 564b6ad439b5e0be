//! The parent triangulation's Ptolemy data and equation generation.
//!
//! A fixed four-tetrahedron ideal triangulation of the two-cusped parent
//! manifold (the census manifold m125, complement of the Whitehead sister
//! link) ships with the crate as a JSON data file. This module loads it,
//! audits its internal consistency, and turns it into equations:
//!
//! - each tetrahedron outside the filling region contributes a three-term
//!   Ptolemy relation whose first two terms carry monomial coefficients in
//!   the retained cusp's holonomy variables `L`, `M`;
//! - each layered tetrahedron of a Farey walk (see [`crate::farey`])
//!   contributes the coefficient-free relation
//!   `γ_old γ_heading + γ_pivot² − γ_fan² = 0`;
//! - the final crossed edge is folded rather than layered, identifying its
//!   two Ptolemy variables.
//!
//! Ptolemy variables are named by Farey slopes; the variable of the removed
//! edge class is the constant 1. The monomial coefficients and signs come
//! from three ingredients stored (and re-derivable) in the data file: the
//! edge/tetrahedron incidence table, the exponent matrix built from it, and
//! an integer sign-correction vector `B` solving `NZ·B = C` while vanishing
//! on the filled-cusp tetrahedra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{monomial_prefix, LaurentPoly, RatFun, RenderStyle};
use crate::farey::{FareyError, Slope, Walk, WalkStep};

/// Errors from loading or querying the parent triangulation.
#[derive(Debug, Error)]
pub enum PtolemyError {
    /// A table's dimensions are inconsistent (ragged rows, width not a
    /// multiple of three, row counts that disagree).
    #[error("inconsistent table shape: {0}")]
    ShapeMismatch(String),
    /// Tetrahedron index outside `0..num_tets`.
    #[error("tetrahedron index {tet} out of range (triangulation has {num_tets})")]
    IndexOutOfRange { tet: usize, num_tets: usize },
    /// The tetrahedron lies in the filled-cusp region, which has no
    /// exterior Ptolemy relation.
    #[error("tetrahedron {tet} lies in the filled-cusp region")]
    NotOutsideTet { tet: usize },
    /// A walk with no layered steps produces no equations.
    #[error("walk has no layered steps")]
    DegenerateWalk,
    /// No value is known for a γ variable required by a substitution.
    #[error("no value supplied for g[{slope}]")]
    MissingGamma { slope: Slope },
    /// The data file failed to parse or failed a structural requirement.
    #[error("bad triangulation data: {0}")]
    BadData(String),
    /// A stored table disagrees with the one re-derived from the incidence
    /// table.
    #[error("stored table disagrees with derivation: {0}")]
    DataMismatch(String),
    /// A slope string in the data file failed to parse.
    #[error(transparent)]
    Slope(#[from] FareyError),
}

/// One of the six edges of an ideal tetrahedron, named by the vertex pair it
/// joins. Opposite pairs — `(01,23)`, `(02,13)`, `(03,12)` — share a shape
/// parameter; their counts fill the `a`, `b`, `c` columns of the incidence
/// table in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    #[serde(rename = "01")]
    E01,
    #[serde(rename = "02")]
    E02,
    #[serde(rename = "03")]
    E03,
    #[serde(rename = "12")]
    E12,
    #[serde(rename = "13")]
    E13,
    #[serde(rename = "23")]
    E23,
}

impl EdgeLabel {
    /// All six labels in lexicographic order.
    pub const ALL: [EdgeLabel; 6] = [
        EdgeLabel::E01,
        EdgeLabel::E02,
        EdgeLabel::E03,
        EdgeLabel::E12,
        EdgeLabel::E13,
        EdgeLabel::E23,
    ];

    /// Index of the opposite-edge pair this label belongs to: 0 for
    /// `(01,23)`, 1 for `(02,13)`, 2 for `(03,12)`.
    pub fn pair_index(self) -> usize {
        match self {
            EdgeLabel::E01 | EdgeLabel::E23 => 0,
            EdgeLabel::E02 | EdgeLabel::E13 => 1,
            EdgeLabel::E03 | EdgeLabel::E12 => 2,
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeLabel::E01 => "01",
            EdgeLabel::E02 => "02",
            EdgeLabel::E03 => "03",
            EdgeLabel::E12 => "12",
            EdgeLabel::E13 => "13",
            EdgeLabel::E23 => "23",
        };
        f.write_str(s)
    }
}

/// An edge class of the parent triangulation: either labeled by the Farey
/// slope of the curve it meets on the once-punctured-torus boundary, or the
/// unlabeled internal edge `e` running from the filled cusp to itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeClass {
    /// A slope-labeled class carrying a Ptolemy variable.
    Slope(Slope),
    /// The internal edge of the filling region, written `e`.
    Internal,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeClass::Slope(s) => write!(f, "{s}"),
            EdgeClass::Internal => f.write_str("e"),
        }
    }
}

impl FromStr for EdgeClass {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "e" {
            Ok(EdgeClass::Internal)
        } else {
            Ok(EdgeClass::Slope(s.parse()?))
        }
    }
}

impl Serialize for EdgeClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Row indices of the four peripheral-curve rows in the matrix tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspRows {
    /// Meridian row of the retained cusp; its entries are the `μ` exponents.
    pub m0: usize,
    /// Longitude row of the retained cusp; its entries are the `λ` exponents.
    pub l0: usize,
    /// Meridian row of the cusp that gets filled.
    pub m1: usize,
    /// Longitude row of the filled cusp.
    pub l1: usize,
}

impl CuspRows {
    fn as_array(self) -> [usize; 4] {
        [self.m0, self.l0, self.m1, self.l1]
    }
}

/// A Ptolemy variable, named by the slope of its edge class. The removed
/// edge's variable is pinned to the constant 1 but keeps its slope so
/// equations can still display it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaVar {
    /// The removed edge's variable, fixed to 1.
    One(Slope),
    /// An honest unknown.
    Var(Slope),
}

impl GammaVar {
    /// The slope naming this variable.
    pub fn slope(self) -> Slope {
        match self {
            GammaVar::One(s) | GammaVar::Var(s) => s,
        }
    }

    /// True for the removed edge's variable, whose value is 1.
    pub fn is_unit(self) -> bool {
        matches!(self, GammaVar::One(_))
    }

    /// `g[p/q]` in the plain styles, `\gamma_{p/q}` in the LaTeX styles.
    pub fn symbol(self, style: RenderStyle) -> String {
        if latexish(style) {
            format!("\\gamma_{{{}}}", self.slope())
        } else {
            format!("g[{}]", self.slope())
        }
    }
}

fn latexish(style: RenderStyle) -> bool {
    matches!(style, RenderStyle::SlLatex | RenderStyle::PslLatex)
}

/// One signed term `±L^a M^b · γγ` of a Ptolemy relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtolemyTerm {
    /// `+1` or `−1`.
    pub sign: i8,
    /// Exponent of `L` in the monomial coefficient.
    pub exp_l: i64,
    /// Exponent of `M` in the monomial coefficient.
    pub exp_m: i64,
    /// The two γ factors; equal factors render as a square.
    pub factors: (GammaVar, GammaVar),
}

/// A three-term Ptolemy relation `t₀ + t₁ − γγ = 0`.
///
/// Exterior tetrahedra produce terms with monomial coefficients; layered
/// tetrahedra produce the coefficient-free special case
/// `γ_old γ_heading + γ_pivot² − γ_fan² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtolemyEquation {
    /// The two leading terms with their signs and coefficients.
    pub terms: [PtolemyTerm; 2],
    /// Factors of the fixed trailing term `−γγ`.
    pub neg_factors: (GammaVar, GammaVar),
}

impl PtolemyEquation {
    /// The layered-tetrahedron relation of one walk step.
    fn lst(step: &WalkStep, unit: Slope) -> Self {
        let g = |s: Slope| gamma_var(s, unit);
        PtolemyEquation {
            terms: [
                PtolemyTerm {
                    sign: 1,
                    exp_l: 0,
                    exp_m: 0,
                    factors: (g(step.old), g(step.heading)),
                },
                PtolemyTerm {
                    sign: 1,
                    exp_l: 0,
                    exp_m: 0,
                    factors: (g(step.pivot), g(step.pivot)),
                },
            ],
            neg_factors: (g(step.fan), g(step.fan)),
        }
    }

    /// Renders the relation as an `… = 0` string; the JSON style emits the
    /// serialized structure instead.
    pub fn render(&self, style: RenderStyle) -> String {
        if style == RenderStyle::Json {
            return serde_json::to_string(self).expect("equation serialization cannot fail");
        }
        let mut out = String::new();
        let pieces = [
            (self.terms[0].sign, term_text(&self.terms[0], style)),
            (self.terms[1].sign, term_text(&self.terms[1], style)),
            (-1, factors_text(self.neg_factors, style)),
        ];
        for (i, (sign, body)) in pieces.iter().enumerate() {
            if i == 0 {
                if *sign < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *sign < 0 { " - " } else { " + " });
            }
            out.push_str(body);
        }
        out.push_str(" = 0");
        out
    }

    /// Evaluates the left side with each non-unit γ looked up through
    /// `value_of`; the relation holds exactly when the result is zero.
    pub fn substitute(
        &self,
        value_of: &dyn Fn(Slope) -> Option<RatFun>,
    ) -> Result<RatFun, PtolemyError> {
        let val = |v: GammaVar| -> Result<RatFun, PtolemyError> {
            match v {
                GammaVar::One(_) => Ok(RatFun::one()),
                GammaVar::Var(s) => value_of(s).ok_or(PtolemyError::MissingGamma { slope: s }),
            }
        };
        let mut acc = RatFun::zero();
        for t in &self.terms {
            let coeff = RatFun::from_poly(LaurentPoly::monomial(t.exp_l, t.exp_m, t.sign as i64));
            let prod = &(&val(t.factors.0)? * &val(t.factors.1)?) * &coeff;
            acc = &acc + &prod;
        }
        let trailing = &val(self.neg_factors.0)? * &val(self.neg_factors.1)?;
        Ok(&acc - &trailing)
    }
}

impl fmt::Display for PtolemyEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::SlPlain))
    }
}

fn term_text(t: &PtolemyTerm, style: RenderStyle) -> String {
    let gammas = factors_text(t.factors, style);
    if t.exp_l == 0 && t.exp_m == 0 {
        gammas
    } else {
        let joiner = if latexish(style) { " " } else { "*" };
        let coeff = monomial_prefix(t.exp_l, t.exp_m, &BigInt::from(1), style);
        format!("{coeff}{joiner}{gammas}")
    }
}

fn factors_text(f: (GammaVar, GammaVar), style: RenderStyle) -> String {
    if f.0 == f.1 {
        format!("{}^2", f.0.symbol(style))
    } else {
        let joiner = if latexish(style) { " " } else { "*" };
        format!("{}{}{}", f.0.symbol(style), joiner, f.1.symbol(style))
    }
}

/// The folding relation of the final crossed edge: `γ_pivot = γ_fan`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldEquation {
    /// The crossed-edge endpoint shared with the previous step.
    pub pivot: GammaVar,
    /// The other endpoint; the fold sets its variable equal to the pivot's.
    pub fan: GammaVar,
}

impl FoldEquation {
    /// Renders `γ_pivot = γ_fan`; the JSON style emits the serialized
    /// structure instead.
    pub fn render(&self, style: RenderStyle) -> String {
        if style == RenderStyle::Json {
            return serde_json::to_string(self).expect("equation serialization cannot fail");
        }
        format!("{} = {}", self.pivot.symbol(style), self.fan.symbol(style))
    }
}

impl fmt::Display for FoldEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::SlPlain))
    }
}

fn gamma_var(s: Slope, unit: Slope) -> GammaVar {
    if s == unit {
        GammaVar::One(s)
    } else {
        GammaVar::Var(s)
    }
}

/// Raw JSON shape of the data file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParentDataRepr {
    num_tets: usize,
    edge_class_names: Vec<EdgeClass>,
    removed_edge: EdgeClass,
    cusp_rows: CuspRows,
    filled_cusp_tets: Vec<usize>,
    linking_number: i64,
    longitude_offset: i64,
    incidence: Vec<Vec<i64>>,
    nz: Vec<Vec<i64>>,
    c_vec: Vec<i64>,
    b_vec: Vec<i64>,
    edge_map: Vec<BTreeMap<EdgeLabel, EdgeClass>>,
    outside_gamma_forms: BTreeMap<Slope, FractionRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FractionRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// The parent triangulation: incidence and exponent tables, edge classes,
/// peripheral data, and the closed forms of the exterior Ptolemy variables.
#[derive(Clone, Debug)]
pub struct ParentData {
    num_tets: usize,
    edge_classes: Vec<EdgeClass>,
    removed_edge: Slope,
    cusp_rows: CuspRows,
    filled_cusp_tets: Vec<usize>,
    linking_number: i64,
    longitude_offset: i64,
    incidence: Vec<Vec<i64>>,
    nz: Vec<Vec<i64>>,
    c_vec: Vec<i64>,
    b_vec: Vec<i64>,
    edge_map: Vec<BTreeMap<EdgeLabel, EdgeClass>>,
    outside_gamma_forms: BTreeMap<Slope, (LaurentPoly, LaurentPoly)>,
}

impl ParentData {
    /// The built-in triangulation shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json_str(include_str!("../data/whitehead_sister.json"))
            .expect("built-in triangulation data is valid")
    }

    /// Parses and structurally checks a data file. Beyond JSON validity this
    /// re-derives the exponent matrix and count vector from the incidence
    /// table and insists they match the stored ones, and checks that
    /// removing the removed edge's row leaves a nonzero entry among the
    /// remaining edge rows of the count vector.
    pub fn from_json_str(s: &str) -> Result<Self, PtolemyError> {
        let repr: ParentDataRepr =
            serde_json::from_str(s).map_err(|e| PtolemyError::BadData(e.to_string()))?;
        let t = repr.num_tets;
        let n_edge = repr.edge_class_names.len();
        let rows = n_edge + 4;

        let removed_edge = match repr.removed_edge {
            EdgeClass::Slope(s) => s,
            EdgeClass::Internal => {
                return Err(PtolemyError::BadData(
                    "removed edge must be a slope-labeled class".into(),
                ))
            }
        };
        if !repr.edge_class_names.contains(&repr.removed_edge) {
            return Err(PtolemyError::BadData(
                "removed edge is not one of the edge classes".into(),
            ));
        }

        if repr.incidence.len() != rows || repr.nz.len() != rows || repr.c_vec.len() != rows {
            return Err(PtolemyError::ShapeMismatch(format!(
                "expected {rows} rows (edge classes plus four cusp rows)"
            )));
        }
        if repr.incidence.iter().any(|r| r.len() != 3 * t)
            || repr.nz.iter().any(|r| r.len() != 2 * t)
            || repr.b_vec.len() != 2 * t
            || repr.edge_map.len() != t
        {
            return Err(PtolemyError::ShapeMismatch(format!(
                "expected {t} tetrahedron column groups"
            )));
        }
        let cusps = repr.cusp_rows.as_array();
        for (i, &r) in cusps.iter().enumerate() {
            if r < n_edge || r >= rows || cusps[..i].contains(&r) {
                return Err(PtolemyError::BadData(format!(
                    "cusp row {r} repeated, out of range, or clashing with an edge row"
                )));
            }
        }
        if repr.filled_cusp_tets.iter().any(|&j| j >= t) {
            return Err(PtolemyError::BadData("filled-cusp tetrahedron out of range".into()));
        }
        for (j, m) in repr.edge_map.iter().enumerate() {
            if m.len() != 6 {
                return Err(PtolemyError::BadData(format!(
                    "tetrahedron {j} does not map all six edges"
                )));
            }
            for class in m.values() {
                if !repr.edge_class_names.contains(class) {
                    return Err(PtolemyError::BadData(format!(
                        "tetrahedron {j} references unknown edge class {class}"
                    )));
                }
            }
        }

        let (derived_nz, derived_c) = derive_nz(&repr.incidence, n_edge)?;
        if derived_nz != repr.nz {
            return Err(PtolemyError::DataMismatch(
                "exponent matrix does not match the incidence table".into(),
            ));
        }
        if derived_c != repr.c_vec {
            return Err(PtolemyError::DataMismatch(
                "count vector does not match the incidence table".into(),
            ));
        }

        let removed_row = repr
            .edge_class_names
            .iter()
            .position(|c| *c == repr.removed_edge)
            .expect("membership checked above");
        if !(0..n_edge).any(|r| r != removed_row && repr.c_vec[r] != 0) {
            return Err(PtolemyError::BadData(
                "removing the chosen edge leaves no nonzero edge entry in the count vector".into(),
            ));
        }

        let mut forms = BTreeMap::new();
        for (slope, frac) in repr.outside_gamma_forms {
            forms.insert(slope, (frac.num, frac.den));
        }
        for class in &repr.edge_class_names {
            if let EdgeClass::Slope(s) = class {
                if *s != removed_edge && !forms.contains_key(s) {
                    return Err(PtolemyError::BadData(format!(
                        "no closed form supplied for g[{s}]"
                    )));
                }
            }
        }

        Ok(ParentData {
            num_tets: t,
            edge_classes: repr.edge_class_names,
            removed_edge,
            cusp_rows: repr.cusp_rows,
            filled_cusp_tets: repr.filled_cusp_tets,
            linking_number: repr.linking_number,
            longitude_offset: repr.longitude_offset,
            incidence: repr.incidence,
            nz: repr.nz,
            c_vec: repr.c_vec,
            b_vec: repr.b_vec,
            edge_map: repr.edge_map,
            outside_gamma_forms: forms,
        })
    }

    /// Number of tetrahedra.
    pub fn num_tets(&self) -> usize {
        self.num_tets
    }

    /// Edge classes in row order.
    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    /// The slope whose edge class is removed; its γ is the constant 1.
    pub fn removed_edge(&self) -> Slope {
        self.removed_edge
    }

    /// Row indices of the peripheral-curve rows.
    pub fn cusp_rows(&self) -> CuspRows {
        self.cusp_rows
    }

    /// Tetrahedra of the filled-cusp region, which get replaced by the walk's
    /// layered tetrahedra.
    pub fn filled_cusp_tets(&self) -> &[usize] {
        &self.filled_cusp_tets
    }

    /// Tetrahedra outside the filling region, in ascending order.
    pub fn outside_tets(&self) -> Vec<usize> {
        (0..self.num_tets)
            .filter(|j| !self.filled_cusp_tets.contains(j))
            .collect()
    }

    /// Linking number of the two parent cusps.
    pub fn linking_number(&self) -> i64 {
        self.linking_number
    }

    /// Exponent correction relating the preferred longitude to the
    /// triangulation's: the holonomy eigenvalues satisfy `𝔩′ = 𝔩·𝔪^offset`.
    pub fn longitude_offset(&self) -> i64 {
        self.longitude_offset
    }

    /// The edge/tetrahedron incidence table (rows × 3·num_tets).
    pub fn incidence(&self) -> &[Vec<i64>] {
        &self.incidence
    }

    /// The exponent matrix (rows × 2·num_tets).
    pub fn nz(&self) -> &[Vec<i64>] {
        &self.nz
    }

    /// The count vector `C` with one entry per row.
    pub fn c_vec(&self) -> &[i64] {
        &self.c_vec
    }

    /// The sign-correction vector `B` with one entry per column.
    pub fn b_vec(&self) -> &[i64] {
        &self.b_vec
    }

    /// The edge class a tetrahedron's edge belongs to.
    pub fn edge_class_of(&self, tet: usize, label: EdgeLabel) -> Result<EdgeClass, PtolemyError> {
        if tet >= self.num_tets {
            return Err(PtolemyError::IndexOutOfRange { tet, num_tets: self.num_tets });
        }
        Ok(self.edge_map[tet][&label])
    }

    /// The γ variable of a slope: the unit for the removed edge, an unknown
    /// otherwise.
    pub fn gamma_var(&self, s: Slope) -> GammaVar {
        gamma_var(s, self.removed_edge)
    }

    /// The stored closed forms of the exterior γ variables, in canonical
    /// reduced form. The removed edge (whose γ is 1) is not included.
    pub fn outside_forms(&self) -> Result<BTreeMap<Slope, RatFun>, PtolemyError> {
        let mut out = BTreeMap::new();
        for (&s, (num, den)) in &self.outside_gamma_forms {
            let f = RatFun::new(num.clone(), den.clone())
                .map_err(|e| PtolemyError::BadData(format!("closed form for g[{s}]: {e}")))?;
            out.insert(s, f);
        }
        Ok(out)
    }
}

/// Rebuilds the exponent matrix and count vector from an incidence table
/// whose first `num_edge_rows` rows are edge rows and whose remaining rows
/// are peripheral. Each tetrahedron contributes the column pair
/// `(a−c, b−c)` of a row's `(a,b,c)` triple; the count entry of a row is 2
/// for edge rows and 0 for peripheral rows, minus the sum of the row's `c`
/// entries.
pub fn derive_nz(
    incidence: &[Vec<i64>],
    num_edge_rows: usize,
) -> Result<(Vec<Vec<i64>>, Vec<i64>), PtolemyError> {
    if num_edge_rows > incidence.len() {
        return Err(PtolemyError::ShapeMismatch(format!(
            "{num_edge_rows} edge rows declared but only {} rows present",
            incidence.len()
        )));
    }
    let width = incidence.first().map_or(0, |r| r.len());
    if width == 0 || width % 3 != 0 {
        return Err(PtolemyError::ShapeMismatch(format!(
            "row width {width} is not a positive multiple of 3"
        )));
    }
    if let Some(bad) = incidence.iter().find(|r| r.len() != width) {
        return Err(PtolemyError::ShapeMismatch(format!(
            "ragged incidence table: widths {} and {width}",
            bad.len()
        )));
    }
    let num_tets = width / 3;
    let mut nz = vec![vec![0i64; 2 * num_tets]; incidence.len()];
    let mut c = vec![0i64; incidence.len()];
    for (r, row) in incidence.iter().enumerate() {
        let mut c_sum = 0i64;
        for j in 0..num_tets {
            let (a, b, cc) = (row[3 * j], row[3 * j + 1], row[3 * j + 2]);
            nz[r][2 * j] = a - cc;
            nz[r][2 * j + 1] = b - cc;
            c_sum += cc;
        }
        c[r] = if r < num_edge_rows { 2 } else { 0 } - c_sum;
    }
    Ok((nz, c))
}

/// The Ptolemy relation of an exterior tetrahedron `j`:
///
/// ```text
/// (−1)^B'ⱼ L^(−μⱼ) M^λⱼ γ_{j(01)} γ_{j(23)}
///   + (−1)^Bⱼ L^(−μ'ⱼ) M^λ'ⱼ γ_{j(02)} γ_{j(13)}
///   − γ_{j(03)} γ_{j(12)} = 0
/// ```
///
/// with `(μⱼ, μ'ⱼ)` and `(λⱼ, λ'ⱼ)` the tetrahedron's column pair in the
/// retained cusp's meridian and longitude rows of the exponent matrix, and
/// `(Bⱼ, B'ⱼ)` the matching entries of the sign-correction vector.
pub fn tet_ptolemy_equation(
    data: &ParentData,
    tet: usize,
) -> Result<PtolemyEquation, PtolemyError> {
    if tet >= data.num_tets {
        return Err(PtolemyError::IndexOutOfRange { tet, num_tets: data.num_tets });
    }
    if data.filled_cusp_tets.contains(&tet) {
        return Err(PtolemyError::NotOutsideTet { tet });
    }
    let g = |label: EdgeLabel| -> Result<GammaVar, PtolemyError> {
        match data.edge_map[tet][&label] {
            EdgeClass::Slope(s) => Ok(data.gamma_var(s)),
            EdgeClass::Internal => Err(PtolemyError::BadData(format!(
                "exterior tetrahedron {tet} touches the internal edge"
            ))),
        }
    };
    let sign_of = |bit: i64| if bit.rem_euclid(2) == 0 { 1i8 } else { -1i8 };
    let mu = (
        data.nz[data.cusp_rows.m0][2 * tet],
        data.nz[data.cusp_rows.m0][2 * tet + 1],
    );
    let la = (
        data.nz[data.cusp_rows.l0][2 * tet],
        data.nz[data.cusp_rows.l0][2 * tet + 1],
    );
    let b = (data.b_vec[2 * tet], data.b_vec[2 * tet + 1]);
    Ok(PtolemyEquation {
        terms: [
            PtolemyTerm {
                sign: sign_of(b.1),
                exp_l: -mu.0,
                exp_m: la.0,
                factors: (g(EdgeLabel::E01)?, g(EdgeLabel::E23)?),
            },
            PtolemyTerm {
                sign: sign_of(b.0),
                exp_l: -mu.1,
                exp_m: la.1,
                factors: (g(EdgeLabel::E02)?, g(EdgeLabel::E13)?),
            },
        ],
        neg_factors: (g(EdgeLabel::E03)?, g(EdgeLabel::E12)?),
    })
}

/// The layered relations of a walk, one per step in order, plus the folding
/// relation of the final crossed edge.
pub fn lst_equations(
    data: &ParentData,
    walk: &Walk,
) -> Result<(Vec<PtolemyEquation>, FoldEquation), PtolemyError> {
    if walk.steps.is_empty() {
        return Err(PtolemyError::DegenerateWalk);
    }
    let unit = data.removed_edge;
    let eqs = walk.steps.iter().map(|st| PtolemyEquation::lst(st, unit)).collect();
    let fold = FoldEquation {
        pivot: gamma_var(walk.fold_edge.0, unit),
        fan: gamma_var(walk.fold_edge.1, unit),
    };
    Ok((eqs, fold))
}

/// One named structural check with its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// Stable machine-readable name.
    pub name: &'static str,
    /// Whether the check held.
    pub passed: bool,
    /// Evidence; empty for uneventful passes.
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Check { name, passed: true, detail: String::new() }
    }

    fn result(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        let detail = if passed { String::new() } else { detail.into() };
        Check { name, passed, detail }
    }

    fn skipped(name: &'static str) -> Self {
        Check { name, passed: false, detail: "skipped: table shapes are inconsistent".into() }
    }
}

/// Outcome of the full structural audit of a [`ParentData`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// All checks in a fixed order.
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// True when every check held.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The failed checks, if any.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{tag} {}", c.name)?;
            } else {
                writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// Audits every structural invariant of the triangulation data and reports
/// each as a named pass/fail entry. Never panics, even on data whose tables
/// are malformed: if the shapes are inconsistent, dependent checks are
/// reported as failed-skipped rather than evaluated.
pub fn validate_parent(data: &ParentData) -> ValidationReport {
    let mut checks = Vec::new();
    let t = data.num_tets;
    let n_edge = data.edge_classes.len();
    let rows = n_edge + 4;

    let shapes_ok = data.incidence.len() == rows
        && data.nz.len() == rows
        && data.c_vec.len() == rows
        && data.incidence.iter().all(|r| r.len() == 3 * t)
        && data.nz.iter().all(|r| r.len() == 2 * t)
        && data.b_vec.len() == 2 * t
        && data.edge_map.len() == t
        && data.edge_map.iter().all(|m| m.len() == 6)
        && data.cusp_rows.as_array().iter().all(|&r| (n_edge..rows).contains(&r))
        && data.filled_cusp_tets.iter().all(|&j| j < t);
    checks.push(Check::result(
        "table-shapes",
        shapes_ok,
        "row or column counts disagree with the declared tetrahedron and edge-class counts",
    ));

    if !shapes_ok {
        for name in [
            "nz-rederives",
            "nz-times-b-is-c",
            "b-zero-on-filled-tets",
            "edge-rows-sum-six",
            "edge-map-matches-incidence",
            "slope-classes-pairwise-neighbors",
            "removed-edge-leaves-nonzero-count",
            "outside-forms-satisfy-tet-equations",
            "b-solvable-on-exterior-support",
        ] {
            checks.push(Check::skipped(name));
        }
        return ValidationReport { checks };
    }

    match derive_nz(&data.incidence, n_edge) {
        Ok((nz, c)) => {
            let ok = nz == data.nz && c == data.c_vec;
            checks.push(Check::result(
                "nz-rederives",
                ok,
                "stored exponent matrix or count vector differs from the derived one",
            ));
        }
        Err(e) => checks.push(Check::result("nz-rederives", false, e.to_string())),
    }

    let product: Vec<i64> = data
        .nz
        .iter()
        .map(|row| row.iter().zip(&data.b_vec).map(|(a, b)| a * b).sum())
        .collect();
    checks.push(Check::result(
        "nz-times-b-is-c",
        product == data.c_vec,
        format!("NZ·B = {product:?} but C = {:?}", data.c_vec),
    ));

    let filled_ok = data
        .filled_cusp_tets
        .iter()
        .all(|&j| data.b_vec[2 * j] == 0 && data.b_vec[2 * j + 1] == 0);
    checks.push(Check::result(
        "b-zero-on-filled-tets",
        filled_ok,
        "sign-correction vector is nonzero on a filled-cusp tetrahedron",
    ));

    let mut sums_ok = true;
    let mut sums = Vec::with_capacity(t);
    for j in 0..t {
        let s: i64 = (0..n_edge)
            .map(|r| data.incidence[r][3 * j] + data.incidence[r][3 * j + 1] + data.incidence[r][3 * j + 2])
            .sum();
        sums.push(s);
        sums_ok &= s == 6;
    }
    checks.push(Check::result(
        "edge-rows-sum-six",
        sums_ok,
        format!("per-tetrahedron edge incidences sum to {sums:?}, expected all 6"),
    ));

    let mut map_ok = true;
    let mut map_detail = String::new();
    for j in 0..t {
        for (r, class) in data.edge_classes.iter().enumerate() {
            for pair in 0..3 {
                let count = EdgeLabel::ALL
                    .iter()
                    .filter(|l| l.pair_index() == pair && data.edge_map[j][l] == *class)
                    .count() as i64;
                if count != data.incidence[r][3 * j + pair] {
                    map_ok = false;
                    map_detail = format!(
                        "tetrahedron {j}, class {class}, pair {pair}: edge map gives {count}, incidence {}",
                        data.incidence[r][3 * j + pair]
                    );
                }
            }
        }
    }
    checks.push(Check::result("edge-map-matches-incidence", map_ok, map_detail));

    let slopes: Vec<Slope> = data
        .edge_classes
        .iter()
        .filter_map(|c| match c {
            EdgeClass::Slope(s) => Some(*s),
            EdgeClass::Internal => None,
        })
        .collect();
    let mut neigh_ok = true;
    for (i, &a) in slopes.iter().enumerate() {
        for &b in &slopes[i + 1..] {
            neigh_ok &= a.is_neighbor(b);
        }
    }
    checks.push(Check::result(
        "slope-classes-pairwise-neighbors",
        neigh_ok,
        format!("slope classes {slopes:?} are not pairwise Farey neighbors"),
    ));

    let removed_row = data
        .edge_classes
        .iter()
        .position(|c| *c == EdgeClass::Slope(data.removed_edge));
    let cflat_ok = removed_row.is_some_and(|rr| {
        (0..n_edge).any(|r| r != rr && data.c_vec[r] != 0)
    });
    checks.push(Check::result(
        "removed-edge-leaves-nonzero-count",
        cflat_ok,
        "no nonzero edge entry remains in the count vector after removing the chosen row",
    ));

    let forms_check = || -> Result<(), String> {
        let forms = data.outside_forms().map_err(|e| e.to_string())?;
        let lookup = |s: Slope| forms.get(&s).cloned();
        for tet in data.outside_tets() {
            let eq = tet_ptolemy_equation(data, tet).map_err(|e| e.to_string())?;
            let residual = eq.substitute(&lookup).map_err(|e| e.to_string())?;
            if !residual.is_zero() {
                return Err(format!(
                    "tetrahedron {tet}: closed forms leave residual {residual}"
                ));
            }
        }
        Ok(())
    };
    match forms_check() {
        Ok(()) => checks.push(Check::pass("outside-forms-satisfy-tet-equations")),
        Err(detail) => {
            checks.push(Check::result("outside-forms-satisfy-tet-equations", false, detail))
        }
    }

    let zero_coords: Vec<usize> = data
        .filled_cusp_tets
        .iter()
        .flat_map(|&j| [2 * j, 2 * j + 1])
        .collect();
    let solve_ok = match solve_b_vector(&data.nz, &data.c_vec, &zero_coords) {
        Some(x) => {
            let prod_ok = data.nz.iter().zip(&data.c_vec).all(|(row, &cr)| {
                row.iter()
                    .zip(&x)
                    .map(|(&a, xi)| BigInt::from(a) * xi)
                    .sum::<BigInt>()
                    == BigInt::from(cr)
            });
            let zeros_ok = zero_coords.iter().all(|&i| x[i].is_zero());
            prod_ok && zeros_ok
        }
        None => false,
    };
    checks.push(Check::result(
        "b-solvable-on-exterior-support",
        solve_ok,
        "no integer solution of NZ·B = C vanishing on the filled-cusp tetrahedra",
    ));

    ValidationReport { checks }
}

/// Finds an integer solution `x` of `A·x = c` that vanishes on the given
/// coordinates, or `None` if no such solution exists (or the inputs are
/// malformed). The unconstrained columns are brought to column-style Hermite
/// form by unimodular column operations; the triangular system is then
/// solved by forward substitution with exact divisibility checks.
pub fn solve_b_vector(a: &[Vec<i64>], c: &[i64], zero_coords: &[usize]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let width = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != width) || c.len() != rows {
        return None;
    }
    let free: Vec<usize> = (0..width).filter(|i| !zero_coords.contains(i)).collect();
    let k = free.len();

    let mut h: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| free.iter().map(|&j| BigInt::from(a[r][j])).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();

    let swap_cols = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in h.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let add_col = |h: &mut Vec<Vec<BigInt>>,
                   u: &mut Vec<Vec<BigInt>>,
                   dst: usize,
                   src: usize,
                   factor: &BigInt| {
        for row in h.iter_mut() {
            let delta = &row[src] * factor;
            row[dst] += delta;
        }
        for row in u.iter_mut() {
            let delta = &row[src] * factor;
            row[dst] += delta;
        }
    };

    let mut lead = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for r in 0..rows {
        if lead >= k {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in lead..k {
                if !h[r][j].is_zero()
                    && best.map_or(true, |b| h[r][j].magnitude() < h[r][b].magnitude())
                {
                    best = Some(j);
                }
            }
            let Some(jmin) = best else { break };
            if jmin != lead {
                swap_cols(&mut h, &mut u, lead, jmin);
            }
            let mut cleared = true;
            for j in lead + 1..k {
                if !h[r][j].is_zero() {
                    let q = -(&h[r][j] / &h[r][lead]);
                    if !q.is_zero() {
                        add_col(&mut h, &mut u, j, lead, &q);
                    }
                    cleared &= h[r][j].is_zero();
                }
            }
            if cleared {
                if h[r][lead].is_negative() {
                    for row in h.iter_mut() {
                        row[lead] = -std::mem::take(&mut row[lead]);
                    }
                    for row in u.iter_mut() {
                        row[lead] = -std::mem::take(&mut row[lead]);
                    }
                }
                pivots.push((r, lead));
                lead += 1;
                break;
            }
        }
    }

    let mut y = vec![BigInt::zero(); k];
    let mut residual: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
    for &(r, col) in &pivots {
        let (q, rem) = num_integer::Integer::div_rem(&residual[r], &h[r][col]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for rr in 0..rows {
                let delta = &h[rr][col] * &q;
                residual[rr] -= delta;
            }
            y[col] = q;
        }
    }
    if residual.iter().any(|v| !v.is_zero()) {
        return None;
    }

    let mut x = vec![BigInt::zero(); width];
    for (idx, &orig) in free.iter().enumerate() {
        x[orig] = (0..k).map(|j| &u[idx][j] * &y[j]).sum();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::walk_to;

    fn slope(s: &str) -> Slope {
        s.parse().unwrap()
    }

    fn data() -> ParentData {
        ParentData::builtin()
    }

    #[test]
    fn builtin_loads_and_validates() {
        let d = data();
        assert_eq!(d.num_tets(), 4);
        assert_eq!(d.removed_edge(), slope("3/1"));
        assert_eq!(d.filled_cusp_tets(), &[2, 3]);
        assert_eq!(d.outside_tets(), vec![0, 1]);
        assert_eq!(d.linking_number(), 5);
        assert_eq!(d.longitude_offset(), -8);
        let report = validate_parent(&d);
        assert!(report.all_passed(), "unexpected failures:\n{report}");
        assert_eq!(report.checks.len(), 10);
    }

    #[test]
    fn derive_nz_single_row_examples() {
        // A row with triples (1,1,0 | 0,1,1 | 1,0,0 | 1,0,0) as an edge row.
        let row = vec![vec![1, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0]];
        let (nz, c) = derive_nz(&row, 1).unwrap();
        assert_eq!(nz[0], vec![1, 1, -1, 0, 1, 0, 1, 0]);
        assert_eq!(c, vec![1]);

        // A row with triples (0,1,2 | 2,0,1 | 0,0,1 | 0,0,1) as an edge row.
        let row = vec![vec![0, 1, 2, 2, 0, 1, 0, 0, 1, 0, 0, 1]];
        let (nz, c) = derive_nz(&row, 1).unwrap();
        assert_eq!(nz[0], vec![-2, -1, 1, -1, -1, -1, -1, -1]);
        assert_eq!(c, vec![-3]);

        // The all-zero row: zero exponents; count 2 as an edge row, 0 as a
        // peripheral row.
        let row = vec![vec![0; 12]];
        let (nz, c) = derive_nz(&row, 1).unwrap();
        assert_eq!(nz[0], vec![0; 8]);
        assert_eq!(c, vec![2]);
        let (_, c) = derive_nz(&row, 0).unwrap();
        assert_eq!(c, vec![0]);
    }

    #[test]
    fn derive_nz_rejects_bad_shapes() {
        let ragged = vec![vec![0; 12], vec![0; 9]];
        assert!(matches!(derive_nz(&ragged, 1), Err(PtolemyError::ShapeMismatch(_))));
        let not_triples = vec![vec![0; 10]];
        assert!(matches!(derive_nz(&not_triples, 1), Err(PtolemyError::ShapeMismatch(_))));
        assert!(matches!(derive_nz(&[], 1), Err(PtolemyError::ShapeMismatch(_))));
    }

    #[test]
    fn first_exterior_equation_golden() {
        let d = data();
        let eq = tet_ptolemy_equation(&d, 0).unwrap();
        assert_eq!(
            eq.terms[0],
            PtolemyTerm {
                sign: 1,
                exp_l: -1,
                exp_m: 1,
                factors: (GammaVar::Var(slope("1/0")), GammaVar::Var(slope("4/1"))),
            }
        );
        assert_eq!(
            eq.terms[1],
            PtolemyTerm {
                sign: -1,
                exp_l: -1,
                exp_m: 2,
                factors: (GammaVar::Var(slope("4/1")), GammaVar::One(slope("3/1"))),
            }
        );
        assert_eq!(eq.neg_factors, (GammaVar::One(slope("3/1")), GammaVar::One(slope("3/1"))));
        assert_eq!(
            eq.render(RenderStyle::SlPlain),
            "L^(-1)*M*g[1/0]*g[4/1] - L^(-1)*M^2*g[4/1]*g[3/1] - g[3/1]^2 = 0"
        );
    }

    #[test]
    fn second_exterior_equation_golden() {
        let d = data();
        let eq = tet_ptolemy_equation(&d, 1).unwrap();
        assert_eq!(
            eq.render(RenderStyle::SlPlain),
            "-L^(-1)*M^2*g[3/1]^2 + M*g[4/1]*g[1/0] - g[3/1]*g[4/1] = 0"
        );
        assert_eq!(eq.terms[0].sign, -1);
        assert_eq!(eq.terms[1].sign, 1);
        assert_eq!((eq.terms[1].exp_l, eq.terms[1].exp_m), (0, 1));
    }

    #[test]
    fn exterior_equation_half_exponent_styles() {
        let d = data();
        let eq = tet_ptolemy_equation(&d, 0).unwrap();
        assert_eq!(
            eq.render(RenderStyle::PslPlain),
            "l^(-1/2)*m^(1/2)*g[1/0]*g[4/1] - l^(-1/2)*m*g[4/1]*g[3/1] - g[3/1]^2 = 0"
        );
        assert_eq!(
            eq.render(RenderStyle::PslLatex),
            "\\ell^{-1/2} \\sqrt{m} \\gamma_{1/0} \\gamma_{4/1} \
             - \\ell^{-1/2} m \\gamma_{4/1} \\gamma_{3/1} - \\gamma_{3/1}^2 = 0"
        );
    }

    #[test]
    fn exterior_equation_rejects_bad_tets() {
        let d = data();
        assert!(matches!(
            tet_ptolemy_equation(&d, 2),
            Err(PtolemyError::NotOutsideTet { tet: 2 })
        ));
        assert!(matches!(
            tet_ptolemy_equation(&d, 9),
            Err(PtolemyError::IndexOutOfRange { tet: 9, num_tets: 4 })
        ));
    }

    #[test]
    fn closed_forms_satisfy_exterior_equations() {
        let d = data();
        let forms = d.outside_forms().unwrap();
        let lookup = |s: Slope| forms.get(&s).cloned();
        for tet in d.outside_tets() {
            let eq = tet_ptolemy_equation(&d, tet).unwrap();
            let residual = eq.substitute(&lookup).unwrap();
            assert!(residual.is_zero(), "tetrahedron {tet}: residual {residual}");
        }
    }

    #[test]
    fn substitute_reports_missing_gamma() {
        let d = data();
        let eq = tet_ptolemy_equation(&d, 0).unwrap();
        let err = eq.substitute(&|_| None).unwrap_err();
        assert!(matches!(err, PtolemyError::MissingGamma { .. }));
    }

    #[test]
    fn single_step_walk_equations() {
        let d = data();
        let walk = walk_to(slope("1/1")).unwrap();
        let (eqs, fold) = lst_equations(&d, &walk).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(
            eqs[0].render(RenderStyle::SlPlain),
            "g[4/1]*g[2/1] + g[3/1]^2 - g[1/0]^2 = 0"
        );
        assert_eq!(fold.render(RenderStyle::SlPlain), "g[1/0] = g[2/1]");
        assert_eq!(
            fold.render(RenderStyle::PslLatex),
            "\\gamma_{1/0} = \\gamma_{2/1}"
        );
    }

    #[test]
    fn leading_walk_equations_golden() {
        // The first three layered relations are shared by every long walk.
        let d = data();
        let walk = walk_to(slope("1/5")).unwrap();
        let (eqs, _) = lst_equations(&d, &walk).unwrap();
        let rendered: Vec<String> =
            eqs.iter().take(3).map(|e| e.render(RenderStyle::SlPlain)).collect();
        assert_eq!(
            rendered,
            vec![
                "g[4/1]*g[2/1] + g[3/1]^2 - g[1/0]^2 = 0",
                "g[3/1]*g[1/1] + g[1/0]^2 - g[2/1]^2 = 0",
                "g[2/1]*g[0/1] + g[1/0]^2 - g[1/1]^2 = 0",
            ]
        );
    }

    #[test]
    fn negative_walk_equations_golden() {
        let d = data();
        let walk = walk_to(slope("-1/3")).unwrap();
        let (eqs, fold) = lst_equations(&d, &walk).unwrap();
        assert_eq!(
            eqs[3].render(RenderStyle::SlPlain),
            "g[1/1]*g[-1/1] + g[1/0]^2 - g[0/1]^2 = 0"
        );
        assert_eq!(fold.render(RenderStyle::SlPlain), "g[0/1] = g[-1/2]");
    }

    #[test]
    fn fold_can_involve_the_unit_gamma() {
        let d = data();
        let walk = walk_to(slope("10/3")).unwrap();
        let (_, fold) = lst_equations(&d, &walk).unwrap();
        assert!(fold.pivot.is_unit());
        assert_eq!(fold.render(RenderStyle::SlPlain), "g[3/1] = g[7/2]");
    }

    #[test]
    fn empty_walk_is_degenerate() {
        let d = data();
        let mut walk = walk_to(slope("1/1")).unwrap();
        walk.steps.clear();
        assert!(matches!(lst_equations(&d, &walk), Err(PtolemyError::DegenerateWalk)));
    }

    #[test]
    fn equation_json_round_trips() {
        let d = data();
        let eq = tet_ptolemy_equation(&d, 0).unwrap();
        let json = eq.render(RenderStyle::Json);
        let back: PtolemyEquation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, eq);
    }

    #[test]
    fn loader_rejects_tampered_exponent_matrix() {
        let raw = include_str!("../data/whitehead_sister.json");
        let mut v: serde_json::Value = serde_json::from_str(raw).unwrap();
        v["nz"][0][0] = serde_json::json!(5);
        let err = ParentData::from_json_str(&v.to_string()).unwrap_err();
        assert!(matches!(err, PtolemyError::DataMismatch(_)));
    }

    #[test]
    fn loader_rejects_unknown_fields_and_garbage() {
        let raw = include_str!("../data/whitehead_sister.json");
        let mut v: serde_json::Value = serde_json::from_str(raw).unwrap();
        v["surprise"] = serde_json::json!(1);
        assert!(matches!(
            ParentData::from_json_str(&v.to_string()),
            Err(PtolemyError::BadData(_))
        ));
        assert!(ParentData::from_json_str("not json").is_err());
    }

    #[test]
    fn validation_flags_tampered_exponent_entry() {
        let mut d = data();
        d.nz[0][0] += 1;
        let report = validate_parent(&d);
        assert!(!report.all_passed());
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert!(failed.contains(&"nz-rederives"));
        assert!(failed.contains(&"nz-times-b-is-c"));
    }

    #[test]
    fn validation_flags_filled_cusp_sign_entry() {
        let mut d = data();
        d.b_vec[4] = 1;
        let report = validate_parent(&d);
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert!(failed.contains(&"b-zero-on-filled-tets"));
    }

    #[test]
    fn validation_flags_tampered_incidence() {
        let mut d = data();
        d.incidence[1][0] += 1;
        let report = validate_parent(&d);
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert!(failed.contains(&"nz-rederives"));
        assert!(failed.contains(&"edge-map-matches-incidence"));
        assert!(failed.contains(&"edge-rows-sum-six"));
    }

    #[test]
    fn validation_flags_missing_closed_form() {
        let mut d = data();
        d.outside_gamma_forms.remove(&slope("4/1"));
        let report = validate_parent(&d);
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert!(failed.contains(&"outside-forms-satisfy-tet-equations"));
    }

    #[test]
    fn validation_never_panics_on_malformed_shapes() {
        let mut d = data();
        d.nz.pop();
        let report = validate_parent(&d);
        assert!(!report.all_passed());
        assert!(report.checks.iter().any(|c| c.name == "table-shapes" && !c.passed));
    }

    #[test]
    fn b_vector_solver_finds_valid_solution() {
        let d = data();
        let zero: Vec<usize> = d.filled_cusp_tets().iter().flat_map(|&j| [2 * j, 2 * j + 1]).collect();
        let x = solve_b_vector(d.nz(), d.c_vec(), &zero).unwrap();
        for &i in &zero {
            assert!(x[i].is_zero());
        }
        for (row, &cr) in d.nz().iter().zip(d.c_vec()) {
            let dot: BigInt = row.iter().zip(&x).map(|(&a, xi)| BigInt::from(a) * xi).sum();
            assert_eq!(dot, BigInt::from(cr));
        }
    }

    #[test]
    fn b_vector_solver_detects_insolubility() {
        // 2x = 1 has no integer solution.
        assert!(solve_b_vector(&[vec![2]], &[1], &[]).is_none());
        // x = 1 with x forced to zero.
        assert!(solve_b_vector(&[vec![1]], &[1], &[0]).is_none());
        // Solvable underdetermined system: x + 3y = 5.
        let x = solve_b_vector(&[vec![1, 3]], &[5], &[]).unwrap();
        assert_eq!(&x[0] + &x[1] * BigInt::from(3), BigInt::from(5));
    }

    #[test]
    fn edge_class_strings_round_trip() {
        for s in ["3/1", "1/0", "e"] {
            let c: EdgeClass = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("0/0".parse::<EdgeClass>().is_err());
    }

    #[test]
    fn edge_class_lookup_checks_range() {
        let d = data();
        assert_eq!(
            d.edge_class_of(0, EdgeLabel::E01).unwrap(),
            EdgeClass::Slope(slope("1/0"))
        );
        assert_eq!(d.edge_class_of(2, EdgeLabel::E01).unwrap(), EdgeClass::Internal);
        assert!(matches!(
            d.edge_class_of(4, EdgeLabel::E01),
            Err(PtolemyError::IndexOutOfRange { .. })
        ));
    }
}
