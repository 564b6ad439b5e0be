//! The sparse bivariate Laurent polynomial type and its ring operations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{render, AlgebraError, RenderStyle};

/// A sparse Laurent polynomial in `L` and `M` with `BigInt` coefficients.
///
/// Terms are stored as a map from exponent pairs `(eL, eM)` to nonzero
/// coefficients, so equality of the maps is equality of polynomials. The
/// exponent pairs are ordered lexicographically with `L` major; "leading term"
/// always means the lexicographically greatest exponent pair under that order.
/// Exponents may be negative. Exponent arithmetic is checked and panics on
/// `i64` overflow, which is unreachable for any input this crate produces.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial (empty term map).
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(1)
    }

    /// A constant polynomial.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The single term `c·L^eL·M^eM`; yields the zero polynomial when `c = 0`.
    pub fn monomial(el: i64, em: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((el, em), c);
        }
        Self { terms }
    }

    /// The variable `L`.
    pub fn var_l() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// The variable `M`.
    pub fn var_m() -> Self {
        Self::monomial(0, 1, 1)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// duplicates and dropping zero totals.
    pub fn from_terms(iter: impl IntoIterator<Item = ((i64, i64), BigInt)>) -> Self {
        let mut out = Self::zero();
        for (exps, c) in iter {
            out.add_term(exps, c);
        }
        out
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c == &BigInt::from(1))
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of `(eL, eM)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    /// Terms in the canonical display order: descending lexicographic, `L` major.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter().rev()
    }

    /// The coefficient of `L^eL·M^eM` (zero if the term is absent).
    pub fn coefficient(&self, el: i64, em: i64) -> BigInt {
        self.terms.get(&(el, em)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The lexicographically greatest term, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(&(i64, i64), &BigInt)> {
        self.terms.last_key_value()
    }

    /// Componentwise minimum of all exponent pairs (`None` for zero).
    pub fn min_exponents(&self) -> Option<(i64, i64)> {
        self.fold_exponents(i64::min)
    }

    /// Componentwise maximum of all exponent pairs (`None` for zero).
    pub fn max_exponents(&self) -> Option<(i64, i64)> {
        self.fold_exponents(i64::max)
    }

    /// Greatest `L`-exponent (`None` for zero).
    pub fn deg_l(&self) -> Option<i64> {
        self.max_exponents().map(|(l, _)| l)
    }

    /// Greatest `M`-exponent (`None` for zero).
    pub fn deg_m(&self) -> Option<i64> {
        self.max_exponents().map(|(_, m)| m)
    }

    /// Least `L`-exponent (`None` for zero).
    pub fn ord_l(&self) -> Option<i64> {
        self.min_exponents().map(|(l, _)| l)
    }

    /// Least `M`-exponent (`None` for zero).
    pub fn ord_m(&self) -> Option<i64> {
        self.min_exponents().map(|(_, m)| m)
    }

    fn fold_exponents(&self, pick: fn(i64, i64) -> i64) -> Option<(i64, i64)> {
        self.terms.keys().copied().reduce(|(al, am), (bl, bm)| (pick(al, bl), pick(am, bm)))
    }

    /// Adds `c·L^eL·M^eM` in place, removing the slot if the total vanishes.
    pub(crate) fn add_term(&mut self, exps: (i64, i64), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Multiplies every term by `L^dl·M^dm`.
    pub fn mul_monomial(&self, dl: i64, dm: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(el, em), c)| {
                let el = el.checked_add(dl).expect("L-exponent overflow");
                let em = em.checked_add(dm).expect("M-exponent overflow");
                ((el, em), c.clone())
            })
            .collect();
        Self { terms }
    }

    /// Multiplies every coefficient by the integer `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&e, k)| (e, k * c)).collect();
        Self { terms }
    }

    /// Divides every coefficient by the integer `c`.
    ///
    /// Internal helper for content extraction; panics if any coefficient is
    /// not an exact multiple of `c`.
    pub(crate) fn divexact_scalar(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero(), "division of coefficients by zero");
        let terms = self
            .terms
            .iter()
            .map(|(&e, k)| {
                let (q, r) = num_integer::Integer::div_rem(k, c);
                assert!(r.is_zero(), "coefficient not divisible by claimed content");
                (e, q)
            })
            .collect();
        Self { terms }
    }

    /// `self^k` by repeated multiplication (`k = 0` gives 1).
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Removes the monomial-and-sign unit: multiplies by the unique `±L^i·M^j`
    /// making the minimum exponent of each variable 0 and the leading
    /// coefficient (lexicographic order, `L` major) positive.
    ///
    /// This is the canonical representative used by every equality-based
    /// comparison of results, since eliminations determine polynomials only up
    /// to such units.
    pub fn monomial_clear(&self) -> Result<Self, AlgebraError> {
        let (ml, mm) = self.min_exponents().ok_or(AlgebraError::ZeroPolynomial)?;
        let shifted = self.mul_monomial(-ml, -mm);
        let negative = shifted
            .leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        Ok(if negative { -&shifted } else { shifted })
    }

    /// Applies the variable substitution of a unimodular basis change:
    /// `L^i·M^j ↦ L^{d·i − c·j}·M^{−b·i + a·j}`.
    ///
    /// Equivalently `(L, M) ↦ (L^d M^{−b}, L^{−c} M^a)`. Unimodularity makes
    /// the exponent map injective, so the image has the same number of terms.
    pub fn substitute_basis(&self, ch: &BasisChange) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let el = checked_lin(ch.d, i, -ch.c, j);
            let em = checked_lin(-ch.b, i, ch.a, j);
            out.add_term((el, em), c.clone());
        }
        out
    }

    /// Evaluates at a complex point in binary64 arithmetic.
    ///
    /// The result is approximate (standard floating term summation); exactness
    /// lives in the symbolic layer, and evaluation exists only to support
    /// numeric cross-checks.
    pub fn eval(&self, l0: Complex64, m0: Complex64) -> Result<Complex64, AlgebraError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(el, em), c) in &self.terms {
            if el < 0 && l0.is_zero() {
                return Err(AlgebraError::PoleAtZero { var: 'L' });
            }
            if em < 0 && m0.is_zero() {
                return Err(AlgebraError::PoleAtZero { var: 'M' });
            }
            let coeff = c.to_f64().expect("BigInt-to-f64 conversion is total");
            acc += coeff * cpowi(l0, el) * cpowi(m0, em);
        }
        Ok(acc)
    }

    /// Renders in the requested output style. See [`render`].
    pub fn render(&self, style: RenderStyle) -> String {
        render(self, style)
    }

    /// Serializes to the canonical interchange JSON string.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    /// Parses the interchange JSON, rejecting schema violations, duplicate
    /// exponent pairs, and zero coefficients.
    pub fn from_json_str(s: &str) -> Result<Self, AlgebraError> {
        let repr: PolyRepr = serde_json::from_str(s)
            .map_err(|e| AlgebraError::BadPolynomialJson(e.to_string()))?;
        Self::try_from(repr)
    }
}

/// `a·x + b·y` with checked `i64` arithmetic.
fn checked_lin(a: i64, x: i64, b: i64, y: i64) -> i64 {
    a.checked_mul(x)
        .and_then(|p| b.checked_mul(y).and_then(|q| p.checked_add(q)))
        .expect("exponent overflow in basis substitution")
}

/// `z^k` for `i64` exponents, including negative ones.
fn cpowi(z: Complex64, k: i64) -> Complex64 {
    let k32: i32 = k.try_into().expect("evaluation exponent exceeds i32 range");
    z.powi(k32)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::SlPlain))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(&e, c)| (e, -c)).collect();
        LaurentPoly { terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(al, am), ac) in &self.terms {
            for (&(bl, bm), bc) in &rhs.terms {
                let el = al.checked_add(bl).expect("L-exponent overflow in product");
                let em = am.checked_add(bm).expect("M-exponent overflow in product");
                out.add_term((el, em), ac * bc);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// A unimodular 2×2 integer matrix `[[a, b], [c, d]]` describing a change of
/// the holonomy basis `(𝔩, 𝔪) ↦ (𝔩^a 𝔪^b, 𝔩^c 𝔪^d)`.
///
/// On polynomial variables this acts as `(L, M) ↦ (L^d M^{−b}, L^{−c} M^a)`;
/// see [`LaurentPoly::substitute_basis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisChange {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl BasisChange {
    /// Validates `a·d − b·c = ±1` and builds the change.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, AlgebraError> {
        let det = checked_lin(a, d, -b, c);
        if det == 1 || det == -1 {
            Ok(Self { a, b, c, d })
        } else {
            Err(AlgebraError::NotUnimodular { a, b, c, d })
        }
    }

    /// The identity change.
    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    /// Matrix entries `(a, b, c, d)`.
    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Determinant, always ±1.
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// The inverse change (also unimodular).
    pub fn inverse(&self) -> Self {
        let s = self.det();
        Self { a: s * self.d, b: -s * self.b, c: -s * self.c, d: s * self.a }
    }

    /// Matrix product `self · inner`: the change that applies `inner` first
    /// and then `self`, matching substitution order
    /// `p.substitute_basis(inner).substitute_basis(self)`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            a: checked_lin(self.a, inner.a, self.b, inner.c),
            b: checked_lin(self.a, inner.b, self.b, inner.d),
            c: checked_lin(self.c, inner.a, self.d, inner.c),
            d: checked_lin(self.c, inner.b, self.d, inner.d),
        }
    }
}

/// Serde shape of the interchange schema
/// `{"vars": ["L", "M"], "terms": [{"L": i, "M": j, "c": "coefficient"}, …]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    #[serde(rename = "L")]
    l: i64,
    #[serde(rename = "M")]
    m: i64,
    c: String,
}

impl From<&LaurentPoly> for PolyRepr {
    fn from(p: &LaurentPoly) -> Self {
        let terms = p
            .terms_desc()
            .map(|(&(l, m), c)| TermRepr { l, m, c: c.to_string() })
            .collect();
        PolyRepr { vars: vec!["L".into(), "M".into()], terms }
    }
}

impl TryFrom<PolyRepr> for LaurentPoly {
    type Error = AlgebraError;

    fn try_from(repr: PolyRepr) -> Result<Self, AlgebraError> {
        if repr.vars != ["L", "M"] {
            return Err(AlgebraError::BadPolynomialJson(format!(
                "vars must be [\"L\", \"M\"], got {:?}",
                repr.vars
            )));
        }
        let mut out = LaurentPoly::zero();
        for t in &repr.terms {
            let c = BigInt::from_str(&t.c).map_err(|_| {
                AlgebraError::BadPolynomialJson(format!(
                    "coefficient {:?} is not a decimal integer",
                    t.c
                ))
            })?;
            if c.is_zero() {
                return Err(AlgebraError::BadPolynomialJson(format!(
                    "zero coefficient at exponents ({}, {})",
                    t.l, t.m
                )));
            }
            if out.terms.insert((t.l, t.m), c).is_some() {
                return Err(AlgebraError::BadPolynomialJson(format!(
                    "duplicate exponent pair ({}, {})",
                    t.l, t.m
                )));
            }
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        Self::try_from(repr).map_err(D::Error::custom)
    }
}
