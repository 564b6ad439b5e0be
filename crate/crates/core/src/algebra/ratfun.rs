//! Reduced rational functions: the closed forms taken by the γ variables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::{exact_div, poly_gcd, AlgebraError, LaurentPoly, RenderStyle};

/// A quotient of two [`LaurentPoly`] values in canonical reduced form.
///
/// Invariants, restored by every constructor and operation:
/// - the denominator is nonzero, has no negative exponents, is not divisible
///   by `L` or `M`, and has a positive leading coefficient (lexicographic
///   order, `L` major) — monomial and sign units all live in the numerator;
/// - numerator and denominator have unit GCD.
///
/// Equal values therefore have equal `(num, den)` pairs, so derived equality
/// is semantic equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// The operation selector for [`RatFun::combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    /// `x + y`
    Add,
    /// `x − y`
    Sub,
    /// `x · y`
    Mul,
    /// `x / y`
    Div,
    /// `x²` (the second operand is ignored)
    Square,
}

impl RatFun {
    /// Reduces and normalizes `num / den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self { num, den: LaurentPoly::one() });
        }
        let g = poly_gcd(&num, &den);
        let n = exact_div(&num, &g).expect("gcd divides the numerator");
        let d = exact_div(&den, &g).expect("gcd divides the denominator");

        // Push the denominator's monomial-and-sign unit into the numerator.
        let (ml, mm) = d.min_exponents().expect("denominator is nonzero");
        let d = d.mul_monomial(-ml, -mm);
        let n = n.mul_monomial(-ml, -mm);
        let flip = d.leading().expect("nonzero").1.is_negative();
        let (n, d) = if flip { (-&n, -&d) } else { (n, d) };
        debug_assert!(poly_gcd(&n, &d).is_one(), "reduction left a common factor");
        Ok(Self { num: n, den: d })
    }

    /// Wraps a polynomial as `p / 1`.
    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    /// The zero function `0 / 1`.
    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    /// The constant function `1 / 1`.
    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    /// Numerator in canonical form.
    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator in canonical form.
    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// True iff this is the zero function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff this is the constant 1.
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Internal constructor for denominators known to be nonzero.
    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        Self::new(num, den).expect("denominator is a product of nonzero polynomials")
    }

    /// `self / rhs`, failing on a zero divisor.
    pub fn div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// `self²`.
    pub fn square(&self) -> Self {
        Self::reduced(&self.num * &self.num, &self.den * &self.den)
    }

    /// Applies one field operation; `Square` ignores `y`.
    pub fn combine(op: CombineOp, x: &Self, y: &Self) -> Result<Self, AlgebraError> {
        Ok(match op {
            CombineOp::Add => x + y,
            CombineOp::Sub => x - y,
            CombineOp::Mul => x * y,
            CombineOp::Div => x.div(y)?,
            CombineOp::Square => x.square(),
        })
    }

    /// Approximate complex evaluation; fails if the denominator evaluates to
    /// exactly zero in binary64.
    pub fn eval(&self, l0: Complex64, m0: Complex64) -> Result<Complex64, AlgebraError> {
        let d = self.den.eval(l0, m0)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(l0, m0)? / d)
    }

    /// Renders as `num`, or `(num) / (den)` when the denominator is not 1.
    pub fn render(&self, style: RenderStyle) -> String {
        if self.den.is_one() {
            self.num.render(style)
        } else {
            format!("({}) / ({})", self.num.render(style), self.den.render(style))
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::SlPlain))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl Add for &RatFun {
    type Output = RatFun;

    fn add(self, rhs: &RatFun) -> RatFun {
        RatFun::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;

    fn sub(self, rhs: &RatFun) -> RatFun {
        RatFun::reduced(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFun {
    type Output = RatFun;

    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;

    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(l, m, c)| ((l, m), BigInt::from(c))))
    }

    /// γ_{1/0} as a raw quotient: (M⁴ − L²) / (M³ − L²M).
    fn gamma_one_zero() -> RatFun {
        RatFun::new(p(&[(0, 4, 1), (2, 0, -1)]), p(&[(0, 3, 1), (2, 1, -1)])).unwrap()
    }

    /// γ_{4/1} as a raw quotient: (M² − L²) / (LM² − L).
    fn gamma_four_one() -> RatFun {
        RatFun::new(p(&[(0, 2, 1), (2, 0, -1)]), p(&[(1, 2, 1), (1, 0, -1)])).unwrap()
    }

    #[test]
    fn common_factor_cancels() {
        let r = RatFun::new(p(&[(2, 0, 1), (0, 2, -1)]), p(&[(1, 0, 1), (0, 1, -1)])).unwrap();
        assert_eq!(r.num(), &p(&[(1, 0, 1), (0, 1, 1)]));
        assert!(r.den().is_one());
    }

    #[test]
    fn zero_numerator_normalizes_to_zero_over_one() {
        let r = RatFun::new(LaurentPoly::zero(), p(&[(5, -3, 7)])).unwrap();
        assert!(r.is_zero());
        assert!(r.den().is_one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            RatFun::new(LaurentPoly::one(), LaurentPoly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn gamma_four_one_canonical_form() {
        // The monomial L and the sign move out of the denominator:
        // (M² − L²) / (L(M² − 1)) = (−L + L⁻¹M²) / (M² − 1).
        let r = gamma_four_one();
        assert_eq!(r.num(), &p(&[(1, 0, -1), (-1, 2, 1)]));
        assert_eq!(r.den(), &p(&[(0, 2, 1), (0, 0, -1)]));
    }

    #[test]
    fn gamma_one_zero_canonical_form() {
        // (M⁴ − L²) / (M(M² − L²)) = (L²M⁻¹ − M³) / (L² − M²): clearing the
        // denominator's M and its negative leading sign negates the numerator.
        let r = gamma_one_zero();
        assert_eq!(r.num(), &p(&[(2, -1, 1), (0, 3, -1)]));
        assert_eq!(r.den(), &p(&[(2, 0, 1), (0, 2, -1)]));
    }

    #[test]
    fn normalization_is_idempotent() {
        let r = gamma_one_zero();
        let again = RatFun::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn square_of_simple_quotient() {
        let den = p(&[(0, 2, 1), (0, 0, -1)]);
        let r = RatFun::new(LaurentPoly::var_m(), den.clone()).unwrap();
        let sq = r.square();
        assert_eq!(sq.num(), &p(&[(0, 2, 1)]));
        assert_eq!(sq.den(), &(&den * &den));
    }

    #[test]
    fn subtraction_of_equal_values_is_zero() {
        let r = gamma_one_zero();
        assert!((&r - &r).is_zero());
    }

    #[test]
    fn first_inside_variable_closed_form() {
        // (γ_{1/0}² − 1) / γ_{4/1} reduces to the closed form of γ_{2/1}:
        // (L⁵M² − 2L⁵ + L⁵M⁻² − LM⁸ + 2LM⁶ − LM⁴) / (L⁶ − 3L⁴M² + 3L²M⁴ − M⁶).
        let g10 = gamma_one_zero();
        let g41 = gamma_four_one();
        let g21 = (&g10.square() - &RatFun::one()).div(&g41).unwrap();
        assert_eq!(
            g21.num(),
            &p(&[(5, 2, 1), (5, 0, -2), (5, -2, 1), (1, 8, -1), (1, 6, 2), (1, 4, -1)])
        );
        assert_eq!(
            g21.den(),
            &p(&[(6, 0, 1), (4, 2, -3), (2, 4, 3), (0, 6, -1)])
        );
    }

    #[test]
    fn division_by_zero_function_fails() {
        let r = gamma_one_zero();
        assert_eq!(r.div(&RatFun::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn combine_dispatches_all_operations() {
        let x = gamma_one_zero();
        let y = gamma_four_one();
        assert_eq!(RatFun::combine(CombineOp::Add, &x, &y).unwrap(), &x + &y);
        assert_eq!(RatFun::combine(CombineOp::Sub, &x, &y).unwrap(), &x - &y);
        assert_eq!(RatFun::combine(CombineOp::Mul, &x, &y).unwrap(), &x * &y);
        assert_eq!(RatFun::combine(CombineOp::Div, &x, &y).unwrap(), x.div(&y).unwrap());
        assert_eq!(RatFun::combine(CombineOp::Square, &x, &y).unwrap(), x.square());
    }

    #[test]
    fn evaluation_matches_symbolic_arithmetic() {
        let x = gamma_one_zero();
        let y = gamma_four_one();
        let sum = &x + &y;
        let l0 = Complex64::new(0.3, 0.7);
        let m0 = Complex64::new(-1.2, 0.4);
        let direct = x.eval(l0, m0).unwrap() + y.eval(l0, m0).unwrap();
        let combined = sum.eval(l0, m0).unwrap();
        assert!((direct - combined).norm() < 1e-10 * direct.norm().max(1.0));
    }
}
