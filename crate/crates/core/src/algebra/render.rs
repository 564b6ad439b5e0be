//! Deterministic text renderings of polynomials.
//!
//! The `sl` styles print the internal variables `L`, `M` as-is. The `psl`
//! styles print the same polynomial in the half-exponent variables ℓ = L²,
//! m = M²: every exponent is halved, even exponents become integer powers of
//! `l`/`m` (or `\ell`/`m` in LaTeX), and odd exponents become half-integer
//! powers — `x^(k/2)` in plain text, `\sqrt{x}` (for exponent ½) or
//! `x^{k/2}` in LaTeX. The `json` style emits the interchange schema.
//!
//! Terms always appear in descending lexicographic order with `L` major, the
//! same order that picks leading terms and sign conventions, so renderings are
//! canonical strings suitable for exact comparison.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use super::LaurentPoly;

/// Output style selector for [`render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// Plain text in `L`, `M`: `L^6 - L^5*M^20 + …`
    SlPlain,
    /// LaTeX in `L`, `M`: `L^6 - L^5 M^{20} + …`
    SlLatex,
    /// Plain text in `l`, `m` with halved exponents: `l^3 - l^(5/2)*m^10 + …`
    PslPlain,
    /// LaTeX in `\ell`, `m` with halved exponents: `\ell^3 - \ell^{5/2} m^{10} + …`
    PslLatex,
    /// The canonical interchange JSON.
    Json,
}

impl RenderStyle {
    /// All styles with their canonical names, for help text and validation.
    pub const ALL: [(RenderStyle, &'static str); 5] = [
        (RenderStyle::SlPlain, "sl_plain"),
        (RenderStyle::SlLatex, "sl_latex"),
        (RenderStyle::PslPlain, "psl_plain"),
        (RenderStyle::PslLatex, "psl_latex"),
        (RenderStyle::Json, "json"),
    ];

    /// The canonical name (`sl_plain`, `psl_latex`, …).
    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(s, _)| *s == self)
            .map(|(_, n)| *n)
            .expect("every style is listed")
    }
}

impl fmt::Display for RenderStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RenderStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(style, _)| *style)
            .ok_or_else(|| format!("unknown render style {s:?} (expected one of sl_plain, sl_latex, psl_plain, psl_latex, json)"))
    }
}

/// Renders a polynomial into the requested style. The zero polynomial renders
/// as `0` in the text styles and as an empty term list in JSON.
pub fn render(p: &LaurentPoly, style: RenderStyle) -> String {
    if style == RenderStyle::Json {
        return p.to_json_string();
    }
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&(el, em), c)) in p.terms_desc().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&term_body(el, em, &c.abs(), style));
    }
    out
}

/// One term without its sign: optional coefficient magnitude plus variable
/// factors, joined by `*` (plain) or a space (LaTeX).
fn term_body(el: i64, em: i64, mag: &BigInt, style: RenderStyle) -> String {
    let mut factors: Vec<String> = Vec::with_capacity(3);
    let one = BigInt::from(1);
    if mag != &one || (el == 0 && em == 0) {
        factors.push(mag.to_string());
    }
    if let Some(f) = var_factor(Variable::L, el, style) {
        factors.push(f);
    }
    if let Some(f) = var_factor(Variable::M, em, style) {
        factors.push(f);
    }
    let joiner = if latexish(style) { " " } else { "*" };
    factors.join(joiner)
}

#[derive(Clone, Copy)]
enum Variable {
    L,
    M,
}

fn latexish(style: RenderStyle) -> bool {
    matches!(style, RenderStyle::SlLatex | RenderStyle::PslLatex)
}

/// The rendered power of one variable, or `None` when the exponent is zero.
fn var_factor(var: Variable, k: i64, style: RenderStyle) -> Option<String> {
    if k == 0 {
        return None;
    }
    Some(match style {
        RenderStyle::SlPlain => {
            let name = match var {
                Variable::L => "L",
                Variable::M => "M",
            };
            plain_int_power(name, k)
        }
        RenderStyle::SlLatex => {
            let name = match var {
                Variable::L => "L",
                Variable::M => "M",
            };
            latex_power(name, &k.to_string())
        }
        RenderStyle::PslPlain => {
            let name = match var {
                Variable::L => "l",
                Variable::M => "m",
            };
            if k % 2 == 0 {
                plain_int_power(name, k / 2)
            } else {
                format!("{name}^({k}/2)")
            }
        }
        RenderStyle::PslLatex => {
            let name = match var {
                Variable::L => "\\ell",
                Variable::M => "m",
            };
            if k % 2 == 0 {
                latex_power(name, &(k / 2).to_string())
            } else if k == 1 {
                format!("\\sqrt{{{name}}}")
            } else {
                latex_power(name, &format!("{k}/2"))
            }
        }
        RenderStyle::Json => unreachable!("JSON is handled before term rendering"),
    })
}

/// Plain-text power with integer exponent: bare name for exponent 1,
/// `name^k` for larger positive `k`, `name^(k)` for negative `k`.
fn plain_int_power(name: &str, k: i64) -> String {
    if k == 1 {
        name.to_string()
    } else if k > 0 {
        format!("{name}^{k}")
    } else {
        format!("{name}^({k})")
    }
}

/// LaTeX power: bare name for exponent 1, braces exactly when the exponent
/// string has more than one character.
fn latex_power(name: &str, exp: &str) -> String {
    if exp == "1" {
        name.to_string()
    } else if exp.len() == 1 {
        format!("{name}^{exp}")
    } else {
        format!("{name}^{{{exp}}}")
    }
}

/// The *exponent text* a variable would carry in a style, used by equation
/// printers that attach monomial coefficients to products of other symbols.
pub(crate) fn monomial_prefix(el: i64, em: i64, coeff_mag: &BigInt, style: RenderStyle) -> String {
    term_body(el, em, coeff_mag, style)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(l, m, c)| ((l, m), BigInt::from(c))))
    }

    /// The 12 exterior-basis terms of the first nontrivial filling polynomial.
    fn twelve_term_poly() -> LaurentPoly {
        p(&[
            (6, 0, 1),
            (5, 20, -1),
            (5, 18, 2),
            (5, 16, -1),
            (4, 38, -1),
            (4, 36, -2),
            (2, 74, 2),
            (2, 72, 1),
            (1, 94, 1),
            (1, 92, -2),
            (1, 90, 1),
            (0, 110, -1),
        ])
    }

    #[test]
    fn zero_renders_as_zero() {
        for (style, _) in RenderStyle::ALL {
            if style != RenderStyle::Json {
                assert_eq!(render(&LaurentPoly::zero(), style), "0");
            }
        }
        assert_eq!(
            render(&LaurentPoly::zero(), RenderStyle::Json),
            r#"{"vars":["L","M"],"terms":[]}"#
        );
    }

    #[test]
    fn sl_plain_basics() {
        assert_eq!(render(&p(&[(2, 0, 1), (0, 2, -1)]), RenderStyle::SlPlain), "L^2 - M^2");
        assert_eq!(render(&p(&[(0, 0, -7)]), RenderStyle::SlPlain), "-7");
        assert_eq!(render(&p(&[(0, 0, 1)]), RenderStyle::SlPlain), "1");
        assert_eq!(render(&p(&[(1, 0, 1)]), RenderStyle::SlPlain), "L");
        assert_eq!(render(&p(&[(1, 0, 2)]), RenderStyle::SlPlain), "2*L");
        assert_eq!(render(&p(&[(-1, 2, 1)]), RenderStyle::SlPlain), "L^(-1)*M^2");
        assert_eq!(
            render(&p(&[(1, 0, -1), (0, 1, -1)]), RenderStyle::SlPlain),
            "-L - M"
        );
    }

    #[test]
    fn sl_plain_twelve_term_golden() {
        assert_eq!(
            render(&twelve_term_poly(), RenderStyle::SlPlain),
            "L^6 - L^5*M^20 + 2*L^5*M^18 - L^5*M^16 - L^4*M^38 - 2*L^4*M^36 \
             + 2*L^2*M^74 + L^2*M^72 + L*M^94 - 2*L*M^92 + L*M^90 - M^110"
        );
    }

    #[test]
    fn sl_latex_uses_braces_only_for_multichar_exponents() {
        assert_eq!(
            render(&p(&[(6, 0, 1), (5, 20, -1), (5, 18, 2)]), RenderStyle::SlLatex),
            "L^6 - L^5 M^{20} + 2 L^5 M^{18}"
        );
        assert_eq!(render(&p(&[(-1, 0, 1)]), RenderStyle::SlLatex), "L^{-1}");
    }

    #[test]
    fn psl_plain_twelve_term_golden() {
        assert_eq!(
            render(&twelve_term_poly(), RenderStyle::PslPlain),
            "l^3 - l^(5/2)*m^10 + 2*l^(5/2)*m^9 - l^(5/2)*m^8 - l^2*m^19 - 2*l^2*m^18 \
             + 2*l*m^37 + l*m^36 + l^(1/2)*m^47 - 2*l^(1/2)*m^46 + l^(1/2)*m^45 - m^55"
        );
    }

    #[test]
    fn psl_latex_twelve_term_golden() {
        assert_eq!(
            render(&twelve_term_poly(), RenderStyle::PslLatex),
            "\\ell^3 - \\ell^{5/2} m^{10} + 2 \\ell^{5/2} m^9 - \\ell^{5/2} m^8 \
             - \\ell^2 m^{19} - 2 \\ell^2 m^{18} + 2 \\ell m^{37} + \\ell m^{36} \
             + \\sqrt{\\ell} m^{47} - 2 \\sqrt{\\ell} m^{46} + \\sqrt{\\ell} m^{45} - m^{55}"
        );
    }

    #[test]
    fn psl_negative_half_exponents() {
        // L⁻¹M² in psl: l^(-1/2)·m.
        assert_eq!(render(&p(&[(-1, 2, 1)]), RenderStyle::PslPlain), "l^(-1/2)*m");
        assert_eq!(
            render(&p(&[(-1, 2, 1)]), RenderStyle::PslLatex),
            "\\ell^{-1/2} m"
        );
        // L⁻² in psl: integer exponent −1.
        assert_eq!(render(&p(&[(-2, 0, 1)]), RenderStyle::PslPlain), "l^(-1)");
        assert_eq!(render(&p(&[(-2, 0, 1)]), RenderStyle::PslLatex), "\\ell^{-1}");
    }

    #[test]
    fn json_style_round_trips() {
        let a = twelve_term_poly();
        let s = render(&a, RenderStyle::Json);
        assert_eq!(LaurentPoly::from_json_str(&s).unwrap(), a);
    }

    #[test]
    fn style_names_round_trip() {
        for (style, name) in RenderStyle::ALL {
            assert_eq!(name.parse::<RenderStyle>().unwrap(), style);
            assert_eq!(style.name(), name);
        }
        assert!("fancy".parse::<RenderStyle>().is_err());
    }
}
