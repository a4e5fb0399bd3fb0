//! Text, LaTeX and JSON output.
//!
//! Text output is valid parser input: `dx1 (*) d2x2 * (x1 + q*x2)`. Algebra
//! coefficients are always written to the right of their d-word.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::freealg::{AlgebraElement, Word};
use crate::scalar::{is_atomic, split_sign, CycScalar};
use crate::tensoralg::{DLetter, DWord, TensorElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Text,
    Latex,
}

/// Signed summands, joined into `a + b - c`.
fn join(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn latex_scalar(s: &CycScalar) -> String {
    let q_term = |b: &BigRational| {
        if b.is_one() {
            "q".to_string()
        } else if (-b).is_one() {
            "-q".to_string()
        } else {
            format!("{}q", latex_rational(b))
        }
    };
    match (s.re().is_zero(), s.q_part().is_zero()) {
        (true, true) => "0".into(),
        (false, true) => latex_rational(s.re()),
        (true, false) => q_term(s.q_part()),
        (false, false) if s.q_part().is_negative() => format!("{} - {}", latex_rational(s.re()), q_term(&-s.q_part())),
        (false, false) => format!("{} + {}", latex_rational(s.re()), q_term(s.q_part())),
    }
}

fn scalar_parts(s: &CycScalar, style: Style) -> (bool, String) {
    let (neg, _) = split_sign(s);
    let mag = if neg { -s } else { s.clone() };
    let text = match style {
        Style::Text => mag.to_string(),
        Style::Latex => latex_scalar(&mag),
    };
    (neg, text)
}

fn word_text(w: &Word, style: Style) -> String {
    match style {
        Style::Text => w.letters().iter().map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join("*"),
        Style::Latex => w.letters().iter().map(|i| format!("x^{{{}}}", i + 1)).collect(),
    }
}

fn letter_text(l: &DLetter, style: Style) -> String {
    match (style, l.grade) {
        (Style::Text, 1) => format!("dx{}", l.index + 1),
        (Style::Text, _) => format!("d{}x{}", l.grade, l.index + 1),
        (Style::Latex, 1) => format!("dx^{{{}}}", l.index + 1),
        (Style::Latex, _) => format!("d^{{{}}}x^{{{}}}", l.grade, l.index + 1),
    }
}

fn dword_text(w: &DWord, style: Style) -> String {
    let sep = match style {
        Style::Text => " (*) ",
        Style::Latex => "\\otimes ",
    };
    w.letters().iter().map(|l| letter_text(l, style)).collect::<Vec<_>>().join(sep)
}

fn paren(s: String, style: Style) -> String {
    match style {
        Style::Text => format!("({s})"),
        Style::Latex => format!("\\left({s}\\right)"),
    }
}

/// One summand `c * w` of an algebra element. A bare scalar needs no
/// parentheses when it comes `first` in a sum.
fn algebra_term(w: &Word, c: &CycScalar, style: Style, first: bool) -> (bool, String) {
    let (neg, mag) = scalar_parts(c, style);
    let atomic = is_atomic(c);
    if w.is_empty() {
        let body = if atomic || first { mag } else { paren(mag, style) };
        return (neg, body);
    }
    let word = word_text(w, style);
    let sep = if style == Style::Text { "*" } else { "\\," };
    let body = if atomic && mag == "1" {
        word
    } else if atomic {
        format!("{mag}{sep}{word}")
    } else {
        format!("{}{sep}{word}", paren(mag, style))
    };
    (neg, body)
}

fn algebra_parts(u: &AlgebraElement, style: Style) -> Vec<(bool, String)> {
    u.terms().enumerate().map(|(k, (w, c))| algebra_term(w, c, style, k == 0)).collect()
}

fn tensor_parts(t: &TensorElement, style: Style) -> Vec<(bool, String)> {
    let mut parts = Vec::new();
    for (w, r) in t.terms() {
        if w.is_empty() {
            // The grade-0 part sorts first, so its summands can be spliced in.
            parts.extend(algebra_parts(r, style));
            continue;
        }
        let word = dword_text(w, style);
        let sep = if style == Style::Text { " * " } else { "\\," };
        if r.num_terms() == 1 {
            let (cw, c) = r.terms().next().expect("one term");
            let (neg, mag) = scalar_parts(c, style);
            let body = if cw.is_empty() {
                if mag == "1" && is_atomic(c) {
                    word
                } else if is_atomic(c) {
                    format!("{word}{sep}{mag}")
                } else {
                    format!("{word}{sep}{}", paren(mag, style))
                }
            } else {
                let (_, coeff) = algebra_term(cw, &if neg { -c } else { c.clone() }, style, false);
                format!("{word}{sep}{coeff}")
            };
            parts.push((neg, body));
        } else {
            parts.push((false, format!("{word}{sep}{}", paren(join(algebra_parts(r, style)), style))));
        }
    }
    parts
}

pub fn text(t: &TensorElement) -> String {
    join(tensor_parts(t, Style::Text))
}

pub fn latex(t: &TensorElement) -> String {
    join(tensor_parts(t, Style::Latex))
}

pub fn text_algebra(u: &AlgebraElement) -> String {
    join(algebra_parts(u, Style::Text))
}

pub fn latex_algebra(u: &AlgebraElement) -> String {
    join(algebra_parts(u, Style::Latex))
}

pub fn latex_scalar_text(s: &CycScalar) -> String {
    latex_scalar(s)
}

/// Structured form: one entry per d-word with its letters and coefficient.
pub fn json(t: &TensorElement) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .map(|(w, r)| {
            let letters: Vec<Value> = w.letters().iter().map(|l| json!({"grade": l.grade, "index": l.index + 1})).collect();
            json!({"word": letters, "coefficient": text_algebra(r)})
        })
        .collect();
    json!({"text": text(t), "terms": terms})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::CalculusContext;
    use crate::freealg::tests::x;
    use crate::parse::parse_expression;
    use crate::tensoralg::tests::{arb_tensor, sample_xi};
    use crate::xi::XiHomomorphism;
    use proptest::prelude::*;

    fn dw(letters: &[DLetter]) -> DWord {
        DWord(letters.to_vec())
    }

    #[test]
    fn text_examples() {
        let r = &x(0) + &x(1).scale(&CycScalar::q());
        let t = TensorElement::monomial(dw(&[DLetter::d1(0), DLetter::d1(1)]), r);
        assert_eq!(text(&t), "dx1 (*) dx2 * (x1 + q*x2)");
        assert_eq!(text(&TensorElement::zero()), "0");
        assert_eq!(text(&TensorElement::dx(0)), "dx1");
        let minus_q = TensorElement::d2x(1).scale(&-CycScalar::q());
        assert_eq!(text(&minus_q), "-d2x2 * q");
        let mixed = &TensorElement::scalar(CycScalar::from_ints(1, 1)) + &TensorElement::dx(0).right_mul(&(&x(0) * &x(1)).scale(&CycScalar::rational(-1, 2)));
        assert_eq!(text(&mixed), "1 + q - dx1 * 1/2*x1*x2");
    }

    #[test]
    fn latex_examples() {
        let t = TensorElement::monomial(dw(&[DLetter::d2(0), DLetter::d1(1)]), x(0));
        assert_eq!(latex(&t), "d^{2}x^{1}\\otimes dx^{2}\\,x^{1}");
        let h = TensorElement::dx(0).scale(&CycScalar::rational(1, 2));
        assert_eq!(latex(&h), "dx^{1}\\,\\frac{1}{2}");
    }

    #[test]
    fn json_shape() {
        let v = json(&TensorElement::d2x(0).right_mul(&x(1)));
        assert_eq!(v["text"], "d2x1 * x2");
        assert_eq!(v["terms"][0]["word"][0]["grade"], 2);
        assert_eq!(v["terms"][0]["coefficient"], "x2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn text_round_trips(t in arb_tensor(2, 3, 2)) {
            let ctx = CalculusContext::new(sample_xi());
            prop_assert_eq!(parse_expression(&text(&t), &ctx).unwrap(), t);
        }

        #[test]
        fn text_round_trips_commutative(t in arb_tensor(2, 2, 2)) {
            let ctx = CalculusContext::new(XiHomomorphism::commutative(2));
            prop_assert_eq!(parse_expression(&text(&t), &ctx).unwrap(), t);
        }
    }
}
