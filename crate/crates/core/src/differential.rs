//! The grade-one operator `d` on the tensor algebra and its iterates.
//!
//! On a canonical monomial `d^{a1}x_{i1} (x) ... (x) d^{am}x_{im} r`,
//! `d` raises each letter in turn with weight `q^{a1 + ... + a_{j-1}}`
//! (a letter already at grade 2 contributes nothing since `d^3 x = 0`) and
//! appends `q^{a1 + ... + am} dx_s D_s(r)` for the coefficient.

use num_traits::One;

use crate::calculus::CalculusContext;
use crate::freealg::AlgebraElement;
use crate::scalar::{q_integer, q_power, CycScalar};
use crate::tensoralg::{DLetter, DWord, TensorElement};

/// `d w`.
pub fn diff(ctx: &CalculusContext, w: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (word, r) in w.terms() {
        let mut prefix_grade = 0i64;
        for (pos, letter) in word.letters().iter().enumerate() {
            if letter.grade == 1 {
                let mut raised = word.clone();
                raised.0[pos].grade = 2;
                out.add_monomial(raised, r, &q_power(prefix_grade));
            }
            prefix_grade += letter.grade as i64;
        }
        let tail_weight = q_power(prefix_grade);
        for (s, ds) in ctx.partials(r).into_iter().enumerate() {
            out.add_monomial(word.pushed(DLetter::d1(s)), &ds, &tail_weight);
        }
    }
    out
}

/// `d` applied `times` times.
pub fn diff_n(ctx: &CalculusContext, w: &TensorElement, times: usize) -> TensorElement {
    let mut cur = w.clone();
    for _ in 0..times {
        if cur.is_zero() {
            break;
        }
        cur = diff(ctx, &cur);
    }
    cur
}

fn word(letters: &[(u8, usize)]) -> DWord {
    DWord(letters.iter().map(|&(grade, i)| DLetter { grade, index: i as u16 }).collect())
}

/// `d u = dx_l D_l(u)` written out from partial derivatives alone.
pub fn expand_d1(ctx: &CalculusContext, u: &AlgebraElement) -> TensorElement {
    ctx.d1(u)
}

/// `d^2 u = d~^2 u + q dx_l (x) dx_m D_m D_l(u)`.
pub fn expand_d2(ctx: &CalculusContext, u: &AlgebraElement) -> TensorElement {
    let n = ctx.n();
    let q = CycScalar::q();
    let mut out = ctx.d2_tilde(u);
    for (l, dl) in ctx.partials(u).iter().enumerate() {
        for m in 0..n {
            out.add_monomial(word(&[(1, l), (1, m)]), &ctx.partial(m, dl), &q);
        }
    }
    out
}

/// `d^3 u = q[2]_q d^2x_l (x) dx_m D_mD_l(u) + q^2 dx_l (x) d^2x_m D_mD_l(u)
///        + dx_l (x) dx_m (x) dx_p D_pD_mD_l(u)`.
pub fn expand_d3(ctx: &CalculusContext, u: &AlgebraElement) -> TensorElement {
    let n = ctx.n();
    let c21 = &CycScalar::q() * &q_integer(2);
    let c12 = q_power(2);
    let one = CycScalar::one();
    let mut out = TensorElement::zero();
    for (l, dl) in ctx.partials(u).iter().enumerate() {
        for (m, dml) in ctx.partials(dl).iter().enumerate() {
            out.add_monomial(word(&[(2, l), (1, m)]), dml, &c21);
            out.add_monomial(word(&[(1, l), (2, m)]), dml, &c12);
            for p in 0..n {
                out.add_monomial(word(&[(1, l), (1, m), (1, p)]), &ctx.partial(p, dml), &one);
            }
        }
    }
    out
}

/// `d xi_k^{ij}` from the expansion formula.
pub fn dxi(ctx: &CalculusContext, i: usize, j: usize, k: usize) -> TensorElement {
    expand_d1(ctx, ctx.xi().entry(i, k, j))
}

/// `d^2 xi_k^{ij}` from the expansion formula.
pub fn d2xi(ctx: &CalculusContext, i: usize, j: usize, k: usize) -> TensorElement {
    expand_d2(ctx, ctx.xi().entry(i, k, j))
}

/// `d^3 xi_k^{ij}` from the expansion formula.
pub fn d3xi(ctx: &CalculusContext, i: usize, j: usize, k: usize) -> TensorElement {
    expand_d3(ctx, ctx.xi().entry(i, k, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::tests::{arb_element, x};
    use crate::tensoralg::tests::{arb_tensor, sample_xi};
    use crate::tensoralg::tensor_mul;
    use crate::xi::XiHomomorphism;
    use proptest::prelude::*;

    fn ctx() -> CalculusContext {
        CalculusContext::new(sample_xi())
    }

    #[test]
    fn generator_chain() {
        let c = ctx();
        for i in 0..2 {
            let xi_ = TensorElement::from_algebra(x(i));
            assert_eq!(diff(&c, &xi_), TensorElement::dx(i));
            assert_eq!(diff(&c, &TensorElement::dx(i)), TensorElement::d2x(i));
            assert!(diff(&c, &TensorElement::d2x(i)).is_zero());
            assert!(diff_n(&c, &xi_, 3).is_zero());
        }
        for k in 1..5 {
            assert!(diff_n(&c, &TensorElement::one(), k).is_zero());
        }
    }

    #[test]
    fn two_letter_word() {
        // d(dx1 (x) dx2) = d2x1 (x) dx2 + q dx1 (x) d2x2
        let c = ctx();
        let w = TensorElement::word(word(&[(1, 0), (1, 1)]));
        let expected = &TensorElement::word(word(&[(2, 0), (1, 1)]))
            + &TensorElement::word(word(&[(1, 0), (2, 1)])).scale(&CycScalar::q());
        assert_eq!(diff(&c, &w), expected);
    }

    #[test]
    fn commutative_dxi() {
        // xi_k^{ij} = delta_jk x_i, so d xi_k^{ij} = delta_jk dx_i
        let c = CalculusContext::new(XiHomomorphism::commutative(2));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let expected = if j == k { TensorElement::dx(i) } else { TensorElement::zero() };
                    assert_eq!(dxi(&c, i, j, k), expected);
                    assert!(d3xi(&c, i, j, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn constant_entries_have_no_differentials() {
        let c = CalculusContext::new(XiHomomorphism::constant(2, CycScalar::q()));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert!(dxi(&c, i, j, k).is_zero());
                    assert!(d2xi(&c, i, j, k).is_zero());
                    assert!(d3xi(&c, i, j, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn raw_d3_does_not_vanish() {
        // d^3 (x1 x1 x2) has a nonzero dx dx dx part in the commutative preset
        let c = CalculusContext::new(XiHomomorphism::commutative(2));
        let u = TensorElement::from_algebra(&(&x(0) * &x(0)) * &x(1));
        assert!(!diff_n(&c, &u, 3).is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn iterates_match_expansions(u in arb_element(2, 3)) {
            let c = ctx();
            let t = TensorElement::from_algebra(u.clone());
            prop_assert_eq!(diff(&c, &t), expand_d1(&c, &u));
            prop_assert_eq!(diff_n(&c, &t, 2), expand_d2(&c, &u));
            prop_assert_eq!(diff_n(&c, &t, 3), expand_d3(&c, &u));
        }

        #[test]
        fn linear(a in arb_tensor(2, 2, 2), b in arb_tensor(2, 2, 2), s in (-3i64..3, -3i64..3)) {
            let c = ctx();
            let alpha = CycScalar::from_ints(s.0, s.1);
            let lhs = diff(&c, &(&a.scale(&alpha) + &b));
            let rhs = &diff(&c, &a).scale(&alpha) + &diff(&c, &b);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn grade_raising(a in arb_tensor(2, 3, 2)) {
            let c = ctx();
            for (g, part) in a.grade_components() {
                let d = diff(&c, &part);
                prop_assert!(d.is_zero() || d.homogeneous_grade() == Some(g + 1));
            }
        }

        #[test]
        fn unit_coefficient_words_satisfy_raw_q_leibniz(w1 in crate::tensoralg::tests::arb_dword(2, 3), b in arb_tensor(2, 2, 2)) {
            // For a bare d-word the rule holds exactly in the tensor algebra.
            let c = ctx();
            let xi = c.xi();
            let w = TensorElement::word(w1.clone());
            let lhs = diff(&c, &tensor_mul(xi, &w, &b));
            let rhs = &tensor_mul(xi, &diff(&c, &w), &b)
                + &tensor_mul(xi, &w, &diff(&c, &b)).scale(&q_power(w1.grade() as i64));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
