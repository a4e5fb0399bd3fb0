//! The graded two-sided ideal `I_q` and operations modulo it.
//!
//! `I_q` is generated by five families, all obtained by differentiating the
//! commutation rules `x_i d^a x_j = d^a x_k xi_k^{ij}`. Those commutation rules
//! themselves hold identically in the canonical representation and are not
//! listed as generators.

mod membership;
mod rewrite;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::calculus::CalculusContext;
use crate::differential::{d2xi, d3xi, dxi};
use crate::scalar::{q_power, CycScalar};
use crate::tensoralg::{tensor_mul, TensorElement};

pub use membership::{Bounds, MembershipStatus, MembershipVerdict, WitnessTerm, DEFAULT_SIZE_CAP};
pub use rewrite::{LetterOrder, Rewriter, RuleMode};

/// Generator family of `I_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `dx_i (x) dx_j - q dx_k (x) d xi_k^{ij}`
    #[serde(rename = "rel1")]
    Rel1,
    /// `dx_i (x) d2x_j - q^2 d2x_k (x) d xi_k^{ij}`
    #[serde(rename = "rel-2-2")]
    Rel22,
    /// `d2x_i (x) dx_j + (1-q) d2x_k (x) d xi_k^{ij} - q^2 dx_k (x) d^2 xi_k^{ij}`
    #[serde(rename = "rel2")]
    Rel2,
    /// `d^3 xi_k^{ij}`, one generator per `k`
    #[serde(rename = "rel3")]
    Rel3,
    /// `d2x_i (x) d2x_j - q d2x_k (x) d^2 xi_k^{ij}`
    #[serde(rename = "rel4")]
    Rel4,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Rel1, Family::Rel22, Family::Rel2, Family::Rel3, Family::Rel4];

    pub fn grade(self) -> usize {
        match self {
            Family::Rel1 => 2,
            Family::Rel22 | Family::Rel2 | Family::Rel3 => 3,
            Family::Rel4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Rel1 => "rel1",
            Family::Rel22 => "rel-2-2",
            Family::Rel2 => "rel2",
            Family::Rel3 => "rel3",
            Family::Rel4 => "rel4",
        }
    }
}

/// Identifies one generator; indices are 0-based, `k` only for `rel3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub family: Family,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{}", self.family.name(), self.i + 1, self.j + 1)?;
        if let Some(k) = self.k {
            write!(f, ",{}", k + 1)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GeneratorId,
    pub element: TensorElement,
}

/// The generating set of `I_q` for a given calculus, built lazily.
#[derive(Debug)]
pub struct IdealContext {
    calc: Arc<CalculusContext>,
    generators: OnceLock<Vec<Generator>>,
}

impl IdealContext {
    pub fn new(calc: Arc<CalculusContext>) -> Self {
        IdealContext { calc, generators: OnceLock::new() }
    }

    pub fn calculus(&self) -> &CalculusContext {
        &self.calc
    }

    pub fn calculus_arc(&self) -> &Arc<CalculusContext> {
        &self.calc
    }

    pub fn n(&self) -> usize {
        self.calc.n()
    }

    /// The generators for one index pair, in family order; `rel3`
    /// contributes `n` entries. Zero generators are kept.
    pub fn ideal_generators(&self, i: usize, j: usize) -> Vec<Generator> {
        let calc = &*self.calc;
        let xi = calc.xi();
        let n = calc.n();
        let one = CycScalar::one();
        let q = CycScalar::q();
        let q2 = q_power(2);
        let one_minus_q = &one - &q;

        let pair = |a: TensorElement, b: TensorElement| tensor_mul(xi, &a, &b);
        let mut rel1 = pair(TensorElement::dx(i), TensorElement::dx(j));
        let mut rel22 = pair(TensorElement::dx(i), TensorElement::d2x(j));
        let mut rel2 = pair(TensorElement::d2x(i), TensorElement::dx(j));
        let mut rel4 = pair(TensorElement::d2x(i), TensorElement::d2x(j));
        let mut out = Vec::with_capacity(4 + n);
        let mut rel3 = Vec::with_capacity(n);
        for k in 0..n {
            let d1 = dxi(calc, i, j, k);
            let d2 = d2xi(calc, i, j, k);
            rel1.add_assign_scaled(&pair(TensorElement::dx(k), d1.clone()), &-&q);
            rel22.add_assign_scaled(&pair(TensorElement::d2x(k), d1.clone()), &-&q2);
            rel2.add_assign_scaled(&pair(TensorElement::d2x(k), d1), &one_minus_q);
            rel2.add_assign_scaled(&pair(TensorElement::dx(k), d2.clone()), &-&q2);
            rel4.add_assign_scaled(&pair(TensorElement::d2x(k), d2), &-&q);
            rel3.push(Generator {
                id: GeneratorId { family: Family::Rel3, i, j, k: Some(k) },
                element: d3xi(calc, i, j, k),
            });
        }
        let id = |family| GeneratorId { family, i, j, k: None };
        out.push(Generator { id: id(Family::Rel1), element: rel1 });
        out.push(Generator { id: id(Family::Rel22), element: rel22 });
        out.push(Generator { id: id(Family::Rel2), element: rel2 });
        out.extend(rel3);
        out.push(Generator { id: id(Family::Rel4), element: rel4 });
        out
    }

    /// All generators over all index pairs, cached.
    pub fn all_generators(&self) -> &[Generator] {
        self.generators.get_or_init(|| {
            let n = self.n();
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).flat_map(|(i, j)| self.ideal_generators(i, j)).collect()
        })
    }

    pub fn generator(&self, id: &GeneratorId) -> Option<&Generator> {
        self.all_generators().iter().find(|g| g.id == *id)
    }

    pub fn generator_of(&self, family: Family, i: usize, j: usize) -> &TensorElement {
        &self
            .all_generators()
            .iter()
            .find(|g| g.id.family == family && g.id.i == i && g.id.j == j)
            .expect("family without k index")
            .element
    }

    /// Decides membership of `e` in `I_q` within `bounds`.
    pub fn membership(&self, e: &TensorElement, bounds: &Bounds) -> crate::error::Result<MembershipVerdict> {
        membership::membership(self, e, bounds)
    }

    /// True if every `D_l(xi_k^{ij})` is a scalar, so all generators are
    /// scalar combinations of two-letter words.
    pub fn has_linear_xi(&self) -> bool {
        let calc = &*self.calc;
        let n = calc.n();
        (0..n).all(|i| {
            (0..n).all(|k| {
                (0..n).all(|j| calc.partials(calc.xi().entry(i, k, j)).iter().all(|d| d.as_scalar().is_some()))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensoralg::{DLetter, DWord};
    use crate::xi::XiHomomorphism;

    fn ideal(xi: XiHomomorphism) -> IdealContext {
        IdealContext::new(Arc::new(CalculusContext::new(xi)))
    }

    fn w(letters: &[(u8, u16)]) -> DWord {
        DWord(letters.iter().map(|&(grade, index)| DLetter { grade, index }).collect())
    }

    #[test]
    fn commutative_rel1() {
        // dx1 (x) dx2 - q dx2 (x) dx1
        let ic = ideal(XiHomomorphism::commutative(2));
        let g = ic.generator_of(Family::Rel1, 0, 1);
        let expected = &TensorElement::word(w(&[(1, 0), (1, 1)])) - &TensorElement::word(w(&[(1, 1), (1, 0)])).scale(&CycScalar::q());
        assert_eq!(g, &expected);
    }

    #[test]
    fn constant_rel3_vanishes() {
        let ic = ideal(XiHomomorphism::constant(2, CycScalar::from(1)));
        for g in ic.all_generators() {
            if g.id.family == Family::Rel3 {
                assert!(g.element.is_zero());
            }
        }
    }

    #[test]
    fn generator_grades() {
        let ic = ideal(XiHomomorphism::scalar_twist(2, CycScalar::q()));
        for g in ic.all_generators() {
            if !g.element.is_zero() {
                assert_eq!(g.element.homogeneous_grade(), Some(g.id.family.grade()), "{}", g.id);
            }
        }
        assert_eq!(ic.all_generators().len(), 4 * (4 + 2));
    }

    #[test]
    fn linearity_detection() {
        assert!(ideal(XiHomomorphism::commutative(2)).has_linear_xi());
        assert!(ideal(XiHomomorphism::constant(2, CycScalar::q())).has_linear_xi());
        let quadratic = XiHomomorphism::from_fn(2, |i, k, j| {
            if j == k {
                &crate::freealg::AlgebraElement::gen(i) * &crate::freealg::AlgebraElement::gen(i)
            } else {
                crate::freealg::AlgebraElement::zero()
            }
        })
        .unwrap();
        assert!(!ideal(quadratic).has_linear_xi());
    }
}
