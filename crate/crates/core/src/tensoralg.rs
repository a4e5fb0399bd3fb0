//! The tensor algebra of `M(1) + M(2)` over `A`, kept in canonical form.
//!
//! Every element is a sum of d-words `d^{a1}x_{i1} (x) ... (x) d^{am}x_{im}`
//! each carrying a single algebra coefficient on the far right. Coefficients
//! that would land in the middle of a word during multiplication are pushed
//! rightwards through the remaining letters with `xi`, so two elements are
//! equal exactly when their term maps agree.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::freealg::{AlgebraElement, Word};
use crate::scalar::CycScalar;
use crate::xi::XiHomomorphism;

/// `dx_i` (grade 1) or `d^2 x_i` (grade 2). Grade-3 letters vanish and are
/// never constructed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct DLetter {
    pub grade: u8,
    pub index: u16,
}

impl DLetter {
    pub fn d1(i: usize) -> Self {
        DLetter { grade: 1, index: i as u16 }
    }

    pub fn d2(i: usize) -> Self {
        DLetter { grade: 2, index: i as u16 }
    }
}

/// A tensor word of d-letters; the empty word is the grade-0 slot.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct DWord(pub Vec<DLetter>);

impl DWord {
    pub fn empty() -> Self {
        DWord(Vec::new())
    }

    pub fn grade(&self) -> usize {
        self.0.iter().map(|l| l.grade as usize).sum()
    }

    pub fn letters(&self) -> &[DLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &DWord) -> DWord {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        DWord(v)
    }

    pub fn pushed(&self, l: DLetter) -> DWord {
        let mut v = self.0.clone();
        v.push(l);
        DWord(v)
    }

    /// All d-words of total grade `grade` over `n` indices.
    pub fn all_of_grade(n: usize, grade: usize) -> Vec<DWord> {
        let mut by_grade: Vec<Vec<DWord>> = vec![vec![DWord::empty()]];
        for g in 1..=grade {
            let mut cur = Vec::new();
            for a in 1..=2usize.min(g) {
                for w in &by_grade[g - a] {
                    for i in 0..n {
                        cur.push(w.pushed(DLetter { grade: a as u8, index: i as u16 }));
                    }
                }
            }
            cur.sort();
            by_grade.push(cur);
        }
        by_grade.swap_remove(grade)
    }
}

impl Ord for DWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.iter().map(|l| l.grade).cmp(other.0.iter().map(|l| l.grade)))
            .then_with(|| self.0.iter().map(|l| l.index).cmp(other.0.iter().map(|l| l.index)))
    }
}

impl PartialOrd for DWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the tensor algebra in canonical right-coefficient form.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct TensorElement {
    terms: BTreeMap<DWord, AlgebraElement>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn one() -> Self {
        TensorElement::from_algebra(AlgebraElement::one())
    }

    pub fn scalar(c: CycScalar) -> Self {
        TensorElement::from_algebra(AlgebraElement::scalar(c))
    }

    pub fn from_algebra(u: AlgebraElement) -> Self {
        TensorElement::monomial(DWord::empty(), u)
    }

    /// `word * coeff`, already canonical.
    pub fn monomial(word: DWord, coeff: AlgebraElement) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        TensorElement { terms }
    }

    /// The bare word with unit coefficient.
    pub fn word(word: DWord) -> Self {
        TensorElement::monomial(word, AlgebraElement::one())
    }

    pub fn letter(l: DLetter) -> Self {
        TensorElement::word(DWord(vec![l]))
    }

    pub fn dx(i: usize) -> Self {
        TensorElement::letter(DLetter::d1(i))
    }

    pub fn d2x(i: usize) -> Self {
        TensorElement::letter(DLetter::d2(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DWord, &AlgebraElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &DWord) -> AlgebraElement {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The grade-0 part as an algebra element.
    pub fn algebra_part(&self) -> AlgebraElement {
        self.coeff(&DWord::empty())
    }

    pub fn add_monomial(&mut self, w: DWord, c: &AlgebraElement, s: &CycScalar) {
        if c.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.scale(s));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_scaled(c, s);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &TensorElement, s: &CycScalar) {
        for (w, c) in &other.terms {
            self.add_monomial(w.clone(), c, s);
        }
    }

    pub fn scale(&self, s: &CycScalar) -> TensorElement {
        let mut out = TensorElement::zero();
        out.add_assign_scaled(self, s);
        out
    }

    /// Right multiplication by an algebra element; needs no `xi`.
    pub fn right_mul(&self, u: &AlgebraElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (w, c) in &self.terms {
            out.add_monomial(w.clone(), &(c * u), &CycScalar::one());
        }
        out
    }

    /// Grades present, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(DWord::grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The single grade of a nonzero homogeneous element.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(DWord::grade).max().unwrap_or(0)
    }

    /// Largest word degree among the right coefficients.
    pub fn word_degree(&self) -> usize {
        self.terms.values().filter_map(|c| c.word_degree().ok()).max().unwrap_or(0)
    }

    pub fn grade_component(&self, grade: usize) -> TensorElement {
        TensorElement {
            terms: self.terms.iter().filter(|(w, _)| w.grade() == grade).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Partition by grade; the parts sum back to `self`.
    pub fn grade_components(&self) -> BTreeMap<usize, TensorElement> {
        let mut out: BTreeMap<usize, TensorElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.grade()).or_default().terms.insert(w.clone(), c.clone());
        }
        out
    }

    /// True when every coefficient is a scalar.
    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.as_scalar().is_some())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(w, c)| w.0.iter().map(|l| l.index as usize).chain(c.max_generator()))
            .max()
    }
}

/// Moves `r` from the left of `word` to its right: returns the canonical
/// terms of `r * word` as `(word', coeff)` pairs.
pub fn push_through(xi: &XiHomomorphism, r: &AlgebraElement, word: &DWord) -> BTreeMap<DWord, AlgebraElement> {
    let mut cur: BTreeMap<DWord, AlgebraElement> = BTreeMap::new();
    if r.is_zero() {
        return cur;
    }
    cur.insert(DWord(Vec::with_capacity(word.len())), r.clone());
    for letter in word.letters() {
        let j = letter.index as usize;
        let mut next: BTreeMap<DWord, AlgebraElement> = BTreeMap::new();
        for (prefix, c) in &cur {
            for (w, s) in c.terms() {
                if w.is_empty() {
                    next.entry(prefix.pushed(*letter)).or_default().add_term(Word::unit(), s);
                    continue;
                }
                let m = xi.apply_word(w);
                for k in 0..xi.n() {
                    let e = m.get(k, j);
                    if e.is_zero() {
                        continue;
                    }
                    let l = DLetter { grade: letter.grade, index: k as u16 };
                    next.entry(prefix.pushed(l)).or_default().add_assign_scaled(e, s);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

/// Product in the tensor algebra.
pub fn tensor_mul(xi: &XiHomomorphism, w: &TensorElement, t: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero();
    let one = CycScalar::one();
    for (w1, r1) in &w.terms {
        for (w2, r2) in &t.terms {
            if w2.is_empty() {
                out.add_monomial(w1.clone(), &(r1 * r2), &one);
                continue;
            }
            if let Some(s) = r1.as_scalar() {
                out.add_monomial(w1.concat(w2), r2, &s);
                continue;
            }
            for (w2p, c) in push_through(xi, r1, w2) {
                out.add_monomial(w1.concat(&w2p), &(&c * r2), &one);
            }
        }
    }
    out
}

/// Left multiplication by an algebra element.
pub fn left_mul(xi: &XiHomomorphism, u: &AlgebraElement, t: &TensorElement) -> TensorElement {
    tensor_mul(xi, &TensorElement::from_algebra(u.clone()), t)
}

impl<'a> Add<&'a TensorElement> for &'a TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &CycScalar::one());
        out
    }
}

impl<'a> Sub<&'a TensorElement> for &'a TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-CycScalar::one());
        out
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&-CycScalar::one())
    }
}

impl FromIterator<(DWord, AlgebraElement)> for TensorElement {
    fn from_iter<I: IntoIterator<Item = (DWord, AlgebraElement)>>(iter: I) -> Self {
        let mut out = TensorElement::zero();
        for (w, c) in iter {
            out.add_monomial(w, &c, &CycScalar::one());
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::freealg::tests::{arb_element, x};
    use proptest::prelude::*;

    pub fn sample_xi() -> XiHomomorphism {
        XiHomomorphism::from_fn(2, |i, k, j| match (i, k, j) {
            (0, 0, 0) => x(1),
            (0, 1, 0) => AlgebraElement::scalar(CycScalar::q()),
            (0, 1, 1) => x(0),
            (1, 0, 1) => &x(0) + &x(1),
            (1, 1, 1) => AlgebraElement::one(),
            (1, 1, 0) => x(1).scale(&CycScalar::from(2)),
            _ => AlgebraElement::zero(),
        })
        .unwrap()
    }

    fn w(letters: &[(u8, u16)]) -> DWord {
        DWord(letters.iter().map(|&(grade, index)| DLetter { grade, index }).collect())
    }

    #[test]
    fn unit_coefficients_concatenate() {
        let xi = sample_xi();
        let p = tensor_mul(&xi, &TensorElement::dx(0), &TensorElement::dx(1));
        assert_eq!(p, TensorElement::word(w(&[(1, 0), (1, 1)])));
    }

    #[test]
    fn coefficient_pushes_through() {
        let xi = sample_xi();
        for i in 0..2 {
            let s = x(1);
            let lhs = tensor_mul(&xi, &TensorElement::dx(0).right_mul(&x(i)), &TensorElement::dx(1).right_mul(&s));
            let mut rhs = TensorElement::zero();
            for k in 0..2 {
                rhs.add_monomial(w(&[(1, 0), (1, k as u16)]), &(xi.entry(i, k, 1) * &s), &CycScalar::one());
            }
            assert_eq!(lhs, rhs);
            // second basic relation: x_i d2x_j = d2x_k xi_k^{ij}
            let lhs2 = left_mul(&xi, &x(i), &TensorElement::d2x(1));
            let mut rhs2 = TensorElement::zero();
            for k in 0..2 {
                rhs2.add_monomial(w(&[(2, k as u16)]), xi.entry(i, k, 1), &CycScalar::one());
            }
            assert_eq!(lhs2, rhs2);
        }
    }

    #[test]
    fn grade_components_examples() {
        let e = &TensorElement::dx(0) + &TensorElement::d2x(0);
        let parts = e.grade_components();
        assert_eq!(parts[&1], TensorElement::dx(0));
        assert_eq!(parts[&2], TensorElement::d2x(0));
        let u = TensorElement::from_algebra(x(0));
        assert_eq!(u.grade_components().into_iter().collect::<Vec<_>>(), vec![(0, u.clone())]);
        let ww = TensorElement::monomial(w(&[(1, 0), (1, 1)]), x(1));
        assert_eq!(ww.grade_components()[&2], ww);
    }

    #[test]
    fn equality_is_canonical() {
        let xi = sample_xi();
        let a = left_mul(&xi, &x(0), &TensorElement::dx(0));
        let b: TensorElement = (0..2).map(|k| (w(&[(1, k as u16)]), xi.entry(0, k, 0).clone())).collect();
        assert_eq!(a, b);
        assert_ne!(
            TensorElement::word(w(&[(1, 0), (1, 1)])),
            TensorElement::word(w(&[(1, 1), (1, 0)]))
        );
        assert_eq!(&a + &TensorElement::zero(), a);
    }

    #[test]
    fn low_grade_shapes() {
        assert_eq!(DWord::all_of_grade(2, 0), vec![DWord::empty()]);
        assert!(DWord::all_of_grade(2, 1).iter().all(|w| w.len() == 1 && w.0[0].grade == 1));
        // T^2 = M(2) + M (x) M
        let g2 = DWord::all_of_grade(2, 2);
        assert_eq!(g2.len(), 6);
        assert!(g2.iter().all(|w| (w.len() == 1 && w.0[0].grade == 2) || (w.len() == 2 && w.0.iter().all(|l| l.grade == 1))));
        assert_eq!(DWord::all_of_grade(2, 4).len(), 44);
    }

    pub fn arb_dword(n: u16, max_len: usize) -> impl Strategy<Value = DWord> {
        prop::collection::vec((1u8..=2, 0..n), 0..=max_len)
            .prop_map(|v| DWord(v.into_iter().map(|(grade, index)| DLetter { grade, index }).collect()))
    }

    pub fn arb_tensor(n: usize, max_len: usize, max_deg: usize) -> impl Strategy<Value = TensorElement> {
        prop::collection::vec((arb_dword(n as u16, max_len), arb_element(n, max_deg)), 0..3)
            .prop_map(|ts| ts.into_iter().collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn associativity(a in arb_tensor(2, 2, 2), b in arb_tensor(2, 1, 2), c in arb_tensor(2, 1, 2)) {
            let xi = sample_xi();
            let lhs = tensor_mul(&xi, &tensor_mul(&xi, &a, &b), &c);
            let rhs = tensor_mul(&xi, &a, &tensor_mul(&xi, &b, &c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn grade_additive(a in arb_dword(2, 3), b in arb_dword(2, 3), u in arb_element(2, 2)) {
            let xi = sample_xi();
            let p = tensor_mul(&xi, &TensorElement::monomial(a.clone(), u), &TensorElement::word(b.clone()));
            if !p.is_zero() {
                prop_assert_eq!(p.homogeneous_grade(), Some(a.grade() + b.grade()));
            }
        }

        #[test]
        fn left_action_matches_xi(u in arb_element(2, 2), a in 1u8..=2, j in 0usize..2) {
            let xi = sample_xi();
            let lhs = left_mul(&xi, &u, &TensorElement::letter(DLetter { grade: a, index: j as u16 }));
            let rhs: TensorElement = xi
                .push_coefficient(&u, a, j)
                .unwrap()
                .into_iter()
                .map(|(k, c)| (DWord(vec![DLetter { grade: a, index: k as u16 }]), c))
                .collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn components_sum_back(t in arb_tensor(2, 3, 2)) {
            let mut sum = TensorElement::zero();
            for part in t.grade_components().values() {
                sum = &sum + part;
            }
            prop_assert_eq!(sum, t);
        }
    }
}
