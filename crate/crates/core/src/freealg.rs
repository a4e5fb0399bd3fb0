//! The free associative unital algebra on generators `x1..xn` over `Q(q)`.
//!
//! Generators are numbered from 0 internally and rendered 1-based.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::CycScalar;

/// A monomial of the free algebra; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        Word(vec![i as u16])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All words of length exactly `len` over `n` generators, in word order.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::unit()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..n).map(move |i| {
                        let mut v = w.0.clone();
                        v.push(i as u16);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All words of length at most `max_len`.
    pub fn all_up_to(n: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(n, l)).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A noncommutative polynomial: a sparse map from words to nonzero scalars.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, CycScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        AlgebraElement::scalar(CycScalar::one())
    }

    pub fn scalar(c: CycScalar) -> Self {
        AlgebraElement::term(Word::unit(), c)
    }

    /// The generator `x_{i+1}`.
    pub fn gen(i: usize) -> Self {
        AlgebraElement::term(Word::gen(i), CycScalar::one())
    }

    pub fn word(w: Word) -> Self {
        AlgebraElement::term(w, CycScalar::one())
    }

    pub fn term(w: Word, c: CycScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        AlgebraElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CycScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> CycScalar {
        self.terms.get(w).cloned().unwrap_or_else(CycScalar::zero)
    }

    /// Returns the scalar value if the element has no nonempty words.
    pub fn as_scalar(&self) -> Option<CycScalar> {
        match self.terms.len() {
            0 => Some(CycScalar::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &AlgebraElement, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &CycScalar) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// `self * s` for a single word; concatenation is injective, so no terms merge.
    pub fn right_mul_word(&self, s: &Word) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(w, v)| (w.concat(s), v.clone())).collect() }
    }

    /// Maximum word length among terms.
    pub fn word_degree(&self) -> Result<usize> {
        self.terms.keys().map(Word::len).max().ok_or(Error::EmptyElement)
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max().map(usize::from)
    }

    /// Checks that every generator index is below `n`.
    pub fn check_generators(&self, n: usize) -> Result<()> {
        match self.max_generator() {
            Some(m) if m >= n => Err(Error::Dimension { expected: n, found: m + 1 }),
            _ => Ok(()),
        }
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &CycScalar::one());
        out
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-CycScalar::one());
        out
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-CycScalar::one())
    }
}

impl FromIterator<(Word, CycScalar)> for AlgebraElement {
    fn from_iter<I: IntoIterator<Item = (Word, CycScalar)>>(iter: I) -> Self {
        let mut out = AlgebraElement::zero();
        for (w, c) in iter {
            out.add_term(w, &c);
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn x(i: usize) -> AlgebraElement {
        AlgebraElement::gen(i)
    }

    #[test]
    fn addition_collects_words() {
        assert_eq!(&x(0) + &x(0), x(0).scale(&2.into()));
        assert!((&x(0) + &-&x(0)).is_zero());
        let x12 = &x(0) * &x(1);
        let lhs = &(&x12 + &AlgebraElement::one()) + &x12.scale(&CycScalar::q());
        let rhs = &x12.scale(&CycScalar::from_ints(1, 1)) + &AlgebraElement::one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_free() {
        let a = &x(0) * &x(1);
        let b = &x(1) * &x(0);
        assert_ne!(a, b);
        assert_eq!(a, AlgebraElement::word(Word(vec![0, 1])));
        assert_eq!(&AlgebraElement::one() * &a, a);
        let lhs = &(&x(0) + &x(1)) * &x(0);
        assert_eq!(lhs, &(&x(0) * &x(0)) + &(&x(1) * &x(0)));
    }

    #[test]
    fn degrees() {
        let w = &(&x(0) * &x(1)) * &x(0);
        assert_eq!(w.word_degree(), Ok(3));
        assert_eq!(AlgebraElement::one().word_degree(), Ok(0));
        let mixed = &x(0).scale(&CycScalar::q()) + &(&x(1) * &x(1));
        assert_eq!(mixed.word_degree(), Ok(2));
        assert_eq!(AlgebraElement::zero().word_degree(), Err(Error::EmptyElement));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut ws = vec![Word(vec![1]), Word(vec![0, 0]), Word::unit(), Word(vec![0])];
        ws.sort();
        assert_eq!(ws, vec![Word::unit(), Word(vec![0]), Word(vec![1]), Word(vec![0, 0])]);
        assert_eq!(Word::all_up_to(2, 2).len(), 7);
    }

    #[test]
    fn generator_check() {
        assert!(x(2).check_generators(2).is_err());
        assert!(x(1).check_generators(2).is_ok());
    }

    pub fn arb_element(n: usize, max_len: usize) -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec(
            (prop::collection::vec(0..n as u16, 0..=max_len), -3i64..4, -3i64..4),
            0..4,
        )
        .prop_map(|ts| {
            ts.into_iter().map(|(w, a, b)| (Word(w), CycScalar::from_ints(a, b))).collect()
        })
    }

    proptest! {
        #[test]
        fn associativity(u in arb_element(2, 2), v in arb_element(2, 2), w in arb_element(2, 2)) {
            prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
        }

        #[test]
        fn degree_additive_on_monomials(a in prop::collection::vec(0u16..3, 0..4), b in prop::collection::vec(0u16..3, 0..4)) {
            let u = AlgebraElement::word(Word(a.clone()));
            let v = AlgebraElement::word(Word(b.clone()));
            prop_assert_eq!((&u * &v).word_degree().unwrap(), a.len() + b.len());
        }
    }
}
