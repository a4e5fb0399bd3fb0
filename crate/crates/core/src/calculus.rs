//! Right partial derivatives and the first/second order differentials on `A`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::freealg::{AlgebraElement, Word};
use crate::scalar::CycScalar;
use crate::tensoralg::{DLetter, DWord, TensorElement};
use crate::xi::XiHomomorphism;

/// The coordinate calculus determined by `xi`.
///
/// `D_k` is computed on words by recursion on the leading generator,
/// `D_k(x_i w) = delta_ik w + sum_j xi_k^{ij} D_j(w)`, and memoized per word
/// (all `k` at once). The memo is shared behind a lock, so one context can
/// serve parallel verification tasks.
#[derive(Debug)]
pub struct CalculusContext {
    xi: Arc<XiHomomorphism>,
    memo: RwLock<HashMap<Word, Arc<Vec<AlgebraElement>>>>,
}

impl CalculusContext {
    pub fn new(xi: XiHomomorphism) -> Self {
        CalculusContext::from_arc(Arc::new(xi))
    }

    pub fn from_arc(xi: Arc<XiHomomorphism>) -> Self {
        CalculusContext { xi, memo: RwLock::new(HashMap::new()) }
    }

    pub fn xi(&self) -> &XiHomomorphism {
        &self.xi
    }

    pub fn n(&self) -> usize {
        self.xi.n()
    }

    /// `[D_0(w), ..., D_{n-1}(w)]` for a single word.
    pub fn word_partials(&self, w: &Word) -> Arc<Vec<AlgebraElement>> {
        if let Some(v) = self.memo.read().unwrap().get(w) {
            return v.clone();
        }
        let n = self.n();
        let out = match w.letters() {
            [] => vec![AlgebraElement::zero(); n],
            [first, rest @ ..] => {
                let i = *first as usize;
                let tail = Word(rest.to_vec());
                let tail_partials = self.word_partials(&tail);
                (0..n)
                    .map(|k| {
                        let mut acc = if k == i { AlgebraElement::word(tail.clone()) } else { AlgebraElement::zero() };
                        for (j, dj) in tail_partials.iter().enumerate() {
                            let e = self.xi.entry(i, k, j);
                            if !e.is_zero() && !dj.is_zero() {
                                acc.add_assign_scaled(&(e * dj), &CycScalar::one());
                            }
                        }
                        acc
                    })
                    .collect()
            }
        };
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(w.clone(), out.clone());
        out
    }

    /// `D_k(v)`.
    pub fn partial(&self, k: usize, v: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, c) in v.terms() {
            out.add_assign_scaled(&self.word_partials(w)[k], c);
        }
        out
    }

    /// All `D_k(v)` at once.
    pub fn partials(&self, v: &AlgebraElement) -> Vec<AlgebraElement> {
        let mut out = vec![AlgebraElement::zero(); self.n()];
        for (w, c) in v.terms() {
            for (acc, d) in out.iter_mut().zip(self.word_partials(w).iter()) {
                acc.add_assign_scaled(d, c);
            }
        }
        out
    }

    /// `d^1 v = sum_k dx_k D_k(v)`.
    pub fn d1(&self, v: &AlgebraElement) -> TensorElement {
        self.letter_expansion(1, v)
    }

    /// `d~^2 v = sum_k d^2x_k D_k(v)`, the canonical second-order differential.
    pub fn d2_tilde(&self, v: &AlgebraElement) -> TensorElement {
        self.letter_expansion(2, v)
    }

    fn letter_expansion(&self, grade: u8, v: &AlgebraElement) -> TensorElement {
        self.partials(v)
            .into_iter()
            .enumerate()
            .map(|(k, c)| (DWord(vec![DLetter { grade, index: k as u16 }]), c))
            .collect()
    }
}
