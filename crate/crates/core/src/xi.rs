//! The bimodule structure map `xi: A -> Mat_n(A)`.
//!
//! An algebra element passes from the left of a differential to its right by
//! `u d^a x_j = sum_k d^a x_k xi(u)[k][j]`. Matrices are indexed
//! `[row k][col j]`, so the generator data `xi_k^{ij}` lives at
//! `gen_matrix(i)[k][j]`, and `xi(uv) = xi(u) * xi(v)` as an ordinary
//! (noncommutative-entry) matrix product.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::freealg::{AlgebraElement, Word};
use crate::scalar::CycScalar;

/// A square matrix over the free algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XiMatrix {
    n: usize,
    entries: Vec<AlgebraElement>,
}

impl XiMatrix {
    pub fn zero(n: usize) -> Self {
        XiMatrix { n, entries: vec![AlgebraElement::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = XiMatrix::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = AlgebraElement::one();
        }
        m
    }

    /// Builds from rows; `rows[k][j]`.
    pub fn from_rows(rows: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(XiMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at row `k`, column `j`.
    pub fn get(&self, k: usize, j: usize) -> &AlgebraElement {
        &self.entries[k * self.n + j]
    }

    pub fn set(&mut self, k: usize, j: usize, v: AlgebraElement) {
        self.entries[k * self.n + j] = v;
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn mul(&self, rhs: &XiMatrix) -> XiMatrix {
        let n = self.n;
        let mut out = XiMatrix::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = AlgebraElement::zero();
                for m in 0..n {
                    let a = self.get(r, m);
                    let b = rhs.get(m, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign_scaled(&(a * b), &CycScalar::from(1));
                    }
                }
                out.entries[r * n + c] = acc;
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &XiMatrix, c: &CycScalar) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_assign_scaled(b, c);
        }
    }
}

/// The homomorphism `xi`, fixed by its values on the generators.
#[derive(Debug)]
pub struct XiHomomorphism {
    n: usize,
    gens: Vec<XiMatrix>,
    word_cache: RwLock<HashMap<Word, Arc<XiMatrix>>>,
}

impl Clone for XiHomomorphism {
    fn clone(&self) -> Self {
        XiHomomorphism::new(self.gens.clone()).expect("validated on construction")
    }
}

impl PartialEq for XiHomomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl XiHomomorphism {
    /// Any choice of generator matrices defines a homomorphism on the free
    /// algebra; only shapes and generator ranges are checked.
    pub fn new(gens: Vec<XiMatrix>) -> Result<Self> {
        let n = gens.len();
        if n == 0 {
            return Err(Error::Config("at least one generator is required".into()));
        }
        for m in &gens {
            if m.dim() != n {
                return Err(Error::Dimension { expected: n, found: m.dim() });
            }
            for e in m.entries() {
                e.check_generators(n)?;
            }
        }
        Ok(XiHomomorphism { n, gens, word_cache: RwLock::new(HashMap::new()) })
    }

    /// From the entry function `(i, k, j) -> xi_k^{ij}`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> AlgebraElement) -> Result<Self> {
        let gens = (0..n)
            .map(|i| {
                let rows = (0..n).map(|k| (0..n).map(|j| f(i, k, j)).collect()).collect();
                XiMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        XiHomomorphism::new(gens)
    }

    /// `xi_k^{ij} = delta_{jk} x_i`: algebra elements commute with differentials.
    pub fn commutative(n: usize) -> Self {
        Self::scalar_twist(n, CycScalar::from(1))
    }

    /// `xi_k^{ij} = c delta_{jk} x_i`.
    pub fn scalar_twist(n: usize, c: CycScalar) -> Self {
        XiHomomorphism::from_fn(n, |i, k, j| {
            if j == k {
                AlgebraElement::gen(i).scale(&c)
            } else {
                AlgebraElement::zero()
            }
        })
        .expect("preset shapes are valid")
    }

    /// `xi_k^{ij} = c delta_{jk}`: every generator acts by a scalar matrix.
    pub fn constant(n: usize, c: CycScalar) -> Self {
        XiHomomorphism::from_fn(n, |_, k, j| {
            if j == k {
                AlgebraElement::scalar(c.clone())
            } else {
                AlgebraElement::zero()
            }
        })
        .expect("preset shapes are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gen_matrix(&self, i: usize) -> &XiMatrix {
        &self.gens[i]
    }

    /// `xi_k^{ij}`.
    pub fn entry(&self, i: usize, k: usize, j: usize) -> &AlgebraElement {
        self.gens[i].get(k, j)
    }

    /// Largest word degree among the generator entries (0 if all vanish).
    pub fn max_entry_degree(&self) -> usize {
        self.gens
            .iter()
            .flat_map(|m| m.entries())
            .filter_map(|e| e.word_degree().ok())
            .max()
            .unwrap_or(0)
    }

    /// `xi` of a single word, memoized.
    pub fn apply_word(&self, w: &Word) -> Arc<XiMatrix> {
        if let Some(m) = self.word_cache.read().unwrap().get(w) {
            return m.clone();
        }
        let m = match w.letters() {
            [] => XiMatrix::identity(self.n),
            [i] => self.gens[*i as usize].clone(),
            [i, rest @ ..] => self.gens[*i as usize].mul(&self.apply_word(&Word(rest.to_vec()))),
        };
        let m = Arc::new(m);
        self.word_cache.write().unwrap().insert(w.clone(), m.clone());
        m
    }

    /// `xi(u)`, extended linearly.
    pub fn apply(&self, u: &AlgebraElement) -> Result<XiMatrix> {
        u.check_generators(self.n)?;
        let mut out = XiMatrix::zero(self.n);
        for (w, c) in u.terms() {
            out.add_scaled(&self.apply_word(w), c);
        }
        Ok(out)
    }

    /// Decomposes `u d^grade x_j = sum_k d^grade x_k coeff_k`. The grade does
    /// not affect the coefficients; both bimodules use the same `xi`.
    pub fn push_coefficient(&self, u: &AlgebraElement, grade: u8, j: usize) -> Result<Vec<(usize, AlgebraElement)>> {
        if !(1..=2).contains(&grade) {
            return Err(Error::Config(format!("differential letters have grade 1 or 2, got {grade}")));
        }
        if j >= self.n {
            return Err(Error::Dimension { expected: self.n, found: j + 1 });
        }
        let m = self.apply(u)?;
        Ok((0..self.n)
            .map(|k| (k, m.get(k, j).clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }
}
