//! Sparse exact row echelon form over `Q(q)` with provenance tracking.
//!
//! Rows are inserted one at a time and reduced against existing pivots until
//! their leading column is new. Each pivot row remembers how it was obtained
//! from its source vector, so a target that reduces to zero can be expressed
//! back in terms of the original inserted vectors.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::scalar::CycScalar;

/// A sparse vector, sorted by column, no zero entries.
pub type SparseVec = Vec<(usize, CycScalar)>;

#[derive(Debug)]
struct PivotRow {
    entries: SparseVec,
    source: usize,
    // row = scale * (source_vec - sum c * rows[p])
    scale: CycScalar,
    reductions: Vec<(usize, CycScalar)>,
}

#[derive(Debug, Default)]
pub struct Echelon {
    rows: Vec<PivotRow>,
    pivots: HashMap<usize, usize>,
}

fn axpy(work: &mut BTreeMap<usize, CycScalar>, c: &CycScalar, row: &SparseVec) {
    for (col, v) in row {
        let delta = c * v;
        let entry = work.entry(*col).or_insert_with(CycScalar::zero);
        *entry -= &delta;
        if entry.is_zero() {
            work.remove(col);
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` tagged with `source`. Returns true if the rank grew.
    pub fn insert(&mut self, source: usize, v: &SparseVec) -> bool {
        let mut work: BTreeMap<usize, CycScalar> = v.iter().cloned().collect();
        let mut reductions = Vec::new();
        loop {
            let (lead, c) = match work.iter().next() {
                None => return false,
                Some((k, c)) => (*k, c.clone()),
            };
            match self.pivots.get(&lead) {
                Some(&p) => {
                    axpy(&mut work, &c, &self.rows[p].entries);
                    reductions.push((p, c));
                }
                None => {
                    let scale = c.inv().expect("nonzero lead");
                    let entries = work.into_iter().map(|(k, v)| (k, &v * &scale)).collect();
                    self.pivots.insert(lead, self.rows.len());
                    self.rows.push(PivotRow { entries, source, scale, reductions });
                    return true;
                }
            }
        }
    }

    /// Expresses `target` as a combination of inserted sources, or `None`
    /// if it is not in their span.
    pub fn solve(&self, target: &SparseVec) -> Option<Vec<(usize, CycScalar)>> {
        let mut work: BTreeMap<usize, CycScalar> = target.iter().cloned().collect();
        let mut coef: BTreeMap<usize, CycScalar> = BTreeMap::new();
        while let Some((lead, c)) = work.iter().next().map(|(k, c)| (*k, c.clone())) {
            let p = *self.pivots.get(&lead)?;
            axpy(&mut work, &c, &self.rows[p].entries);
            *coef.entry(p).or_insert_with(CycScalar::zero) += &c;
        }
        // Unwind pivot rows into sources, newest first.
        let mut by_source: BTreeMap<usize, CycScalar> = BTreeMap::new();
        while let Some((p, c)) = coef.pop_last() {
            if c.is_zero() {
                continue;
            }
            let row = &self.rows[p];
            let k = &c * &row.scale;
            *by_source.entry(row.source).or_insert_with(CycScalar::zero) += &k;
            for (pp, cc) in &row.reductions {
                *coef.entry(*pp).or_insert_with(CycScalar::zero) -= &(&k * cc);
            }
        }
        Some(by_source.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// Helper for tests and callers building vectors by hand.
pub fn sparse(entries: impl IntoIterator<Item = (usize, CycScalar)>) -> SparseVec {
    let mut m: BTreeMap<usize, CycScalar> = BTreeMap::new();
    for (k, v) in entries {
        *m.entry(k).or_insert_with(CycScalar::zero) += &v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn unit_vec(col: usize) -> SparseVec {
    vec![(col, CycScalar::one())]
}
