//! Rewriting modulo `I_q` when every generator is a scalar combination of
//! two-letter d-words.
//!
//! This is the case exactly when all `D_l(xi_k^{ij})` are scalars. Each
//! generator is oriented so its largest word becomes the left-hand side;
//! rewriting a subword of a longer word multiplies the generator by bare
//! d-words on both sides and by the right coefficient, so every step stays
//! within the coset. Words keep their length and shrink in the order, so
//! rewriting always stops, but the result need not be a unique normal form
//! (confluence is not established).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IdealContext;
use crate::error::{Error, Result};
use crate::scalar::CycScalar;
use crate::tensoralg::{DLetter, DWord, TensorElement};

/// Which index order ranks d-letters of equal grade.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LetterOrder {
    Ascending,
    /// Higher indices rank lower, so `dx1 (x) dx2` is a leading term and
    /// index-descending words are normal.
    #[default]
    Descending,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleMode {
    /// One rule per generator; later generators with an already used
    /// left-hand side are dropped.
    Raw,
    /// Rules from the reduced row echelon form of the generators, so
    /// left-hand sides are distinct and right-hand sides are irreducible.
    #[default]
    Interreduced,
}

impl LetterOrder {
    fn cmp_letters(self, a: &DLetter, b: &DLetter) -> Ordering {
        a.grade.cmp(&b.grade).then_with(|| match self {
            LetterOrder::Ascending => a.index.cmp(&b.index),
            LetterOrder::Descending => b.index.cmp(&a.index),
        })
    }

    /// Length first, then lexicographic on letters.
    pub fn cmp_words(self, a: &DWord, b: &DWord) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.letters().iter().zip(b.letters()) {
                match self.cmp_letters(x, y) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

type Pattern = (DLetter, DLetter);

#[derive(Clone, Debug)]
pub struct Rewriter {
    order: LetterOrder,
    mode: RuleMode,
    rules: BTreeMap<Pattern, Vec<(Pattern, CycScalar)>>,
}

fn pattern_of(w: &DWord) -> Option<Pattern> {
    match w.letters() {
        [a, b] => Some((*a, *b)),
        _ => None,
    }
}

/// Scalar rows of a generator, or `None` if it is not of the expected shape.
fn scalar_row(g: &TensorElement) -> Option<Vec<(Pattern, CycScalar)>> {
    g.terms().map(|(w, c)| Some((pattern_of(w)?, c.as_scalar()?))).collect()
}

impl Rewriter {
    pub fn new(ic: &IdealContext, mode: RuleMode, order: LetterOrder) -> Result<Self> {
        if !ic.has_linear_xi() {
            return Err(Error::NonLinearXi("some D_l(xi) has a non-scalar value".into()));
        }
        let mut rows = Vec::new();
        for g in ic.all_generators() {
            if g.element.is_zero() {
                continue;
            }
            let row = scalar_row(&g.element)
                .ok_or_else(|| Error::NonLinearXi(format!("generator {} is not a scalar combination of two-letter words", g.id)))?;
            rows.push(row);
        }
        let cmp = |a: &Pattern, b: &Pattern| order.cmp_words(&DWord(vec![a.0, a.1]), &DWord(vec![b.0, b.1]));
        let rules = match mode {
            RuleMode::Raw => {
                let mut rules = BTreeMap::new();
                for row in rows {
                    let (lead, lc) = row.iter().max_by(|a, b| cmp(&a.0, &b.0)).cloned().expect("nonzero generator");
                    let inv = lc.inv().expect("nonzero coefficient");
                    let rhs: Vec<_> = row.into_iter().filter(|(p, _)| *p != lead).map(|(p, c)| (p, -(&c * &inv))).collect();
                    rules.entry(lead).or_insert(rhs);
                }
                rules
            }
            RuleMode::Interreduced => interreduce(rows, cmp),
        };
        Ok(Rewriter { order, mode, rules })
    }

    pub fn order(&self) -> LetterOrder {
        self.order
    }

    pub fn mode(&self) -> RuleMode {
        self.mode
    }

    /// The rules as `(lhs, rhs)` pairs, ordered by left-hand side.
    pub fn rules(&self) -> Vec<(DWord, TensorElement)> {
        self.rules
            .iter()
            .map(|(lhs, rhs)| {
                let mut t = TensorElement::zero();
                for (p, c) in rhs {
                    t.add_assign_scaled(&TensorElement::word(DWord(vec![p.0, p.1])), c);
                }
                (DWord(vec![lhs.0, lhs.1]), t)
            })
            .collect()
    }

    fn first_redex(&self, w: &DWord) -> Option<usize> {
        w.letters().windows(2).position(|p| self.rules.contains_key(&(p[0], p[1])))
    }

    /// Rewrites until no left-hand side occurs; returns the result and the
    /// number of steps used.
    pub fn reduce_counting(&self, e: &TensorElement, max_steps: usize) -> Result<(TensorElement, usize)> {
        let mut cur = e.clone();
        let mut steps = 0;
        loop {
            // Rewrite the largest reducible word first.
            let found = cur
                .terms()
                .filter_map(|(w, c)| self.first_redex(w).map(|pos| (w.clone(), c.clone(), pos)))
                .max_by(|a, b| self.order.cmp_words(&a.0, &b.0).then_with(|| a.0.cmp(&b.0)));
            let Some((w, c, pos)) = found else {
                return Ok((cur, steps));
            };
            if steps == max_steps {
                return Err(Error::StepBudgetExhausted(max_steps));
            }
            steps += 1;
            let letters = w.letters();
            let rhs = &self.rules[&(letters[pos], letters[pos + 1])];
            cur.add_monomial(w.clone(), &c, &-CycScalar::one());
            for (p, s) in rhs {
                let mut v = letters[..pos].to_vec();
                v.extend([p.0, p.1]);
                v.extend_from_slice(&letters[pos + 2..]);
                cur.add_monomial(DWord(v), &c, s);
            }
        }
    }

    pub fn reduce(&self, e: &TensorElement, max_steps: usize) -> Result<TensorElement> {
        self.reduce_counting(e, max_steps).map(|(t, _)| t)
    }
}

/// Reduced row echelon form with pivots at the largest words.
fn interreduce(
    rows: Vec<Vec<(Pattern, CycScalar)>>,
    cmp: impl Fn(&Pattern, &Pattern) -> Ordering,
) -> BTreeMap<Pattern, Vec<(Pattern, CycScalar)>> {
    let mut cols: Vec<Pattern> = rows.iter().flatten().map(|(p, _)| *p).collect();
    cols.sort_by(|a, b| cmp(b, a));
    cols.dedup();
    let index: HashMap<Pattern, usize> = cols.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut m: Vec<Vec<CycScalar>> = rows
        .into_iter()
        .map(|row| {
            let mut dense = vec![CycScalar::zero(); cols.len()];
            for (p, c) in row {
                dense[index[&p]] += &c;
            }
            dense
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols.len() {
        let Some(src) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, src);
        let inv = m[r][col].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push((col, r));
        r += 1;
    }

    pivots
        .into_iter()
        .map(|(col, row)| {
            let rhs = m[row]
                .iter()
                .enumerate()
                .filter(|(c, v)| *c != col && !v.is_zero())
                .map(|(c, v)| (cols[c], -v))
                .collect();
            (cols[col], rhs)
        })
        .collect()
}
