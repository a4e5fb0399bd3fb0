//! Bounded membership in `I_q` by exact linear algebra.
//!
//! The homogeneous part of `I_q` in grade `G` is spanned by elements
//! `W1 (x) (u g) (x) W2 s` with `g` a generator, `W1, W2` bare d-words, `u, s`
//! words of `A` and grades adding up to `G`. Since `A` is free, capping
//! `|u| + |s|` leaves a finite spanning set; membership is then decided by
//! row reduction over `Q(q)`. A `member` verdict is always certified by a
//! witness that re-expands to the input exactly. A negative verdict only
//! says the element is not reachable within the bounds.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{Generator, GeneratorId, IdealContext};
use crate::error::{Error, Result};
use crate::freealg::{AlgebraElement, Word};
use crate::linsolve::{Echelon, SparseVec};
use crate::render;
use crate::scalar::CycScalar;
use crate::tensoralg::{tensor_mul, DWord, TensorElement};

pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// Truncation parameters. `None` picks the defaults: the element's own grade
/// and its word degree plus the largest word degree among the `xi` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub grade_bound: Option<usize>,
    pub word_bound: Option<usize>,
    pub size_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { grade_bound: None, word_bound: None, size_cap: DEFAULT_SIZE_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    Member,
    NotMemberAtBound,
    BoundExceeded,
}

/// One summand `coefficient * left * generator * right` of a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    pub left: (DWord, Word),
    pub generator: GeneratorId,
    pub right: (DWord, Word),
    pub coefficient: CycScalar,
}

impl WitnessTerm {
    pub fn left_monomial(&self) -> TensorElement {
        TensorElement::monomial(self.left.0.clone(), AlgebraElement::word(self.left.1.clone()))
    }

    pub fn right_monomial(&self) -> TensorElement {
        TensorElement::monomial(self.right.0.clone(), AlgebraElement::word(self.right.1.clone()))
    }
}

impl Serialize for WitnessTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            left: String,
            family: &'a str,
            i: usize,
            j: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            k: Option<usize>,
            right: String,
            coefficient: String,
        }
        Repr {
            left: render::text(&self.left_monomial()),
            family: self.generator.family.name(),
            i: self.generator.i + 1,
            j: self.generator.j + 1,
            k: self.generator.k.map(|k| k + 1),
            right: render::text(&self.right_monomial()),
            coefficient: self.coefficient.to_string(),
        }
        .serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub witness: Vec<WitnessTerm>,
    pub grade_bound: usize,
    pub word_bound: usize,
    pub spanning_size: usize,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }

    /// Sums the witness back up; equals the queried element for members.
    pub fn expand(&self, ic: &IdealContext) -> TensorElement {
        expand_witness(ic, &self.witness)
    }
}

pub fn expand_witness(ic: &IdealContext, witness: &[WitnessTerm]) -> TensorElement {
    let xi = ic.calculus().xi();
    let mut out = TensorElement::zero();
    for t in witness {
        let g = &ic.generator(&t.generator).expect("witness names a known generator").element;
        let lg = tensor_mul(xi, &t.left_monomial(), g);
        out.add_assign_scaled(&tensor_mul(xi, &lg, &t.right_monomial()), &t.coefficient);
    }
    out
}

/// Coefficient-word pairs `(u, s)` with `|u| + |s| <= bound`.
fn coefficient_pairs(n: usize, bound: usize) -> Vec<(Word, Word)> {
    let words = Word::all_up_to(n, bound);
    let mut out = Vec::new();
    for u in &words {
        for s in &words {
            if u.len() + s.len() <= bound {
                out.push((u.clone(), s.clone()));
            }
        }
    }
    out
}

/// Generator placements sharing one generator and right d-word. The product
/// `u g R` is independent of the left word, so it is computed once per group.
struct Placement<'a> {
    generator: &'a Generator,
    right: DWord,
    lefts: Vec<DWord>,
}

fn placements<'a>(ic: &'a IdealContext, grades: &[usize]) -> Vec<Placement<'a>> {
    let n = ic.n();
    let mut words_by_grade: HashMap<usize, Vec<DWord>> = HashMap::new();
    let mut out = Vec::new();
    for &grade in grades {
        for g in ic.all_generators() {
            if g.element.is_zero() {
                continue;
            }
            let gg = g.id.family.grade();
            if gg > grade {
                continue;
            }
            for lg in 0..=(grade - gg) {
                let rg = grade - gg - lg;
                let lefts = words_by_grade.entry(lg).or_insert_with(|| DWord::all_of_grade(n, lg)).clone();
                let rights = words_by_grade.entry(rg).or_insert_with(|| DWord::all_of_grade(n, rg)).clone();
                for r in rights {
                    out.push(Placement { generator: g, right: r, lefts: lefts.clone() });
                }
            }
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn single_generator_witness(ic: &IdealContext, e: &TensorElement) -> Option<WitnessTerm> {
    let (w0, c0) = e.terms().next()?;
    let (t0, s0) = c0.terms().next()?;
    for g in ic.all_generators() {
        let gc = g.element.coeff(w0);
        if gc.is_zero() || g.element.num_terms() != e.num_terms() {
            continue;
        }
        let gs = gc.coeff(t0);
        if gs.is_zero() {
            continue;
        }
        let ratio = s0 / &gs;
        if g.element.scale(&ratio) == *e {
            return Some(WitnessTerm {
                left: (DWord::empty(), Word::unit()),
                generator: g.id,
                right: (DWord::empty(), Word::unit()),
                coefficient: ratio,
            });
        }
    }
    None
}

pub(super) fn membership(ic: &IdealContext, e: &TensorElement, bounds: &Bounds) -> Result<MembershipVerdict> {
    let n = ic.n();
    if let Some(m) = e.max_generator() {
        if m >= n {
            return Err(Error::Dimension { expected: n, found: m + 1 });
        }
    }
    let grades = e.grades();
    let max_grade = e.max_grade();
    let grade_bound = bounds.grade_bound.unwrap_or(max_grade);
    if grade_bound < max_grade {
        return Err(Error::InvalidBounds(format!("grade bound {grade_bound} is below the element grade {max_grade}")));
    }
    let wd = e.word_degree();
    let word_bound = bounds.word_bound.unwrap_or(wd + ic.calculus().xi().max_entry_degree());
    if word_bound < wd {
        return Err(Error::InvalidBounds(format!("word bound {word_bound} is below the element word degree {wd}")));
    }
    let verdict = |status, witness, spanning_size| MembershipVerdict { status, witness, grade_bound, word_bound, spanning_size };

    if e.is_zero() {
        return Ok(verdict(MembershipStatus::Member, Vec::new(), 0));
    }
    if let Some(t) = single_generator_witness(ic, e) {
        return Ok(verdict(MembershipStatus::Member, vec![t], 1));
    }

    let places = placements(ic, &grades);
    let pairs = coefficient_pairs(n, word_bound);
    let size = places.iter().map(|p| p.lefts.len()).sum::<usize>() * pairs.len();
    if size > bounds.size_cap {
        return Ok(verdict(MembershipStatus::BoundExceeded, Vec::new(), size));
    }

    let xi = ic.calculus().xi();
    // Spanning vectors, one per (placement, left, u, s), in a fixed order.
    let vectors: Vec<((usize, usize, usize), TensorElement)> = places
        .par_iter()
        .enumerate()
        .flat_map_iter(|(pi, p)| {
            let mut by_u: BTreeMap<&Word, TensorElement> = BTreeMap::new();
            for (u, _) in &pairs {
                by_u.entry(u).or_insert_with(|| {
                    let ug = tensor_mul(xi, &TensorElement::from_algebra(AlgebraElement::word(u.clone())), &p.generator.element);
                    tensor_mul(xi, &ug, &TensorElement::word(p.right.clone()))
                });
            }
            let mut local = Vec::new();
            for (li, left) in p.lefts.iter().enumerate() {
                for (ui, (u, s)) in pairs.iter().enumerate() {
                    let core = &by_u[u];
                    let mut v = TensorElement::zero();
                    for (w, c) in core.terms() {
                        v.add_monomial(left.concat(w), &c.right_mul_word(s), &CycScalar::one());
                    }
                    if !v.is_zero() {
                        local.push(((pi, li, ui), v));
                    }
                }
            }
            local.into_iter()
        })
        .collect();

    // Column index over (d-word, coefficient word). Sorted columns keep the
    // elimination much sparser than first-appearance order.
    let mut keys: BTreeSet<(&DWord, &Word)> = BTreeSet::new();
    for (w, c) in e.terms() {
        for (t, _) in c.terms() {
            keys.insert((w, t));
        }
    }
    for (_, v) in &vectors {
        for (w, c) in v.terms() {
            for (t, _) in c.terms() {
                keys.insert((w, t));
            }
        }
    }
    let col: HashMap<(&DWord, &Word), usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let to_sparse = |t: &TensorElement| -> SparseVec {
        let mut v: SparseVec = t
            .terms()
            .flat_map(|(w, c)| c.terms().map(move |(word, s)| (w, word, s.clone())))
            .map(|(w, word, s)| (col[&(w, word)], s))
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    };
    let target = to_sparse(e);
    let sparse_vectors: Vec<SparseVec> = vectors.iter().map(|(_, v)| to_sparse(v)).collect();

    // Only vectors in the column components touched by `e` can contribute.
    let mut uf = UnionFind((0..col.len()).collect());
    for v in &sparse_vectors {
        for pair in v.windows(2) {
            uf.union(pair[0].0, pair[1].0);
        }
    }
    let wanted: BTreeSet<usize> = target.iter().map(|(k, _)| uf.find(*k)).collect();
    let mut relevant: Vec<usize> = (0..sparse_vectors.len())
        .filter(|&i| wanted.contains(&uf.find(sparse_vectors[i][0].0)))
        .collect();
    relevant.sort_by_key(|&i| (sparse_vectors[i].len(), i));

    let mut ech = Echelon::new();
    for &i in &relevant {
        ech.insert(i, &sparse_vectors[i]);
    }
    let Some(solution) = ech.solve(&target) else {
        return Ok(verdict(MembershipStatus::NotMemberAtBound, Vec::new(), size));
    };
    let witness: Vec<WitnessTerm> = solution
        .into_iter()
        .map(|(i, c)| {
            let ((pi, li, ui), _) = &vectors[i];
            let p = &places[*pi];
            let (u, s) = &pairs[*ui];
            WitnessTerm {
                left: (p.lefts[*li].clone(), u.clone()),
                generator: p.generator.id,
                right: (p.right.clone(), s.clone()),
                coefficient: c,
            }
        })
        .collect();
    let expanded = expand_witness(ic, &witness);
    assert_eq!(&expanded, e, "membership witness does not reproduce the element");
    Ok(verdict(MembershipStatus::Member, witness, size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::CalculusContext;
    use crate::differential::diff_n;
    use crate::freealg::AlgebraElement;
    use crate::ideal::Family;
    use crate::tensoralg::DLetter;
    use crate::xi::XiHomomorphism;
    use std::sync::Arc;

    fn ideal(xi: XiHomomorphism) -> IdealContext {
        IdealContext::new(Arc::new(CalculusContext::new(xi)))
    }

    fn x(i: usize) -> AlgebraElement {
        AlgebraElement::gen(i)
    }

    #[test]
    fn generator_is_member_with_trivial_witness() {
        let ic = ideal(XiHomomorphism::commutative(2));
        for g in ic.all_generators().to_vec() {
            if g.element.is_zero() {
                continue;
            }
            let v = ic.membership(&g.element, &Bounds::default()).unwrap();
            assert!(v.is_member());
            assert_eq!(v.witness.len(), 1);
            assert!(v.witness[0].coefficient.is_one());
        }
    }

    #[test]
    fn left_multiple_is_member() {
        let ic = ideal(XiHomomorphism::commutative(2));
        let g = ic.generator_of(Family::Rel1, 0, 1).clone();
        let e = tensor_mul(ic.calculus().xi(), &TensorElement::dx(0), &g);
        let v = ic.membership(&e, &Bounds::default()).unwrap();
        assert!(v.is_member());
        assert_eq!(v.expand(&ic), e);
    }

    #[test]
    fn d3_of_a_word_is_a_member() {
        let ic = ideal(XiHomomorphism::commutative(2));
        let u = TensorElement::from_algebra(&x(0) * &x(1));
        let e = diff_n(ic.calculus(), &u, 3);
        assert!(!e.is_zero());
        let bounds = Bounds { grade_bound: Some(3), word_bound: Some(2), ..Bounds::default() };
        let v = ic.membership(&e, &bounds).unwrap();
        assert!(v.is_member(), "{v:?}");
        assert_eq!(v.expand(&ic), e);
    }

    #[test]
    fn non_members() {
        let ic = ideal(XiHomomorphism::commutative(2));
        // Nothing of grade 1 lies in the ideal, and d2x1 is independent of rel1.
        for e in [TensorElement::dx(0), TensorElement::d2x(0)] {
            let v = ic.membership(&e, &Bounds::default()).unwrap();
            assert_eq!(v.status, MembershipStatus::NotMemberAtBound);
            assert!(v.witness.is_empty());
        }
    }

    #[test]
    fn zero_is_member() {
        let ic = ideal(XiHomomorphism::commutative(2));
        assert!(ic.membership(&TensorElement::zero(), &Bounds::default()).unwrap().is_member());
    }

    #[test]
    fn size_cap() {
        let ic = ideal(XiHomomorphism::commutative(2));
        let e = TensorElement::word(DWord(vec![DLetter::d2(0), DLetter::d1(1)]));
        let v = ic.membership(&e, &Bounds { size_cap: 3, ..Bounds::default() }).unwrap();
        assert_eq!(v.status, MembershipStatus::BoundExceeded);
    }

    #[test]
    fn invalid_bounds() {
        let ic = ideal(XiHomomorphism::commutative(2));
        let e = TensorElement::word(DWord(vec![DLetter::d2(0), DLetter::d1(1)]));
        let r = ic.membership(&e, &Bounds { grade_bound: Some(2), ..Bounds::default() });
        assert!(matches!(r, Err(Error::InvalidBounds(_))));
        let e2 = TensorElement::dx(0).right_mul(&(&x(0) * &x(0)));
        let r2 = ic.membership(&e2, &Bounds { word_bound: Some(1), ..Bounds::default() });
        assert!(matches!(r2, Err(Error::InvalidBounds(_))));
    }

    #[test]
    fn witness_serializes() {
        let ic = ideal(XiHomomorphism::commutative(2));
        let g = ic.generator_of(Family::Rel1, 0, 1).clone();
        let v = ic.membership(&g, &Bounds::default()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "member");
        assert_eq!(json["witness"][0]["family"], "rel1");
        assert_eq!(json["witness"][0]["left"], "1");
    }
}
