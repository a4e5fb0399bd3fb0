//! Bounded verification of the graded q-differential algebra structure.
//!
//! Every check produces instance results in one of two tiers: `raw` checks
//! are exact identities in the tensor algebra, `mod_ideal` checks are
//! congruences certified by the membership oracle. Instances are
//! independent and run in parallel, but results are collected in a fixed
//! order so reports are reproducible byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::CalculusContext;
use crate::differential::{diff, diff_n, expand_d1, expand_d2, expand_d3};
use crate::error::{Error, Result};
use crate::freealg::{AlgebraElement, Word};
use crate::ideal::{Bounds, Family, IdealContext, MembershipStatus, WitnessTerm};
use crate::render;
use crate::scalar::{q_integer, q_power, CycScalar};
use crate::tensoralg::{tensor_mul, DLetter, DWord, TensorElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Raw,
    ModIdeal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub check: String,
    pub tier: Tier,
    pub input: String,
    pub outcome: Outcome,
    /// The nonzero residual (raw) or the non-member (mod ideal).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<WitnessTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning_size: Option<usize>,
}

impl InstanceResult {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Scalar,
    Expansions,
    Generators,
    D3,
    Leibniz,
    Congruences,
    Binomial,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Scalar, Suite::Expansions, Suite::Generators, Suite::D3, Suite::Leibniz, Suite::Congruences, Suite::Binomial];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scalar => "scalar",
            Suite::Expansions => "expansions",
            Suite::Generators => "generators",
            Suite::D3 => "d3",
            Suite::Leibniz => "leibniz",
            Suite::Congruences => "congruences",
            Suite::Binomial => "binomial",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    pub bounds: Bounds,
    /// Exhaustive word length for sampled algebra elements.
    pub word_length: usize,
    /// Number of seeded random samples per sampled family.
    pub samples: usize,
    pub seed: u64,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suites: Suite::ALL.to_vec(), bounds: Bounds::default(), word_length: 2, samples: 20, seed: 0, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteTiming {
    pub suite: Suite,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub preset: String,
    pub n: usize,
    pub seed: u64,
    pub word_length: usize,
    pub samples: usize,
    pub grade_bound: Option<usize>,
    pub word_bound: Option<usize>,
    pub size_cap: usize,
    pub suites: Vec<Suite>,
    pub instances: Vec<InstanceResult>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<SuiteTiming>>,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn inconclusive(&self) -> bool {
        self.summary.inconclusive > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset {} (n = {}), seed {}, word length {}, samples {}", self.preset, self.n, self.seed, self.word_length, self.samples);
        for r in &self.instances {
            let tag = match r.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Inconclusive => "INCONCLUSIVE",
            };
            let tier = match r.tier {
                Tier::Raw => "raw",
                Tier::ModIdeal => "mod I_q",
            };
            let _ = write!(s, "[{tag}] {} ({tier}) {}", r.check, r.input);
            if !r.witness.is_empty() {
                let _ = write!(s, " [witness: {} terms]", r.witness.len());
            }
            s.push('\n');
            if let Some(res) = &r.residual {
                let _ = writeln!(s, "    residual: {res}");
            }
        }
        if let Some(ts) = &self.timings {
            for t in ts {
                let _ = writeln!(s, "time {}: {:.3}s", t.suite.name(), t.seconds);
            }
        }
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} inconclusive",
            self.summary.passed, self.summary.failed, self.summary.inconclusive
        );
        s
    }
}

fn raw_check(check: &str, input: String, residual: TensorElement) -> InstanceResult {
    let zero = residual.is_zero();
    InstanceResult {
        check: check.to_string(),
        tier: Tier::Raw,
        input,
        outcome: if zero { Outcome::Pass } else { Outcome::Fail },
        residual: (!zero).then(|| render::text(&residual)),
        witness: Vec::new(),
        spanning_size: None,
    }
}

/// Certifies `e` in `I_q`. Errors from the oracle count as inconclusive.
pub fn member_check(ic: &IdealContext, check: &str, input: String, e: &TensorElement, bounds: &Bounds) -> InstanceResult {
    let mut r = InstanceResult {
        check: check.to_string(),
        tier: Tier::ModIdeal,
        input,
        outcome: Outcome::Pass,
        residual: None,
        witness: Vec::new(),
        spanning_size: None,
    };
    if e.is_zero() {
        return r;
    }
    match ic.membership(e, bounds) {
        Ok(v) => {
            r.spanning_size = Some(v.spanning_size);
            match v.status {
                MembershipStatus::Member => r.witness = v.witness,
                MembershipStatus::NotMemberAtBound => {
                    r.outcome = Outcome::Fail;
                    r.residual = Some(render::text(e));
                }
                MembershipStatus::BoundExceeded => {
                    r.outcome = Outcome::Inconclusive;
                    r.residual = Some(render::text(e));
                }
            }
        }
        Err(err) => {
            r.outcome = Outcome::Inconclusive;
            r.residual = Some(format!("{}: {err}", render::text(e)));
        }
    }
    r
}

fn alg(u: &AlgebraElement) -> TensorElement {
    TensorElement::from_algebra(u.clone())
}

/// `d(w t) - d(w) t - q^g w d(t)` with `g` the grade of the homogeneous `w`.
pub fn leibniz_residual(ctx: &CalculusContext, omega: &TensorElement, theta: &TensorElement) -> Result<TensorElement> {
    let g = omega.homogeneous_grade().ok_or_else(|| Error::InvalidBounds("omega must be homogeneous and nonzero".into()))?;
    let xi = ctx.xi();
    let lhs = diff(ctx, &tensor_mul(xi, omega, theta));
    let mut res = lhs;
    res.add_assign_scaled(&tensor_mul(xi, &diff(ctx, omega), theta), &-CycScalar::one());
    res.add_assign_scaled(&tensor_mul(xi, omega, &diff(ctx, theta)), &-q_power(g as i64));
    Ok(res)
}

/// The q-Leibniz rule for `omega`, `theta`. When `raw` is set the residual
/// must vanish identically; otherwise it must lie in `I_q`.
pub fn check_q_leibniz(ic: &IdealContext, omega: &TensorElement, theta: &TensorElement, raw: bool, bounds: &Bounds) -> Result<InstanceResult> {
    let res = leibniz_residual(ic.calculus(), omega, theta)?;
    let input = format!("omega = {}, theta = {}", render::text(omega), render::text(theta));
    Ok(if raw { raw_check("q-leibniz", input, res) } else { member_check(ic, "q-leibniz", input, &res, bounds) })
}

pub fn check_d3(ic: &IdealContext, w: &TensorElement, bounds: &Bounds) -> InstanceResult {
    let e = diff_n(ic.calculus(), w, 3);
    member_check(ic, "d3", format!("w = {}", render::text(w)), &e, bounds)
}

/// Residuals of the five congruences for `v` and index `j`; the fourth
/// contributes one entry per `k`.
pub fn congruence_residuals(ic: &IdealContext, v: &AlgebraElement, j: usize) -> Result<Vec<(String, TensorElement)>> {
    let ctx = ic.calculus();
    let xi = ctx.xi();
    let n = ctx.n();
    let q = CycScalar::q();
    let q2 = q_power(2);
    let one = CycScalar::one();
    let xv = xi.apply(v)?;
    let vt = alg(v);
    let dv = diff(ctx, &vt);
    let d2v = diff_n(ctx, &vt, 2);
    let mul = |a: &TensorElement, b: &TensorElement| tensor_mul(xi, a, b);

    let mut r1 = mul(&dv, &TensorElement::dx(j));
    let mut r22 = mul(&dv, &TensorElement::d2x(j));
    let mut r2 = mul(&d2v, &TensorElement::dx(j));
    let mut r4 = mul(&d2v, &TensorElement::d2x(j));
    let mut r3 = Vec::new();
    for k in 0..n {
        let e = alg(xv.get(k, j));
        let de = diff(ctx, &e);
        let d2e = diff_n(ctx, &e, 2);
        r1.add_assign_scaled(&mul(&TensorElement::dx(k), &de), &-&q);
        r22.add_assign_scaled(&mul(&TensorElement::d2x(k), &de), &-&q2);
        r2.add_assign_scaled(&mul(&TensorElement::d2x(k), &de), &-(&q - &one));
        r2.add_assign_scaled(&mul(&TensorElement::dx(k), &d2e), &-&q2);
        r4.add_assign_scaled(&mul(&TensorElement::d2x(k), &d2e), &-&q);
        r3.push((format!("rel3 k={}", k + 1), diff_n(ctx, &e, 3)));
    }
    let mut out = vec![("rel1".to_string(), r1), ("rel-2-2".to_string(), r22), ("rel2".to_string(), r2)];
    out.extend(r3);
    out.push(("rel4".to_string(), r4));
    Ok(out)
}

pub fn check_congruences(ic: &IdealContext, v: &AlgebraElement, j: usize, bounds: &Bounds) -> Result<Vec<InstanceResult>> {
    Ok(congruence_residuals(ic, v, j)?
        .into_iter()
        .map(|(label, e)| {
            let input = format!("{label}, v = {}, j = {}", render::text_algebra(v), j + 1);
            member_check(ic, "congruences", input, &e, bounds)
        })
        .collect())
}

/// `d^2(uv) - d^2(u) v - [2]_q du dv - u d^2(v)`.
pub fn binomial_residual(ctx: &CalculusContext, u: &AlgebraElement, v: &AlgebraElement) -> TensorElement {
    let xi = ctx.xi();
    let (ut, vt) = (alg(u), alg(v));
    let mut res = diff_n(ctx, &alg(&(u * v)), 2);
    res.add_assign_scaled(&diff_n(ctx, &ut, 2).right_mul(v), &-CycScalar::one());
    res.add_assign_scaled(&tensor_mul(xi, &diff(ctx, &ut), &diff(ctx, &vt)), &-q_integer(2));
    res.add_assign_scaled(&tensor_mul(xi, &ut, &diff_n(ctx, &vt, 2)), &-CycScalar::one());
    res
}

pub fn check_d2_binomial(ic: &IdealContext, u: &AlgebraElement, v: &AlgebraElement, bounds: &Bounds) -> InstanceResult {
    let e = binomial_residual(ic.calculus(), u, v);
    let input = format!("u = {}, v = {}", render::text_algebra(u), render::text_algebra(v));
    member_check(ic, "d2-binomial", input, &e, bounds)
}

/// Exact identities for `d` of the `rel3` and `rel4` generators, and
/// membership of `d` of every generator of the pair `(i, j)`.
pub fn check_generator_diff(ic: &IdealContext, i: usize, j: usize, bounds: &Bounds) -> Vec<InstanceResult> {
    let ctx = ic.calculus();
    let xi = ctx.xi();
    let n = ctx.n();
    let mut out = Vec::new();
    let mut rel4_rhs = TensorElement::zero();
    for g in ic.ideal_generators(i, j) {
        let dg = diff(ctx, &g.element);
        match g.id.family {
            Family::Rel3 => {
                let k = g.id.k.expect("rel3 carries k");
                let entry = xi.entry(i, k, j);
                let mut rhs = TensorElement::zero();
                for (l, dl) in ctx.partials(entry).iter().enumerate() {
                    let d3 = diff_n(ctx, &alg(dl), 3);
                    rhs.add_assign_scaled(&tensor_mul(xi, &TensorElement::dx(l), &d3), &CycScalar::one());
                }
                out.push(raw_check("generator-diff", format!("d {} = dx_l (*) d^3 D_l(xi)", g.id), &dg - &rhs));
            }
            Family::Rel4 => {
                for k in 0..n {
                    let d3 = diff_n(ctx, &alg(xi.entry(i, k, j)), 3);
                    rel4_rhs.add_assign_scaled(&tensor_mul(xi, &TensorElement::d2x(k), &d3), &-CycScalar::one());
                }
                out.push(raw_check("generator-diff", format!("d {} = -d2x_k (*) d^3 xi", g.id), &dg - &rel4_rhs));
            }
            _ => {}
        }
        out.push(member_check(ic, "generator-diff", format!("d {}", g.id), &dg, bounds));
    }
    out
}

/// The d-iterate expansions of `u` against `diff`.
pub fn check_expansions(ctx: &CalculusContext, u: &AlgebraElement) -> Vec<InstanceResult> {
    let t = alg(u);
    let input = format!("u = {}", render::text_algebra(u));
    vec![
        raw_check("d1-expansion", input.clone(), &diff(ctx, &t) - &expand_d1(ctx, u)),
        raw_check("d2-expansion", input.clone(), &diff_n(ctx, &t, 2) - &expand_d2(ctx, u)),
        raw_check("d3-expansion", input, &diff_n(ctx, &t, 3) - &expand_d3(ctx, u)),
    ]
}

pub fn check_scalars() -> Vec<InstanceResult> {
    let q = CycScalar::q();
    let cases = [
        ("[3]_q = 0", q_integer(3)),
        ("q^3 = 1", &(&(&q * &q) * &q) - &CycScalar::one()),
        ("q*q = -1 - q", &(&q * &q) - &CycScalar::from_ints(-1, -1)),
        ("[2]_q q^2 = -q", &(&q_integer(2) * &q_power(2)) + &q),
    ];
    cases
        .into_iter()
        .map(|(name, residual)| InstanceResult {
            check: "scalar".into(),
            tier: Tier::Raw,
            input: name.into(),
            outcome: if residual.is_zero() { Outcome::Pass } else { Outcome::Fail },
            residual: (!residual.is_zero()).then(|| residual.to_string()),
            witness: Vec::new(),
            spanning_size: None,
        })
        .collect()
}

/// A random algebra element with up to three terms, words of length at
/// most `max_len` and small coefficients.
pub fn random_algebra(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> AlgebraElement {
    loop {
        let terms = rng.gen_range(1..=3);
        let mut u = AlgebraElement::zero();
        for _ in 0..terms {
            let len = rng.gen_range(0..=max_len);
            let w = Word((0..len).map(|_| rng.gen_range(0..n) as u16).collect());
            let c = CycScalar::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            u.add_term(w, &c);
        }
        if !u.is_zero() {
            return u;
        }
    }
}

/// A random sum of two monomials of grade at most `max_grade` with
/// coefficients of word degree at most one.
pub fn random_form(rng: &mut ChaCha8Rng, n: usize, max_grade: usize) -> TensorElement {
    loop {
        let mut t = TensorElement::zero();
        for _ in 0..2 {
            let grade = rng.gen_range(0..=max_grade);
            let words = DWord::all_of_grade(n, grade);
            let w = words[rng.gen_range(0..words.len())].clone();
            let r = random_algebra(rng, n, 1);
            t.add_monomial(w, &r, &CycScalar::one());
        }
        if !t.is_zero() {
            return t;
        }
    }
}

fn words_up_to(n: usize, len: usize) -> Vec<AlgebraElement> {
    Word::all_up_to(n, len).into_iter().map(AlgebraElement::word).collect()
}

type Task<'a> = Box<dyn Fn() -> Vec<InstanceResult> + Send + Sync + 'a>;

fn suite_tasks<'a>(ic: &'a IdealContext, suite: Suite, opts: &'a VerifyOptions) -> Vec<Task<'a>> {
    let n = ic.n();
    let ctx = ic.calculus();
    let b = &opts.bounds;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut tasks: Vec<Task<'a>> = Vec::new();
    match suite {
        Suite::Scalar => tasks.push(Box::new(check_scalars)),
        Suite::Expansions => {
            let mut inputs = words_up_to(n, opts.word_length);
            inputs.extend((0..opts.samples).map(|_| random_algebra(&mut rng, n, 3)));
            for u in inputs {
                tasks.push(Box::new(move || check_expansions(ctx, &u)));
            }
        }
        Suite::Generators => {
            for i in 0..n {
                for j in 0..n {
                    tasks.push(Box::new(move || check_generator_diff(ic, i, j, b)));
                }
            }
        }
        Suite::D3 => {
            let mut inputs: Vec<TensorElement> = words_up_to(n, opts.word_length).iter().map(alg).collect();
            for i in 0..n {
                for u in words_up_to(n, 1) {
                    inputs.push(TensorElement::dx(i).right_mul(&u));
                    inputs.push(TensorElement::d2x(i).right_mul(&u));
                }
            }
            let random = opts.samples.min(4);
            inputs.extend((0..random).map(|_| random_form(&mut rng, n, 2)));
            for w in inputs {
                tasks.push(Box::new(move || vec![check_d3(ic, &w, b)]));
            }
        }
        Suite::Leibniz => {
            let mut omegas = Vec::new();
            for i in 0..n {
                omegas.push(alg(&AlgebraElement::gen(i)));
                omegas.push(TensorElement::dx(i));
                omegas.push(TensorElement::d2x(i));
                for j in 0..n {
                    omegas.push(TensorElement::word(DWord(vec![DLetter::d1(i), DLetter::d1(j)])));
                }
            }
            let mut thetas = Vec::new();
            for j in 0..n {
                thetas.push((alg(&AlgebraElement::gen(j)), true));
                for k in 0..n {
                    thetas.push((TensorElement::dx(j).right_mul(&AlgebraElement::gen(k)), false));
                }
                thetas.push((TensorElement::d2x(j), false));
            }
            for omega in &omegas {
                for (theta, in_algebra) in &thetas {
                    let (omega, theta, raw) = (omega.clone(), theta.clone(), *in_algebra);
                    tasks.push(Box::new(move || {
                        // For theta in A the rule is an exact identity.
                        let mut v = vec![check_q_leibniz(ic, &omega, &theta, false, b).expect("homogeneous omega")];
                        if raw {
                            v.push(check_q_leibniz(ic, &omega, &theta, true, b).expect("homogeneous omega"));
                        }
                        v
                    }));
                }
            }
        }
        Suite::Congruences => {
            let mut vs = vec![AlgebraElement::one()];
            vs.extend((0..n).map(AlgebraElement::gen));
            vs.extend(Word::all_of_length(n, 2).into_iter().map(AlgebraElement::word));
            for v in vs {
                for j in 0..n {
                    let v = v.clone();
                    tasks.push(Box::new(move || check_congruences(ic, &v, j, b).expect("v within the configured algebra")));
                }
            }
        }
        Suite::Binomial => {
            let ws = words_up_to(n, opts.word_length);
            for u in &ws {
                for v in &ws {
                    let (u, v) = (u.clone(), v.clone());
                    tasks.push(Box::new(move || vec![check_d2_binomial(ic, &u, &v, b)]));
                }
            }
        }
    }
    tasks
}

/// Runs the selected suites. `preset` is only used as the report label.
pub fn run(ic: &IdealContext, preset: &str, opts: &VerifyOptions) -> VerificationReport {
    let mut instances = Vec::new();
    let mut timings = Vec::new();
    for &suite in &opts.suites {
        let start = Instant::now();
        let tasks = suite_tasks(ic, suite, opts);
        let results: Vec<Vec<InstanceResult>> = tasks.par_iter().map(|t| t()).collect();
        instances.extend(results.into_iter().flatten());
        timings.push(SuiteTiming { suite, seconds: start.elapsed().as_secs_f64() });
    }
    let count = |o: Outcome| instances.iter().filter(|r| r.outcome == o).count();
    let summary = Summary { passed: count(Outcome::Pass), failed: count(Outcome::Fail), inconclusive: count(Outcome::Inconclusive) };
    VerificationReport {
        preset: preset.to_string(),
        n: ic.n(),
        seed: opts.seed,
        word_length: opts.word_length,
        samples: opts.samples,
        grade_bound: opts.bounds.grade_bound,
        word_bound: opts.bounds.word_bound,
        size_cap: opts.bounds.size_cap,
        suites: opts.suites.clone(),
        instances,
        summary,
        timings: opts.timings.then_some(timings),
    }
}
