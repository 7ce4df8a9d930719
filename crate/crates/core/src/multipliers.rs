//! Pointwise multipliers `M(L^φ₁, L^φ) = L^{φ⊖φ₁}`.
//!
//! Regimes by the finiteness of `b_φ` and `b_φ₁`:
//!
//! | `b_φ` | `b_φ₁` | space                 | `‖y‖_{φ⊖φ₁} ≤ K·‖y‖_M` |
//! |-------|--------|-----------------------|------------------------|
//! | `∞`   | `∞`    | general               | `K = 2`                |
//! | `∞`   | `< ∞`  | general               | `K = 2·b_φ₁`           |
//! | `< ∞` | `< ∞`  | inside `L^∞`          | `K = 4c`, `c` existential |
//! | `< ∞` | `∞`    | `{0}`                 | n/a                    |
//!
//! In every regime `‖y‖_M ≤ 4·‖y‖_{φ⊖φ₁}`.
//!
//! The exact operator norm `‖y‖_M` is not computable; [`operator_norm_lower`]
//! gives a certified lower bound and [`holder_bound_check`] the upper one.

use crate::conjugation::{ominus, Conjugator, OminusResult, SRange};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::ext::INF;
use crate::measure::{charfn_norm, luxemburg_norm, modular, plan_partition, MeasureSpace, SimpleFunction, NORM_RTOL};
use crate::sampled::{GridSpec, SampledYoung};
use crate::young::{Degeneracy, Young};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// `b_φ < ∞ = b_φ₁`: only the zero multiplier.
    TrivialZero,
    /// `b_φ < ∞`, `b_φ₁ < ∞`: multipliers are bounded.
    BoundedByLinfty,
    NoRestriction,
}

pub fn triviality_from_params(p: Degeneracy, p1: Degeneracy) -> Triviality {
    match (p.b.is_finite(), p1.b.is_finite()) {
        (true, false) => Triviality::TrivialZero,
        (true, true) => Triviality::BoundedByLinfty,
        _ => Triviality::NoRestriction,
    }
}

/// Classification from `b_φ` and `b_φ₁` alone.
pub fn triviality_check<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G) -> Triviality {
    triviality_from_params(phi.params(), phi1.params())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The generator is `∞` for every `u > 0`.
    Trivial,
    InsideLinfty,
    General,
}

/// The constant `K` in `‖y‖_{φ⊖φ₁} ≤ K·‖y‖_M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReverseConstant {
    Two,
    TwiceB(f64),
    /// `4c` with an existential `c`; see [`measured_reverse_ratio`].
    FourC,
    NotApplicable,
}

impl ReverseConstant {
    /// Numeric value when the constant is explicit.
    pub fn value(&self) -> Option<f64> {
        match self {
            ReverseConstant::Two => Some(2.0),
            ReverseConstant::TwiceB(b) => Some(2.0 * b),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ReverseConstant::Two => "2".into(),
            ReverseConstant::TwiceB(b) => format!("2*b_phi1 = {}", 2.0 * b),
            ReverseConstant::FourC => "4c (c existential)".into(),
            ReverseConstant::NotApplicable => "n/a".into(),
        }
    }
}

/// Embedding constant: `‖y‖_M ≤ 4·‖y‖_{φ⊖φ₁}`.
pub const EMBED_CONST: f64 = 4.0;

#[derive(Clone, Debug)]
pub struct MultiplierSpace {
    pub generator: OminusResult,
    pub classification: Classification,
    pub triviality: Triviality,
    pub embed_const: f64,
    pub reverse: ReverseConstant,
}

/// `M(L^φ₁, L^φ)`, generated by `φ⊖φ₁`. Note the argument order.
pub fn resolve<G: Young + ?Sized, F: Young + ?Sized>(phi1: &G, phi: &F, grid: &GridSpec) -> Result<MultiplierSpace> {
    let (p, p1) = (phi.params(), phi1.params());
    let triviality = triviality_from_params(p, p1);
    let generator = if triviality == Triviality::TrivialZero {
        trivial_generator(phi, phi1, grid)?
    } else {
        ominus(phi, phi1, grid)?
    };
    let classification = if generator.is_trivial() {
        Classification::Trivial
    } else if p.b.is_finite() {
        Classification::InsideLinfty
    } else {
        Classification::General
    };
    let reverse = match (p.b.is_finite(), p1.b.is_finite()) {
        (false, false) => ReverseConstant::Two,
        (false, true) => ReverseConstant::TwiceB(p1.b),
        (true, true) => ReverseConstant::FourC,
        (true, false) => ReverseConstant::NotApplicable,
    };
    Ok(MultiplierSpace { generator, classification, triviality, embed_const: EMBED_CONST, reverse })
}

fn trivial_generator<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G, grid: &GridSpec) -> Result<OminusResult> {
    let nodes = grid.nodes()?;
    let values: Vec<f64> = nodes.iter().map(|&u| if u == 0.0 { 0.0 } else { INF }).collect();
    let profile = nodes.iter().map(|&u| (u, if u == 0.0 { 0.0 } else { INF })).collect();
    let (_, conv) = SRange::conjugate(phi1.params());
    Ok(OminusResult {
        function: SampledYoung::new(nodes, values, format!("ominus({},{})", phi.label(), phi1.label()))?,
        argmax_profile: profile,
        truncation: INF,
        domain_convention: conv,
        method: crate::conjugation::Method::Pointwise,
    })
}

/// Slack for comparisons between computed norms (bisection tolerance plus rounding).
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderReport {
    pub xy_norm: f64,
    pub x_norm: f64,
    pub y_norm: f64,
    /// `‖xy‖_φ / (‖x‖_{φ₁}·‖y‖_{φ⊖φ₁})`, 0 when the product vanishes.
    pub ratio: f64,
    pub holds: bool,
    /// `‖y‖_{φ⊖φ₁} = ∞`: nothing to check.
    pub skipped: bool,
}

/// Checks `‖xy‖_φ ≤ 4·‖x‖_{φ₁}·‖y‖_{φ⊖φ₁}`.
pub fn holder_bound_check<F, G, H>(
    phi: &F,
    phi1: &G,
    generator: &H,
    x: &SimpleFunction,
    y: &SimpleFunction,
    sp: &MeasureSpace,
) -> HolderReport
where
    F: Young + ?Sized,
    G: Young + ?Sized,
    H: Young + ?Sized,
{
    let y_norm = luxemburg_norm(generator, y, sp);
    let x_norm = luxemburg_norm(phi1, x, sp);
    if y_norm.is_infinite() || x_norm.is_infinite() {
        return HolderReport { xy_norm: f64::NAN, x_norm, y_norm, ratio: f64::NAN, holds: true, skipped: true };
    }
    let xy_norm = luxemburg_norm(phi, &x.mul(y), sp);
    let bound = EMBED_CONST * x_norm * y_norm;
    let ratio = if xy_norm == 0.0 { 0.0 } else { xy_norm / (x_norm * y_norm) };
    let holds = xy_norm <= bound * (1.0 + NORM_SLACK);
    HolderReport { xy_norm, x_norm, y_norm, ratio, holds, skipped: false }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelWitness {
    pub level: f64,
    /// `b_k`, the maximizer over `s ∈ [0, a]`.
    pub b: f64,
    /// `φ⊖ₐφ₁(level)`.
    pub value: f64,
    /// `|φ(a_k·b_k) − φ⊖ₐφ₁(a_k) − φ₁(b_k)|`.
    pub residual: f64,
    /// Residual relative to the larger side.
    pub residual_rel: f64,
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    pub x: SimpleFunction,
    pub levels: Vec<LevelWitness>,
    pub a: f64,
}

impl WitnessResult {
    pub fn max_residual(&self) -> f64 {
        self.levels.iter().map(|l| l.residual).fold(0.0, f64::max)
    }

    /// Every residual is within `tol` absolutely or relative to the larger side.
    pub fn residuals_within(&self, tol: f64) -> bool {
        self.levels.iter().all(|l| l.residual <= tol || l.residual_rel <= tol)
    }

    pub fn within_truncation(&self) -> bool {
        self.x.values().iter().all(|&v| v <= self.a)
    }
}

/// For each level `a_k` of `y`, a `b_k ∈ [0, a]` with
/// `φ(a_k·b_k) = φ⊖ₐφ₁(a_k) + φ₁(b_k)`; `x = Σ b_k·χ_{B_k}`.
pub fn construct_witness<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    a: f64,
    y: &SimpleFunction,
) -> Result<WitnessResult> {
    let (range, _) = SRange::truncated(phi1.params(), a)?;
    let conj = Conjugator::new(phi, phi1, range);
    let mut distinct: Vec<f64> = y.values().to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let solved = exec::map_range(Exec::default(), distinct.len(), |i| conj.at(distinct[i]));
    let mut levels = Vec::with_capacity(distinct.len());
    for (&level, &(value, b)) in distinct.iter().zip(&solved) {
        if !value.is_finite() {
            return Err(Error::WitnessUnbounded { level });
        }
        let lhs = if b == 0.0 { 0.0 } else { conj_eval(phi, level * b, b, range) };
        let rhs = value + if b == 0.0 { 0.0 } else { conj_eval(phi1, b, b, range) };
        let residual = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let residual_rel = if scale == 0.0 { 0.0 } else { residual / scale };
        levels.push(LevelWitness { level, b, value, residual, residual_rel });
    }
    let x = y.map(|v| {
        let i = distinct.partition_point(|&d| d < v);
        levels[i].b
    })?;
    Ok(WitnessResult { x, levels, a })
}

/// Evaluates with left limits at an excluded endpoint of the range.
fn conj_eval<Y: Young + ?Sized>(f: &Y, arg: f64, s: f64, range: SRange) -> f64 {
    if s >= range.hi && !range.closed {
        f.eval_left(arg)
    } else {
        f.eval(arg)
    }
}

/// One block `A_n` of the partition.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockStep {
    pub cells: Vec<usize>,
    pub measure: f64,
    /// `‖y·x·χ_{A_n}‖_φ`; must be `≤ 1/2`.
    pub yx_norm: f64,
    /// `I_{φ₁}(x·χ_{A_n}) ≤ I_φ(y·x·χ_{A_n}) ≤ ‖y·x·χ_{A_n}‖_φ`.
    pub phi1_modular: f64,
    pub phi_modular: f64,
    pub ok: bool,
}

/// Induction step for `x_n = Σ_{k≤n} x·χ_{A_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InductionStep {
    pub n: usize,
    pub phi1_modular: f64,
    pub phi_modular: f64,
    pub yx_norm: f64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct DrillReport {
    pub a: f64,
    pub t_a: f64,
    pub witness: WitnessResult,
    pub blocks: Vec<BlockStep>,
    pub induction: Vec<InductionStep>,
    pub x_norm: f64,
    pub yx_norm: f64,
    pub phi_modular_yx: f64,
    /// `I_{φ⊖ₐφ₁}(y)`; must be `≤ 1/2`.
    pub truncated_modular: f64,
    /// First failing step, if any.
    pub failure: Option<String>,
}

impl DrillReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn le_half(v: f64) -> bool {
    v <= 0.5 * (1.0 + NORM_SLACK)
}

/// Runs the reverse-estimate pipeline for `b_φ = b_φ₁ = ∞` on a simple `y`
/// whose multiplier norm is at most `1/2` (the caller rescales `y`).
///
/// Steps: witness `x` at truncation `a`, partition into blocks of measure
/// `≤ t_a` where `‖χ_A‖_{φ₁} ≤ 1/a`, per-block bounds, the induction on
/// `x_n`, and finally `I_{φ⊖ₐφ₁}(y) ≤ I_φ(yx) ≤ ‖yx‖_φ ≤ 1/2`.
pub fn reverse_estimate_drill<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    y: &SimpleFunction,
    sp: &MeasureSpace,
    a: f64,
) -> Result<DrillReport> {
    if phi.params().b.is_finite() || phi1.params().b.is_finite() {
        return Err(Error::InvalidArgument("the drill covers the regime b_phi = b_phi1 = inf".into()));
    }
    if !(a >= 1.0) {
        return Err(Error::InvalidArgument(format!("truncation a must be >= 1, got {a}")));
    }
    let witness = construct_witness(phi, phi1, a, y)?;
    let plan = plan_partition(phi1, sp, a)?;
    let space = &plan.space;
    let y_r = y.refine(plan.refinement);
    let x_r = witness.x.refine(plan.refinement);
    let yx = y_r.mul(&x_r);
    let mut failure: Option<String> = None;
    let mut fail = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };

    let restrict = |f: &SimpleFunction, cells: &[usize]| {
        let mut v = vec![0.0; space.len()];
        for &c in cells {
            v[c] = f.values()[c];
        }
        SimpleFunction::from_values(space, v)
    };

    let block_results: Vec<Result<BlockStep>> = exec::map_range(Exec::default(), plan.groups.len(), |n| {
        let cells = &plan.groups[n];
        let xb = restrict(&x_r, cells)?;
        let yxb = restrict(&yx, cells)?;
        let yx_norm = luxemburg_norm(phi, &yxb, space);
        let phi1_modular = modular(phi1, &xb, space);
        let phi_modular = modular(phi, &yxb, space);
        let ok = le_half(yx_norm) && phi1_modular <= phi_modular * (1.0 + NORM_SLACK) + 1e-300;
        Ok(BlockStep { cells: cells.clone(), measure: space.measure_of(cells), yx_norm, phi1_modular, phi_modular, ok })
    });
    let mut blocks = Vec::with_capacity(block_results.len());
    for (n, b) in block_results.into_iter().enumerate() {
        let b = b?;
        if !b.ok {
            fail(format!("block {n}: ||y x chi_A||_phi = {} exceeds 1/2", b.yx_norm));
        }
        blocks.push(b);
    }

    let mut induction = Vec::with_capacity(plan.groups.len());
    let mut prefix: Vec<usize> = Vec::new();
    for (n, g) in plan.groups.iter().enumerate() {
        prefix.extend_from_slice(g);
        let xn = restrict(&x_r, &prefix)?;
        let yxn = restrict(&yx, &prefix)?;
        let phi1_modular = modular(phi1, &xn, space);
        let phi_modular = modular(phi, &yxn, space);
        let yx_norm = luxemburg_norm(phi, &yxn, space);
        let ok = le_half(phi1_modular) && le_half(yx_norm);
        if !ok {
            fail(format!("induction step {}: I_phi1(x_n) = {phi1_modular}, ||y x_n|| = {yx_norm}", n + 1));
        }
        induction.push(InductionStep { n: n + 1, phi1_modular, phi_modular, yx_norm, ok });
    }

    let x_norm = luxemburg_norm(phi1, &x_r, space);
    let yx_norm = luxemburg_norm(phi, &yx, space);
    let phi_modular_yx = modular(phi, &yx, space);
    let truncated_modular: f64 = {
        let vals: Vec<f64> = y_r
            .values()
            .iter()
            .zip(space.cells())
            .map(|(&v, &m)| {
                let i = witness.levels.partition_point(|l| l.level < v);
                witness.levels[i].value * m
            })
            .collect();
        exec::tree_sum(Exec::default(), &vals)
    };
    if !(x_norm <= 1.0 * (1.0 + NORM_SLACK)) {
        fail(format!("||x||_phi1 = {x_norm} exceeds 1"));
    }
    if !le_half(yx_norm) {
        fail(format!("||y x||_phi = {yx_norm} exceeds 1/2"));
    }
    if !(truncated_modular <= phi_modular_yx * (1.0 + NORM_SLACK) + 1e-300) || !le_half(truncated_modular) {
        fail(format!("I of the truncated conjugate = {truncated_modular} exceeds 1/2"));
    }
    Ok(DrillReport {
        a,
        t_a: plan.t_a,
        witness,
        blocks,
        induction,
        x_norm,
        yx_norm,
        phi_modular_yx,
        truncated_modular,
        failure,
    })
}

/// Drill driver: rescales `y` so that `4·‖y‖_{φ⊖φ₁} = 1/2`, which puts
/// `‖y‖_M ≤ 1/2` by the embedding estimate, then runs the drill.
/// Returns the scale factor together with the report.
pub fn run_drill<F, G, H>(
    phi: &F,
    phi1: &G,
    generator: &H,
    y: &SimpleFunction,
    sp: &MeasureSpace,
    a: f64,
) -> Result<(f64, DrillReport)>
where
    F: Young + ?Sized,
    G: Young + ?Sized,
    H: Young + ?Sized,
{
    let n = luxemburg_norm(generator, y, sp);
    let c = if n == 0.0 {
        1.0
    } else if n.is_finite() {
        0.5 / (EMBED_CONST * n)
    } else {
        return Err(Error::InvalidArgument("y is not in the multiplier space".into()));
    };
    let r = reverse_estimate_drill(phi, phi1, &y.scale(c), sp, a)?;
    Ok((c, r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorNormBound {
    /// Certified: `value ≤ ‖y‖_M`.
    pub value: f64,
    pub candidates: usize,
    /// Which candidate attained the maximum.
    pub best: String,
}

fn ratio_lower<F: Young + ?Sized, G: Young + ?Sized>(
    phi1: &G,
    phi: &F,
    x: &SimpleFunction,
    y: &SimpleFunction,
    sp: &MeasureSpace,
) -> f64 {
    let xn = luxemburg_norm(phi1, x, sp);
    if !(xn > 0.0) || xn.is_infinite() {
        return 0.0;
    }
    // The bisection returns the upper end of a bracket of ratio 1 + NORM_RTOL.
    let num = luxemburg_norm(phi, &x.mul(y), sp) / (1.0 + NORM_RTOL);
    num / xn
}

/// Certified lower bound of `‖y‖_M = sup_{x ≠ 0} ‖xy‖_φ / ‖x‖_{φ₁}`.
///
/// Candidates: the witness `x` of `y` (and of `y/4`, `4y`), indicators of
/// level sets `{y ≥ t}`, then single cells, then unions of the cells with the
/// largest `y`, up to `candidate_count` indicator candidates in total.
pub fn operator_norm_lower<G: Young + ?Sized, F: Young + ?Sized>(
    phi1: &G,
    phi: &F,
    y: &SimpleFunction,
    sp: &MeasureSpace,
    candidate_count: usize,
) -> OperatorNormBound {
    if y.is_zero() {
        return OperatorNormBound { value: 0.0, candidates: 0, best: "zero".into() };
    }
    let mut cands: Vec<(String, SimpleFunction)> = Vec::new();
    let b1 = phi1.params().b;
    for c in [1.0, 0.25, 4.0] {
        let ys = y.scale(c);
        let a = if b1.is_finite() { b1 } else { witness_truncation(phi, phi1, &ys) };
        if let Ok(w) = construct_witness(phi, phi1, a, &ys) {
            if !w.x.is_zero() {
                cands.push((format!("witness(y*{c})"), w.x));
            }
        }
    }
    let mut order = y.support();
    order.sort_by(|&i, &j| y.values()[j].total_cmp(&y.values()[i]).then(i.cmp(&j)));
    let mut ind: Vec<(String, Vec<usize>)> = Vec::new();
    let mut levels: Vec<f64> = order.iter().map(|&i| y.values()[i]).collect();
    levels.dedup();
    for t in levels {
        let set: Vec<usize> = order.iter().copied().filter(|&i| y.values()[i] >= t).collect();
        ind.push((format!("level>={t}"), set));
    }
    for &i in &order {
        ind.push((format!("cell {i}"), vec![i]));
    }
    for k in 2..order.len() {
        ind.push((format!("top {k} cells"), order[..k].to_vec()));
    }
    ind.truncate(candidate_count.max(1));
    for (name, set) in ind {
        if let Ok(x) = SimpleFunction::indicator(sp, &set) {
            cands.push((name, x));
        }
    }
    let vals = exec::map_range(Exec::default(), cands.len(), |k| ratio_lower(phi1, phi, &cands[k].1, y, sp));
    let mut best = 0;
    for k in 1..vals.len() {
        if vals[k] > vals[best] {
            best = k;
        }
    }
    OperatorNormBound { value: vals[best], candidates: cands.len(), best: cands[best].0.clone() }
}

/// A truncation level above every untruncated argmax at the levels of `y`.
fn witness_truncation<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G, y: &SimpleFunction) -> f64 {
    let (range, _) = SRange::conjugate(phi1.params());
    let conj = Conjugator::new(phi, phi1, range);
    let mut a: f64 = 1.0;
    for (_, v) in y.levels() {
        let (val, s) = conj.at(v);
        if val.is_finite() && s.is_finite() {
            a = a.max(2.0 * s);
        }
    }
    a
}

/// `‖y‖_{φ⊖φ₁} / lower bound of ‖y‖_M`: an estimate of the reverse constant for `y`.
pub fn measured_reverse_ratio<G: Young + ?Sized, F: Young + ?Sized, H: Young + ?Sized>(
    phi1: &G,
    phi: &F,
    generator: &H,
    y: &SimpleFunction,
    sp: &MeasureSpace,
    candidate_count: usize,
) -> f64 {
    let lower = operator_norm_lower(phi1, phi, y, sp, candidate_count).value;
    let g = luxemburg_norm(generator, y, sp);
    if lower == 0.0 {
        return if g == 0.0 { 0.0 } else { INF };
    }
    g / lower
}

/// Lower bounds of `‖χ_A‖_M` along refinements of cell `cell`: the
/// candidate `χ_B`, `B` one sub-cell of measure `μ(A)/k`, gives
/// `f_φ(μ(A)/k) / f_{φ₁}(μ(A)/k)`. When `b_φ < ∞ = b_φ₁` this grows without bound.
pub fn trivial_divergence<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    sp: &MeasureSpace,
    cell: usize,
    refinements: &[usize],
) -> Vec<(usize, f64)> {
    let m = sp.cells()[cell];
    refinements
        .iter()
        .map(|&k| {
            let t = m / k as f64;
            (k, charfn_norm(phi, t) / charfn_norm(phi1, t))
        })
        .collect()
}
