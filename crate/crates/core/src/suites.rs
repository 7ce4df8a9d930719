//! Property suites behind `orlicz verify` and the acceptance tests.
//!
//! Every suite draws its inputs from [`gen`] streams keyed by `(seed, trial)`,
//! so a run is reproducible trial by trial regardless of thread count.
//! `inject_fault` perturbs one side of each checked relation; it exists to
//! prove that the suites can fail.

use rand::Rng;

use crate::conjugation::{ominus, ominus_at, ominus_bruteforce_with, ominus_monotone_with, truncation_sweep, Method};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::ext::{le_rel, rel_diff};
use crate::factorization::{decompose, equivalence_check, factorization_check, MeasureKind, Mode, CHECK_POINTS, CHECK_RANGE};
use crate::gen;
use crate::measure::{charfn_norm, check_norm_modular, luxemburg_norm, modular, MeasureSpace, SimpleFunction, NORM_RTOL};
use crate::multipliers::{
    holder_bound_check, operator_norm_lower, resolve, reverse_estimate_drill, run_drill, EMBED_CONST, NORM_SLACK,
};
use crate::presets::{self, lower, lower_pair};
use crate::sampled::{GridSpec, SampledYoung};
use crate::young::{Young, YoungFunction};

pub const SUITES: [&str; 8] = ["young", "dilation", "truncation", "holder", "drill", "norm-modular", "fastpath", "factorization"];

pub const YOUNG_SLACK: f64 = 1e-9;
pub const DILATION_TOL: f64 = 1e-6;
pub const TRUNCATION_TOL: f64 = 1e-6;
pub const CHARFN_TOL: f64 = 1e-8;
pub const L6_FRACTION: f64 = 0.95;
pub const WITNESS_TOL: f64 = 1e-8;
pub const FASTPATH_TOL: f64 = 1e-12;
pub const SPREAD_MAX: f64 = 1.05;
pub const DECOMPOSE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SuiteConfig {
    /// Overrides the suite's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Grid for sampled generators.
    pub grid: GridSpec,
    pub inject_fault: bool,
    pub exec: Exec,
}


impl SuiteConfig {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: String,
    pub property: String,
    pub checks: usize,
    pub violations: usize,
    /// Suite-specific worst value (largest error or smallest margin).
    pub worst: f64,
    /// Up to five failing cases.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &str, property: &str) -> Self {
        SuiteOutcome {
            suite: suite.into(),
            property: property.into(),
            checks: 0,
            violations: 0,
            worst: 0.0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checks > 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    fn worst_max(&mut self, v: f64) {
        if v > self.worst || v.is_nan() {
            self.worst = v;
        }
    }
}

pub fn run(name: &str, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    match name {
        "young" => young(cfg),
        "dilation" => dilation(cfg),
        "truncation" => truncation(cfg),
        "holder" => holder(cfg),
        "drill" => drill(cfg),
        "norm-modular" => norm_modular(cfg),
        "fastpath" => fastpath(cfg),
        "factorization" => factorization(cfg),
        _ => Err(Error::InvalidArgument(format!("unknown suite '{name}'; known: {}", SUITES.join(", ")))),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    SUITES.iter().map(|s| run(s, cfg)).collect()
}

fn grid_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    GridSpec::new(lo, hi, n).and_then(|g| g.log_nodes()).expect("static grid")
}

/// `φ(uv) ≤ (φ⊖φ₁)(u) + φ₁(v)` on a 200×200 grid for every Young preset.
pub fn young(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("young", "phi(uv) <= (phi (-) phi1)(u) + phi1(v)");
    let us = grid_nodes(1e-3, 1e3, 200);
    for pair in presets::YOUNG_PAIRS {
        let (phi, phi1) = lower_pair(pair);
        let fault = if cfg.inject_fault { 0.5 } else { 1.0 };
        let conj = map_range(cfg.exec, us.len(), |i| ominus_at(&phi, &phi1, us[i]).0 * fault);
        let rows = map_range(cfg.exec, us.len(), |i| {
            let u = us[i];
            us.iter()
                .map(|&v| {
                    let lhs = phi.eval(u * v);
                    let rhs = conj[i] + phi1.eval(v);
                    (v, lhs, rhs)
                })
                .collect::<Vec<_>>()
        });
        for (i, row) in rows.iter().enumerate() {
            for &(v, lhs, rhs) in row {
                if lhs.is_finite() && rhs.is_finite() && lhs > 0.0 {
                    out.worst_max((lhs - rhs) / lhs.max(rhs));
                }
                out.check(le_rel(lhs, rhs, YOUNG_SLACK), || {
                    format!("{} / {}: u={} v={} phi(uv)={lhs} rhs={rhs}", pair.0, pair.1, us[i], v)
                });
            }
        }
    }
    Ok(out)
}

/// `(dilate(φ,a) ⊖ dilate(φ₁,b))(u) = (φ⊖φ₁)(au/b)` at grid nodes.
pub fn dilation(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("dilation", "(phi_a (-) phi1_b)(u) = (phi (-) phi1)(a u / b)");
    let us = grid_nodes(1e-2, 1e2, 201);
    for pair in presets::DILATION_PAIRS {
        let (phi, phi1) = lower_pair(pair);
        for (a, b) in presets::DILATIONS {
            let psi = phi.clone().dilate(a)?;
            let psi1 = phi1.clone().dilate(b)?;
            let fault = if cfg.inject_fault { 1.0 + 1e-3 } else { 1.0 };
            let res = map_range(cfg.exec, us.len(), |i| {
                let u = us[i];
                (ominus_at(&psi, &psi1, u).0 * fault, ominus_at(&phi, &phi1, a * u / b).0)
            });
            for (i, &(l, r)) in res.iter().enumerate() {
                let d = rel_diff(l, r);
                out.worst_max(d);
                out.check(d <= DILATION_TOL, || format!("{} / {} (a={a}, b={b}): u={} lhs={l} rhs={r}", pair.0, pair.1, us[i]));
            }
        }
    }
    Ok(out)
}

/// Per-level maximal relative gaps of a truncation sweep against the
/// untruncated conjugate, with the recorded argmax bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTrace {
    pub pair: (String, String),
    pub argmax_bound: f64,
    pub levels: Vec<(f64, f64)>,
}

pub fn truncation_trace(phi: &YoungFunction, phi1: &YoungFunction) -> Result<SweepTrace> {
    let grid = GridSpec::new(0.1, 10.0, 41)?.with_anchors([1.0]);
    let full = ominus(phi, phi1, &grid)?;
    let bound = full.max_finite_argmax();
    let a_list: Vec<f64> = (-6..=4).map(|k| bound * 2f64.powi(k)).collect();
    let sweep = truncation_sweep(phi, phi1, &a_list, &grid)?;
    let levels = a_list
        .iter()
        .zip(&sweep)
        .map(|(&a, r)| {
            let mut worst: f64 = 0.0;
            for (&u, &t) in r.function.grid().iter().zip(r.function.values()) {
                if let Some(v) = full.value_at_node(u) {
                    worst = worst.max(rel_diff(t, v));
                }
            }
            (a, worst)
        })
        .collect();
    Ok(SweepTrace { pair: (phi.label(), phi1.label()), argmax_bound: bound, levels })
}

/// Truncated conjugates increase to the untruncated one and agree past the argmax bound.
pub fn truncation(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("truncation", "max |phi (-)_a phi1 - phi (-) phi1| decreases in a, < 1e-6 for a >= argmax bound");
    for pair in presets::TRUNCATION_PAIRS {
        let (phi, phi1) = lower_pair(pair);
        let mut tr = truncation_trace(&phi, &phi1)?;
        if cfg.inject_fault {
            if let Some(last) = tr.levels.last_mut() {
                last.1 = 1.0;
            }
        }
        for w in tr.levels.windows(2) {
            out.check(w[1].1 <= w[0].1, || format!("{} / {}: gap rises from {} at a={} to {} at a={}", pair.0, pair.1, w[0].1, w[0].0, w[1].1, w[1].0));
        }
        for &(a, e) in &tr.levels {
            if a >= tr.argmax_bound {
                out.worst_max(e);
                out.check(e < TRUNCATION_TOL, || format!("{} / {}: gap {e} at a={a} >= bound {}", pair.0, pair.1, tr.argmax_bound));
            }
        }
        out.notes.push(format!("{} / {}: argmax bound {}", pair.0, pair.1, tr.argmax_bound));
    }
    Ok(out)
}

fn generator(phi: &YoungFunction, phi1: &YoungFunction, grid: &GridSpec) -> Result<SampledYoung> {
    Ok(resolve(phi1, phi, grid)?.generator.function)
}

/// `‖y‖_{L⁶}` in closed form.
pub fn l6_norm(y: &SimpleFunction, sp: &MeasureSpace) -> f64 {
    y.values().iter().zip(sp.cells()).map(|(v, m)| v.powi(6) * m).sum::<f64>().powf(1.0 / 6.0)
}

/// `‖xy‖_φ ≤ 4‖x‖_{φ₁}‖y‖_{φ⊖φ₁}` on random pairs, and the `L⁶` lower bound
/// of the operator norm for `L³ → L²`.
pub fn holder(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("holder", "||xy||_phi <= 4 ||x||_phi1 ||y||_(phi (-) phi1)");
    let pairs: Vec<(YoungFunction, YoungFunction, SampledYoung)> = presets::HOLDER_PAIRS
        .iter()
        .map(|&p| {
            let (phi, phi1) = lower_pair(p);
            let g = generator(&phi, &phi1, &cfg.grid)?;
            Ok((phi, phi1, g))
        })
        .collect::<Result<_>>()?;
    let n = cfg.trials(10_000);
    let fault = if cfg.inject_fault { 16.0 } else { 1.0 };
    let reports = map_range(cfg.exec, n, |i| {
        let mut r = gen::substream(cfg.seed, i as u64);
        let (phi, phi1, g) = &pairs[i % pairs.len()];
        let sp = gen::random_space(&mut r, 64, 1.0);
        let x = gen::random_simple(&mut r, &sp, 6, (1e-2, 1e2), 0.2);
        let y = gen::random_simple(&mut r, &sp, 6, (1e-2, 1e2), 0.2);
        holder_bound_check(phi, phi1, g, &x, &y, &sp)
    });
    let mut skipped = 0;
    for (i, rep) in reports.iter().enumerate() {
        if rep.skipped {
            skipped += 1;
            continue;
        }
        out.worst_max(rep.ratio);
        let holds = rep.xy_norm * fault <= 4.0 * rep.x_norm * rep.y_norm * (1.0 + NORM_SLACK);
        out.check(holds, || {
            let p = presets::HOLDER_PAIRS[i % presets::HOLDER_PAIRS.len()];
            format!("trial {i} ({} / {}): ||xy||={} ||x||={} ||y||={}", p.0, p.1, rep.xy_norm, rep.x_norm, rep.y_norm)
        });
    }
    out.notes.push(format!("{} of {n} pairs skipped (a norm is infinite)", skipped));
    let (phi, phi1) = lower_pair(presets::L3_TO_L2);
    let sandwich = cfg.trials(10_000).div_ceil(200).max(1);
    let sp = MeasureSpace::unit_interval(64)?;
    let mut least = f64::INFINITY;
    for i in 0..sandwich {
        let mut r = gen::substream(cfg.seed ^ 0x5a5a, i as u64);
        let y = gen::random_simple(&mut r, &sp, 4, (1e-1, 1e1), 0.3);
        let lower = operator_norm_lower(&phi1, &phi, &y, &sp, 256).value;
        let l6 = l6_norm(&y, &sp);
        least = least.min(lower / l6);
        out.check(lower >= L6_FRACTION * l6, || format!("L3->L2 step function {i}: lower bound {lower} < 0.95 * {l6}"));
    }
    out.notes.push(format!("L3->L2: min lower/||y||_6 = {least:.6} over {sandwich} step functions"));
    Ok(out)
}

/// The reverse-estimate pipeline on random `y`, rescaled to `‖y‖_M ≤ 1/2`.
pub fn drill(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("drill", "witness + partition + induction give I_(phi (-)_a phi1)(y) <= 1/2");
    let pairs: Vec<(YoungFunction, YoungFunction, SampledYoung)> = presets::DRILL_PAIRS
        .iter()
        .map(|&p| {
            let (phi, phi1) = lower_pair(p);
            let g = generator(&phi, &phi1, &cfg.grid)?;
            Ok((phi, phi1, g))
        })
        .collect::<Result<_>>()?;
    let n = cfg.trials(100);
    let fault = if cfg.inject_fault { 64.0 } else { 1.0 };
    let results = map_range(cfg.exec, n, |i| {
        let mut r = gen::substream(cfg.seed ^ 0xd711, i as u64);
        let (phi, phi1, g) = &pairs[i % pairs.len()];
        let sp = if i % 2 == 0 { gen::random_space(&mut r, 64, 1.0) } else { MeasureSpace::sigma_finite(64, 1.0 / 32.0).expect("valid") };
        let y = gen::random_simple(&mut r, &sp, 5, (1e-1, 1e1), 0.3);
        let a = [1.5, 2.0, 3.0][r.gen_range(0..3)];
        if fault == 1.0 {
            run_drill(phi, phi1, g, &y, &sp, a)
        } else {
            // Break the hypothesis after the driver's rescaling.
            let c = 0.5 / (EMBED_CONST * luxemburg_norm(g, &y, &sp));
            reverse_estimate_drill(phi, phi1, &y.scale(c * fault), &sp, a).map(|r| (c * fault, r))
        }
    });
    let mut worst_residual: f64 = 0.0;
    for (i, res) in results.into_iter().enumerate() {
        let p = presets::DRILL_PAIRS[i % presets::DRILL_PAIRS.len()];
        match res {
            Ok((_, rep)) => {
                let residual = rep.witness.max_residual();
                worst_residual = worst_residual.max(residual);
                out.worst_max(rep.truncated_modular);
                let ok = rep.passed() && residual <= WITNESS_TOL && rep.truncated_modular <= 0.5 * (1.0 + NORM_SLACK);
                out.check(ok, || {
                    format!(
                        "trial {i} ({} / {}, a={}): I_trunc(y)={} residual={residual} {}",
                        p.0,
                        p.1,
                        rep.a,
                        rep.truncated_modular,
                        rep.failure.clone().unwrap_or_default()
                    )
                });
            }
            Err(e) => out.check(false, || format!("trial {i} ({} / {}): {e}", p.0, p.1)),
        }
    }
    out.notes.push(format!("max witness residual {worst_residual:e}"));
    Ok(out)
}

/// Fundamental function against bisection, and `‖x‖ ≤ 1 ⇒ I(x) ≤ ‖x‖`.
pub fn norm_modular(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("norm-modular", "||chi_A|| = 1/phi^-1(1/mu(A)); ||x|| <= 1 => I(x) <= ||x||");
    let fault = if cfg.inject_fault { 1.0 + 1e-6 } else { 1.0 };
    let draws = map_range(cfg.exec, 50, |i| {
        let mut r = gen::substream(cfg.seed ^ 0xc4a7, i as u64);
        let phi = gen::random_young(&mut r);
        let t = (r.gen_range((1e-3f64).ln()..(1e3f64).ln())).exp();
        let parts: Vec<f64> = (0..4).map(|_| r.gen_range(0.5..1.5)).collect();
        let s: f64 = parts.iter().sum();
        let sp = MeasureSpace::finite(parts.iter().map(|p| p * t / s).collect()).expect("positive");
        let chi = SimpleFunction::indicator(&sp, &[0, 1, 2, 3]).expect("in range");
        (phi.label(), t, luxemburg_norm(&phi, &chi, &sp), charfn_norm(&phi, t) * fault)
    });
    for (label, t, ln, cf) in draws {
        let d = rel_diff(ln, cf);
        out.worst_max(d);
        out.check(d <= CHARFN_TOL, || format!("{label}, mu(A)={t}: bisection {ln} vs fundamental {cf}"));
    }
    let n = cfg.trials(10_000);
    let reps = map_range(cfg.exec, n, |i| {
        let mut r = gen::substream(cfg.seed ^ 0x4e4d, i as u64);
        let phi = gen::random_young(&mut r);
        let total = r.gen_range(0.1..10.0);
        let sp = gen::random_space(&mut r, 16, total);
        let x = gen::random_simple(&mut r, &sp, 5, (1e-2, 1e2), 0.2);
        let x = if r.gen_bool(0.5) {
            let nrm = luxemburg_norm(&phi, &x, &sp);
            if nrm.is_finite() && nrm > 0.0 { x.scale(r.gen_range(0.1..1.0) / nrm) } else { x }
        } else {
            x
        };
        let rep = check_norm_modular(&phi, &x, &sp);
        let m = modular(&phi, &x, &sp);
        (phi.label(), rep, m <= 1.0 && rep.norm > 1.0 + NORM_RTOL * 10.0)
    });
    for (i, (label, rep, inverted)) in reps.into_iter().enumerate() {
        out.check(rep.holds && !inverted, || format!("trial {i} ({label}): norm {} modular {}", rep.norm, rep.modular));
    }
    Ok(out)
}

/// Divide-and-conquer conjugate against the quadratic oracle on random convex pairs.
pub fn fastpath(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("fastpath", "ominus_monotone = ominus_bruteforce within 1e-12 relative");
    let n = cfg.trials(100);
    let mut fallbacks = 0;
    for i in 0..n {
        let mut r = gen::substream(cfg.seed ^ 0xfa57, i as u64);
        let phi = gen::random_convex_sampled(&mut r, 1024);
        let phi1 = gen::random_convex_sampled(&mut r, 1024);
        let bf = ominus_bruteforce_with(&phi, &phi1, cfg.exec)?;
        let mo = ominus_monotone_with(&phi, &phi1, cfg.exec)?;
        if mo.method == Method::MonotoneFallback {
            fallbacks += 1;
        }
        let mut worst: f64 = 0.0;
        let mut at = 0.0;
        for (k, (&u, &v)) in mo.function.grid().iter().zip(mo.function.values()).enumerate() {
            let v = if cfg.inject_fault && k == 7 { v * (1.0 + 1e-9) + 1e-9 } else { v };
            let d = rel_diff(v, bf.function.values()[k]);
            if d > worst {
                worst = d;
                at = u;
            }
        }
        out.worst_max(worst);
        let same_grid = mo.function.grid() == bf.function.grid();
        out.check(same_grid && worst <= FASTPATH_TOL, || format!("pair {i}: relative gap {worst:e} at u={at}"));
    }
    out.notes.push(format!("{fallbacks} of {n} pairs used the brute-force fallback"));
    Ok(out)
}

/// Factorization verdicts on the presets and exact product decompositions.
pub fn factorization(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("factorization", "phi1^-1 (phi (-) phi1)^-1 ~ phi^-1 and z = x y with I_phi1(x) <= I_phi(z)");
    let spread_max = if cfg.inject_fault { 1.0 } else { SPREAD_MAX };
    for pair in presets::POWER_FAMILY {
        let (phi, phi1) = lower_pair(pair);
        let rep = factorization_check(&phi, &phi1, MeasureKind::Infinite, &cfg.grid)?;
        out.worst_max(rep.spread());
        out.check(rep.verdict && rep.spread() <= spread_max, || format!("{} / {}: verdict {} C/c={}", pair.0, pair.1, rep.verdict, rep.spread()));
    }
    for partner in presets::L1_PARTNERS {
        let phi = YoungFunction::Identity;
        let phi1 = lower(partner);
        let rep = factorization_check(&phi, &phi1, MeasureKind::Infinite, &cfg.grid)?;
        out.check(rep.verdict, || format!("id / {partner}: verdict false ({})", rep.diagnostics.join("; ")));
    }
    let (a, b, c) = presets::MISMATCHED;
    let rep = equivalence_check(&lower(a), &lower(b), &lower(c), Mode::AllArguments, CHECK_RANGE, CHECK_POINTS)?;
    out.check(!rep.verdict, || format!("{a} / {b} / {c}: mismatched triple accepted"));
    let (phi, phi1) = lower_pair(presets::TRIVIAL);
    let rep = factorization_check(&phi, &phi1, MeasureKind::Infinite, &cfg.grid)?;
    out.check(!rep.verdict && !rep.diagnostics.is_empty(), || "trivial preset accepted or undiagnosed".into());

    let per = cfg.trials(100).div_ceil(5).max(1);
    for pair in presets::POWER_FAMILY {
        let (phi, phi1) = lower_pair(pair);
        let g = generator(&phi, &phi1, &cfg.grid)?;
        let res = map_range(cfg.exec, per, |i| {
            let mut r = gen::substream(cfg.seed ^ 0xdec0, i as u64);
            let sp = gen::random_space(&mut r, 64, 1.0);
            let z = gen::random_simple(&mut r, &sp, 6, (1e-2, 1e2), 0.2);
            decompose(&z, &phi, &phi1, &g, &sp)
        });
        for (i, d) in res.into_iter().enumerate() {
            let d = d?;
            let ok = d.product_exact() && d.phi1_modular_x <= d.phi_modular_z + DECOMPOSE_SLACK;
            out.check(ok, || {
                format!(
                    "{} / {} z #{i}: inexact {:?} unfactored {:?} I(x)={} I(z)={}",
                    pair.0, pair.1, d.inexact_cells, d.unfactored_cells, d.phi1_modular_x, d.phi_modular_z
                )
            });
        }
    }
    Ok(out)
}
