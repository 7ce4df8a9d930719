//! The factorization criterion `c·φ⁻¹ ≤ φ₁⁻¹·φ₂⁻¹ ≤ C·φ⁻¹` with `φ₂ = φ⊖φ₁`.
//!
//! On an infinite measure space the inequality is needed for all arguments,
//! on a finite one only for `u > u₀`.

use crate::conjugation::ominus;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::ext::{mul, INF};
use crate::measure::{luxemburg_norm, modular, MeasureSpace, SimpleFunction};
use crate::sampled::GridSpec;
use crate::young::Young;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    AllArguments,
    LargeArguments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Finite,
    Infinite,
}

impl MeasureKind {
    pub fn mode(self) -> Mode {
        match self {
            MeasureKind::Infinite => Mode::AllArguments,
            MeasureKind::Finite => Mode::LargeArguments,
        }
    }
}

/// Tail stability of the ratio when the range is extended by one decade.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailDrift {
    /// Relative change of the extreme (min or max) on extension.
    pub extreme_change: f64,
    /// `|log10 r(extended) − log10 r(end)|`.
    pub log_drift: f64,
    pub stable: bool,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub c: f64,
    pub big_c: f64,
    /// `0` in all-arguments mode.
    pub u0: f64,
    pub verdict: bool,
    pub mode: Mode,
    /// `(u, φ₁⁻¹(u)·φ₂⁻¹(u)/φ⁻¹(u))`; excluded points carry `NaN`.
    pub ratio_trace: Vec<(f64, f64)>,
    /// Points where both sides vanish (`0/0`).
    pub excluded: Vec<f64>,
    pub lower_tail: Option<TailDrift>,
    pub upper_tail: Option<TailDrift>,
    pub diagnostics: Vec<String>,
}

impl EquivalenceReport {
    pub fn spread(&self) -> f64 {
        if self.c > 0.0 {
            self.big_c / self.c
        } else {
            INF
        }
    }
}

/// Tolerances of the tail-stability test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stability {
    /// Extremes may move by this relative amount when the range grows a decade.
    pub extreme_tol: f64,
    /// Or the ratio may drift by this much in `log10` over that decade.
    pub drift_tol: f64,
}

impl Default for Stability {
    fn default() -> Self {
        Stability { extreme_tol: 0.01, drift_tol: 0.05 }
    }
}

fn ratio<F: Young + ?Sized, G: Young + ?Sized, H: Young + ?Sized>(phi: &F, phi1: &G, phi2: &H, u: f64) -> f64 {
    let num = mul(phi1.right_inverse(u), phi2.right_inverse(u));
    let den = phi.right_inverse(u);
    match (num == 0.0, den == 0.0) {
        (true, true) => f64::NAN,
        (false, true) => INF,
        _ => num / den,
    }
}

fn tail(end: f64, ext: f64, c: f64, big_c: f64, st: Stability) -> TailDrift {
    let valid = |x: f64| x > 0.0 && x.is_finite();
    let extreme_change = if valid(ext) && valid(c) && valid(big_c) {
        (big_c.max(ext) / big_c - 1.0).max(c / c.min(ext) - 1.0)
    } else {
        INF
    };
    let log_drift = if valid(end) && valid(ext) { (ext.log10() - end.log10()).abs() } else { INF };
    let stable = extreme_change < st.extreme_tol || log_drift <= st.drift_tol;
    TailDrift { extreme_change, log_drift, stable }
}

/// Ratio trace of `φ₁⁻¹·φ₂⁻¹/φ⁻¹` on `n` log points of `[u_lo, u_hi]` and the verdict.
pub fn equivalence_check<F, G, H>(
    phi: &F,
    phi1: &G,
    phi2: &H,
    mode: Mode,
    u_range: (f64, f64),
    n: usize,
) -> Result<EquivalenceReport>
where
    F: Young + ?Sized,
    G: Young + ?Sized,
    H: Young + ?Sized,
{
    equivalence_check_with(phi, phi1, phi2, mode, u_range, n, Stability::default())
}

pub fn equivalence_check_with<F, G, H>(
    phi: &F,
    phi1: &G,
    phi2: &H,
    mode: Mode,
    u_range: (f64, f64),
    n: usize,
    st: Stability,
) -> Result<EquivalenceReport>
where
    F: Young + ?Sized,
    G: Young + ?Sized,
    H: Young + ?Sized,
{
    if n < 16 {
        return Err(Error::InvalidArgument(format!("need at least 16 points, got {n}")));
    }
    let (lo, hi) = u_range;
    let us = GridSpec::new(lo, hi, n).map_err(|e| Error::InvalidArgument(e.to_string()))?.log_nodes()?;
    let rs = exec::map_range(Exec::default(), us.len(), |i| ratio(phi, phi1, phi2, us[i]));
    let trace: Vec<(f64, f64)> = us.iter().copied().zip(rs.iter().copied()).collect();
    let excluded: Vec<f64> = trace.iter().filter(|p| p.1.is_nan()).map(|p| p.0).collect();
    let mut diagnostics = Vec::new();
    if !excluded.is_empty() {
        diagnostics.push(format!("{} points with 0/0 excluded", excluded.len()));
    }

    let start = match mode {
        Mode::AllArguments => 0,
        Mode::LargeArguments => {
            // Smallest u0 after which every ratio is finite and positive.
            let bad = rs.iter().rposition(|r| !(r.is_finite() && *r > 0.0));
            match bad {
                Some(i) if i + 1 == rs.len() => rs.len(),
                Some(i) => i + 1,
                None => 0,
            }
        }
    };
    let included: Vec<f64> = rs[start..].iter().copied().filter(|r| !r.is_nan()).collect();
    if included.is_empty() {
        let msg = if start >= rs.len() { "no argument range with finite positive ratios" } else { "empty effective range" };
        if mode == Mode::AllArguments {
            return Err(Error::InvalidArgument(msg.into()));
        }
        diagnostics.push(msg.into());
        return Ok(EquivalenceReport {
            c: 0.0,
            big_c: INF,
            u0: INF,
            verdict: false,
            mode,
            ratio_trace: trace,
            excluded,
            lower_tail: None,
            upper_tail: None,
            diagnostics,
        });
    }
    let c = included.iter().copied().fold(INF, f64::min);
    let big_c = included.iter().copied().fold(0.0, f64::max);
    let u0 = if mode == Mode::AllArguments { 0.0 } else { us[start] };

    let upper = tail(*rs.last().unwrap(), ratio(phi, phi1, phi2, hi * 10.0), c, big_c, st);
    let lower = (mode == Mode::AllArguments).then(|| tail(rs[0], ratio(phi, phi1, phi2, lo / 10.0), c, big_c, st));

    let bounded = c > 0.0 && big_c.is_finite();
    if !bounded {
        diagnostics.push(format!("ratio not bounded away from 0 and infinity: c = {c}, C = {big_c}"));
    }
    if !upper.stable {
        diagnostics.push(format!(
            "upper tail unstable: extremes move {:.3}% and log10 drift {:.4} per decade",
            100.0 * upper.extreme_change,
            upper.log_drift
        ));
    }
    if let Some(l) = &lower {
        if !l.stable {
            diagnostics.push(format!(
                "lower tail unstable: extremes move {:.3}% and log10 drift {:.4} per decade",
                100.0 * l.extreme_change,
                l.log_drift
            ));
        }
    }
    let verdict = bounded && upper.stable && lower.as_ref().is_none_or(|l| l.stable);
    Ok(EquivalenceReport {
        c,
        big_c,
        u0,
        verdict,
        mode,
        ratio_trace: trace,
        excluded,
        lower_tail: lower,
        upper_tail: Some(upper),
        diagnostics,
    })
}

/// Default argument range of [`factorization_check`].
pub const CHECK_RANGE: (f64, f64) = (1e-3, 1e3);
pub const CHECK_POINTS: usize = 241;

/// Computes `φ₂ = φ⊖φ₁` on `grid` and tests the criterion in the mode
/// selected by the measure.
pub fn factorization_check<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    kind: MeasureKind,
    grid: &GridSpec,
) -> Result<EquivalenceReport> {
    let gen = ominus(phi, phi1, grid)?;
    let mode = kind.mode();
    if gen.is_trivial() {
        let trace = GridSpec::new(CHECK_RANGE.0, CHECK_RANGE.1, CHECK_POINTS)?
            .log_nodes()?
            .into_iter()
            .map(|u| (u, 0.0))
            .collect();
        return Ok(EquivalenceReport {
            c: 0.0,
            big_c: 0.0,
            u0: if mode == Mode::AllArguments { 0.0 } else { INF },
            verdict: false,
            mode,
            ratio_trace: trace,
            excluded: Vec::new(),
            lower_tail: None,
            upper_tail: None,
            diagnostics: vec!["generator is trivial (phi2 = inf for u > 0, so phi2^-1 = 0)".into()],
        });
    }
    equivalence_check(phi, phi1, &gen.function, mode, CHECK_RANGE, CHECK_POINTS)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub x: SimpleFunction,
    pub y: SimpleFunction,
    /// `I_{φ₁}(x) ≤ I_φ(z)`.
    pub phi1_modular_x: f64,
    pub phi_modular_z: f64,
    pub z_norm: f64,
    pub x_norm: f64,
    /// `‖y‖_{φ⊖φ₁}`; `∞` when `y` leaves the multiplier space.
    pub y_norm: f64,
    /// Cells with `z > 0` where `x·y ≠ z` in floating point.
    pub inexact_cells: Vec<usize>,
    /// Cells with `z > 0` but `x = 0` (z below the zero set of `φ`).
    pub unfactored_cells: Vec<usize>,
}

impl Decomposition {
    pub fn product_exact(&self) -> bool {
        self.inexact_cells.is_empty() && self.unfactored_cells.is_empty()
    }

    pub fn norm_product(&self) -> f64 {
        mul(self.x_norm, self.y_norm)
    }
}

/// The largest `x ≤ φ₁⁻¹(v)` with `φ₁(x) ≤ v`.
fn inverse_below<G: Young + ?Sized>(phi1: &G, v: f64) -> f64 {
    let mut x = phi1.right_inverse(v);
    if !x.is_finite() {
        return x;
    }
    for _ in 0..64 {
        if phi1.eval(x) <= v || x == 0.0 {
            return x;
        }
        x = x.next_down().max(0.0);
    }
    // Jump at x: move to just below it.
    let mut lo = 0.0;
    let mut hi = x;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi1.eval(mid) <= v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A `y` with `x·y == z` in floating point, if one is within two ulps of `z/x`.
fn exact_quotient(z: f64, x: f64) -> (f64, bool) {
    let q = z / x;
    let mut c = q;
    for _ in 0..2 {
        c = c.next_down();
    }
    for _ in 0..5 {
        if x * c == z {
            return (c, true);
        }
        c = c.next_up();
    }
    (q, x * q == z)
}

/// Lowers `x` (which keeps `φ₁(x) ≤ φ(z)`) until some `y` gives `x·y == z`.
/// Near `x ≈ √z` a one-ulp step in `x` moves `z/x` by about one ulp and
/// leaves the rounding offset unchanged, so later steps are relative.
fn exact_split(z: f64, x: f64) -> (f64, f64, bool) {
    for k in 0..256 {
        let c = if k < 4 {
            (0..k).fold(x, |c, _| c.next_down())
        } else {
            x * (1.0 - (k - 3) as f64 * 2f64.powi(-30))
        };
        if !(c > 0.0) || c > x {
            continue;
        }
        let (y, exact) = exact_quotient(z, c);
        if exact {
            return (c, y, true);
        }
    }
    let (y, exact) = exact_quotient(z, x);
    (x, y, exact)
}

/// `z = x·y` with `x = φ₁⁻¹(φ(|z|))` cell-wise and `y = z/x` on `{x > 0}`.
pub fn decompose<F, G, H>(
    z: &SimpleFunction,
    phi: &F,
    phi1: &G,
    generator: &H,
    sp: &MeasureSpace,
) -> Result<Decomposition>
where
    F: Young + ?Sized,
    G: Young + ?Sized,
    H: Young + ?Sized,
{
    let mut xs = Vec::with_capacity(z.values().len());
    let mut ys = Vec::with_capacity(z.values().len());
    let mut inexact = Vec::new();
    let mut unfactored = Vec::new();
    for (i, &zi) in z.values().iter().enumerate() {
        if zi == 0.0 {
            xs.push(0.0);
            ys.push(0.0);
            continue;
        }
        let v = phi.eval(zi);
        if v.is_infinite() {
            return Err(Error::InvalidArgument(format!("phi(z) is infinite on cell {i}; normalize z first")));
        }
        let x = inverse_below(phi1, v);
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("phi1^-1(phi(z)) is infinite on cell {i}")));
        }
        if x == 0.0 {
            unfactored.push(i);
            xs.push(0.0);
            ys.push(0.0);
            continue;
        }
        let (x, y, exact) = exact_split(zi, x);
        if !exact {
            inexact.push(i);
        }
        xs.push(x);
        ys.push(y);
    }
    let x = SimpleFunction::from_values(sp, xs)?;
    let y = SimpleFunction::from_values(sp, ys)?;
    Ok(Decomposition {
        phi1_modular_x: modular(phi1, &x, sp),
        phi_modular_z: modular(phi, z, sp),
        z_norm: luxemburg_norm(phi, z, sp),
        x_norm: luxemburg_norm(phi1, &x, sp),
        y_norm: luxemburg_norm(generator, &y, sp),
        x,
        y,
        inexact_cells: inexact,
        unfactored_cells: unfactored,
    })
}
