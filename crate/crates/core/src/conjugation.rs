//! The generalized conjugate `φ⊖φ₁(u) = sup_s { φ(s·u) − φ₁(s) }`.
//!
//! The admissible `s`-range avoids `∞ − ∞`:
//!
//! | `φ₁` at `b_φ₁`             | range            | [`DomainConvention`] |
//! |----------------------------|------------------|----------------------|
//! | `b_φ₁ = ∞`                 | `(0, ∞)`         | `Unbounded`          |
//! | `b_φ₁ < ∞`, `φ₁(b_φ₁) = ∞` | `(0, b_φ₁)`      | `OpenAtB`            |
//! | `b_φ₁ < ∞`, `φ₁(b_φ₁) < ∞` | `(0, b_φ₁]`      | `ClosedAtB`          |
//!
//! At an excluded endpoint the left limits of both functions are used.
//!
//! Closed-form inputs go through [`ominus`], which maximizes pointwise on a
//! fixed log `s`-lattice (eight nodes per decade over `10^±60`, then decade
//! steps up to `10³⁰⁰`) plus every kink of `φ` and `φ₁`, and polishes the
//! best local maxima by golden-section search in `log s`. Sampled inputs go
//! through [`ominus_bruteforce`] (all grid pairs) or [`ominus_monotone`]
//! (divide and conquer over the monotone argmax).

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::ext::INF;
use crate::sampled::{GridSpec, SampledYoung};
use crate::young::{Degeneracy, Young, YoungFunction};

/// Which `s`-range the supremum was taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainConvention {
    OpenAtB,
    ClosedAtB,
    Unbounded,
}

/// How an [`OminusResult`] was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Pointwise maximization of closed-form inputs.
    Pointwise,
    BruteForce,
    Monotone,
    /// The monotone path was requested but an input failed the convexity check.
    MonotoneFallback,
}

/// `(0, hi)` or `(0, hi]`; `hi = ∞` is the unbounded range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SRange {
    pub hi: f64,
    pub closed: bool,
}

impl SRange {
    /// Range of the untruncated conjugate for `φ₁` with parameters `p1`.
    pub fn conjugate(p1: Degeneracy) -> (SRange, DomainConvention) {
        if p1.b.is_infinite() {
            (SRange { hi: INF, closed: false }, DomainConvention::Unbounded)
        } else if p1.finite_at_b {
            (SRange { hi: p1.b, closed: true }, DomainConvention::ClosedAtB)
        } else {
            (SRange { hi: p1.b, closed: false }, DomainConvention::OpenAtB)
        }
    }

    /// Range `[0, a]` of `φ⊖ₐφ₁`, with `0 < a ≤ b_φ₁`.
    pub fn truncated(p1: Degeneracy, a: f64) -> Result<(SRange, DomainConvention)> {
        if !(a > 0.0) || a > p1.b || a.is_infinite() {
            return Err(Error::Truncation { a, b: p1.b });
        }
        if a < p1.b {
            Ok((SRange { hi: a, closed: true }, DomainConvention::ClosedAtB))
        } else {
            Ok(Self::conjugate(p1))
        }
    }
}

/// Output of every conjugation routine.
#[derive(Clone, Debug)]
pub struct OminusResult {
    pub function: SampledYoung,
    /// `(u, s*(u))`; `s* = ∞` when the value is infinite or the supremum escapes.
    pub argmax_profile: Vec<(f64, f64)>,
    /// The `a` of `⊖ₐ`; `∞` for the untruncated conjugate.
    pub truncation: f64,
    pub domain_convention: DomainConvention,
    pub method: Method,
}

impl OminusResult {
    /// `b` of the sampled result: last node with a finite value, or `∞`.
    pub fn b(&self) -> f64 {
        self.function.params().b
    }

    pub fn is_trivial(&self) -> bool {
        self.function.is_trivial()
    }

    /// Largest finite argmax over the profile.
    pub fn max_finite_argmax(&self) -> f64 {
        self.argmax_profile.iter().map(|p| p.1).filter(|s| s.is_finite()).fold(0.0, f64::max)
    }

    pub fn value_at_node(&self, u: f64) -> Option<f64> {
        let g = self.function.grid();
        let i = g.partition_point(|&x| x < u);
        (i < g.len() && g[i] == u).then(|| self.function.values()[i])
    }
}

/// Supremum values above this are treated as `∞` when the objective keeps growing.
pub const ESCAPE: f64 = 1e200;

const NODES_PER_DECADE: i32 = 8;
const MAIN_DECADES: i32 = 60;
const GOLDEN_ITERS: usize = 90;
const POLISHED_PEAKS: usize = 3;

fn s_lattice() -> &'static [f64] {
    static NODES: OnceLock<Vec<f64>> = OnceLock::new();
    NODES.get_or_init(|| {
        let k = NODES_PER_DECADE * MAIN_DECADES;
        let mut v: Vec<f64> = (-k..=k).map(|i| 10f64.powf(i as f64 / NODES_PER_DECADE as f64)).collect();
        v.extend((1..=48).map(|j| 10f64.powi(MAIN_DECADES + 5 * j)));
        v
    })
}

fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    // Search in log s when the bracket is away from 0.
    let log = lo > 0.0;
    let (to, from): (fn(f64) -> f64, fn(f64) -> f64) =
        if log { (f64::ln, f64::exp) } else { (|x| x, |x| x) };
    let (mut a, mut b) = (to(lo), to(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(from(c)), f(from(d)));
    for _ in 0..GOLDEN_ITERS {
        if !(b - a > 1e-15 * a.abs().max(b.abs()).max(1e-300)) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(from(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(from(d));
        }
    }
    if fc >= fd {
        (from(c), fc)
    } else {
        (from(d), fd)
    }
}

/// Pointwise evaluator of `sup_{s ∈ range} φ(s·u) − φ₁(s)`.
pub struct Conjugator<'a, F: ?Sized, G: ?Sized> {
    phi: &'a F,
    phi1: &'a G,
    range: SRange,
    phi_params: Degeneracy,
    phi_kinks: Vec<f64>,
    phi1_kinks: Vec<f64>,
}

impl<'a, F: Young + ?Sized, G: Young + ?Sized> Conjugator<'a, F, G> {
    pub fn new(phi: &'a F, phi1: &'a G, range: SRange) -> Self {
        Conjugator {
            phi,
            phi1,
            range,
            phi_params: phi.params(),
            phi_kinks: phi.kinks(),
            phi1_kinks: phi1.kinks(),
        }
    }

    pub fn range(&self) -> SRange {
        self.range
    }

    /// `φ(s·u) − φ₁(s)` at an admissible `s` (left limits at an open endpoint).
    pub fn objective(&self, s: f64, u: f64) -> f64 {
        if s >= self.range.hi && !self.range.closed {
            self.phi.eval_left(s * u) - self.phi1.eval_left(s)
        } else {
            self.phi.eval(s * u) - self.phi1.eval(s)
        }
    }

    /// `(value, argmax)` at `u`. The smallest maximizer is reported on ties.
    pub fn at(&self, u: f64) -> (f64, f64) {
        if !(u > 0.0) {
            return (0.0, 0.0);
        }
        let SRange { hi, closed } = self.range;
        let b = self.phi_params.b;
        if b.is_finite() {
            // Some admissible s has s·u beyond b_φ while φ₁(s) < ∞.
            let t = b / u;
            if t < hi || (t == hi && closed && !self.phi_params.finite_at_b) {
                return (INF, INF);
            }
        }
        let g = |s: f64| self.phi.eval(s * u) - self.phi1.eval(s);

        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(1100);
        pts.push((0.0, 0.0));
        for &s in s_lattice() {
            if s >= hi {
                break;
            }
            pts.push((s, g(s)));
        }
        let mut extra = false;
        for &k in &self.phi1_kinks {
            if k > 0.0 && k < hi {
                pts.push((k, g(k)));
                extra = true;
            }
        }
        for &k in &self.phi_kinks {
            let s = k / u;
            if s > 0.0 && s < hi {
                pts.push((s, g(s)));
                extra = true;
            }
        }
        if hi.is_finite() {
            // A jump of φ₁ at a closed endpoint leaves the left limit as the supremum.
            let left = self.phi.eval_left(hi * u) - self.phi1.eval_left(hi);
            let at = self.objective(hi, u);
            pts.push((hi, if left > at { left } else { at }));
            extra = true;
        }
        if extra {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.dedup_by(|a, b| a.0 == b.0);
        }
        pts.retain(|p| !p.1.is_nan());

        if hi.is_infinite()
            && pts.iter().any(|p| p.1 == INF) {
                return (INF, INF);
            }

        let mut best = 0;
        for (i, p) in pts.iter().enumerate() {
            if p.1 > pts[best].1 {
                best = i;
            }
        }
        let last = pts.len() - 1;
        if hi.is_infinite() && best == last && last >= 4 {
            let increasing = pts[last - 3..].windows(2).all(|w| w[1].1 > w[0].1);
            if increasing {
                if pts[best].1 >= ESCAPE {
                    return (INF, INF);
                }
                // Not attained on the lattice: report the limit along it.
                return (pts[best].1, INF);
            }
        }

        // Polish the strongest interior local maxima.
        let mut peaks: Vec<usize> = (1..last)
            .filter(|&i| pts[i].1.is_finite() && pts[i].1 >= pts[i - 1].1 && pts[i].1 >= pts[i + 1].1)
            .collect();
        // A rising run into a finite endpoint may peak before it.
        if hi.is_finite() && last >= 1 && pts[last].1 >= pts[last - 1].1 {
            peaks.push(last);
        }
        peaks.sort_by(|&i, &j| pts[j].1.total_cmp(&pts[i].1).then(i.cmp(&j)));
        peaks.truncate(POLISHED_PEAKS);
        let (mut best_s, mut best_v) = pts[best];
        for &i in &peaks {
            let (lo, up) = (pts[i - 1].0, pts[(i + 1).min(last)].0);
            let (s, v) = golden_max(g, lo, up);
            let better = v > best_v || (v == best_v && s < best_s);
            if v.is_finite() && s > 0.0 && s < hi && better {
                best_s = s;
                best_v = v;
            }
        }
        if best_v <= 0.0 {
            // φ(s·u) − φ₁(s) ≤ 0 everywhere: the supremum 0 sits at s = 0.
            return (0.0, 0.0);
        }
        (best_v, best_s)
    }
}

fn provenance<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G, truncation: f64) -> String {
    if truncation.is_finite() {
        format!("ominus_{truncation}({},{})", phi.label(), phi1.label())
    } else {
        format!("ominus({},{})", phi.label(), phi1.label())
    }
}

fn conjugate_on_grid<F, G>(
    phi: &F,
    phi1: &G,
    range: SRange,
    convention: DomainConvention,
    truncation: f64,
    grid: &GridSpec,
    exec: Exec,
) -> Result<OminusResult>
where
    F: Young + ?Sized,
    G: Young + ?Sized,
{
    let pb = phi.params().b;
    let mut spec = grid.clone();
    if pb.is_finite() && range.hi.is_finite() {
        // Put the ∞-transition b_φ / sup(range) on a node.
        spec.anchors.push(pb / range.hi);
    }
    let nodes = spec.nodes()?;
    let conj = Conjugator::new(phi, phi1, range);
    let out = exec::map_range(exec, nodes.len(), |i| conj.at(nodes[i]));
    let values: Vec<f64> = out.iter().map(|o| o.0).collect();
    let profile = nodes.iter().zip(&out).map(|(&u, o)| (u, o.1)).collect();
    Ok(OminusResult {
        function: SampledYoung::from_parts(nodes, values, provenance(phi, phi1, truncation))?,
        argmax_profile: profile,
        truncation,
        domain_convention: convention,
        method: Method::Pointwise,
    })
}

/// `φ⊖φ₁` sampled on `grid`, computed in parallel when the feature is on.
pub fn ominus<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G, grid: &GridSpec) -> Result<OminusResult> {
    ominus_with(phi, phi1, grid, Exec::default())
}

pub fn ominus_with<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    grid: &GridSpec,
    exec: Exec,
) -> Result<OminusResult> {
    let (range, conv) = SRange::conjugate(phi1.params());
    conjugate_on_grid(phi, phi1, range, conv, INF, grid, exec)
}

/// `φ⊖ₐφ₁`, the supremum over `0 ≤ s ≤ a` (`0 < a ≤ b_φ₁`).
pub fn ominus_truncated<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    a: f64,
    grid: &GridSpec,
) -> Result<OminusResult> {
    let (range, conv) = SRange::truncated(phi1.params(), a)?;
    conjugate_on_grid(phi, phi1, range, conv, a, grid, Exec::default())
}

/// `(φ⊖φ₁(u), s*(u))` at a single point.
pub fn ominus_at<F: Young + ?Sized, G: Young + ?Sized>(phi: &F, phi1: &G, u: f64) -> (f64, f64) {
    let (range, _) = SRange::conjugate(phi1.params());
    Conjugator::new(phi, phi1, range).at(u)
}

/// `(φ⊖ₐφ₁(u), s*(u))` at a single point.
pub fn ominus_truncated_at<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    a: f64,
    u: f64,
) -> Result<(f64, f64)> {
    let (range, _) = SRange::truncated(phi1.params(), a)?;
    Ok(Conjugator::new(phi, phi1, range).at(u))
}

/// Classical Young conjugate `φ₁*`, i.e. `Identity ⊖ φ₁`.
pub fn classical_conjugate<G: Young + ?Sized>(phi1: &G, grid: &GridSpec) -> Result<OminusResult> {
    ominus(&YoungFunction::Identity, phi1, grid)
}

/// `(α·u^p) ⊖ (β·u^q)` at `u`, in closed form: `(value, argmax)`.
///
/// For `p < q` the stationary point is `s* = (α·p·u^p / (β·q))^{1/(q−p)}` and
/// the value is `α·u^p·s*^p·(1 − p/q)`.
pub fn power_ominus_power(p: f64, alpha: f64, q: f64, beta: f64, u: f64) -> (f64, f64) {
    if !(u > 0.0) {
        return (0.0, 0.0);
    }
    let up = u.powf(p);
    if p < q {
        let s = (alpha * p * up / (beta * q)).powf(1.0 / (q - p));
        (alpha * up * s.powf(p) * (1.0 - p / q), s)
    } else if p == q && alpha * up <= beta {
        (0.0, 0.0)
    } else {
        (INF, INF)
    }
}

/// Closed-form shortcut when both inputs are powers (or the identity).
pub fn closed_form(phi: &YoungFunction, phi1: &YoungFunction, u: f64) -> Option<(f64, f64)> {
    let coeffs = |f: &YoungFunction| match f {
        YoungFunction::Power { p, scale } => Some((*p, *scale)),
        YoungFunction::Identity => Some((1.0, 1.0)),
        _ => None,
    };
    let ((p, a), (q, b)) = (coeffs(phi)?, coeffs(phi1)?);
    Some(power_ominus_power(p, a, q, b, u))
}

/// `φ⊖ₐφ₁` for each `a` in an increasing list within `(0, b_φ₁]`.
pub fn truncation_sweep<F: Young + ?Sized, G: Young + ?Sized>(
    phi: &F,
    phi1: &G,
    a_list: &[f64],
    grid: &GridSpec,
) -> Result<Vec<OminusResult>> {
    if a_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("truncation levels must increase strictly".into()));
    }
    let mut out: Vec<OminusResult> = Vec::with_capacity(a_list.len());
    for &a in a_list {
        let mut r = ominus_truncated(phi, phi1, a, grid)?;
        if let Some(prev) = out.last() {
            // The previous maximizer is admissible for the larger range.
            if prev.function.grid() == r.function.grid() {
                let mut values = r.function.values().to_vec();
                for i in 0..values.len() {
                    if prev.function.values()[i] > values[i] {
                        values[i] = prev.function.values()[i];
                        r.argmax_profile[i].1 = prev.argmax_profile[i].1;
                    }
                }
                let tag = r.function.provenance().to_string();
                r.function = SampledYoung::from_parts(r.function.grid().to_vec(), values, tag)?;
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// Matrix view `M[i][j] = φ(s_j·u_i) − φ₁(s_j)` over the sampled grids.
struct SampledPair<'a> {
    phi: &'a SampledYoung,
    phi1: &'a SampledYoung,
    /// Admissible columns `0..=last_col`.
    last_col: usize,
}

impl SampledPair<'_> {
    #[inline]
    fn entry(&self, i: usize, j: usize) -> f64 {
        let u = self.phi.grid()[i];
        let s = self.phi1.grid()[j];
        self.phi.eval(s * u) - self.phi1.values()[j]
    }

    /// Rows whose supremum is infinite form a suffix; returns its start.
    fn finite_rows(&self) -> usize {
        let s_max = self.phi1.grid()[self.last_col];
        let g = self.phi.grid();
        g.partition_point(|&u| self.phi.eval(s_max * u).is_finite())
    }

    fn assemble(&self, rows: Vec<(f64, usize)>, method: Method) -> Result<OminusResult> {
        let grid = self.phi.grid().to_vec();
        let n_fin = rows.len();
        let mut values = Vec::with_capacity(grid.len());
        let mut profile = Vec::with_capacity(grid.len());
        for (i, &u) in grid.iter().enumerate() {
            if i < n_fin {
                let (v, j) = rows[i];
                values.push(v);
                profile.push((u, self.phi1.grid()[j]));
            } else {
                values.push(INF);
                profile.push((u, INF));
            }
        }
        let p1 = self.phi1.params();
        let convention = if p1.b.is_infinite() { DomainConvention::Unbounded } else { DomainConvention::ClosedAtB };
        Ok(OminusResult {
            function: SampledYoung::from_parts(
                grid,
                values,
                format!("ominus({},{})", self.phi.provenance(), self.phi1.provenance()),
            )?,
            argmax_profile: profile,
            truncation: INF,
            domain_convention: convention,
            method,
        })
    }
}

fn row_max(pair: &SampledPair<'_>, i: usize, lo: usize, hi: usize) -> (f64, usize) {
    let mut best = (pair.entry(i, lo), lo);
    for j in lo + 1..=hi {
        let v = pair.entry(i, j);
        if v > best.0 {
            best = (v, j);
        }
    }
    best
}

/// Exhaustive `O(n·m)` maximization over all grid pairs; the reference for
/// every fast path. The output grid is the grid of `φ`.
pub fn ominus_bruteforce(phi: &SampledYoung, phi1: &SampledYoung) -> Result<OminusResult> {
    ominus_bruteforce_with(phi, phi1, Exec::default())
}

pub fn ominus_bruteforce_with(phi: &SampledYoung, phi1: &SampledYoung, exec: Exec) -> Result<OminusResult> {
    let pair = SampledPair { phi, phi1, last_col: phi1.last_finite_index() };
    let n = phi.len();
    let all = exec::map_range(exec, n, |i| row_max(&pair, i, 0, pair.last_col));
    let n_fin = all.iter().position(|r| r.0.is_infinite()).unwrap_or(n);
    bruteforce_rows(&pair, all, n_fin, Method::BruteForce)
}

fn bruteforce_rows(pair: &SampledPair<'_>, mut rows: Vec<(f64, usize)>, n_fin: usize, m: Method) -> Result<OminusResult> {
    rows.truncate(n_fin);
    pair.assemble(rows, m)
}

/// Brute force restricted to rows `rows` (used for timing estimates).
pub fn ominus_bruteforce_rows(phi: &SampledYoung, phi1: &SampledYoung, rows: &[usize], exec: Exec) -> Vec<f64> {
    let pair = SampledPair { phi, phi1, last_col: phi1.last_finite_index() };
    exec::map_range(exec, rows.len(), |k| row_max(&pair, rows[k], 0, pair.last_col).0)
}

fn monotone_solve(pair: &SampledPair<'_>, row0: usize, out: &mut [(f64, usize)], lo: usize, hi: usize, exec: Exec) {
    if out.is_empty() {
        return;
    }
    let mid = out.len() / 2;
    let best = row_max(pair, row0 + mid, lo, hi);
    out[mid] = best;
    let (left, rest) = out.split_at_mut(mid);
    let right = &mut rest[1..];
    let j = best.1;
    if left.len() + right.len() > 512 {
        exec::join(
            exec,
            || monotone_solve(pair, row0, left, lo, j, exec),
            || monotone_solve(pair, row0 + mid + 1, right, j, hi, exec),
        );
    } else {
        monotone_solve(pair, row0, left, lo, j, Exec::Sequential);
        monotone_solve(pair, row0 + mid + 1, right, j, hi, Exec::Sequential);
    }
}

/// Same values as [`ominus_bruteforce`] in `O((n + m) log n)` evaluations.
///
/// For convex non-decreasing `φ` the matrix `φ(s_j·u_i) − φ₁(s_j)` has
/// increasing differences, so the leftmost row argmax is non-decreasing in
/// `i` and rows can be solved by divide and conquer. Inputs that fail the
/// discrete convexity check are handed to the brute force instead, flagged
/// as [`Method::MonotoneFallback`].
pub fn ominus_monotone(phi: &SampledYoung, phi1: &SampledYoung) -> Result<OminusResult> {
    ominus_monotone_with(phi, phi1, Exec::default())
}

pub fn ominus_monotone_with(phi: &SampledYoung, phi1: &SampledYoung, exec: Exec) -> Result<OminusResult> {
    let convex = phi.is_discretely_convex(1e-12) && phi1.is_discretely_convex(1e-12);
    if !convex {
        let mut r = ominus_bruteforce_with(phi, phi1, exec)?;
        r.method = Method::MonotoneFallback;
        return Ok(r);
    }
    let pair = SampledPair { phi, phi1, last_col: phi1.last_finite_index() };
    let n_fin = pair.finite_rows();
    let mut rows = vec![(0.0, 0usize); n_fin];
    monotone_solve(&pair, 0, &mut rows, 0, pair.last_col, exec);
    pair.assemble(rows, Method::Monotone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampled::sample;

    fn pow(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn identity_ominus_identity() {
        let r = ominus(&YoungFunction::Identity, &YoungFunction::Identity, &GridSpec::new(1e-2, 1e2, 41).unwrap()).unwrap();
        for (&u, &v) in r.function.grid().iter().zip(r.function.values()) {
            if u <= 1.0 {
                assert_eq!(v, 0.0, "u = {u}");
            } else {
                assert_eq!(v, INF, "u = {u}");
            }
        }
        assert_eq!(r.domain_convention, DomainConvention::Unbounded);
    }

    #[test]
    fn power_two_three_pointwise() {
        let (v, s) = ominus_at(&pow(2.0), &pow(3.0), 1.0);
        assert!((v - 4.0 / 27.0).abs() < 1e-14);
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
        let (v, _) = ominus_at(&pow(2.0), &pow(3.0), 10.0);
        assert!((v / (4.0 / 27.0 * 1e6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_phi_with_unbounded_phi1_is_infinite() {
        let phi = YoungFunction::cut_off(pow(2.0), 1.0, INF).unwrap();
        let r = ominus(&phi, &pow(2.0), &GridSpec::new(1e-3, 1e3, 31).unwrap()).unwrap();
        assert!(r.is_trivial());
    }

    #[test]
    fn truncated_examples() {
        let id = YoungFunction::Identity;
        for u in [0.2, 1.0, 1.5, 4.0] {
            let (v, _) = ominus_truncated_at(&id, &id, 1.0, u).unwrap();
            assert!((v - (u - 1.0f64).max(0.0)).abs() < 1e-14, "u = {u}");
        }
        let (v, s) = ominus_truncated_at(&pow(2.0), &pow(3.0), 10.0, 1.0).unwrap();
        assert!((v - 4.0 / 27.0).abs() < 1e-14);
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
        let (v, s) = ominus_truncated_at(&pow(2.0), &pow(3.0), 0.5, 1.0).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
        assert_eq!(s, 0.5);
        assert!(ominus_truncated_at(&pow(2.0), &pow(3.0), 0.0, 1.0).is_err());
        let c = YoungFunction::cut_off(pow(3.0), 1.0, INF).unwrap();
        assert!(ominus_truncated_at(&pow(2.0), &c, 2.0, 1.0).is_err());
    }

    #[test]
    fn classical_conjugate_examples() {
        let half = YoungFunction::power_scaled(2.0, 0.5).unwrap();
        for u in [0.1, 1.0, 3.0] {
            let (v, _) = ominus_at(&YoungFunction::Identity, &half, u);
            assert!((v - u * u / 2.0).abs() < 1e-13 * (1.0 + u * u));
        }
        let third = YoungFunction::power_scaled(3.0, 1.0 / 3.0).unwrap();
        let (v, _) = ominus_at(&YoungFunction::Identity, &third, 1.0);
        assert!((v - 2.0 / 3.0).abs() < 1e-13);
        let linf = YoungFunction::linfty_indicator(1.0).unwrap();
        for u in [0.5, 2.0, 7.0] {
            let (v, s) = ominus_at(&YoungFunction::Identity, &linf, u);
            assert_eq!(v, u);
            assert_eq!(s, 1.0);
        }
    }

    #[test]
    fn closed_form_agrees_with_numeric_path() {
        for (p, a, q, b) in [(2.0, 1.0, 3.0, 1.0), (1.5, 2.0, 4.0, 0.5), (1.0, 1.0, 2.0, 0.5), (3.0, 1.0, 5.0, 3.0)] {
            let phi = YoungFunction::power_scaled(p, a).unwrap();
            let phi1 = YoungFunction::power_scaled(q, b).unwrap();
            for u in [1e-3, 0.1, 1.0, 7.0, 1e3] {
                let (v, s) = ominus_at(&phi, &phi1, u);
                let (cv, cs) = closed_form(&phi, &phi1, u).unwrap();
                assert!(crate::ext::rel_diff(v, cv) < 1e-12, "{p} {q} {u}: {v} vs {cv}");
                assert!(crate::ext::rel_diff(s, cs) < 1e-6);
            }
        }
        assert_eq!(closed_form(&pow(2.0), &pow(2.0), 0.5), Some((0.0, 0.0)));
        assert_eq!(closed_form(&pow(2.0), &pow(2.0), 2.0).unwrap().0, INF);
        assert_eq!(closed_form(&pow(3.0), &pow(2.0), 0.1).unwrap().0, INF);
    }

    #[test]
    fn sweep_is_monotone_in_a() {
        let g = GridSpec::new(0.1, 3.0, 30).unwrap().with_anchors([1.0]);
        let rs = truncation_sweep(&pow(2.0), &pow(3.0), &[1.0, 2.0, 4.0, 8.0], &g).unwrap();
        for w in rs.windows(2) {
            for ((a, b), u) in w[0].function.values().iter().zip(w[1].function.values()).zip(w[0].function.grid()) {
                assert!(b >= a, "u = {u}: {a} then {b} (a = {} vs {})", w[0].truncation, w[1].truncation);
            }
        }
        let at1 = |r: &OminusResult| r.value_at_node(1.0).unwrap();
        for r in &rs {
            assert!((at1(r) - 4.0 / 27.0).abs() < 1e-14);
        }
        assert!(truncation_sweep(&pow(2.0), &pow(3.0), &[2.0, 1.0], &g).is_err());
    }

    #[test]
    fn monotone_matches_bruteforce_on_powers() {
        let g = GridSpec::new(1e-2, 1e2, 257).unwrap();
        let a = sample(&pow(2.0), &g).unwrap();
        let b = sample(&pow(3.0), &g).unwrap();
        let bf = ominus_bruteforce(&a, &b).unwrap();
        let mo = ominus_monotone(&a, &b).unwrap();
        assert_eq!(mo.method, Method::Monotone);
        for (x, y) in bf.function.values().iter().zip(mo.function.values()) {
            assert!(crate::ext::rel_diff(*x, *y) <= 1e-12);
        }
    }

    #[test]
    fn monotone_falls_back_on_nonconvex_input() {
        let a = SampledYoung::from_parts(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 2.0, 3.0, 3.5], "bent").unwrap();
        let b = sample(&pow(2.0), &GridSpec::new(0.1, 3.0, 9).unwrap()).unwrap();
        let r = ominus_monotone(&a, &b).unwrap();
        assert_eq!(r.method, Method::MonotoneFallback);
    }

    #[test]
    fn b_parameter_rules() {
        let c2 = YoungFunction::cut_off(pow(2.0), 1.0, INF).unwrap();
        let c3 = YoungFunction::cut_off(pow(3.0), 1.0, INF).unwrap();
        let g = GridSpec::new(1e-2, 1e2, 101).unwrap();
        assert_eq!(ominus(&c2, &c3, &g).unwrap().b(), 1.0);
        assert_eq!(ominus(&pow(2.0), &c2, &g).unwrap().b(), INF);
    }
}
