//! Log-grid piecewise-linear carriers for Young functions.

use crate::error::{Error, Result};
use crate::ext::INF;
use crate::young::{Degeneracy, Young};

/// Log-spaced sampling grid on `[u_min, u_max]` with `0` prepended.
///
/// `anchors` are extra nodes merged into the grid (cut-off points, `u = 1`,
/// ...), so that jumps land exactly on a node.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub n: usize,
    pub anchors: Vec<f64>,
}

impl Default for GridSpec {
    /// `10⁻⁶ ..= 10⁶` with 4097 points (`u = 1` is a grid node).
    fn default() -> Self {
        GridSpec { u_min: 1e-6, u_max: 1e6, n: 4097, anchors: vec![1.0] }
    }
}

impl GridSpec {
    pub fn new(u_min: f64, u_max: f64, n: usize) -> Result<Self> {
        let g = GridSpec { u_min, u_max, n, anchors: Vec::new() };
        g.validate()?;
        Ok(g)
    }

    pub fn with_anchors(mut self, anchors: impl IntoIterator<Item = f64>) -> Self {
        self.anchors.extend(anchors);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", self.n)));
        }
        if !(self.u_min > 0.0 && self.u_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("u_min must be positive, got {}", self.u_min)));
        }
        if !(self.u_max.is_finite() && self.u_min < self.u_max) {
            return Err(Error::InvalidGrid(format!(
                "need u_min < u_max, got {} and {}",
                self.u_min, self.u_max
            )));
        }
        Ok(())
    }

    /// Log-spaced nodes only (no `0`, no anchors).
    pub fn log_nodes(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (l0, l1) = (self.u_min.log10(), self.u_max.log10());
        let step = (l1 - l0) / (self.n - 1) as f64;
        let mut v: Vec<f64> = (0..self.n).map(|i| 10f64.powf(l0 + step * i as f64)).collect();
        v[0] = self.u_min;
        v[self.n - 1] = self.u_max;
        Ok(v)
    }

    /// `0`, the log nodes and every positive finite anchor, sorted and deduplicated.
    pub fn nodes(&self) -> Result<Vec<f64>> {
        let mut v = self.log_nodes()?;
        v.push(0.0);
        v.extend(self.anchors.iter().copied().filter(|a| a.is_finite() && *a > 0.0));
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }
}

/// Piecewise-linear interpolant through `(grid[i], values[i])`.
///
/// `grid[0] = 0 = values[0]`. Infinite values form a suffix and mean
/// `φ = ∞` strictly after the last finite node. Without infinite values
/// the last segment is extended linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledYoung {
    grid: Vec<f64>,
    values: Vec<f64>,
    provenance: String,
    last_finite: usize,
}

impl SampledYoung {
    /// Builds and checks the carrier invariants (monotone, convex, `∞` suffix).
    pub fn new(grid: Vec<f64>, values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        let s = Self::from_parts(grid, values, provenance)?;
        let v = s.invariant_violations(1e-12);
        if let Some(first) = v.first() {
            return Err(Error::InvalidFunction(first.clone()));
        }
        Ok(s)
    }

    /// Builds with structural checks only; numerical invariants are left to
    /// [`SampledYoung::invariant_violations`].
    pub(crate) fn from_parts(grid: Vec<f64>, values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidFunction("grid and values differ in length".into()));
        }
        if grid.len() < 2 {
            return Err(Error::InvalidFunction("a sampled function needs two nodes".into()));
        }
        if grid[0] != 0.0 || values[0] != 0.0 {
            return Err(Error::InvalidFunction("sampled functions start at (0, 0)".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidFunction("grid must increase strictly".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidFunction("NaN value".into()));
        }
        let last_finite = values.iter().rposition(|v| v.is_finite()).unwrap_or(0);
        Ok(SampledYoung { grid, values, provenance: provenance.into(), last_finite })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn last_finite_index(&self) -> usize {
        self.last_finite
    }

    fn has_infinite_tail(&self) -> bool {
        self.last_finite + 1 < self.values.len()
    }

    /// `∞` at every positive node: the generator of the trivial space `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.last_finite == 0 && self.has_infinite_tail()
    }

    /// Lists every violated carrier invariant, with `slack` relative tolerance.
    pub fn invariant_violations(&self, slack: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.values[0] != 0.0 {
            out.push("value at 0 is not 0".to_string());
        }
        for i in 1..self.values.len() {
            let (a, b) = (self.values[i - 1], self.values[i]);
            if a.is_infinite() && b.is_finite() {
                out.push(format!("finite value after infinity at node {i}"));
            }
            if b < a - slack * a.abs() {
                out.push(format!("decrease at u = {}", self.grid[i]));
            }
        }
        for i in 1..self.last_finite {
            if let Some(msg) = convexity_gap(&self.grid, &self.values, i, slack) {
                out.push(msg);
            }
        }
        out
    }

    /// Discrete convexity of the finite part.
    pub fn is_discretely_convex(&self, slack: f64) -> bool {
        (1..self.last_finite).all(|i| convexity_gap(&self.grid, &self.values, i, slack).is_none())
    }
}

fn convexity_gap(g: &[f64], v: &[f64], i: usize, slack: f64) -> Option<String> {
    let s0 = (v[i] - v[i - 1]) / (g[i] - g[i - 1]);
    let s1 = (v[i + 1] - v[i]) / (g[i + 1] - g[i]);
    // Slopes are compared relative to the values they come from, so that
    // rounding in large values does not read as a convexity defect.
    let scale = (v[i + 1].abs() + v[i].abs()) / (g[i + 1] - g[i]) + (v[i].abs() + v[i - 1].abs()) / (g[i] - g[i - 1]);
    if s1 < s0 - slack * scale {
        Some(format!("convexity violated at u = {}", g[i]))
    } else {
        None
    }
}

impl Young for SampledYoung {
    fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let lf = self.last_finite;
        if u > self.grid[lf] {
            if self.has_infinite_tail() || lf == 0 {
                return INF;
            }
            let slope = (self.values[lf] - self.values[lf - 1]) / (self.grid[lf] - self.grid[lf - 1]);
            return self.values[lf] + slope * (u - self.grid[lf]);
        }
        let i = self.grid.partition_point(|&g| g < u);
        if self.grid[i] == u {
            return self.values[i];
        }
        let (u0, u1) = (self.grid[i - 1], self.grid[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * ((u - u0) / (u1 - u0))
    }

    fn right_inverse(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return self.params().b;
        }
        let i = self.values.partition_point(|&x| x <= v);
        if i == self.values.len() {
            let lf = self.last_finite;
            let slope = (self.values[lf] - self.values[lf - 1]) / (self.grid[lf] - self.grid[lf - 1]);
            return if slope > 0.0 { self.grid[lf] + (v - self.values[lf]) / slope } else { INF };
        }
        let (u0, u1) = (self.grid[i - 1], self.grid[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if v1.is_infinite() {
            return u0;
        }
        u0 + (v - v0) / (v1 - v0) * (u1 - u0)
    }

    fn params(&self) -> Degeneracy {
        let lf = self.last_finite;
        let z = self.values[..=lf].iter().rposition(|&v| v == 0.0).unwrap_or(0);
        Degeneracy {
            a: self.grid[z],
            b: if self.has_infinite_tail() { self.grid[lf] } else { INF },
            finite_at_b: true,
        }
    }

    fn label(&self) -> String {
        self.provenance.clone()
    }
}

/// Samples `φ` on the grid, with `a_φ` and `b_φ` added as anchors.
///
/// At a cut-off node where `φ(b_φ) = ∞` the left limit is stored, so the
/// sampled carrier keeps `b_φ` exactly and its `∞` suffix starts strictly
/// after `b_φ`.
pub fn sample<Y: Young + ?Sized>(phi: &Y, grid: &GridSpec) -> Result<SampledYoung> {
    let d = phi.params();
    let spec = grid.clone().with_anchors([d.a, d.b]);
    let nodes = spec.nodes()?;
    let values = nodes
        .iter()
        .map(|&u| {
            let v = phi.eval(u);
            if v.is_infinite() && u == d.b {
                phi.eval_left(u)
            } else {
                v
            }
        })
        .collect();
    SampledYoung::from_parts(nodes, values, phi.label())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::YoungFunction;

    #[test]
    fn identity_sample_equals_grid() {
        let g = GridSpec::new(1e-2, 1e2, 5).unwrap();
        let s = sample(&YoungFunction::Identity, &g).unwrap();
        assert_eq!(s.len(), 6);
        for (u, v) in s.grid().iter().zip(s.values()) {
            assert!((u - v).abs() <= 1e-15 * u.max(1.0));
        }
    }

    #[test]
    fn power_sample_is_convex() {
        let s = sample(&YoungFunction::power(2.0).unwrap(), &GridSpec::default()).unwrap();
        assert!(s.invariant_violations(1e-12).is_empty());
    }

    #[test]
    fn cutoff_sample_keeps_b() {
        let f = YoungFunction::cut_off(YoungFunction::power(2.0).unwrap(), 1.0, INF).unwrap();
        let s = sample(&f, &GridSpec::new(0.1, 10.0, 21).unwrap()).unwrap();
        let lf = s.last_finite_index();
        assert_eq!(s.grid()[lf], 1.0);
        assert!(s.values()[lf + 1..].iter().all(|v| v.is_infinite()));
        assert_eq!(s.params().b, 1.0);
        assert!(s.invariant_violations(1e-12).is_empty());
    }

    #[test]
    fn grid_rejects_bad_specs() {
        assert!(GridSpec::new(1.0, 1.0, 5).is_err());
        assert!(GridSpec::new(1e-2, 1.0, 1).is_err());
        assert!(GridSpec::new(0.0, 1.0, 5).is_err());
    }

    #[test]
    fn default_grid_contains_one() {
        let nodes = GridSpec::default().nodes().unwrap();
        assert_eq!(nodes.len(), 4098);
        assert!(nodes.contains(&1.0));
    }

    #[test]
    fn sampled_inverse_resolves_ties_rightward() {
        let s = SampledYoung::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0, INF], "t").unwrap();
        assert_eq!(s.right_inverse(0.0), 1.0);
        assert_eq!(s.right_inverse(0.5), 1.5);
        assert_eq!(s.right_inverse(1.0), 2.0);
        assert_eq!(s.right_inverse(5.0), 2.0);
        assert_eq!(s.eval(2.5), INF);
        assert_eq!(s.params().a, 1.0);
    }

    #[test]
    fn rejects_broken_carriers() {
        assert!(SampledYoung::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 1.0], "x").is_err());
        assert!(SampledYoung::new(vec![0.0, 1.0, 2.0], vec![0.0, INF, 1.0], "x").is_err());
        assert!(SampledYoung::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 2.0, 3.0, 3.5], "x").is_err());
    }
}
