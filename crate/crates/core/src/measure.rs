//! Discretized measure spaces, simple functions, modulars and Luxemburg norms.
//!
//! A nonatomic space is modeled by a finite weighted partition. An infinite
//! σ-finite space is a finite prefix of cells plus a tail rule: more cells of
//! a fixed measure can be appended on demand with [`MeasureSpace::extend`].

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::ext::INF;
use crate::young::{fundamental_function, Young};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Finite,
    SigmaFiniteInfinite,
}

/// Cells `0..len()` with positive measures.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    cells: Vec<f64>,
    kind: SpaceKind,
    /// Measure of the cells appended by `extend` (infinite kind only).
    tail: f64,
}

fn check_measures(cells: &[f64]) -> Result<()> {
    if cells.is_empty() {
        return Err(Error::InvalidSpace("a space needs at least one cell".into()));
    }
    if let Some((i, m)) = cells.iter().enumerate().find(|(_, m)| !(m.is_finite() && **m > 0.0)) {
        return Err(Error::InvalidSpace(format!("cell {i} has measure {m}; measures must be positive")));
    }
    Ok(())
}

impl MeasureSpace {
    pub fn finite(cells: Vec<f64>) -> Result<Self> {
        check_measures(&cells)?;
        Ok(MeasureSpace { cells, kind: SpaceKind::Finite, tail: 0.0 })
    }

    /// `[0, 1]` split into `n` equal cells.
    pub fn unit_interval(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("cell count must be positive".into()));
        }
        Self::finite(vec![1.0 / n as f64; n])
    }

    /// Infinite space: `prefix` cells of measure `cell_measure`, extendable.
    pub fn sigma_finite(prefix: usize, cell_measure: f64) -> Result<Self> {
        if prefix == 0 {
            return Err(Error::InvalidSpace("cell count must be positive".into()));
        }
        let cells = vec![cell_measure; prefix];
        check_measures(&cells)?;
        Ok(MeasureSpace { cells, kind: SpaceKind::SigmaFiniteInfinite, tail: cell_measure })
    }

    /// Finite: total measure `measure` (default 1) in `count` equal cells.
    /// Infinite: `count` cells of measure `measure` (default 1).
    pub fn make(kind: SpaceKind, count: usize, measure: Option<f64>) -> Result<Self> {
        let m = measure.unwrap_or(1.0);
        match kind {
            SpaceKind::Finite => {
                if count == 0 {
                    return Err(Error::InvalidSpace("cell count must be positive".into()));
                }
                Self::finite(vec![m / count as f64; count])
            }
            SpaceKind::SigmaFiniteInfinite => Self::sigma_finite(count, m),
        }
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn tail_measure(&self) -> f64 {
        self.tail
    }

    /// `μ(Ω)`: `∞` for the infinite kind.
    pub fn total(&self) -> f64 {
        match self.kind {
            SpaceKind::Finite => self.prefix_total(),
            SpaceKind::SigmaFiniteInfinite => INF,
        }
    }

    /// Measure of the materialized cells.
    pub fn prefix_total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Appends `k` tail cells.
    pub fn extend(&self, k: usize) -> Result<Self> {
        if self.kind == SpaceKind::Finite {
            return Err(Error::InvalidSpace("a finite space cannot be extended".into()));
        }
        let mut s = self.clone();
        s.cells.extend(std::iter::repeat_n(self.tail, k));
        Ok(s)
    }

    /// Splits every cell into `k` equal parts; cell `i` becomes `i·k .. (i+1)·k`.
    pub fn refine(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpace("refinement factor must be positive".into()));
        }
        let cells = self.cells.iter().flat_map(|&m| std::iter::repeat_n(m / k as f64, k)).collect();
        Ok(MeasureSpace { cells, kind: self.kind, tail: self.tail / k as f64 })
    }

    pub fn measure_of(&self, ids: &[usize]) -> f64 {
        ids.iter().map(|&i| self.cells[i]).sum()
    }
}

/// Step function with one finite nonnegative value per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleFunction {
    values: Vec<f64>,
}

impl SimpleFunction {
    pub fn from_values(sp: &MeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != sp.len() {
            return Err(Error::InvalidSimpleFunction(format!(
                "{} values for a space of {} cells",
                values.len(),
                sp.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidSimpleFunction(format!("cell {i} has value {v}")));
        }
        Ok(SimpleFunction { values })
    }

    /// `Σ levels`; unlisted cells are 0 and a repeated cell is an error.
    pub fn from_levels(sp: &MeasureSpace, levels: &[(usize, f64)]) -> Result<Self> {
        let mut v = vec![0.0; sp.len()];
        let mut seen = vec![false; sp.len()];
        for &(id, x) in levels {
            if id >= sp.len() {
                return Err(Error::InvalidSimpleFunction(format!("cell {id} is not in the space")));
            }
            if seen[id] {
                return Err(Error::InvalidSimpleFunction(format!("cell {id} listed twice")));
            }
            seen[id] = true;
            v[id] = x;
        }
        Self::from_values(sp, v)
    }

    pub fn zero(sp: &MeasureSpace) -> Self {
        SimpleFunction { values: vec![0.0; sp.len()] }
    }

    pub fn indicator(sp: &MeasureSpace, ids: &[usize]) -> Result<Self> {
        let levels: Vec<(usize, f64)> = ids.iter().map(|&i| (i, 1.0)).collect();
        Self::from_levels(sp, &levels)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nonzero `(cell_id, value)` pairs.
    pub fn levels(&self) -> Vec<(usize, f64)> {
        self.values.iter().copied().enumerate().filter(|p| p.1 != 0.0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] != 0.0).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        SimpleFunction { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn mul(&self, other: &SimpleFunction) -> Self {
        SimpleFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidSimpleFunction("mapped values must be finite and nonnegative".into()));
        }
        Ok(SimpleFunction { values })
    }

    /// The same function on `sp.refine(k)`.
    pub fn refine(&self, k: usize) -> Self {
        SimpleFunction { values: self.values.iter().flat_map(|&v| std::iter::repeat_n(v, k)).collect() }
    }

    /// Zero-padded to the cells of an extended space.
    pub fn pad_to(&self, sp: &MeasureSpace) -> Self {
        let mut values = self.values.clone();
        values.resize(sp.len().max(values.len()), 0.0);
        SimpleFunction { values }
    }
}

/// `I_φ(x) = Σ φ(x_i)·μ_i`; `∞` as soon as one term is.
pub fn modular<Y: Young + ?Sized>(phi: &Y, x: &SimpleFunction, sp: &MeasureSpace) -> f64 {
    let terms: Vec<f64> = x
        .values
        .iter()
        .zip(sp.cells())
        .map(|(&v, &m)| if v == 0.0 { 0.0 } else { phi.eval(v) * m })
        .collect();
    if terms.iter().any(|t| t.is_infinite()) {
        return INF;
    }
    exec::tree_sum(Exec::default(), &terms)
}

/// Stopping ratio of the geometric bisection.
pub const NORM_RTOL: f64 = 1e-10;

/// `‖x‖_φ = inf { λ > 0 : I_φ(x/λ) ≤ 1 }`.
///
/// Geometric bisection on `λ`, starting from `max|x| · f_φ(μ(supp x))` and
/// bracketing within a factor `2^±60` of it. Returns the upper end of the
/// final bracket, so `I_φ(x/‖x‖) ≤ 1` holds for the returned value.
pub fn luxemburg_norm<Y: Young + ?Sized>(phi: &Y, x: &SimpleFunction, sp: &MeasureSpace) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let ok = |lam: f64| modular(phi, &x.scale(1.0 / lam), sp) <= 1.0;
    let supp = sp.measure_of(&x.support());
    let mut guess = x.max() * fundamental_function(phi, supp);
    if !(guess.is_finite() && guess > 0.0) {
        guess = x.max();
    }
    let (lo_cap, hi_cap) = (guess * 2f64.powi(-60), guess * 2f64.powi(60));
    let (mut lo, mut hi);
    if ok(guess) {
        hi = guess;
        lo = guess / 2.0;
        while ok(lo) {
            hi = lo;
            lo /= 2.0;
            if lo < lo_cap {
                return hi;
            }
        }
    } else {
        lo = guess;
        hi = guess * 2.0;
        while !ok(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > hi_cap {
                return INF;
            }
        }
    }
    while hi / lo > 1.0 + NORM_RTOL {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Norm of an indicator of a set of measure `t`, i.e. `f_φ(t)`.
pub fn charfn_norm<Y: Young + ?Sized>(phi: &Y, t: f64) -> f64 {
    fundamental_function(phi, t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormModularReport {
    pub norm: f64,
    pub modular: f64,
    /// `‖x‖ ≤ 1 ⇒ I(x) ≤ ‖x‖` (vacuous when `‖x‖ > 1`).
    pub holds: bool,
}

pub fn check_norm_modular<Y: Young + ?Sized>(phi: &Y, x: &SimpleFunction, sp: &MeasureSpace) -> NormModularReport {
    let norm = luxemburg_norm(phi, x, sp);
    let modular = modular(phi, x, sp);
    let holds = norm > 1.0 || modular <= norm * (1.0 + 1e-9) + 1e-300;
    NormModularReport { norm, modular, holds }
}

/// Cell groups of measure at most `t_a`, where `‖χ_A‖_{φ₁} ≤ 1/a` whenever `μ(A) ≤ t_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationPlan {
    pub t_a: f64,
    pub groups: Vec<Vec<usize>>,
    /// Each original cell was split into this many cells.
    pub refinement: usize,
    /// The (possibly refined) space the groups refer to.
    pub space: MeasureSpace,
}

/// Relative slack when comparing measures with `t_a`.
const PLAN_SLACK: f64 = 1e-9;

/// Largest `t` with `f_{φ₁}(t) ≤ 1/a`, capped at `cap`.
pub fn threshold<Y: Young + ?Sized>(phi1: &Y, a: f64, cap: f64) -> Result<f64> {
    if !(a >= 1.0) || a.is_infinite() {
        return Err(Error::InvalidArgument(format!("proof scaling a must be >= 1, got {a}")));
    }
    let target = 1.0 / a;
    let good = |t: f64| charfn_norm(phi1, t) <= target;
    if good(cap) {
        return Ok(cap);
    }
    let mut lo = cap.min(1.0);
    let mut steps = 0;
    while !good(lo) {
        lo /= 2.0;
        steps += 1;
        if steps > 1100 || lo == 0.0 {
            let achievable = 1.0 / phi1.params().b;
            return Err(Error::Unachievable { requested: target, achievable });
        }
    }
    let mut hi = (lo * 2.0).min(cap);
    while good(hi) {
        lo = hi;
        hi = (hi * 2.0).min(cap);
    }
    for _ in 0..200 {
        if hi / lo <= 1.0 + 1e-15 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if good(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Refines `sp` until every cell is at most `t_a`, then groups consecutive
/// cells greedily into blocks of measure at most `t_a`.
pub fn plan_partition<Y: Young + ?Sized>(phi1: &Y, sp: &MeasureSpace, a: f64) -> Result<VerificationPlan> {
    let b1 = phi1.params().b;
    if a >= 1.0 && b1.is_finite() && 1.0 / b1 > 1.0 / a {
        return Err(Error::Unachievable { requested: 1.0 / a, achievable: 1.0 / b1 });
    }
    let cap = match sp.kind() {
        SpaceKind::Finite => sp.total(),
        SpaceKind::SigmaFiniteInfinite => sp.prefix_total() * 2f64.powi(60),
    };
    let t_a = threshold(phi1, a, cap)?;
    let limit = t_a * (1.0 + PLAN_SLACK);
    let max_cell = sp.cells().iter().copied().fold(0.0, f64::max);
    let refinement = if max_cell > limit { (max_cell / limit).ceil() as usize } else { 1 };
    let space = if refinement > 1 { sp.refine(refinement)? } else { sp.clone() };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    let mut acc = 0.0;
    for (i, &m) in space.cells().iter().enumerate() {
        if !cur.is_empty() && acc + m > limit {
            groups.push(std::mem::take(&mut cur));
            acc = 0.0;
        }
        cur.push(i);
        acc += m;
    }
    if !cur.is_empty() {
        groups.push(cur);
    }
    Ok(VerificationPlan { t_a, groups, refinement, space })
}

/// Plain-text `cell_id measure value` table.
///
/// `#` starts a comment. An optional directive `kind finite` or
/// `kind infinite <tail measure>` selects the space kind. Cell ids must be
/// `0, 1, 2, ...` in order.
pub fn read_table(text: &str) -> Result<(MeasureSpace, SimpleFunction)> {
    let mut kind = SpaceKind::Finite;
    let mut tail: f64 = 0.0;
    let mut cells = Vec::new();
    let mut values = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: String| Error::Table { line: n + 1, message: m };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "kind" {
            match f.get(1).copied() {
                Some("finite") if f.len() == 2 => kind = SpaceKind::Finite,
                Some("infinite") if f.len() == 3 => {
                    kind = SpaceKind::SigmaFiniteInfinite;
                    tail = f[2].parse().map_err(|_| bad(format!("bad tail measure '{}'", f[2])))?;
                }
                _ => return Err(bad("expected 'kind finite' or 'kind infinite <measure>'".into())),
            }
            continue;
        }
        if f.len() != 3 {
            return Err(bad(format!("expected 3 columns, found {}", f.len())));
        }
        let id: usize = f[0].parse().map_err(|_| bad(format!("bad cell id '{}'", f[0])))?;
        if id != cells.len() {
            return Err(bad(format!("cell ids must be consecutive from 0; expected {}, found {id}", cells.len())));
        }
        let m: f64 = f[1].parse().map_err(|_| bad(format!("bad measure '{}'", f[1])))?;
        let v: f64 = f[2].parse().map_err(|_| bad(format!("bad value '{}'", f[2])))?;
        cells.push(m);
        values.push(v);
    }
    let mut sp = MeasureSpace::finite(cells)?;
    if kind == SpaceKind::SigmaFiniteInfinite {
        if !(tail.is_finite() && tail > 0.0) {
            return Err(Error::InvalidSpace(format!("tail measure must be positive, got {tail}")));
        }
        sp.kind = kind;
        sp.tail = tail;
    }
    let x = SimpleFunction::from_values(&sp, values)?;
    Ok((sp, x))
}

pub fn write_table(sp: &MeasureSpace, x: &SimpleFunction) -> String {
    let mut s = String::new();
    match sp.kind() {
        SpaceKind::Finite => s.push_str("kind finite\n"),
        SpaceKind::SigmaFiniteInfinite => {
            let _ = writeln!(s, "kind infinite {:?}", sp.tail_measure());
        }
    }
    s.push_str("# cell_id measure value\n");
    for (i, (m, v)) in sp.cells().iter().zip(x.values()).enumerate() {
        let _ = writeln!(s, "{i} {m:?} {v:?}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::YoungFunction;

    fn pow(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    fn half_indicator(sp: &MeasureSpace, c: f64) -> SimpleFunction {
        let n = sp.len();
        SimpleFunction::from_levels(sp, &(0..n / 2).map(|i| (i, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn make_space_examples() {
        let s = MeasureSpace::make(SpaceKind::Finite, 4, None).unwrap();
        assert_eq!(s.cells(), &[0.25; 4]);
        let s = MeasureSpace::make(SpaceKind::SigmaFiniteInfinite, 8, Some(1.0)).unwrap();
        assert_eq!(s.total(), INF);
        assert_eq!(MeasureSpace::finite(vec![0.5, 0.5]).unwrap().total(), 1.0);
        assert!(MeasureSpace::finite(vec![0.5, 0.0]).is_err());
        assert!(MeasureSpace::finite(vec![-1.0]).is_err());
        assert_eq!(s.extend(3).unwrap().len(), 11);
        assert!(MeasureSpace::unit_interval(2).unwrap().extend(1).is_err());
    }

    #[test]
    fn modular_examples() {
        let sp = MeasureSpace::unit_interval(4).unwrap();
        assert_eq!(modular(&pow(2.0), &half_indicator(&sp, 2.0), &sp), 2.0);
        let one = SimpleFunction::from_values(&sp, vec![1.0; 4]).unwrap();
        assert_eq!(modular(&YoungFunction::Identity, &one, &sp), 1.0);
        let c = YoungFunction::cut_off(pow(2.0), 1.0, INF).unwrap();
        assert_eq!(modular(&c, &half_indicator(&sp, 2.0), &sp), INF);
    }

    #[test]
    fn norm_examples() {
        let sp = MeasureSpace::unit_interval(4).unwrap();
        let a = SimpleFunction::indicator(&sp, &[0]).unwrap();
        assert!((luxemburg_norm(&pow(2.0), &a, &sp) - 0.5).abs() < 1e-9);
        let x = half_indicator(&sp, 2.0);
        assert!((luxemburg_norm(&pow(2.0), &x, &sp) - 2f64.sqrt()).abs() < 1e-9);
        let y = SimpleFunction::from_values(&sp, vec![1.0, 2.0, 0.0, 4.0]).unwrap();
        assert!((luxemburg_norm(&YoungFunction::Identity, &y, &sp) - 1.75).abs() < 1e-9);
        assert_eq!(luxemburg_norm(&pow(2.0), &SimpleFunction::zero(&sp), &sp), 0.0);
    }

    #[test]
    fn charfn_examples() {
        assert!((charfn_norm(&pow(2.0), 0.25) - 0.5).abs() < 1e-15);
        assert_eq!(charfn_norm(&YoungFunction::Identity, 2.0), 2.0);
        let c = YoungFunction::cut_off(pow(2.0), 1.0, INF).unwrap();
        for t in [1e-3, 1e-6, 1e-12] {
            assert!(charfn_norm(&c, t) >= 1.0);
        }
    }

    #[test]
    fn norm_modular_examples() {
        let sp = MeasureSpace::unit_interval(4).unwrap();
        let one = SimpleFunction::from_values(&sp, vec![1.0; 4]).unwrap();
        let r = check_norm_modular(&pow(2.0), &one, &sp);
        assert!(r.holds && (r.norm - 1.0).abs() < 1e-9 && r.modular == 1.0);
        let r = check_norm_modular(&pow(2.0), &one.scale(0.5), &sp);
        assert!(r.holds && (r.modular - 0.25).abs() < 1e-15);
        assert!(check_norm_modular(&pow(2.0), &one.scale(3.0), &sp).holds);
    }

    #[test]
    fn plan_examples() {
        let sp = MeasureSpace::unit_interval(1).unwrap();
        let p = plan_partition(&pow(2.0), &sp, 2.0).unwrap();
        assert!((p.t_a - 0.25).abs() < 1e-12);
        assert_eq!(p.groups.len(), 4);
        let p = plan_partition(&YoungFunction::Identity, &MeasureSpace::unit_interval(4).unwrap(), 1.0).unwrap();
        assert_eq!(p.t_a, 1.0);
        assert_eq!(p.groups.len(), 1);
        let sp = MeasureSpace::unit_interval(8).unwrap();
        let p = plan_partition(&pow(2.0), &sp, 2.0).unwrap();
        assert_eq!(p.groups.len(), 4);
        for g in &p.groups {
            assert!(p.space.measure_of(g) <= p.t_a * (1.0 + 1e-9));
        }
        let c = YoungFunction::cut_off(pow(2.0), 0.5, INF).unwrap();
        assert!(matches!(plan_partition(&c, &sp, 4.0), Err(Error::Unachievable { .. })));
        assert!(plan_partition(&pow(2.0), &sp, 0.5).is_err());
    }

    #[test]
    fn table_round_trip() {
        let sp = MeasureSpace::sigma_finite(3, 0.5).unwrap();
        let x = SimpleFunction::from_values(&sp, vec![0.1, 0.0, 3.0]).unwrap();
        let (sp2, x2) = read_table(&write_table(&sp, &x)).unwrap();
        assert_eq!(sp, sp2);
        assert_eq!(x, x2);
        assert!(matches!(read_table("0 1 1\n2 1 1\n"), Err(Error::Table { line: 2, .. })));
    }
}
