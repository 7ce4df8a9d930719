//! Extended-real Young functions.
//!
//! A Young function is a convex, non-decreasing `φ: [0, ∞) → [0, ∞]` with
//! `φ(0) = 0` that is not identically zero. Two parameters describe its
//! degeneracy:
//!
//! * `a_φ = sup { t ≥ 0 : φ(t) = 0 }`
//! * `b_φ = sup { t ≥ 0 : φ(t) < ∞ }`
//!
//! When `b_φ < ∞` the value `φ(b_φ)` may be finite or infinite; the
//! conjugation domain rules branch on exactly this, so it is tracked
//! separately as `finite_at_b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ext::{recip, INF};

/// Degeneracy parameters `(a_φ, b_φ, φ(b_φ) < ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degeneracy {
    pub a: f64,
    pub b: f64,
    /// Only meaningful when `b` is finite.
    pub finite_at_b: bool,
}

/// Common interface of closed-form and sampled Young functions.
pub trait Young: Send + Sync {
    /// `φ(u)` for `u ≥ 0`; `∞` is a value.
    fn eval(&self, u: f64) -> f64;

    /// `lim_{t→u⁻} φ(t)`. Differs from [`Young::eval`] only at a jump to `∞`.
    fn eval_left(&self, u: f64) -> f64 {
        self.eval(u)
    }

    /// Right-continuous inverse `φ⁻¹(v) = inf { u ≥ 0 : φ(u) > v }`.
    ///
    /// `φ⁻¹(∞)` is the limit `b_φ` from the left.
    fn right_inverse(&self, v: f64) -> f64;

    fn params(&self) -> Degeneracy;

    /// Points where `φ` is not differentiable (breakpoints, knees, cut-offs).
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Short human-readable description.
    fn label(&self) -> String;
}

/// Fundamental function `f_φ(t) = 1 / φ⁻¹(1/t)`, with `f_φ(0) = 0`.
///
/// This is the Luxemburg norm of an indicator of a set of measure `t`.
pub fn fundamental_function<Y: Young + ?Sized>(phi: &Y, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    recip(phi.right_inverse(recip(t)))
}

/// Closed-form and piecewise Young functions.
#[derive(Clone, Debug, PartialEq)]
pub enum YoungFunction {
    /// `scale · u^p`, `p ≥ 1`.
    Power { p: f64, scale: f64 },
    /// `scale · (e^u − 1)`.
    ExpMinusOne { scale: f64 },
    /// `max(0, u − knee)`.
    LinearAboveKnee { knee: f64 },
    Identity,
    /// Linear interpolation through `(u_i, v_i)`, starting at `(0, 0)`.
    ///
    /// A value of `∞` at `u_j` makes `φ = ∞` on `(u_{j−1}, ∞)`. Without an
    /// infinite value the last segment is extended linearly.
    Piecewise(Vec<(f64, f64)>),
    /// `u ↦ inner(a·u)`.
    Dilated { inner: Box<YoungFunction>, a: f64 },
    /// `inner` on `[0, b)`, `value_at_b` at `b`, `∞` beyond.
    CutOff { inner: Box<YoungFunction>, b: f64, value_at_b: f64 },
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::power_scaled(p, 1.0)
    }

    pub fn power_scaled(p: f64, scale: f64) -> Result<Self> {
        let f = YoungFunction::Power { p, scale };
        f.validate()?;
        Ok(f)
    }

    pub fn exp_minus_one(scale: f64) -> Result<Self> {
        let f = YoungFunction::ExpMinusOne { scale };
        f.validate()?;
        Ok(f)
    }

    pub fn knee(knee: f64) -> Result<Self> {
        let f = YoungFunction::LinearAboveKnee { knee };
        f.validate()?;
        Ok(f)
    }

    pub fn identity() -> Self {
        YoungFunction::Identity
    }

    pub fn piecewise(points: Vec<(f64, f64)>) -> Result<Self> {
        let f = YoungFunction::Piecewise(points);
        f.validate()?;
        Ok(f)
    }

    pub fn cut_off(inner: YoungFunction, b: f64, value_at_b: f64) -> Result<Self> {
        let f = YoungFunction::CutOff { inner: Box::new(inner), b, value_at_b };
        f.validate()?;
        Ok(f)
    }

    /// `ψ(u) = φ(a·u)`; dilations leave the Orlicz space unchanged.
    pub fn dilate(self, a: f64) -> Result<Self> {
        let f = YoungFunction::Dilated { inner: Box::new(self), a };
        f.validate()?;
        Ok(f)
    }

    /// The generator of `L^∞` with unit ball radius `b`: `0` on `[0, b]`, `∞` beyond.
    pub fn linfty_indicator(b: f64) -> Result<Self> {
        Self::cut_off(Self::knee(b)?, b, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFunction(m));
        match self {
            YoungFunction::Power { p, scale } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return bad(format!("power exponent must be >= 1, got {p}"));
                }
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("power scale must be positive, got {scale}"));
                }
            }
            YoungFunction::ExpMinusOne { scale } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("expm1 scale must be positive, got {scale}"));
                }
            }
            YoungFunction::LinearAboveKnee { knee } => {
                if !(knee.is_finite() && *knee >= 0.0) {
                    return bad(format!("knee must be a nonnegative real, got {knee}"));
                }
            }
            YoungFunction::Identity => {}
            YoungFunction::Piecewise(pts) => validate_piecewise(pts)?,
            YoungFunction::Dilated { inner, a } => {
                if !(a.is_finite() && *a > 0.0) {
                    return bad(format!("dilation factor must be positive, got {a}"));
                }
                inner.validate()?;
            }
            YoungFunction::CutOff { inner, b, value_at_b } => {
                inner.validate()?;
                if !(b.is_finite() && *b > 0.0) {
                    return bad(format!("cut-off point must be positive, got {b}"));
                }
                let ib = inner.params().b;
                if *b > ib {
                    return bad(format!("cut-off point {b} lies beyond the inner b = {ib}"));
                }
                let left = inner.eval_left(*b);
                if value_at_b.is_nan() || *value_at_b < left {
                    return bad(format!(
                        "value at the cut-off ({value_at_b}) is below the left limit {left}"
                    ));
                }
            }
        }
        Ok(())
    }
}

fn validate_piecewise(pts: &[(f64, f64)]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidFunction(m));
    if pts.len() < 2 {
        return bad("piecewise needs at least two points".into());
    }
    if pts[0] != (0.0, 0.0) {
        return bad(format!("piecewise must start at (0,0), got {:?}", pts[0]));
    }
    for w in pts.windows(2) {
        let ((u0, v0), (u1, v1)) = (w[0], w[1]);
        if !(u1.is_finite() && u1 > u0) {
            return bad(format!("breakpoints must increase strictly: {u0} then {u1}"));
        }
        if v1.is_nan() || v1 < v0 {
            return bad(format!("values must be non-decreasing: {v0} then {v1}"));
        }
        if v0.is_infinite() && v1.is_finite() {
            return bad("infinite values must form a suffix".into());
        }
    }
    let finite: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.1.is_finite()).collect();
    for w in finite.windows(3) {
        let s0 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        let s1 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
        if s1 < s0 - 1e-12 * s0.abs().max(s1.abs()) {
            return bad(format!("piecewise is not convex at u = {}", w[1].0));
        }
    }
    let has_inf = finite.len() < pts.len();
    if !has_inf && finite.iter().all(|p| p.1 == 0.0) {
        return bad("the zero function is not a Young function".into());
    }
    Ok(())
}

fn piecewise_last_finite(pts: &[(f64, f64)]) -> usize {
    pts.iter().rposition(|p| p.1.is_finite()).unwrap_or(0)
}

fn piecewise_eval(pts: &[(f64, f64)], u: f64) -> f64 {
    let lf = piecewise_last_finite(pts);
    let (ul, vl) = pts[lf];
    if u > ul {
        if lf + 1 < pts.len() || lf == 0 {
            return INF;
        }
        let (up, vp) = pts[lf - 1];
        return vl + (vl - vp) / (ul - up) * (u - ul);
    }
    let i = pts.partition_point(|p| p.0 < u);
    if pts[i].0 == u {
        return pts[i].1;
    }
    let ((u0, v0), (u1, v1)) = (pts[i - 1], pts[i]);
    v0 + (v1 - v0) * (u - u0) / (u1 - u0)
}

fn piecewise_inverse(pts: &[(f64, f64)], v: f64) -> f64 {
    let lf = piecewise_last_finite(pts);
    if v.is_infinite() {
        return if lf + 1 < pts.len() { pts[lf].0 } else { INF };
    }
    let i = pts.partition_point(|p| p.1 <= v);
    if i == pts.len() {
        let (ul, vl) = pts[lf];
        let (up, vp) = pts[lf - 1];
        let slope = (vl - vp) / (ul - up);
        return if slope > 0.0 { ul + (v - vl) / slope } else { INF };
    }
    let (u0, v0) = pts[i - 1];
    let (u1, v1) = pts[i];
    if v1.is_infinite() {
        return u0;
    }
    u0 + (v - v0) / (v1 - v0) * (u1 - u0)
}

impl Young for YoungFunction {
    fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        match self {
            YoungFunction::Power { p, scale } => {
                if *p == 1.0 {
                    scale * u
                } else {
                    scale * u.powf(*p)
                }
            }
            YoungFunction::ExpMinusOne { scale } => scale * u.exp_m1(),
            YoungFunction::LinearAboveKnee { knee } => (u - knee).max(0.0),
            YoungFunction::Identity => u,
            YoungFunction::Piecewise(pts) => piecewise_eval(pts, u),
            YoungFunction::Dilated { inner, a } => inner.eval(a * u),
            YoungFunction::CutOff { inner, b, value_at_b } => {
                if u < *b {
                    inner.eval(u)
                } else if u == *b {
                    *value_at_b
                } else {
                    INF
                }
            }
        }
    }

    fn eval_left(&self, u: f64) -> f64 {
        match self {
            YoungFunction::Dilated { inner, a } => inner.eval_left(a * u),
            YoungFunction::CutOff { inner, b, .. } => {
                if u <= *b {
                    inner.eval_left(u)
                } else {
                    INF
                }
            }
            _ => self.eval(u),
        }
    }

    fn right_inverse(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return self.params().b;
        }
        let v = v.max(0.0);
        match self {
            YoungFunction::Power { p, scale } => (v / scale).powf(1.0 / p),
            YoungFunction::ExpMinusOne { scale } => (v / scale).ln_1p(),
            YoungFunction::LinearAboveKnee { knee } => knee + v,
            YoungFunction::Identity => v,
            YoungFunction::Piecewise(pts) => piecewise_inverse(pts, v),
            YoungFunction::Dilated { inner, a } => inner.right_inverse(v) / a,
            YoungFunction::CutOff { inner, b, value_at_b } => {
                if *value_at_b <= v {
                    *b
                } else {
                    inner.right_inverse(v).min(*b)
                }
            }
        }
    }

    fn params(&self) -> Degeneracy {
        match self {
            YoungFunction::Power { .. } | YoungFunction::ExpMinusOne { .. } | YoungFunction::Identity => {
                Degeneracy { a: 0.0, b: INF, finite_at_b: true }
            }
            YoungFunction::LinearAboveKnee { knee } => Degeneracy { a: *knee, b: INF, finite_at_b: true },
            YoungFunction::Piecewise(pts) => {
                let lf = piecewise_last_finite(pts);
                let has_inf = lf + 1 < pts.len();
                let z = pts[..=lf].iter().rposition(|p| p.1 == 0.0).unwrap_or(0);
                Degeneracy {
                    a: pts[z].0,
                    b: if has_inf { pts[lf].0 } else { INF },
                    finite_at_b: true,
                }
            }
            YoungFunction::Dilated { inner, a } => {
                let d = inner.params();
                Degeneracy { a: d.a / a, b: d.b / a, finite_at_b: d.finite_at_b }
            }
            YoungFunction::CutOff { inner, b, value_at_b } => Degeneracy {
                a: inner.params().a.min(*b),
                b: *b,
                finite_at_b: value_at_b.is_finite(),
            },
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            YoungFunction::LinearAboveKnee { knee } if *knee > 0.0 => vec![*knee],
            YoungFunction::Piecewise(pts) => {
                pts.iter().filter(|p| p.0 > 0.0 && p.1.is_finite()).map(|p| p.0).collect()
            }
            YoungFunction::Dilated { inner, a } => inner.kinks().into_iter().map(|k| k / a).collect(),
            YoungFunction::CutOff { inner, b, .. } => {
                let mut k: Vec<f64> = inner.kinks().into_iter().filter(|k| k < b).collect();
                k.push(*b);
                k
            }
            _ => Vec::new(),
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::funcdsl::format(&crate::funcdsl::FuncExpr::from_young(self)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    fn cut_pow2(value_at_b: f64) -> YoungFunction {
        YoungFunction::cut_off(pow(2.0), 1.0, value_at_b).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(pow(2.0).eval(3.0), 9.0);
        assert_eq!(cut_pow2(1.0).eval(2.0), INF);
        assert_eq!(YoungFunction::knee(1.0).unwrap().eval(0.5), 0.0);
    }

    #[test]
    fn right_inverse_examples() {
        assert_eq!(pow(2.0).right_inverse(4.0), 2.0);
        let linf = YoungFunction::linfty_indicator(1.0).unwrap();
        assert_eq!(linf.right_inverse(17.0), 1.0);
        assert_eq!(YoungFunction::knee(1.0).unwrap().right_inverse(0.0), 1.0);
    }

    #[test]
    fn degeneracy_examples() {
        let d = pow(3.0).params();
        assert_eq!((d.a, d.b), (0.0, INF));
        let d = cut_pow2(1.0).params();
        assert_eq!((d.a, d.b, d.finite_at_b), (0.0, 1.0, true));
        let d = YoungFunction::knee(1.0).unwrap().params();
        assert_eq!((d.a, d.b), (1.0, INF));
        let d = cut_pow2(INF).params();
        assert!(!d.finite_at_b);
    }

    #[test]
    fn fundamental_function_examples() {
        assert!((fundamental_function(&pow(2.0), 0.25) - 0.5).abs() < 1e-15);
        assert_eq!(fundamental_function(&YoungFunction::Identity, 2.0), 2.0);
        // b_φ < ∞: no right-continuity at 0.
        let c = cut_pow2(INF);
        for t in [1e-3, 1e-6, 1e-12] {
            assert_eq!(fundamental_function(&c, t), 1.0);
        }
        assert_eq!(fundamental_function(&c, 0.0), 0.0);
        // b_φ = ∞: f(t) → 0.
        assert!(fundamental_function(&pow(2.0), 1e-12) < 1e-5);
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(pow(2.0).dilate(3.0).unwrap().eval(1.0), 9.0);
        let d = cut_pow2(1.0).dilate(2.0).unwrap().params();
        assert_eq!(d.b, 0.5);
        let f = YoungFunction::knee(1.0).unwrap();
        let g = f.clone().dilate(1.0).unwrap();
        for u in [0.0, 0.3, 1.0, 2.5, 100.0] {
            assert_eq!(f.eval(u), g.eval(u));
        }
        let k = YoungFunction::knee(2.0).unwrap().dilate(4.0).unwrap().params();
        assert_eq!(k.a, 0.5);
    }

    #[test]
    fn piecewise_semantics() {
        let f = YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]).unwrap();
        assert_eq!(f.eval(1.5), 2.5);
        assert_eq!(f.eval(3.0), 7.0);
        assert_eq!(f.right_inverse(2.5), 1.5);
        assert_eq!(f.right_inverse(7.0), 3.0);
        let g = YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.0), (2.0, INF)]).unwrap();
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(1.0 + 1e-12), INF);
        let d = g.params();
        assert_eq!((d.a, d.b), (1.0, 1.0));
        assert_eq!(g.right_inverse(5.0), 1.0);
        assert_eq!(g.right_inverse(0.0), 1.0);
    }

    #[test]
    fn invalid_functions_are_rejected() {
        assert!(YoungFunction::power(0.5).is_err());
        assert!(YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, 2.0), (0.5, 3.0)]).is_err());
        assert!(YoungFunction::cut_off(pow(2.0), 1.0, 0.5).is_err());
        assert!(YoungFunction::cut_off(cut_pow2(INF), 2.0, INF).is_err());
        assert!(pow(2.0).dilate(0.0).is_err());
    }

    #[test]
    fn cutoff_inverse_with_finite_jump() {
        let f = cut_pow2(5.0);
        assert_eq!(f.right_inverse(0.25), 0.5);
        assert_eq!(f.right_inverse(3.0), 1.0);
        assert_eq!(f.right_inverse(5.0), 1.0);
        assert_eq!(f.right_inverse(INF), 1.0);
        assert_eq!(f.eval_left(1.0), 1.0);
    }

    #[test]
    fn all_infinite_function_is_allowed() {
        let f = YoungFunction::piecewise(vec![(0.0, 0.0), (1.0, INF)]).unwrap();
        assert_eq!(f.eval(1e-9), INF);
        assert_eq!(f.params().b, 0.0);
        assert_eq!(f.right_inverse(3.0), 0.0);
    }
}
