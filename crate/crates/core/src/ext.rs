//! Arithmetic on `[0, ∞]`.
//!
//! Extended values are carried as `f64` with `f64::INFINITY` as the
//! distinguished point at infinity. All rules that differ from IEEE
//! behaviour (`0·∞`, `1/0`, `∞ − ∞`) live here.

pub const INF: f64 = f64::INFINITY;

/// `1/x` on `[0, ∞]` with `1/0 = ∞` and `1/∞ = 0`.
#[inline]
pub fn recip(x: f64) -> f64 {
    if x == 0.0 {
        INF
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Product with the measure-theoretic convention `0·∞ = 0`.
#[inline]
pub fn mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// `a − b`, or `None` for the undefined `∞ − ∞`.
#[inline]
pub fn sub(a: f64, b: f64) -> Option<f64> {
    if a.is_infinite() && b.is_infinite() {
        None
    } else {
        Some(a - b)
    }
}

/// `a ≤ b + slack·max(|a|, |b|)`, with `∞` ordered above every real.
pub fn le_rel(a: f64, b: f64, slack: f64) -> bool {
    if b.is_infinite() {
        return true;
    }
    if a.is_infinite() {
        return false;
    }
    a <= b + slack * a.abs().max(b.abs())
}

/// Relative distance between two extended reals; `0` when both are `∞`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        return if a == b { 0.0 } else { INF };
    }
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Text form used by reports: `inf` for the point at infinity.
pub fn fmt(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_rules() {
        assert_eq!(recip(0.0), INF);
        assert_eq!(recip(INF), 0.0);
        assert_eq!(recip(4.0), 0.25);
    }

    #[test]
    fn undefined_difference() {
        assert_eq!(sub(INF, INF), None);
        assert_eq!(sub(INF, 3.0), Some(INF));
        assert_eq!(mul(0.0, INF), 0.0);
    }

    #[test]
    fn ordering_with_slack() {
        assert!(le_rel(1.0 + 1e-12, 1.0, 1e-9));
        assert!(!le_rel(1.1, 1.0, 1e-9));
        assert!(le_rel(INF, INF, 0.0));
        assert!(!le_rel(INF, 1.0, 0.0));
        assert_eq!(rel_diff(INF, INF), 0.0);
    }
}
