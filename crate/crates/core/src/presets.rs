//! Named functions and the pair lists used by the property suites.
//!
//! Pairs are `(φ, φ₁)` in DSL text; the conjugate is `φ⊖φ₁`.

use crate::funcdsl::parse_young;
use crate::young::YoungFunction;

pub type Pair = (&'static str, &'static str);

/// Pairs for the generalized Young inequality, cut-off cases included.
pub const YOUNG_PAIRS: [Pair; 10] = [
    ("pow(2)", "pow(3)"),
    ("id", "pow(2, 0.5)"),
    ("id", "expm1()"),
    ("pow(2)", "pow(2)"),
    ("cut(pow(2), 1, inf)", "cut(pow(3), 1, inf)"),
    ("pow(2)", "cut(pow(2), 1, inf)"),
    ("cut(pow(2), 1, inf)", "pow(2)"),
    ("knee(1)", "pow(2)"),
    ("pow(3)", "dilate(pow(4), 0.5)"),
    ("pow(1.5)", "cut(pow(2), 2, 5)"),
];

/// Pairs with a nontrivial multiplier space.
pub const HOLDER_PAIRS: [Pair; 6] = [
    ("pow(2)", "pow(3)"),
    ("pow(2)", "pow(4)"),
    ("id", "pow(2)"),
    ("pow(2)", "pow(2)"),
    ("id", "expm1()"),
    ("pow(2)", "cut(pow(2), 1, inf)"),
];

/// `M(L³, L²) = L⁶`: `φ = u²`, `φ₁ = u³`.
pub const L3_TO_L2: Pair = ("pow(2)", "pow(3)");

/// Pairs with `b_φ = b_φ₁ = ∞`.
pub const DRILL_PAIRS: [Pair; 5] = [
    ("pow(2)", "pow(3)"),
    ("pow(2)", "pow(2)"),
    ("id", "pow(2)"),
    ("pow(1.5)", "pow(2.5)"),
    ("id", "expm1()"),
];

/// Pairs with `b_φ₁ = ∞` for truncation convergence.
pub const TRUNCATION_PAIRS: [Pair; 4] = [
    ("pow(2)", "pow(3)"),
    ("id", "pow(2, 0.5)"),
    ("id", "expm1()"),
    ("pow(1.5)", "pow(4)"),
];

/// Pairs for the dilation identity.
pub const DILATION_PAIRS: [Pair; 5] = [
    ("pow(2)", "pow(3)"),
    ("id", "pow(2, 0.5)"),
    ("id", "expm1()"),
    ("cut(pow(2), 1, inf)", "cut(pow(3), 1, inf)"),
    ("pow(2)", "cut(pow(2), 1, inf)"),
];

/// `(a, b)` dilation factors for `φ` and `φ₁`.
pub const DILATIONS: [(f64, f64); 2] = [(2.0, 3.0), (0.5, 4.0)];

/// Power pairs `(u^q, u^p)` with `p > q`.
pub const POWER_FAMILY: [Pair; 5] = [
    ("pow(2)", "pow(3)"),
    ("pow(1.5)", "pow(4)"),
    ("id", "pow(2)"),
    ("pow(2)", "pow(5)"),
    ("pow(3)", "pow(4)"),
];

/// `φ₁` with `b_φ₁ = ∞`, paired with `φ = id`.
pub const L1_PARTNERS: [&str; 6] = ["pow(1.5)", "pow(2)", "pow(3)", "expm1()", "knee(1)", "pow(2, 0.5)"];

/// `(φ, φ₁, φ₂)` with the wrong `φ₂`.
pub const MISMATCHED: (&str, &str, &str) = ("pow(2)", "pow(3)", "pow(4)");

/// `b_φ < ∞ = b_φ₁`: only the zero multiplier.
pub const TRIVIAL: Pair = ("cut(pow(2), 1, inf)", "pow(2)");

/// Named pairs accepted by `orlicz --preset`.
pub const NAMED: [(&str, Pair); 5] = [
    ("l3-l2", L3_TO_L2),
    ("trivial", TRIVIAL),
    ("linfty", ("pow(2)", "pow(2)")),
    ("bounded", ("cut(pow(2), 1, inf)", "cut(pow(3), 1, inf)")),
    ("l1-exp", ("id", "expm1()")),
];

pub fn named(name: &str) -> Option<Pair> {
    NAMED.iter().find(|n| n.0 == name).map(|n| n.1)
}

/// Lowers a preset; presets are compile-time constants and always valid.
pub fn lower(text: &str) -> YoungFunction {
    parse_young(text).unwrap_or_else(|e| panic!("preset {text}: {e}"))
}

pub fn lower_pair(p: Pair) -> (YoungFunction, YoungFunction) {
    (lower(p.0), lower(p.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_lower() {
        let lists: [&[Pair]; 7] = [
            &YOUNG_PAIRS,
            &HOLDER_PAIRS,
            &DRILL_PAIRS,
            &TRUNCATION_PAIRS,
            &DILATION_PAIRS,
            &POWER_FAMILY,
            &[TRIVIAL, L3_TO_L2],
        ];
        for l in lists {
            for &p in l {
                lower_pair(p);
            }
        }
        for f in L1_PARTNERS {
            lower(f);
        }
        assert!(named("l3-l2").is_some() && named("nope").is_none());
    }
}
