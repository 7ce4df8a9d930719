//! Numerical calculus for Young functions and Orlicz function spaces.
//!
//! The crate computes the generalized conjugate
//!
//! ```text
//! (φ ⊖ φ₁)(u) = sup { φ(s·u) − φ₁(s) : s in the admissible range }
//! ```
//!
//! and uses it to resolve pointwise-multiplier spaces
//! `M(L^φ₁, L^φ) = L^{φ⊖φ₁}` and to decide the factorization criterion
//! `φ₁⁻¹ · (φ⊖φ₁)⁻¹ ≈ φ⁻¹` with explicit constants.
//!
//! Module map:
//!
//! * [`young`] and [`sampled`]: extended-real Young functions, closed form and sampled.
//! * [`conjugation`]: `φ⊖φ₁`, the truncated `φ⊖ₐφ₁`, the classical conjugate,
//!   a brute-force oracle and a monotone-argmax fast path.
//! * [`measure`]: discretized measure spaces, simple functions, modulars and
//!   Luxemburg norms.
//! * [`multipliers`]: classification of `M(L^φ₁, L^φ)`, Hölder-type checks,
//!   witness construction and the reverse-estimate drill.
//! * [`factorization`]: the inverse-product equivalence test and constructive
//!   product decompositions.
//! * [`funcdsl`]: the textual language used by fixtures and the CLI.
//! * [`suites`]: the property suites driven by `orlicz verify` and the
//!   acceptance tests.
//!
//! Inner loops run on rayon when the `parallel` feature is enabled (default);
//! every parallel path has a sequential twin selected through [`Exec`].

// `!(x > 0.0)` is used on purpose so that NaN lands in the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjugation;
pub mod error;
pub mod exec;
pub mod ext;
pub mod factorization;
pub mod funcdsl;
pub mod gen;
pub mod measure;
pub mod multipliers;
pub mod presets;
pub mod sampled;
pub mod suites;
pub mod young;

pub use conjugation::{
    classical_conjugate, ominus, ominus_at, ominus_bruteforce, ominus_monotone, ominus_truncated,
    truncation_sweep, DomainConvention, Method, OminusResult, SRange,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use factorization::{
    decompose, equivalence_check, factorization_check, EquivalenceReport, MeasureKind, Mode,
};
pub use funcdsl::{format, parse, FuncExpr};
pub use measure::{
    charfn_norm, check_norm_modular, luxemburg_norm, modular, plan_partition, MeasureSpace,
    SimpleFunction, SpaceKind, VerificationPlan,
};
pub use multipliers::{resolve, triviality_check, Classification, MultiplierSpace, Triviality};
pub use sampled::{sample, GridSpec, SampledYoung};
pub use young::{fundamental_function, Degeneracy, Young, YoungFunction};
