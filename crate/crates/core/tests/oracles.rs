//! Library results against hand-derived closed forms and a dense-grid
//! supremum written independently of the library's optimizer.

use orlicz_core::conjugation::{ominus_truncated_at, power_ominus_power};
use orlicz_core::factorization::Mode;
use orlicz_core::measure::threshold;
use orlicz_core::multipliers::{construct_witness, operator_norm_lower, trivial_divergence, Triviality};
use orlicz_core::*;

const INF: f64 = f64::INFINITY;

fn pow(p: f64) -> YoungFunction {
    YoungFunction::power(p).unwrap()
}

fn cut(inner: YoungFunction, b: f64, at_b: f64) -> YoungFunction {
    YoungFunction::cut_off(inner, b, at_b).unwrap()
}

/// `sup_{0 ≤ s ≤ hi} f(s)` on a dense log grid, then a local grid refinement
/// around the best node.
fn dense_sup(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let top = if hi.is_finite() { hi } else { 1e8 };
    let n = 200_000;
    let (lo_e, hi_e) = (-8.0f64, top.log10());
    let mut best = (0.0, f(0.0).max(0.0));
    let mut best_k = 0usize;
    for k in 0..=n {
        let s = 10f64.powf(lo_e + (hi_e - lo_e) * k as f64 / n as f64).min(top);
        let v = f(s);
        if v > best.1 {
            best = (s, v);
            best_k = k;
        }
    }
    if best.0 > 0.0 {
        let step = (hi_e - lo_e) / n as f64;
        let (a, b) = ((best_k as f64 - 1.0) * step + lo_e, (best_k as f64 + 1.0) * step + lo_e);
        for k in 0..=20_000 {
            let s = 10f64.powf(a + (b - a) * k as f64 / 20_000.0).min(top);
            best.1 = best.1.max(f(s));
        }
    }
    best.1
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

#[test]
fn power_pair_matches_stationary_point() {
    let r = ominus(&pow(2.0), &pow(3.0), &GridSpec::default()).unwrap();
    for (&u, &v) in r.function.grid().iter().zip(r.function.values()) {
        if u > 0.0 {
            assert!(rel(v, 4.0 / 27.0 * u.powi(6)) < 1e-12, "u={u}: {v}");
        }
    }
    // s* = 2u²/3.
    for &(u, s) in &r.argmax_profile {
        if u > 0.0 {
            assert!(rel(s, 2.0 * u * u / 3.0) < 1e-6, "u={u}: s*={s}");
        }
    }
    assert!(rel(power_ominus_power(2.0, 1.0, 3.0, 1.0, 1.0).0, 4.0 / 27.0) < 1e-15);
}

#[test]
fn pointwise_sup_matches_dense_oracle() {
    let pairs = [
        (pow(2.0), pow(3.0)),
        (YoungFunction::Identity, YoungFunction::exp_minus_one(1.0).unwrap()),
        (pow(1.5), cut(pow(2.0), 2.0, 5.0)),
        (YoungFunction::knee(1.0).unwrap(), pow(2.0)),
        (pow(3.0), pow(4.0).dilate(0.5).unwrap()),
    ];
    for (phi, phi1) in &pairs {
        let b1 = phi1.params().b;
        for u in [0.05, 0.3, 1.0, 2.5, 7.0] {
            let (lib, _) = ominus_at(phi, phi1, u);
            let oracle = dense_sup(|s| phi.eval(s * u) - phi1.eval(s), b1);
            assert!(rel(lib, oracle) < 1e-7 || (lib - oracle).abs() < 1e-12, "{} / {} at u={u}: {lib} vs {oracle}", phi.label(), phi1.label());
            assert!(lib >= oracle * (1.0 - 1e-12), "library sup below a feasible value");
        }
    }
}

#[test]
fn truncated_examples() {
    let (v, s) = ominus_truncated_at(&pow(2.0), &pow(3.0), 10.0, 1.0).unwrap();
    assert!(rel(v, 4.0 / 27.0) < 1e-14 && rel(s, 2.0 / 3.0) < 1e-6);
    let (v, s) = ominus_truncated_at(&pow(2.0), &pow(3.0), 0.5, 1.0).unwrap();
    assert!(rel(v, 0.125) < 1e-15 && s == 0.5);
    assert!(ominus_truncated_at(&pow(2.0), &pow(3.0), 0.0, 1.0).is_err());
}

#[test]
fn classical_pairs() {
    let grid = GridSpec::new(1e-2, 1e2, 401).unwrap().with_anchors([1.0]);
    let half = YoungFunction::power_scaled(2.0, 0.5).unwrap();
    let r = classical_conjugate(&half, &grid).unwrap();
    for (&u, &v) in r.function.grid().iter().zip(r.function.values()) {
        assert!(rel(v, u * u / 2.0) < 1e-12);
    }
    let r = classical_conjugate(&YoungFunction::power_scaled(3.0, 1.0 / 3.0).unwrap(), &grid).unwrap();
    assert!(rel(r.value_at_node(1.0).unwrap(), 2.0 / 3.0) < 1e-12);
    // sup_{s ≤ 1} s·u = u.
    let r = classical_conjugate(&YoungFunction::linfty_indicator(1.0).unwrap(), &grid).unwrap();
    for (&u, &v) in r.function.grid().iter().zip(r.function.values()) {
        assert!(rel(v, u) < 1e-15, "u={u}: {v}");
    }
}

#[test]
fn cutoff_partners_by_hand() {
    // sup_{s ≤ 2} (s·u − s) = 2(u − 1)⁺.
    let phi1 = cut(YoungFunction::Identity, 2.0, 2.0);
    for u in [0.5, 1.0, 1.5, 3.0] {
        assert!((ominus_at(&YoungFunction::Identity, &phi1, u).0 - 2.0 * (u - 1.0f64).max(0.0)).abs() < 1e-12);
    }
    // sup_{s < 1} s²(u² − 1) = (u² − 1)⁺, not attained.
    let phi1 = cut(pow(2.0), 1.0, INF);
    for u in [0.5, 1.0, 2.0, 5.0] {
        assert!((ominus_at(&pow(2.0), &phi1, u).0 - (u * u - 1.0f64).max(0.0)).abs() < 1e-12 * u * u);
    }
    // sup_s (s·u − e^s + 1) = u ln u − u + 1 for u ≥ 1.
    let e = YoungFunction::exp_minus_one(1.0).unwrap();
    for u in [1.5, 4.0, 30.0] {
        assert!(rel(ominus_at(&YoungFunction::Identity, &e, u).0, u * u.ln() - u + 1.0) < 1e-12);
    }
}

#[test]
fn b_propagation() {
    let grid = GridSpec::default();
    let c2 = cut(pow(2.0), 1.0, INF);
    let c3 = cut(pow(3.0), 1.0, INF);
    assert_eq!(ominus(&c2, &c3, &grid).unwrap().b(), 1.0);
    assert_eq!(ominus(&pow(2.0), &c2, &grid).unwrap().b(), INF);
    let m = resolve(&pow(2.0), &c2, &grid).unwrap();
    assert_eq!(m.classification, Classification::Trivial);
    assert!(m.generator.function.values()[1..].iter().all(|v| v.is_infinite()));
}

#[test]
fn triviality_regimes() {
    let c2 = cut(pow(2.0), 1.0, INF);
    let c3 = cut(pow(3.0), 1.0, INF);
    assert_eq!(triviality_check(&c2, &pow(2.0)), Triviality::TrivialZero);
    assert_eq!(triviality_check(&c2, &c3), Triviality::BoundedByLinfty);
    // ‖χ_B‖_M ≥ f_φ(t)/f_φ₁(t) = 1/√t for t = μ(A)/k when φ jumps at 1.
    let sp = MeasureSpace::unit_interval(1).unwrap();
    let d = trivial_divergence(&c2, &pow(2.0), &sp, 0, &[1, 100, 10_000]);
    assert!(rel(d[2].1, 100.0) < 1e-12 && d[2].1 > d[1].1 && d[1].1 > d[0].1);
}

#[test]
fn fundamental_function_values() {
    assert!(rel(charfn_norm(&pow(2.0), 0.25), 0.5) < 1e-15);
    let c = cut(pow(2.0), 1.0, INF);
    for t in [1e-3, 1e-6, 1e-9] {
        assert!(charfn_norm(&c, t) >= 1.0);
    }
    let sp = MeasureSpace::unit_interval(4).unwrap();
    let chi = SimpleFunction::indicator(&sp, &[0]).unwrap();
    assert!(rel(luxemburg_norm(&pow(2.0), &chi, &sp), 0.5) < 1e-10);
    let sp = MeasureSpace::unit_interval(2).unwrap();
    let x = SimpleFunction::from_values(&sp, vec![2.0, 0.0]).unwrap();
    assert!(rel(luxemburg_norm(&pow(2.0), &x, &sp), 2f64.sqrt()) < 1e-10);
}

#[test]
fn luxemburg_norm_of_powers_is_the_lp_norm() {
    let sp = MeasureSpace::finite(vec![0.1, 0.4, 0.2, 0.3]).unwrap();
    let x = SimpleFunction::from_values(&sp, vec![3.0, 0.5, 0.0, 7.0]).unwrap();
    for p in [1.0, 1.5, 2.0, 4.0] {
        let lp = x.values().iter().zip(sp.cells()).map(|(v, m)| v.powf(p) * m).sum::<f64>().powf(1.0 / p);
        assert!(rel(luxemburg_norm(&pow(p), &x, &sp), lp) < 1e-9, "p={p}");
    }
    // For e^u − 1 on χ_A: 1/ln(1 + 1/t).
    let e = YoungFunction::exp_minus_one(1.0).unwrap();
    let chi = SimpleFunction::indicator(&sp, &[1, 2]).unwrap();
    assert!(rel(luxemburg_norm(&e, &chi, &sp), 1.0 / (1.0 + 1.0 / 0.6f64).ln()) < 1e-9);
}

#[test]
fn norm_modular_examples() {
    let sp = MeasureSpace::unit_interval(1).unwrap();
    let one = SimpleFunction::indicator(&sp, &[0]).unwrap();
    let r = check_norm_modular(&pow(2.0), &one, &sp);
    assert!(r.holds && rel(r.norm, 1.0) < 1e-10 && r.modular == 1.0);
    let r = check_norm_modular(&pow(2.0), &one.scale(0.5), &sp);
    assert!(r.holds && rel(r.norm, 0.5) < 1e-10 && r.modular == 0.25);
}

#[test]
fn thresholds_and_partitions() {
    assert!(rel(threshold(&pow(2.0), 2.0, 1.0).unwrap(), 0.25) < 1e-12);
    assert!(rel(threshold(&YoungFunction::Identity, 1.0, 1.0).unwrap(), 1.0) < 1e-12);
    let plan = plan_partition(&pow(2.0), &MeasureSpace::unit_interval(16).unwrap(), 2.0).unwrap();
    assert_eq!(plan.groups.len(), 4);
    for g in &plan.groups {
        assert!(rel(plan.space.measure_of(g), 0.25) < 1e-12);
    }
}

#[test]
fn witness_levels() {
    let sp = MeasureSpace::unit_interval(2).unwrap();
    let y = SimpleFunction::from_values(&sp, vec![1.0, 0.0]).unwrap();
    let w = construct_witness(&pow(2.0), &pow(3.0), 10.0, &y).unwrap();
    let l = w.levels.iter().find(|l| l.level == 1.0).unwrap();
    assert!(rel(l.b, 2.0 / 3.0) < 1e-6 && l.residual < 1e-12);
    let y = SimpleFunction::from_values(&sp, vec![2.0, 0.0]).unwrap();
    let w = construct_witness(&YoungFunction::Identity, &YoungFunction::Identity, 1.0, &y).unwrap();
    assert_eq!(w.levels.iter().find(|l| l.level == 2.0).unwrap().b, 1.0);
}

#[test]
fn multiplier_generators() {
    let grid = GridSpec::default();
    let m = resolve(&pow(3.0), &pow(2.0), &grid).unwrap();
    assert_eq!(m.classification, Classification::General);
    assert!(rel(m.generator.value_at_node(1.0).unwrap(), 4.0 / 27.0) < 1e-12);
    let m = resolve(&pow(2.0), &pow(2.0), &grid).unwrap();
    for (&u, &v) in m.generator.function.grid().iter().zip(m.generator.function.values()) {
        assert_eq!(v, if u <= 1.0 { 0.0 } else { INF });
    }
}

#[test]
fn l3_to_l2_operator_norm_is_l6() {
    let sp = MeasureSpace::unit_interval(64).unwrap();
    let vals: Vec<f64> = (0..64).map(|i| [0.0, 0.5, 2.0, 3.0][i % 4]).collect();
    let y = SimpleFunction::from_values(&sp, vals).unwrap();
    let l6 = y.values().iter().map(|v| v.powi(6) / 64.0).sum::<f64>().powf(1.0 / 6.0);
    let lower = operator_norm_lower(&pow(3.0), &pow(2.0), &y, &sp, 256).value;
    assert!(lower >= 0.95 * l6 && lower <= l6 * (1.0 + 1e-9), "{lower} vs {l6}");
}

#[test]
fn factorization_constants() {
    let phi2 = YoungFunction::power_scaled(6.0, 4.0 / 27.0).unwrap();
    let r = equivalence_check(&pow(2.0), &pow(3.0), &phi2, Mode::AllArguments, (1e-3, 1e3), 241).unwrap();
    let k = (27.0f64 / 4.0).powf(1.0 / 6.0);
    assert!(r.verdict && rel(r.c, k) < 1e-12 && rel(r.big_c, k) < 1e-12);
    let linf = YoungFunction::linfty_indicator(1.0).unwrap();
    let r = equivalence_check(&pow(2.0), &pow(2.0), &linf, Mode::AllArguments, (1e-3, 1e3), 241).unwrap();
    assert!(rel(r.c, 1.0) < 1e-15 && rel(r.big_c, 1.0) < 1e-15);
}

#[test]
fn decompositions_by_hand() {
    let sp = MeasureSpace::unit_interval(4).unwrap();
    let g = ominus(&pow(2.0), &pow(3.0), &GridSpec::default()).unwrap().function;
    let z = SimpleFunction::indicator(&sp, &[1, 3]).unwrap();
    let d = decompose(&z, &pow(2.0), &pow(3.0), &g, &sp).unwrap();
    assert_eq!(d.x, z);
    assert_eq!(d.y, z);
    // Two levels with I_φ(z) = 1.
    let z = SimpleFunction::from_values(&sp, vec![1.0, 1.0, 3f64.sqrt(), 1.0]).unwrap();
    assert!(rel(modular(&pow(2.0), &z, &sp), 1.5) < 1e-15);
    let z = z.scale((1.0f64 / 1.5).sqrt());
    let d = decompose(&z, &pow(2.0), &pow(3.0), &g, &sp).unwrap();
    assert!(d.product_exact());
    for (&x, &zv) in d.x.values().iter().zip(z.values()) {
        assert!(x.powi(3) <= zv * zv);
    }
    assert!(d.phi1_modular_x <= 1.0 + 1e-15);
}
