//! Seeded random inputs for property sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext::INF;
use crate::measure::{MeasureSpace, SimpleFunction};
use crate::sampled::SampledYoung;
use crate::young::YoungFunction;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derived stream for a sub-task, independent of how many draws the parent made.
pub fn substream(seed: u64, tag: u64) -> Rand {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r
}

fn log_uniform(r: &mut Rand, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

/// A space of `n` cells with measures in `[0.5, 1.5]·total/n`.
pub fn random_space(r: &mut Rand, n: usize, total: f64) -> MeasureSpace {
    let raw: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..1.5)).collect();
    let s: f64 = raw.iter().sum();
    MeasureSpace::finite(raw.iter().map(|m| m * total / s).collect()).expect("positive measures")
}

/// Up to `max_levels` distinct levels, log-uniform in `[lo, hi]`, with a
/// fraction `zero_frac` of the cells left at 0. Never identically zero.
pub fn random_simple(r: &mut Rand, sp: &MeasureSpace, max_levels: usize, (lo, hi): (f64, f64), zero_frac: f64) -> SimpleFunction {
    let k = r.gen_range(1..=max_levels.max(1));
    let levels: Vec<f64> = (0..k).map(|_| log_uniform(r, lo, hi)).collect();
    let mut v: Vec<f64> = (0..sp.len())
        .map(|_| if r.gen_bool(zero_frac) { 0.0 } else { *levels.choose(r).unwrap() })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        let i = r.gen_range(0..v.len());
        v[i] = levels[0];
    }
    SimpleFunction::from_values(sp, v).expect("finite nonnegative levels")
}

/// A random closed-form Young function from the families used in sweeps.
pub fn random_young(r: &mut Rand) -> YoungFunction {
    let base = match r.gen_range(0..5) {
        0 => YoungFunction::power_scaled(r.gen_range(1.0..5.0), log_uniform(r, 0.1, 10.0)),
        1 => YoungFunction::exp_minus_one(log_uniform(r, 0.1, 10.0)),
        2 => YoungFunction::knee(r.gen_range(0.0..2.0)),
        3 => Ok(YoungFunction::Identity),
        _ => YoungFunction::power(r.gen_range(1.0..3.0)).and_then(|f| f.dilate(log_uniform(r, 0.2, 5.0))),
    }
    .expect("parameters in range");
    if r.gen_bool(0.3) {
        let b = log_uniform(r, 0.5, 4.0);
        let left = crate::young::Young::eval_left(&base, b);
        let at_b = if r.gen_bool(0.5) { INF } else { left + r.gen_range(0.0..2.0) };
        YoungFunction::cut_off(base, b, at_b).expect("cut inside the finite region")
    } else {
        base
    }
}

/// Discretely convex sampled function on `n` log-spaced nodes over
/// `[1e-3, 1e3]` (plus 0): nondecreasing slopes, an optional zero prefix and
/// an optional `∞` tail.
pub fn random_convex_sampled(r: &mut Rand, n: usize) -> SampledYoung {
    let step = 6.0 / (n - 2) as f64;
    let mut grid = vec![0.0];
    grid.extend((0..n - 1).map(|i| 10f64.powf(-3.0 + step * i as f64)));
    let zero_until = if r.gen_bool(0.3) { r.gen_range(1..n / 4) } else { 1 };
    let inf_from = if r.gen_bool(0.3) { r.gen_range(n / 2..n) } else { n };
    let mut slope = if zero_until > 1 { 0.0 } else { log_uniform(r, 1e-3, 1.0) };
    let growth = r.gen_range(0.0..0.02);
    let mut values = vec![0.0; n];
    for i in 1..n {
        if i < zero_until {
            continue;
        }
        if i >= inf_from {
            values[i] = INF;
            continue;
        }
        if i > zero_until {
            slope = slope.max(1e-9) * (1.0 + growth * r.gen_range(0.0..2.0)) + r.gen_range(0.0..1e-3);
        }
        values[i] = values[i - 1] + slope * (grid[i] - grid[i - 1]);
    }
    SampledYoung::from_parts(grid, values, "random").expect("structurally valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::Young;

    #[test]
    fn same_seed_same_draws() {
        let sp = MeasureSpace::unit_interval(16).unwrap();
        let a = random_simple(&mut rng(3), &sp, 4, (0.1, 10.0), 0.3);
        let b = random_simple(&mut rng(3), &sp, 4, (0.1, 10.0), 0.3);
        assert_eq!(a, b);
    }

    #[test]
    fn random_functions_are_valid() {
        let mut r = rng(11);
        for _ in 0..200 {
            random_young(&mut r).validate().unwrap();
        }
        for _ in 0..50 {
            let s = random_convex_sampled(&mut r, 256);
            assert!(s.invariant_violations(1e-12).is_empty(), "{:?}", s.invariant_violations(1e-12));
            assert!(s.eval(1.0) >= 0.0);
        }
    }
}
