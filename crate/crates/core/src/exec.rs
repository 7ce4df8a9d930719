//! Sequential / parallel execution switch.

/// Execution strategy for data-parallel loops.
///
/// `Parallel` runs on rayon when the crate is built with the `parallel`
/// feature and silently degrades to `Sequential` otherwise. Both produce
/// identical results: work is split by index and reductions use a fixed
/// tree shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `(0..n).map(f).collect()`, fanned out when `exec` allows.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Runs two closures, concurrently when `exec` allows.
pub fn join<A, B, RA, RB>(exec: Exec, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return rayon::join(a, b);
    }
    let _ = exec;
    (a(), b())
}

const LEAF: usize = 64;

/// Pairwise sum with a fixed tree, so sequential and parallel runs agree bit for bit.
pub fn tree_sum(exec: Exec, xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    if xs.len() >= 1 << 14 {
        let (a, b) = join(exec, || tree_sum(exec, l), || tree_sum(exec, r));
        a + b
    } else {
        tree_sum(Exec::Sequential, l) + tree_sum(Exec::Sequential, r)
    }
}
