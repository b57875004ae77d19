//! Data-parallel mapping with a sequential fallback.
//!
//! Every embarrassingly parallel loop in the crate (λ-sweeps, pseudospectrum
//! grids, sampled inequality batteries) funnels through [`par_map`] /
//! [`par_map_indexed`]. With the default `parallel` feature these dispatch to
//! rayon; without it they run plain sequential iteration. Both paths apply
//! the same pure closure to the same inputs in the same output order, so the
//! feature flag can never change a result, only wall-clock time.
//!
//! [`seq_map`] is the always-sequential reference used by the benchmark
//! suite to measure the speedup on the same build.

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
///
/// Output order matches input order regardless of scheduling.
#[cfg(feature = "parallel")]
pub fn par_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Map `f` over `items` sequentially (the `parallel` feature is disabled).
#[cfg(not(feature = "parallel"))]
pub fn par_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Map `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn par_map_indexed<O, F>(n: usize, f: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize) -> O + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n` sequentially (the `parallel` feature is disabled).
#[cfg(not(feature = "parallel"))]
pub fn par_map_indexed<O, F>(n: usize, f: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize) -> O + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Always-sequential map with the same contract as [`par_map`].
///
/// Exists so benchmarks (and determinism tests) can compare the parallel
/// dispatch against a sequential baseline within a single build.
pub fn seq_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order_and_matches_seq_map() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x.wrapping_mul(2654435761).rotate_left(7);
        assert_eq!(par_map(&items, f), seq_map(&items, f));
    }

    #[test]
    fn par_map_indexed_matches_direct_loop() {
        let got = par_map_indexed(257, |i| i * i);
        let want: Vec<usize> = (0..257).map(|i| i * i).collect();
        assert_eq!(got, want);
    }
}
