//! Batch execution of independent jobs (scenario files, fuzz seeds,
//! randomized acceptance worlds). Each job owns its own `WorldState`, so
//! running them in parallel cannot violate the single-writer model.
//!
//! With the `parallel` feature (default) batches run on rayon; without it
//! the same API runs sequentially. Output order matches input order either
//! way, so results are deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runs `f` over all jobs, in parallel when the `parallel` feature is on.
pub fn run_batch<T, R, F>(jobs: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    {
        jobs.par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(jobs, f)
    }
}

/// Always-sequential fallback, kept public for benchmark comparison.
pub fn run_batch_sequential<T, R, F>(jobs: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    jobs.iter().map(f).collect()
}
