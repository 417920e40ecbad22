//! Thread pool sized by the `NLCLAW_THREADS` environment variable.

use std::sync::OnceLock;

/// Number of worker threads: `NLCLAW_THREADS` when set to a positive integer, otherwise the
/// number of available cores.
pub fn configured_threads() -> usize {
    std::env::var("NLCLAW_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Shared pool used by the row-parallel 2D solver and by parameter sweeps.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(configured_threads())
            .build()
            .expect("thread pool construction")
    })
}
