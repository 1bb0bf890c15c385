//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) and `parallel = true` the closure
//! runs on the rayon pool; otherwise it runs in order on the calling thread.
//! Output order is the input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_range<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

pub fn map_slice<S, T, F>(items: &[S], parallel: bool, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Sizes the global pool; `0` keeps rayon's default. Without the `parallel`
/// feature this is a no-op.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        // Fails only if the pool was already built, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let _ = threads;
}

/// Whether the crate was built with the rayon backend.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}
