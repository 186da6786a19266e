//! Thin data-parallel layer.
//!
//! With the default `parallel` feature the helpers below fan work out via
//! rayon; without it they compile to equivalent sequential loops. Every
//! helper is deterministic either way: maps preserve order and "first"
//! searches always return the lowest-index hit, so results never depend on
//! thread scheduling.

/// Runs `f` on a dedicated pool of `threads` workers when the `parallel`
/// feature is enabled (useful for benchmarking scaling); otherwise just
/// calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("building a scoped thread pool cannot fail")
            .install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

/// Caps the global worker count. Returns `false` if a global pool was
/// already initialized (the cap is then ignored). No-op without the
/// `parallel` feature.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        true
    }
}

/// Order-preserving map over a `u64` range.
pub fn map_range<T: Send>(range: std::ops::Range<u64>, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (range.start..range.end).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Does `pred` hold for every value in the range?
pub fn all_range(range: std::ops::Range<u64>, pred: impl Fn(u64) -> bool + Sync + Send) -> bool {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (range.start..range.end).into_par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut range = range;
        range.all(pred)
    }
}

/// Smallest value in the range where `pred` holds.
pub fn find_first_range(range: std::ops::Range<u64>, pred: impl Fn(u64) -> bool + Sync + Send) -> Option<u64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (range.start..range.end).into_par_iter().find_first(|&x| pred(x))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut range = range;
        range.find(|&x| pred(x))
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// First `Some` produced by `f` over ascending indices `0..len`.
pub fn find_map_first_index<U: Send>(len: usize, f: impl Fn(usize) -> Option<U> + Sync + Send) -> Option<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().find_map_first(|i| f(i))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).find_map(f)
    }
}
