//! Order-preserving map over independent work items.
//!
//! Sweep points, fuzz draws and per-domain reports are embarrassingly
//! parallel. With the `parallel` feature the map runs on the rayon pool;
//! without it (or with `parallel: false` in the run configuration) it runs
//! sequentially. Both paths produce identical output in identical order, so
//! serialized results are byte-for-byte independent of the execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
pub fn map_items<T, U, F>(items: Vec<T>, parallel: bool, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

/// Sequential map with the same signature as [`map_items`]; used by the
/// benchmark suite as the comparison baseline.
pub fn map_items_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
