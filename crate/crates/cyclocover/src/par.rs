//! Dispatch layer between the rayon and sequential execution paths.
//!
//! With the `parallel` feature (the default) the helpers fan out over the
//! current rayon pool; without it they run sequentially. Both paths preserve
//! input order, so results and first-found witnesses are identical either way.

#[cfg(feature = "parallel")]
pub(crate) fn map_ordered<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ordered<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// First `Some(..)` in ascending `range` order.
#[cfg(feature = "parallel")]
pub(crate) fn find_map_first<R, F>(range: std::ops::Range<u64>, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_map_first<R, F>(range: std::ops::Range<u64>, f: F) -> Option<R>
where
    F: Fn(u64) -> Option<R>,
{
    range.into_iter().find_map(f)
}
