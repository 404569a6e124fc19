//! Chunked map/merge over index ranges, run either on the rayon pool or on
//! the calling thread.
//!
//! Work is always split into the same fixed-size chunks and partial results
//! are merged in chunk order, so floating-point sums come out bit-identical
//! whatever the thread count or execution mode.

use std::ops::Range;

/// Number of users folded into one partial result.
pub const DEFAULT_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon pool. Without the `parallel` feature this runs
    /// sequentially.
    #[default]
    Parallel,
}

impl Execution {
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

fn chunk_ranges(n: usize, chunk: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    let chunk = chunk.max(1);
    (0..n.div_ceil(chunk)).map(move |c| c * chunk..((c + 1) * chunk).min(n))
}

/// Maps every chunk of `[0, n)` and returns the partials in chunk order.
pub fn map_chunks<T, F>(n: usize, chunk: usize, exec: Execution, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            let ranges: Vec<Range<usize>> = chunk_ranges(n, chunk).collect();
            ranges.into_par_iter().map(map).collect()
        }
        _ => chunk_ranges(n, chunk).map(map).collect(),
    }
}

/// Maps every chunk of `[0, n)` and folds the partials left to right.
pub fn map_merge<T, F, M>(
    n: usize,
    chunk: usize,
    exec: Execution,
    init: T,
    map: F,
    mut merge: M,
) -> T
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
    M: FnMut(&mut T, T),
{
    let mut acc = init;
    for part in map_chunks(n, chunk, exec, map) {
        merge(&mut acc, part);
    }
    acc
}

/// Element-wise `acc += part` for count vectors.
pub fn add_counts(acc: &mut [u64], part: Vec<u64>) {
    debug_assert_eq!(acc.len(), part.len());
    for (a, p) in acc.iter_mut().zip(part) {
        *a += p;
    }
}
