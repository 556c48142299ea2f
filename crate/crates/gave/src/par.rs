//! Deterministic parallel evaluation over an index range.
//!
//! The range is split into one contiguous chunk per thread and chunk
//! results are folded in chunk order, so the reduction of any
//! order-sensitive merge matches the sequential result exactly.

/// Map `eval` over `0..len` on up to `threads` workers and fold the chunk
/// results in ascending chunk order.
pub fn map_chunks<R, E, F>(len: u64, threads: usize, eval: E, fold: F) -> Option<R>
where
    R: Send,
    E: Fn(std::ops::Range<u64>) -> R + Sync,
    F: Fn(R, R) -> R,
{
    if len == 0 {
        return None;
    }
    let threads = threads.max(1).min(len as usize);
    if threads == 1 {
        return Some(eval(0..len));
    }
    let chunk = len.div_ceil(threads as u64);
    let ranges: Vec<std::ops::Range<u64>> = (0..threads as u64)
        .map(|t| (t * chunk)..((t + 1) * chunk).min(len))
        .filter(|r| !r.is_empty())
        .collect();
    let results: Vec<R> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(|| eval(r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    results.into_iter().reduce(fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_matches_sequential() {
        let sum = |r: std::ops::Range<u64>| r.sum::<u64>();
        for threads in [1, 2, 3, 8, 64] {
            let got = map_chunks(1000, threads, sum, |a, b| a + b).unwrap();
            assert_eq!(got, 499_500);
        }
    }

    #[test]
    fn first_match_reduction_is_order_stable() {
        // min over chunk-local first matches equals the sequential first match
        let eval = |r: std::ops::Range<u64>| r.clone().find(|&k| k % 97 == 5);
        for threads in [1, 2, 7, 16] {
            let got = map_chunks(1000, threads, eval, |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            })
            .unwrap();
            assert_eq!(got, Some(5));
        }
    }

    #[test]
    fn empty_range() {
        assert!(map_chunks::<u64, _, _>(0, 4, |r| r.sum(), |a, b| a + b).is_none());
    }
}
