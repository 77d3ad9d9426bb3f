//! Deterministic replica-parallel execution.
//!
//! Replicas carry their own derived seeds, so any partition into batches
//! produces the same per-replica values; batches run on rayon and are merged
//! afterwards in fixed batch order, making the reduction independent of the
//! thread schedule.

use rayon::prelude::*;

const BATCH: u64 = 1024;

/// Run `body(r, &mut acc)` for each replica index `r`, batched in parallel,
/// merging batch accumulators in index order.
pub fn map_reduce<T, I, B, M>(replicas: u64, init: I, body: B, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    B: Fn(u64, &mut T) + Sync,
    M: Fn(T, T) -> T,
{
    if replicas == 0 {
        return init();
    }
    let n_batches = replicas.div_ceil(BATCH);
    let parts: Vec<T> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut acc = init();
            let lo = batch * BATCH;
            let hi = ((batch + 1) * BATCH).min(replicas);
            for r in lo..hi {
                body(r, &mut acc);
            }
            acc
        })
        .collect();
    let mut iter = parts.into_iter();
    let first = iter.next().expect("at least one batch");
    iter.fold(first, merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Accumulator;
    use crate::rng::{mix, Stream};

    #[test]
    fn reduction_is_schedule_independent() {
        // The same seeded computation twice; rayon may schedule differently,
        // the result must be bitwise identical.
        let run = || {
            map_reduce(
                5000,
                Accumulator::default,
                |r, acc: &mut Accumulator| {
                    let mut s = Stream::from_seed(mix(42, &[r]));
                    acc.push(s.uniform());
                },
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.mean().to_bits(), b.mean().to_bits());
        assert_eq!(a.std_error().to_bits(), b.std_error().to_bits());
        assert_eq!(a.count(), 5000);
    }
}
