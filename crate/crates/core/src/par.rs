//! Execution strategy for the enumeration kernels.
//!
//! With the `parallel` feature the parallel strategy splits an index range
//! across the rayon pool; without it both strategies run the same sequential
//! fold. Partial accumulators are combined with an associative, commutative
//! merge, so the result does not depend on the schedule.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Serial,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub(crate) fn fold_range<A, I, F, M>(exec: Exec, len: u64, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, u64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return (0..len)
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                fold(&mut acc, i);
                acc
            })
            .reduce(&init, &merge);
    }
    let _ = (exec, &merge);
    let mut acc = init();
    for i in 0..len {
        fold(&mut acc, i);
    }
    acc
}

/// Maps `f` over `items`, keeping input order in the output.
pub(crate) fn map_items<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for exec in [Exec::Serial, Exec::Parallel] {
            let total = fold_range(exec, 10_000, || 0u64, |a, i| *a += i * i, |a, b| a + b);
            assert_eq!(total, (0..10_000u64).map(|i| i * i).sum::<u64>());
            let doubled = map_items(exec, &[1, 2, 3], |x| x * 2);
            assert_eq!(doubled, vec![2, 4, 6]);
        }
    }
}
