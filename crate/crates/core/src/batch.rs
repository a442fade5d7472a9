//! Batch evaluation over many projector pairs, data-parallel via rayon when
//! the `parallel` feature is on; the sequential path is always available.

use rand::Rng;

use crate::error::Result;
use crate::hermitian::Projector;
use crate::improb::{bounds, ProbabilityOperatorPair};
use crate::random::{random_projector, rng_from_seed};

/// Maps `f` over the items sequentially, regardless of features.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over the items, in parallel when the `parallel` feature is
/// enabled and sequentially otherwise.
#[cfg(feature = "parallel")]
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

/// Seeded corpus of random projector pairs with dimensions drawn from the
/// given range, for property suites and benchmarks.
pub fn random_pair_corpus(
    count: usize,
    min_dim: usize,
    max_dim: usize,
    seed: u64,
) -> Vec<(Projector, Projector)> {
    assert!(min_dim >= 2 && max_dim >= min_dim);
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let dim = rng.gen_range(min_dim..=max_dim);
            (
                random_projector(dim, &mut rng),
                random_projector(dim, &mut rng),
            )
        })
        .collect()
}

/// Computes the (lower, upper) operator pair for each projector pair.
pub fn bounds_batch(pairs: &[(Projector, Projector)]) -> Vec<Result<ProbabilityOperatorPair>> {
    map_batch(pairs, |(p, q)| bounds(p, q))
}

/// Sequential counterpart of [`bounds_batch`], for comparison runs.
pub fn bounds_batch_sequential(
    pairs: &[(Projector, Projector)],
) -> Vec<Result<ProbabilityOperatorPair>> {
    map_sequential(pairs, |(p, q)| bounds(p, q))
}
