//! Data-parallel execution helpers.
//!
//! Candidate tournaments, forest fitting and batch labeling are
//! embarrassingly parallel over independent inputs. With the `parallel`
//! feature (on by default) they fan out over rayon; without it the same
//! call sites degrade to plain sequential iteration. Output order always
//! matches input order, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential variant, kept unconditionally so benchmarks can compare the
/// two code paths in a single build.
pub fn map_collect_seq<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let items: Vec<u32> = (0..1000).collect();
        let a = map_collect(items.clone(), |x| x * 3 + 1);
        let b = map_collect_seq(items, |x| x * 3 + 1);
        assert_eq!(a, b);
    }
}
