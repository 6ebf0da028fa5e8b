//! Execution strategy for the data-parallel loops (matrix columns, oracle
//! sweeps, Newton multi-starts).
//!
//! With the `parallel` feature disabled every strategy runs sequentially.
//! Results are always returned in input order, so output never depends on
//! scheduling.

/// How a batch of independent work items is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.into_iter().map(f).collect(),
            Strategy::Parallel => parallel_map(items, f),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Strategy::Sequential.map(items.clone(), |x| x * x + 1);
        let par = Strategy::Parallel.map(items, |x| x * x + 1);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 101);
    }
}
