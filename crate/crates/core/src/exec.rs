//! Fan-out of independent replications.
//!
//! With the `parallel` feature (on by default) replications run on the
//! current rayon pool; without it, or with [`Execution::Sequential`], they run
//! in a plain loop. Either way results come back indexed by replication, so
//! the output does not depend on the schedule.

/// How replications are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    /// Work-stealing over the ambient rayon thread pool.
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// `f(0), f(1), ..., f(count - 1)` in index order.
    pub fn map_indexed<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..count as u64).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..count as u64).into_par_iter().map(f).collect()
            }
        }
    }
}
