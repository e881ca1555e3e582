use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};
use sktr_core::noise::{TraceExecutor, TraceOutcome};

/// Runs per-trace jobs on a dedicated thread pool. Results keep job order.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `threads == 0` uses one thread per core.
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        Ok(Parallel {
            pool: ThreadPoolBuilder::new().num_threads(threads).build()?,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Order-preserving parallel map over `0..jobs`.
    pub fn map<T: Send>(&self, jobs: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
        self.pool.install(|| (0..jobs).into_par_iter().map(&job).collect())
    }
}

impl TraceExecutor for Parallel {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> TraceOutcome + Sync)) -> Vec<TraceOutcome> {
        self.map(jobs, job)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_input_order() {
        let p = Parallel::new(4).unwrap();
        let out = p.map(1000, |i| i * 2);
        assert!(out.iter().enumerate().all(|(i, &v)| v == i * 2));
    }
}
