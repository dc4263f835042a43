//! Fitness evaluation across a worker pool.
//!
//! Results are always returned in input order, so the degree of parallelism
//! never leaks into a run's output.

use std::sync::Arc;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

#[derive(Clone)]
pub struct Evaluator {
    pool: Option<Arc<ThreadPool>>,
    threads: usize,
}

impl std::fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Evaluator").field("threads", &self.threads).finish()
    }
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::sequential()
    }
}

impl Evaluator {
    pub fn sequential() -> Self {
        Self { pool: None, threads: 1 }
    }

    /// A pool of `threads` workers; 0 or 1 evaluates on the calling thread.
    pub fn with_threads(threads: usize) -> Self {
        if threads <= 1 {
            return Self::sequential();
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build worker pool");
        Self {
            pool: Some(Arc::new(pool)),
            threads,
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// `f(i)` for `i in 0..n`, in order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match &self.pool {
            None => (0..n).map(f).collect(),
            Some(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        }
    }
}
