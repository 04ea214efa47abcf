//! Execution strategy for the batch paths: data-parallel via rayon when
//! the `parallel` feature is enabled, plain iteration otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecMode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecMode::Sequential
        }
    }
}

impl ExecMode {
    /// Map `f` over `items`, parallel or in order depending on the mode.
    /// Output order matches input order either way.
    pub fn map<T: Sync, R: Send>(self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        match self {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => items.par_iter().map(f).collect(),
            ExecMode::Sequential => items.iter().map(f).collect(),
        }
    }
}
