//! Execution policy for the data-parallel loops (operator application, sweeps).
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans work out over
//! the rayon pool; without it both policies run sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Fill `out[i] = f(i)`.
    pub fn fill<R, F>(self, out: &mut [R], f: F)
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
            }
            _ => out.iter_mut().enumerate().for_each(|(i, o)| *o = f(i)),
        }
    }
}
