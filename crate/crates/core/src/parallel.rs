//! Execution policy for the independent sweeps (blocks, modes, trials).
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] fans out over
//! the rayon global pool. Without it every policy runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Order-preserving map over `items` under the given policy.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Like [`map`] but short-circuits on the first error (in item order for
/// sequential runs).
pub fn try_map<T, R, E, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_preserve_order() {
        let items: Vec<i64> = (0..1000).collect();
        let seq = map(Execution::Sequential, &items, |x| x * x - 3);
        let par = map(Execution::Parallel, &items, |x| x * x - 3);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 97);
    }

    #[test]
    fn try_map_reports_error() {
        let items = [1, 2, 3, -1, 5];
        let res: Result<Vec<i32>, String> =
            try_map(Execution::Parallel, &items, |&x| if x < 0 { Err(format!("bad {x}")) } else { Ok(x) });
        assert_eq!(res, Err("bad -1".to_string()));
    }
}
