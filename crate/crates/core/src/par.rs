//! Order-preserving data parallelism; sequential when the `parallel` feature is off.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn sum<T: Sync>(items: &[T], f: impl Fn(&T) -> u64 + Sync + Send) -> u64 {
    items.par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum<T: Sync>(items: &[T], f: impl Fn(&T) -> u64 + Sync + Send) -> u64 {
    items.iter().map(f).sum()
}
