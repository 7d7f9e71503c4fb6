//! Data-parallel map with a runtime switch. Without the `parallel` feature
//! everything runs sequentially.

pub fn map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Whether `parallel = true` actually uses more than one thread.
pub fn available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    #[test]
    fn both_paths_agree() {
        let v: Vec<u64> = (0..100).collect();
        let a = super::map(&v, true, |x| x * x);
        let b = super::map(&v, false, |x| x * x);
        assert_eq!(a, b);
    }
}
