//! Data-parallel helpers. With the `parallel` feature these dispatch to
//! rayon; without it they run the same closures sequentially. Output order
//! never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f)` collected in index order.
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Applies `f` to every `chunk`-word row of `data`.
pub(crate) fn for_each_chunk_mut<F>(data: &mut [u64], chunk: usize, f: F)
where
    F: Fn(&mut [u64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        // batch rows so each task does a meaningful amount of work
        let rows_per_task = (4096 / chunk.max(1)).max(1);
        data.par_chunks_mut(chunk * rows_per_task)
            .for_each(|block| block.chunks_mut(chunk).for_each(&f));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk).for_each(f);
    }
}

/// Number of worker threads the helpers will use.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_indexed_preserves_order() {
        let v = map_indexed(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == (i as u64) * (i as u64)));
    }

    #[test]
    fn chunks_cover_everything() {
        let mut data = vec![1u64; 10_000];
        for_each_chunk_mut(&mut data, 7, |row| row.iter_mut().for_each(|x| *x += 1));
        assert!(data.iter().all(|&x| x == 2));
    }
}
