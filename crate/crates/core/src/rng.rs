//! Seed policy: one master seed, and sample `i` draws from ChaCha8 stream `i`
//! of that seed. Results therefore do not depend on how samples are split
//! across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Generator for sample `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluate `f(i, rng_i)` for `i in 0..count` on `workers` threads and return
/// the results in index order.
pub fn par_samples<T, F>(seed: u64, count: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    if workers == 0 {
        return Err(Error::Config("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| f(i, &mut stream_rng(seed, i as u64)))
            .collect()
    })
}
