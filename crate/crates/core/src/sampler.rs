//! Seeded random streams and deterministic parallel Monte-Carlo reduction.
//!
//! Every random draw in the crate flows through a [`SeededSampler`]. Parallel
//! estimators split their budget into fixed-size chunks; chunk `c` draws from
//! the sub-stream `(key, c)` where `key` is taken from the parent sampler, and
//! chunk results are merged in chunk order. The numbers produced are therefore
//! bit-identical for any rayon worker count.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Samples per parallel work unit.
pub const CHUNK: usize = 512;

#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Draws a fresh key for a family of sub-streams.
    pub fn fork_key(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Independent child sampler; advances `self`.
    pub fn child(&mut self) -> SeededSampler {
        SeededSampler::new(self.fork_key(), 0)
    }

    /// Standard Gaussian vector of length `n`.
    pub fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform point on the unit sphere of `R^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v = self.normal_vec(n);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

/// A Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            std_err: 0.0,
            samples: 1,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            std_err: self.std_err * factor.abs(),
            samples: self.samples,
        }
    }

    /// `|mean - target| <= k * std_err`, with an absolute floor for exact estimates.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_err + 1e-12 * (1.0 + target.abs())
    }
}

/// Running mean/variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn estimate(&self) -> Estimate {
        let se = if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        };
        Estimate {
            mean: self.mean,
            std_err: se,
            samples: self.count,
        }
    }
}

fn chunk_bounds(n: usize) -> Vec<(u64, usize)> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .map(|c| (c as u64, CHUNK.min(n - c * CHUNK)))
        .collect()
}

/// Mean of `f` over `n` independent draws.
pub fn mc_estimate<F>(n: usize, sampler: &mut SeededSampler, f: F) -> Estimate
where
    F: Fn(&mut SeededSampler) -> f64 + Sync,
{
    mc_estimate_vec(n, 1, sampler, |s, out| out[0] = f(s))[0]
}

/// Component-wise means of a vector-valued integrand of length `width`.
pub fn mc_estimate_vec<F>(n: usize, width: usize, sampler: &mut SeededSampler, f: F) -> Vec<Estimate>
where
    F: Fn(&mut SeededSampler, &mut [f64]) + Sync,
{
    let key = sampler.fork_key();
    let partials: Vec<Vec<Accumulator>> = chunk_bounds(n)
        .into_par_iter()
        .map(|(c, len)| {
            let mut s = SeededSampler::new(key, c);
            let mut acc = vec![Accumulator::default(); width];
            let mut buf = vec![0.0; width];
            for _ in 0..len {
                buf.iter_mut().for_each(|b| *b = 0.0);
                f(&mut s, &mut buf);
                for (a, &x) in acc.iter_mut().zip(&buf) {
                    a.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Accumulator::default(); width];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.iter().map(Accumulator::estimate).collect()
}

/// Deterministic parallel map over `0..count`, each index with its own sub-stream.
pub fn par_map_streams<T, F>(count: usize, sampler: &mut SeededSampler, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut SeededSampler) -> T + Sync,
{
    let key = sampler.fork_key();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut s = SeededSampler::new(key, i as u64);
            f(i, &mut s)
        })
        .collect()
}
