//! Reproducible random streams keyed by `(seed, stream_index)`.
//!
//! Each stream is a ChaCha8 keystream: the key is expanded from `seed` and
//! the 64-bit ChaCha stream id is `stream_index`, so any stream can be
//! constructed directly without advancing a parent generator. Monte Carlo
//! work items derive their own stream from their index, which keeps results
//! independent of thread scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`.
    #[inline]
    pub fn index(&mut self, n: u32) -> u32 {
        self.rng.random_range(0..n)
    }

    /// Exponential with rate `rate` (mean `1 / rate`).
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        let e: f64 = Exp1.sample(&mut self.rng);
        e / rate
    }

    /// Standard normal via the ziggurat sampler of `rand_distr`.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_keys_give_identical_streams() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        for _ in 0..1_000_000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
        for _ in 0..1000 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
            assert_eq!(a.exponential(2.0).to_bits(), b.exponential(2.0).to_bits());
        }
    }

    #[test]
    fn exponential_mean() {
        let mut s = RngStream::new(11, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.exponential(1.0)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 4e-3, "{mean}");
        let mut s = RngStream::new(11, 1);
        let mean = (0..n).map(|_| s.exponential(4.0)).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 1e-3, "{mean}");
    }

    #[test]
    fn neighbouring_streams_uncorrelated() {
        let n = 100_000;
        let mut a = RngStream::new(42, 5);
        let mut b = RngStream::new(42, 6);
        let xs: Vec<f64> = (0..n).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.uniform()).collect();
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let rho = sxy / (sxx * syy).sqrt();
        assert!(rho.abs() < 0.01, "{rho}");
    }

    #[test]
    fn normal_moments() {
        let mut s = RngStream::new(1, 9);
        let n = 200_000;
        let v: Vec<f64> = (0..n).map(|_| s.normal()).collect();
        let m = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
        assert!(m.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.02);
    }
}
