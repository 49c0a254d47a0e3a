use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seeded random stream passed explicitly into every stochastic operation.
///
/// Backed by ChaCha8, a counter-based generator: the same seed and the same
/// sequence of calls always produce the same values on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// One Bernoulli draw. `p` is clamped to [0, 1].
    pub fn bernoulli(&mut self, p: f64) -> bool {
        let p = if p.is_nan() { 0.0 } else { p.clamp(0.0, 1.0) };
        self.inner.random_bool(p)
    }

    /// Uniform sample in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.inner.random_range(lo..hi)
    }

    pub fn normal(&mut self, mean: f64, stdev: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.inner);
        mean + stdev * z
    }

    /// Uniform index in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_extremes() {
        let mut s = RngStream::new(1);
        assert!((0..1000).all(|_| !s.bernoulli(0.0)));
        assert!((0..1000).all(|_| s.bernoulli(1.0)));
    }

    #[test]
    fn bernoulli_half_rate() {
        let mut s = RngStream::new(42);
        let hits = (0..100_000).filter(|_| s.bernoulli(0.5)).count();
        let rate = hits as f64 / 100_000.0;
        assert!((0.49..=0.51).contains(&rate), "rate {rate}");
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::new(9);
        let mut b = RngStream::new(9);
        for _ in 0..100 {
            assert_eq!(a.uniform(-1.0, 1.0).to_bits(), b.uniform(-1.0, 1.0).to_bits());
            assert_eq!(a.bernoulli(0.3), b.bernoulli(0.3));
        }
        assert_eq!(a.position(), b.position());
    }
}
