//! Counter-keyed SplitMix64 streams.
//!
//! A stream is addressed by `(master seed, stream index)`. The pair is hashed
//! into a 64-bit key and the stream emits `mix64(key + j * GOLDEN)` for
//! `j = 1, 2, ...`, i.e. a SplitMix64 sequence started at `key`. Each stream has
//! period 2^64 and any stream can be opened in O(1), which lets a node's parent
//! draws be recomputed without replaying the graph.
//!
//! Changing anything in this file changes every generated dag. The golden
//! tests in `tests/golden.rs` pin the output.

/// Identifier of the generator family, printed by `--version`.
pub const GENERATOR_FAMILY: &str = "splitmix64-keyed-stream/v1";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_MUL: u64 = 0xD1B5_4A32_D192_ED03;
const MASTER_SALT: u64 = 0x6A09_E667_F3BC_C908;

#[inline(always)]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline(always)]
fn stream_key(master: u64, stream: u64) -> u64 {
    mix64(mix64(master ^ MASTER_SALT).wrapping_add(stream.wrapping_mul(STREAM_MUL)))
}

/// Deterministic pseudo-random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
    master: u64,
    index: u64,
}

impl RngStream {
    #[inline]
    pub fn new(master: u64, index: u64) -> Self {
        RngStream {
            state: stream_key(master, index),
            master,
            index,
        }
    }

    /// `(master seed, stream index)` this stream was opened with.
    pub fn origin(&self) -> (u64, u64) {
        (self.master, self.index)
    }

    #[inline(always)]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform integer on `{0, ..., bound - 1}` (Lemire's multiply-shift with
    /// rejection, so the result is exactly uniform).
    #[inline(always)]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let mut m = (self.next_u64() as u128) * (bound as u128);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                m = (self.next_u64() as u128) * (bound as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline(always)]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit exponential by inversion: `-ln(1 - U)`, never infinite.
    #[inline(always)]
    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }
}

/// Seed of the dag used by replication `rep` under `master`.
pub fn replication_seed(master: u64, rep: u64) -> u64 {
    RngStream::new(master, rep).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_origin_same_sequence() {
        let a: Vec<u64> = {
            let mut r = RngStream::new(9, 4);
            (0..16).map(|_| r.next_u64()).collect()
        };
        let mut r = RngStream::new(9, 4);
        let b: Vec<u64> = (0..16).map(|_| r.next_u64()).collect();
        assert_eq!(a, b);
        assert_eq!(r.origin(), (9, 4));
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(1, 0);
        let mut b = RngStream::new(1, 1);
        let mut c = RngStream::new(2, 0);
        let xa = a.next_u64();
        assert_ne!(xa, b.next_u64());
        assert_ne!(xa, c.next_u64());
    }

    #[test]
    fn below_one_is_zero() {
        let mut r = RngStream::new(3, 3);
        for _ in 0..100 {
            assert_eq!(r.below(1), 0);
        }
    }

    #[test]
    fn uniform_moments() {
        let mut r = RngStream::new(11, 0);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
            s += u;
            s2 += u * u;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!((mean - 0.5).abs() < 3.0 * (1.0f64 / 12.0 / n as f64).sqrt() * 1.5);
        assert!((var - 1.0 / 12.0).abs() < 2e-3);
    }

    #[test]
    fn streams_are_uncorrelated() {
        // Pearson correlation between neighbouring streams at lag 0.
        let n = 100_000;
        let (mut sx, mut sy, mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            let x = RngStream::new(5, i).uniform();
            let y = RngStream::new(5, i + 1).uniform();
            sx += x;
            sy += y;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        let nf = n as f64;
        let cov = sxy / nf - sx / nf * sy / nf;
        let r = cov / ((sxx / nf - (sx / nf).powi(2)) * (syy / nf - (sy / nf).powi(2))).sqrt();
        assert!(r.abs() < 4.0 / nf.sqrt(), "r = {r}");
    }
}
