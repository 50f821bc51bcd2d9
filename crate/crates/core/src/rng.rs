//! Deterministic random streams for the Monte Carlo harness.
//!
//! A stream is addressed by `(master seed, experiment tag, cell index,
//! replicate index)`. The address is hashed into a 128-bit xoroshiro128++
//! state, so a replicate produces the same draws regardless of thread count
//! or execution order. All floating-point paths go through `libm`, keeping
//! output bit-identical across platforms.

use crate::math::{log, sqrt};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn rotl(x: u64, k: u32) -> u64 {
    x.rotate_left(k)
}

/// xoroshiro128++ stream with a coordinate-derived state.
#[derive(Debug, Clone, PartialEq)]
pub struct Stream {
    s0: u64,
    s1: u64,
    // Spare draw from the polar method.
    pending: Option<f64>,
    /// The address hash this stream was derived from.
    pub key: u64,
}

impl Stream {
    /// Stream for a bare 64-bit seed.
    pub fn from_seed(seed: u64) -> Self {
        Self::from_key(seed)
    }

    /// Stream addressed by `(seed, tag, cell, replicate)`.
    pub fn from_coords(seed: u64, tag: u64, cell: u64, replicate: u64) -> Self {
        let mut h = seed;
        for w in [tag, cell, replicate] {
            // boost-style combine, then a splitmix round to spread the bits
            h ^= w.wrapping_add(GOLDEN).wrapping_add(h << 6).wrapping_add(h >> 2);
            let mut t = h;
            h = splitmix_next(&mut t);
        }
        Self::from_key(h)
    }

    fn from_key(key: u64) -> Self {
        let mut st = key;
        let s0 = splitmix_next(&mut st);
        let s1 = splitmix_next(&mut st);
        // xoroshiro's all-zero state is a fixed point.
        let s1 = if s0 == 0 && s1 == 0 { GOLDEN } else { s1 };
        Stream { s0, s1, pending: None, key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s0 = self.s0;
        let mut s1 = self.s1;
        let out = rotl(s0.wrapping_add(s1), 17).wrapping_add(s0);
        s1 ^= s0;
        self.s0 = rotl(s0, 49) ^ s1 ^ (s1 << 21);
        self.s1 = rotl(s1, 28);
        out
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`; never returns an endpoint.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) | 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-rate exponential variate, strictly positive.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -log(self.uniform_open())
    }

    /// Standard normal via the polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.pending.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform_open() - 1.0;
            let v = 2.0 * self.uniform_open() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = sqrt(-2.0 * log(s) / s);
                self.pending = Some(v * f);
                return u * f;
            }
        }
    }

    /// Gamma(shape, 1) variate for `shape > 0`.
    ///
    /// Marsaglia-Tsang squeeze for `shape >= 1`; smaller shapes use the
    /// Gamma(shape+1) draw boosted by `U^{1/shape}`, which avoids the badly
    /// conditioned small-shape region.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let boost = crate::math::pow(self.uniform_open(), 1.0 / shape);
            return self.gamma(shape + 1.0) * boost;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / sqrt(9.0 * d);
        loop {
            let (x, v) = loop {
                let x = self.normal();
                let v = 1.0 + c * x;
                if v > 0.0 {
                    break (x, v * v * v);
                }
            };
            let u = self.uniform_open();
            if u < 1.0 - 0.0331 * x * x * x * x {
                return d * v;
            }
            if log(u) < 0.5 * x * x + d * (1.0 - v + log(v)) {
                return d * v;
            }
        }
    }
}

/// FNV-1a hash of an experiment tag, used as the `tag` stream coordinate.
pub fn tag_hash(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}
