//! Independent checks for the integration engine.
//!
//! Nothing here calls into [`crate::integrate`]: the monomial formula
//! `∫_Δ x^α dx = Π α_i! / (n+|α|)!` is written out with its own factorials,
//! and the Monte Carlo integrator only needs pointwise evaluation.

use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::poly::{ExponentVector, Polynomial};
use crate::simplex::Simplex;

/// `Π α_i! / (n+|α|)!` for `α ∈ N^n`, `n = alpha.len()`.
pub fn monomial_integral_oracle(alpha: &ExponentVector) -> BigRational {
    fn fact(k: u64) -> BigInt {
        let mut acc = BigInt::one();
        for i in 2..=k {
            acc *= i;
        }
        acc
    }
    let exps = alpha.as_slice();
    let numerator = exps.iter().fold(BigInt::one(), |acc, &a| acc * fact(u64::from(a)));
    let total: u64 = exps.iter().map(|&a| u64::from(a)).sum();
    BigRational::new(numerator, fact(exps.len() as u64 + total))
}

/// `∫_Δ f` by summing the monomial oracle over the terms of `f`.
pub fn polynomial_integral_oracle(f: &Polynomial) -> BigRational {
    f.terms()
        .map(|(alpha, c)| c * monomial_integral_oracle(alpha))
        .sum()
}

/// xoshiro256** seeded through splitmix64. Bit-identical on every platform.
#[derive(Clone, Debug)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Xoshiro256 {
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Xoshiro256 { s }
    }

    /// Independent stream `index` derived from `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut sm = seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
        Self::seed_from_u64(splitmix64(&mut sm))
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform in `(0, 1]`.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

fn float_vertices(s: &Simplex) -> Vec<Vec<f64>> {
    s.vertices()
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn sample_point(vertices: &[Vec<f64>], rng: &mut Xoshiro256, weights: &mut [f64], out: &mut [f64]) {
    // Normalised exponential spacings are symmetric-Dirichlet(1) barycentric weights.
    let mut total = 0.0;
    for w in weights.iter_mut() {
        *w = -rng.next_open01().ln();
        total += *w;
    }
    out.iter_mut().for_each(|x| *x = 0.0);
    for (w, v) in weights.iter().zip(vertices) {
        let b = w / total;
        for (x, vi) in out.iter_mut().zip(v) {
            *x += b * vi;
        }
    }
}

/// `count` i.i.d. uniform points in `s`.
pub fn sample_uniform(s: &Simplex, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let vertices = float_vertices(s);
    let n = s.dimension();
    let mut rng = Xoshiro256::seed_from_u64(seed);
    let mut weights = vec![0.0; n + 1];
    (0..count)
        .map(|_| {
            let mut p = vec![0.0; n];
            sample_point(&vertices, &mut rng, &mut weights, &mut p);
            p
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    /// Pools two independent estimates of the same integral, weighting by
    /// sample count.
    pub fn merge(&self, other: &MonteCarloEstimate) -> MonteCarloEstimate {
        let total = self.samples + other.samples;
        let wa = self.samples as f64 / total as f64;
        let wb = other.samples as f64 / total as f64;
        MonteCarloEstimate {
            mean: wa * self.mean + wb * other.mean,
            std_error: ((wa * self.std_error).powi(2) + (wb * other.std_error).powi(2)).sqrt(),
            samples: total,
        }
    }

    /// `|value - mean| ≤ k·std_error`.
    pub fn within_sigmas(&self, value: f64, k: f64) -> bool {
        (value - self.mean).abs() <= k * self.std_error
    }
}

/// Running mean/variance (Welford).
#[derive(Default)]
struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn finish(&self, volume: f64) -> MonteCarloEstimate {
        let variance = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        MonteCarloEstimate {
            mean: volume * self.mean,
            std_error: volume * (variance / self.count as f64).sqrt(),
            samples: self.count,
        }
    }
}

fn run_stream<F>(vertices: &[Vec<f64>], f: &F, count: u64, mut rng: Xoshiro256) -> Accumulator
where
    F: Fn(&[f64]) -> f64,
{
    let n = vertices.len() - 1;
    let mut weights = vec![0.0; n + 1];
    let mut point = vec![0.0; n];
    let mut acc = Accumulator::default();
    for _ in 0..count {
        sample_point(vertices, &mut rng, &mut weights, &mut point);
        acc.push(f(&point));
    }
    acc
}

/// `vol(s)·mean f` over `count` uniform samples. Panics if `count == 0`.
pub fn monte_carlo_integral<F>(s: &Simplex, f: F, count: u64, seed: u64) -> MonteCarloEstimate
where
    F: Fn(&[f64]) -> f64,
{
    assert!(count >= 1, "need at least one sample");
    let volume = s.volume().to_f64().unwrap_or(f64::NAN);
    run_stream(&float_vertices(s), &f, count, Xoshiro256::seed_from_u64(seed)).finish(volume)
}

/// Splits `count` across `streams` independently seeded generators run on
/// separate threads and pools the results. Deterministic for fixed
/// `(count, seed, streams)`.
pub fn monte_carlo_integral_parallel<F>(s: &Simplex, f: F, count: u64, seed: u64, streams: usize) -> MonteCarloEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(count >= 1, "need at least one sample");
    let streams = streams.clamp(1, count as usize);
    let volume = s.volume().to_f64().unwrap_or(f64::NAN);
    let vertices = float_vertices(s);
    let base = count / streams as u64;
    let extra = count % streams as u64;
    let estimates: Vec<MonteCarloEstimate> = thread::scope(|scope| {
        let handles: Vec<_> = (0..streams)
            .map(|k| {
                let n_k = base + u64::from((k as u64) < extra);
                let (vertices, f) = (&vertices, &f);
                scope.spawn(move || run_stream(vertices, f, n_k, Xoshiro256::stream(seed, k as u64)).finish(volume))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler panicked")).collect()
    });
    estimates
        .iter()
        .skip(1)
        .fold(estimates[0], |acc, e| acc.merge(e))
}
