//! Software throughput of the dividers on one modulus.
//!
//! These are wall-clock numbers for this machine's integer units; they say
//! nothing about silicon latency or area.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::{
    barrett_divide, barrett_setup, mulshift_divide_corrected, mulshift_setup, oracle_divrem,
};
use crate::{divider, hwmodel, Modulus, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub name: &'static str,
    pub divisions: u64,
    pub elapsed: Duration,
    /// Wrapping sum of all quotients; equal across paths when they agree.
    pub checksum: u64,
}

impl BenchResult {
    pub fn per_second(&self) -> f64 {
        self.divisions as f64 / self.elapsed.as_secs_f64().max(1e-12)
    }
}

fn time<F: FnMut(u64) -> u64>(name: &'static str, input: &[u64], mut f: F) -> BenchResult {
    let start = Instant::now();
    let mut checksum = 0u64;
    for &lambda in input {
        checksum = checksum.wrapping_add(f(black_box(lambda)));
    }
    BenchResult {
        name,
        divisions: input.len() as u64,
        elapsed: start.elapsed(),
        checksum: black_box(checksum),
    }
}

/// Times each divider over the same `iters` seeded random dividends.
pub fn run(m: &Modulus, iters: usize, seed: u64) -> Result<Vec<BenchResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = m.max_dividend();
    let input: Vec<u64> = (0..iters).map(|_| rng.gen_range(0..=max)).collect();
    let barrett = barrett_setup(m);
    let mulshift = mulshift_setup(m)?;
    let stages = m.t();
    let q = m.q();

    Ok(vec![
        time("proposed", &input, |l| divider::quotient(m, l).unwrap_or(0)),
        time("hw-model", &input, |l| hwmodel::hw_quotient(m, l, stages)),
        time("barrett", &input, |l| barrett_divide(&barrett, l)),
        time("mulshift", &input, |l| {
            mulshift_divide_corrected(m, &mulshift, l)
        }),
        time("oracle", &input, |l| oracle_divrem(q, l).map_or(0, |r| r.0)),
    ])
}
