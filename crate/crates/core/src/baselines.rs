//! Reference dividers: native division (the oracle), reciprocal
//! multiplication with a `2w`-bit constant, and multiply-shift with a narrower
//! constant and a ±1 correction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Modulus, Result};

/// Widest `w` whose multiply-shift constants are verified over every dividend.
pub const EXHAUSTIVE_SETUP_MAX_W: u32 = 10;
/// Random dividends checked by [`mulshift_setup`] above that width.
pub const SETUP_SAMPLES: usize = 1_000_000;
const SETUP_SEED: u64 = 0x5eed_d1f1_de00_0001;

/// Ground truth `(floor(λ / q), λ mod q)`.
pub fn oracle_divrem(q: u64, lambda: u64) -> Result<(u64, u64)> {
    if q == 0 {
        return Err(Error::Parameter {
            field: "q",
            value: 0,
            bound: "q > 0".into(),
        });
    }
    Ok((lambda / q, lambda % q))
}

/// `floor(λ · mult / 2^shift)` for a multiplier of up to 66 bits, using a
/// 192-bit intermediate split into a 64-bit low limb and a 128-bit high part.
#[inline]
fn mul_shr(lambda: u64, mult: u128, shift: u32) -> u128 {
    let lo = u128::from(lambda) * (mult as u64 as u128);
    let hi = u128::from(lambda) * (mult >> 64);
    let low_limb = lo as u64;
    let upper = (lo >> 64) + hi;
    if shift >= 64 {
        upper >> (shift - 64)
    } else {
        (upper << (64 - shift)) | u128::from(low_limb >> shift)
    }
}

/// Reciprocal divider constants: `J = floor(2^(3w-1) / q) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarrettParams {
    pub q: u64,
    pub j: u128,
    pub shift: u32,
}

pub fn barrett_setup(m: &Modulus) -> BarrettParams {
    let shift = 3 * m.w() - 1;
    BarrettParams {
        q: m.q(),
        j: (1u128 << shift) / u128::from(m.q()) + 1,
        shift,
    }
}

/// Uncorrected `floor(λ·J / 2^(3w-1))`.
///
/// `J` exceeds `2^(3w-1) / q` by at most one, so this never undershoots and
/// overshoots the true quotient by at most one; it does overshoot for some
/// dividends (e.g. `q = 249`, `λ = 41582`).
#[inline]
pub fn barrett_estimate(p: &BarrettParams, lambda: u64) -> u64 {
    mul_shr(lambda, p.j, p.shift) as u64
}

/// `floor(λ / q)` from [`barrett_estimate`] plus one conditional decrement.
#[inline]
pub fn barrett_divide(p: &BarrettParams, lambda: u64) -> u64 {
    let est = barrett_estimate(p, lambda);
    if u128::from(est) * u128::from(p.q) > u128::from(lambda) {
        est - 1
    } else {
        est
    }
}

/// Multiply-shift constants: quotient estimate `floor((a·λ + b) / 2^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MulShiftParams {
    pub a: u64,
    pub b: u64,
    pub k: u32,
    /// `a` needs more than `k - w` bits.
    pub widened: bool,
}

impl MulShiftParams {
    pub fn multiplier_bits(&self) -> u32 {
        64 - self.a.leading_zeros()
    }
}

#[inline]
pub fn mulshift_estimate(p: &MulShiftParams, lambda: u64) -> u64 {
    ((u128::from(p.a) * u128::from(lambda) + u128::from(p.b)) >> p.k) as u64
}

/// Exact quotient from the multiply-shift estimate and a ±1 fix-up.
#[inline]
pub fn mulshift_divide_corrected(m: &Modulus, p: &MulShiftParams, lambda: u64) -> u64 {
    let est = mulshift_estimate(p, lambda);
    let r = i128::from(lambda) - i128::from(est) * i128::from(m.q());
    if r < 0 {
        est - 1
    } else if r >= i128::from(m.q()) {
        est + 1
    } else {
        est
    }
}

/// Picks multiply-shift constants for `m`.
///
/// Candidates are `a = ceil(2^k / q)` with `b ∈ {0, a - 1}` for `k` from
/// `w + 1` to `2w`; the first one whose estimate stays within ±1 of the true
/// quotient wins. For `w <= 10` every dividend is checked. Wider moduli must
/// satisfy a closed-form worst-case bound and pass a seeded random sample plus
/// boundary dividends. Candidates whose `a` fits in `k - w` bits are preferred;
/// when none passes, `a` is widened and the record says so.
pub fn mulshift_setup(m: &Modulus) -> Result<MulShiftParams> {
    let probes = setup_probes(m);
    for allow_wide in [false, true] {
        for k in m.w() + 1..=2 * m.w() {
            let a = ceil_pow2_div(k, m.q());
            let widened = a >> (k - m.w()) != 0;
            if widened && !allow_wide {
                continue;
            }
            for b in [0, a - 1] {
                let p = MulShiftParams { a, b, k, widened };
                if within_one(m, &p, &probes) {
                    return Ok(p);
                }
            }
        }
    }
    Err(Error::MulShiftSetup { q: m.q() })
}

fn ceil_pow2_div(k: u32, q: u64) -> u64 {
    let num = 1u128 << k;
    num.div_ceil(u128::from(q)) as u64
}

enum Probes {
    All,
    Listed(Vec<u64>),
}

fn setup_probes(m: &Modulus) -> Probes {
    if m.w() <= EXHAUSTIVE_SETUP_MAX_W {
        return Probes::All;
    }
    let q = m.q();
    let max = m.max_dividend();
    let top = m.max_quotient();
    let mut v = vec![0, 1, q - 1, q, q + 1, max, max - 1];
    for b in [1, 2, top - 1, top] {
        v.extend([b * q - 1, b * q]);
        v.extend((b * q).checked_add(q - 1).filter(|&l| l <= max));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SETUP_SEED);
    v.extend((0..SETUP_SAMPLES).map(|_| rng.gen_range(0..=max)));
    Probes::Listed(v)
}

fn within_one(m: &Modulus, p: &MulShiftParams, probes: &Probes) -> bool {
    let ok = |lambda: u64| mulshift_estimate(p, lambda).abs_diff(lambda / m.q()) <= 1;
    match probes {
        Probes::All => (0..=m.max_dividend()).all(ok),
        Probes::Listed(v) => worst_case_bound_holds(m, p) && v.iter().all(|&l| ok(l)),
    }
}

/// Sufficient condition for `0 <= estimate - floor(λ/q) <= 1` on every
/// dividend: with `a·q >= 2^k`, the estimate exceeds `λ/q` by
/// `(λ·(a·q - 2^k) + b·q) / (q·2^k)`, which must stay below one at the
/// largest dividend.
fn worst_case_bound_holds(m: &Modulus, p: &MulShiftParams) -> bool {
    let q = u128::from(m.q());
    let excess = u128::from(p.a) * q - (1u128 << p.k);
    let lhs = u128::from(m.max_dividend()) * excess + u128::from(p.b) * q;
    lhs < q << p.k
}
