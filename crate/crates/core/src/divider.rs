//! Quotient computation by fixed-point iteration.
//!
//! Write `c = floor(λ / 2^w)`. Substituting `q = 2^w - e` into `λ = b·q`
//! gives `c = f(b)` with
//!
//! ```text
//! f(x) = x + v(x),    v(x) = floor(-x·e / 2^w)
//! ```
//!
//! so the quotient is (up to ±1) a solution of `f(x) = c`. Starting from
//! `b_0 = c`, the update `b_{i+1} = b_i + (c - f(b_i))` never overshoots the
//! smallest solution and reaches it after a handful of steps. The result `b*`
//! is then corrected either by parity ([`exact_divide`], dividend known to be
//! a multiple of `q`) or by inspecting `λ - b*·q` ([`floor_divide`]).

use std::fmt;

use crate::baselines::oracle_divrem;
use crate::{Error, Modulus, Result, Sign};

/// `v(x) = floor(-x·e / 2^w)`, always `<= 0`.
///
/// `x` must be below `2^63`.
pub fn v_of(m: &Modulus, x: u64) -> i64 {
    let scaled = u128::from(x) * u128::from(m.e());
    let ceil = (scaled + (1u128 << m.w()) - 1) >> m.w();
    -(ceil as i64)
}

/// `f(x) = x + v(x)`, with `0 <= f(x) < x` for `x > 0`.
pub fn f_of(m: &Modulus, x: u64) -> i64 {
    x as i64 + v_of(m, x)
}

/// `ceil(x·e / 2^w)` evaluated as `(x << u) ∓ x` followed by a shift, the way
/// the datapath forms the product.
#[inline]
fn ceil_scaled_shift_add(m: &Modulus, x: u64) -> u64 {
    let shifted = u128::from(x) << m.u();
    let product = match m.sign() {
        Sign::Plus => shifted - u128::from(x),
        Sign::Minus => shifted + u128::from(x),
    };
    ((product + (1u128 << m.w()) - 1) >> m.w()) as u64
}

/// Hard stop for the fixed-point loop. Observed counts stay near `t + 2`.
pub fn iteration_cap(m: &Modulus) -> u32 {
    2 * m.w()
}

/// One step of the fixed-point loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iterate {
    pub index: u32,
    pub b: u64,
    pub f: u64,
    /// `c - f(b_i)`; zero only on the final iterate.
    pub delta: u64,
}

/// Complete record of one run of the fixed-point loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionTrace {
    pub lambda: u64,
    pub c: u64,
    pub iterates: Vec<Iterate>,
    /// Number of loop-body executions.
    pub updates: u32,
    pub b_star: u64,
}

/// Which final correction produced the quotient from `b*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    None,
    Parity,
    MinusOne,
    PlusOne,
    /// `b* = b - 2`. Only reachable for `u = w - 1` with the minus sign,
    /// where `e > 2^(w-1)` lets `f` stay flat for two consecutive inputs.
    PlusTwo,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::None => "none",
            Branch::Parity => "parity",
            Branch::MinusOne => "-1",
            Branch::PlusOne => "+1",
            Branch::PlusTwo => "+2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotRem {
    pub quotient: u64,
    pub remainder: u64,
    pub branch: Branch,
}

/// Runs the loop, calling `visit` for each iterate in order. Returns
/// `(b*, updates)`.
#[inline]
pub(crate) fn walk<F>(m: &Modulus, lambda: u64, mut visit: F) -> Result<(u64, u32)>
where
    F: FnMut(u32, u64, u64),
{
    let c = lambda >> m.w();
    let cap = iteration_cap(m);
    let mut b = c;
    let mut updates = 0;
    loop {
        // f(b) = b - ceil(b·e / 2^w) <= c throughout.
        let f = b - ceil_scaled_shift_add(m, b);
        visit(updates, b, f);
        if f == c {
            return Ok((b, updates));
        }
        if updates == cap {
            return Err(Error::IterationCap { lambda, cap });
        }
        b += c - f;
        updates += 1;
    }
}

/// Fixed point `b*` and the update count, without recording iterates.
pub fn fixed_point(m: &Modulus, lambda: u64) -> Result<(u64, u32)> {
    m.check_dividend(lambda)?;
    walk(m, lambda, |_, _, _| {})
}

/// Runs the loop and records every iterate.
pub fn fixed_point_quotient(m: &Modulus, lambda: u64) -> Result<DivisionTrace> {
    m.check_dividend(lambda)?;
    let c = lambda >> m.w();
    let mut iterates = Vec::with_capacity(m.t() as usize + 2);
    let (b_star, updates) = walk(m, lambda, |index, b, f| {
        iterates.push(Iterate {
            index,
            b,
            f,
            delta: c - f,
        })
    })?;
    Ok(DivisionTrace {
        lambda,
        c,
        iterates,
        updates,
        b_star,
    })
}

/// Divides a known multiple of `q`, correcting `b*` by parity: `q` is odd, so
/// `λ` and `λ / q` share their least significant bit.
pub fn exact_divide(m: &Modulus, lambda: u64) -> Result<QuotRem> {
    m.check_dividend(lambda)?;
    let (_, rem) = oracle_divrem(m.q(), lambda)?;
    if rem != 0 {
        return Err(Error::NotMultiple { lambda, q: m.q() });
    }
    let (b_star, _) = walk(m, lambda, |_, _, _| {})?;
    let fix = (lambda ^ b_star) & 1;
    Ok(QuotRem {
        quotient: b_star + fix,
        remainder: 0,
        branch: if fix == 1 {
            Branch::Parity
        } else {
            Branch::None
        },
    })
}

/// `floor(λ / q)` and the remainder, correcting `b*` by the sign and size of
/// `r* = λ - b*·q`.
pub fn floor_divide(m: &Modulus, lambda: u64) -> Result<QuotRem> {
    m.check_dividend(lambda)?;
    let (b_star, _) = walk(m, lambda, |_, _, _| {})?;
    correct(m, lambda, b_star)
}

/// Quotient only; the allocation-free path used for throughput comparisons.
#[inline]
pub fn quotient(m: &Modulus, lambda: u64) -> Result<u64> {
    floor_divide(m, lambda).map(|qr| qr.quotient)
}

fn correct(m: &Modulus, lambda: u64, b_star: u64) -> Result<QuotRem> {
    let q = i128::from(m.q());
    let r_star = i128::from(lambda) - i128::from(b_star) * q;
    let (quotient, remainder, branch) = if r_star < 0 {
        if r_star < -q {
            return Err(Error::Correction { lambda, b_star });
        }
        (b_star - 1, r_star + q, Branch::MinusOne)
    } else if r_star < q {
        (b_star, r_star, Branch::None)
    } else if r_star < 2 * q {
        (b_star + 1, r_star - q, Branch::PlusOne)
    } else if r_star < 3 * q {
        (b_star + 2, r_star - 2 * q, Branch::PlusTwo)
    } else {
        return Err(Error::Correction { lambda, b_star });
    };
    Ok(QuotRem {
        quotient,
        remainder: remainder as u64,
        branch,
    })
}

impl fmt::Display for DivisionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda = {}  c = {}", self.lambda, self.c)?;
        writeln!(
            f,
            "{:>5} {:>12} {:>12} {:>12}",
            "i", "b_i", "f(b_i)", "c-f(b_i)"
        )?;
        for it in &self.iterates {
            writeln!(
                f,
                "{:>5} {:>12} {:>12} {:>12}",
                it.index, it.b, it.f, it.delta
            )?;
        }
        writeln!(f, "updates = {}  b* = {}", self.updates, self.b_star)
    }
}
