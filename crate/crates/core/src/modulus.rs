//! Special-form moduli `q = 2^w - 2^u ± 1`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub const MIN_WIDTH: u32 = 3;
/// Widest supported modulus. Dividends then occupy at most 64 bits.
pub const MAX_WIDTH: u32 = 32;

/// Sign of the trailing `±1` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// `q = 2^w - 2^u + 1`
    Plus,
    /// `q = 2^w - 2^u - 1`
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// Datapath control bit `s`: 1 for the plus variant, 0 otherwise.
    pub fn control_bit(self) -> bool {
        matches!(self, Sign::Plus)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(format!("invalid sign `{other}` (expected +1 or -1)")),
        }
    }
}

/// Validated parameters of `q = 2^w - 2^u ± 1` with the derived constants.
///
/// `e` is the folded middle term (`2^u - 1` for [`Sign::Plus`], `2^u + 1` for
/// [`Sign::Minus`]) so that `q + e = 2^w` in both variants, and `t` is the
/// default number of pipelined iteration units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    w: u32,
    u: u32,
    sign: Sign,
    q: u64,
    e: u64,
    t: u32,
}

impl Modulus {
    pub fn new(w: u32, u: u32, sign: Sign) -> Result<Self> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&w) {
            return Err(Error::Parameter {
                field: "w",
                value: w.into(),
                bound: format!("{MIN_WIDTH} <= w <= {MAX_WIDTH}"),
            });
        }
        if u < 1 || u >= w {
            return Err(Error::Parameter {
                field: "u",
                value: u.into(),
                bound: format!("1 <= u <= {}", w - 1),
            });
        }
        let e = match sign {
            Sign::Plus => (1u64 << u) - 1,
            Sign::Minus => (1u64 << u) + 1,
        };
        Ok(Modulus {
            w,
            u,
            sign,
            q: (1u64 << w) - e,
            e,
            t: compute_t(w, u),
        })
    }

    /// Every valid modulus of width `w`, ordered by `u` then sign (plus first).
    pub fn all_of_width(w: u32) -> Result<Vec<Modulus>> {
        // Validate w even though the range below may be empty.
        Modulus::new(w, 1, Sign::Plus)?;
        let mut out = Vec::with_capacity(2 * (w as usize - 1));
        for u in 1..w {
            for sign in Sign::ALL {
                out.push(Modulus::new(w, u, sign)?);
            }
        }
        Ok(out)
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Largest admissible dividend, `2^(2w) - 1`.
    pub fn max_dividend(&self) -> u64 {
        if self.w == 32 {
            u64::MAX
        } else {
            (1u64 << (2 * self.w)) - 1
        }
    }

    /// `floor((2^(2w) - 1) / q)`, the largest quotient the divider produces.
    pub fn max_quotient(&self) -> u64 {
        self.max_dividend() / self.q
    }

    pub(crate) fn check_dividend(&self, lambda: u64) -> Result<()> {
        if lambda > self.max_dividend() {
            Err(Error::DividendRange {
                lambda,
                bits: 2 * self.w,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "2^{} - 2^{} {} 1 = {}", self.w, self.u, op, self.q)
    }
}

/// Default pipeline depth `floor(u / (w - u)) + 1`.
///
/// Panics if `u` is not in `1..w`.
pub fn compute_t(w: u32, u: u32) -> u32 {
    assert!(
        u >= 1 && u < w,
        "compute_t requires 1 <= u < w (got w={w}, u={u})"
    );
    u / (w - u) + 1
}
