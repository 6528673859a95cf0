//! Low-complexity integer division by moduli of the form `q = 2^w - 2^u ± 1`.
//!
//! The quotient `floor(λ / q)` of a `2w`-bit dividend is found with a short
//! fixed-point iteration built only from shifts and additions, followed by a
//! one-step correction that looks at the remainder. The crate contains:
//!
//! - [`modulus`]: the validated `(w, u, sign)` parameter record.
//! - [`divider`]: the iteration itself, exact division of multiples of `q`
//!   (parity correction) and general floor division (remainder correction).
//! - [`hwmodel`]: a stage-accurate behavioral model of the pipelined
//!   datapath, including the `(w+2)`-bit adjust unit.
//! - [`baselines`]: reciprocal (Barrett) and multiply-shift dividers plus the
//!   native-division oracle.
//! - [`analysis`]: sweeps that measure iteration counts, stage sufficiency
//!   and the iteration-bound properties over whole dividend ranges.
//! - [`cli`]: the `solinas-div` command-line front end.
//!
//! ```
//! use solinas_div::{divider, Modulus, Sign};
//!
//! let m = Modulus::new(8, 3, Sign::Plus).unwrap();
//! assert_eq!(m.q(), 249);
//! let qr = divider::floor_divide(&m, 25_000).unwrap();
//! assert_eq!((qr.quotient, qr.remainder), (100, 100));
//! ```

pub mod analysis;
pub mod baselines;
pub mod bench;
pub mod cli;
pub mod divider;
mod error;
pub mod hwmodel;
pub mod modulus;

pub use error::{Error, Result};
pub use modulus::{compute_t, Modulus, Sign};
