//! Behavioral model of the pipelined divider datapath.
//!
//! Each iteration unit computes `b_{i+1} = c + floor(b_i·e / 2^w) + 1`, where
//! the product `b_i·e` is formed by shifting and adding (`e = 2^u ∓ 1`). The
//! trailing `+1` is the `D` input, hardwired because `b_i·e / 2^w` is not
//! expected to be an integer. After the last unit, the adjust unit classifies
//! `λ - b*·q` as negative, in `[0, q)`, or `>= q` using only its `w + 2` low
//! bits, and moves `b*` by -1, 0 or +1.
//!
//! The model is value-accurate per stage; carry-save internals are not
//! represented.

use std::fmt;

use crate::baselines::oracle_divrem;
use crate::{Error, Modulus, Result, Sign};

/// Control and data values seen by one iteration unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageRecord {
    pub stage_index: u32,
    pub b_in: u64,
    pub b_out: u64,
    /// 1 for `q = 2^w - 2^u + 1`, 0 for `q = 2^w - 2^u - 1`.
    pub s: bool,
    /// Carry into bit `u` of the product adder: set when `s = 1` and the low
    /// `u` bits of `b_in` are all zero.
    pub cin: bool,
    /// The forced `+1`.
    pub d: bool,
}

/// Outcome of the adjust unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adjustment {
    Decrement,
    Keep,
    Increment,
}

impl Adjustment {
    pub fn apply(self, b_star: u64) -> u64 {
        match self {
            Adjustment::Decrement => b_star.wrapping_sub(1),
            Adjustment::Keep => b_star,
            Adjustment::Increment => b_star + 1,
        }
    }
}

impl fmt::Display for Adjustment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adjustment::Decrement => "-1",
            Adjustment::Keep => "0",
            Adjustment::Increment => "+1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjustRecord {
    /// `λ`, `b*·2^u`, `∓b*`, and the two low bits of `-b*` at weight `2^w`,
    /// each reduced to `w + 2` bits.
    pub addends: [u64; 4],
    /// Sum of the addends modulo `2^(w+2)`.
    pub sum: u64,
    /// Bit `w + 1` of the sum (sign of `λ - b*·q`).
    pub msb: bool,
    /// Low `w + 1` bits of the sum compared against `q`.
    pub cmp_ge_q: bool,
    pub decision: Adjustment,
}

/// Whether the adjust unit checks its input against the oracle first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Reject `b*` that is not within one of the true quotient.
    #[default]
    Verify,
    /// Decode whatever arrives, like the hardware.
    Release,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineRun {
    pub c: u64,
    pub stages: Vec<StageRecord>,
    pub b_star: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatapathTrace {
    pub lambda: u64,
    pub c: u64,
    pub stages: Vec<StageRecord>,
    pub adjust: AdjustRecord,
    pub b_final: u64,
}

#[inline]
fn low_mask(bits: u32) -> u128 {
    (1u128 << bits) - 1
}

/// `b·e` built as `(b << u) ± b`, with the plus variant's `-b` formed as
/// `!b + 1` and the low `u` bits of the sum settled separately: the shifted
/// operand is zero there, so the only thing that crosses into bit `u` is the
/// `+1` carry, which is `cin`.
fn shift_add_product(m: &Modulus, b: u64) -> (u128, bool) {
    let u = m.u();
    let window = 2 * m.w() + 4;
    let mask = low_mask(window);
    let umask = low_mask(u);
    let b = u128::from(b);
    match m.sign() {
        Sign::Plus => {
            let inv = !b & mask;
            let low = (inv & umask) + 1;
            let cin = low >> u == 1;
            let high = (b + (inv >> u) + u128::from(cin)) & (mask >> u);
            ((high << u) | (low & umask), cin)
        }
        Sign::Minus => {
            let high = (b + (b >> u)) & (mask >> u);
            ((high << u) | (b & umask), false)
        }
    }
}

/// One iteration unit. `b_in` must stay below `2^(w+2)`.
pub fn iteration_stage(m: &Modulus, c: u64, b_in: u64, stage_index: u32) -> (u64, StageRecord) {
    let (product, cin) = shift_add_product(m, b_in);
    let b_out = c + (product >> m.w()) as u64 + 1;
    let rec = StageRecord {
        stage_index,
        b_in,
        b_out,
        s: m.sign().control_bit(),
        cin,
        d: true,
    };
    (b_out, rec)
}

/// The stage update computed with a plain multiplication.
pub fn iteration_stage_reference(m: &Modulus, c: u64, b_in: u64) -> u64 {
    c + ((u128::from(b_in) * u128::from(m.e())) >> m.w()) as u64 + 1
}

/// Stage output without the record.
#[inline]
pub fn stage_value(m: &Modulus, c: u64, b_in: u64) -> u64 {
    c + (shift_add_product(m, b_in).0 >> m.w()) as u64 + 1
}

/// Output of `stages` iteration units without recording them.
#[inline]
pub fn pipeline_value(m: &Modulus, lambda: u64, stages: u32) -> u64 {
    let c = lambda >> m.w();
    (0..stages).fold(c, |b, _| stage_value(m, c, b))
}

/// Feeds `c = floor(λ / 2^w)` through `stages` iteration units.
pub fn pipeline_quotient(m: &Modulus, lambda: u64, stages: u32) -> Result<PipelineRun> {
    m.check_dividend(lambda)?;
    if stages == 0 {
        return Err(Error::Parameter {
            field: "stages",
            value: 0,
            bound: "stages >= 1".into(),
        });
    }
    let c = lambda >> m.w();
    let mut b = c;
    let mut records = Vec::with_capacity(stages as usize);
    for i in 1..=stages {
        let (next, rec) = iteration_stage(m, c, b, i);
        records.push(rec);
        b = next;
    }
    Ok(PipelineRun {
        c,
        stages: records,
        b_star: b,
    })
}

/// The four addends whose sum is `λ - b*·q` modulo `2^(w+2)`.
pub fn adjust_addends(m: &Modulus, lambda: u64, b_star: u64) -> [u64; 4] {
    let (w, u) = (m.w(), m.u());
    let window = low_mask(w + 2) as u64;
    let padded = b_star & window;
    let neg = padded.wrapping_neg() & window;
    let shifted = ((padded & low_mask(w - u + 2) as u64) << u) & window;
    let mux = match m.sign() {
        Sign::Plus => neg,
        Sign::Minus => padded,
    };
    let top = (neg & 0b11) << w;
    [lambda & window, shifted, mux, top]
}

/// Decode of the `(w+2)`-bit residual window, without any precondition check.
pub fn adjust_decode(m: &Modulus, lambda: u64, b_star: u64) -> (u64, AdjustRecord) {
    let w = m.w();
    let window = low_mask(w + 2) as u64;
    let addends = adjust_addends(m, lambda, b_star);
    let sum = addends.iter().fold(0u64, |acc, &x| acc.wrapping_add(x)) & window;
    let msb = sum >> (w + 1) & 1 == 1;
    let cmp_ge_q = sum & (low_mask(w + 1) as u64) >= m.q();
    let decision = if msb {
        Adjustment::Decrement
    } else if cmp_ge_q {
        Adjustment::Increment
    } else {
        Adjustment::Keep
    };
    let rec = AdjustRecord {
        addends,
        sum,
        msb,
        cmp_ge_q,
        decision,
    };
    (decision.apply(b_star), rec)
}

/// Moves `b*` to the exact quotient. In [`Mode::Verify`] a `b*` more than one
/// away from `floor(λ / q)` is an error instead of a silent misdecode.
pub fn adjust_unit(
    m: &Modulus,
    lambda: u64,
    b_star: u64,
    mode: Mode,
) -> Result<(u64, AdjustRecord)> {
    m.check_dividend(lambda)?;
    if mode == Mode::Verify {
        let (quotient, _) = oracle_divrem(m.q(), lambda)?;
        if b_star.abs_diff(quotient) > 1 {
            return Err(Error::AdjustPrecondition {
                lambda,
                b_star,
                quotient,
            });
        }
    }
    Ok(adjust_decode(m, lambda, b_star))
}

/// Full datapath with `m.t()` iteration units followed by the adjust unit.
pub fn hw_divide(m: &Modulus, lambda: u64, mode: Mode) -> Result<(u64, DatapathTrace)> {
    hw_divide_with_stages(m, lambda, m.t(), mode)
}

pub fn hw_divide_with_stages(
    m: &Modulus,
    lambda: u64,
    stages: u32,
    mode: Mode,
) -> Result<(u64, DatapathTrace)> {
    let run = pipeline_quotient(m, lambda, stages)?;
    let (b_final, adjust) = adjust_unit(m, lambda, run.b_star, mode)?;
    Ok((
        b_final,
        DatapathTrace {
            lambda,
            c: run.c,
            stages: run.stages,
            adjust,
            b_final,
        },
    ))
}

/// Quotient only, release-mode decode with `stages` units.
#[inline]
pub fn hw_quotient(m: &Modulus, lambda: u64, stages: u32) -> u64 {
    adjust_decode(m, lambda, pipeline_value(m, lambda, stages)).0
}

fn bit(b: bool) -> u8 {
    b.into()
}

impl fmt::Display for DatapathTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "lambda = {}  c = {}  stages = {}",
            self.lambda,
            self.c,
            self.stages.len()
        )?;
        writeln!(
            f,
            "{:>6} {:>12} {:>12} {:>2} {:>4} {:>2}",
            "stage", "b_in", "b_out", "s", "cin", "d"
        )?;
        for s in &self.stages {
            writeln!(
                f,
                "{:>6} {:>12} {:>12} {:>2} {:>4} {:>2}",
                s.stage_index,
                s.b_in,
                s.b_out,
                bit(s.s),
                bit(s.cin),
                bit(s.d)
            )?;
        }
        let a = &self.adjust;
        writeln!(
            f,
            "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>3} {:>3} {:>8}",
            "adjust", "lambda", "b*<<u", "-+b*", "-b*[1:0]", "sum", "msb", "cmp", "decision"
        )?;
        writeln!(
            f,
            "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>3} {:>3} {:>8}",
            "",
            a.addends[0],
            a.addends[1],
            a.addends[2],
            a.addends[3],
            a.sum,
            bit(a.msb),
            bit(a.cmp_ge_q),
            a.decision
        )?;
        writeln!(f, "b = {}", self.b_final)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(w: u32, u: u32, sign: Sign) -> Modulus {
        Modulus::new(w, u, sign).unwrap()
    }

    #[test]
    fn stage_examples() {
        let a = m(8, 3, Sign::Plus);
        assert_eq!(iteration_stage(&a, 97, 97, 1).0, 100);
        assert_eq!(iteration_stage(&a, 0, 0, 1).0, 1);
        let b = m(8, 5, Sign::Plus);
        let (out, rec) = iteration_stage(&b, 255, 286, 2);
        assert_eq!(out, 290);
        assert!(rec.s && rec.d && !rec.cin);
        // 256 has its low 5 bits clear
        assert!(iteration_stage(&b, 255, 256, 1).1.cin);
        assert!(!iteration_stage(&m(8, 5, Sign::Minus), 255, 256, 1).1.cin);
    }

    #[test]
    fn shortcut_matches_multiplication() {
        for w in [3, 5, 8] {
            for mm in Modulus::all_of_width(w).unwrap() {
                for b in 0..1u64 << (w + 2) {
                    let (out, rec) = iteration_stage(&mm, 3, b, 1);
                    assert_eq!(out, iteration_stage_reference(&mm, 3, b));
                    let low_clear = b & ((1 << mm.u()) - 1) == 0;
                    assert_eq!(rec.cin, low_clear && mm.sign() == Sign::Plus);
                }
            }
        }
    }

    #[test]
    fn pipeline_examples() {
        let b = m(8, 5, Sign::Plus);
        let run = pipeline_quotient(&b, 65_535, 2).unwrap();
        assert_eq!(run.b_star, 290);
        assert_eq!(run.stages.len(), 2);
        assert_eq!(run.stages[0].b_out, 286);
        let a = m(8, 3, Sign::Plus);
        assert_eq!(pipeline_quotient(&a, 24_900, 1).unwrap().b_star, 100);
        let run = pipeline_quotient(&b, 0, b.t()).unwrap();
        assert!(run.stages.iter().all(|s| s.b_out == 1));
        assert!(pipeline_quotient(&a, 1, 0).is_err());
    }

    #[test]
    fn adjust_examples() {
        let a = m(8, 3, Sign::Plus);
        let (b, rec) = adjust_unit(&a, 9_213, 36, Mode::Verify).unwrap();
        assert_eq!((b, rec.decision), (37, Adjustment::Increment));
        let (b, rec) = adjust_unit(&a, 24_899, 100, Mode::Verify).unwrap();
        assert_eq!((b, rec.decision), (99, Adjustment::Decrement));
        assert!(rec.msb);
        let (b, rec) = adjust_unit(&a, 25_000, 100, Mode::Verify).unwrap();
        assert_eq!((b, rec.decision, rec.sum), (100, Adjustment::Keep, 100));
    }

    #[test]
    fn adjust_rejects_far_input_in_verify_mode() {
        let a = m(8, 3, Sign::Plus);
        assert_eq!(
            adjust_unit(&a, 25_000, 102, Mode::Verify),
            Err(Error::AdjustPrecondition {
                lambda: 25_000,
                b_star: 102,
                quotient: 100
            })
        );
        assert!(adjust_unit(&a, 25_000, 102, Mode::Release).is_ok());
    }

    #[test]
    fn hw_divide_examples() {
        let b = m(8, 5, Sign::Plus);
        let (q, trace) = hw_divide(&b, 65_535, Mode::Verify).unwrap();
        assert_eq!(q, 291);
        assert_eq!(trace.adjust.decision, Adjustment::Increment);
        assert_eq!(hw_divide(&b, 0, Mode::Verify).unwrap().0, 0);
        let a = m(8, 3, Sign::Plus);
        assert_eq!(hw_divide(&a, 24_900, Mode::Verify).unwrap().0, 100);
        assert_eq!(hw_quotient(&a, 24_900, 1), 100);
    }

    #[test]
    fn window_sum_is_residual_mod_window() {
        for mm in Modulus::all_of_width(6).unwrap() {
            for lambda in 0..1u64 << 12 {
                let b = lambda / mm.q();
                for b_star in b.saturating_sub(2)..=b + 2 {
                    let sum: u64 = adjust_addends(&mm, lambda, b_star).iter().sum();
                    let residual = i128::from(lambda) - i128::from(b_star) * i128::from(mm.q());
                    let window = 1i128 << 8;
                    assert_eq!(i128::from(sum) % window, residual.rem_euclid(window));
                }
            }
        }
    }
}
