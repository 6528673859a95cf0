use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter `{field}` = {value} is out of range (expected {bound})")]
    Parameter {
        field: &'static str,
        value: u64,
        bound: String,
    },

    #[error("dividend {lambda} does not fit in 2w = {bits} bits")]
    DividendRange { lambda: u64, bits: u32 },

    #[error("dividend {lambda} is not a multiple of q = {q}; use floor_divide instead")]
    NotMultiple { lambda: u64, q: u64 },

    #[error("fixed-point loop for dividend {lambda} exceeded {cap} updates")]
    IterationCap { lambda: u64, cap: u32 },

    #[error("remainder correction for dividend {lambda} left b* = {b_star} out of reach")]
    Correction { lambda: u64, b_star: u64 },

    #[error("adjust unit input b* = {b_star} is not within 1 of floor({lambda} / q) = {quotient}")]
    AdjustPrecondition {
        lambda: u64,
        b_star: u64,
        quotient: u64,
    },

    #[error("multiply-shift setup found no constants within the ±1 bound for q = {q}")]
    MulShiftSetup { q: u64 },

    #[error("exhaustive sweep over 2^{bits} dividends refused (w = {w} exceeds {max})")]
    ResourceGuard { w: u32, bits: u32, max: u32 },
}
