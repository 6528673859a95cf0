//! General floor division and remainders, including the correction branch taken.

use solinas_div::divider::floor_divide;
use solinas_div::{Modulus, Sign};

fn main() -> solinas_div::Result<()> {
    let cases = [
        (8, 3, Sign::Plus, 25_000),
        (8, 5, Sign::Plus, 65_535),
        (8, 7, Sign::Minus, 16_383),
        (32, 16, Sign::Minus, u64::MAX),
        (24, 20, Sign::Plus, 123_456_789_012),
    ];
    for (w, u, sign, lambda) in cases {
        let m = Modulus::new(w, u, sign)?;
        let qr = floor_divide(&m, lambda)?;
        assert_eq!(
            (qr.quotient, qr.remainder),
            (lambda / m.q(), lambda % m.q())
        );
        println!(
            "{lambda:>20} = {:>12} * {:<12} + {:<12} [{}]",
            qr.quotient,
            m.q(),
            qr.remainder,
            qr.branch
        );
    }
    Ok(())
}
