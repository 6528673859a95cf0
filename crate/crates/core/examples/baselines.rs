//! Reciprocal and multiply-shift dividers next to the shift-add loop.

use solinas_div::baselines::{
    barrett_divide, barrett_estimate, barrett_setup, mulshift_divide_corrected, mulshift_estimate,
    mulshift_setup,
};
use solinas_div::divider::quotient;
use solinas_div::{Modulus, Sign};

fn main() -> solinas_div::Result<()> {
    for (w, u, sign) in [
        (8, 3, Sign::Plus),
        (16, 9, Sign::Minus),
        (32, 22, Sign::Plus),
    ] {
        let m = Modulus::new(w, u, sign)?;
        let barrett = barrett_setup(&m);
        let ms = mulshift_setup(&m)?;
        println!("q = {m}");
        println!("  reciprocal   J = {} (shift {})", barrett.j, barrett.shift);
        println!(
            "  mul-shift    a = {} ({} bits), b = {}, k = {}{}",
            ms.a,
            ms.multiplier_bits(),
            ms.b,
            ms.k,
            if ms.widened { ", widened" } else { "" }
        );
        let lambda = m.max_dividend() / 3;
        println!(
            "  lambda = {lambda}: loop {}, reciprocal {} (raw {}), mul-shift {} (raw {})",
            quotient(&m, lambda)?,
            barrett_divide(&barrett, lambda),
            barrett_estimate(&barrett, lambda),
            mulshift_divide_corrected(&m, &ms, lambda),
            mulshift_estimate(&ms, lambda)
        );
    }
    Ok(())
}
