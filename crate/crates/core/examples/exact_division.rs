//! Dividing known multiples of q with the parity-corrected loop.

use solinas_div::divider::{exact_divide, fixed_point_quotient};
use solinas_div::{Modulus, Sign};

fn main() -> solinas_div::Result<()> {
    let m = Modulus::new(8, 3, Sign::Plus)?;
    println!("q = {m}");

    let trace = fixed_point_quotient(&m, 9_213)?;
    print!("{trace}");
    let qr = exact_divide(&m, 9_213)?;
    println!(
        "9213 / {} = {} ({} correction)\n",
        m.q(),
        qr.quotient,
        qr.branch
    );

    let m = Modulus::new(32, 22, Sign::Plus)?;
    for b in [1u64, 12_345, m.max_quotient()] {
        let lambda = b * m.q();
        let qr = exact_divide(&m, lambda)?;
        assert_eq!(qr.quotient, b);
        println!("{lambda} / {} = {}", m.q(), qr.quotient);
    }

    match exact_divide(&m, 5) {
        Err(e) => println!("non-multiple rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
