//! Bit-level model of the pipelined divider: stage records and the adjust unit.
//!
//! cargo run --example datapath -- 8 5 +1 60000

use solinas_div::hwmodel::{hw_divide, pipeline_quotient, Mode};
use solinas_div::{Modulus, Sign};

fn main() -> solinas_div::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (w, u, sign, lambda) = match args.as_slice() {
        [w, u, s, l] => (
            w.parse().unwrap(),
            u.parse().unwrap(),
            s.parse::<Sign>().unwrap(),
            l.parse().unwrap(),
        ),
        _ => (8, 5, Sign::Plus, 60_000),
    };
    let m = Modulus::new(w, u, sign)?;
    println!("q = {m}, t = {}\n", m.t());

    let (b, trace) = hw_divide(&m, lambda, Mode::Verify)?;
    print!("{trace}");
    println!("oracle: {}\n", lambda / m.q());
    assert_eq!(b, lambda / m.q());

    // deeper pipelines settle on the same b*
    for k in 1..=m.t() + 2 {
        let run = pipeline_quotient(&m, lambda, k)?;
        println!("{k} stage(s): b* = {}", run.b_star);
    }
    Ok(())
}
