//! Lists the moduli of one width with their folded term and pipeline depth.
//!
//! cargo run --example moduli -- 32

use solinas_div::Modulus;

fn main() {
    let w = std::env::args()
        .nth(1)
        .map_or(Ok(16), |s| s.parse())
        .expect("width must be an integer");
    let moduli = match Modulus::all_of_width(w) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!(
        "{:>3} {:>4} {:>12} {:>12} {:>3}",
        "u", "sign", "q", "e", "t"
    );
    for m in moduli {
        println!(
            "{:>3} {:>4} {:>12} {:>12} {:>3}",
            m.u(),
            m.sign(),
            m.q(),
            m.e(),
            m.t()
        );
    }
}
