//! Loop statistics and property checks for every modulus of one width.
//!
//! cargo run --release --example census -- 10

use solinas_div::analysis::{check_theorems, loop_census, write_csv, Sweep};
use solinas_div::Modulus;

fn main() -> solinas_div::Result<()> {
    let w = std::env::args()
        .nth(1)
        .map_or(Ok(8), |s| s.parse())
        .expect("width must be an integer");
    let sweep = if w <= 12 {
        Sweep::Exhaustive
    } else {
        Sweep::Random {
            samples: 100_000,
            seed: 1,
        }
    };

    let rows = loop_census(w, &sweep)?;
    write_csv(&rows, std::io::stdout().lock()).expect("stdout");
    println!();

    for m in Modulus::all_of_width(w)? {
        let rep = check_theorems(&m, &sweep)?;
        if !rep.all_pass() {
            print!("{rep}");
        }
    }
    Ok(())
}
