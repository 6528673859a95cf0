//! Software throughput of each divider on one modulus.
//!
//! cargo run --release --example throughput -- 32 22

use solinas_div::{bench, Modulus, Sign};

fn main() -> solinas_div::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u32>().unwrap());
    let w = args.next().unwrap_or(32);
    let u = args.next().unwrap_or(22);
    let m = Modulus::new(w, u, Sign::Plus)?;
    println!("q = {m}");
    for r in bench::run(&m, 1_000_000, 0)? {
        println!(
            "{:<10} {:>8.2} ns/div  checksum {:#x}",
            r.name,
            1e9 / r.per_second(),
            r.checksum
        );
    }
    Ok(())
}
