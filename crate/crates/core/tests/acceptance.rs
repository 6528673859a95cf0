//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the summary lines always reach the
//! console. Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use solinas_div::analysis::{
    self, Path, Sweep, PROP_B_STAR_RANGE, PROP_F_CHAIN, PROP_ITERATE_BOUND, PROP_UPDATE_BOUND,
};
use solinas_div::{bench, compute_t, Modulus, Sign};

const RANDOM_SAMPLES: u64 = 1_000_000;
const RANDOM_SEED: u64 = 0x00c0_ffee;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn moduli(w: u32) -> Vec<Modulus> {
    Modulus::all_of_width(w).unwrap()
}

fn label(m: &Modulus) -> String {
    format!("(w={}, u={}, {})", m.w(), m.u(), m.sign())
}

fn oracle_equivalence(widths: &[u32], sweep: Sweep) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for &w in widths {
        for m in moduli(w) {
            let rep = analysis::verify_equivalence(&m, &sweep).unwrap();
            checked += rep.dividends;
            for p in Path::ALL {
                let t = rep.mismatch(p);
                if let Some(l) = t.first {
                    failures.push(format!(
                        "{} {}: {} mismatches, first lambda = {l}",
                        p.name(),
                        label(&m),
                        t.violations
                    ));
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{checked} dividends, 0 mismatches")
        } else {
            failures.join("; ")
        },
    }
}

fn exhaustive_w8() -> Outcome {
    oracle_equivalence(&[8], Sweep::Exhaustive)
}

fn randomized_wide() -> Outcome {
    oracle_equivalence(
        &[16, 24, 31, 32],
        Sweep::Random {
            samples: RANDOM_SAMPLES,
            seed: RANDOM_SEED,
        },
    )
}

fn t_buckets() -> Outcome {
    let bad: Vec<u32> = (1..32)
        .filter(|&u| {
            let expect = match u {
                1..=15 => 1,
                16..=21 => 2,
                22..=23 => 3,
                _ => return false,
            };
            compute_t(32, u) != expect
        })
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("u = 1..=23 checked, wrong t at {bad:?}"),
    }
}

fn theorem_properties() -> Outcome {
    let names = [
        PROP_F_CHAIN,
        PROP_ITERATE_BOUND,
        PROP_UPDATE_BOUND,
        PROP_B_STAR_RANGE,
    ];
    let mut violations = [0u64; 4];
    let mut first: [Option<String>; 4] = Default::default();
    for w in 3..=10 {
        for m in moduli(w) {
            let rep = analysis::check_theorems(&m, &Sweep::Exhaustive).unwrap();
            for (i, name) in names.iter().enumerate() {
                let t = rep.property(name).unwrap().tally;
                violations[i] += t.violations;
                if let (None, Some(l)) = (&first[i], t.first) {
                    first[i] = Some(format!("{} lambda={l}", label(&m)));
                }
            }
        }
    }
    let detail = names
        .iter()
        .zip(violations.iter().zip(&first))
        .map(|(n, (v, f))| match f {
            None => format!("{n}: 0"),
            Some(f) => format!("{n}: {v} (first {f})"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome {
        pass: violations.iter().all(|&v| v == 0),
        detail,
    }
}

fn stage_sufficiency() -> Outcome {
    let mut excess = Vec::new();
    for m in moduli(8) {
        let stats = analysis::survey(&m, &Sweep::Exhaustive).unwrap();
        let k = stats.min_stages();
        if k.is_none_or(|k| k > m.t()) {
            let at_t = stats.stage_failure(m.t());
            excess.push(format!(
                "{} t={} min={} lambda={}",
                label(&m),
                m.t(),
                k.map_or("none".into(), |k| k.to_string()),
                at_t.first.unwrap_or(0)
            ));
        }
    }
    Outcome {
        pass: excess.is_empty(),
        detail: if excess.is_empty() {
            "min stages <= t for all 14 moduli".into()
        } else {
            excess.join("; ")
        },
    }
}

fn parity_correction() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for w in [8, 10] {
        for m in moduli(w) {
            let (n, t) = analysis::verify_exact_multiples(&m).unwrap();
            checked += n;
            if let Some(l) = t.first {
                failures.push(format!(
                    "{} {} mismatches, first lambda={l}",
                    label(&m),
                    t.violations
                ));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{checked} multiples, 0 mismatches")
        } else {
            failures.join("; ")
        },
    }
}

fn mulshift_slack() -> Outcome {
    let mut failures = Vec::new();
    for m in moduli(8) {
        let rep = analysis::verify_equivalence(&m, &Sweep::Exhaustive).unwrap();
        if let Some(l) = rep.mulshift_slack.first {
            failures.push(format!("{} lambda={l}", label(&m)));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "estimate within 1 of the quotient for every lambda < 2^16".into()
        } else {
            failures.join("; ")
        },
    }
}

fn adjust_window() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for m in moduli(8) {
        let (n, t) = analysis::verify_adjust_window(&m, &Sweep::Exhaustive).unwrap();
        checked += n;
        if let Some(l) = t.first {
            failures.push(format!("{} lambda={l}", label(&m)));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{checked} (lambda, b*) pairs agree with full width")
        } else {
            failures.join("; ")
        },
    }
}

fn bench_w32() {
    let m = Modulus::new(32, 22, Sign::Plus).unwrap();
    let results = bench::run(&m, 200_000, 1).unwrap();
    let rate = |name| {
        results
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.per_second())
            .unwrap()
    };
    println!(
        "INFO bench w=32 u=22: proposed {:.2e}/s, barrett {:.2e}/s, ratio {:.2}",
        rate("proposed"),
        rate("barrett"),
        rate("proposed") / rate("barrett")
    );
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence, w=8 exhaustive", exhaustive_w8),
        (
            "oracle equivalence, w in {16,24,31,32} random",
            randomized_wide,
        ),
        ("t buckets at w=32", t_buckets),
        ("loop properties, w<=10 exhaustive", theorem_properties),
        ("stage sufficiency, w=8", stage_sufficiency),
        ("parity correction, w in {8,10}", parity_correction),
        ("multiply-shift slack, w=8", mulshift_slack),
        ("windowed adjust soundness, w=8", adjust_window),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "{} criterion {}: {name} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if filter.is_empty() || filter.iter().any(|f| "bench".contains(f.as_str())) {
        bench_w32();
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
