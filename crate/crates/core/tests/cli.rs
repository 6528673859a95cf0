use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_solinas-div");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("SOLINAS_DIV_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn params_width_32() {
    let o = run(&["params", "--w", "32", "--u", "22", "--sign", "+1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q = 4290772993\ne = 4194303\nt = 3\n");
}

#[test]
fn params_minus_sign_spellings() {
    for s in ["-1", "minus"] {
        let o = run(&["params", "--w", "8", "--u", "7", "--sign", s]);
        assert_eq!(stdout(&o), "q = 127\ne = 129\nt = 8\n");
    }
}

#[test]
fn div_exact_multiple() {
    let o = run(&[
        "div", "--w", "8", "--u", "3", "--sign", "+1", "--lambda", "9213",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "quotient = 37\nremainder = 0\n");
}

#[test]
fn div_zero_and_hex() {
    let o = run(&["div", "--w", "8", "--u", "3", "--lambda", "0"]);
    assert_eq!(stdout(&o), "quotient = 0\nremainder = 0\n");
    let o = run(&["div", "--w", "8", "--u", "3", "--lambda", "0x61a8"]);
    assert_eq!(stdout(&o), "quotient = 100\nremainder = 100\n");
}

#[test]
fn div_hw_agrees() {
    for lambda in ["25000", "65535", "9213", "1"] {
        let sw = run(&["div", "--w", "8", "--u", "5", "--lambda", lambda]);
        let hw = run(&["div", "--w", "8", "--u", "5", "--lambda", lambda, "--hw"]);
        assert_eq!(hw.status.code(), Some(0));
        assert_eq!(stdout(&sw), stdout(&hw));
    }
}

#[test]
fn div_traces_match_golden() {
    let o = run(&[
        "div", "--w", "8", "--u", "3", "--sign", "+1", "--lambda", "9213", "--trace",
    ]);
    assert_eq!(stdout(&o), golden("div_w8_u3_plus_9213.txt"));
    let o = run(&[
        "div", "--w", "8", "--u", "3", "--lambda", "9213", "--trace", "--hw",
    ]);
    assert_eq!(stdout(&o), golden("div_hw_w8_u3_plus_9213.txt"));
}

#[test]
fn div_rejects_oversized_dividend() {
    let o = run(&["div", "--w", "8", "--u", "3", "--lambda", "65536"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["params", "--w", "8", "--u", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["params", "--w", "40", "--u", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["params", "--w", "8"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["div", "--w", "8", "--u", "3", "--lambda", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(BIN)
        .args(["params", "--w", "8", "--u", "3"])
        .env("SOLINAS_DIV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhaustive_guard_exits_3() {
    let o = run(&["verify", "--w", "16", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["census", "--w", "13"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_passes_on_regular_modulus() {
    let o = run(&["verify", "--w", "8", "--u", "5", "--sign", "+1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all dividers agree"));
}

#[test]
fn verify_reports_degenerate_modulus() {
    // q = 127 < e = 129: the pipeline can land two below the quotient
    let o = run(&["verify", "--w", "8", "--u", "7", "--sign", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("hw_divide"), "{err}");
    assert!(err.contains("lambda = 16383"), "{err}");
}

#[test]
fn verify_random_wide() {
    let o = run(&[
        "verify",
        "--w",
        "32",
        "--u",
        "16",
        "--mode",
        "random",
        "--samples",
        "2000",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn census_is_deterministic_and_matches_golden() {
    let a = run(&["census", "--w", "6"]);
    let b = run(&["census", "--w", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), golden("census_w6.txt"));

    let dir = std::env::temp_dir().join(format!("solinas-div-census-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w6.csv");
    let o = run(&["census", "--w", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn census_random_rows() {
    let o = run(&[
        "census",
        "--w",
        "20",
        "--mode",
        "random",
        "--samples",
        "500",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "w,u,sign,q,predicted_t,max_updates,argmax_lambda,updates_at_lambda_max,min_stages,sweep_kind,seed,samples"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 38);
    for r in rows {
        let (head, n) = r.rsplit_once(',').unwrap();
        assert!(head.ends_with(",RANDOM,3"), "{r}");
        // the edge set is counted along with the random draws
        assert!(n.parse::<u64>().unwrap() > 500, "{r}");
    }
}

#[test]
fn bench_runs() {
    let o = run(&["bench", "--w", "16", "--u", "9", "--iters", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["proposed", "hw-model", "barrett", "mulshift", "oracle"] {
        assert!(text.contains(name), "{text}");
    }
}
