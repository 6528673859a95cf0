//! Dividend sweeps that measure the fixed-point loop and the datapath.
//!
//! A sweep visits every dividend of one modulus (or a seeded random sample
//! plus a fixed edge set) once and folds everything of interest into a
//! [`SweepStats`]: iteration counts, which pipeline depths decode correctly,
//! and violations of the iteration-bound properties. Shards are merged with
//! associative, commutative rules (sums, bitwise or, and smallest-λ tie
//! breaks), so the result does not depend on how rayon splits the work.

use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{
    barrett_divide, barrett_estimate, barrett_setup, mulshift_divide_corrected, mulshift_estimate,
    mulshift_setup,
};
use crate::divider::{self, walk};
use crate::hwmodel::{adjust_decode, pipeline_value, stage_value};
use crate::{Error, Modulus, Result, Sign};

/// Widest modulus that may be swept exhaustively (`2^24` dividends).
pub const EXHAUSTIVE_MAX_W: u32 = 12;
/// Deepest pipeline considered when searching for the minimum stage count.
pub const MAX_STAGES: u32 = 64;

pub const CSV_HEADER: &str =
    "w,u,sign,q,predicted_t,max_updates,argmax_lambda,updates_at_lambda_max,min_stages,sweep_kind,seed,samples";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Exhaustive,
    /// `samples` uniform dividends from a ChaCha8 stream seeded with `seed`,
    /// plus the edge set from [`edge_dividends`].
    Random {
        samples: u64,
        seed: u64,
    },
}

impl Sweep {
    pub fn kind(&self) -> &'static str {
        match self {
            Sweep::Exhaustive => "EXHAUSTIVE",
            Sweep::Random { .. } => "RANDOM",
        }
    }

    pub fn check_width(&self, w: u32) -> Result<()> {
        if matches!(self, Sweep::Exhaustive) && w > EXHAUSTIVE_MAX_W {
            return Err(Error::ResourceGuard {
                w,
                bits: 2 * w,
                max: EXHAUSTIVE_MAX_W,
            });
        }
        Ok(())
    }
}

/// Structured dividends every random sweep includes.
pub fn edge_dividends(m: &Modulus) -> Vec<u64> {
    let q = m.q();
    let max = m.max_dividend();
    let top = m.max_quotient();
    let mut v = vec![0, 1, q - 1, q, q + 1, (1 << m.w()) - 1, 1 << m.w(), max];
    for b in [1, 2, top - 1, top] {
        let bq = b * q;
        v.extend([bq - 1, bq]);
        if bq < max {
            v.push(bq + 1);
        }
    }
    v.sort_unstable();
    v.dedup();
    v
}

enum Dividends {
    All(u64),
    Listed(Vec<u64>),
}

impl Dividends {
    fn new(m: &Modulus, sweep: &Sweep) -> Result<Self> {
        sweep.check_width(m.w())?;
        Ok(match *sweep {
            Sweep::Exhaustive => Dividends::All(m.max_dividend()),
            Sweep::Random { samples, seed } => {
                let max = m.max_dividend();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut v = edge_dividends(m);
                v.extend((0..samples).map(|_| rng.gen_range(0..=max)));
                Dividends::Listed(v)
            }
        })
    }

    fn fold<A, I, S, M>(&self, init: I, step: S, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        S: Fn(A, u64) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        match self {
            Dividends::All(max) => (0..=*max)
                .into_par_iter()
                .fold(&init, &step)
                .reduce(&init, &merge),
            Dividends::Listed(v) => v
                .par_iter()
                .fold(&init, |acc, &l| step(acc, l))
                .reduce(&init, &merge),
        }
    }
}

/// Violation count and the smallest offending dividend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub violations: u64,
    pub first: Option<u64>,
}

impl Tally {
    fn hit(&mut self, lambda: u64) {
        self.violations += 1;
        self.first = Some(self.first.map_or(lambda, |f| f.min(lambda)));
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            violations: self.violations + other.violations,
            first: match (self.first, other.first) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Everything a single sweep over one modulus records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepStats {
    pub dividends: u64,
    pub max_updates: u32,
    pub argmax_lambda: u64,
    /// Loop exceeded its iteration cap.
    pub non_terminating: Tally,
    /// `f(b_{i-1}) < f(b_i) <= c` along every trace.
    pub f_chain: Tally,
    /// `f(b_{i-1}) <= f(b_i) <= c` along every trace.
    pub f_chain_weak: Tally,
    /// Iterates never exceed `λ / q` for multiples of `q`, nor `floor(λ/q) + 1`
    /// otherwise.
    pub iterate_bound: Tally,
    /// `updates(λ) <= updates(2^(2w) - 1)` over every swept dividend.
    pub update_bound: Tally,
    /// The same restricted to multiples of `q`.
    pub update_bound_multiples: Tally,
    /// `b*` in `{b-1, b}` for multiples, `{b-1, b, b+1}` otherwise.
    pub b_star_range: Tally,
    /// Per pipeline depth `k` (index `k - 1`): dividends where `k` iteration
    /// units plus the adjust unit miss the quotient.
    pub stage_failures: Vec<Tally>,
}

impl SweepStats {
    fn empty() -> Self {
        SweepStats {
            dividends: 0,
            max_updates: 0,
            argmax_lambda: 0,
            non_terminating: Tally::default(),
            f_chain: Tally::default(),
            f_chain_weak: Tally::default(),
            iterate_bound: Tally::default(),
            update_bound: Tally::default(),
            update_bound_multiples: Tally::default(),
            b_star_range: Tally::default(),
            stage_failures: vec![Tally::default(); MAX_STAGES as usize],
        }
    }

    fn merge(self, other: SweepStats) -> SweepStats {
        let (max_updates, argmax_lambda) = match self.max_updates.cmp(&other.max_updates) {
            std::cmp::Ordering::Greater => (self.max_updates, self.argmax_lambda),
            std::cmp::Ordering::Less => (other.max_updates, other.argmax_lambda),
            std::cmp::Ordering::Equal if self.dividends == 0 => {
                (other.max_updates, other.argmax_lambda)
            }
            std::cmp::Ordering::Equal if other.dividends == 0 => {
                (self.max_updates, self.argmax_lambda)
            }
            std::cmp::Ordering::Equal => (
                self.max_updates,
                self.argmax_lambda.min(other.argmax_lambda),
            ),
        };
        SweepStats {
            dividends: self.dividends + other.dividends,
            max_updates,
            argmax_lambda,
            non_terminating: self.non_terminating.merge(other.non_terminating),
            f_chain: self.f_chain.merge(other.f_chain),
            f_chain_weak: self.f_chain_weak.merge(other.f_chain_weak),
            iterate_bound: self.iterate_bound.merge(other.iterate_bound),
            update_bound: self.update_bound.merge(other.update_bound),
            update_bound_multiples: self
                .update_bound_multiples
                .merge(other.update_bound_multiples),
            b_star_range: self.b_star_range.merge(other.b_star_range),
            stage_failures: self
                .stage_failures
                .into_iter()
                .zip(other.stage_failures)
                .map(|(a, b)| a.merge(b))
                .collect(),
        }
    }

    /// Smallest pipeline depth that decoded every swept dividend.
    pub fn min_stages(&self) -> Option<u32> {
        self.stage_failures
            .iter()
            .position(Tally::passed)
            .map(|i| i as u32 + 1)
    }

    pub fn stage_failure(&self, stages: u32) -> Tally {
        self.stage_failures[stages as usize - 1]
    }

    fn observe(&mut self, m: &Modulus, n_max: u32, lambda: u64) {
        self.dividends += 1;
        let (b, r) = (lambda / m.q(), lambda % m.q());
        let multiple = r == 0;
        let c = lambda >> m.w();

        let mut prev_f: Option<u64> = None;
        let mut chain_ok = true;
        let mut weak_ok = true;
        let mut bound_ok = true;
        let bound = if multiple { b } else { b + 1 };
        let res = walk(m, lambda, |_, bi, f| {
            if f > c || prev_f.is_some_and(|p| p > f) {
                weak_ok = false;
            }
            if f > c || prev_f.is_some_and(|p| p >= f) {
                chain_ok = false;
            }
            if bi > bound {
                bound_ok = false;
            }
            prev_f = Some(f);
        });
        let Ok((b_star, updates)) = res else {
            self.non_terminating.hit(lambda);
            return;
        };
        if !chain_ok {
            self.f_chain.hit(lambda);
        }
        if !weak_ok {
            self.f_chain_weak.hit(lambda);
        }
        if !bound_ok {
            self.iterate_bound.hit(lambda);
        }
        if updates > n_max {
            self.update_bound.hit(lambda);
            if multiple {
                self.update_bound_multiples.hit(lambda);
            }
        }
        let in_range = if multiple {
            b_star == b || b_star + 1 == b
        } else {
            b_star.abs_diff(b) <= 1
        };
        if !in_range {
            self.b_star_range.hit(lambda);
        }
        if updates > self.max_updates
            || (updates == self.max_updates && lambda < self.argmax_lambda)
        {
            self.max_updates = updates;
            self.argmax_lambda = lambda;
        }
        if self.dividends == 1 {
            self.max_updates = updates;
            self.argmax_lambda = lambda;
        }

        self.observe_stages(m, lambda, b, c);
    }

    fn observe_stages(&mut self, m: &Modulus, lambda: u64, b: u64, c: u64) {
        let mut x = c;
        for k in 1..=MAX_STAGES {
            let next = stage_value(m, c, x);
            let ok = next.abs_diff(b) <= 1 && adjust_decode(m, lambda, next).0 == b;
            if next == x {
                if !ok {
                    for t in &mut self.stage_failures[k as usize - 1..] {
                        t.hit(lambda);
                    }
                }
                return;
            }
            if !ok {
                self.stage_failures[k as usize - 1].hit(lambda);
            }
            x = next;
        }
    }
}

/// Sweeps one modulus and gathers [`SweepStats`].
pub fn survey(m: &Modulus, sweep: &Sweep) -> Result<SweepStats> {
    let dividends = Dividends::new(m, sweep)?;
    let (_, n_max) = divider::fixed_point(m, m.max_dividend())?;
    Ok(dividends.fold(
        SweepStats::empty,
        |mut acc, lambda| {
            acc.observe(m, n_max, lambda);
            acc
        },
        SweepStats::merge,
    ))
}

/// One line of the census table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub w: u32,
    pub u: u32,
    pub sign: Sign,
    pub q: u64,
    pub predicted_t: u32,
    pub max_updates: u32,
    pub argmax_lambda: u64,
    pub updates_at_lambda_max: u32,
    /// `None` when no depth up to [`MAX_STAGES`] decodes every dividend.
    pub min_stages: Option<u32>,
    pub sweep: Sweep,
    pub samples: u64,
}

impl CensusRow {
    /// The measured minimum depth exceeds `t`, or no depth works.
    pub fn stages_exceed_prediction(&self) -> bool {
        self.min_stages.is_none_or(|k| k > self.predicted_t)
    }

    /// Observed loop updates beyond `t`.
    pub fn iteration_slack(&self) -> i64 {
        i64::from(self.max_updates) - i64::from(self.predicted_t)
    }

    pub fn to_csv_line(&self) -> String {
        let seed = match self.sweep {
            Sweep::Exhaustive => 0,
            Sweep::Random { seed, .. } => seed,
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.w,
            self.u,
            self.sign,
            self.q,
            self.predicted_t,
            self.max_updates,
            self.argmax_lambda,
            self.updates_at_lambda_max,
            self.min_stages.unwrap_or(0),
            self.sweep.kind(),
            seed,
            self.samples
        )
    }
}

pub fn census_row(m: &Modulus, sweep: &Sweep) -> Result<CensusRow> {
    let stats = survey(m, sweep)?;
    let (_, at_max) = divider::fixed_point(m, m.max_dividend())?;
    Ok(CensusRow {
        w: m.w(),
        u: m.u(),
        sign: m.sign(),
        q: m.q(),
        predicted_t: m.t(),
        max_updates: stats.max_updates,
        argmax_lambda: stats.argmax_lambda,
        updates_at_lambda_max: at_max,
        min_stages: stats.min_stages(),
        sweep: *sweep,
        samples: stats.dividends,
    })
}

/// One row per `(u, sign)` of width `w`, ordered by `u` then sign.
pub fn loop_census(w: u32, sweep: &Sweep) -> Result<Vec<CensusRow>> {
    sweep.check_width(w)?;
    Modulus::all_of_width(w)?
        .iter()
        .map(|m| census_row(m, sweep))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[CensusRow], mut out: W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.to_csv_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Smallest depth `k >= 1` for which the pipeline plus adjust unit returns
/// the exact quotient on every swept dividend.
pub fn min_sufficient_stages(m: &Modulus, sweep: &Sweep) -> Result<Option<u32>> {
    Ok(survey(m, sweep)?.min_stages())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub modulus: Modulus,
    pub dividends: u64,
    pub predicted_t: u32,
    pub max_updates: u32,
    pub updates_at_lambda_max: u32,
    pub properties: Vec<PropertyCheck>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.tally.passed())
    }

    pub fn property(&self, name: &str) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// `max_updates - t`: how far the exact fixed point lies beyond `t` steps.
    pub fn iteration_slack(&self) -> i64 {
        i64::from(self.max_updates) - i64::from(self.predicted_t)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "q = {}  dividends = {}  t = {}  max updates = {}  updates at max = {}",
            self.modulus,
            self.dividends,
            self.predicted_t,
            self.max_updates,
            self.updates_at_lambda_max
        )?;
        for p in &self.properties {
            match p.tally.first {
                None => writeln!(f, "  {:<28} pass", p.name)?,
                Some(l) => writeln!(
                    f,
                    "  {:<28} FAIL  {} violations, first at lambda = {l}",
                    p.name, p.tally.violations
                )?,
            }
        }
        Ok(())
    }
}

pub const PROP_TERMINATION: &str = "termination";
pub const PROP_F_CHAIN: &str = "f strictly increasing";
pub const PROP_F_CHAIN_WEAK: &str = "f nondecreasing";
pub const PROP_ITERATE_BOUND: &str = "iterate bound";
pub const PROP_UPDATE_BOUND: &str = "updates <= updates(max)";
pub const PROP_UPDATE_BOUND_MULTIPLES: &str = "updates <= updates(max) | q";
pub const PROP_B_STAR_RANGE: &str = "b* range";

/// Checks the loop properties over a sweep; violations are reported, not
/// raised.
pub fn check_theorems(m: &Modulus, sweep: &Sweep) -> Result<TheoremReport> {
    let stats = survey(m, sweep)?;
    Ok(report_from_stats(m, &stats))
}

/// Same checks over an explicit list of dividends.
pub fn check_theorems_on(m: &Modulus, dividends: &[u64]) -> Result<TheoremReport> {
    for &l in dividends {
        m.check_dividend(l)?;
    }
    let (_, n_max) = divider::fixed_point(m, m.max_dividend())?;
    let stats = Dividends::Listed(dividends.to_vec()).fold(
        SweepStats::empty,
        |mut acc, lambda| {
            acc.observe(m, n_max, lambda);
            acc
        },
        SweepStats::merge,
    );
    Ok(report_from_stats(m, &stats))
}

fn report_from_stats(m: &Modulus, stats: &SweepStats) -> TheoremReport {
    let at_max = divider::fixed_point(m, m.max_dividend())
        .map(|(_, n)| n)
        .unwrap_or(u32::MAX);
    TheoremReport {
        modulus: *m,
        dividends: stats.dividends,
        predicted_t: m.t(),
        max_updates: stats.max_updates,
        updates_at_lambda_max: at_max,
        properties: vec![
            PropertyCheck {
                name: PROP_TERMINATION,
                tally: stats.non_terminating,
            },
            PropertyCheck {
                name: PROP_F_CHAIN,
                tally: stats.f_chain,
            },
            PropertyCheck {
                name: PROP_F_CHAIN_WEAK,
                tally: stats.f_chain_weak,
            },
            PropertyCheck {
                name: PROP_ITERATE_BOUND,
                tally: stats.iterate_bound,
            },
            PropertyCheck {
                name: PROP_UPDATE_BOUND,
                tally: stats.update_bound,
            },
            PropertyCheck {
                name: PROP_UPDATE_BOUND_MULTIPLES,
                tally: stats.update_bound_multiples,
            },
            PropertyCheck {
                name: PROP_B_STAR_RANGE,
                tally: stats.b_star_range,
            },
        ],
    }
}

/// Dividers compared against native division by [`verify_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    FloorDivide,
    HwDivide,
    Barrett,
    MulShift,
}

impl Path {
    pub const ALL: [Path; 4] = [
        Path::FloorDivide,
        Path::HwDivide,
        Path::Barrett,
        Path::MulShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Path::FloorDivide => "floor_divide",
            Path::HwDivide => "hw_divide",
            Path::Barrett => "barrett",
            Path::MulShift => "mulshift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub modulus: Modulus,
    pub dividends: u64,
    pub stages: u32,
    /// Indexed like [`Path::ALL`].
    pub mismatches: [Tally; 4],
    /// Uncorrected multiply-shift estimate more than one away.
    pub mulshift_slack: Tally,
    /// Uncorrected reciprocal estimate differs from the quotient.
    pub barrett_raw: Tally,
}

impl EquivalenceReport {
    pub fn mismatch(&self, path: Path) -> Tally {
        self.mismatches[path as usize]
    }

    pub fn all_match(&self) -> bool {
        self.mismatches.iter().all(Tally::passed)
    }

    /// First failing path and dividend.
    pub fn first_counterexample(&self) -> Option<(Path, u64)> {
        Path::ALL
            .iter()
            .find_map(|&p| self.mismatch(p).first.map(|l| (p, l)))
    }
}

/// Runs all four dividers against native division over a sweep. The datapath
/// uses `m.t()` stages with verify-mode adjust, so an out-of-range `b*`
/// counts as a mismatch.
pub fn verify_equivalence(m: &Modulus, sweep: &Sweep) -> Result<EquivalenceReport> {
    let dividends = Dividends::new(m, sweep)?;
    let barrett = barrett_setup(m);
    let mulshift = mulshift_setup(m)?;
    let stages = m.t();
    type Acc = ([Tally; 4], Tally, Tally, u64);
    let init = || -> Acc { Default::default() };
    let (mismatches, mulshift_slack, barrett_raw, n) = dividends.fold(
        init,
        |mut acc: Acc, lambda| {
            let b = lambda / m.q();
            let got = [
                divider::quotient(m, lambda).ok(),
                {
                    let b_star = pipeline_value(m, lambda, stages);
                    (b_star.abs_diff(b) <= 1).then(|| adjust_decode(m, lambda, b_star).0)
                },
                Some(barrett_divide(&barrett, lambda)),
                Some(mulshift_divide_corrected(m, &mulshift, lambda)),
            ];
            for (tally, value) in acc.0.iter_mut().zip(got) {
                if value != Some(b) {
                    tally.hit(lambda);
                }
            }
            if mulshift_estimate(&mulshift, lambda).abs_diff(b) > 1 {
                acc.1.hit(lambda);
            }
            if barrett_estimate(&barrett, lambda) != b {
                acc.2.hit(lambda);
            }
            acc.3 += 1;
            acc
        },
        |a: Acc, b: Acc| {
            let mut m = a.0;
            for (x, y) in m.iter_mut().zip(b.0) {
                *x = x.merge(y);
            }
            (m, a.1.merge(b.1), a.2.merge(b.2), a.3 + b.3)
        },
    );
    Ok(EquivalenceReport {
        modulus: *m,
        dividends: n,
        stages,
        mismatches,
        mulshift_slack,
        barrett_raw,
    })
}

/// Every multiple `b·q < 2^(2w)` through [`divider::exact_divide`]; returns
/// the number checked and the mismatches.
pub fn verify_exact_multiples(m: &Modulus) -> Result<(u64, Tally)> {
    let top = m.max_quotient();
    let tally = (0..=top)
        .into_par_iter()
        .fold(Tally::default, |mut t, b| {
            let lambda = b * m.q();
            if divider::exact_divide(m, lambda).map(|r| r.quotient) != Ok(b) {
                t.hit(lambda);
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    Ok((top + 1, tally))
}

/// Cross-checks the adjust unit's windowed decode against the full-width
/// residual `λ - b*·q` for `b*` in `{b-1, b, b+1}` (where representable):
/// the sign bit must match `λ - b*·q < 0` and the comparison must match
/// `λ - b*·q >= q`.
pub fn verify_adjust_window(m: &Modulus, sweep: &Sweep) -> Result<(u64, Tally)> {
    let dividends = Dividends::new(m, sweep)?;
    let window = 1i128 << (m.w() + 2);
    let q = i128::from(m.q());
    let (n, tally) = dividends.fold(
        || (0u64, Tally::default()),
        |(mut n, mut t), lambda| {
            let b = lambda / m.q();
            for b_star in b.saturating_sub(1)..=b + 1 {
                n += 1;
                let (_, rec) = adjust_decode(m, lambda, b_star);
                let residual = i128::from(lambda) - i128::from(b_star) * q;
                let sum = i128::from(rec.sum);
                let signed_sum = if rec.msb { sum - window } else { sum };
                let ok = rec.msb == (residual < 0)
                    && (residual < 0 || rec.cmp_ge_q == (residual >= q))
                    && signed_sum == residual
                    && sum == residual.rem_euclid(window);
                if !ok {
                    t.hit(lambda);
                }
            }
            (n, t)
        },
        |a, b| (a.0 + b.0, a.1.merge(b.1)),
    );
    Ok((n, tally))
}
