//! Property suites run by `uglov verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use uglov::bijection::psi_recursive;
use uglov::canonical::degree_max_term;
use uglov::crystal::{enumerate_levels, is_flotw};
use uglov::{upsilon, Bipartition, Charge, Modulus, NodeOrder};

use crate::{json, CliError, Format, Output, Result};

// Failures beyond this many are counted but not listed.
const LISTED_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Main,
    Flotw,
    Stabilize,
    DegreeMax,
    All,
}

/// `a..b` (both ends included), `a..=b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InclusiveRange {
    lo: i64,
    hi: i64,
}

impl InclusiveRange {
    fn values(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for InclusiveRange {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let parse = |s: &str| s.trim().parse::<i64>().map_err(|e| format!("{s:?}: {e}"));
        let (lo, hi) = match text.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(text)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {text}"));
        }
        Ok(InclusiveRange { lo, hi })
    }
}

impl fmt::Display for InclusiveRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Moduli to test, e.g. `2..4` (inclusive).
    #[arg(long, default_value = "2..4")]
    e: InclusiveRange,
    /// Ranks to test, e.g. `0..8` (inclusive).
    #[arg(long, default_value = "0..6")]
    n: InclusiveRange,
    /// Range for s0 and s1; defaults to `0..e-1`.
    #[arg(long, allow_hyphen_values = true)]
    charges: Option<InclusiveRange>,
    /// Stop after visiting this many bipartitions.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Default, Serialize)]
struct SuiteReport {
    suite: String,
    checked: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Report {
    complete: bool,
    visits: usize,
    suites: Vec<SuiteReport>,
}

struct Grid<'a> {
    args: &'a VerifyArgs,
    visits: AtomicUsize,
    exhausted: AtomicBool,
}

impl Grid<'_> {
    fn moduli(&self) -> Vec<i64> {
        self.args.e.values().collect()
    }

    fn max_n(&self) -> usize {
        self.args.n.hi.max(0) as usize
    }

    fn ranks(&self) -> impl Iterator<Item = usize> {
        (self.args.n.lo.max(0) as usize)..=self.max_n()
    }

    /// Charges `0 <= s0 <= s1` inside the requested range; `window` also
    /// requires `s1 < e`.
    fn charges(&self, e: i64, window: bool) -> Vec<Charge> {
        let range = self.args.charges.unwrap_or(InclusiveRange { lo: 0, hi: e - 1 });
        let mut out = Vec::new();
        for s0 in range.values().filter(|&s| s >= 0) {
            for s1 in range.values().filter(|&s| s >= s0 && (!window || s < e)) {
                out.push(Charge::new(s0, s1));
            }
        }
        out
    }

    /// Records `count` visits; false once the budget is spent.
    fn spend(&self, count: usize) -> bool {
        let before = self.visits.fetch_add(count, Ordering::Relaxed);
        if before + count > self.args.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            false
        } else {
            true
        }
    }

    fn out_of_budget(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}

#[derive(Default)]
struct Tally {
    checked: AtomicUsize,
    failures: Mutex<Vec<String>>,
}

impl Tally {
    fn pass(&self) {
        self.checked.fetch_add(1, Ordering::Relaxed);
    }

    fn fail(&self, what: String) {
        self.checked.fetch_add(1, Ordering::Relaxed);
        self.failures.lock().expect("no panics while holding the lock").push(what);
    }

    fn check(&self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(what())
        }
    }

    fn into_report(self, suite: &str, notes: Vec<String>) -> SuiteReport {
        let mut failures = self.failures.into_inner().expect("no poisoned lock");
        failures.sort();
        let failed = failures.len();
        failures.truncate(LISTED_FAILURES);
        SuiteReport { suite: suite.to_string(), checked: self.checked.into_inner(), failed, failures, notes }
    }
}

fn modulus(e: i64) -> Result<Modulus> {
    Modulus::finite(e).map_err(|err| CliError::Usage(err.to_string()))
}

fn levels(e: i64, order: NodeOrder, max_n: usize) -> Vec<BTreeSet<Bipartition>> {
    enumerate_levels(Modulus::finite(e).expect("checked"), order, max_n).expect("orders are validated")
}

/// Υ against the recursive crystal isomorphism, or the degree-max term
/// against Υ.
fn symbol_suite(grid: &Grid, name: &str, degree_max: bool) -> SuiteReport {
    let tally = Tally::default();
    let jobs: Vec<(i64, Charge)> = grid.moduli().into_iter().flat_map(|e| grid.charges(e, false).into_iter().map(move |c| (e, c))).collect();
    jobs.par_iter().for_each(|&(e, c)| {
        if grid.out_of_budget() {
            return;
        }
        let all = levels(e, NodeOrder::Uglov(c), grid.max_n());
        for n in grid.ranks() {
            if !grid.spend(all[n].len()) {
                return;
            }
            for lambda in &all[n] {
                let direct = match upsilon(lambda, c) {
                    Ok(mu) => mu,
                    Err(err) => {
                        tally.fail(format!("e={e} ({c}) {lambda}: {err}"));
                        continue;
                    }
                };
                let other = if degree_max {
                    degree_max_term(lambda, c)
                } else {
                    let to = NodeOrder::Uglov(Charge::new(c.s0, c.s1 + e));
                    psi_recursive(lambda, Modulus::finite(e).expect("checked"), NodeOrder::Uglov(c), to)
                };
                match other {
                    Ok(mu) => tally.check(mu == direct, || format!("e={e} ({c}) {lambda}: {direct} vs {mu}")),
                    Err(err) => tally.fail(format!("e={e} ({c}) {lambda}: {err}")),
                }
            }
        }
    });
    tally.into_report(name, Vec::new())
}

fn flotw_suite(grid: &Grid) -> SuiteReport {
    let tally = Tally::default();
    let jobs: Vec<(i64, Charge)> = grid.moduli().into_iter().flat_map(|e| grid.charges(e, true).into_iter().map(move |c| (e, c))).collect();
    jobs.par_iter().for_each(|&(e, c)| {
        if grid.out_of_budget() {
            return;
        }
        let all = levels(e, NodeOrder::Uglov(c), grid.max_n());
        for n in grid.ranks() {
            let candidates = Bipartition::all_of_rank(n);
            if !grid.spend(candidates.len()) {
                return;
            }
            let filtered: BTreeSet<Bipartition> =
                candidates.into_iter().filter(|l| is_flotw(l, e, c).unwrap_or(false)).collect();
            tally.check(filtered == all[n], || {
                format!("e={e} ({c}) n={n}: filter {} vs crystal {}", filtered.len(), all[n].len())
            });
        }
    });
    tally.into_report("flotw", Vec::new())
}

/// Large `s1 - s0` against the negative asymptotic order and large
/// `s0 - s1` against the positive one. The opposite pairing for large
/// `s1 - s0` is measured and reported as a note only.
fn stabilize_suite(grid: &Grid) -> SuiteReport {
    let tally = Tally::default();
    let other_agree = AtomicUsize::new(0);
    let other_total = AtomicUsize::new(0);
    let mut jobs = Vec::new();
    for e in grid.moduli() {
        for n in grid.ranks() {
            for base in 0..e {
                for gap in [n as i64, n as i64 + 1] {
                    jobs.push((e, n, base, gap));
                }
            }
        }
    }
    jobs.par_iter().for_each(|&(e, n, base, gap)| {
        if grid.out_of_budget() {
            return;
        }
        let large_s1 = Charge::new(base, base + gap);
        let large_s0 = Charge::new(base + gap - e, base);
        let minus = NodeOrder::AsymptoticMinus(base, (base + gap).rem_euclid(e));
        let plus = NodeOrder::AsymptoticPlus((base + gap - e).rem_euclid(e), base);
        let crossed = NodeOrder::AsymptoticPlus(base, (base + gap).rem_euclid(e));
        let set = |order| levels(e, order, n).pop().expect("nonempty");
        let uglov_s1 = set(NodeOrder::Uglov(large_s1));
        let uglov_s0 = set(NodeOrder::Uglov(large_s0));
        if !grid.spend(2 * uglov_s1.len() + 2 * uglov_s0.len()) {
            return;
        }
        tally.check(uglov_s1 == set(minus), || format!("e={e} n={n} ({large_s1}) vs {minus}"));
        tally.check(uglov_s0 == set(plus), || format!("e={e} n={n} ({large_s0}) vs {plus}"));
        other_total.fetch_add(1, Ordering::Relaxed);
        if uglov_s1 == set(crossed) {
            other_agree.fetch_add(1, Ordering::Relaxed);
        }
    });
    let note = format!(
        "large s1 - s0 matched the positive asymptotic order in {} of {} cases (informational)",
        other_agree.into_inner(),
        other_total.into_inner()
    );
    tally.into_report("stabilize", vec![note])
}

fn render(report: &Report) -> String {
    let mut text = String::new();
    for suite in &report.suites {
        text.push_str(&format!("{}: {} checked, {} failed\n", suite.suite, suite.checked, suite.failed));
        for failure in &suite.failures {
            text.push_str(&format!("  FAIL {failure}\n"));
        }
        if suite.failed > suite.failures.len() {
            text.push_str(&format!("  ... {} more\n", suite.failed - suite.failures.len()));
        }
        for note in &suite.notes {
            text.push_str(&format!("  note: {note}\n"));
        }
    }
    if !report.complete {
        text.push_str(&format!("budget exhausted after {} visits; the grid was not covered\n", report.visits));
    }
    text
}

/// Runs the requested suites; returns the rendered report and whether
/// everything passed on the whole grid.
pub fn run(args: &VerifyArgs) -> Result<(String, bool)> {
    if args.out.format == Format::Dot {
        return Err(CliError::Usage("--format dot is only available for graph".into()));
    }
    if args.e.lo < 2 {
        return Err(CliError::Usage("e must be at least 2".into()));
    }
    for e in args.e.values() {
        modulus(e)?;
    }
    if args.n.hi < 0 {
        return Err(CliError::Usage("ranks must be nonnegative".into()));
    }
    let grid = Grid { args, visits: AtomicUsize::new(0), exhausted: AtomicBool::new(false) };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = args.threads {
        builder = builder.num_threads(threads);
    }
    let pool = builder.build().map_err(|err| CliError::Usage(err.to_string()))?;
    let suites = pool.install(|| {
        let mut suites = Vec::new();
        let all = args.suite == Suite::All;
        if all || args.suite == Suite::Main {
            suites.push(symbol_suite(&grid, "main", false));
        }
        if all || args.suite == Suite::Flotw {
            suites.push(flotw_suite(&grid));
        }
        if all || args.suite == Suite::Stabilize {
            suites.push(stabilize_suite(&grid));
        }
        if all || args.suite == Suite::DegreeMax {
            suites.push(symbol_suite(&grid, "degree-max", true));
        }
        suites
    });
    let report = Report { complete: !grid.out_of_budget(), visits: grid.visits.into_inner(), suites };
    let ok = report.complete && report.suites.iter().all(|s| s.failed == 0);
    let text = match args.out.format {
        Format::Json => json(&report),
        _ => render(&report),
    };
    Ok((text, ok))
}
