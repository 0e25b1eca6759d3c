use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hindman_core::colorings::{CandidateCap, ColoringId};
use hindman_core::matcher::{
    brute_force_mono, find_full_matcher, half_match_dichotomy, hindman_search, monochromatic_color, SearchBudget,
};
use hindman_core::{certify, Catalog, ColoringOracle, FinFamily, FinSet};
use serde_json::json;

use crate::campaign::run_suite;
use crate::claims::{find, ClaimContext, Status};
use crate::config::CampaignConfig;
use crate::error::{exit, CliError};
use crate::fixtures::{catalog_coloring, load_catalog, oracle, ColoringSpec};
use crate::report::VerificationReport;

/// Writes a line to stdout, ignoring a closed pipe (e.g. `| head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// Largest accepted universe bound: every code below it fits a 64-bit set.
const MAX_BOUND: u128 = 1 << 64;

#[derive(Debug, Parser)]
#[command(name = "hindman-lab", version, about = "Verification campaigns over computable colorings of finite sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Catalog file, or a builtin name (builtin, singletons, delayed, interleaved, dyadic, finite).
    #[arg(long, global = true, value_name = "FILE")]
    pub catalog: Option<String>,
    /// Exclusive universe bound on set codes; accepts 16384, 2^14 or 1<<14.
    #[arg(long, global = true, value_name = "N", value_parser = parse_bound)]
    pub bound: Option<u128>,
    /// Search budget: candidate sets per claim, or color evaluations for matcher runs.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// Write the JSON report or certificate to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Emit one JSON line per recursive evaluation step or claim record.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print `code, set, color` for sets, codes or inclusive code ranges (`1..8`).
    Color {
        coloring: String,
        /// An optional catalog followed by the sets to color.
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
    /// Run the claim suite of a catalog coloring.
    Verify(VerifyArgs),
    /// Search for m pairwise disjoint sets whose unions share one color.
    Search {
        coloring: String,
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = SearchMethod::Hindman)]
        method: SearchMethod,
    },
    /// Run a matcher and print its certificate.
    Match {
        #[arg(value_enum)]
        kind: MatchKind,
        coloring: String,
        /// Number of colors; defaults to the coloring's arity.
        #[arg(short, long)]
        r: Option<usize>,
        /// Family size for `hindman`.
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        /// Iterations of each inductive construction.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Re-run the claims of a report and compare with the recorded outcomes.
    Replay {
        report: PathBuf,
        /// Claims to replay; defaults to the violated ones, or all if none is violated.
        #[arg(long = "claim")]
        claims: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub coloring: String,
    /// Catalog file or builtin name (same as --catalog).
    pub catalog_file: Option<String>,
    /// Worker threads for independent claims.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Run only these claims.
    #[arg(long = "claim")]
    pub claims: Vec<String>,
    /// Flip the memoized color of the set with this code.
    #[arg(long, value_name = "CODE")]
    pub inject_fault: Option<u64>,
    /// Uniqueness scans cover every set with max ≤ this element.
    #[arg(long)]
    pub scan_max: Option<u32>,
    /// Stage horizon for stabilization and defeat searches.
    #[arg(long)]
    pub horizon: Option<u32>,
    /// Largest p, q on the approximation grids.
    #[arg(long)]
    pub grid: Option<u32>,
    /// Largest element of a Σ₂ candidate.
    #[arg(long)]
    pub cap: Option<u32>,
    /// Also write the per-claim records as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchMethod {
    /// The matcher-driven search, falling back to brute force.
    Hindman,
    /// Lexicographic exhaustive search.
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatchKind {
    Half,
    Full,
    Hindman,
}

pub fn parse_bound(text: &str) -> Result<u128, String> {
    let text = text.trim();
    let power = |base: &str, exp: &str| -> Result<u128, String> {
        let base: u128 = base.trim().parse().map_err(|_| format!("invalid bound {text:?}"))?;
        let exp: u32 = exp.trim().parse().map_err(|_| format!("invalid bound {text:?}"))?;
        base.checked_pow(exp).ok_or_else(|| format!("bound {text} does not fit 128 bits"))
    };
    let value = if let Some((b, e)) = text.split_once('^') {
        power(b, e)?
    } else if let Some((b, e)) = text.split_once("<<") {
        let shift: u32 = e.trim().parse().map_err(|_| format!("invalid bound {text:?}"))?;
        let base: u128 = b.trim().parse().map_err(|_| format!("invalid bound {text:?}"))?;
        base.checked_shl(shift).filter(|v| v >> shift == base).ok_or_else(|| format!("bound {text} does not fit 128 bits"))?
    } else {
        text.parse().map_err(|_| format!("invalid bound {text:?}"))?
    };
    if value == 0 {
        return Err("bound must be positive".into());
    }
    Ok(value)
}

fn checked_bound(bound: u128) -> Result<u128, CliError> {
    if bound > MAX_BOUND {
        Err(CliError::Overflow(format!("bound {bound} exceeds 2^64")))
    } else {
        Ok(bound)
    }
}

fn catalog_reference<'a>(global: &'a Global, positional: Option<&'a str>) -> Result<&'a str, CliError> {
    match (positional, global.catalog.as_deref()) {
        (Some(a), Some(b)) if a != b => Err(CliError::Usage(format!("two catalogs given: {a} and {b}"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Ok("builtin"),
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializes") + "\n";
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Color { coloring, args } => color(&cli.global, &coloring, &args),
        Command::Verify(args) => verify(&cli.global, &args),
        Command::Search { coloring, m, method } => search(&cli.global, &coloring, m, method),
        Command::Match { kind, coloring, r, m, depth } => matcher(&cli.global, kind, &coloring, r, m, depth),
        Command::Replay { report, claims } => replay(&cli.global, &report, &claims),
    }
}

/// Expands a set (`{1,4}`), a code (`18`) or an inclusive code range (`1..8`).
fn targets(text: &str) -> Result<Vec<FinSet>, CliError> {
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let parse = |s: &str| s.trim().parse::<u128>().map_err(|_| CliError::Usage(format!("invalid range {text:?}")));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if hi >= MAX_BOUND {
            return Err(CliError::Overflow(format!("code {hi} does not fit a 64-bit universe")));
        }
        if lo > hi {
            return Err(CliError::Usage(format!("empty range {text:?}")));
        }
        return Ok((lo as u64..=hi as u64).map(FinSet::from_code).collect());
    }
    Ok(vec![text.parse::<FinSet>()?])
}

fn color(global: &Global, coloring: &str, args: &[String]) -> Result<i32, CliError> {
    let spec: ColoringSpec = coloring.parse()?;
    let (positional, sets) = match args {
        [catalog, rest @ ..] if !rest.is_empty() => (Some(catalog.as_str()), rest),
        rest => (None, rest),
    };
    let sets = sets.iter().map(|s| targets(s)).collect::<Result<Vec<_>, _>>()?.concat();
    let reference = catalog_reference(global, positional)?;
    let mut lines = Vec::with_capacity(sets.len());
    match spec {
        ColoringSpec::Catalog(id) => {
            let (catalog, _) = load_catalog(reference)?;
            let c = catalog_coloring(id, &catalog, CandidateCap::default())?;
            for set in sets {
                lines.push(format!("{}, {set}, {}", set.code(), c.bit(set)));
                if global.trace {
                    for step in c.trace(set) {
                        lines.push(serde_json::to_string(&step).expect("serializes"));
                    }
                }
            }
        }
        ColoringSpec::Fixture(_) => {
            let bound = global.bound.map_or(Ok(1 << 16), checked_bound)?;
            let c = oracle(spec, || unreachable!("fixtures need no catalog"), bound.min(1 << 22))?;
            for set in sets {
                lines.push(format!("{}, {set}, {}", set.code(), c.color(set)));
            }
        }
    }
    out!("{}", lines.join("\n"));
    Ok(exit::VERIFIED)
}

pub fn campaign_config(id: ColoringId, global: &Global, args: &VerifyArgs) -> Result<CampaignConfig, CliError> {
    let mut config = CampaignConfig::for_coloring(id);
    if let Some(bound) = global.bound {
        config.bound = u64::try_from(checked_bound(bound)?).unwrap_or(u64::MAX);
    }
    if let Some(budget) = global.budget {
        config.budget = budget;
    }
    config.scan_max = args.scan_max.unwrap_or(config.scan_max);
    config.horizon = args.horizon.unwrap_or(config.horizon);
    config.grid = args.grid.unwrap_or(config.grid);
    if let Some(cap) = args.cap {
        config.cap = CandidateCap::new(cap);
    }
    config.fault = args.inject_fault;
    if config.scan_max > 30 {
        return Err(CliError::Usage(format!("--scan-max {} would scan 2^{} sets", config.scan_max, config.scan_max + 1)));
    }
    Ok(config)
}

fn exit_for(status: Status) -> i32 {
    match status {
        Status::Verified => exit::VERIFIED,
        Status::Violated => exit::VIOLATED,
        Status::Exhausted => exit::EXHAUSTED,
    }
}

fn print_records(report: &VerificationReport, trace: bool) {
    for r in &report.claims {
        if trace {
            eprintln!("{}", serde_json::to_string(r).expect("serializes"));
        }
        out!("{:<26} {:<9} universe<{} {}ms", r.claim, r.status.as_str(), r.universe_bound, r.wall_time_ms);
        if let Some(cx) = &r.counterexample {
            out!("  counterexample: {}", cx.reason);
        }
    }
    let s = report.summary;
    out!(
        "{}: {} verified, {} exhausted, {} violated",
        report.status().as_str(),
        s.verified,
        s.exhausted,
        s.violated
    );
}

/// Builds and runs a campaign without printing; the library entry point for tests.
pub fn campaign(
    id: ColoringId,
    catalog_reference: &str,
    config: CampaignConfig,
    workers: usize,
    only: &[String],
) -> Result<VerificationReport, CliError> {
    let (catalog, reference) = load_catalog(catalog_reference)?;
    let ctx = ClaimContext::new(id, catalog, config)?;
    let records = run_suite(&ctx, workers, only)?;
    Ok(VerificationReport::new(id.to_string(), reference, config, records))
}

fn verify(global: &Global, args: &VerifyArgs) -> Result<i32, CliError> {
    let id: ColoringId = args.coloring.parse().map_err(|e: hindman_core::ColoringError| CliError::Usage(e.to_string()))?;
    let reference = catalog_reference(global, args.catalog_file.as_deref())?;
    let config = campaign_config(id, global, args)?;
    let report = campaign(id, reference, config, args.workers.max(1), &args.claims)?;
    print_records(&report, global.trace);
    if let Some(path) = &global.json {
        report.write_json(path)?;
    }
    if let Some(path) = &args.csv {
        report.write_csv_file(path)?;
    }
    Ok(exit_for(report.status()))
}

fn builtin_catalog(global: &Global) -> impl FnOnce() -> Result<Arc<Catalog>, CliError> + '_ {
    move || Ok(load_catalog(catalog_reference(global, None)?)?.0)
}

fn search(global: &Global, coloring: &str, m: usize, method: SearchMethod) -> Result<i32, CliError> {
    let spec: ColoringSpec = coloring.parse()?;
    let bound = checked_bound(global.bound.unwrap_or(1 << 10))?;
    let c = oracle(spec, builtin_catalog(global), bound)?;
    let mut budget = SearchBudget::with_bound(bound);
    if let Some(nodes) = global.budget {
        budget.max_nodes = usize::try_from(nodes).unwrap_or(usize::MAX);
    }
    let r = usize::try_from(c.arity()).unwrap_or(usize::MAX);
    let found: Option<(FinFamily, &str)> = match method {
        SearchMethod::Hindman => hindman_search(&*c, r, m, &budget)
            .map(|h| (h.family, "hindman"))
            .or_else(|| brute_force_mono(&*c, m, bound).map(|f| (f, "brute_force"))),
        SearchMethod::Brute => brute_force_mono(&*c, m, bound).map(|f| (f, "brute_force")),
    };
    let Some((family, used)) = found else {
        out!("none within bound");
        if let Some(path) = &global.json {
            write_json(path, &json!({ "found": false, "m": m, "universe_bound": bound }))?;
        }
        return Ok(exit::EXHAUSTED);
    };
    let color = monochromatic_color(&family, &*c);
    let verified = color.is_some_and(|color| certify::monochromatic(&family, color, m, &*c).is_ok());
    out!("{family}");
    out!("color: {}", color.map_or("none".to_string(), |c| c.to_string()));
    out!("method: {used}");
    out!("verified: {verified}");
    if let Some(path) = &global.json {
        write_json(
            path,
            &json!({ "found": true, "family": family, "color": color, "method": used, "verified": verified, "universe_bound": bound }),
        )?;
    }
    Ok(if verified { exit::VERIFIED } else { exit::VIOLATED })
}

fn matcher(
    global: &Global,
    kind: MatchKind,
    coloring: &str,
    r: Option<usize>,
    m: usize,
    depth: Option<usize>,
) -> Result<i32, CliError> {
    let spec: ColoringSpec = coloring.parse()?;
    let mut budget = SearchBudget::default();
    if let Some(bound) = global.bound {
        budget.universe_bound = checked_bound(bound)?;
    }
    if let Some(nodes) = global.budget {
        budget.max_nodes = usize::try_from(nodes).unwrap_or(usize::MAX);
    }
    budget.depth = depth.unwrap_or(budget.depth);
    let c = oracle(spec, builtin_catalog(global), budget.universe_bound)?;
    let r = r.unwrap_or_else(|| usize::try_from(c.arity()).unwrap_or(usize::MAX));
    let universe: FinFamily = budget.universe();
    let (certificate, check) = match kind {
        MatchKind::Half => {
            let least = universe.first().ok_or_else(|| CliError::Exhausted("empty universe".into()))?;
            let b = FinFamily::new([least]);
            let rest = universe.filter(|s| s != least);
            let dichotomy = half_match_dichotomy(&rest, &b, &*c, &budget)?;
            let check = certify::dichotomy(&dichotomy, &rest, &b, &*c, &budget);
            (json!({ "matcher": "half", "b": b, "certificate": dichotomy }), check)
        }
        MatchKind::Full => {
            let outcome = find_full_matcher(&universe, &*c, r, &budget)?;
            let check = certify::full_matcher(&outcome, &*c, &budget);
            (json!({ "matcher": "full", "r": r, "certificate": outcome }), check)
        }
        MatchKind::Hindman => {
            let found = hindman_search(&*c, r, m, &budget)
                .ok_or_else(|| CliError::Exhausted(format!("no family of {m} sets within the budget")))?;
            let check = certify::hindman(&found, m, &*c);
            (json!({ "matcher": "hindman", "r": r, "m": m, "certificate": found }), check)
        }
    };
    let mut certificate = certificate;
    certificate["universe_bound"] = json!(budget.universe_bound);
    certificate["verified"] = json!(check.is_ok());
    if let Err(reason) = &check {
        certificate["check_failure"] = json!(reason);
    }
    out!("{}", serde_json::to_string_pretty(&certificate).expect("serializes"));
    if let Some(path) = &global.json {
        write_json(path, &certificate)?;
    }
    Ok(if check.is_ok() { exit::VERIFIED } else { exit::VIOLATED })
}

/// Outcome of replaying one recorded claim.
#[derive(Debug, PartialEq)]
pub struct Replayed {
    pub claim: String,
    pub status: Status,
    pub reproduced: bool,
}

/// Re-runs recorded claims with the recorded catalog and configuration.
pub fn replay_report(report: &VerificationReport, only: &[String]) -> Result<Vec<Replayed>, CliError> {
    let id: ColoringId = report.coloring.parse().map_err(|e: hindman_core::ColoringError| CliError::Usage(e.to_string()))?;
    let catalog = Arc::new(Catalog::from_file(report.catalog.definition.clone())?);
    let ctx = ClaimContext::new(id, catalog, report.config)?;
    let selected: Vec<_> = if !only.is_empty() {
        only.iter()
            .map(|name| {
                report.claims.iter().find(|r| &r.claim == name).ok_or_else(|| CliError::Usage(format!("claim {name:?} is not in the report")))
            })
            .collect::<Result<_, _>>()?
    } else if report.summary.violated > 0 {
        report.claims.iter().filter(|r| r.status == Status::Violated).collect()
    } else {
        report.claims.iter().collect()
    };
    selected
        .into_iter()
        .map(|record| {
            let claim = find(id, &record.claim)
                .ok_or_else(|| CliError::Usage(format!("claim {:?} is unknown for {id}", record.claim)))?;
            let outcome = claim.run(&ctx);
            let reproduced = outcome.status == record.status
                && outcome.universe_bound == record.universe_bound
                && outcome.witness == record.witness
                && outcome.counterexample == record.counterexample;
            Ok(Replayed { claim: record.claim.clone(), status: outcome.status, reproduced })
        })
        .collect()
}

fn replay(global: &Global, path: &Path, only: &[String]) -> Result<i32, CliError> {
    let report = VerificationReport::read_json(path)?;
    let replayed = replay_report(&report, only)?;
    for r in &replayed {
        let verdict = if r.reproduced { "reproduced" } else { "DIFFERS" };
        out!("{:<26} {:<9} {verdict}", r.claim, r.status.as_str());
    }
    if let Some(out) = &global.json {
        let records: Vec<_> = replayed
            .iter()
            .map(|r| json!({ "claim": r.claim, "status": r.status, "reproduced": r.reproduced }))
            .collect();
        write_json(out, &json!({ "report_version": report.report_version, "replayed": records }))?;
    }
    if let Some(bad) = replayed.iter().find(|r| !r.reproduced) {
        return Err(CliError::Usage(format!("claim {} does not replay to the recorded outcome", bad.claim)));
    }
    let worst = if replayed.iter().any(|r| r.status == Status::Violated) {
        Status::Violated
    } else if !replayed.is_empty() && replayed.iter().all(|r| r.status == Status::Exhausted) {
        Status::Exhausted
    } else {
        Status::Verified
    };
    Ok(exit_for(worst))
}
