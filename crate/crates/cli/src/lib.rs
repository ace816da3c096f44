//! Command-line front-end: `check`, `filter` and `solve` on instance files.
//!
//! Exit codes: 0 consistent or solved, 1 inconsistent, 2 usage or parse
//! error, 3 oracle mismatch.

pub mod parse;

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};
use softalldiff::{
    check_consistency_counted, enumerate, propagate_counted, solve, Consistency, Counters,
    FilterOutcome, Instance, ValueId,
};

pub use parse::{parse_instance, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "softalldiff",
    version,
    about = "Soft alldifferent consistency, filtering and search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Cross-check the result against exhaustive enumeration.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Report operation counters.
    #[arg(long, global = true)]
    pub stats: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency and report the least violation.
    Check { file: String },
    /// Remove unsupported values and raise the lower bound of z.
    Filter { file: String },
    /// Find an assignment of least violation.
    Solve { file: String },
}

impl Command {
    pub fn file(&self) -> &str {
        match self {
            Command::Check { file } | Command::Filter { file } | Command::Solve { file } => file,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a run writes and how it exits.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Report {
    consistent: bool,
    min_violation: Option<i64>,
    domains: Map<String, Value>,
    z: [i64; 2],
    removed: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Map<String, Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<Stats>,
}

#[derive(Clone, Copy, Default, Serialize)]
struct Stats {
    #[serde(skip_serializing_if = "Option::is_none")]
    augmentations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow_arcs_scanned: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filter_work: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes_explored: Option<u64>,
}

impl Stats {
    fn from_counters(c: &Counters) -> Self {
        Stats {
            augmentations: Some(c.augmentations),
            flow_arcs_scanned: Some(c.flow_arcs_scanned),
            filter_work: Some(c.filter_work),
            nodes_explored: None,
        }
    }

    fn line(&self) -> String {
        let fields = [
            ("augmentations", self.augmentations),
            ("flow_arcs_scanned", self.flow_arcs_scanned),
            ("filter_work", self.filter_work),
            ("nodes_explored", self.nodes_explored),
        ];
        let parts: Vec<String> = fields
            .iter()
            .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
            .collect();
        format!("stats: {}\n", parts.join(" "))
    }
}

/// Runs a parsed command line against the text of an instance file.
pub fn run(cli: &Cli, text: &str) -> Output {
    let instance = match parse_instance(text) {
        Ok(inst) => inst,
        Err(e) => {
            return Output {
                code: EXIT_USAGE,
                stderr: format!("error: {}: {e}\n", cli.command.file()),
                ..Output::default()
            }
        }
    };
    match &cli.command {
        Command::Check { .. } => check(cli, &instance),
        Command::Filter { .. } => filter(cli, &instance),
        Command::Solve { .. } => solve_cmd(cli, &instance),
    }
}

fn domain_tokens(instance: &Instance, domain: &[ValueId]) -> Vec<String> {
    domain
        .iter()
        .map(|&d| instance.token(d).to_owned())
        .collect()
}

fn domains_map(instance: &Instance, domains: &[Vec<ValueId>]) -> Map<String, Value> {
    instance
        .var_names()
        .iter()
        .zip(domains)
        .map(|(name, dom)| (name.clone(), Value::from(domain_tokens(instance, dom))))
        .collect()
}

/// Renders the report. Text goes to stdout with counters on stderr; JSON
/// carries counters in a trailing `stats` key.
fn finish(cli: &Cli, mut out: Output, report: Report, text: String, stats: Stats) -> Output {
    match cli.format {
        Format::Text => {
            out.stdout = text;
            if cli.stats {
                out.stderr.push_str(&stats.line());
            }
        }
        Format::Json => {
            let report = Report {
                stats: cli.stats.then_some(stats),
                ..report
            };
            out.stdout = serde_json::to_string(&report).expect("report serializes") + "\n";
        }
    }
    out
}

/// Runs the oracle, mapping refusal to a usage error.
fn with_oracle(
    cli: &Cli,
    instance: &Instance,
    compare: impl FnOnce(&softalldiff::OracleReport) -> Option<String>,
) -> Result<(), Output> {
    if !cli.oracle {
        return Ok(());
    }
    let report = enumerate(instance).map_err(|e| Output {
        code: EXIT_USAGE,
        stderr: format!("error: --oracle refused: {e}\n"),
        ..Output::default()
    })?;
    match compare(&report) {
        None => Ok(()),
        Some(diff) => Err(Output {
            code: EXIT_ORACLE_MISMATCH,
            stderr: format!("oracle mismatch:\n{diff}"),
            ..Output::default()
        }),
    }
}

fn check(cli: &Cli, instance: &Instance) -> Output {
    let mut counters = Counters::default();
    let verdict = check_consistency_counted(instance, &mut counters);
    let cost = verdict
        .min_violation()
        .expect("parsed instances have non-empty domains");

    if let Err(out) = with_oracle(cli, instance, |report| {
        (report.min_violation != cost || report.is_consistent() != verdict.is_consistent()).then(|| {
            format!("- flow:   min_violation={cost} consistent={}\n+ oracle: min_violation={} consistent={}\n",
                verdict.is_consistent(), report.min_violation, report.is_consistent())
        })
    }) {
        return out;
    }

    let text = match verdict {
        Consistency::Consistent { min_violation } => {
            format!("consistent min_violation={min_violation}\n")
        }
        Consistency::Inconsistent { .. } => "inconsistent\n".to_owned(),
    };
    let report = Report {
        consistent: verdict.is_consistent(),
        min_violation: Some(cost),
        domains: domains_map(instance, instance.domains()),
        z: [instance.z_min(), instance.z_max()],
        removed: Vec::new(),
        assignment: None,
        stats: None,
    };
    let code = if verdict.is_consistent() {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    };
    finish(
        cli,
        Output {
            code,
            ..Output::default()
        },
        report,
        text,
        Stats::from_counters(&counters),
    )
}

fn filter_diff(
    instance: &Instance,
    out: &FilterOutcome,
    report: &softalldiff::OracleReport,
) -> Option<String> {
    let mut diff = String::new();
    if out.is_consistent() != report.is_consistent() {
        let _ = writeln!(
            diff,
            "- propagate: consistent={}\n+ oracle:    consistent={}",
            out.is_consistent(),
            report.is_consistent()
        );
        return Some(diff);
    }
    let filtered = out.apply(instance)?;
    for var in 0..instance.n() {
        let ours = filtered.domain(var);
        let theirs = &report.consistent_domains[var];
        if ours != theirs.as_slice() {
            let _ = writeln!(
                diff,
                "- {}: {{{}}}\n+ {}: {{{}}}",
                instance.var_name(var),
                domain_tokens(instance, ours).join(", "),
                instance.var_name(var),
                domain_tokens(instance, theirs).join(", ")
            );
        }
    }
    if Some(out.new_z_min) != report.consistent_z_min(instance) {
        let _ = writeln!(
            diff,
            "- z_min={}\n+ z_min={:?}",
            out.new_z_min,
            report.consistent_z_min(instance)
        );
    }
    (!diff.is_empty()).then_some(diff)
}

fn filter(cli: &Cli, instance: &Instance) -> Output {
    let mut counters = Counters::default();
    let out = propagate_counted(instance, &mut counters);

    if let Err(o) = with_oracle(cli, instance, |report| filter_diff(instance, &out, report)) {
        return o;
    }

    let removed = out
        .removals
        .iter()
        .map(|&(var, d)| {
            [
                instance.var_name(var).to_owned(),
                instance.token(d).to_owned(),
            ]
        })
        .collect();
    match out.apply(instance) {
        Some(filtered) => {
            let mut text = String::new();
            for var in 0..filtered.n() {
                let _ = writeln!(
                    text,
                    "{}: {{{}}}",
                    filtered.var_name(var),
                    domain_tokens(&filtered, filtered.domain(var)).join(", ")
                );
            }
            let _ = writeln!(text, "z=[{},{}]", filtered.z_min(), filtered.z_max());
            let report = Report {
                consistent: true,
                min_violation: out.min_violation,
                domains: domains_map(&filtered, filtered.domains()),
                z: [filtered.z_min(), filtered.z_max()],
                removed,
                assignment: None,
                stats: None,
            };
            finish(
                cli,
                Output {
                    code: EXIT_OK,
                    ..Output::default()
                },
                report,
                text,
                Stats::from_counters(&counters),
            )
        }
        None => {
            let report = Report {
                consistent: false,
                min_violation: out.min_violation,
                domains: domains_map(instance, instance.domains()),
                z: [instance.z_min(), instance.z_max()],
                removed,
                assignment: None,
                stats: None,
            };
            let o = Output {
                code: EXIT_INCONSISTENT,
                ..Output::default()
            };
            finish(
                cli,
                o,
                report,
                "inconsistent\n".to_owned(),
                Stats::from_counters(&counters),
            )
        }
    }
}

fn solve_cmd(cli: &Cli, instance: &Instance) -> Output {
    let result = solve(instance);
    let stats = Stats {
        nodes_explored: Some(result.nodes_explored),
        ..Stats::default()
    };

    if let Err(o) = with_oracle(cli, instance, |report| {
        let expected = report.is_consistent().then_some(report.min_violation);
        (expected != result.best_z).then(|| {
            format!(
                "- solve:  z={:?}\n+ oracle: z={expected:?}\n",
                result.best_z
            )
        })
    }) {
        return o;
    }

    let (Some(best), Some(z)) = (&result.best_assignment, result.best_z) else {
        let report = Report {
            consistent: false,
            min_violation: None,
            domains: domains_map(instance, instance.domains()),
            z: [instance.z_min(), instance.z_max()],
            removed: Vec::new(),
            assignment: None,
            stats: None,
        };
        let o = Output {
            code: EXIT_INCONSISTENT,
            ..Output::default()
        };
        return finish(cli, o, report, "inconsistent\n".to_owned(), stats);
    };

    let mut text = String::new();
    let mut assignment = Map::new();
    for (var, &d) in best.values().iter().enumerate() {
        let _ = writeln!(text, "{}={}", instance.var_name(var), instance.token(d));
        assignment.insert(
            instance.var_name(var).to_owned(),
            Value::from(instance.token(d)),
        );
    }
    let _ = writeln!(text, "z={z}");
    let singletons: Vec<Vec<ValueId>> = best.values().iter().map(|&d| vec![d]).collect();
    let report = Report {
        consistent: true,
        min_violation: Some(z),
        domains: domains_map(instance, &singletons),
        z: [z, z],
        removed: Vec::new(),
        assignment: Some(assignment),
        stats: None,
    };
    finish(
        cli,
        Output {
            code: EXIT_OK,
            ..Output::default()
        },
        report,
        text,
        stats,
    )
}
