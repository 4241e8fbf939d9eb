use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grig_core::catalog::SubgroupSpec;
use grig_core::config::Config;
use grig_core::perm::Tower;
use grig_core::rigidity::{
    self, conjecture_probe, default_budget, eligible_rows, quotient_order_formula, rank_gradient_table, rank_witness,
    rigidity_report, rows_to_csv, rows_to_markdown, Chain, RankGradientRow,
};
use grig_core::tree::{Element, Vertex, Word};
use grig_core::verify::{run_suite, SuiteOptions};

#[derive(Parser)]
#[command(name = "grig", version, about = "Exact computations in the first Grigorchuk group")]
struct Cli {
    /// Plain-text key=value file (currently: max_level).
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Conjugation,
    Branching,
    Orders,
    Ranks,
    Sandwich,
    NilpotentBound,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Conjugation => "conjugation",
            Suite::Branching => "branching",
            Suite::Orders => "orders",
            Suite::Ranks => "ranks",
            Suite::Sandwich => "sandwich",
            Suite::NilpotentBound => "nilpotent-bound",
            Suite::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced form of a word in a, b, c, d.
    Reduce { word: String },
    /// Whether two elements are equal in the group.
    Equal { x: String, y: String },
    /// Image of a vertex, given as a binary string.
    Act { element: String, vertex: String },
    /// Root activity and the two sections, or the section at a vertex.
    Sections {
        element: String,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Swap bits down to a depth and the sections below it.
    Portrait {
        element: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// The quotient by the level stabilizer st(level).
    Quotient {
        #[arg(long)]
        level: usize,
        /// Print the exact order.
        #[arg(long)]
        order: bool,
        /// Print orders for levels 1..=level next to the closed formula.
        #[arg(long)]
        table: bool,
    },
    /// Rank witness for a catalog subgroup.
    Rank {
        /// K, B, K1, Kn, R, Q, P (with --n) or a full name such as P3.
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Rank-gradient rows along a chain.
    RgTable {
        #[arg(long, default_value = "P")]
        chain: String,
        #[arg(long, default_value_t = 6)]
        max: usize,
        /// Level budget per row; 0 means n+5.
        #[arg(long, default_value_t = 0)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Empirical rigidity constant over the rows with index >= 4 and d >= 2.
    RigidityReport {
        #[arg(long, default_value = "P")]
        chain: String,
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(long, default_value_t = 0)]
        budget: usize,
    },
    /// Run verification suites; exit 1 with the failures on any failure.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
    /// Random subgroups of a level quotient, as uncertified rows.
    Probe {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Checks(Value),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn element(text: &str) -> Result<Element, Failure> {
    Ok(grig_core::parse_element(text)?)
}

fn vertex(text: &str) -> Result<Vertex, Failure> {
    if text.is_empty() {
        return Ok(Vertex::root());
    }
    Ok(text.parse::<Vertex>()?)
}

fn spec(name: &str, n: Option<usize>) -> Result<SubgroupSpec, Failure> {
    let full = match n {
        Some(n) if name == "Kn" => format!("K{n}"),
        Some(n) => format!("{name}{n}"),
        None => name.to_string(),
    };
    Ok(full.parse::<SubgroupSpec>()?)
}

fn render_rows(rows: &[RankGradientRow], format: Format) -> String {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Md => rows_to_markdown(rows),
        Format::Json => pretty(&json!(rows)),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut config = Config::from_env();
    if let Some(path) = &cli.config {
        config.apply(&std::fs::read_to_string(path)?)?;
    }
    let tower = Tower::new(config);
    Ok(match cli.command {
        Command::Reduce { word } => format!("{}\n", word.parse::<Word>()?),
        Command::Equal { x, y } => format!("{}\n", element(&x)?.equals(&element(&y)?)),
        Command::Act { element: g, vertex: v } => format!("{}\n", element(&g)?.act(&vertex(&v)?)),
        Command::Sections { element: g, vertex: v } => {
            let g = element(&g)?;
            match v {
                Some(v) => format!("{}\n", g.section_at(&vertex(&v)?)?.simplify()),
                None => {
                    let d = g.decompose();
                    pretty(&json!({ "swap": d.swap, "left": d.left.to_string(), "right": d.right.to_string() }))
                }
            }
        }
        Command::Portrait { element: g, depth } => {
            let p = element(&g)?.portrait(depth);
            let activity: Vec<String> =
                p.activity.iter().map(|l| l.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect();
            let boundary: Vec<String> = p.boundary.iter().map(|e| e.simplify().to_string()).collect();
            pretty(&json!({ "depth": depth, "activity": activity, "boundary": boundary }))
        }
        Command::Quotient { level, order, table } => {
            if table {
                let mut out = String::from("level,order,log2_order,formula_log2\n");
                for n in 1..=level {
                    let q = tower.level_quotient(n)?;
                    let formula = if n >= 3 { (quotient_order_formula(n).bits() - 1).to_string() } else { String::new() };
                    out.push_str(&format!("{n},{},{},{formula}\n", q.order(), q.order_log2()));
                }
                out
            } else if order {
                format!("{}\n", tower.level_quotient(level)?.order())
            } else {
                tower.level_quotient(level)?.to_text()
            }
        }
        Command::Rank { subgroup, n, budget } => {
            let s = spec(&subgroup, n)?;
            let w = rank_witness(&tower, s, budget.unwrap_or_else(|| default_budget(s)))?;
            pretty(&json!({
                "subgroup": s.to_string(),
                "lower_bound": w.lower_bound,
                "upper_bound": w.upper_bound,
                "witness_level": w.witness_level,
                "certified": w.certified,
                "ranks": w.ranks,
            }))
        }
        Command::RgTable { chain, max, budget, format } => {
            let chain: Chain = chain.parse()?;
            render_rows(&rank_gradient_table(&tower, chain, max, budget)?, format)
        }
        Command::RigidityReport { chain, max, budget } => {
            let chain: Chain = chain.parse()?;
            let rows = rank_gradient_table(&tower, chain, max, budget)?;
            let excluded: Vec<usize> = rows.iter().filter(|r| r.ratio.is_none()).map(|r| r.n).collect();
            let report = rigidity_report(&eligible_rows(&rows))?;
            let all_certified = report.rows.iter().all(|r| r.certified);
            pretty(&json!({
                "d_min": report.d_min,
                "ratios": report.ratios,
                "excluded_rows": excluded,
                "all_rows_certified": all_certified,
                "tolerance": rigidity::RATIO_TOLERANCE,
                "rows": report.rows,
            }))
        }
        Command::Verify { suite, max_m, level } => {
            let outcome = run_suite(&tower, suite.name(), SuiteOptions { max_m, level })?;
            let failures: Vec<_> = outcome.report.failures().into_iter().cloned().collect();
            let summary = json!({
                "suite": suite.name(),
                "checks": outcome.report.len(),
                "passed": outcome.report.len() - failures.len(),
                "skipped": outcome.skipped,
                "failures": failures,
            });
            if failures.is_empty() {
                pretty(&summary)
            } else {
                return Err(Failure::Checks(summary));
            }
        }
        Command::Probe { level, samples, seed, format } => {
            render_rows(&conjecture_probe(&tower, level, samples, seed)?, format)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(v)) => {
            print!("{}", pretty(&v));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
