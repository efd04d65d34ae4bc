mod construct;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pgd::catalog::{catalog, render, render_cases, CatalogOptions, Format, Verdict};
use pgd::feasibility::{feasible_rows_with, order_scan, FeasibilityCase};
use pgd::incidence::DesignJson;
use pgd::search::{realize_with_stats, Budget};
use pgd::spectra::{circulant_eigenvalues, integral_spectrum};
use pgd::{
    classify, concurrence, count_up_to_iso, is_isomorphic, verify_pgd, CirculantRow, IncidenceStructure,
    SearchMode, SearchOutcome, SearchTask,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_PGD: u8 = 2;
const EXIT_UNREALIZABLE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// Partial geometric designs: verification, spectra, feasibility, search and catalogs.
#[derive(Parser)]
#[command(name = "pgd", version)]
struct Cli {
    /// Output format for tables and reports.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Md)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Md,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Md => Format::Md,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    First,
    All,
    Count,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Node budget for the backtracking search.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    budget_seconds: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        if let Some(s) = self.budget_seconds {
            b.max_seconds = Some(s);
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a design file is a PGD and report its parameters.
    Verify {
        path: PathBuf,
        /// Accept blocks in any order and sort them.
        #[arg(long)]
        normalize: bool,
    },
    /// Exact spectrum of a design's concurrence matrix or of a circulant row "v:c0,c1,...".
    Spectrum {
        input: String,
        #[arg(long)]
        normalize: bool,
    },
    /// List feasible circulant rows for one order.
    Enumerate {
        v: usize,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        sigma: Option<u64>,
        #[arg(long, default_value_t = 60)]
        r_max: u64,
        #[arg(long)]
        include_improper: bool,
    },
    /// Search for a block multiset whose concurrence matrix is a given circulant row.
    Realize {
        row: String,
        #[arg(long)]
        k: usize,
        /// Number of blocks; defaults to v*c0/k.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Disable the flag-sum block filter.
        #[arg(long)]
        no_flag_filter: bool,
        /// Allow repeated blocks (default) or forbid them.
        #[arg(long)]
        simple: bool,
        /// Write the first witness to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a design from a named construction; prints the JSON design.
    Construct {
        #[command(subcommand)]
        kind: construct::Kind,
        /// Write the design here instead of stdout.
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
    /// Feasibility, realization and classification for every row of one order.
    Catalog {
        v: usize,
        #[arg(long)]
        k_min: Option<u64>,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long, default_value_t = 120)]
        r_max: u64,
        /// Family members per primitive row.
        #[arg(long, default_value_t = 1)]
        members: usize,
        /// Additional rows to include, e.g. 8:4,2,2,2,0 (repeatable).
        #[arg(long = "row")]
        rows: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        include_improper: bool,
        /// JSON file with a design or a list of designs to try before searching.
        #[arg(long)]
        seed_tds: Option<PathBuf>,
        #[arg(long)]
        no_flag_filter: bool,
        /// Write each witness as a JSON design file into this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Test two design files for isomorphism.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
}

fn read_design(path: &Path, normalize: bool) -> Result<IncidenceStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_design(&text, normalize).with_context(|| format!("parsing {}", path.display()))
}

fn parse_design(text: &str, normalize: bool) -> Result<IncidenceStructure> {
    let raw: DesignJson = serde_json::from_str(text)?;
    let d = if normalize { IncidenceStructure::new(raw.v, raw.blocks)? } else { IncidenceStructure::try_from(raw)? };
    Ok(d)
}

fn read_designs(path: &Path) -> Result<Vec<IncidenceStructure>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        single => vec![single],
    };
    items
        .into_iter()
        .map(|item| {
            let raw: DesignJson = serde_json::from_value(item)?;
            Ok(IncidenceStructure::new(raw.v, raw.blocks)?)
        })
        .collect()
}

pub(crate) fn design_json(d: &IncidenceStructure) -> String {
    serde_json::to_string(d).expect("designs serialize")
}

fn parse_row(s: &str) -> Result<CirculantRow> {
    s.parse().map_err(|e| anyhow::anyhow!("bad row {s:?}: {e}"))
}

fn verify(path: &Path, normalize: bool, format: OutputFormat) -> Result<u8> {
    let d = read_design(path, normalize)?;
    match verify_pgd(&d) {
        Ok(p) => {
            let c = concurrence(&d)?;
            let row = c.circulant_first_row().and_then(|full| CirculantRow::from_full(&full));
            let tags = classify(&d);
            if let OutputFormat::Json = format {
                let report = json!({
                    "params": p,
                    "proper": p.is_proper(),
                    "tags": tags,
                    "circulant_row": row.as_ref().map(ToString::to_string),
                });
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{p}");
                println!("n = {}, sigma = {}, proper = {}", p.n(), p.sigma(), p.is_proper());
                let names: Vec<String> = tags.iter().map(ToString::to_string).collect();
                println!("tags: {}", names.join("; "));
                if let Some(row) = row {
                    println!("concurrence: C[{}]", row.c.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
                }
            }
            Ok(0)
        }
        Err(e) => {
            println!("not a PGD: {e}");
            Ok(EXIT_NOT_PGD)
        }
    }
}

fn spectrum(input: &str, normalize: bool, format: OutputFormat) -> Result<u8> {
    let spec = if input.contains(':') && !Path::new(input).exists() {
        circulant_eigenvalues(&parse_row(input)?).map_err(|e| anyhow::anyhow!("{e}"))?
    } else {
        let d = read_design(Path::new(input), normalize)?;
        integral_spectrum(&concurrence(&d)?).map_err(|e| anyhow::anyhow!("{e}"))?
    };
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string(&spec.0)?),
        _ => println!("{spec}"),
    }
    Ok(0)
}

fn enumerate(v: usize, k: Option<u64>, sigma: Option<u64>, r_max: u64, improper: bool, format: Format) -> Result<u8> {
    let cases: Vec<FeasibilityCase> = match (k, sigma) {
        (Some(k), Some(s)) => feasible_rows_with(v, k, s, r_max, improper),
        (k, s) => {
            let k_range = k.map_or(2..=(v as u64).saturating_sub(2), |k| k..=k);
            let scan = order_scan(v, k_range, r_max, improper)?;
            scan.cases().filter(|c| s.is_none_or(|s| c.sigma == s)).cloned().collect()
        }
    };
    let refs: Vec<&FeasibilityCase> = cases.iter().collect();
    print!("{}", render_cases(&refs, format));
    Ok(0)
}

/// α and β implied by the row's spectrum, when it has the PGD shape [kr, n^σ, 0^…].
fn flag_sums(row: &CirculantRow, k: usize) -> Option<(i64, i64)> {
    let spec = circulant_eigenvalues(row).ok()?;
    let (v, r) = (row.v as i64, row.c[0] as i64);
    let kr = k as i64 * r;
    let others: Vec<i64> = spec.0.iter().map(|&(e, _)| e).filter(|&e| e != 0 && e != kr).collect();
    let n = match others.as_slice() {
        [] if spec.multiplicity(kr) > 1 => kr,
        [n] => *n,
        _ => return None,
    };
    let alpha = k as i64 * (kr - n);
    (alpha % v == 0).then(|| (alpha / v, n + alpha / v))
}

#[allow(clippy::too_many_arguments)]
fn realize_cmd(
    row: &str,
    k: usize,
    b: Option<usize>,
    mode: Mode,
    budget: Budget,
    no_flag_filter: bool,
    simple: bool,
    output: Option<&Path>,
) -> Result<u8> {
    let row = parse_row(row)?;
    let v = row.v;
    let b = match b {
        Some(b) => b,
        None => {
            let total = v as u64 * row.c[0];
            if k == 0 || total % k as u64 != 0 {
                bail!("v*c0 = {total} is not divisible by k = {k}; pass --b");
            }
            (total / k as u64) as usize
        }
    };
    let mode = match mode {
        Mode::First => SearchMode::First,
        Mode::All => SearchMode::All,
        Mode::Count => SearchMode::Count,
    };
    let mut task = SearchTask::new(row.matrix(), k, b).with_mode(mode).with_budget(budget).with_repeats(!simple);
    if !no_flag_filter {
        task.flag_sums = flag_sums(&row, k);
    }
    let (outcome, stats) = realize_with_stats(&task);
    let mut report = json!({ "row": row.to_string(), "k": k, "b": b, "outcome": outcome, "stats": stats });
    if let SearchOutcome::Realized { witnesses, .. } = &outcome {
        if mode == SearchMode::All {
            let reps = count_up_to_iso(witnesses)?;
            report["classes_up_to_isomorphism"] = json!(reps.len());
        }
        if let (Some(path), Some(w)) = (output, witnesses.first()) {
            std::fs::write(path, design_json(w) + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(match outcome {
        SearchOutcome::Realized { .. } => 0,
        SearchOutcome::Unrealizable => EXIT_UNREALIZABLE,
        SearchOutcome::BudgetExhausted(_) => EXIT_BUDGET,
    })
}

fn run(cli: Cli) -> Result<u8> {
    let format = cli.format;
    match cli.command {
        Command::Verify { path, normalize } => verify(&path, normalize, format),
        Command::Spectrum { input, normalize } => spectrum(&input, normalize, format),
        Command::Enumerate { v, k, sigma, r_max, include_improper } => {
            enumerate(v, k, sigma, r_max, include_improper, format.into())
        }
        Command::Realize { row, k, b, mode, budget, no_flag_filter, simple, output } => {
            realize_cmd(&row, k, b, mode, budget.budget(), no_flag_filter, simple, output.as_deref())
        }
        Command::Construct { kind, output } => {
            let d = kind.build()?;
            match output {
                Some(path) => std::fs::write(&path, design_json(&d) + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{}", design_json(&d)),
            }
            Ok(0)
        }
        Command::Catalog {
            v,
            k_min,
            k_max,
            r_max,
            members,
            rows,
            budget,
            include_improper,
            seed_tds,
            no_flag_filter,
            witness_dir,
        } => {
            let mut options = CatalogOptions::for_order(v);
            let (lo, hi) = (*options.k_range.start(), *options.k_range.end());
            options.k_range = k_min.unwrap_or(lo)..=k_max.unwrap_or(hi);
            options.r_max = r_max;
            options.members = members;
            options.extra_rows = rows.iter().map(|r| parse_row(r)).collect::<Result<_>>()?;
            options.budget = budget.budget();
            options.include_improper = include_improper;
            options.flag_filter = !no_flag_filter;
            if let Some(path) = seed_tds {
                options.seeds = read_designs(&path)?;
            }
            let entries = catalog(v, &options)?;
            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(&dir)?;
                for e in entries.iter().filter(|e| e.witness.is_some()) {
                    let name = format!("order{}_{}.json", e.v, e.row.replace([':', ','], "_"));
                    std::fs::write(dir.join(name), design_json(e.witness.as_ref().unwrap()))?;
                }
            }
            print!("{}", render(&entries, format.into()));
            let exhausted = entries.iter().filter(|e| e.verdict == Verdict::BudgetExhausted).count();
            if exhausted > 0 {
                eprintln!("{exhausted} row(s) exhausted the search budget");
            }
            Ok(0)
        }
        Command::Iso { a, b, normalize } => {
            let (d1, d2) = (read_design(&a, normalize)?, read_design(&b, normalize)?);
            let map = is_isomorphic(&d1, &d2)?;
            println!("{}", json!({ "isomorphic": map.is_some(), "map": map }));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
