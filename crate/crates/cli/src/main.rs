use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ufv_core::experiment::{render_table, run_experiment, ExperimentConfig, ExperimentRow, COLUMNS};
use ufv_core::model::{generate_synthetic, parse_database, serialize_database};
use ufv_core::prover::{parse_claims, prove, serialize_claims};
use ufv_core::verifier::{scheme_for, verify};
use ufv_core::{AdversaryKind, AdversaryModel, Itemset, MiningMode, MiningQuery, Tolerance, UncertainDatabase};

const EXIT_REJECT: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "ufv", version, about = "Uncertain frequent itemset mining with verifiable results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic uncertain database.
    Gen {
        #[arg(long)]
        txns: usize,
        #[arg(long)]
        items: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        plo: f64,
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mine honestly and write the claims.
    Mine {
        #[command(flatten)]
        query: QueryArgs,
        /// `auto` for the maximal frequent itemsets, or `A,B;C` style lists.
        #[arg(long, default_value = "auto")]
        checksets: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a query as a possibly dishonest prover.
    Prove {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value = "honest")]
        adversary: AdversaryKind,
        #[arg(long, default_value_t = 1.0)]
        magnitude: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "auto")]
        checksets: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check claims against the database and print a verdict.
    Verify {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        claims: PathBuf,
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance for real-valued checks.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value = "auto")]
        checksets: String,
    },
    /// Run a detection-rate experiment.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV output; defaults to the config path with a `.csv` extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    mode: MiningMode,
    #[arg(long)]
    minsup: f64,
    #[arg(long)]
    pft: Option<f64>,
}

fn read_db(path: &Path) -> Result<UncertainDatabase> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_database(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn parse_checksets(spec: &str) -> Result<Option<Vec<Itemset>>> {
    if spec == "auto" {
        return Ok(None);
    }
    let sets = spec
        .split(';')
        .map(|s| Itemset::parse(s).with_context(|| format!("bad checkset {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(sets))
}

fn answer(q: &QueryArgs, checksets: &str, adversary: &AdversaryModel, out: &Path) -> Result<()> {
    let db = read_db(&q.db)?;
    let query = MiningQuery::new(q.mode, q.minsup, q.pft, db.len())?;
    let checksets = parse_checksets(checksets)?;
    let resp = prove(&db, &query, checksets.as_deref(), adversary)?;
    write(out, &serialize_claims(&resp))
}

fn write_csv(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen {
            txns,
            items,
            density,
            plo,
            phi,
            seed,
            out,
        } => {
            let db = generate_synthetic(txns, items, density, (plo, phi), seed)?;
            write(&out, &serialize_database(&db))?;
        }
        Command::Mine {
            query,
            checksets,
            out,
        } => answer(&query, &checksets, &AdversaryModel::honest(), &out)?,
        Command::Prove {
            query,
            adversary,
            magnitude,
            seed,
            checksets,
            out,
        } => {
            let model = AdversaryModel::new(adversary, magnitude, seed)?;
            answer(&query, &checksets, &model, &out)?;
        }
        Command::Verify {
            db,
            claims,
            scheme,
            seed,
            tolerance,
            checksets,
        } => {
            let db = read_db(&db)?;
            let bytes = fs::read(&claims).with_context(|| format!("reading {}", claims.display()))?;
            let resp = parse_claims(&bytes, db.len()).with_context(|| format!("parsing {}", claims.display()))?;
            let scheme = scheme_for(&scheme, resp.query.mode)?;
            let tol = match tolerance {
                Some(t) if t.is_finite() && t >= 0.0 => Tolerance::with_relative(t),
                Some(t) => anyhow::bail!("tolerance must be a non-negative number, got {t}"),
                None => Tolerance::default(),
            };
            let checksets = parse_checksets(&checksets)?.unwrap_or_else(|| resp.checksets());
            let verdict = verify(&db, &resp, &checksets, scheme, seed, &tol)?;
            print!("{}", verdict.render());
            if !verdict.accepted() {
                return Ok(EXIT_REJECT);
            }
        }
        Command::Experiment { config, csv } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", config.display()))?;
            let rows = run_experiment(&cfg)?;
            print!("{}", render_table(&rows));
            write_csv(&csv.unwrap_or_else(|| config.with_extension("csv")), &rows)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = e
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(ufv_core::Error::GuardExceeded(_))));
            ExitCode::from(if guard { EXIT_GUARD } else { 1 })
        }
    }
}
