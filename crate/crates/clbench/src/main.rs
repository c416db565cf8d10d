use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clbench::{
    emit_plot_data, imbalance_study, ordering_study, read_metrics_csv, recompute_from_files, write_atomic,
    write_metrics_csv, ExperimentConfig, ExperimentRecord, ImbalanceSummary, OrderingSummary, Runner, METRICS_FILE,
    RECORD_FILE, REFERENCES_FILE,
};
use strategies::StrategyKind;

const ORDERING_FILE: &str = "ordering.json";
const IMBALANCE_FILE: &str = "imbalance.json";

#[derive(Parser)]
#[command(name = "clbench", version, about = "Continual-learning experiments on synthetic speech-like languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML); defaults apply to omitted keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides `strategy.kind` (FT, ER, A-GEM, DER, PNN, PB, L2P, EWC, LwF, MAS).
    #[arg(long)]
    strategy: Option<StrategyKind>,
    /// Cache for base models and references; defaults to `<out>/cache`.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its record.
    Run(Common),
    /// Run the joint and solo reference trainings.
    Refs(Common),
    /// Repeat an experiment over shuffled new-language orders.
    Ordering {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        orders: usize,
        /// Seed of the order shuffles; defaults to the run seed.
        #[arg(long)]
        order_seed: Option<u64>,
    },
    /// Compare forgetting after balanced and imbalanced pretraining.
    Imbalance(Common),
    /// Recompute metrics from a stored WER matrix.
    Metrics {
        #[command(flatten)]
        common: Common,
        /// Matrix file; defaults to `<out>/wer_matrix.csv`.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Write per-metric CSV series for plotting.
    PlotData(Common),
}

impl Common {
    fn config(&self) -> clbench::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.run.seed = s;
        }
        if let Some(k) = self.strategy {
            cfg.strategy.kind = k;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn runner(&self) -> Runner {
        Runner::with_cache_dir(self.cache.clone().unwrap_or_else(|| self.out.join("cache")))
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> clbench::Result<()> {
    write_atomic(path, &serde_json::to_vec_pretty(value)?)
}

fn print_series(rows: &[clbench::MetricRow]) {
    println!("{:>5} {:>6} {:>10} {:>8}", "stage", "metric", "value", "std");
    for r in rows {
        let std = r.std.map(|s| format!("{s:.2}")).unwrap_or_default();
        println!("{:>5} {:>6} {:>10.2} {:>8}", r.stage, r.metric, r.value, std);
    }
}

fn run(cli: Cli) -> clbench::Result<()> {
    match cli.command {
        Command::Run(c) => {
            let cfg = c.config()?;
            let dir = c.out.clone();
            let record = c.runner().run_sequence(&cfg, Some(&dir.join("checkpoints")))?;
            record.save(&dir)?;
            std::fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
            print_series(&record.metrics.to_rows());
            for w in &record.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", dir.display());
        }
        Command::Refs(c) => {
            let cfg = c.config()?;
            let refs = c.runner().references(&cfg)?;
            refs.write_csv(&c.out.join(REFERENCES_FILE))?;
            println!("{:<8} {:>8} {:>8}", "task", "joint", "solo");
            for (task, joint) in &refs.joint {
                let solo = refs.solo(task).map(|v| format!("{:.2}", v * 100.0)).unwrap_or_default();
                println!("{task:<8} {:>8.2} {solo:>8}", joint * 100.0);
            }
        }
        Command::Ordering { common: c, orders, order_seed } => {
            let cfg = c.config()?;
            let dir = c.out.clone();
            let (summary, records) =
                ordering_study(&mut c.runner(), &cfg, orders, order_seed.unwrap_or(cfg.run.seed))?;
            for (k, r) in records.iter().enumerate() {
                r.save(&dir.join(format!("order-{k:02}")))?;
            }
            write_json(&dir.join(ORDERING_FILE), &summary)?;
            write_metrics_csv(&dir.join(METRICS_FILE), &summary.to_rows())?;
            print_series(&summary.to_rows());
            println!("wrote {}", dir.display());
        }
        Command::Imbalance(c) => {
            let cfg = c.config()?;
            let summary = imbalance_study(&mut c.runner(), &cfg)?;
            write_json(&c.out.join(IMBALANCE_FILE), &summary)?;
            println!("first new language: {}", summary.first_language);
            println!("{:<11} {:>5} {:>5} {:>6} {:>8} {:>8} {:>8}", "regime", "base", "lang", "kind", "before", "after", "drop");
            for r in &summary.rows {
                println!(
                    "{:<11} {:>5} {:>5} {:>6} {:>8.2} {:>8.2} {:>8.2}",
                    r.regime,
                    r.base_epochs,
                    r.epochs_per_language,
                    r.strategy.name(),
                    r.base_before * 100.0,
                    r.base_after * 100.0,
                    r.drop * 100.0
                );
            }
        }
        Command::Metrics { common: c, matrix } => {
            let out = recompute_from_files(&c.out, matrix.as_deref())?;
            let rows = out.metrics.to_rows();
            print_series(&rows);
            match out.deviation {
                Some(d) => println!("max deviation from stored {METRICS_FILE}: {d:e}"),
                None => {
                    write_metrics_csv(&c.out.join(METRICS_FILE), &rows)?;
                    println!("wrote {}", c.out.join(METRICS_FILE).display());
                }
            }
        }
        Command::PlotData(c) => {
            let rows = if c.out.join(RECORD_FILE).exists() {
                ExperimentRecord::load(&c.out)?.metrics.to_rows()
            } else if c.out.join(ORDERING_FILE).exists() {
                let s: OrderingSummary = serde_json::from_slice(&std::fs::read(c.out.join(ORDERING_FILE))?)?;
                s.to_rows()
            } else if c.out.join(IMBALANCE_FILE).exists() {
                let s: ImbalanceSummary = serde_json::from_slice(&std::fs::read(c.out.join(IMBALANCE_FILE))?)?;
                let path = c.out.join("plot").join("imbalance.csv");
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["regime", "strategy", "base_epochs", "drop"])?;
                for r in &s.rows {
                    w.write_record([
                        r.regime.clone(),
                        r.strategy.name().to_string(),
                        r.base_epochs.to_string(),
                        (r.drop * 100.0).to_string(),
                    ])?;
                }
                write_atomic(&path, &w.into_inner().map_err(|e| clbench::BenchError::Io(e.into_error()))?)?;
                println!("wrote {}", path.display());
                return Ok(());
            } else {
                read_metrics_csv(&c.out.join(METRICS_FILE))?
            };
            for p in emit_plot_data(&rows, &c.out.join("plot"))? {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
