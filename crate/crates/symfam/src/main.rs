use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symfam::config::{ExperimentConfig, FamilyDecl, FamilyKind};
use symfam::experiment::{constant_violations, density_violations, FamilyResult, Runner};
use symfam::output::{constants_csv, density_csv, results_json};
use symfam::scan::{ec_scan, ec_scan_csv, rmt_table};
use symfam::weil_expr;
use symfam::{RunError, RunResult};
use symfam_core::ec::{EllipticFamilySpec, Poly};
use symfam_core::rmt::Shape;

#[derive(Parser)]
#[command(name = "symfam", version, about = "Symmetry types of L-function families from local data")]
struct Cli {
    /// Experiment recipe (TOML, or JSON by extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Prime cutoff P, overriding the config.
    #[arg(long, global = true)]
    primes: Option<u64>,
    /// Support radius of the test function, overriding the config.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Exit with status 4 when a result misses its threshold.
    #[arg(long, global = true)]
    check: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Family constants (c, eps, r) for every declared family.
    Constants {
        /// Also write a JSON report next to the CSV.
        #[arg(long)]
        json: bool,
    },
    /// Empirical against predicted one-level density per family.
    Density,
    /// Constants of two declared families and their convolution.
    Convolve {
        left: String,
        right: String,
        /// keep_all, identical, equal_j or isomorphic.
        #[arg(long)]
        collisions: Option<String>,
        /// lower, upper or midpoint.
        #[arg(long)]
        conductor: Option<String>,
    },
    /// Evaluate an expression such as `eps(sym^3([12]))`.
    Weil {
        expression: String,
        #[arg(long)]
        json: bool,
    },
    /// One-level predictions for every symmetry group.
    RmtTable {
        /// Comma-separated supports; defaults to --sigma or 0.5.
        #[arg(long, value_delimiter = ',')]
        sigmas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        ranks: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ShapeArg::Fejer)]
        shape: ShapeArg,
    },
    /// Michel moments and Nagao averages per prime for elliptic families.
    EcScan {
        /// A(T); without it the elliptic families of --config are scanned.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value_t = 0)]
        start: i64,
        #[arg(long, default_value_t = 1)]
        end: i64,
        /// Largest prime; defaults to --primes or 1000.
        #[arg(long)]
        cutoff: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Fejer,
    FejerSquared,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symfam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(cli: &Cli) -> RunResult<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(p) = cli.primes {
        cfg.primes = p;
    }
    if let Some(s) = cli.sigma {
        cfg.test_function.sigma = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads(threads: Option<usize>) -> RunResult<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, name: &str, text: &str) -> RunResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn check(enabled: bool, violations: Vec<String>) -> RunResult<()> {
    if enabled && !violations.is_empty() {
        for v in &violations {
            eprintln!("check: {v}");
        }
        return Err(RunError::Check(format!("{} result(s) outside thresholds", violations.len())));
    }
    Ok(())
}

fn run_constants(cfg: ExperimentConfig, json: bool, checked: bool) -> RunResult<Vec<FamilyResult>> {
    let out = cfg.out.clone();
    let results = Runner::new(cfg)?.run()?;
    emit(out.as_deref(), "constants.csv", &constants_csv(&results))?;
    if json || out.is_some() {
        let text = serde_json::to_string_pretty(&results_json(&results)).expect("serializable") + "\n";
        match &out {
            Some(dir) => std::fs::write(dir.join("constants.json"), text)?,
            None => print!("{text}"),
        }
    }
    check(checked, constant_violations(&results))?;
    Ok(results)
}

fn run(cli: Cli) -> RunResult<()> {
    match &cli.command {
        Command::Weil { expression, json } => {
            let outcome = weil_expr::evaluate(expression).map_err(|e| RunError::Config(e.to_string()))?;
            let text = if *json {
                serde_json::to_string_pretty(&outcome.to_json(expression)).expect("serializable") + "\n"
            } else {
                format!("{outcome}\n")
            };
            emit(cli.out.as_deref(), "weil.txt", &text)
        }
        Command::RmtTable { sigmas, ranks, shape } => {
            let sigmas = if sigmas.is_empty() { vec![cli.sigma.unwrap_or(0.5)] } else { sigmas.clone() };
            let shape = match shape {
                ShapeArg::Fejer => Shape::Fejer,
                ShapeArg::FejerSquared => Shape::FejerSquared,
            };
            let table = rmt_table(shape, &sigmas, ranks).map_err(|e| match e {
                RunError::Core(c) => RunError::Config(c.to_string()),
                other => other,
            })?;
            emit(cli.out.as_deref(), "rmt_table.csv", &table)
        }
        Command::EcScan { a, b, start, end, cutoff } => {
            init_threads(cli.threads)?;
            let cutoff = cutoff.or(cli.primes).unwrap_or(1000);
            let specs: Vec<(String, EllipticFamilySpec)> = match a {
                Some(a) => {
                    let spec = Poly::parse(a)
                        .and_then(|a| Poly::parse(b).map(|b| (a, b)))
                        .and_then(|(a, b)| EllipticFamilySpec::new(a, b, *start, *end))
                        .map_err(|e| RunError::Config(e.to_string()))?;
                    vec![("cli".to_string(), spec)]
                }
                None => {
                    let cfg = load_config(&cli)?;
                    let mut v = Vec::new();
                    for d in &cfg.families {
                        if let FamilyKind::Elliptic { a, b, start, end } = &d.kind {
                            let spec = Poly::parse(a)
                                .and_then(|a| Poly::parse(b).map(|b| (a, b)))
                                .and_then(|(a, b)| EllipticFamilySpec::new(a, b, *start, *end))
                                .map_err(|e| RunError::Config(format!("family {:?}: {e}", d.id)))?;
                            v.push((d.id.clone(), spec));
                        }
                    }
                    v
                }
            };
            let mut text = String::new();
            for (i, (id, spec)) in specs.iter().enumerate() {
                let csv = ec_scan_csv(id, &ec_scan(spec, cutoff)?);
                // one header for the whole table
                let skip = if i == 0 { 0 } else { 1 };
                for line in csv.lines().skip(skip) {
                    text.push_str(line);
                    text.push('\n');
                }
            }
            if specs.is_empty() {
                text = ec_scan_csv("", &[]);
            }
            emit(cli.out.as_deref(), "ec_scan.csv", &text)
        }
        Command::Constants { json } => {
            let cfg = load_config(&cli)?;
            init_threads(cfg.threads)?;
            run_constants(cfg, *json, cli.check).map(|_| ())
        }
        Command::Density => {
            let cfg = load_config(&cli)?;
            init_threads(cfg.threads)?;
            let out = cfg.out.clone();
            let tol = cfg.tolerance.density;
            let results = Runner::new(cfg)?.run()?;
            emit(out.as_deref(), "density.csv", &density_csv(&results))?;
            check(cli.check, density_violations(&results, tol))
        }
        Command::Convolve { left, right, collisions, conductor } => {
            let mut cfg = load_config(&cli)?;
            init_threads(cfg.threads)?;
            for id in [left, right] {
                if cfg.family(id).is_none() {
                    return Err(RunError::Config(format!("unknown family id {id:?}")));
                }
            }
            let id = format!("{left}x{right}");
            let keep = |d: &FamilyDecl| d.id == *left || d.id == *right;
            let mut selected: Vec<FamilyDecl> = cfg.families.iter().filter(|d| keep(d)).cloned().collect();
            if cfg.family(&id).is_none() {
                selected.push(FamilyDecl {
                    id,
                    primes: None,
                    tolerance: None,
                    kind: FamilyKind::Convolve {
                        left: left.clone(),
                        right: right.clone(),
                        collisions: collisions.clone(),
                        conductor: conductor.clone(),
                    },
                });
            }
            // keep declarations the factors depend on, reporting only the three rows
            let wanted: Vec<String> = selected.iter().map(|d| d.id.clone()).collect();
            let mut all = cfg.families.clone();
            for d in selected {
                if !all.iter().any(|x| x.id == d.id) {
                    all.push(d);
                }
            }
            cfg.families = all;
            cfg.validate()?;
            let out = cfg.out.clone();
            let runner = Runner::new(cfg)?;
            let results = runner.run_selected(Some(&wanted))?;
            emit(out.as_deref(), "convolve.csv", &constants_csv(&results))?;
            check(cli.check, constant_violations(&results))
        }
    }
}
