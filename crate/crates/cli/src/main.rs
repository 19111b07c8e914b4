use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lresc_cli::bundle::{BundlePayload, CodeBundle};
use lresc_cli::recipe::{self, Recipe};
use lresc_cli::simulate::{simulate, SimConfig};
use lresc_cli::verify::{verify_bundle, Check, GadgetSpec, VerifyOptions};
use lresc_cli::{canonical_hash, CliError};
use lresc_core::classical::min_distance;
use lresc_core::css::{css_parameters, edge_census, Sector, DEFAULT_RANGE_THRESHOLD};
use lresc_core::logical::{logical_weight_search, DEFAULT_RESTARTS};
use lresc_core::CodeError;
use lresc_decode::{DecoderVariant, NoiseKind};

#[derive(Parser)]
#[command(name = "lresc", version, about = "Build, verify and simulate long-range-enhanced surface codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a JSON recipe and write a content-hashed bundle.
    Build {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seed of the randomized distance search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run checks on a bundle and print one PASS/FAIL line per check.
    Verify {
        #[arg(long)]
        bundle: PathBuf,
        /// Comma-separated subset of orthogonality,logicals,tunneling,distance.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Certify that no logical of weight <= W exists.
        #[arg(long, value_name = "W")]
        distance: Option<usize>,
        /// JSON gadget: {"axis": "rows"|"columns", "ops": [...]}.
        #[arg(long)]
        gadget: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo sweep over one or more bundles.
    Simulate {
        #[arg(long, num_args = 1.., required = true)]
        bundle: Vec<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        model: Option<Model>,
        #[arg(long, value_enum)]
        decoder: Option<Decoder>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    CodeCapacity,
    Phenomenological,
}

#[derive(Clone, Copy, ValueEnum)]
enum Decoder {
    BpOsd,
    Mwpm,
}

fn build(recipe_path: &Path, out: &Path, seed: u64) -> Result<(), CliError> {
    let recipe = Recipe::load(recipe_path)?;
    let dir = recipe_path.parent().unwrap_or(Path::new("."));
    println!("recipe sha256 {}", canonical_hash(&recipe)?);
    let payload = recipe::build(&recipe, dir)?;
    let name = match &payload {
        BundlePayload::Css(code) => {
            let params = css_parameters(code);
            println!("code {}", code.name);
            println!("N = {}, K = {}", params.n, params.k);
            match params.d_formula {
                Some(d) => println!("D (parents) = {d}"),
                None => println!("D (parents) = unavailable"),
            }
            if code.k() > 0 {
                let upper = [Sector::X, Sector::Z]
                    .into_iter()
                    .map(|s| logical_weight_search(code, s, DEFAULT_RESTARTS, seed).map(|w| w.weight))
                    .collect::<Result<Vec<_>, _>>()?;
                println!("D <= {} (search, seed {seed})", upper.iter().min().unwrap());
            }
            match edge_census(code, DEFAULT_RANGE_THRESHOLD) {
                Ok(c) => println!("edges {} total, {} long-range", c.total_edges, c.long_range_edges),
                Err(CodeError::MissingCoordinates) => println!("edges: no embedding"),
                Err(e) => return Err(e.into()),
            }
            code.name.clone()
        }
        BundlePayload::Classical(code) => {
            println!("code {}", code.name);
            println!("n = {}, k = {}, m = {}", code.n(), code.k(), code.m());
            match min_distance(code) {
                Ok(d) => println!("d = {d}"),
                Err(e) => println!("d unavailable: {e}"),
            }
            println!("edges {} total, {} long-range", code.edges.len(), code.long_range_edges());
            code.name.clone()
        }
    };
    let bundle = CodeBundle::new(payload)?;
    std::fs::create_dir_all(out)?;
    let path = out.join("bundle.json");
    bundle.save(&path)?;
    println!("wrote {} ({name})", path.display());
    println!("bundle sha256 {}", bundle.sha256);
    Ok(())
}

fn verify(
    path: &Path,
    checks: Option<Vec<String>>,
    distance: Option<usize>,
    gadget: Option<PathBuf>,
    seed: u64,
) -> Result<(), CliError> {
    let bundle = CodeBundle::load(path)?;
    let checks = match checks {
        Some(list) => list.iter().map(|s| s.parse()).collect::<Result<Vec<Check>, _>>()?,
        None => Check::ALL.to_vec(),
    };
    let opts = VerifyOptions {
        checks,
        distance,
        gadget: gadget.as_deref().map(GadgetSpec::load).transpose()?,
        seed,
    };
    let results = verify_bundle(&bundle, &opts)?;
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { recipe, out, seed } => build(&recipe, &out, seed),
        Command::Verify {
            bundle,
            checks,
            distance,
            gadget,
            seed,
        } => verify(&bundle, checks, distance, gadget, seed),
        Command::Simulate {
            bundle,
            config,
            model,
            decoder,
            seed,
            trials,
            cycles,
            window,
            p_grid,
            threads,
            out,
        } => {
            let base = config.as_deref().map(SimConfig::load).transpose()?.unwrap_or_default();
            let flags = SimConfig {
                model: model.map(|m| match m {
                    Model::CodeCapacity => NoiseKind::CodeCapacity,
                    Model::Phenomenological => NoiseKind::WeightedPhenomenological,
                }),
                degree_mode: None,
                decoder: decoder.map(|d| match d {
                    Decoder::BpOsd => DecoderVariant::BpOsd,
                    Decoder::Mwpm => DecoderVariant::Mwpm,
                }),
                seed,
                trials,
                cycles,
                windows: window,
                p_grid,
            };
            let cfg = base.overlay(flags);
            let experiments = cfg.experiments()?;
            let mut codes = Vec::new();
            for path in &bundle {
                let b = CodeBundle::load(path)?;
                if !b.intact()? {
                    return Err(CliError::Verification(format!("{}: content hash mismatch", path.display())));
                }
                codes.push(
                    b.css()
                        .cloned()
                        .ok_or_else(|| CliError::Usage(format!("{}: not a quantum code", path.display())))?,
                );
            }
            let (reports, csv, json) = simulate(&codes, &experiments, threads, &out)?;
            for r in &reports {
                println!(
                    "{} window {}: config {} seed {}",
                    r.code.name, r.experiment.decoder.window, r.config_hash, r.experiment.seed
                );
                for pt in &r.points {
                    println!(
                        "  p = {:.3e}: {} / {} failed, per-cycle {:.3e} ± {:.1e}",
                        pt.p, pt.failures, pt.trials, pt.per_cycle_rate, pt.per_cycle_std_error
                    );
                }
            }
            println!("wrote {} and {}", csv.display(), json.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
