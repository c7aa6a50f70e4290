// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the prdp library.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use prdp_core::bounds::prediction_interval;
use prdp_core::harness::{
    calibrate, free_parameter, load_csv, run_experiment, synth_generate, write_report, ExperimentConfig,
    MechanismTemplate, SynthProfile,
};
use prdp_core::mechanisms::MechanismSpec;
use prdp_core::policy::{
    bounded_additive_prdp, bounded_transform_policy, per_record_sensitivity_sum, prdp_to_przcdp, DifferingPair,
    LossFlavor, PolicySource, PolicySpec,
};
use prdp_core::{Noise, NoiseSpec, RngStream};
use serde::de::DeserializeOwned;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "prdp", version, about = "Per-record differential privacy mechanisms for sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw noise values, one per line.
    Sample {
        /// Noise JSON, inline or as @path.
        #[arg(long)]
        noise: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Release one noisy answer.
    Privatize {
        /// Mechanism JSON, inline or as @path.
        #[arg(long)]
        mechanism: String,
        /// True query value.
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Per-record privacy losses as CSV (value, prdp_loss, przcdp_loss).
    PolicyEval {
        #[arg(long)]
        mechanism: String,
        /// Comma-separated record values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
        /// Bounded mode: compare each record with a neighbor at distance
        /// `delta` instead of with its removal.
        #[arg(long, requires = "delta")]
        bounded: Option<Bounded>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Prediction interval for a release, as JSON.
    Bounds {
        #[arg(long)]
        mechanism: String,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.95)]
        coverage: f64,
    },
    /// Solve for a mechanism's free parameter from a target standard deviation.
    Calibrate {
        /// Template JSON, inline or as @path.
        #[arg(long)]
        template: String,
        #[arg(long, required_unless_present = "median")]
        target_sd: Option<f64>,
        #[arg(long, required_unless_present = "median")]
        reference_q: Option<f64>,
        /// Shorthand for target sd = √0.5·median and reference q = median.
        #[arg(long, conflicts_with_all = ["target_sd", "reference_q"])]
        median: Option<f64>,
    },
    /// Run the group-by-sum experiment and write report files.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a synthetic dataset as CSV.
    SynthData {
        #[arg(long, value_enum)]
        profile: Profile,
        /// Defaults to the original dataset's record count.
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Bounded {
    /// r' = r + delta.
    Additive,
    /// r' = r · delta.
    Multiplicative,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Cbp,
    Cattle,
}

fn parse_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {what} from {path}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("invalid {what} JSON"))
}

// Both loss flavors for a record; PRDP is infinite for Gaussian-based
// mechanisms.
fn losses(m: &MechanismSpec, value: f64, bounded: Option<(Bounded, f64)>) -> Result<(f64, f64)> {
    let Some((mode, delta)) = bounded else {
        let d = per_record_sensitivity_sum(value)?;
        let prdp = PolicySpec::for_mechanism(m, LossFlavor::PRDP)?.eval(d)?;
        let przcdp = PolicySpec::for_mechanism(m, LossFlavor::PRzCDP)?.eval(d)?;
        return Ok((prdp, przcdp));
    };
    let pair = match mode {
        Bounded::Additive => DifferingPair::additive(value, delta)?,
        Bounded::Multiplicative => DifferingPair::multiplicative(value, delta)?,
    };
    match PolicySpec::for_mechanism(m, LossFlavor::PRzCDP)?.source {
        PolicySource::Transform { transform, sigma } => {
            let z = bounded_transform_policy(&transform, sigma, pair)?;
            Ok((if pair.r() == pair.r_prime() { 0.0 } else { f64::INFINITY }, z))
        }
        PolicySource::Additive { noise } => {
            let eps = bounded_additive_prdp(&noise, pair)?;
            Ok((eps, prdp_to_przcdp(eps)))
        }
        _ => bail!("bounded mode is not defined for the {} mechanism", m.name()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Sample { noise, n, seed, stream } => {
            let noise: NoiseSpec = parse_json(&noise, "noise")?;
            let mut rng = RngStream::new(seed, stream);
            for _ in 0..n {
                writeln!(out, "{}", noise.sample(&mut rng)?)?;
            }
        }
        Command::Privatize { mechanism, q, seed, stream } => {
            let m: MechanismSpec = parse_json(&mechanism, "mechanism")?;
            let mut rng = RngStream::new(seed, stream);
            writeln!(out, "{}", m.privatize(q, &mut rng)?)?;
        }
        Command::PolicyEval {
            mechanism,
            values,
            bounded,
            delta,
        } => {
            let m: MechanismSpec = parse_json(&mechanism, "mechanism")?;
            let bounded = bounded.zip(delta);
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["value", "prdp_loss", "przcdp_loss"])?;
            for v in values {
                let (prdp, przcdp) = losses(&m, v, bounded)?;
                w.write_record([v.to_string(), prdp.to_string(), przcdp.to_string()])?;
            }
            w.flush()?;
        }
        Command::Bounds { mechanism, q, coverage } => {
            let m: MechanismSpec = parse_json(&mechanism, "mechanism")?;
            let iv = prediction_interval(&m, q, coverage)?;
            writeln!(out, "{}", serde_json::to_string(&iv)?)?;
        }
        Command::Calibrate {
            template,
            target_sd,
            reference_q,
            median,
        } => {
            let t: MechanismTemplate = parse_json(&template, "template")?;
            let (sd, q) = match (median, target_sd, reference_q) {
                (Some(med), _, _) => (0.5f64.sqrt() * med, med),
                (None, Some(sd), Some(q)) => (sd, q),
                _ => bail!("give --median or both --target-sd and --reference-q"),
            };
            let m = calibrate(&t, sd, q)?;
            let mut v = serde_json::to_value(m)?;
            v["free_parameter"] = free_parameter(&m).into();
            writeln!(out, "{}", serde_json::to_string(&v)?)?;
        }
        Command::Experiment {
            config,
            input,
            out: dir,
            seed,
        } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg: ExperimentConfig =
                serde_json::from_str(&text).with_context(|| format!("invalid config {}", config.display()))?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let ds = load_csv(&input, &cfg.group_columns, &cfg.value_column)
                .with_context(|| format!("loading {}", input.display()))?;
            let report = run_experiment(&ds, &cfg)?;
            write_report(&report, &dir)?;
            writeln!(
                out,
                "{} records, {} groups ({} excluded from ARE) written to {}",
                report.records.len(),
                report.groups.len(),
                report.excluded(),
                dir.display()
            )?;
        }
        Command::SynthData {
            profile,
            rows,
            seed,
            out: path,
        } => {
            let profile = match profile {
                Profile::Cbp => SynthProfile::Cbp,
                Profile::Cattle => SynthProfile::Cattle,
            };
            let table = synth_generate(profile, rows.unwrap_or_else(|| profile.default_rows()), seed);
            match path {
                Some(p) => {
                    let f = std::fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    table.write_csv(BufWriter::new(f))?;
                }
                None => table.write_csv(&mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
