//! `gpcb`: encode, decode and simulate GPCB codes from the command line.

mod settings;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use gpcb::catalog::{REFERENCE_M, REFERENCE_PAIRS};
use gpcb::simulator::{
    run_ber, tune_schedule, write_csv_rows, ChannelSpec, GpcbCodec, RunLabel, TuningBudget,
    TuningPools, CSV_HEADER,
};
use gpcb::Pattern;

use settings::Settings;

#[derive(Debug, Parser)]
#[command(name = "gpcb", version, about = "Generalized parallel concatenated block codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode information bits (`0`/`1` characters) into a frame.
    Encode(Settings),
    /// Decode whitespace-separated channel LLRs into information bits.
    Decode(Settings),
    /// Monte Carlo BER/FER over BPSK/AWGN, written as CSV.
    Simulate(Settings),
    /// Greedy α/β search at the first Eb/N0 point; prints TOML.
    Tune(Settings),
    /// Show the reference codes.
    ListCodes,
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode(s) => encode(&s.resolve()?),
        Command::Decode(s) => decode(&s.resolve()?),
        Command::Simulate(s) => simulate(&s.resolve()?),
        Command::Tune(s) => tune(&s.resolve()?),
        Command::ListCodes => list_codes(),
    }
}

fn read_input(s: &Settings) -> Result<String> {
    let mut text = String::new();
    match &s.input {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn output(s: &Settings) -> Result<Box<dyn Write>> {
    Ok(match &s.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

fn encode(s: &Settings) -> Result<()> {
    let spec = s.spec()?;
    let bits: Vec<u8> = read_input(s)?
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => bail!("unexpected character `{other}` in bit input"),
        })
        .collect::<Result<_>>()?;
    let frame = spec.encode_bits(&bits)?;
    let mut out = output(s)?;
    writeln!(out, "{}", bit_string(&frame))?;
    Ok(())
}

fn decode(s: &Settings) -> Result<()> {
    let spec = s.spec()?;
    let llr: Vec<f64> = read_input(s)?
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad LLR `{t}`")))
        .collect::<Result<_>>()?;
    let report = spec.decode(&llr, &s.params()?)?;
    let mut out = output(s)?;
    writeln!(out, "{}", bit_string(&report.message_bits))?;
    Ok(())
}

fn simulate(s: &Settings) -> Result<()> {
    let spec = s.spec()?;
    let points = s.ebn0_points()?;
    let stop = s.stop_rule();
    let label = RunLabel {
        code: spec.name(),
        construction: spec.construction().to_string(),
        m_blocks: spec.m_blocks(),
        interleaver: s.pattern()?.to_string(),
        seed: s.seed(),
    };
    let codec = GpcbCodec::new(spec, s.params()?);
    let mut out = output(s)?;
    writeln!(out, "{CSV_HEADER}")?;
    for ebn0 in points {
        let result = run_ber(&codec, ebn0, s.seed(), stop)?;
        let last = result.last();
        eprintln!(
            "{} {ebn0} dB: {} frames, BER {:.3e}, FER {:.3e} ({:.1}s)",
            label.code,
            last.frames,
            last.ber(),
            last.fer(),
            result.wall_seconds
        );
        write_csv_rows(&mut out, &label, &result)?;
        out.flush()?;
    }
    Ok(())
}

fn tune(s: &Settings) -> Result<()> {
    let spec = s.spec()?;
    let ebn0 = s.ebn0_points()?[0];
    let channel = ChannelSpec::new(ebn0, spec.rate(), s.seed());
    let mut pools = TuningPools::default();
    if let Some(a) = &s.alpha {
        pools.alpha = a.values()?;
    }
    if let Some(b) = &s.beta {
        pools.beta = b.values()?;
    }
    let budget = TuningBudget { iterations: s.iterations(), frames: s.tune_frames.unwrap_or(200) };
    let params = tune_schedule(&spec, channel, &pools, budget)?;
    let fmt = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = output(s)?;
    writeln!(out, "# {} at {ebn0} dB, seed {}", spec.name(), s.seed())?;
    writeln!(out, "iterations = {}", params.iterations())?;
    writeln!(out, "alpha = [{}]", fmt(params.alpha()))?;
    writeln!(out, "beta = [{}]", fmt(params.beta()))?;
    Ok(())
}

fn list_codes() -> Result<()> {
    let mut out = BufWriter::new(io::stdout());
    writeln!(out, "{:<26} {:<36} {:<12} rate", "code", "components", "construction")?;
    for pair in REFERENCE_PAIRS {
        let construction = pair.family.default_construction();
        for m in REFERENCE_M {
            let spec = pair.spec(m, Pattern::Cyclic, construction)?;
            let (num, den) = spec.rate_fraction();
            writeln!(
                out,
                "{:<26} {:<36} {:<12} {num}/{den} ({:.3})",
                spec.name(),
                pair.to_string(),
                construction,
                spec.rate()
            )?;
        }
    }
    Ok(())
}
