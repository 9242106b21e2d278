//! Options shared by every subcommand, from flags or a TOML file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use gpcb::catalog::CodeName;
use gpcb::simulator::{parse_ebn0_range, StopRule};
use gpcb::{Construction, DecodeParams, GpcbSpec, InterleaverChoice, Pattern};
use serde::Deserialize;

/// A list of reals given as `0.1,0.2` or, in the config file, as an array.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FloatList {
    Text(String),
    Values(Vec<f64>),
}

impl FloatList {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            FloatList::Values(v) => Ok(v.clone()),
            FloatList::Text(s) => s
                .split(',')
                .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number `{p}`")))
                .collect(),
        }
    }
}

fn parse_float_list(s: &str) -> Result<FloatList, String> {
    let list = FloatList::Text(s.to_string());
    list.values().map_err(|e| e.to_string())?;
    Ok(list)
}

/// Every flag can also be set in the file given by `--config`; flags win.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// TOML file with any of these options (keys match the flag names).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Code name such as `GPCB-BCH(141,113)`, or `bch(n,k,t)`, `rs(n,k,t)`,
    /// `bch-rs(n,k,t)`.
    #[arg(long)]
    pub code: Option<String>,

    /// c1 (symbol interleaving) or c2 (bit interleaving). Defaults to c2
    /// for BCH-RS pairs and c1 otherwise.
    #[arg(long)]
    pub construction: Option<String>,

    /// Number of component blocks M. Defaults to the M implied by a GPCB
    /// name, else 1.
    #[arg(long)]
    pub m_blocks: Option<usize>,

    /// random, block, diagonal, cyclic, helical or berrou.
    #[arg(long)]
    pub interleaver: Option<String>,

    /// Seed for the random interleaver and the channel.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Eb/N0 in dB: `start:step:stop` or a single value.
    #[arg(long)]
    pub ebn0: Option<String>,

    /// Decoding iterations.
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Stop an Eb/N0 point after this many frame errors.
    #[arg(long)]
    pub min_frame_errors: Option<u64>,

    /// Stop an Eb/N0 point after this many frames.
    #[arg(long)]
    pub max_frames: Option<u64>,

    /// α values: one, one per iteration, or one per half-iteration.
    #[arg(long, value_parser = parse_float_list)]
    pub alpha: Option<FloatList>,

    /// β values: one, one per iteration, or one per half-iteration.
    #[arg(long, value_parser = parse_float_list)]
    pub beta: Option<FloatList>,

    /// Frames per evaluation when tuning.
    #[arg(long)]
    pub tune_frames: Option<u64>,

    /// Input file (stdin if absent).
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident, $($f:ident),*) => {
        Settings { config: $a.config.clone(), $($f: $a.$f.clone().or_else(|| $b.$f.clone())),* }
    };
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fills unset fields from `fallback`.
    pub fn or(&self, fallback: &Settings) -> Settings {
        merge_fields!(
            self, fallback, code, construction, m_blocks, interleaver, seed, ebn0, iterations,
            min_frame_errors, max_frames, alpha, beta, tune_frames, input, out
        )
    }

    /// Flags merged over the config file, if one was given.
    pub fn resolve(&self) -> Result<Settings> {
        match &self.config {
            Some(path) => Ok(self.or(&Settings::from_file(path)?)),
            None => Ok(self.clone()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn code_name(&self) -> Result<CodeName> {
        let Some(code) = &self.code else {
            bail!("no code given; use --code or `code = ...` in the config file");
        };
        Ok(code.parse()?)
    }

    pub fn pattern(&self) -> Result<Pattern> {
        Ok(self.interleaver.as_deref().unwrap_or("random").parse()?)
    }

    pub fn spec(&self) -> Result<GpcbSpec> {
        let name = self.code_name()?;
        let construction = match &self.construction {
            Some(c) => c.parse::<Construction>()?,
            None => name.pair.family.default_construction(),
        };
        let m_blocks = self.m_blocks.or(name.m_blocks).unwrap_or(1);
        let choice = InterleaverChoice::new(self.pattern()?).with_seed(self.seed());
        Ok(name.pair.spec(m_blocks, choice, construction)?)
    }

    pub fn iterations(&self) -> usize {
        self.iterations.unwrap_or(8)
    }

    pub fn params(&self) -> Result<DecodeParams> {
        let it = self.iterations();
        let defaults = DecodeParams::with_defaults(it)?;
        let alpha = match &self.alpha {
            Some(a) => a.values()?,
            None => defaults.alpha().to_vec(),
        };
        let beta = match &self.beta {
            Some(b) => b.values()?,
            None => defaults.beta().to_vec(),
        };
        Ok(DecodeParams::from_lists(it, &alpha, &beta)?)
    }

    pub fn ebn0_points(&self) -> Result<Vec<f64>> {
        let Some(range) = &self.ebn0 else {
            bail!("no Eb/N0 given; use --ebn0 start:step:stop");
        };
        Ok(parse_ebn0_range(range)?)
    }

    pub fn stop_rule(&self) -> StopRule {
        let d = StopRule::default();
        StopRule {
            min_frame_errors: self.min_frame_errors.unwrap_or(d.min_frame_errors),
            max_frames: self.max_frames.unwrap_or(d.max_frames),
        }
    }
}
