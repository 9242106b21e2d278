//! BPSK over AWGN, Monte Carlo BER/FER estimation and α/β schedule tuning.
//!
//! Every frame draws from its own ChaCha8 stream derived from
//! `(seed, frame index)`, so results do not depend on how frames are spread
//! over threads. Frames are simulated in fixed-size batches in parallel and
//! accumulated in frame order; the stop rule is checked frame by frame.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gpcb::{DecodeParams, GpcbSpec};

/// Eb/N0 operating point for a code of the given rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub ebn0_db: f64,
    pub rate: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(ebn0_db: f64, rate: f64, seed: u64) -> Self {
        ChannelSpec { ebn0_db, rate, seed }
    }

    /// Noise standard deviation for unit-energy BPSK symbols:
    /// σ = sqrt(1 / (2·R·10^(Eb/N0 / 10))).
    pub fn sigma(&self) -> f64 {
        (1.0 / (2.0 * self.rate * 10f64.powf(self.ebn0_db / 10.0))).sqrt()
    }
}

/// Bit 1 → +1.0, bit 0 → −1.0.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 1 { 1.0 } else { -1.0 }).collect()
}

/// Adds i.i.d. N(0, σ²) noise (ziggurat sampler) in place.
pub fn awgn<R: Rng + ?Sized>(symbols: &mut [f64], sigma: f64, rng: &mut R) {
    for s in symbols {
        let z: f64 = rng.sample(StandardNormal);
        *s += sigma * z;
    }
}

/// In the normalized-LLR domain the received sample is the soft input.
pub fn channel_llr(received: &[f64]) -> Vec<f64> {
    received.to_vec()
}

/// The random stream used for frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Anything that maps information bits to channel bits and back, reporting
/// a decision after every decoding iteration.
pub trait FrameCodec: Sync {
    fn info_bits(&self) -> usize;
    fn frame_bits(&self) -> usize;
    fn rate(&self) -> f64;
    fn iterations(&self) -> usize;
    fn encode(&self, info: &[u8]) -> Result<Vec<u8>>;
    /// One information-bit decision per iteration.
    fn decode(&self, llr: &[f64]) -> Result<Vec<Vec<u8>>>;
}

/// Pass-through "code": hard decisions on the channel samples.
#[derive(Debug, Clone, Copy)]
pub struct Uncoded {
    pub bits: usize,
}

impl FrameCodec for Uncoded {
    fn info_bits(&self) -> usize {
        self.bits
    }

    fn frame_bits(&self) -> usize {
        self.bits
    }

    fn rate(&self) -> f64 {
        1.0
    }

    fn iterations(&self) -> usize {
        1
    }

    fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        Ok(info.to_vec())
    }

    fn decode(&self, llr: &[f64]) -> Result<Vec<Vec<u8>>> {
        Ok(vec![llr.iter().map(|&r| (r > 0.0) as u8).collect()])
    }
}

/// A GPCB code with its decoding schedule.
#[derive(Debug, Clone)]
pub struct GpcbCodec {
    pub spec: GpcbSpec,
    pub params: DecodeParams,
}

impl GpcbCodec {
    pub fn new(spec: GpcbSpec, params: DecodeParams) -> Self {
        GpcbCodec { spec, params }
    }
}

impl FrameCodec for GpcbCodec {
    fn info_bits(&self) -> usize {
        self.spec.info_bits()
    }

    fn frame_bits(&self) -> usize {
        self.spec.frame_bits()
    }

    fn rate(&self) -> f64 {
        self.spec.rate()
    }

    fn iterations(&self) -> usize {
        self.params.iterations()
    }

    fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        self.spec.encode_bits(info)
    }

    fn decode(&self, llr: &[f64]) -> Result<Vec<Vec<u8>>> {
        let report = self.spec.decode(llr, &self.params)?;
        Ok((1..=self.params.iterations())
            .map(|i| report.after_iteration(i).to_vec())
            .collect())
    }
}

/// Run until `min_frame_errors` frames are wrong after the last iteration,
/// or `max_frames` frames have been simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { min_frame_errors: 100, max_frames: 1_000_000 }
    }
}

impl StopRule {
    /// Exactly `frames` frames, whatever the error count.
    pub fn fixed(frames: u64) -> Self {
        StopRule { min_frame_errors: u64::MAX, max_frames: frames }
    }
}

/// Error counters for one decoding iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IterationStats {
    pub iteration: usize,
    pub bits: u64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

impl IterationStats {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits)
    }

    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames)
    }

    /// Binomial standard error of [`IterationStats::ber`].
    pub fn ber_std_error(&self) -> f64 {
        let p = self.ber();
        if self.bits == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.bits as f64).sqrt()
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Outcome of [`run_ber`] at one Eb/N0.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub channel: ChannelSpec,
    pub sigma: f64,
    pub stop: StopRule,
    pub iterations: Vec<IterationStats>,
    pub wall_seconds: f64,
}

impl SimResult {
    pub fn last(&self) -> &IterationStats {
        self.iterations.last().expect("at least one iteration")
    }

    /// Stats after iteration `i` (1-based).
    pub fn iteration(&self, i: usize) -> &IterationStats {
        &self.iterations[i - 1]
    }
}

const BATCH: u64 = 64;

/// Per-frame error counts for every iteration.
fn simulate_frame(
    codec: &dyn FrameCodec,
    sigma: f64,
    seed: u64,
    frame: u64,
) -> Result<Vec<u64>> {
    let mut rng = frame_rng(seed, frame);
    let info: Vec<u8> = (0..codec.info_bits()).map(|_| rng.random_range(0..2u8)).collect();
    let mut symbols = modulate(&codec.encode(&info)?);
    awgn(&mut symbols, sigma, &mut rng);
    let decisions = codec.decode(&channel_llr(&symbols))?;
    Ok(decisions
        .iter()
        .map(|d| d.iter().zip(&info).filter(|(a, b)| a != b).count() as u64)
        .collect())
}

/// Monte Carlo BER/FER of `codec` over BPSK/AWGN. Counts information bits
/// only. The result is a deterministic function of the arguments.
pub fn run_ber(codec: &dyn FrameCodec, ebn0_db: f64, seed: u64, stop: StopRule) -> Result<SimResult> {
    if stop.min_frame_errors == 0 {
        return Err(Error::InvalidParams("min_frame_errors must be at least 1".into()));
    }
    let start = Instant::now();
    let channel = ChannelSpec::new(ebn0_db, codec.rate(), seed);
    let sigma = channel.sigma();
    let iterations = codec.iterations();
    let info_bits = codec.info_bits() as u64;
    let mut stats: Vec<IterationStats> = (1..=iterations)
        .map(|iteration| IterationStats { iteration, ..Default::default() })
        .collect();

    let mut next = 0u64;
    'run: while next < stop.max_frames {
        let end = (next + BATCH).min(stop.max_frames);
        let batch: Vec<Result<Vec<u64>>> = (next..end)
            .into_par_iter()
            .map(|f| simulate_frame(codec, sigma, seed, f))
            .collect();
        for errors in batch {
            let errors = errors?;
            for (s, &e) in stats.iter_mut().zip(&errors) {
                s.frames += 1;
                s.bits += info_bits;
                s.bit_errors += e;
                s.frame_errors += (e > 0) as u64;
            }
            if stats[iterations - 1].frame_errors >= stop.min_frame_errors {
                break 'run;
            }
        }
        next = end;
    }
    Ok(SimResult {
        channel,
        sigma,
        stop,
        iterations: stats,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Candidate values for the greedy schedule search.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningPools {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl Default for TuningPools {
    /// The value lists used for the reference experiments.
    fn default() -> Self {
        TuningPools {
            alpha: vec![
                0.0, 0.25, 0.3, 0.4, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.92, 0.95,
            ],
            beta: vec![
                0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.87,
                0.9,
            ],
        }
    }
}

/// Effort spent by [`tune_schedule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TuningBudget {
    pub iterations: usize,
    /// Frames in the fixed evaluation set.
    pub frames: u64,
}

/// Greedy coordinate search for α and β.
///
/// Iterations are added one at a time. For the new iteration, α is swept
/// over its pool with β fixed, then β with the chosen α. Then every earlier
/// iteration is re-swept the same way, measured at the current iteration
/// count. Each iteration uses one α and one β for both of its
/// half-iterations. All evaluations decode the same frames (`channel.seed`),
/// and a candidate replaces the incumbent only if its BER is strictly lower,
/// so ties keep the earlier pool element.
pub fn tune_schedule(
    spec: &GpcbSpec,
    channel: ChannelSpec,
    pools: &TuningPools,
    budget: TuningBudget,
) -> Result<DecodeParams> {
    if pools.alpha.is_empty() || pools.beta.is_empty() {
        return Err(Error::InvalidParams("tuning pools must be non-empty".into()));
    }
    if budget.iterations == 0 || budget.frames == 0 {
        return Err(Error::InvalidParams("tuning budget must be positive".into()));
    }
    let stop = StopRule::fixed(budget.frames);
    let evaluate = |alpha: &[f64], beta: &[f64]| -> Result<u64> {
        let params = DecodeParams::from_lists(alpha.len(), alpha, beta)?;
        let codec = GpcbCodec::new(spec.clone(), params);
        Ok(run_ber(&codec, channel.ebn0_db, channel.seed, stop)?.last().bit_errors)
    };
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for it in 0..budget.iterations {
        alpha.push(pools.alpha[0]);
        beta.push(pools.beta[0]);
        let mut best = evaluate(&alpha, &beta)?;
        let order: Vec<usize> = std::iter::once(it).chain(0..it).collect();
        for j in order {
            for (pool, which) in [(&pools.alpha, 0), (&pools.beta, 1)] {
                for &v in pool.iter() {
                    let target = if which == 0 { &mut alpha } else { &mut beta };
                    let old = target[j];
                    if v == old {
                        continue;
                    }
                    target[j] = v;
                    let errors = evaluate(&alpha, &beta)?;
                    if errors < best {
                        best = errors;
                    } else {
                        let target = if which == 0 { &mut alpha } else { &mut beta };
                        target[j] = old;
                    }
                }
            }
        }
    }
    DecodeParams::from_lists(budget.iterations, &alpha, &beta)
}

/// Header of the BER table consumed by the plotting tools.
pub const CSV_HEADER: &str =
    "code,construction,M,interleaver,seed,ebn0_db,iteration,bits,frames,bit_errors,frame_errors,ber,fer";

/// Identifies the experiment a [`SimResult`] belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLabel {
    pub code: String,
    pub construction: String,
    pub m_blocks: usize,
    pub interleaver: String,
    pub seed: u64,
}

/// Formats like C's `%.6g`.
pub fn format_g6(x: f64) -> String {
    const P: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..P).contains(&exp) {
        let (mantissa, _) = sci.split_at(sci.find('e').unwrap());
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes one row per iteration of `result`.
pub fn write_csv_rows<W: Write>(out: &mut W, label: &RunLabel, result: &SimResult) -> std::io::Result<()> {
    for s in &result.iterations {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&label.code),
            csv_field(&label.construction),
            label.m_blocks,
            csv_field(&label.interleaver),
            label.seed,
            format_g6(result.channel.ebn0_db),
            s.iteration,
            s.bits,
            s.frames,
            s.bit_errors,
            s.frame_errors,
            format_g6(s.ber()),
            format_g6(s.fer()),
        )?;
    }
    Ok(())
}

/// Header plus all rows.
pub fn write_csv<W: Write>(out: &mut W, rows: &[(RunLabel, SimResult)]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for (label, result) in rows {
        write_csv_rows(out, label, result)?;
    }
    Ok(())
}

/// Parses `start:step:stop` (inclusive, in dB) or a single value.
pub fn parse_ebn0_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParams(format!("bad Eb/N0 range `{s}`; expected start:step:stop"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [start, step, stop] => {
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}
