//! Parallel concatenation of two systematic block codes and its iterative
//! decoder.
//!
//! A transmitted frame is `systematic ∥ parity1 ∥ parity2`. Encoder 1 sees
//! the information block split into sub-blocks of `k` symbols; encoder 2
//! sees the interleaved block split the same way.
//!
//! * Construction 1 interleaves whole code symbols. Both codes must use the
//!   same symbol width (bits for BCH, m-bit symbols for RS).
//! * Construction 2 interleaves bits. The information block holds `M·m·k`
//!   bits; a BCH first code consumes `M·m` sub-blocks of `k` bits, and the
//!   interleaved bits are regrouped m at a time into GF(2^m) symbols for
//!   the RS second code.
//!
//! Internally everything runs on binary images, symbols expanded MSB first.

use std::fmt;

use crate::block_codes::{bits_to_symbols, symbols_to_bits, CodeKind, CodeSpec};
use crate::chase_pyndiah::ChasePyndiah;
use crate::error::{Error, Result};
use crate::galois::Gf;
use crate::interleavers::{InterleaverSpec, Pattern, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Symbol-level interleaving, same-width component codes.
    C1,
    /// Bit-level interleaving with regrouping into symbols for an RS second code.
    C2,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Construction::C1 => "c1",
            Construction::C2 => "c2",
        })
    }
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c1" | "1" => Ok(Construction::C1),
            "c2" | "2" => Ok(Construction::C2),
            other => Err(Error::InvalidParams(format!("unknown construction `{other}`"))),
        }
    }
}

/// How to build the interleaver of a [`GpcbSpec`]; size and default
/// geometry follow from the codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverChoice {
    pub pattern: Pattern,
    pub seed: u64,
    /// Overrides the default `M × k` (C1) or `M·m × k` (C2) matrix.
    pub geometry: Option<(usize, usize)>,
    /// Overrides the default cyclic shift ⌊N/2⌋.
    pub shift: Option<usize>,
}

impl InterleaverChoice {
    pub fn new(pattern: Pattern) -> Self {
        InterleaverChoice { pattern, seed: 0, geometry: None, shift: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_geometry(mut self, rows: usize, cols: usize) -> Self {
        self.geometry = Some((rows, cols));
        self
    }

    pub fn with_shift(mut self, shift: usize) -> Self {
        self.shift = Some(shift);
        self
    }
}

impl From<Pattern> for InterleaverChoice {
    fn from(p: Pattern) -> Self {
        InterleaverChoice::new(p)
    }
}

/// Default α schedule, one entry per half-iteration.
pub const DEFAULT_ALPHA: [f64; 16] = [
    0.0, 0.25, 0.3, 0.4, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.92, 0.95, 0.95,
];

/// Default β schedule, one entry per half-iteration.
pub const DEFAULT_BETA: [f64; 16] = [
    0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.87, 0.9,
];

/// Iteration count and per-half-iteration α/β schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeParams {
    iterations: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl DecodeParams {
    /// Schedules given per half-iteration; both need at least
    /// `2·iterations` entries, with 0 ≤ α ≤ 1 and 0 < β ≤ 1.
    pub fn new(iterations: usize, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::InvalidParams("at least one iteration is required".into()));
        }
        let need = 2 * iterations;
        if alpha.len() < need || beta.len() < need {
            return Err(Error::InvalidParams(format!(
                "schedules need {need} half-iteration entries, got α: {}, β: {}",
                alpha.len(),
                beta.len()
            )));
        }
        if let Some(a) = alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::InvalidParams(format!("α = {a} outside [0, 1]")));
        }
        if let Some(b) = beta.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
            return Err(Error::InvalidParams(format!("β = {b} outside (0, 1]")));
        }
        Ok(DecodeParams { iterations, alpha, beta })
    }

    /// The default schedules truncated to `iterations`, holding the last
    /// value beyond eight iterations.
    pub fn with_defaults(iterations: usize) -> Result<Self> {
        let extend = |v: &[f64]| -> Vec<f64> {
            (0..2 * iterations).map(|i| v[i.min(v.len() - 1)]).collect()
        };
        DecodeParams::new(iterations, extend(&DEFAULT_ALPHA), extend(&DEFAULT_BETA))
    }

    /// Accepts one value for all half-iterations, one per iteration (used
    /// for both halves), or one per half-iteration.
    pub fn from_lists(iterations: usize, alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let expand = |v: &[f64], name: &str| -> Result<Vec<f64>> {
            match v.len() {
                1 => Ok(vec![v[0]; 2 * iterations]),
                n if n == iterations => Ok(v.iter().flat_map(|&x| [x, x]).collect()),
                n if n >= 2 * iterations => Ok(v.to_vec()),
                n => Err(Error::InvalidParams(format!(
                    "{name} list has {n} entries; expected 1, {iterations} or {}",
                    2 * iterations
                ))),
            }
        };
        DecodeParams::new(iterations, expand(alpha, "α")?, expand(beta, "β")?)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Same schedules, fewer iterations.
    pub fn truncated(&self, iterations: usize) -> Result<Self> {
        DecodeParams::new(iterations, self.alpha.clone(), self.beta.clone())
    }
}

/// Which component decoder is running.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

/// Hook into the iterative decoder, for tracing and tests.
pub trait DecodeObserver {
    /// Called with the soft input of every component decode. `half` counts
    /// half-iterations from 0; `block` is the sub-block index in the
    /// component's own (for the second decoder: interleaved) order.
    fn component_input(&mut self, half: usize, component: Component, block: usize, soft_in: &[f64]);
}

impl DecodeObserver for () {
    fn component_input(&mut self, _: usize, _: Component, _: usize, _: &[f64]) {}
}

/// Hard decisions produced by [`GpcbSpec::decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    /// Information bits after the last half-iteration.
    pub message_bits: Vec<u8>,
    /// Information-bit decisions after every half-iteration, natural order.
    pub half_iterations: Vec<Vec<u8>>,
}

impl DecodeReport {
    /// Decision at the end of iteration `i` (1-based).
    pub fn after_iteration(&self, i: usize) -> &[u8] {
        &self.half_iterations[2 * i - 1]
    }
}

/// A GPCB code: two component codes, the block multiplier M, the
/// interleaver and the construction variant.
#[derive(Debug, Clone)]
pub struct GpcbSpec {
    code1: CodeSpec,
    code2: CodeSpec,
    m_blocks: usize,
    construction: Construction,
    interleaver: InterleaverSpec,
    perm_bits: Permutation,
    dec1: ChasePyndiah,
    dec2: ChasePyndiah,
    unit_bits: usize,
    n_bits: usize,
    blocks1: usize,
    blocks2: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GpcbSpec {
    pub fn new(
        code1: CodeSpec,
        code2: CodeSpec,
        m_blocks: usize,
        interleaver: impl Into<InterleaverChoice>,
        construction: Construction,
    ) -> Result<Self> {
        let choice = interleaver.into();
        let k = code1.k();
        if m_blocks == 0 {
            return Err(Error::IncompatibleCodes("M must be at least 1".into()));
        }
        if code2.k() != k {
            return Err(Error::IncompatibleCodes(format!(
                "dimensions differ: {code1} vs {code2}"
            )));
        }
        let (unit_bits, n_units, rows) = match construction {
            Construction::C1 => {
                if code1.symbol_bits() != code2.symbol_bits() {
                    return Err(Error::IncompatibleCodes(format!(
                        "construction 1 needs equal symbol widths: {code1} vs {code2}"
                    )));
                }
                (code1.symbol_bits(), m_blocks * k, m_blocks)
            }
            Construction::C2 => {
                if code2.kind() != CodeKind::Rs || code1.n() != code2.n() {
                    return Err(Error::IncompatibleCodes(format!(
                        "construction 2 pairs BCH or RS with an RS code of the same length: \
                         {code1} vs {code2}"
                    )));
                }
                if code1.field().m() != code2.field().m() {
                    return Err(Error::IncompatibleCodes("fields differ".into()));
                }
                let m = code2.symbol_bits();
                (1, m_blocks * m * k, m_blocks * m)
            }
        };
        let n_bits = n_units * unit_bits;
        let (rows, cols) = choice.geometry.unwrap_or((rows, k));
        let mut ispec = InterleaverSpec::new(choice.pattern, n_units)
            .with_seed(choice.seed)
            .with_geometry(rows, cols);
        if let Some(s) = choice.shift {
            ispec = ispec.with_shift(s);
        }
        let perm_bits = ispec.build()?.expand(unit_bits);
        let blocks1 = n_bits / (k * code1.symbol_bits());
        let blocks2 = n_bits / (k * code2.symbol_bits());
        Ok(GpcbSpec {
            dec1: ChasePyndiah::new(code1.clone()),
            dec2: ChasePyndiah::new(code2.clone()),
            code1,
            code2,
            m_blocks,
            construction,
            interleaver: ispec,
            perm_bits,
            unit_bits,
            n_bits,
            blocks1,
            blocks2,
        })
    }

    pub fn code1(&self) -> &CodeSpec {
        &self.code1
    }

    pub fn code2(&self) -> &CodeSpec {
        &self.code2
    }

    pub fn m_blocks(&self) -> usize {
        self.m_blocks
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn interleaver(&self) -> &InterleaverSpec {
        &self.interleaver
    }

    /// The interleaver acting on information bits.
    pub fn bit_permutation(&self) -> &Permutation {
        &self.perm_bits
    }

    /// Bits per message unit: the symbol width for construction 1, 1 for
    /// construction 2.
    pub fn unit_bits(&self) -> usize {
        self.unit_bits
    }

    /// Information length N in units.
    pub fn n(&self) -> usize {
        self.n_bits / self.unit_bits
    }

    /// Parity produced by encoder 1, in units.
    pub fn p1(&self) -> usize {
        self.p1_bits() / self.unit_bits
    }

    /// Parity produced by encoder 2, in units.
    pub fn p2(&self) -> usize {
        self.p2_bits() / self.unit_bits
    }

    pub fn p(&self) -> usize {
        self.p1() + self.p2()
    }

    /// Frame length L = N + P in units.
    pub fn l(&self) -> usize {
        self.n() + self.p()
    }

    pub fn info_bits(&self) -> usize {
        self.n_bits
    }

    fn p1_bits(&self) -> usize {
        self.blocks1 * (self.code1.n() - self.code1.k()) * self.code1.symbol_bits()
    }

    fn p2_bits(&self) -> usize {
        self.blocks2 * (self.code2.n() - self.code2.k()) * self.code2.symbol_bits()
    }

    /// Transmitted bits per frame.
    pub fn frame_bits(&self) -> usize {
        self.n_bits + self.p1_bits() + self.p2_bits()
    }

    /// The `(L, N)` pair in component-symbol units, as codes are usually
    /// named: M·(n1 + n2 − k) and M·k.
    pub fn notation(&self) -> (usize, usize) {
        let k = self.code1.k();
        (self.m_blocks * (self.code1.n() + self.code2.n() - k), self.m_blocks * k)
    }

    /// Code rate k/(n1 + n2 − k) as a reduced fraction.
    pub fn rate_fraction(&self) -> (usize, usize) {
        let k = self.code1.k();
        let den = self.code1.n() + self.code2.n() - k;
        let g = gcd(k, den);
        (k / g, den / g)
    }

    pub fn rate(&self) -> f64 {
        let (a, b) = self.rate_fraction();
        a as f64 / b as f64
    }

    /// Family label and notation, e.g. `GPCB-BCH-RS(141, 113)`.
    pub fn name(&self) -> String {
        let family = match (self.code1.kind(), self.code2.kind()) {
            (CodeKind::Bch, CodeKind::Bch) => "GPCB-BCH",
            (CodeKind::Rs, CodeKind::Rs) => "GPCB-RS",
            (CodeKind::Bch, CodeKind::Rs) => "GPCB-BCH-RS",
            (CodeKind::Rs, CodeKind::Bch) => "GPCB-RS-BCH",
        };
        let (l, n) = self.notation();
        format!("{family}({l}, {n})")
    }

    /// Expands message units to information bits.
    pub fn units_to_bits(&self, units: &[Gf]) -> Vec<u8> {
        symbols_to_bits(units, self.unit_bits)
    }

    pub fn bits_to_units(&self, bits: &[u8]) -> Vec<Gf> {
        bits_to_symbols(bits, self.unit_bits)
    }

    /// Encodes N message units into L units: systematic ∥ parity1 ∥ parity2.
    pub fn encode(&self, message: &[Gf]) -> Result<Vec<Gf>> {
        if message.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: message.len() });
        }
        let max = ((1u32 << self.unit_bits) - 1) as Gf;
        if message.iter().any(|&u| u > max) {
            return Err(Error::InvalidParams("message unit out of range".into()));
        }
        let bits = self.encode_bits(&self.units_to_bits(message))?;
        Ok(self.bits_to_units(&bits))
    }

    /// Encodes N·unit_bits information bits into the transmitted frame bits.
    pub fn encode_bits(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.n_bits {
            return Err(Error::LengthMismatch { expected: self.n_bits, actual: info.len() });
        }
        let mut out = Vec::with_capacity(self.frame_bits());
        out.extend_from_slice(info);
        let parities = |code: &CodeSpec, sys: &[u8], out: &mut Vec<u8>| -> Result<()> {
            let w = code.symbol_bits();
            for block in sys.chunks(code.k() * w) {
                let cw = code.encode(&bits_to_symbols(block, w))?;
                out.extend(symbols_to_bits(&cw[code.k()..], w));
            }
            Ok(())
        };
        parities(&self.code1, info, &mut out)?;
        let interleaved = self.perm_bits.apply(info)?;
        parities(&self.code2, &interleaved, &mut out)?;
        Ok(out)
    }

    /// Iterative decoding of one frame of normalized channel LLRs.
    pub fn decode(&self, channel: &[f64], params: &DecodeParams) -> Result<DecodeReport> {
        self.decode_observed(channel, params, &mut ())
    }

    /// [`GpcbSpec::decode`] with an observer receiving every component input.
    ///
    /// Half-iteration 2i−1 runs decoder 1 on `[sys + α·w2, parity1]`;
    /// half-iteration 2i runs decoder 2 on `Π[sys + α·w1]` and `parity2`.
    /// Each decoder's extrinsic output on the systematic bits is what the
    /// other one receives next. The reported decision after a half-iteration
    /// is that decoder's decision on the systematic bits.
    pub fn decode_observed(
        &self,
        channel: &[f64],
        params: &DecodeParams,
        observer: &mut dyn DecodeObserver,
    ) -> Result<DecodeReport> {
        let total = self.frame_bits();
        if channel.len() != total {
            return Err(Error::LengthMismatch { expected: total, actual: channel.len() });
        }
        let nb = self.n_bits;
        let (sys, rest) = channel.split_at(nb);
        let (par1, par2) = rest.split_at(self.p1_bits());
        let fwd = self.perm_bits.forward();

        let mut w1 = vec![0.0; nb];
        let mut w2 = vec![0.0; nb];
        let mut w2_il = vec![0.0; nb];
        let mut sys_il = vec![0.0; nb];
        let mut decided = vec![0u8; nb];
        let mut decided_il = vec![0u8; nb];
        let mut snapshots = Vec::with_capacity(2 * params.iterations());

        for it in 0..params.iterations() {
            let h = 2 * it;
            let (alpha, beta) = (params.alpha()[h], params.beta()[h]);
            let updated: Vec<f64> = sys.iter().zip(&w2).map(|(r, w)| r + alpha * w).collect();
            run_component(
                &self.dec1,
                &updated,
                par1,
                beta,
                &mut w1,
                &mut decided,
                |blk, input| observer.component_input(h, Component::First, blk, input),
            )?;
            snapshots.push(decided.clone());

            let h = h + 1;
            let (alpha, beta) = (params.alpha()[h], params.beta()[h]);
            for (dst, &f) in sys_il.iter_mut().zip(fwd) {
                *dst = sys[f] + alpha * w1[f];
            }
            run_component(
                &self.dec2,
                &sys_il,
                par2,
                beta,
                &mut w2_il,
                &mut decided_il,
                |blk, input| observer.component_input(h, Component::Second, blk, input),
            )?;
            for (i, &f) in fwd.iter().enumerate() {
                w2[f] = w2_il[i];
                decided[f] = decided_il[i];
            }
            snapshots.push(decided.clone());
        }
        Ok(DecodeReport { message_bits: decided, half_iterations: snapshots })
    }
}

/// Runs one component decoder over all of its sub-blocks.
fn run_component(
    dec: &ChasePyndiah,
    sys: &[f64],
    parity: &[f64],
    beta: f64,
    extrinsic: &mut [f64],
    decided: &mut [u8],
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<()> {
    let code = dec.code();
    let w = code.symbol_bits();
    let kb = code.k() * w;
    let pb = (code.n() - code.k()) * w;
    let mut input = vec![0.0; kb + pb];
    for (blk, (s, p)) in sys.chunks(kb).zip(parity.chunks(pb)).enumerate() {
        input[..kb].copy_from_slice(s);
        input[kb..].copy_from_slice(p);
        observe(blk, &input);
        let out = dec.decode(&input, beta)?;
        let range = blk * kb..(blk + 1) * kb;
        extrinsic[range.clone()].copy_from_slice(&out.extrinsic[..kb]);
        decided[range].copy_from_slice(&out.decision_bits[..kb]);
    }
    Ok(())
}
