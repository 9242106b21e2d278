//! Chase-Pyndiah soft-input/soft-output decoding of one component word.
//!
//! Soft values are normalized LLRs over the binary image of a word, bit `f`
//! of symbol `j` at index `j·m + f` (MSB first). A positive value means bit
//! 1 (antipodal +1). The decoder never sees the noise variance.
//!
//! Decoding:
//! 1. Take the hard decision and the five least reliable positions.
//! 2. For each of the 18 test sequences, flip the chosen positions and run
//!    the algebraic bounded-distance decoder; keep the distinct codewords.
//! 3. The decision is the candidate at minimum squared Euclidean distance.
//! 4. Per bit, the soft output is `(M_competitor − M_decision) / 4` signed
//!    by the decision, where the competitor is the nearest candidate with
//!    the opposite bit there. The extrinsic value is `w = r′ − r`.
//! 5. Without a competitor the extrinsic value is `β` signed by the
//!    decision, so `r′ = r + β·d`.
//!
//! Step 5 keeps `w` independent of `r` in both branches. Setting `r′ = β·d`
//! instead would give `w = β·d − r`, which feeds the input back with the
//! opposite sign; in iterative decoding that makes even noiseless frames
//! drift away from the transmitted codeword.
//!
//! Candidates are kept as the sorted set of bit positions where they differ
//! from the hard decision, so the distance of a candidate is
//! `Σ(|r|−1)² + 4·Σ_{diff}|r|`.

use crate::block_codes::CodeSpec;
use crate::error::{Error, Result};
use crate::galois::Gf;

/// Number of least reliable positions explored by default.
pub const DEFAULT_LEAST_RELIABLE: usize = 5;

// Bit r set means the (r+1)-th least reliable position is flipped.
const APPENDIX_MASKS: [u8; 18] = [
    0b00000, 0b00001, 0b00010, 0b00011, 0b00100, 0b00101, 0b01000, 0b00110, 0b01001, 0b00111,
    0b10001, 0b01110, 0b01111, 0b10101, 0b11011, 0b11101, 0b11110, 0b11111,
];

/// A Chase test sequence: which of the least reliable positions to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TestPattern {
    mask: u8,
}

impl TestPattern {
    /// Reliability ranks flipped by this pattern; rank 0 is the least
    /// reliable position.
    pub fn flip_set(&self) -> Vec<usize> {
        (0..8).filter(|&r| self.mask >> r & 1 == 1).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

/// The 18 test sequences Y^0..Y^17 over five least reliable positions.
pub fn test_patterns() -> Vec<TestPattern> {
    APPENDIX_MASKS.iter().map(|&mask| TestPattern { mask }).collect()
}

/// Test sequences restricted to the `count` least reliable positions: the
/// subsets of the full list touching only those ranks.
pub fn test_patterns_for(count: usize) -> Vec<TestPattern> {
    let limit = 1u16 << count.min(DEFAULT_LEAST_RELIABLE);
    test_patterns()
        .into_iter()
        .filter(|p| (p.mask as u16) < limit)
        .collect()
}

/// Indices of the `count` smallest magnitudes, least reliable first; ties go
/// to the lower index.
pub fn least_reliable(values: &[f64], count: usize) -> Vec<usize> {
    let count = count.min(values.len());
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(count + 1);
    for (i, v) in values.iter().enumerate() {
        let a = v.abs();
        if best.len() == count && best.last().is_none_or(|&(b, _)| a >= b) {
            continue;
        }
        let at = best.partition_point(|&(b, _)| b <= a);
        best.insert(at, (a, i));
        best.truncate(count);
    }
    best.into_iter().map(|(_, i)| i).collect()
}

/// Hard decision of a soft word: 1 for strictly positive values.
pub fn hard_decision(values: &[f64]) -> Vec<u8> {
    values.iter().map(|&v| (v > 0.0) as u8).collect()
}

/// A codeword found by the Chase search.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Sorted bit positions where the codeword differs from the hard
    /// decision of the soft input.
    pub diff: Vec<usize>,
    /// Squared Euclidean distance |R − C|² to the soft input.
    pub metric: f64,
}

impl Candidate {
    /// Builds a candidate from the binary image of a codeword.
    pub fn from_bits(soft_in: &[f64], bits: &[u8]) -> Candidate {
        let diff: Vec<usize> = soft_in
            .iter()
            .zip(bits)
            .enumerate()
            .filter(|(_, (&r, &b))| ((r > 0.0) as u8) != b)
            .map(|(i, _)| i)
            .collect();
        let metric = base_metric(soft_in) + 4.0 * diff.iter().map(|&i| soft_in[i].abs()).sum::<f64>();
        Candidate { diff, metric }
    }

    /// Binary image of the candidate codeword.
    pub fn bits(&self, soft_in: &[f64]) -> Vec<u8> {
        let mut bits = hard_decision(soft_in);
        for &i in &self.diff {
            bits[i] ^= 1;
        }
        bits
    }
}

fn base_metric(soft_in: &[f64]) -> f64 {
    soft_in.iter().map(|r| (r.abs() - 1.0).powi(2)).sum()
}

/// Output of one SISO decode.
#[derive(Debug, Clone, PartialEq)]
pub struct SisoOutput {
    /// r′, the soft output: `r + w`.
    pub soft_out: Vec<f64>,
    /// w = r′ − r.
    pub extrinsic: Vec<f64>,
    /// Binary image of the decision.
    pub decision_bits: Vec<u8>,
    /// The decision as code symbols.
    pub decision: Vec<Gf>,
    /// Whether a competing candidate existed at each bit.
    pub competitor_found: Vec<bool>,
    /// Number of distinct candidates found.
    pub candidates: usize,
    /// True when no test sequence decoded and the hard decision was kept.
    pub fallback: bool,
}

/// Chase-Pyndiah decoder bound to one component code.
#[derive(Debug, Clone)]
pub struct ChasePyndiah {
    code: CodeSpec,
    least_reliable: usize,
    patterns: Vec<TestPattern>,
}

impl ChasePyndiah {
    /// Decoder with the standard five least reliable positions and 18 test
    /// sequences (fewer if the binary image is shorter than five bits).
    pub fn new(code: CodeSpec) -> Self {
        let count = DEFAULT_LEAST_RELIABLE.min(code.binary_len());
        ChasePyndiah { patterns: test_patterns_for(count), least_reliable: count, code }
    }

    /// Decoder exploring only the `count` least reliable positions.
    pub fn with_least_reliable(code: CodeSpec, count: usize) -> Result<Self> {
        if count == 0 || count > DEFAULT_LEAST_RELIABLE || count > code.binary_len() {
            return Err(Error::InvalidParams(format!(
                "least reliable count {count} must be in 1..={}",
                DEFAULT_LEAST_RELIABLE.min(code.binary_len())
            )));
        }
        Ok(ChasePyndiah { patterns: test_patterns_for(count), least_reliable: count, code })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn patterns(&self) -> &[TestPattern] {
        &self.patterns
    }

    fn check_len(&self, soft_in: &[f64]) -> Result<()> {
        let expected = self.code.binary_len();
        if soft_in.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: soft_in.len() });
        }
        Ok(())
    }

    /// The distinct codewords reached from the test sequences, in order of
    /// first discovery.
    pub fn candidates(&self, soft_in: &[f64]) -> Result<Vec<Candidate>> {
        self.check_len(soft_in)?;
        let code = &self.code;
        let width = code.symbol_bits();
        let hard = hard_decision(soft_in);
        let base_syn = code.syndromes(&code.bits_to_symbols(&hard));
        let lrp = least_reliable(soft_in, self.least_reliable);
        let base = base_metric(soft_in);

        let mut out: Vec<Candidate> = Vec::with_capacity(self.patterns.len());
        let mut syn = base_syn.clone();
        for pattern in &self.patterns {
            syn.copy_from_slice(&base_syn);
            let mut diff: Vec<usize> = Vec::with_capacity(8 + code.t() * width);
            for rank in pattern.flip_set() {
                let bit = lrp[rank];
                let mask = 1 << (width - 1 - bit % width);
                code.add_to_syndromes(&mut syn, bit / width, mask);
                diff.push(bit);
            }
            let Some(errors) = code.locate_errors(&syn) else {
                continue;
            };
            for (pos, value) in errors {
                for b in 0..width {
                    if value >> (width - 1 - b) & 1 == 1 {
                        let bit = pos * width + b;
                        match diff.iter().position(|&x| x == bit) {
                            Some(i) => {
                                diff.swap_remove(i);
                            }
                            None => diff.push(bit),
                        }
                    }
                }
            }
            diff.sort_unstable();
            if out.iter().any(|c| c.diff == diff) {
                continue;
            }
            let metric = base + 4.0 * diff.iter().map(|&i| soft_in[i].abs()).sum::<f64>();
            out.push(Candidate { diff, metric });
        }
        if out.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        Ok(out)
    }

    /// Full SISO decode. When no test sequence decodes, the hard decision is
    /// kept and every bit takes the no-competitor branch, `w = β·sign(r)`.
    pub fn decode(&self, soft_in: &[f64], beta: f64) -> Result<SisoOutput> {
        match self.candidates(soft_in) {
            Ok(cands) => Ok(self.decode_with_candidates(soft_in, &cands, beta)),
            Err(Error::EmptyCandidateSet) => Ok(self.fallback(soft_in, beta)),
            Err(e) => Err(e),
        }
    }

    /// Soft output computed from an explicit candidate list (non-empty).
    pub fn decode_with_candidates(
        &self,
        soft_in: &[f64],
        cands: &[Candidate],
        beta: f64,
    ) -> SisoOutput {
        assert!(!cands.is_empty(), "candidate list must not be empty");
        let len = soft_in.len();
        let best = cands
            .iter()
            .enumerate()
            .fold(0, |b, (i, c)| if c.metric < cands[b].metric { i } else { b });
        let decision = &cands[best];

        let mut competitor = vec![f64::INFINITY; len];
        for (i, c) in cands.iter().enumerate() {
            if i == best {
                continue;
            }
            for_each_symmetric_difference(&c.diff, &decision.diff, |pos| {
                if c.metric < competitor[pos] {
                    competitor[pos] = c.metric;
                }
            });
        }

        let decision_bits = decision.bits(soft_in);
        let mut soft_out = Vec::with_capacity(len);
        let mut competitor_found = Vec::with_capacity(len);
        for (pos, &bit) in decision_bits.iter().enumerate() {
            let sign = if bit == 1 { 1.0 } else { -1.0 };
            let found = competitor[pos].is_finite();
            soft_out.push(if found {
                sign * (competitor[pos] - decision.metric) / 4.0
            } else {
                soft_in[pos] + sign * beta
            });
            competitor_found.push(found);
        }
        let extrinsic = soft_out.iter().zip(soft_in).map(|(o, i)| o - i).collect();
        SisoOutput {
            decision: self.code.bits_to_symbols(&decision_bits),
            soft_out,
            extrinsic,
            decision_bits,
            competitor_found,
            candidates: cands.len(),
            fallback: false,
        }
    }

    fn fallback(&self, soft_in: &[f64], beta: f64) -> SisoOutput {
        let decision_bits = hard_decision(soft_in);
        let soft_out: Vec<f64> = decision_bits
            .iter()
            .zip(soft_in)
            .map(|(&b, r)| if b == 1 { r + beta } else { r - beta })
            .collect();
        let extrinsic = soft_out.iter().zip(soft_in).map(|(o, i)| o - i).collect();
        SisoOutput {
            decision: self.code.bits_to_symbols(&decision_bits),
            soft_out,
            extrinsic,
            competitor_found: vec![false; soft_in.len()],
            decision_bits,
            candidates: 0,
            fallback: true,
        }
    }
}

/// Calls `f` on every element in exactly one of two sorted slices.
fn for_each_symmetric_difference(a: &[usize], b: &[usize], mut f: impl FnMut(usize)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                f(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                f(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    a[i..].iter().chain(&b[j..]).for_each(|&x| f(x));
}
