//! Permutations placed between the two component encoders.
//!
//! Each pattern's formula is documented on [`Pattern`]. All patterns are
//! deterministic functions of their [`InterleaverSpec`].
//!
//! Convention: `apply(p, x)[i] = x[p.forward()[i]]`, i.e. `forward[i]` is the
//! input position read out at output position `i`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Interleaver pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Seeded Fisher-Yates shuffle (ChaCha8 stream).
    Random,
    /// Write rows×cols row-major, read column-major.
    Block,
    /// Write row-major, read along the anti-diagonals r + c = s for
    /// s = 0, 1, …, each from the top row down.
    Diagonal,
    /// π(i) = (i + shift) mod N.
    Cyclic,
    /// Write row-major, read wrapping diagonals: one diagonal per starting
    /// column, each step advancing row and column by one modulo the bounds.
    Helical,
    /// The CCSDS turbo-code permutation (k1 = 8), pruned to N positions.
    Berrou,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::Random,
        Pattern::Block,
        Pattern::Diagonal,
        Pattern::Cyclic,
        Pattern::Helical,
        Pattern::Berrou,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::Random => "random",
            Pattern::Block => "block",
            Pattern::Diagonal => "diagonal",
            Pattern::Cyclic => "cyclic",
            Pattern::Helical => "helical",
            Pattern::Berrou => "berrou",
        }
    }

    fn uses_geometry(self) -> bool {
        matches!(self, Pattern::Block | Pattern::Diagonal | Pattern::Helical)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown interleaver pattern `{s}`")))
    }
}

/// Everything needed to rebuild a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverSpec {
    pub pattern: Pattern,
    pub size: usize,
    pub seed: u64,
    /// Matrix geometry for block, diagonal and helical; defaults to a single
    /// row of `size` columns.
    pub rows: usize,
    pub cols: usize,
    /// Cyclic shift; defaults to ⌊N/2⌋.
    pub shift: usize,
}

impl InterleaverSpec {
    pub fn new(pattern: Pattern, size: usize) -> Self {
        InterleaverSpec { pattern, size, seed: 0, rows: 1, cols: size, shift: size / 2 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_geometry(mut self, rows: usize, cols: usize) -> Self {
        self.rows = rows;
        self.cols = cols;
        self
    }

    pub fn with_shift(mut self, shift: usize) -> Self {
        self.shift = shift;
        self
    }

    pub fn build(&self) -> Result<Permutation> {
        build(self)
    }
}

/// A bijection on `0..size` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    /// Validates `forward` as a bijection.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &f) in forward.iter().enumerate() {
            if f >= n || inverse[f] != usize::MAX {
                return Err(Error::InvalidParams(format!("not a permutation at index {i}")));
            }
            inverse[f] = i;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn identity(size: usize) -> Self {
        let forward: Vec<usize> = (0..size).collect();
        Permutation { inverse: forward.clone(), forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    /// Lifts a permutation of symbols to one of their `width`-bit images.
    pub fn expand(&self, width: usize) -> Permutation {
        let lift = |v: &[usize]| {
            v.iter()
                .flat_map(|&s| (0..width).map(move |b| s * width + b))
                .collect::<Vec<_>>()
        };
        Permutation { forward: lift(&self.forward), inverse: lift(&self.inverse) }
    }

    /// `out[i] = x[forward[i]]`.
    pub fn apply<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.forward.iter().map(|&f| x[f]).collect())
    }

    /// Undoes [`Permutation::apply`].
    pub fn invert<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.inverse.iter().map(|&i| x[i]).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: len });
        }
        Ok(())
    }
}

/// Builds the permutation described by `spec`.
pub fn build(spec: &InterleaverSpec) -> Result<Permutation> {
    let n = spec.size;
    if n == 0 {
        return Err(Error::InvalidParams("interleaver size must be at least 1".into()));
    }
    if spec.pattern.uses_geometry() && spec.rows * spec.cols != n {
        return Err(Error::BadGeometry { rows: spec.rows, cols: spec.cols, size: n });
    }
    let (rows, cols) = (spec.rows, spec.cols);
    let forward = match spec.pattern {
        Pattern::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut v: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i as u64) as usize;
                v.swap(i, j);
            }
            v
        }
        Pattern::Block => (0..cols)
            .flat_map(|c| (0..rows).map(move |r| r * cols + c))
            .collect(),
        Pattern::Diagonal => (0..rows + cols - 1)
            .flat_map(|s| {
                (s.saturating_sub(cols - 1)..=s.min(rows - 1)).map(move |r| r * cols + (s - r))
            })
            .collect(),
        Pattern::Cyclic => (0..n).map(|i| (i + spec.shift) % n).collect(),
        Pattern::Helical => (0..cols)
            .flat_map(|c0| (0..rows).map(move |r| r * cols + (c0 + r) % cols))
            .collect(),
        Pattern::Berrou => berrou(n),
    };
    Permutation::from_forward(forward)
}

const CCSDS_PRIMES: [usize; 8] = [31, 37, 43, 47, 53, 59, 61, 67];

/// CCSDS permutation for the smallest admissible length ≥ n (a multiple of
/// 8 whose k2 = len/8 is coprime to every CCSDS prime), with entries ≥ n
/// dropped while preserving order.
fn berrou(n: usize) -> Vec<usize> {
    const K1: usize = 8;
    let mut k2 = n.div_ceil(K1).max(1);
    while CCSDS_PRIMES.iter().any(|&p| k2.is_multiple_of(p)) {
        k2 += 1;
    }
    let len = K1 * k2;
    (0..len)
        .filter_map(|s| {
            // 1-based s of the standard form becomes s + 1 here.
            let m = s % 2;
            let i = s / (2 * k2);
            let j = s / 2 - i * k2;
            let t = (19 * i + 1) % (K1 / 2);
            let q = t % 8;
            let c = (CCSDS_PRIMES[q] * j + 21 * m) % k2;
            let pi = 2 * (t + c * (K1 / 2) + 1) - m; // 1-based
            (pi <= n).then_some(pi - 1)
        })
        .collect()
}
