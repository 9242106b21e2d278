//! Systematic BCH and Reed-Solomon codes with bounded-distance decoding.
//!
//! Words are stored systematic-first: positions `0..k` carry the message and
//! `k..n` the parity. Position `i` of a word is the coefficient of
//! x^(n−1−i) in its polynomial form, so the message occupies the high-degree
//! terms and the parity is the remainder of `m(x)·x^(n−k)` modulo the
//! generator.
//!
//! Decoding runs syndromes → Berlekamp-Massey → Chien search, plus Forney's
//! formula for RS error magnitudes. Any proposed correction is re-checked
//! against the syndromes, so a `Corrected` result is always a codeword
//! (possibly the wrong one, when more than `t` errors occurred).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{Field, Gf, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeKind {
    /// Binary BCH code; every symbol is a bit.
    Bch,
    /// Reed-Solomon code over GF(2^m).
    Rs,
}

/// A narrow-sense cyclic code of length 2^m − 1.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    kind: CodeKind,
    field: Arc<Field>,
    n: usize,
    k: usize,
    t: usize,
    d: usize,
    generator: Polynomial,
}

/// Result of [`CodeSpec::decode_bounded`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Corrected { codeword: Vec<Gf>, errors: usize },
    Failure,
}

impl DecodeOutcome {
    pub fn codeword(&self) -> Option<&[Gf]> {
        match self {
            DecodeOutcome::Corrected { codeword, .. } => Some(codeword),
            DecodeOutcome::Failure => None,
        }
    }
}

impl CodeSpec {
    /// Binary BCH code correcting `t` errors; the generator is the lcm of
    /// the minimal polynomials of α, α², …, α^(2t).
    pub fn bch(field: Arc<Field>, t: usize) -> Result<Self> {
        let n = field.order();
        if t == 0 || 2 * t >= n {
            return Err(Error::InvalidParams(format!("BCH t = {t} for n = {n}")));
        }
        let mut seen = vec![false; n];
        let mut generator = Polynomial::one();
        for i in 1..=2 * t {
            if seen[i % n] {
                continue;
            }
            let e = field.alpha_pow(i as i64);
            for c in field.conjugates(e) {
                seen[field.log(c).unwrap()] = true;
            }
            generator = field.poly_mul(&generator, &field.minimal_polynomial(e)?);
        }
        let deg = generator.degree().unwrap();
        if deg >= n {
            return Err(Error::InvalidParams(format!(
                "BCH t = {t} over GF(2^{}) leaves no information bits",
                field.m()
            )));
        }
        Ok(CodeSpec { kind: CodeKind::Bch, n, k: n - deg, t, d: 2 * t + 1, generator, field })
    }

    /// Narrow-sense RS code, g(x) = ∏_{i=1}^{2t} (x − α^i).
    pub fn rs(field: Arc<Field>, t: usize) -> Result<Self> {
        let n = field.order();
        if t == 0 || 2 * t >= n {
            return Err(Error::InvalidParams(format!("RS t = {t} for n = {n}")));
        }
        let mut generator = Polynomial::one();
        for i in 1..=2 * t {
            let root = Polynomial::from_coeffs(vec![field.alpha_pow(i as i64), 1]);
            generator = field.poly_mul(&generator, &root);
        }
        Ok(CodeSpec { kind: CodeKind::Rs, n, k: n - 2 * t, t, d: 2 * t + 1, generator, field })
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Design distance 2t + 1.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generator(&self) -> &Polynomial {
        &self.generator
    }

    /// Bits per code symbol: m for RS, 1 for BCH.
    pub fn symbol_bits(&self) -> usize {
        match self.kind {
            CodeKind::Bch => 1,
            CodeKind::Rs => self.field.m() as usize,
        }
    }

    /// Length of the binary image, n·symbol_bits.
    pub fn binary_len(&self) -> usize {
        self.n * self.symbol_bits()
    }

    fn max_symbol(&self) -> Gf {
        match self.kind {
            CodeKind::Bch => 1,
            CodeKind::Rs => self.field.order() as Gf,
        }
    }

    /// Systematic encoding: message followed by `n − k` parity symbols.
    pub fn encode(&self, message: &[Gf]) -> Result<Vec<Gf>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, actual: message.len() });
        }
        if let Some(&bad) = message.iter().find(|&&s| s > self.max_symbol()) {
            return Err(Error::InvalidParams(format!("symbol {bad} out of range")));
        }
        let r = self.n - self.k;
        let g = self.generator.coeffs();
        // reg[i] holds the x^i coefficient of the running remainder.
        let mut reg = vec![0 as Gf; r];
        for &s in message {
            let fb = s ^ reg[r - 1];
            for i in (1..r).rev() {
                reg[i] = reg[i - 1] ^ self.field.mul(fb, g[i]);
            }
            reg[0] = self.field.mul(fb, g[0]);
        }
        let mut word = Vec::with_capacity(self.n);
        word.extend_from_slice(message);
        word.extend(reg.iter().rev());
        Ok(word)
    }

    /// Polynomial form of a word under the systematic-first convention.
    pub fn word_polynomial(&self, word: &[Gf]) -> Polynomial {
        Polynomial::from_coeffs(word.iter().rev().copied().collect())
    }

    /// Membership test by division: the word is a codeword iff its
    /// polynomial leaves no remainder modulo the generator.
    pub fn is_codeword(&self, word: &[Gf]) -> bool {
        word.len() == self.n
            && word.iter().all(|&s| s <= self.max_symbol())
            && self
                .field
                .poly_mod(&self.word_polynomial(word), &self.generator)
                .map(|r| r.is_zero())
                .unwrap_or(false)
    }

    /// Syndromes S_1..S_2t, S_j = c(α^j).
    pub fn syndromes(&self, word: &[Gf]) -> Vec<Gf> {
        let mut syn = vec![0 as Gf; 2 * self.t];
        for (i, &s) in word.iter().enumerate() {
            if s != 0 {
                self.add_to_syndromes(&mut syn, i, s);
            }
        }
        syn
    }

    /// Updates `syn` for adding `value` at word position `pos`.
    #[inline]
    pub fn add_to_syndromes(&self, syn: &mut [Gf], pos: usize, value: Gf) {
        let Some(lv) = self.field.log(value) else {
            return;
        };
        let deg = (self.n - 1 - pos) as i64;
        let lv = lv as i64;
        for (j, s) in syn.iter_mut().enumerate() {
            *s ^= self.field.alpha_pow(lv + (j as i64 + 1) * deg);
        }
    }

    /// Solves for the error pattern from a syndrome vector.
    ///
    /// Returns the `(position, value)` pairs of an error pattern of weight at
    /// most `t` reproducing `syn` exactly, or `None` when no such pattern is
    /// found by the algebraic decoder.
    pub fn locate_errors(&self, syn: &[Gf]) -> Option<Vec<(usize, Gf)>> {
        debug_assert_eq!(syn.len(), 2 * self.t);
        if syn.iter().all(|&s| s == 0) {
            return Some(Vec::new());
        }
        let f = &*self.field;
        let lambda = berlekamp_massey(f, syn);
        let nu = lambda.len() - 1;
        if nu > self.t {
            return None;
        }

        // Chien search: an error at degree p is a root α^(−p) of Λ.
        let mut terms: Vec<Gf> = lambda.clone();
        let steps: Vec<Gf> = (0..=nu).map(|i| f.alpha_pow(-(i as i64))).collect();
        let mut roots = Vec::with_capacity(nu);
        for p in 0..self.n {
            let sum = terms.iter().fold(0, |acc, &x| acc ^ x);
            if sum == 0 {
                roots.push(p);
                if roots.len() > nu {
                    return None;
                }
            }
            for (tm, &st) in terms.iter_mut().zip(&steps) {
                *tm = f.mul(*tm, st);
            }
        }
        if roots.len() != nu {
            return None;
        }

        let errors: Vec<(usize, Gf)> = match self.kind {
            CodeKind::Bch => roots.iter().map(|&p| (self.n - 1 - p, 1)).collect(),
            CodeKind::Rs => {
                // Ω(x) = S(x)Λ(x) mod x^2t; e = Ω(X⁻¹) / Λ'(X⁻¹) for b = 1.
                let s_poly = Polynomial::from_coeffs(syn.to_vec());
                let lam = Polynomial::from_coeffs(lambda);
                let prod = f.poly_mul(&s_poly, &lam);
                let omega = Polynomial::from_coeffs(
                    prod.coeffs().iter().take(2 * self.t).copied().collect(),
                );
                let dlam = lam.derivative();
                let mut out = Vec::with_capacity(nu);
                for &p in &roots {
                    let x_inv = f.alpha_pow(-(p as i64));
                    let den = f.poly_eval(&dlam, x_inv);
                    let num = f.poly_eval(&omega, x_inv);
                    let e = f.div(num, den).ok()?;
                    if e == 0 {
                        return None;
                    }
                    out.push((self.n - 1 - p, e));
                }
                out
            }
        };

        // The pattern must reproduce every syndrome.
        let mut check = vec![0 as Gf; syn.len()];
        for &(pos, v) in &errors {
            self.add_to_syndromes(&mut check, pos, v);
        }
        (check == syn).then_some(errors)
    }

    /// Bounded-distance decoding of a received word.
    pub fn decode_bounded(&self, word: &[Gf]) -> Result<DecodeOutcome> {
        if word.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: word.len() });
        }
        let syn = self.syndromes(word);
        Ok(match self.locate_errors(&syn) {
            Some(errs) => {
                let mut codeword = word.to_vec();
                for &(pos, v) in &errs {
                    codeword[pos] ^= v;
                }
                DecodeOutcome::Corrected { codeword, errors: errs.len() }
            }
            None => DecodeOutcome::Failure,
        })
    }

    /// Splits the binary image of a word (MSB-first per symbol) into symbols.
    pub fn bits_to_symbols(&self, bits: &[u8]) -> Vec<Gf> {
        bits_to_symbols(bits, self.symbol_bits())
    }

    /// Binary image of a word, MSB-first per symbol.
    pub fn symbols_to_bits(&self, symbols: &[Gf]) -> Vec<u8> {
        symbols_to_bits(symbols, self.symbol_bits())
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            CodeKind::Bch => "BCH",
            CodeKind::Rs => "RS",
        };
        write!(f, "{name}({}, {}, {})", self.n, self.k, self.d)
    }
}

/// Groups bits MSB-first into `width`-bit symbols.
pub fn bits_to_symbols(bits: &[u8], width: usize) -> Vec<Gf> {
    bits.chunks(width)
        .map(|c| c.iter().fold(0 as Gf, |acc, &b| (acc << 1) | (b & 1) as Gf))
        .collect()
}

/// Expands symbols into `width` bits each, MSB first.
pub fn symbols_to_bits(symbols: &[Gf], width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * width);
    for &s in symbols {
        for b in (0..width).rev() {
            out.push(((s >> b) & 1) as u8);
        }
    }
    out
}

/// Berlekamp-Massey over GF(2^m); returns the connection polynomial Λ with
/// Λ_0 = 1, trimmed to its register length.
fn berlekamp_massey(f: &Field, syn: &[Gf]) -> Vec<Gf> {
    let len = syn.len();
    let mut c = vec![0 as Gf; len + 1];
    let mut b = vec![0 as Gf; len + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_d: Gf = 1;
    for r in 0..len {
        let mut d = syn[r];
        for i in 1..=l {
            d ^= f.mul(c[i], syn[r - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = f.div(d, last_d).unwrap();
        if 2 * l <= r {
            let prev = c.clone();
            for i in 0..=len - shift {
                c[i + shift] ^= f.mul(coef, b[i]);
            }
            l = r + 1 - l;
            b = prev;
            last_d = d;
            shift = 1;
        } else {
            for i in 0..=len - shift {
                c[i + shift] ^= f.mul(coef, b[i]);
            }
            shift += 1;
        }
    }
    c.truncate(l + 1);
    c
}

/// Builds the construction-2 pair sharing length n and dimension k: a BCH
/// code correcting `t1` bit errors and an RS code correcting t2 = m·t1/2
/// symbol errors.
pub fn pair_construction2(field: Arc<Field>, t1: usize) -> Result<(CodeSpec, CodeSpec)> {
    let m = field.m() as usize;
    if !(m * t1).is_multiple_of(2) {
        return Err(Error::IncompatiblePair(format!("m·t1 = {} is odd", m * t1)));
    }
    let bch = CodeSpec::bch(field.clone(), t1)?;
    let rs = CodeSpec::rs(field, m * t1 / 2)
        .map_err(|e| Error::IncompatiblePair(format!("RS side: {e}")))?;
    if bch.k() != rs.k() {
        return Err(Error::IncompatiblePair(format!(
            "{bch} has generator degree {} < m·t1 = {}; dimensions {} and {} differ",
            bch.n() - bch.k(),
            m * t1,
            bch.k(),
            rs.k()
        )));
    }
    Ok((bch, rs))
}
