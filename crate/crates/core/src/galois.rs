//! Arithmetic in GF(2^m) and polynomials over it.
//!
//! Elements are stored as `u16` bit-vectors in the polynomial basis, so
//! addition is XOR. Multiplication and inversion go through log/antilog
//! tables built from a primitive polynomial; the generator α is the element
//! `2` (the class of `x`). Zero has no logarithm and is special-cased
//! everywhere.

use std::fmt;

use crate::error::{Error, Result};

/// A field element in polynomial-basis representation.
pub type Gf = u16;

/// Default primitive polynomials, indexed by `m`.
///
/// m = 4..=8 are the usual textbook/CCSDS choices; the others come from the
/// standard tables of minimum-weight primitive trinomials/pentanomials.
const DEFAULT_PRIMITIVE: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// The binary extension field GF(2^m).
#[derive(Clone)]
pub struct Field {
    m: u32,
    poly: u32,
    order: usize,
    // exp has 2·order entries so exp[log a + log b] never needs a reduction.
    exp: Vec<Gf>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(2^m) from `primitive_poly`, given as a bit-vector including
    /// the x^m term (e.g. `0x43` for x^6 + x + 1).
    pub fn new(m: u32, primitive_poly: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if primitive_poly >> m != 1 {
            return Err(Error::NonPrimitivePoly { m, poly: primitive_poly });
        }
        let order = (1usize << m) - 1;
        let mut exp = vec![0 as Gf; 2 * order];
        let mut log = vec![u32::MAX; order + 1];
        let mut x: u32 = 1;
        for i in 0..order {
            if log[x as usize] != u32::MAX {
                // α cycled back before visiting every nonzero element.
                return Err(Error::NonPrimitivePoly { m, poly: primitive_poly });
            }
            exp[i] = x as Gf;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> m != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NonPrimitivePoly { m, poly: primitive_poly });
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Field { m, poly: primitive_poly, order, exp, log })
    }

    /// GF(2^m) with the default primitive polynomial for `m`.
    pub fn with_default_poly(m: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        Field::new(m, DEFAULT_PRIMITIVE[m as usize])
    }

    /// The default primitive polynomial used by [`Field::with_default_poly`].
    pub fn default_poly(m: u32) -> Option<u32> {
        DEFAULT_PRIMITIVE.get(m as usize).copied().filter(|&p| p != 0)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// Multiplicative order of α, i.e. 2^m − 1.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of elements, 2^m.
    pub fn size(&self) -> usize {
        self.order + 1
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a as usize] as usize;
        Ok(self.exp[(self.order - l) % self.order])
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        if a == 0 {
            return Ok(0);
        }
        let la = self.log[a as usize] as usize;
        let lb = self.log[b as usize] as usize;
        Ok(self.exp[la + self.order - lb])
    }

    /// `a` raised to an arbitrary (possibly negative) integer power.
    /// `0^0` is taken to be 1.
    pub fn pow(&self, a: Gf, e: i64) -> Result<Gf> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let l = self.log[a as usize] as i64;
        let idx = (l * e).rem_euclid(self.order as i64) as usize;
        Ok(self.exp[idx])
    }

    /// α^i for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, i: i64) -> Gf {
        self.exp[i.rem_euclid(self.order as i64) as usize]
    }

    /// Discrete logarithm to base α; `None` for zero.
    #[inline]
    pub fn log(&self, a: Gf) -> Option<usize> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize] as usize)
        }
    }

    /// Minimal polynomial of `e` over GF(2): ∏ (x − e^{2^i}) over the
    /// conjugacy class of `e`.
    pub fn minimal_polynomial(&self, e: Gf) -> Result<Polynomial> {
        if e == 0 {
            return Err(Error::InvalidParams(
                "minimal polynomial of the zero element".into(),
            ));
        }
        let mut poly = Polynomial::one();
        for c in self.conjugates(e) {
            poly = self.poly_mul(&poly, &Polynomial::from_coeffs(vec![c, 1]));
        }
        debug_assert!(poly.coeffs().iter().all(|&c| c <= 1));
        Ok(poly)
    }

    /// The conjugacy class {e, e^2, e^4, ...} in order of generation.
    pub fn conjugates(&self, e: Gf) -> Vec<Gf> {
        let mut out = vec![e];
        let mut c = self.mul(e, e);
        while c != e {
            out.push(c);
            c = self.mul(c, c);
        }
        out
    }

    pub fn poly_mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0 as Gf; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.coeffs.iter().enumerate() {
                out[i + j] ^= self.mul(ca, cb);
            }
        }
        Polynomial::from_coeffs(out)
    }

    /// Remainder of `a` divided by `b`.
    pub fn poly_mod(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.poly_divmod(a, b).map(|(_, r)| r)
    }

    /// Quotient and remainder of `a` divided by `b`.
    pub fn poly_divmod(&self, a: &Polynomial, b: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.inv(b.coeffs[db])?;
        let mut rem = a.coeffs.clone();
        let Some(da) = a.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if da < db {
            return Ok((Polynomial::zero(), a.clone()));
        }
        let mut quot = vec![0 as Gf; da - db + 1];
        for i in (db..=da).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = self.mul(c, lead_inv);
            quot[i - db] = q;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] ^= self.mul(q, bj);
            }
        }
        rem.truncate(db);
        Ok((Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem)))
    }

    /// Evaluates `p` at `x` by Horner's rule.
    pub fn poly_eval(&self, p: &Polynomial, x: Gf) -> Gf {
        p.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}

/// A polynomial over GF(2^m), coefficients lowest degree first.
///
/// Always canonical: no zero coefficient above the degree, and the zero
/// polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Gf>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Polynomial over GF(2) from a bit-vector (bit i is the x^i coefficient).
    pub fn from_bits(bits: u64) -> Self {
        let coeffs = (0..64 - bits.leading_zeros())
            .map(|i| ((bits >> i) & 1) as Gf)
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    /// `c·x^degree`.
    pub fn monomial(degree: usize, c: Gf) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Polynomial::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum; characteristic 2 makes this field-independent.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) ^ other.coeff(i)).collect();
        Polynomial::from_coeffs(coeffs)
    }

    /// Formal derivative. Even-power terms vanish in characteristic 2.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        Polynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, i) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, i) => write!(f, "x^{i}")?,
                (c, 1) => write!(f, "{c}·x")?,
                (c, i) => write!(f, "{c}·x^{i}")?,
            }
        }
        Ok(())
    }
}
