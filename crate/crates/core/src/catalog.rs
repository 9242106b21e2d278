//! Named GPCB codes.
//!
//! Codes are named `GPCB-<family>(L, N)` with `L = M·(n1 + n2 − k)` and
//! `N = M·k`, so the name fixes both the component codes and the block
//! multiplier M. Component codes can also be given directly as
//! `bch(n,k,t)`, `rs(n,k,t)` or `bch-rs(n,k,t)` (the BCH parameters; the RS
//! partner follows from the length and dimension).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::block_codes::{pair_construction2, CodeSpec};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::gpcb::{Construction, GpcbSpec, InterleaverChoice};

/// Component families of a GPCB code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Two identical BCH codes.
    Bch,
    /// Two identical RS codes.
    Rs,
    /// A BCH code followed by an RS code of the same length and dimension.
    BchRs,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Bch => "GPCB-BCH",
            Family::Rs => "GPCB-RS",
            Family::BchRs => "GPCB-BCH-RS",
        }
    }

    /// Construction used by default: bit interleaving for mixed pairs.
    pub fn default_construction(self) -> Construction {
        match self {
            Family::BchRs => Construction::C2,
            _ => Construction::C1,
        }
    }
}

/// A component pair: field degree m and the first code's correction
/// capability (BCH for [`Family::Bch`] and [`Family::BchRs`], RS otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentPair {
    pub family: Family,
    pub m: u32,
    pub t: usize,
}

impl ComponentPair {
    pub const fn new(family: Family, m: u32, t: usize) -> Self {
        ComponentPair { family, m, t }
    }

    pub fn codes(&self) -> Result<(CodeSpec, CodeSpec)> {
        let field = Arc::new(Field::with_default_poly(self.m)?);
        match self.family {
            Family::Bch => {
                let c = CodeSpec::bch(field, self.t)?;
                Ok((c.clone(), c))
            }
            Family::Rs => {
                let c = CodeSpec::rs(field, self.t)?;
                Ok((c.clone(), c))
            }
            Family::BchRs => pair_construction2(field, self.t),
        }
    }

    /// Builds the GPCB code with this pair.
    pub fn spec(
        &self,
        m_blocks: usize,
        interleaver: impl Into<InterleaverChoice>,
        construction: Construction,
    ) -> Result<GpcbSpec> {
        let (c1, c2) = self.codes()?;
        GpcbSpec::new(c1, c2, m_blocks, interleaver, construction)
    }
}

impl fmt::Display for ComponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.codes() {
            Ok((a, b)) => write!(f, "{a} + {b}"),
            Err(_) => write!(f, "{:?}(m={}, t={})", self.family, self.m, self.t),
        }
    }
}

/// The reference component pairs, each used with M ∈ {1, 10, 100, 1000}.
pub const REFERENCE_PAIRS: [ComponentPair; 9] = [
    ComponentPair::new(Family::Bch, 6, 2),
    ComponentPair::new(Family::Bch, 7, 2),
    ComponentPair::new(Family::Bch, 8, 2),
    ComponentPair::new(Family::Rs, 6, 5),
    ComponentPair::new(Family::Rs, 7, 6),
    ComponentPair::new(Family::Rs, 8, 6),
    ComponentPair::new(Family::BchRs, 6, 2),
    ComponentPair::new(Family::BchRs, 7, 2),
    ComponentPair::new(Family::BchRs, 8, 2),
];

/// Block multipliers listed with every reference pair.
pub const REFERENCE_M: [usize; 4] = [1, 10, 100, 1000];

/// A resolved code name: the pair and the M implied by the name, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeName {
    pub pair: ComponentPair,
    pub m_blocks: Option<usize>,
}

impl FromStr for CodeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_code_name(s)
    }
}

fn parse_numbers(s: &str) -> Option<Vec<usize>> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Resolves `GPCB-BCH(141, 113)`, `gpcb-rs(7300,5300)`, `bch(127,113,2)`,
/// `rs(63,53,5)` or `bch-rs(127,113,2)`.
pub fn parse_code_name(name: &str) -> Result<CodeName> {
    let bad = |why: &str| Error::InvalidParams(format!("code `{name}`: {why}"));
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = compact.to_ascii_lowercase();
    let open = lower.find('(').ok_or_else(|| bad("expected parentheses"))?;
    let (head, args) = lower.split_at(open);
    let nums = parse_numbers(args).ok_or_else(|| bad("expected comma-separated integers"))?;
    let family = |f: &str| match f {
        "bch" => Some(Family::Bch),
        "rs" => Some(Family::Rs),
        "bch-rs" => Some(Family::BchRs),
        _ => None,
    };
    if let Some(f) = head.strip_prefix("gpcb-").and_then(family) {
        let [l, n] = nums[..] else {
            return Err(bad("a GPCB name takes (L, N)"));
        };
        return resolve_gpcb(f, l, n).ok_or_else(|| bad("no matching component codes"));
    }
    let f = family(head).ok_or_else(|| bad("unknown family"))?;
    let [n, k, t] = nums[..] else {
        return Err(bad("a component spec takes (n, k, t)"));
    };
    let m = field_degree(n).ok_or_else(|| bad("n must be 2^m − 1 with 3 ≤ m ≤ 16"))?;
    let pair = ComponentPair::new(f, m, t);
    let (c1, _) = pair.codes()?;
    if c1.n() != n || c1.k() != k {
        return Err(bad(&format!("t = {t} gives {c1}, not ({n}, {k})")));
    }
    Ok(CodeName { pair, m_blocks: None })
}

fn field_degree(n: usize) -> Option<u32> {
    (3..=16u32).find(|&m| (1usize << m) - 1 == n)
}

/// Smallest M for which `(L, N) = M·(2n − k, k)` names a valid pair.
fn resolve_gpcb(family: Family, l: usize, n_info: usize) -> Option<CodeName> {
    (1..=n_info).filter(|mb| l.is_multiple_of(*mb) && n_info.is_multiple_of(*mb)).find_map(|mb| {
        let (len, k) = (l / mb, n_info / mb);
        if (len + k) % 2 != 0 {
            return None;
        }
        let n = (len + k) / 2;
        let m = field_degree(n)?;
        if k >= n {
            return None;
        }
        let t = match family {
            Family::Rs => ((n - k) % 2 == 0).then_some((n - k) / 2)?,
            Family::Bch | Family::BchRs => bch_t_for(m, k)?,
        };
        let pair = ComponentPair::new(family, m, t);
        pair.codes().ok()?;
        Some(CodeName { pair, m_blocks: Some(mb) })
    })
}

/// The t for which BCH(2^m − 1, ·, t) has dimension k.
fn bch_t_for(m: u32, k: usize) -> Option<usize> {
    let field = Arc::new(Field::with_default_poly(m).ok()?);
    let n = field.order();
    for t in 1..=n / 2 {
        let code = CodeSpec::bch(field.clone(), t).ok()?;
        if code.k() == k {
            return Some(t);
        }
        if code.k() < k {
            return None;
        }
    }
    None
}
