//! Generalized parallel concatenated block (GPCB) codes.
//!
//! Two systematic block codes (binary BCH or Reed-Solomon) share one
//! information block through an interleaver; the receiver alternates two
//! Chase-Pyndiah soft-input/soft-output component decoders that exchange
//! extrinsic information.
//!
//! * [`galois`]: GF(2^m) and polynomial arithmetic.
//! * [`block_codes`]: systematic BCH/RS encoders and algebraic decoders.
//! * [`interleavers`]: the permutation patterns placed between encoders.
//! * [`chase_pyndiah`]: the component SISO decoder.
//! * [`gpcb`]: the concatenated encoder and the iterative decoder.
//! * [`catalog`]: code names such as `GPCB-BCH(141, 113)`.
//! * [`simulator`]: BPSK/AWGN Monte Carlo BER estimation and schedule tuning.

pub mod block_codes;
pub mod catalog;
pub mod chase_pyndiah;
pub mod error;
pub mod galois;
pub mod gpcb;
pub mod interleavers;
pub mod simulator;

pub use block_codes::{pair_construction2, CodeKind, CodeSpec, DecodeOutcome};
pub use catalog::{parse_code_name, CodeName, ComponentPair, Family};
pub use chase_pyndiah::{ChasePyndiah, SisoOutput};
pub use error::{Error, Result};
pub use galois::{Field, Gf, Polynomial};
pub use gpcb::{
    Component, Construction, DecodeObserver, DecodeParams, DecodeReport, GpcbSpec, InterleaverChoice,
};
pub use interleavers::{InterleaverSpec, Pattern, Permutation};

/// The guide's code samples, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/galois.md")]
    mod galois {}
    #[doc = include_str!("../../../book/src/block_codes.md")]
    mod block_codes {}
    #[doc = include_str!("../../../book/src/interleavers.md")]
    mod interleavers {}
    #[doc = include_str!("../../../book/src/chase_pyndiah.md")]
    mod chase_pyndiah {}
    #[doc = include_str!("../../../book/src/gpcb.md")]
    mod gpcb {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}
