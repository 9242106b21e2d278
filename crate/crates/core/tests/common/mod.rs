//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::sync::Arc;

use gpcb::simulator::{awgn, frame_rng, modulate, ChannelSpec};
use gpcb::{ChasePyndiah, CodeSpec, Field, Gf};
use rand::Rng;

pub fn field(m: u32) -> Arc<Field> {
    Arc::new(Field::with_default_poly(m).unwrap())
}

/// Every codeword of `code`, as binary images. Only for tiny codes.
pub fn codebook(code: &CodeSpec) -> Vec<Vec<u8>> {
    let q = 1usize << code.symbol_bits();
    let total = q.pow(code.k() as u32);
    (0..total)
        .map(|mut idx| {
            let msg: Vec<Gf> = (0..code.k())
                .map(|_| {
                    let s = (idx % q) as Gf;
                    idx /= q;
                    s
                })
                .collect();
            code.symbols_to_bits(&code.encode(&msg).unwrap())
        })
        .collect()
}

/// Codeword with the largest correlation Σ r·c, i.e. the ML decision on
/// the AWGN channel with antipodal signalling.
pub fn ml_decode<'a>(book: &'a [Vec<u8>], r: &[f64]) -> &'a [u8] {
    let corr = |c: &[u8]| -> f64 {
        c.iter().zip(r).map(|(&b, x)| if b == 1 { *x } else { -x }).sum()
    };
    book.iter()
        .max_by(|a, b| corr(a).total_cmp(&corr(b)))
        .unwrap()
}

/// Agreements out of 10^4 frames for BCH(15, 7) at 4 dB, seed 2024, as
/// measured by the exhaustive oracle when the decoder was written.
pub const BCH15_ML_BASELINE: u64 = 9998;

/// Frames where the Chase-Pyndiah decision of BCH(15, 7) equals the
/// exhaustive ML decision, out of `frames`, at `ebn0_db` per information bit.
pub fn bch15_ml_agreement(frames: u64, ebn0_db: f64, seed: u64) -> u64 {
    let code = CodeSpec::bch(field(4), 2).unwrap();
    let book = codebook(&code);
    let dec = ChasePyndiah::new(code.clone());
    let sigma = ChannelSpec::new(ebn0_db, code.k() as f64 / code.n() as f64, seed).sigma();
    let mut agree = 0;
    for f in 0..frames {
        let mut rng = frame_rng(seed, f);
        let tx = &book[rng.random_range(0..book.len())];
        let mut r = modulate(tx);
        awgn(&mut r, sigma, &mut rng);
        let chase = dec.decode(&r, 0.5).unwrap().decision_bits;
        if chase == ml_decode(&book, &r) {
            agree += 1;
        }
    }
    agree
}

/// Q(x) = P(N(0,1) > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}
