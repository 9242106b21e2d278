//! End-to-end behaviour of the concatenated encoder and iterative decoder.

mod common;

use gpcb::catalog::{Family, REFERENCE_PAIRS};
use gpcb::simulator::{frame_rng, run_ber, GpcbCodec, StopRule};
use gpcb::{
    ChasePyndiah, CodeSpec, Component, Construction, DecodeObserver, DecodeParams, GpcbSpec,
    InterleaverChoice, Pattern,
};
use rand::Rng;

fn antipodal(bits: &[u8], amp: f64) -> Vec<f64> {
    bits.iter().map(|&b| if b == 1 { amp } else { -amp }).collect()
}

fn random_bits(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = frame_rng(seed, 0);
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn constructions(family: Family) -> &'static [Construction] {
    match family {
        Family::Rs => &[Construction::C1, Construction::C2],
        Family::Bch => &[Construction::C1],
        Family::BchRs => &[Construction::C2],
    }
}

#[test]
fn noiseless_frames_decode_for_every_pattern_and_reference_pair() {
    let params = DecodeParams::with_defaults(2).unwrap();
    for pair in REFERENCE_PAIRS {
        for &construction in constructions(pair.family) {
            for m_blocks in [1, 10] {
                for pattern in Pattern::ALL {
                    let spec = pair
                        .spec(m_blocks, InterleaverChoice::new(pattern).with_seed(3), construction)
                        .unwrap();
                    let info = random_bits(spec.info_bits(), m_blocks as u64);
                    let frame = spec.encode_bits(&info).unwrap();
                    assert_eq!(frame.len(), spec.frame_bits());
                    assert_eq!(&frame[..info.len()], &info[..]);
                    for amp in [1.0, 8.0] {
                        let report = spec.decode(&antipodal(&frame, amp), &params).unwrap();
                        for (h, d) in report.half_iterations.iter().enumerate() {
                            assert!(
                                *d == info,
                                "{} {construction} {pattern} amp {amp} half {h}",
                                spec.name()
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Records every component input.
#[derive(Default)]
struct Recorder {
    calls: Vec<(usize, Component, usize, Vec<f64>)>,
}

impl DecodeObserver for Recorder {
    fn component_input(&mut self, half: usize, c: Component, block: usize, soft_in: &[f64]) {
        self.calls.push((half, c, block, soft_in.to_vec()));
    }
}

fn noisy_frame(spec: &GpcbSpec, sigma: f64, seed: u64) -> Vec<f64> {
    let info = random_bits(spec.info_bits(), seed);
    let mut r = antipodal(&spec.encode_bits(&info).unwrap(), 1.0);
    gpcb::simulator::awgn(&mut r, sigma, &mut frame_rng(seed, 1));
    r
}

#[test]
fn parity_inputs_never_change() {
    let pair = REFERENCE_PAIRS[7]; // BCH(127,113) + RS(127,113)
    let spec = pair.spec(2, Pattern::Random, Construction::C2).unwrap();
    let r = noisy_frame(&spec, 0.75, 4);
    let params = DecodeParams::with_defaults(4).unwrap();
    let mut rec = Recorder::default();
    spec.decode_observed(&r, &params, &mut rec).unwrap();
    assert_eq!(rec.calls.len(), 4 * (2 * 7 + 2));

    let nb = spec.info_bits();
    let (c1, c2) = (spec.code1(), spec.code2());
    let p1_len = (c1.n() - c1.k()) * c1.symbol_bits();
    let p2_len = (c2.n() - c2.k()) * c2.symbol_bits();
    let p1_total = p1_len * nb / (c1.k() * c1.symbol_bits());
    for (_, c, block, input) in &rec.calls {
        let (k_bits, start, len) = match c {
            Component::First => (c1.k() * c1.symbol_bits(), nb + block * p1_len, p1_len),
            Component::Second => (c2.k() * c2.symbol_bits(), nb + p1_total + block * p2_len, p2_len),
        };
        assert_eq!(&input[k_bits..], &r[start..start + len]);
    }
}

#[test]
fn second_decoder_sees_the_interleaved_systematic_bits() {
    for construction in [Construction::C1, Construction::C2] {
        let pair = REFERENCE_PAIRS[3]; // RS(63,53)
        let spec = pair
            .spec(3, InterleaverChoice::new(Pattern::Helical), construction)
            .unwrap();
        let r = noisy_frame(&spec, 0.6, 9);
        // α = 0 keeps the channel values untouched, so inputs can be traced.
        let params = DecodeParams::from_lists(2, &[0.0], &[0.5]).unwrap();
        let mut rec = Recorder::default();
        spec.decode_observed(&r, &params, &mut rec).unwrap();
        let fwd = spec.bit_permutation().forward();
        let kb = spec.code2().k() * spec.code2().symbol_bits();
        let mut seen = 0;
        for (_, c, block, input) in &rec.calls {
            let start = block * kb;
            for i in 0..kb {
                let expected = match c {
                    Component::First => r[start + i],
                    Component::Second => r[fwd[start + i]],
                };
                assert_eq!(input[i], expected);
            }
            seen += 1;
        }
        assert!(seen > 0);
    }
}

#[test]
fn identity_interleaver_equals_chained_siso_passes() {
    let code = CodeSpec::bch(common::field(4), 2).unwrap();
    let spec = GpcbSpec::new(
        code.clone(),
        code.clone(),
        1,
        InterleaverChoice::new(Pattern::Cyclic).with_shift(0),
        Construction::C1,
    )
    .unwrap();
    assert_eq!(spec.bit_permutation().forward(), &(0..7).collect::<Vec<_>>()[..]);
    let r = noisy_frame(&spec, 0.8, 21);
    let params = DecodeParams::new(1, vec![0.3, 0.6], vec![0.4, 0.7]).unwrap();
    let report = spec.decode(&r, &params).unwrap();

    let siso = ChasePyndiah::new(code);
    let (sys, rest) = r.split_at(7);
    let (p1, p2) = rest.split_at(8);
    let first_in: Vec<f64> = sys.iter().chain(p1).copied().collect();
    let first = siso.decode(&first_in, 0.4).unwrap();
    let second_in: Vec<f64> = sys
        .iter()
        .zip(&first.extrinsic)
        .map(|(s, w)| s + 0.6 * w)
        .chain(p2.iter().copied())
        .collect();
    let second = siso.decode(&second_in, 0.7).unwrap();
    assert_eq!(report.half_iterations[0], first.decision_bits[..7]);
    assert_eq!(report.message_bits, second.decision_bits[..7]);
    // Regression pin for this frame.
    assert_eq!(report.message_bits, GOLDEN_MESSAGE);
    for (a, b) in second.soft_out.iter().zip(GOLDEN_SOFT_OUT) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

const GOLDEN_MESSAGE: [u8; 7] = [0, 0, 1, 1, 1, 0, 1];
const GOLDEN_SOFT_OUT: [f64; 15] = [
    -6.886115713192481,
    -2.322416837935635,
    6.886115713192481,
    2.8135841461320803,
    4.568132752140981,
    -3.754434135609422,
    6.886115713192481,
    -1.2346240471353376,
    -2.0979504006890033,
    -2.850016916262277,
    2.3318734601717965,
    -1.8285231892194038,
    -2.2139878087663973,
    -6.886115713192481,
    -6.886115713192481,
];

#[test]
fn iterations_do_not_hurt_bch63_m1() {
    let pair = REFERENCE_PAIRS[0]; // BCH(63,51)
    let spec = pair.spec(1, Pattern::Random, Construction::C1).unwrap();
    let codec = GpcbCodec::new(spec, DecodeParams::with_defaults(8).unwrap());
    let res = run_ber(&codec, 4.0, 5, StopRule::fixed(1000)).unwrap();
    let (first, last) = (res.iteration(1), res.iteration(8));
    assert!(first.bit_errors > 0);
    assert!(last.ber() <= first.ber(), "{} > {}", last.ber(), first.ber());
}
