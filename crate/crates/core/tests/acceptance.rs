//! Acceptance checks, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::time::Instant;

use gpcb::chase_pyndiah::test_patterns;
use gpcb::simulator::{frame_rng, run_ber, GpcbCodec, IterationStats, StopRule, Uncoded};
use gpcb::{
    pair_construction2, ChasePyndiah, CodeKind, CodeSpec, Component, Construction, DecodeObserver,
    DecodeOutcome, DecodeParams, Field, Gf, GpcbSpec, InterleaverChoice, InterleaverSpec, Pattern,
};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------------------------------------------------------------- 1

/// (component 1, component 2, family label, [(M, L, N)], rate as printed).
/// Components are (kind, n, k, d).
type Row = ((CodeKind, usize, usize, usize), (CodeKind, usize, usize, usize), &'static str, f64);

const BCH: CodeKind = CodeKind::Bch;
const RS: CodeKind = CodeKind::Rs;

const CODE_TABLE: [Row; 9] = [
    ((BCH, 63, 51, 5), (BCH, 63, 51, 5), "GPCB-BCH", 0.68),
    ((BCH, 127, 113, 5), (BCH, 127, 113, 5), "GPCB-BCH", 0.80),
    ((BCH, 255, 239, 5), (BCH, 255, 239, 5), "GPCB-BCH", 0.88),
    ((RS, 63, 53, 11), (RS, 63, 53, 11), "GPCB-RS", 0.72),
    ((RS, 127, 115, 13), (RS, 127, 115, 13), "GPCB-RS", 0.82),
    ((RS, 255, 243, 13), (RS, 255, 243, 13), "GPCB-RS", 0.91),
    ((BCH, 63, 51, 5), (RS, 63, 51, 13), "GPCB-BCH-RS", 0.68),
    ((BCH, 127, 113, 5), (RS, 127, 113, 15), "GPCB-BCH-RS", 0.80),
    ((BCH, 255, 239, 5), (RS, 255, 239, 17), "GPCB-BCH-RS", 0.88),
];

/// The (L, N) pairs listed for M = 1, 10, 100, 1000, per row.
const LISTED: [[(usize, usize); 4]; 9] = [
    [(75, 51), (750, 510), (7500, 5100), (75000, 51000)],
    [(141, 113), (1410, 1130), (14100, 11300), (141000, 113000)],
    [(271, 239), (2710, 2390), (27100, 23900), (271000, 239000)],
    [(73, 53), (730, 530), (7300, 5300), (73000, 53000)],
    [(139, 115), (1390, 1150), (13900, 11500), (139000, 115000)],
    [(267, 243), (2670, 2430), (26700, 24300), (267000, 243000)],
    [(75, 51), (750, 510), (7500, 5100), (75000, 51000)],
    [(141, 113), (1410, 1130), (14100, 11300), (141000, 113000)],
    [(271, 239), (2710, 2390), (27100, 23900), (271000, 239000)],
];

fn component(kind: CodeKind, n: usize, k: usize, d: usize) -> Option<CodeSpec> {
    let m = (n + 1).trailing_zeros();
    let field = common::field(m);
    let t = (d - 1) / 2;
    let code = match kind {
        CodeKind::Bch => CodeSpec::bch(field, t),
        CodeKind::Rs => CodeSpec::rs(field, t),
    }
    .ok()?;
    (code.n() == n && code.k() == k).then_some(code)
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    for (row, listed) in CODE_TABLE.iter().zip(LISTED) {
        let (a, b, label, rate) = *row;
        let (Some(c1), Some(c2)) = (component(a.0, a.1, a.2, a.3), component(b.0, b.1, b.2, b.3))
        else {
            bad.push(format!("components of {label} {:?}", listed[0]));
            continue;
        };
        let construction = if a.0 == b.0 { Construction::C1 } else { Construction::C2 };
        for (m_blocks, (l, n)) in [1, 10, 100, 1000].into_iter().zip(listed) {
            rows += 1;
            let spec = GpcbSpec::new(c1.clone(), c2.clone(), m_blocks, Pattern::Random, construction);
            let ok = spec.as_ref().is_ok_and(|s| {
                let (num, den) = s.rate_fraction();
                // Listed rates are truncated to two decimals.
                let truncated = (100 * num / den) as f64 / 100.0;
                s.notation() == (l, n)
                    && (truncated - rate).abs() < 1e-9
                    && s.name() == format!("{label}({l}, {n})")
            });
            if !ok {
                bad.push(format!("{label}({l}, {n})"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{rows} rows checked, mismatches: {bad:?}"))
}

// ---------------------------------------------------------------- 2

fn round_trip_failures(code: &CodeSpec, trials: u64) -> u64 {
    let q = 1u32 << code.symbol_bits();
    (0..trials)
        .filter(|&trial| {
            let mut rng = frame_rng(0xACCE, trial);
            let msg: Vec<Gf> = (0..code.k()).map(|_| rng.random_range(0..q) as Gf).collect();
            let cw = code.encode(&msg).unwrap();
            let mut word = cw.clone();
            let mut pos: Vec<usize> = (0..code.n()).collect();
            for i in 0..rng.random_range(0..=code.t()) {
                let j = rng.random_range(i..code.n());
                pos.swap(i, j);
                word[pos[i]] ^= rng.random_range(1..q) as Gf;
            }
            !matches!(code.decode_bounded(&word), Ok(DecodeOutcome::Corrected { codeword, .. }) if codeword == cw)
        })
        .count() as u64
}

fn criterion_2() -> Outcome {
    let mut codes: Vec<(CodeKind, usize, usize, usize)> =
        CODE_TABLE.iter().flat_map(|r| [r.0, r.1]).collect();
    codes.dedup();
    let mut failures = 0;
    let mut tested = 0;
    for (kind, n, k, d) in codes.iter().copied() {
        match component(kind, n, k, d) {
            Some(code) => {
                failures += round_trip_failures(&code, 1000);
                tested += 1;
            }
            None => failures += 1,
        }
    }
    outcome(failures == 0, format!("{tested} component codes × 1000 trials, {failures} failures"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let expected = [(6, 63, 51, 13), (7, 127, 113, 15), (8, 255, 239, 17)];
    let mut got = Vec::new();
    let mut ok = true;
    for (m, n, k, d) in expected {
        match pair_construction2(common::field(m), 2) {
            Ok((b, r)) => {
                got.push(format!("{b} + {r}"));
                ok &= b.kind() == CodeKind::Bch && (b.n(), b.k(), b.d()) == (n, k, 5);
                ok &= r.kind() == CodeKind::Rs && (r.n(), r.k(), r.d()) == (n, k, d);
            }
            Err(e) => {
                ok = false;
                got.push(e.to_string());
            }
        }
    }
    outcome(ok, got.join("; "))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    // Least-reliable positions I1..I5 of each test sequence, 1-based.
    let appendix: [&[usize]; 18] = [
        &[],
        &[1],
        &[2],
        &[1, 2],
        &[3],
        &[1, 3],
        &[4],
        &[2, 3],
        &[1, 4],
        &[1, 2, 3],
        &[1, 5],
        &[2, 3, 4],
        &[1, 2, 3, 4],
        &[1, 3, 5],
        &[1, 2, 4, 5],
        &[1, 3, 4, 5],
        &[2, 3, 4, 5],
        &[1, 2, 3, 4, 5],
    ];
    let mut want: Vec<Vec<usize>> = appendix.iter().map(|s| s.iter().map(|i| i - 1).collect()).collect();
    let mut have: Vec<Vec<usize>> = test_patterns()
        .iter()
        .map(|p| {
            let mut f = p.flip_set();
            f.sort();
            f
        })
        .collect();
    let count = have.len();
    want.sort();
    have.sort();
    outcome(want == have, format!("{count} patterns"))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let agree = common::bch15_ml_agreement(10_000, 4.0, 2024);
    let floor = common::BCH15_ML_BASELINE - 100;
    outcome(
        agree >= floor,
        format!("{agree}/10000 agree (baseline {}, floor {floor})", common::BCH15_ML_BASELINE),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let spec = GpcbSpec::new(
        CodeSpec::rs(common::field(6), 5).unwrap(),
        CodeSpec::rs(common::field(6), 5).unwrap(),
        100,
        InterleaverChoice::new(Pattern::Random).with_seed(1),
        Construction::C1,
    )
    .unwrap();
    let codec = GpcbCodec::new(spec, DecodeParams::with_defaults(8).unwrap());
    // Coarse scan for the point where iteration 1 sits nearest 1e-3.
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..6 {
        let ebn0 = 4.6 + 0.2 * i as f64;
        let one = GpcbCodec::new(codec.spec.clone(), codec.params.truncated(1).unwrap());
        let ber = run_ber(&one, ebn0, 11, StopRule::fixed(20)).unwrap().last().ber();
        let gap = (ber.max(1e-12).log10() + 3.0).abs();
        if gap < best.0 {
            best = (gap, ebn0);
        }
    }
    let ebn0 = best.1;
    let res = run_ber(&codec, ebn0, 1, StopRule::fixed(150)).unwrap();
    let (first, last) = (res.iteration(1), res.iteration(8));
    let ok = first.frame_errors >= 100 && last.ber() * 5.0 <= first.ber();
    outcome(
        ok,
        format!(
            "Eb/N0 {ebn0:.1} dB: BER it1 {:.3e} ({} frame errors), it8 {:.3e}, ratio {}",
            first.ber(),
            first.frame_errors,
            last.ber(),
            if last.ber() > 0.0 { format!("{:.1}", first.ber() / last.ber()) } else { "inf".into() }
        ),
    )
}

// ---------------------------------------------------------------- 7, 8

fn separated(lower: &IterationStats, higher: &IterationStats) -> bool {
    higher.ber() - lower.ber() > 2.0 * (lower.ber_std_error() + higher.ber_std_error())
}

fn simulate(spec: GpcbSpec, iterations: usize, ebn0: f64) -> IterationStats {
    let codec = GpcbCodec::new(spec, DecodeParams::with_defaults(iterations).unwrap());
    let stop = StopRule { min_frame_errors: 100, max_frames: 3000 };
    *run_ber(&codec, ebn0, 7, stop).unwrap().last()
}

fn bch127() -> CodeSpec {
    CodeSpec::bch(common::field(7), 2).unwrap()
}

fn criterion_7() -> Outcome {
    let ebn0 = 3.0;
    let stats: Vec<IterationStats> = [1, 10, 100]
        .into_iter()
        .map(|m| {
            let spec = GpcbSpec::new(bch127(), bch127(), m, Pattern::Random, Construction::C1).unwrap();
            simulate(spec, 7, ebn0)
        })
        .collect();
    let ok = separated(&stats[1], &stats[0]) && separated(&stats[2], &stats[1]);
    outcome(
        ok,
        format!(
            "GPCB-BCH(141, 113) at {ebn0} dB, 7 iterations: M=1 {:.3e}, M=10 {:.3e}, M=100 {:.3e}",
            stats[0].ber(),
            stats[1].ber(),
            stats[2].ber()
        ),
    )
}

fn criterion_8() -> Outcome {
    let ebn0 = 3.5;
    let m_blocks = 10;
    let rs127 = || CodeSpec::rs(common::field(7), 7).unwrap();
    let bch = simulate(
        GpcbSpec::new(bch127(), bch127(), m_blocks, Pattern::Random, Construction::C1).unwrap(),
        7,
        ebn0,
    );
    let mixed = simulate(
        GpcbSpec::new(bch127(), rs127(), m_blocks, Pattern::Random, Construction::C2).unwrap(),
        8,
        ebn0,
    );
    let rs = simulate(
        GpcbSpec::new(rs127(), rs127(), m_blocks, Pattern::Random, Construction::C1).unwrap(),
        8,
        ebn0,
    );
    let ok = separated(&bch, &mixed) && separated(&mixed, &rs);
    outcome(
        ok,
        format!(
            "(141, 113), M={m_blocks}, {ebn0} dB: BCH {:.3e} < BCH-RS {:.3e} < RS {:.3e}",
            bch.ber(),
            mixed.ber(),
            rs.ber()
        ),
    )
}

// ---------------------------------------------------------------- 9

fn field_axioms() -> bool {
    let f = Field::with_default_poly(8).unwrap();
    let mut rng = frame_rng(5, 0);
    (0..20_000).all(|_| {
        let [a, b, c]: [Gf; 3] = std::array::from_fn(|_| rng.random_range(0..256) as Gf);
        f.add(a, b) == f.add(b, a)
            && f.mul(a, b) == f.mul(b, a)
            && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            && (a == 0 || f.mul(a, f.inv(a).unwrap()) == 1)
    })
}

fn interleavers_bijective() -> bool {
    Pattern::ALL.into_iter().all(|p| {
        [(1, 53), (10, 113), (100, 239)].into_iter().all(|(m, k)| {
            let perm = InterleaverSpec::new(p, m * k).with_geometry(m, k).with_seed(9).build().unwrap();
            let mut seen = vec![false; perm.len()];
            perm.forward().iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        })
    })
}

fn extrinsic_identity() -> bool {
    let code = CodeSpec::rs(common::field(4), 2).unwrap();
    let dec = ChasePyndiah::new(code);
    (0..500u64).all(|t| {
        let mut rng = frame_rng(6, t);
        let r: Vec<f64> = (0..60).map(|_| rng.random_range(-2.0..2.0)).collect();
        let out = dec.decode(&r, 0.5).unwrap();
        out.soft_out.iter().zip(&r).zip(&out.extrinsic).all(|((o, i), w)| o - i == *w)
    })
}

struct ParityWatch {
    frame: Vec<f64>,
    offsets: [usize; 2],
    lens: [usize; 2],
    k_bits: [usize; 2],
    ok: bool,
}

impl DecodeObserver for ParityWatch {
    fn component_input(&mut self, _: usize, c: Component, block: usize, soft_in: &[f64]) {
        let i = (c == Component::Second) as usize;
        let start = self.offsets[i] + block * self.lens[i];
        self.ok &= soft_in[self.k_bits[i]..] == self.frame[start..start + self.lens[i]];
    }
}

fn parity_immutable() -> bool {
    let spec = GpcbSpec::new(bch127(), CodeSpec::rs(common::field(7), 7).unwrap(), 2, Pattern::Random, Construction::C2)
        .unwrap();
    let mut rng = frame_rng(8, 0);
    let frame: Vec<f64> = (0..spec.frame_bits()).map(|_| rng.random_range(-1.5..1.5)).collect();
    let nb = spec.info_bits();
    let (c1, c2) = (spec.code1(), spec.code2());
    let len1 = (c1.n() - c1.k()) * c1.symbol_bits();
    let len2 = (c2.n() - c2.k()) * c2.symbol_bits();
    let mut watch = ParityWatch {
        frame: frame.clone(),
        offsets: [nb, nb + len1 * nb / (c1.k() * c1.symbol_bits())],
        lens: [len1, len2],
        k_bits: [c1.k() * c1.symbol_bits(), c2.k() * c2.symbol_bits()],
        ok: true,
    };
    spec.decode_observed(&frame, &DecodeParams::with_defaults(8).unwrap(), &mut watch).unwrap();
    watch.ok
}

fn deterministic() -> bool {
    let spec = GpcbSpec::new(bch127(), bch127(), 2, Pattern::Berrou, Construction::C1).unwrap();
    let codec = GpcbCodec::new(spec, DecodeParams::with_defaults(4).unwrap());
    let run = || run_ber(&codec, 3.0, 42, StopRule { min_frame_errors: 10, max_frames: 200 }).unwrap();
    run().iterations == run().iterations
}

fn criterion_9() -> Outcome {
    let checks = [
        ("field axioms", field_axioms()),
        ("interleaver bijectivity", interleavers_bijective()),
        ("extrinsic identity", extrinsic_identity()),
        ("parity immutability", parity_immutable()),
        ("determinism", deterministic()),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(failed.is_empty(), format!("{} suites, failed: {failed:?}", checks.len()))
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let codec = Uncoded { bits: 1000 };
    let mut ok = true;
    let mut detail = Vec::new();
    for ebn0 in [0.0, 2.0, 4.0] {
        let s = *run_ber(&codec, ebn0, 10, StopRule::fixed(1000)).unwrap().last();
        let p = common::q_function((2.0 * 10f64.powf(ebn0 / 10.0)).sqrt());
        let sd = (p * (1.0 - p) / s.bits as f64).sqrt();
        ok &= (s.ber() - p).abs() <= 3.0 * sd;
        detail.push(format!("{ebn0} dB {:.4e} vs Q {p:.4e}", s.ber()));
    }
    outcome(ok, detail.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("reference code table", criterion_1),
        ("component round trips", criterion_2),
        ("construction-2 pairing", criterion_3),
        ("Chase test patterns", criterion_4),
        ("ML agreement", criterion_5),
        ("turbo gain over iterations", criterion_6),
        ("interleaver size effect", criterion_7),
        ("family ordering", criterion_8),
        ("property suites", criterion_9),
        ("uncoded BPSK", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failures += !o.pass as usize;
        println!(
            "criterion {:>2} {}: {} ({}) [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
