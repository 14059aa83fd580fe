use proptest::prelude::*;
use qwec::codec::*;
use qwec::error_model::{sample_random_error, Family};
use qwec::pauli::*;
use qwec::scalar::*;
use qwec::schedule::LogicalGate;
use qwec::walk::{Layout, MeasurePolicy};
use qwec::{rng_for, Complex};
use std::sync::OnceLock;

type Sv = qwec::StateVector;

fn basis() -> &'static LogicalBasis<f64> {
    static B: OnceLock<LogicalBasis<f64>> = OnceLock::new();
    B.get_or_init(|| LogicalBasis::new(Signs::default()).unwrap())
}

fn bloch_of(a: Complex, b: Complex) -> [f64; 3] {
    let n = a.norm_sqr() + b.norm_sqr();
    let ab = a.conj() * b;
    [2.0 * ab.re / n, 2.0 * ab.im / n, (a.norm_sqr() - b.norm_sqr()) / n]
}

fn gate_2x2(g: char) -> [[Complex; 2]; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        'H' => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        'S' => [[cone(), czero()], [czero(), c(0.0, 1.0)]],
        'Z' => [[cone(), czero()], [czero(), c(-1.0, 0.0)]],
        'T' => [[cone(), czero()], [czero(), c(r, r)]],
        _ => unreachable!(),
    }
}

fn apply_2x2(m: [[Complex; 2]; 2], v: (Complex, Complex)) -> (Complex, Complex) {
    (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn preparation_fixes_requested_signs() {
    for (z, g) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let sg = Signs { stabilizers: [1, -1, 1, 1, -1, 1], logical_z: z, g };
        let (s, hist, _) = prepare_logical_zero::<f64>(Layout::data_only(), PrepPolicy::Forced(sg)).unwrap();
        for (i, st) in stabilizers().iter().enumerate() {
            assert!((s.expectation(st).unwrap() - sg.stabilizers[i] as f64).abs() < 1e-12);
        }
        assert!((s.expectation(&logical_z()).unwrap() - z as f64).abs() < 1e-12);
        assert!((s.expectation(&gauge_g()).unwrap() - g as f64).abs() < 1e-12);
        assert_eq!(hist.reference, sg.stabilizers);
    }
}

#[test]
fn random_preparation_then_quiet_cycle() {
    let mut rng = rng_for(11, 0);
    let (s, mut hist, _) = prepare_logical_zero::<f64>(Layout::data_only(), PrepPolicy::Random(&mut rng, 1, 1)).unwrap();
    let mut t = s.clone();
    let m = run_cycle(&mut t, &mut hist, &mut rng).unwrap();
    assert_eq!(m.to_string(), "000000");
    assert!((t.fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn encode_reaches_the_requested_bloch_vector() {
    let (zero, _, _) = prepare_logical_zero::<f64>(Layout::with_external(), PrepPolicy::Forced(Signs::default())).unwrap();
    for (a, b) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0)), (c(0.6, 0.0), c(0.0, 0.8))] {
        let out = encode(a, b, &zero, MeasurePolicy::BothBranches).unwrap();
        let total: f64 = out.iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (_, st) in out {
            let r = logical_readout(&st, &PauliFrame::default()).unwrap();
            assert!(dist(r.bloch, bloch_of(a, b)) < 1e-10, "{r:?}");
        }
    }
}

#[test]
fn encode_rejects_zero_amplitudes() {
    let z = &basis().zero;
    assert!(encode(czero(), czero(), z, MeasurePolicy::Forced(0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn clifford_words_match_two_by_two(th in 0.0..std::f64::consts::PI, ph in 0.0..std::f64::consts::TAU,
                                       word in proptest::collection::vec(0usize..3, 1..5)) {
        let (a, b) = (c((th / 2.0).cos(), 0.0), cis(ph) * (th / 2.0).sin());
        let mut s = basis().state(a, b);
        let mut f = PauliFrame::default();
        let mut v = (a, b);
        for k in word {
            let (g, ch) = [(LogicalGate::H, 'H'), (LogicalGate::S, 'S'), (LogicalGate::Z, 'Z')][k];
            f = apply_logical_clifford(&mut s, &f, g).unwrap();
            v = apply_2x2(gate_2x2(ch), v);
        }
        let r = logical_readout(&s, &f).unwrap();
        prop_assert!(dist(r.gauge_fixed, bloch_of(v.0, v.1)) < 1e-8, "{:?} vs {:?}", r.gauge_fixed, bloch_of(v.0, v.1));
    }
}

fn t_branches(states: Vec<(f64, Sv)>, hist: &SyndromeHistory) -> Vec<(f64, Sv)> {
    let mut out = Vec::new();
    for (p, s) in states {
        for (q, t) in logical_t_branches(&s, hist).unwrap() {
            out.push((p * q, t));
        }
    }
    out
}

fn cycled_history() -> SyndromeHistory {
    let b = basis();
    let mut h = b.history.clone();
    h.push(h.reference);
    h
}

#[test]
fn t_on_plus_lands_on_the_equator_diagonal() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let hist = cycled_history();
    let br = t_branches(vec![(1.0, basis().state(c(r, 0.0), c(r, 0.0)))], &hist);
    let total: f64 = br.iter().map(|b| b.0).sum();
    assert!((total - 1.0).abs() < 1e-10);
    for (_, s) in &br {
        let rd = logical_readout(s, &PauliFrame::default()).unwrap();
        assert!(dist(rd.gauge_fixed, [r, r, 0.0]) < 1e-8, "{rd:?}");
    }
}

#[test]
fn t_twice_matches_s() {
    let hist = cycled_history();
    let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
    let br = t_branches(t_branches(vec![(1.0, basis().state(a, b))], &hist), &hist);
    let mut s = basis().state(a, b);
    let f = apply_logical_clifford(&mut s, &PauliFrame::default(), LogicalGate::S).unwrap();
    let want = logical_readout(&s, &f).unwrap().gauge_fixed;
    for (_, t) in &br {
        let got = logical_readout(t, &PauliFrame::default()).unwrap().gauge_fixed;
        assert!(dist(got, want) < 1e-8, "{got:?} {want:?}");
    }
}

#[test]
fn sampled_t_stays_in_the_code_space() {
    let hist = cycled_history();
    let mut rng = rng_for(5, 0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let s = logical_t(&basis().state(c(r, 0.0), c(r, 0.0)), &hist, &mut rng).unwrap();
    let rd = logical_readout(&s, &PauliFrame::default()).unwrap();
    assert!(dist(rd.gauge_fixed, [r, r, 0.0]) < 1e-8);
}

#[test]
fn measure_g_needs_a_completed_cycle() {
    let b = basis();
    let r = measure_g(&b.zero, &b.history, &PauliFrame::default(), MeasurePolicy::BothBranches);
    assert!(matches!(r, Err(qwec::error::QwecError::Precondition(_))));
    let out = measure_g(&b.zero, &cycled_history(), &PauliFrame::default(), MeasurePolicy::BothBranches).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].sign, 1);
}

// one flip per cycle, up to three cycles
fn flip_run(seed: u64, flips: usize, deferred: bool) -> (Sv, PauliFrame, SyndromeHistory) {
    let mut rng = rng_for(seed, 0);
    let mut s = basis().state(c(0.28, 0.0), c(0.0, 0.96));
    let mut hist = basis().history.clone();
    let mut frame = PauliFrame::default();
    for k in 0..3 {
        if k < flips {
            let e: qwec::ErrorSpec = sample_random_error(&mut rng, Family::Pauli, DATA[k % 3]);
            e.inject(&mut s).unwrap();
        }
        // outcomes are deterministic here; the rng only feeds the error choice
        run_cycle(&mut s, &mut hist, &mut rng_for(seed, 1 + k as u64)).unwrap();
        frame = update_frame(&hist, &frame).unwrap();
        if !deferred {
            frame = apply_frame(&mut s, &mut hist, &frame).unwrap();
        }
    }
    let frame = apply_frame(&mut s, &mut hist, &frame).unwrap();
    (s, frame, hist)
}

#[test]
fn deferred_correction_equals_per_cycle_correction() {
    for seed in 0..6 {
        for flips in 0..=3 {
            let (a, fa, ha) = flip_run(seed, flips, false);
            let (b, fb, hb) = flip_run(seed, flips, true);
            assert!(!fa.uncorrectable() && !fb.uncorrectable());
            assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-10);
            let ra = logical_readout(&a, &fa).unwrap();
            let rb = logical_readout(&b, &fb).unwrap();
            assert!(dist(ra.bloch, rb.bloch) < 1e-12);
            assert!(dist(ra.bloch, bloch_of(c(0.28, 0.0), c(0.0, 0.96))) < 1e-10);
            // every single-qubit flip shows up exactly once in either run
            for h in [&ha, &hb] {
                let nonzero = h.cycles.iter().filter(|c| c.m != "000000").count();
                assert_eq!(nonzero, flips);
            }
            assert_eq!(ha.cycles.iter().map(|c| &c.m).collect::<Vec<_>>(), hb.cycles.iter().map(|c| &c.m).collect::<Vec<_>>());
        }
    }
}

#[test]
fn single_coin_and_shift_errors_are_corrected() {
    let b = basis();
    let mut rng = rng_for(21, 0);
    let hist = cycled_history();
    for fam in [Family::Coin, Family::Shift] {
        for p in DATA {
            let (a, bb) = (c(0.6, 0.0), c(0.0, 0.8));
            let mut s = b.state(a, bb);
            let e: qwec::ErrorSpec = sample_random_error(&mut rng, fam, p);
            e.inject(&mut s).unwrap();
            let mut fid = 0.0;
            for (pr, st, h) in run_cycle_branches(&s, &hist, None).unwrap() {
                let f = update_frame(&h, &PauliFrame::default()).unwrap();
                let r = logical_readout(&st, &f).unwrap().bloch;
                let want = bloch_of(a, bb);
                fid += pr * (1.0 + r[0] * want[0] + r[1] * want[1] + r[2] * want[2]) / 2.0;
            }
            assert!(fid > 1.0 - 1e-8, "{fam} on P{p}: {fid}");
        }
    }
}

#[test]
fn transcript_serializes() {
    let b = basis();
    let mut s = b.zero.clone();
    let mut h = b.history.clone();
    run_cycle(&mut s, &mut h, &mut rng_for(0, 0)).unwrap();
    let f = PauliFrame::default();
    let r = logical_readout(&s, &f).unwrap();
    let t = Transcript::new(&h, &f, Some(&r));
    let js = serde_json::to_string(&t).unwrap();
    let back: Transcript = serde_json::from_str(&js).unwrap();
    assert_eq!(back.cycles, h.cycles);
    assert_eq!(back.frame, f);
}
