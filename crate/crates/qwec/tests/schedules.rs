use qwec::codec::{gauge_g_prime, measure_h_walk, LogicalBasis, Signs};
use qwec::oracle::*;
use qwec::pauli::*;
use qwec::scalar::*;
use qwec::schedule::*;
use qwec::walk::*;
use qwec::{rng_for, Complex};
use std::sync::OnceLock;

fn basis() -> &'static LogicalBasis<f64> {
    static B: OnceLock<LogicalBasis<f64>> = OnceLock::new();
    B.get_or_init(|| LogicalBasis::new(Signs::default()).unwrap())
}

fn plus_minus(sign: f64) -> [Complex; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [c(r, 0.0), c(sign * r, 0.0)]
}

#[test]
fn transform_swaps_x_and_z_triples() {
    let w = single_particle_unitary::<f64>(&build_basis_transform(&[0])).unwrap();
    let xxx = dense_of::<f64>(&PauliWord::on_particle(0, "XXX"), &[0]).unwrap();
    let zzz = dense_of::<f64>(&PauliWord::on_particle(0, "ZZZ"), &[0]).unwrap();
    assert!(w.unitarity_defect() < 1e-12);
    assert!(w.mul(&xxx).max_diff(&zzz.mul(&w)) < 1e-12);
    assert!(w.mul(&zzz).max_diff(&xxx.mul(&w)) < 1e-12);
}

#[test]
fn cycle_is_quiet_on_codewords() {
    let b = basis();
    let s = b.state(c(0.6, 0.0), c(0.0, 0.8));
    let prog = build_full_cycle::<f64>(0);
    let br = run_branches(&prog, &s, 1e-15).unwrap();
    assert_eq!(br.len(), 1);
    assert!(br[0].records.iter().all(|r| r.bit == 0));
    assert!((br[0].state.fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn cycle_reproduces_table_two() {
    let b = basis();
    for (w, m) in table_rows() {
        let mut s = b.zero.clone();
        s.apply_pauli(&w).unwrap();
        let br = run_branches(&build_full_cycle::<f64>(0), &s, 1e-15).unwrap();
        assert_eq!(br.len(), 1, "{w}");
        let mut got = 0u8;
        for r in &br[0].records {
            if let MeasTag::S(i) = r.tag {
                got |= r.bit << i;
            }
        }
        assert_eq!(Syndrome(got), m, "{w}");
    }
}

#[test]
fn cnot_on_coin_and_logical() {
    let b = basis();
    let mut ins = Vec::new();
    for coin in [[cone(), czero()], [czero(), cone()]] {
        for l in [&b.zero, &b.one] {
            ins.push(l.with_external(coin).unwrap());
        }
    }
    let u = extract_unitary(&build_cnot_coin_to_logical(), &ins, &ins).unwrap();
    let mut want = qwec::Dense::identity(4);
    want.set(2, 2, czero());
    want.set(3, 3, czero());
    want.set(2, 3, cone());
    want.set(3, 2, cone());
    assert!(u.max_diff(&want) < 1e-10, "{u:?}");
}

#[test]
fn cnot_inverse_undoes_it() {
    let b = basis();
    let s = b.state(c(0.3, 0.1), c(-0.2, 0.9)).with_external(plus_minus(-1.0)).unwrap();
    let prog = build_cnot_coin_to_logical::<f64>();
    let mut t = s.clone();
    run_unitary(&prog, &mut t).unwrap();
    run_unitary(&prog.inverse().unwrap(), &mut t).unwrap();
    assert!(t.max_diff(&s) < 1e-12);
}

#[test]
fn middle_block_is_controlled_zzz_on_p4() {
    let d: qwec::walk::StateVector<f64> = random_state(Layout { chain: 3, external: false }, &mut rng_for(9, 0));
    let data = embed_data(d.amplitudes(), Layout::data_only()).unwrap();
    let zzz = PauliWord::on_particle(P4, "ZZZ");
    for (coin, w) in [([cone(), czero()], PauliWord::identity()), ([czero(), cone()], zzz)] {
        let s = data.with_external(coin).unwrap();
        let mut a = s.clone();
        run_unitary(&build_cnot_middle::<f64>(), &mut a).unwrap();
        let mut want = s.clone();
        want.apply_pauli(&w).unwrap();
        assert!(a.max_diff(&want) < 1e-12);
    }
}

#[test]
fn cphase_branches() {
    let b = basis();
    let l = b.state(c(0.8, 0.0), c(0.0, 0.6));
    // |+> on the external coin: untouched
    let s = l.with_external(plus_minus(1.0)).unwrap();
    let mut t = s.clone();
    run_unitary(&build_cphase::<f64>(), &mut t).unwrap();
    assert!(t.max_diff(&s) < 1e-10);
    // |->: the data pick up g' Zbar with g' = H g H
    let s = l.with_external(plus_minus(-1.0)).unwrap();
    let mut t = s.clone();
    run_unitary(&build_cphase::<f64>(), &mut t).unwrap();
    let mut want = s.clone();
    want.apply_pauli(&(gauge_g_prime() * logical_z())).unwrap();
    assert!(t.max_diff(&want) < 1e-10);
}

#[test]
fn gauge_zz_program_reads_h_without_disturbance() {
    let cb = codespace_basis::<f64>([1; 6]).unwrap();
    for (sg, v) in &cb.vectors {
        let s = embed_data(v, Layout::data_only()).unwrap();
        let out = measure_h_walk(&s).unwrap();
        assert_eq!(out.len(), 1);
        let (h, p, st) = &out[0];
        assert_eq!(*h, sg[1] * sg[2], "{sg:?}");
        assert!((p - 1.0).abs() < 1e-12);
        assert!((st.fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
    }
    // a superposition across h splits evenly and each branch is the projection
    let a = embed_data(cb.get(1, 1, 1).unwrap(), Layout::data_only()).unwrap();
    let bm = embed_data(cb.get(1, 1, -1).unwrap(), Layout::data_only()).unwrap();
    let mut s = a.clone();
    s.axpy(cone(), &bm).unwrap();
    s.normalize();
    let out = measure_h_walk(&s).unwrap();
    assert_eq!(out.len(), 2);
    for (h, p, st) in out {
        assert!((p - 0.5).abs() < 1e-12);
        let want = if h > 0 { &a } else { &bm };
        assert!((st.fidelity(want).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn branch_probabilities_sum_to_one() {
    let b = basis();
    let mut s = b.state(c(1.0, 0.0), c(1.0, 0.0));
    let e: qwec::ErrorSpec = qwec::error_model::sample_random_error(&mut rng_for(4, 0), qwec::error_model::Family::Coin, P2);
    e.inject(&mut s).unwrap();
    let br = run_branches(&build_full_cycle::<f64>(0), &s, 1e-15).unwrap();
    assert!(br.len() > 1);
    let total: f64 = br.iter().map(|b| b.probability).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn forcing_an_impossible_outcome_is_an_error() {
    let mut s = basis().zero.clone();
    let r = run_forced(&build_syndrome_step::<f64>(SyndromePair::S0S2), &mut s, &[1, 0]);
    assert!(matches!(r, Err(qwec::error::QwecError::ZeroProbability(_))));
}

#[test]
fn clifford_steps_are_single_coin_iterations() {
    for g in [LogicalGate::H, LogicalGate::S, LogicalGate::Z] {
        let p = build_logical_clifford::<f64>(g);
        assert_eq!(p.iterations(), 1);
        assert!(!p.steps.iter().any(|s| matches!(s, WalkStep::Shift)));
    }
}
