use homolattice::circuit::{Pauli, PauliOperator};
use homolattice::codes::{catalog, DecoderStrategy, DEFAULT_DECODER_CAP};
use homolattice::complex::{css_from_boundary, ChainComplex};
use homolattice::ftgate::{
    build_protocol, check_band_confinement, decode_step, doubled_t_protocol, fault_injection_run, map_syndrome,
    measure, sparsity_profile, transversal_layer, CorrectAt, ErrorModel, GateSchedule, Phase, ProtocolDecoder,
    Residual, Simulator, TransversalKind,
};
use homolattice::gf2::BitVec;
use homolattice::hprod::homological_product;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn steane_422(kind: Option<TransversalKind>) -> (GateSchedule, ProtocolDecoder) {
    let p = homological_product(&catalog::steane(), &catalog::four_two_two_complex());
    let layer = kind.map_or(Vec::new(), |k| transversal_layer(&p, 2, k, 0).unwrap());
    let s = build_protocol(&p, 2, &layer).unwrap();
    let d = ProtocolDecoder::new(&s, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
    (s, d)
}

fn steane_rm() -> (GateSchedule, ProtocolDecoder) {
    let p = homological_product(&catalog::steane(), &catalog::padded_reed_muller());
    let layer = transversal_layer(&p, 2, TransversalKind::H, 0).unwrap();
    let s = build_protocol(&p, 2, &layer).unwrap();
    let d = ProtocolDecoder::new(&s, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).unwrap();
    (s, d)
}

fn stabilizer_code(s: &GateSchedule, step: usize) -> homolattice::complex::CssCode {
    css_from_boundary(&ChainComplex::new(s.frame(step).clone()).unwrap())
}

#[test]
fn steane_rm_profile() {
    let (s, _) = steane_rm();
    let profile = sparsity_profile(&s);
    assert_eq!(profile[0], 15);
    assert_eq!(*profile.last().unwrap(), 15);
    assert_eq!(s.frame(s.len()), s.product().boundary());
}

#[test]
fn every_error_on_one_band_is_corrected() {
    let (s, d) = steane_422(Some(TransversalKind::S));
    let bands = s.positions();
    let steps = [0, s.frame_step(), s.transversal_step().unwrap(), s.len()];
    for step in steps {
        let code = stabilizer_code(&s, step);
        for band in 0..bands {
            let qubits: Vec<usize> = (0..s.blocks()).map(|u| s.qubit(band, u)).collect();
            for word in 1u32..(1 << (2 * qubits.len())) {
                let mut e = PauliOperator::identity(s.n());
                for (i, &q) in qubits.iter().enumerate() {
                    e.set(q, Pauli::from_bits(word >> (2 * i) & 1 == 1, word >> (2 * i + 1) & 1 == 1));
                }
                let (bx, bz) = measure(&s, step, &e);
                let r = decode_step(&s, step, &bx, &bz, &d).unwrap();
                assert!(r.within_bound);
                assert!(code.is_stabilizer(&r.recovery.times(&e)), "step {step} band {band} error {e}");
            }
        }
    }
}

#[test]
fn sampled_single_band_errors_on_the_large_protocol() {
    let (s, d) = steane_rm();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for step in [0, s.frame_step(), s.len() / 3, s.len()] {
        let code = stabilizer_code(&s, step);
        for _ in 0..300 {
            let band = rng.random_range(0..s.positions());
            let mut e = PauliOperator::identity(s.n());
            for u in 0..s.blocks() {
                e.set(s.qubit(band, u), Pauli::from_bits(rng.random(), rng.random()));
            }
            let (bx, bz) = measure(&s, step, &e);
            let r = decode_step(&s, step, &bx, &bz, &d).unwrap();
            assert!(code.is_stabilizer(&r.recovery.times(&e)));
        }
    }
}

#[test]
fn mapped_fault_stays_in_its_band() {
    let (s, _) = steane_rm();
    let n = s.n();
    let frame = s.half_canonical();
    for j in 0..s.blocks() {
        let q = s.qubit(1, j);
        let e = PauliOperator::single(n, q, Pauli::X);
        let (bx, bz) = measure(&s, 0, &e);
        let (fx, fz) = map_syndrome(&s, 0, &bx, &bz).unwrap();
        let moved = s.propagate_to_frame(0, &e);
        assert_eq!(fz, frame.vec_mul(moved.x_bits()));
        assert!(fx.is_zero());
        assert!(moved.support().iter_ones().all(|c| s.locate(c).0 == 1));
    }
}

#[test]
fn ancilla_faults_touch_only_ancilla_checks() {
    let (s, _) = steane_rm();
    let n = s.n();
    let step = s.frame_step();
    let kq = s.logical_blocks();
    for q in (0..n).filter(|&q| s.locate(q).1 >= kq) {
        for pauli in [Pauli::X, Pauli::Z] {
            let e = PauliOperator::single(n, q, pauli);
            let (bx, bz) = measure(&s, step, &e);
            let (fx, fz) = map_syndrome(&s, step, &bx, &bz).unwrap();
            assert!(fx.iter_ones().chain(fz.iter_ones()).all(|c| s.locate(c).1 >= kq));
        }
    }
}

#[test]
fn faults_in_one_band_never_fail_but_two_bands_can() {
    let (s, d) = steane_422(None);
    let sim = Simulator::new(&s, &d, false);
    let locs = sim.locations();
    let mut same_band_logical = 0;
    let mut cross_band_logical = 0;
    for a in 0..locs.len() {
        for b in a..locs.len() {
            let same = s.band_of(locs[a].qubits[0]) == s.band_of(locs[b].qubits[0]);
            // X or Z on the first qubit of each location is enough to exhibit failures
            let kinds_a = if locs[a].two_qubit { vec![3, 11] } else { vec![0, 2] };
            let kinds_b = if locs[b].two_qubit { vec![3, 11] } else { vec![0, 2] };
            for &ka in &kinds_a {
                for &kb in &kinds_b {
                    if a == b && ka == kb {
                        continue;
                    }
                    let out = sim.run(&[(a, ka), (b, kb)], CorrectAt::End).unwrap();
                    if out.residual == Residual::Logical {
                        if same {
                            same_band_logical += 1;
                        } else {
                            cross_band_logical += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(same_band_logical, 0);
    assert!(cross_band_logical > 0);
}

#[test]
fn error_rate_grows_with_p() {
    let (s, d) = steane_rm();
    let run = |p: f64| {
        let model = ErrorModel::new(p, 17).unwrap();
        fault_injection_run(&s, &d, &model, 1500, CorrectAt::End).unwrap()
    };
    let zero = run(0.0);
    assert_eq!(zero.counts.logical, 0);
    assert_eq!(zero.counts.identity, 1500);
    assert!(zero.band_histogram.iter().all(|&c| c == 0));
    let low = run(1e-3);
    let high = run(1e-2);
    assert!(low.failure_rate < high.failure_rate, "{} vs {}", low.failure_rate, high.failure_rate);
    assert!(high.band_histogram.iter().sum::<u64>() > 0);
    let json: serde_json::Value = serde_json::from_str(&high.to_json()).unwrap();
    for key in ["schedule_id", "p", "trials", "seed", "counts", "failure_rate", "ci95", "band_histogram"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn doubled_t_protocol_is_band_confined() {
    let s = doubled_t_protocol(&catalog::steane(), &catalog::reed_muller_15()).unwrap();
    assert!(s.propagation_approximate());
    assert_eq!(s.n(), 7 * 60);
    assert_eq!(s.band_count(), 15);
    assert_eq!(s.frame(0), s.frame(s.len()));
    assert!(s.layers().iter().any(|l| l.phase == Phase::InnerUnencode));
    let t_layer = &s.layers()[s.transversal_step().unwrap() - 1];
    assert_eq!(t_layer.gates.len(), 15);
    let r = check_band_confinement(&s);
    assert_eq!(r.violations, 0, "{:?}", r.first_violation);
}

#[test]
fn syndrome_lengths_are_checked() {
    let (s, _) = steane_422(None);
    assert!(map_syndrome(&s, 0, &BitVec::zeros(1), &BitVec::zeros(s.n())).is_err());
    assert!(map_syndrome(&s, s.len() + 1, &BitVec::zeros(s.n()), &BitVec::zeros(s.n())).is_err());
}
