//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p homolattice --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use homolattice::circuit::{CnotCircuit, Gate, PauliOperator, StabilizerTableau};
use homolattice::codes::{
    catalog, distance, double, DecoderStrategy, DistanceBound, DEFAULT_DECODER_CAP,
};
use homolattice::complex::{
    canonical_boundary, canonical_form, css_from_boundary, CanonicalForm, ChainComplex, CssCode,
};
use homolattice::ftgate::{
    build_protocol, check_band_theorem, cross_check_syndromes, fault_injection_run, single_fault_sweep,
    transversal_layer, Axis, CheckMode, CorrectAt, ErrorModel, GateSchedule, ProtocolDecoder, TransversalKind,
};
use homolattice::gf2::{BinaryMatrix, BitVec, Span};
use homolattice::hprod::homological_product;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// Transcribed by hand, independently of the data files.
const STEANE_ROWS: [&str; 7] = [
    "1111000", "1100110", "1010101", "1001011", "0110011", "0101101", "0011110",
];
const RM15P_ROWS: [&str; 15] = [
    "011010011001011111000",
    "110000110011110110010",
    "101001010101101101100",
    "000011111111000100100",
    "100110010110011011001",
    "001100111100110010010",
    "010101011010101001001",
    "111111110000000000000",
    "100101101001011000000",
    "001111000011110000010",
    "010110100101101000100",
    "111100001111000000100",
    "011001100110011000001",
    "110011001100110000010",
    "101010101010101000001",
];

fn from_literal(n: usize, rows: &[&str]) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        for (c, ch) in row.chars().enumerate() {
            m.set(r, c, ch == '1');
        }
    }
    m
}

fn squares_to_zero(m: &BinaryMatrix) -> bool {
    m.multiply(m).unwrap().is_zero()
}

fn criterion_1() -> Check {
    let steane = ChainComplex::parse_text(include_str!("../data/steane.txt")).map_err(|e| e.to_string())?;
    let rm = ChainComplex::parse_text(include_str!("../data/rm15_padded.txt")).map_err(|e| e.to_string())?;
    ensure(steane.boundary() == &from_literal(7, &STEANE_ROWS), "δ₇ differs from the printed matrix")?;
    ensure(rm.boundary() == &from_literal(21, &RM15P_ROWS), "δ₁₅ₚ differs from the printed matrix")?;
    ensure(catalog::steane() == steane && catalog::padded_reed_muller() == rm, "catalog differs from data")?;
    ensure(squares_to_zero(steane.boundary()) && squares_to_zero(rm.boundary()), "δ² ≠ 0")?;
    ensure(rm.rank() == 10, format!("rank(δ₁₅ₚ) = {}", rm.rank()))?;
    ensure(steane.sparsity() == 4, format!("sparsity(δ₇) = {}", steane.sparsity()))?;
    Ok("δ₇, δ₁₅ₚ bit-exact; δ²=0; rank 10; sparsity 4".into())
}

fn criterion_2() -> Check {
    let p = homological_product(&catalog::steane(), &catalog::padded_reed_muller());
    let s = p.boundary().sparsity();
    ensure(p.n() == 147 && p.k() == 1 && s == 15, format!("n={} k={} sparsity={s}", p.n(), p.k()))?;
    ensure(p.complex().k() == 1, "k from rank disagrees")?;
    Ok(format!("n={} k={} sparsity={} (< 28)", p.n(), p.k(), s))
}

fn random_symmetric_complex(rng: &mut ChaCha8Rng) -> ChainComplex {
    let n = rng.random_range(3..=10);
    let l = rng.random_range(1..=n / 2);
    let k = n - 2 * l;
    let mut w = CnotCircuit::new(n);
    for _ in 0..3 * n {
        let c = rng.random_range(0..n);
        let t = (c + rng.random_range(1..n)) % n;
        w.push(c, t).unwrap();
    }
    let w = w.to_matrix();
    let d = w
        .multiply(&canonical_boundary(k, l))
        .unwrap()
        .multiply(&w.invert().unwrap())
        .unwrap();
    ChainComplex::new(d).expect("conjugate of a complex")
}

fn exact_block_shape(d0: &BinaryMatrix, k: usize, l: usize) -> bool {
    (0..d0.rows()).all(|r| (0..d0.cols()).all(|c| d0.get(r, c) == (r >= k && r < k + l && c == r + l)))
}

fn check_canonical(code: &CssCode, complex: &ChainComplex) -> std::result::Result<(), String> {
    let cf = canonical_form(code).map_err(|e| e.to_string())?;
    let conj = |cf: &CanonicalForm| {
        cf.encoder_matrix
            .multiply(&cf.delta0)
            .unwrap()
            .multiply(&cf.encoder_matrix.invert().unwrap())
            .unwrap()
    };
    ensure(conj(&cf) == cf.boundary, "W δ₀ W⁻¹ ≠ δ")?;
    ensure(exact_block_shape(&cf.delta0, cf.k, cf.l), "δ₀ not in block shape")?;
    ensure(cf.encoder_circuit.to_matrix() == cf.encoder_matrix, "circuit does not realize W")?;
    let rebuilt = css_from_boundary(&ChainComplex::new(cf.boundary.clone()).map_err(|e| e.to_string())?);
    ensure(rebuilt.same_stabilizers(code), "canonical boundary changes the code")?;
    let t = code.sparsity();
    ensure(cf.boundary.sparsity() <= t * t, format!("sparsity {} > t² = {}", cf.boundary.sparsity(), t * t))?;
    let exact = CanonicalForm::of_complex(complex);
    ensure(conj(&exact) == *complex.boundary(), "complex witness is not exact")?;
    ensure(exact_block_shape(&exact.delta0, exact.k, exact.l), "complex δ₀ not in block shape")
}

fn criterion_3() -> Check {
    let mut count = 0;
    for c in [catalog::steane(), catalog::four_two_two_complex(), catalog::padded_reed_muller()] {
        check_canonical(&css_from_boundary(&c), &c)?;
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..50 {
        let c = random_symmetric_complex(&mut rng);
        check_canonical(&css_from_boundary(&c), &c).map_err(|e| format!("random code {i}: {e}"))?;
        count += 1;
    }
    Ok(format!("{count} codes: W δ₀ W⁻¹ = δ, exact δ₀ blocks, sparsity ≤ t²"))
}

fn tensor(a: &BitVec, b: &BitVec) -> BitVec {
    BitVec::from_indices(
        a.len() * b.len(),
        a.iter_ones().flat_map(|i| b.iter_ones().map(move |j| i * b.len() + j)),
    )
}

fn criterion_4() -> Check {
    let codes = [
        ("steane", catalog::steane()),
        ("422", catalog::four_two_two_complex()),
        ("rm15-padded", catalog::padded_reed_muller()),
    ];
    let mut pairs = 0;
    for (na, a) in &codes {
        for (nb, b) in &codes {
            let p = homological_product(a, b);
            let n = p.n();
            ensure(p.complex().k() == a.k() * b.k(), format!("{na}×{nb}: k ≠ k₁k₂"))?;
            let ker = Span::from_vectors(n, &p.boundary().kernel_basis());
            let mut rhs = Span::from_vectors(n, &p.boundary().image_basis());
            for x in a.boundary().kernel_basis() {
                for y in b.boundary().kernel_basis() {
                    rhs.insert(&tensor(&x, &y));
                }
            }
            ensure(ker.contains_span(&rhs), format!("{na}×{nb}: ker δ₁⊗ker δ₂ + im ∂ ⊄ ker ∂"))?;
            ensure(rhs.contains_span(&ker), format!("{na}×{nb}: ker ∂ ⊄ ker δ₁⊗ker δ₂ + im ∂"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered products: k = k₁k₂ and kernel identity"))
}

fn exact_distance(c: &ChainComplex, cap: usize) -> std::result::Result<(usize, usize), String> {
    let d = distance(&css_from_boundary(c), cap);
    match (d.x, d.z) {
        (DistanceBound::Exact(x), DistanceBound::Exact(z)) => Ok((x, z)),
        other => Err(format!("distance not resolved within cap {cap}: {other:?}")),
    }
}

fn criterion_5() -> Check {
    let s = catalog::steane();
    let q = catalog::four_two_two_complex();
    let mut notes = Vec::new();
    for (name, a, b) in [("422×422", &q, &q), ("steane×422", &s, &q)] {
        let (d1, d2) = (exact_distance(a, 8)?, exact_distance(b, 8)?);
        let (dx, dz) = exact_distance(homological_product(a, b).complex(), d1.0 * d2.0)?;
        let in_window = |d: usize, x: usize, y: usize| d >= x.max(y) && d <= x * y;
        ensure(
            in_window(dx, d1.0, d2.0) && in_window(dz, d1.1, d2.1),
            format!("{name}: (dx, dz) = ({dx}, {dz}) outside the window"),
        )?;
        notes.push(format!("{name} d=({dx},{dz})"));
    }
    let mut catalog_complexes = vec![s.clone(), q.clone(), catalog::padded_reed_muller(), catalog::trivial(1)];
    catalog_complexes.push(catalog::by_name("double:422").unwrap().complex().unwrap().clone());
    for a in &catalog_complexes {
        for b in &catalog_complexes {
            let p = homological_product(a, b);
            ensure(
                p.boundary().sparsity() <= a.sparsity() + b.sparsity(),
                format!("sparsity {} > {} + {}", p.boundary().sparsity(), a.sparsity(), b.sparsity()),
            )?;
        }
    }
    notes.push(format!("sparsity ≤ w₁+w₂ on {} products", catalog_complexes.len().pow(2)));
    Ok(notes.join("; "))
}

fn criterion_6() -> Check {
    let q = catalog::four_two_two_complex();
    let p = homological_product(&q, &q);
    let mut checked = 0;
    for axis in [Axis::One, Axis::Two] {
        let r = check_band_theorem(&p, axis, 1, CheckMode::Exhaustive { cap: 1 << 20 }).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("axis {}: counterexample {:?}", axis.index(), r.counterexample))?;
        ensure(r.checked == 4 * 256, format!("enumerated {} Paulis", r.checked))?;
        checked += r.checked;
    }
    Ok(format!("{checked} Paulis on single bands, no logicals"))
}

fn criterion_7() -> Check {
    let s = catalog::steane();
    let p = homological_product(&s, &s);
    let mut checked = 0;
    for axis in [Axis::One, Axis::Two] {
        let mode = CheckMode::Sampled {
            samples: 100_000,
            seed: 7 + axis.index() as u64,
        };
        let r = check_band_theorem(&p, axis, 2, mode).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("axis {}: counterexample {:?}", axis.index(), r.counterexample))?;
        checked += r.checked;
    }
    Ok(format!("{checked} sampled Paulis on ≤2 bands, no logicals"))
}

fn steane_rm_protocol() -> (GateSchedule, ProtocolDecoder) {
    let p = homological_product(&catalog::steane(), &catalog::padded_reed_muller());
    let layer = transversal_layer(&p, 2, TransversalKind::H, 0).expect("one logical block");
    let s = build_protocol(&p, 2, &layer).expect("H is transversal on Steane");
    let d = ProtocolDecoder::new(&s, DecoderStrategy::Lookup, DEFAULT_DECODER_CAP).expect("small table");
    (s, d)
}

fn sweep(correct_at: CorrectAt) -> Check {
    let (s, d) = steane_rm_protocol();
    let r = single_fault_sweep(&s, &d, correct_at, true).map_err(|e| e.to_string())?;
    ensure(
        r.counts.logical == 0,
        format!("{} logical failures, first {:?}", r.counts.logical, r.first_logical),
    )?;
    ensure(r.counts.detectable == 0, format!("{} uncorrected residuals", r.counts.detectable))?;
    Ok(format!(
        "{} steps, {} locations, {} faults, 0 logical",
        s.len(),
        r.locations,
        r.faults
    ))
}

fn criterion_8() -> Check {
    sweep(CorrectAt::End)
}

fn criterion_9() -> Check {
    let swept = sweep(CorrectAt::EveryStep)?;
    let (s, _) = steane_rm_protocol();
    let c = cross_check_syndromes(&s);
    ensure(c.mismatches == 0, format!("{} of {} syndromes disagree", c.mismatches, c.checked))?;
    Ok(format!("{swept}; {} mapped syndromes agree", c.checked))
}

fn family(n: usize, gens: &[BitVec], blocks: &[usize]) -> Vec<BitVec> {
    gens.iter()
        .map(|v| BitVec::from_indices(4 * n, blocks.iter().flat_map(|&b| v.iter_ones().map(move |j| b * n + j))))
        .collect()
}

fn criterion_10() -> Check {
    let rm = catalog::reed_muller_15();
    let (d, encoder) = double(&rm);
    let n = rm.n();
    ensure(d.n() == 4 * n, "wrong length")?;
    ensure(d.x_stabilizers().len() == d.z_stabilizers().len() && d.is_symmetric(), "counts not symmetric")?;
    let columns: Vec<BitVec> = (0..n)
        .map(|j| BitVec::from_indices(4 * n, (0..4).map(|b| b * n + j)))
        .collect();
    let mut x_expected: BTreeSet<BitVec> = family(n, rm.x_stabilizers(), &[0, 2]).into_iter().collect();
    x_expected.extend(family(n, rm.z_stabilizers(), &[1, 2]));
    x_expected.extend(columns.iter().cloned());
    let mut z_expected: BTreeSet<BitVec> = family(n, rm.z_stabilizers(), &[0, 3]).into_iter().collect();
    z_expected.extend(family(n, rm.x_stabilizers(), &[1, 3]));
    z_expected.extend(columns.iter().cloned());
    ensure(
        d.x_stabilizers().iter().cloned().collect::<BTreeSet<_>>() == x_expected,
        "X generators differ from the transformed families",
    )?;
    ensure(
        d.z_stabilizers().iter().cloned().collect::<BTreeSet<_>>() == z_expected,
        "Z generators differ from the transformed families",
    )?;
    // the encoder maps the input stabilizers onto the same group
    let mut inputs: Vec<PauliOperator> = Vec::new();
    inputs.extend(family(n, rm.x_stabilizers(), &[0]).into_iter().map(PauliOperator::x_type));
    inputs.extend(family(n, rm.z_stabilizers(), &[0]).into_iter().map(PauliOperator::z_type));
    inputs.extend(family(n, rm.z_stabilizers(), &[1]).into_iter().map(PauliOperator::x_type));
    inputs.extend(family(n, rm.x_stabilizers(), &[1]).into_iter().map(PauliOperator::z_type));
    inputs.extend((0..n).map(|j| PauliOperator::z_type(BitVec::unit(4 * n, 2 * n + j))));
    inputs.extend((0..n).map(|j| PauliOperator::x_type(BitVec::unit(4 * n, 3 * n + j))));
    let mapped = StabilizerTableau::from_generators(4 * n, inputs.iter().map(|p| encoder.conjugate_pauli(p, false)))
        .map_err(|e| e.to_string())?;
    let target = StabilizerTableau::from_generators(
        4 * n,
        d.x_stabilizer_paulis().into_iter().chain(d.z_stabilizer_paulis()),
    )
    .map_err(|e| e.to_string())?;
    ensure(mapped.same_group(&target), "encoder image differs from the doubled code")?;

    let mut notes = vec![format!("double(rm15): n={} k={} {}+{} generators", d.n(), d.k(), d.x_rank(), d.z_rank())];
    for (name, c) in [("422", catalog::four_two_two().0), ("steane", css_from_boundary(&catalog::steane()))] {
        let base = distance(&c, 8).min().exact().ok_or("base distance unresolved")?;
        let (dd, _) = double(&c);
        let doubled = distance(&dd, 2 * base).min().exact().ok_or("doubled distance unresolved")?;
        ensure(doubled == 2 * base, format!("{name}: doubled distance {doubled} ≠ 2·{base}"))?;
        notes.push(format!("d(double({name}))={doubled}"));
    }
    let (ds, _) = double(&css_from_boundary(&catalog::steane()));
    let before = StabilizerTableau::from_generators(
        ds.n(),
        ds.x_stabilizer_paulis().into_iter().chain(ds.z_stabilizer_paulis()),
    )
    .map_err(|e| e.to_string())?;
    let mut after = before.clone();
    for q in 0..ds.n() {
        after.apply(&Gate::H(q)).map_err(|e| e.to_string())?;
    }
    ensure(before.same_group(&after), "transversal H does not preserve double(steane)")?;
    notes.push("transversal H preserves double(steane)".into());
    Ok(notes.join("; "))
}

fn criterion_11() -> Check {
    let (s, d) = steane_rm_protocol();
    let model = ErrorModel::new(1e-3, 2024).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| fault_injection_run(&s, &d, &model, 400, CorrectAt::End))
            .map(|r| r.to_json())
            .map_err(|e| e.to_string())
    };
    let a = run(1)?;
    let b = run(4)?;
    let c = run(4)?;
    ensure(a == b && b == c, "run records differ")?;
    Ok(format!("3 runs ({} bytes) byte-identical across 1 and 4 threads", a.len()))
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("catalog matrix fidelity", Duration::from_secs(1), criterion_1),
        ("[[147,1,3*]] parameters", Duration::from_secs(1), criterion_2),
        ("canonical form", Duration::from_secs(10), criterion_3),
        ("kernel of the product", Duration::from_secs(30), criterion_4),
        ("distance window and sparsity", Duration::from_secs(300), criterion_5),
        ("band theorem, exhaustive", Duration::from_secs(60), criterion_6),
        ("band theorem, sampled", Duration::from_secs(120), criterion_7),
        ("single-fault sweep, end correction", Duration::from_secs(600), criterion_8),
        ("single-fault sweep, every-step correction", Duration::from_secs(900), criterion_9),
        ("code doubling", Duration::from_secs(300), criterion_10),
        ("determinism", Duration::from_secs(600), criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (verdict, detail) = match result {
            Ok(_) if elapsed > *limit => ("FAIL", format!("took longer than {limit:?}")),
            Ok(detail) => ("PASS", detail),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} criterion {:>2} {name}: {detail} [{:.2}s / {}s]",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
