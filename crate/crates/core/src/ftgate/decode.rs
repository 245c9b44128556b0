//! Syndrome mapping into the half-canonical frame and block-wise decoding.
//!
//! In the frame `F` the check matrix `δ_P ⊗ 1 + 1 ⊗ δ_Q,0` splits into blocks: each
//! logical block `u < k_Q` carries a copy of the protected code, and each pair of
//! blocks `(k+a, k+l+a)` coupled by `δ_Q,0` holds a stabilizer state with no
//! logical qubits, which any pure error corrects exactly.

use super::schedule::GateSchedule;
use crate::circuit::PauliOperator;
use crate::codes::{distance, DecoderStrategy, Decoder};
use crate::complex::css_from_boundary;
use crate::gf2::{BinaryMatrix, BitVec, LinearSolver};
use crate::{Error, Result};

/// `(X-check bits, Z-check bits)` of `error` against the checks of `step`.
pub fn measure(schedule: &GateSchedule, step: usize, error: &PauliOperator) -> (BitVec, BitVec) {
    let frame = schedule.frame(step);
    (frame.mul_vec(error.z_bits()), frame.vec_mul(error.x_bits()))
}

/// Re-expresses syndrome bits measured at `step` against the checks of the
/// half-canonical frame.
pub fn map_syndrome(schedule: &GateSchedule, step: usize, bx: &BitVec, bz: &BitVec) -> Result<(BitVec, BitVec)> {
    let n = schedule.n();
    if step > schedule.len() {
        return Err(Error::InvalidArgument(format!("step {step} beyond the last step {}", schedule.len())));
    }
    for b in [bx, bz] {
        if b.len() != n {
            return Err(Error::SyndromeLength {
                expected: n,
                got: b.len(),
            });
        }
    }
    Ok((
        schedule.to_frame(step).mul_vec(bx),
        schedule.from_frame(step).vec_mul(bz),
    ))
}

#[derive(Debug, Clone)]
struct PairBlock {
    qubits: Vec<usize>,
    x_solver: LinearSolver,
    z_solver: LinearSolver,
}

/// Decoder for the half-canonical frame of a schedule.
#[derive(Debug, Clone)]
pub struct ProtocolDecoder {
    n: usize,
    protected: Decoder,
    logical_blocks: Vec<Vec<usize>>,
    pairs: Vec<PairBlock>,
}

/// `hx` rows are the X checks sitting at `qubits`, restricted to `qubits`; `hz` the
/// same for Z checks.
fn restrict(frame: &BinaryMatrix, qubits: &[usize]) -> (BinaryMatrix, BinaryMatrix) {
    let m = qubits.len();
    let mut hx = BinaryMatrix::zeros(m, m);
    let mut hz = BinaryMatrix::zeros(m, m);
    for (r, &qr) in qubits.iter().enumerate() {
        for (c, &qc) in qubits.iter().enumerate() {
            hx.set(r, c, frame.get(qr, qc));
            hz.set(r, c, frame.get(qc, qr));
        }
    }
    (hx, hz)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDecode {
    pub recovery: PauliOperator,
    /// `false` if some block's syndrome was outside its correctable set.
    pub within_bound: bool,
}

impl ProtocolDecoder {
    /// Corrects up to `max(1, ⌊(d−1)/2⌋)` errors per logical block, `d` the
    /// protected factor's distance from the oracle.
    pub fn new(schedule: &GateSchedule, strategy: DecoderStrategy, cap: u128) -> Result<Self> {
        let d = distance(&css_from_boundary(schedule.protected_complex()), 8).min().lower_bound();
        Self::with_weight(schedule, (d.saturating_sub(1) / 2).max(1), strategy, cap)
    }

    pub fn with_weight(schedule: &GateSchedule, t: usize, strategy: DecoderStrategy, cap: u128) -> Result<Self> {
        let protected = Decoder::for_complex(schedule.protected_complex(), t, strategy, cap)?;
        let positions = schedule.positions();
        let frame = schedule.half_canonical();
        let kq = schedule.logical_blocks();
        let logical_blocks = (0..kq)
            .map(|u| (0..positions).map(|p| schedule.qubit(p, u)).collect())
            .collect();
        let lq = (schedule.blocks() - kq) / 2;
        let pairs = (0..lq)
            .map(|a| {
                let qubits: Vec<usize> = [kq + a, kq + lq + a]
                    .iter()
                    .flat_map(|&u| (0..positions).map(move |p| (p, u)))
                    .map(|(p, u)| schedule.qubit(p, u))
                    .collect();
                let (hx, hz) = restrict(frame, &qubits);
                PairBlock {
                    x_solver: LinearSolver::new(&hz),
                    z_solver: LinearSolver::new(&hx),
                    qubits,
                }
            })
            .collect();
        Ok(Self {
            n: schedule.n(),
            protected,
            logical_blocks,
            pairs,
        })
    }

    pub fn correctable_weight(&self) -> usize {
        self.protected.correctable_weight()
    }

    /// Recovery in the frame for frame syndromes `(sx, sz)`.
    pub fn decode_frame(&self, sx: &BitVec, sz: &BitVec) -> Result<StepDecode> {
        let mut recovery = PauliOperator::identity(self.n);
        let mut within_bound = true;
        for qubits in &self.logical_blocks {
            let out = self.protected.decode(&sx.gather(qubits), &sz.gather(qubits))?;
            within_bound &= out.within_bound;
            recovery.mul_assign(&out.recovery.embed(self.n, qubits));
        }
        for pair in &self.pairs {
            let z = pair.z_solver.solve(&sx.gather(&pair.qubits));
            let x = pair.x_solver.solve(&sz.gather(&pair.qubits));
            match (x, z) {
                (Some(x), Some(z)) => {
                    let local = PauliOperator::new(x, z).expect("equal lengths");
                    recovery.mul_assign(&local.embed(self.n, &pair.qubits));
                }
                _ => within_bound = false,
            }
        }
        Ok(StepDecode { recovery, within_bound })
    }
}

/// Recovery for the checks of `step` given the bits measured there.
pub fn decode_step(
    schedule: &GateSchedule,
    step: usize,
    bx: &BitVec,
    bz: &BitVec,
    decoder: &ProtocolDecoder,
) -> Result<StepDecode> {
    let (sx, sz) = map_syndrome(schedule, step, bx, bz)?;
    let framed = decoder.decode_frame(&sx, &sz)?;
    let z = schedule.from_frame(step).mul_vec(framed.recovery.z_bits());
    let x = schedule.to_frame(step).vec_mul(framed.recovery.x_bits());
    Ok(StepDecode {
        recovery: PauliOperator::new(x, z).expect("n bits each"),
        within_bound: framed.within_bound,
    })
}
