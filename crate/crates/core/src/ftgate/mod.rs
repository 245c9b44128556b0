//! Partial-decode logical gates.
//!
//! A gate on a homological product is applied by unencoding one factor, acting
//! transversally on the other factor's logical blocks and re-encoding. Every
//! unencode and re-encode gate stays inside one band of the protected axis, so a
//! single fault never leaves its band.

mod bands;
mod decode;
mod schedule;
mod sim;

use rayon::prelude::*;
use serde::Serialize;

pub use bands::{band_support, check_band_theorem, Axis, BandTheoremReport, CheckMode, ErrorBandSet, Residual};
pub use decode::{decode_step, map_syndrome, measure, ProtocolDecoder, StepDecode};
pub use schedule::{
    build_protocol, build_protocol_with, doubled_t_protocol, transversal_layer, GateSchedule, Layer, Phase, ProtocolOptions, TransversalKind,
};
pub use sim::{
    fault_injection_run, fault_locations, single_fault_sweep, wilson_interval, CorrectAt, Counts, ErrorModel,
    FaultDescription, FaultLocation, RunRecord, Simulator, SweepReport, TrialOutcome,
};

use crate::circuit::PauliOperator;
use crate::gf2::BitVec;

/// Sparsity of the check matrix at every step, step 0 first.
pub fn sparsity_profile(schedule: &GateSchedule) -> Vec<usize> {
    (0..=schedule.len()).map(|s| schedule.frame(s).sparsity()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfinementReport {
    pub faults: u64,
    pub violations: u64,
    pub first_violation: Option<FaultDescription>,
}

/// Propagates every single fault at every gate location to the end of the
/// schedule and checks that it occupies exactly one protected band at each step.
pub fn check_band_confinement(schedule: &GateSchedule) -> ConfinementReport {
    let n = schedule.n();
    let locations = fault_locations(schedule, false);
    let layers = schedule.layers();
    let confined = |p: &PauliOperator| {
        let support = p.support();
        let mut bands = support.iter_ones().map(|q| schedule.band_of(q));
        let first = bands.next();
        first.is_some() && bands.all(|b| Some(b) == first)
    };
    let results: Vec<(u64, Option<(usize, usize)>)> = (0..locations.len())
        .into_par_iter()
        .map(|li| {
            let loc = locations[li];
            let mut bad = None;
            let mut count = 0;
            for kind in 0..loc.kinds() {
                count += 1;
                let mut e = loc.fault(n, kind);
                let mut ok = confined(&e);
                for layer in &layers[loc.layer + 1..] {
                    if !ok {
                        break;
                    }
                    layer.gates.iter().for_each(|g| g.conjugate(&mut e));
                    ok = confined(&e);
                }
                if !ok && bad.is_none() {
                    bad = Some((li, kind));
                }
            }
            (count, bad)
        })
        .collect();
    let violations = results.iter().filter(|r| r.1.is_some()).count() as u64;
    ConfinementReport {
        faults: results.iter().map(|r| r.0).sum(),
        violations,
        first_violation: results.iter().find_map(|r| r.1).map(|(li, kind)| {
            let loc = locations[li];
            FaultDescription {
                layer: loc.layer,
                qubits: loc.qubits,
                pauli: loc.fault(n, kind).to_string(),
            }
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyndromeCheck {
    pub checked: u64,
    pub mismatches: u64,
}

/// Compares [`map_syndrome`] against the syndrome of the error conjugated gate by
/// gate into the frame, for `X_q` and `Z_q` on every qubit at every step.
pub fn cross_check_syndromes(schedule: &GateSchedule) -> SyndromeCheck {
    let n = schedule.n();
    let frame = schedule.half_canonical();
    let per_step: Vec<(u64, u64)> = (0..=schedule.len())
        .into_par_iter()
        .map(|step| {
            let mut checked = 0;
            let mut mismatches = 0;
            for q in 0..n {
                let unit = BitVec::unit(n, q);
                for e in [PauliOperator::x_type(unit.clone()), PauliOperator::z_type(unit)] {
                    let (bx, bz) = measure(schedule, step, &e);
                    let mapped = map_syndrome(schedule, step, &bx, &bz).expect("lengths match");
                    let moved = schedule.propagate_to_frame(step, &e);
                    let direct = (frame.mul_vec(moved.z_bits()), frame.vec_mul(moved.x_bits()));
                    checked += 1;
                    if mapped != direct {
                        mismatches += 1;
                    }
                }
            }
            (checked, mismatches)
        })
        .collect();
    SyndromeCheck {
        checked: per_step.iter().map(|r| r.0).sum(),
        mismatches: per_step.iter().map(|r| r.1).sum(),
    }
}
