//! Fault locations, Pauli-frame propagation and fault injection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bands::{Classifier, Residual};
use super::decode::{decode_step, measure, ProtocolDecoder};
use super::schedule::GateSchedule;
use crate::circuit::{Pauli, PauliOperator};
use crate::{Error, Result};

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// A point in the schedule where a fault may occur: right after a gate, or on an
/// idle qubit of a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaultLocation {
    /// Zero-based layer; the fault acts on the state of step `layer + 1`.
    pub layer: usize,
    pub qubits: [usize; 2],
    pub two_qubit: bool,
    pub idle: bool,
}

impl FaultLocation {
    /// 15 for two-qubit locations, 3 otherwise.
    pub fn kinds(&self) -> usize {
        if self.two_qubit {
            15
        } else {
            3
        }
    }

    pub fn fault(&self, n: usize, kind: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        if self.two_qubit {
            let idx = kind + 1;
            p.set(self.qubits[0], PAULIS[idx / 4]);
            p.set(self.qubits[1], PAULIS[idx % 4]);
        } else {
            p.set(self.qubits[0], Pauli::NONTRIVIAL[kind]);
        }
        p
    }
}

pub fn fault_locations(schedule: &GateSchedule, idle: bool) -> Vec<FaultLocation> {
    let n = schedule.n();
    let mut out = Vec::new();
    for (layer, l) in schedule.layers().iter().enumerate() {
        let mut busy = vec![false; n];
        for g in &l.gates {
            let q = g.qubits();
            q.iter().for_each(|&i| busy[i] = true);
            out.push(FaultLocation {
                layer,
                qubits: [q[0], *q.last().expect("gates act on a qubit")],
                two_qubit: q.len() == 2,
                idle: false,
            });
        }
        if idle {
            out.extend((0..n).filter(|&q| !busy[q]).map(|q| FaultLocation {
                layer,
                qubits: [q, q],
                two_qubit: false,
                idle: true,
            }));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectAt {
    None,
    /// Decode after every layer that received a fault, and at the end.
    EveryStep,
    End,
}

impl std::str::FromStr for CorrectAt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(CorrectAt::None),
            "end" => Ok(CorrectAt::End),
            "every-step" | "every_step" => Ok(CorrectAt::EveryStep),
            other => Err(Error::InvalidArgument(format!("unknown correction policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub identity: u64,
    pub stabilizer: u64,
    pub detectable: u64,
    pub logical: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.identity + self.stabilizer + self.detectable + self.logical
    }

    fn add(&mut self, r: Residual) {
        match r {
            Residual::Identity => self.identity += 1,
            Residual::Stabilizer => self.stabilizer += 1,
            Residual::Detectable => self.detectable += 1,
            Residual::Logical => self.logical += 1,
        }
    }

    fn merge(mut self, o: Counts) -> Counts {
        self.identity += o.identity;
        self.stabilizer += o.stabilizer;
        self.detectable += o.detectable;
        self.logical += o.logical;
        self
    }
}

/// Independent faults at each location with probability `p`, the Pauli drawn
/// uniformly from the location's nontrivial kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub p: f64,
    pub seed: u64,
    pub idle: bool,
}

impl ErrorModel {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("fault probability {p} outside [0, 1]")));
        }
        Ok(Self { p, seed, idle: false })
    }

    pub fn with_idle(mut self, idle: bool) -> Self {
        self.idle = idle;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub residual: Residual,
    pub decoder_failures: u64,
}

/// Propagates faults through a schedule and classifies what is left.
pub struct Simulator<'a> {
    schedule: &'a GateSchedule,
    decoder: &'a ProtocolDecoder,
    classifier: Classifier<'a>,
    locations: Vec<FaultLocation>,
}

impl<'a> Simulator<'a> {
    pub fn new(schedule: &'a GateSchedule, decoder: &'a ProtocolDecoder, idle: bool) -> Self {
        Self {
            schedule,
            decoder,
            classifier: Classifier::new(schedule.product().boundary()),
            locations: fault_locations(schedule, idle),
        }
    }

    pub fn locations(&self) -> &[FaultLocation] {
        &self.locations
    }

    fn correct(&self, step: usize, e: &mut PauliOperator, failures: &mut u64) -> Result<()> {
        let (bx, bz) = measure(self.schedule, step, e);
        if bx.is_zero() && bz.is_zero() {
            return Ok(());
        }
        let out = decode_step(self.schedule, step, &bx, &bz, self.decoder)?;
        if !out.within_bound {
            *failures += 1;
        }
        e.mul_assign(&out.recovery);
        Ok(())
    }

    /// Runs one trial; `faults` holds `(location index, kind)` sorted by location.
    pub fn run(&self, faults: &[(usize, usize)], correct_at: CorrectAt) -> Result<TrialOutcome> {
        let n = self.schedule.n();
        let mut e = PauliOperator::identity(n);
        let mut failures = 0;
        let Some(&(first, _)) = faults.first() else {
            return Ok(TrialOutcome {
                residual: Residual::Identity,
                decoder_failures: 0,
            });
        };
        let layers = self.schedule.layers();
        let mut next = 0;
        for (li, layer) in layers.iter().enumerate().skip(self.locations[first].layer) {
            layer.gates.iter().for_each(|g| g.conjugate(&mut e));
            let mut injected = false;
            while next < faults.len() && self.locations[faults[next].0].layer == li {
                let (loc, kind) = faults[next];
                e.mul_assign(&self.locations[loc].fault(n, kind));
                injected = true;
                next += 1;
            }
            if injected && correct_at == CorrectAt::EveryStep {
                self.correct(li + 1, &mut e, &mut failures)?;
            }
        }
        if correct_at != CorrectAt::None {
            self.correct(layers.len(), &mut e, &mut failures)?;
        }
        Ok(TrialOutcome {
            residual: self.classifier.classify(&e),
            decoder_failures: failures,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaultDescription {
    pub layer: usize,
    pub qubits: [usize; 2],
    pub pauli: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub schedule_id: String,
    pub correct_at: CorrectAt,
    pub locations: u64,
    pub faults: u64,
    pub counts: Counts,
    pub decoder_failures: u64,
    pub first_logical: Option<FaultDescription>,
    pub propagation_approximate: bool,
}

/// Every single fault at every location, one trial each.
pub fn single_fault_sweep(schedule: &GateSchedule, decoder: &ProtocolDecoder, correct_at: CorrectAt, idle: bool) -> Result<SweepReport> {
    let sim = Simulator::new(schedule, decoder, idle);
    type Acc = (Counts, u64, u64, Option<(usize, usize)>);
    let (counts, faults, failures, first) = (0..sim.locations.len())
        .into_par_iter()
        .map(|li| -> Result<Acc> {
            let mut acc: Acc = (Counts::default(), 0, 0, None);
            for kind in 0..sim.locations[li].kinds() {
                let out = sim.run(&[(li, kind)], correct_at)?;
                acc.0.add(out.residual);
                acc.1 += 1;
                acc.2 += out.decoder_failures;
                if out.residual == Residual::Logical && acc.3.is_none() {
                    acc.3 = Some((li, kind));
                }
            }
            Ok(acc)
        })
        .try_reduce(
            || (Counts::default(), 0, 0, None),
            |a, b| {
                let first = match (a.3, b.3) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                Ok((a.0.merge(b.0), a.1 + b.1, a.2 + b.2, first))
            },
        )?;
    let n = schedule.n();
    Ok(SweepReport {
        schedule_id: schedule.id().to_string(),
        correct_at,
        locations: sim.locations.len() as u64,
        faults,
        counts,
        decoder_failures: failures,
        first_logical: first.map(|(li, kind)| {
            let loc = sim.locations[li];
            FaultDescription {
                layer: loc.layer,
                qubits: loc.qubits,
                pauli: loc.fault(n, kind).restrict(&loc.qubits[..if loc.two_qubit { 2 } else { 1 }]).to_string(),
            }
        }),
        propagation_approximate: schedule.propagation_approximate(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schedule_id: String,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub counts: Counts,
    pub failure_rate: f64,
    pub ci95: [f64; 2],
    /// Faulty trials per protected band, attributed to the band with the most
    /// faults (lowest index on ties).
    pub band_histogram: Vec<u64>,
    pub correct_at: CorrectAt,
    pub idle_faults: bool,
    pub decoder_failures: u64,
    pub propagation_approximate: bool,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

fn sample_faults(rng: &mut ChaCha8Rng, sim: &Simulator<'_>, p: f64) -> Vec<(usize, usize)> {
    let total = sim.locations.len();
    let mut out = Vec::new();
    if p <= 0.0 || total == 0 {
        return out;
    }
    let geometric = (p < 1.0).then(|| Geometric::new(p).expect("0 < p < 1"));
    let skip = |rng: &mut ChaCha8Rng| geometric.as_ref().map_or(0, |g| g.sample(rng));
    let mut idx = skip(rng);
    while idx < total as u64 {
        let li = idx as usize;
        out.push((li, rng.random_range(0..sim.locations[li].kinds())));
        idx += 1 + skip(rng);
    }
    out
}

/// Monte Carlo fault injection. Trial `i` draws from the ChaCha8 stream `i` of
/// `model.seed`, so the record does not depend on the thread count.
pub fn fault_injection_run(
    schedule: &GateSchedule,
    decoder: &ProtocolDecoder,
    model: &ErrorModel,
    trials: u64,
    correct_at: CorrectAt,
) -> Result<RunRecord> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&model.p) {
        return Err(Error::InvalidArgument(format!("fault probability {} outside [0, 1]", model.p)));
    }
    let sim = Simulator::new(schedule, decoder, model.idle);
    let bands = schedule.positions();
    type Acc = (Counts, u64, Vec<u64>);
    let (counts, failures, histogram) = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Acc> {
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            rng.set_stream(trial);
            let faults = sample_faults(&mut rng, &sim, model.p);
            let out = sim.run(&faults, correct_at)?;
            let mut counts = Counts::default();
            counts.add(out.residual);
            let mut histogram = vec![0u64; bands];
            if !faults.is_empty() {
                let mut per_band = vec![0u64; bands];
                for &(li, _) in &faults {
                    per_band[schedule.band_of(sim.locations[li].qubits[0])] += 1;
                }
                let best = per_band.iter().copied().max().unwrap_or(0);
                let band = per_band.iter().position(|&c| c == best).unwrap_or(0);
                histogram[band] += 1;
            }
            Ok((counts, out.decoder_failures, histogram))
        })
        .try_reduce(
            || (Counts::default(), 0, vec![0u64; bands]),
            |a, b| {
                let h = a.2.iter().zip(&b.2).map(|(x, y)| x + y).collect();
                Ok((a.0.merge(b.0), a.1 + b.1, h))
            },
        )?;
    Ok(RunRecord {
        schedule_id: schedule.id().to_string(),
        p: model.p,
        trials,
        seed: model.seed,
        counts,
        failure_rate: counts.logical as f64 / trials as f64,
        ci95: wilson_interval(counts.logical, trials),
        band_histogram: histogram,
        correct_at,
        idle_faults: model.idle,
        decoder_failures: failures,
        propagation_approximate: schedule.propagation_approximate(),
    })
}
