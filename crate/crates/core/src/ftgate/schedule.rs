//! Unencode / transversal / re-encode schedules and their per-step frames.
//!
//! One factor `Q` is unencoded by parallel copies of `U_Q†`, one per position of
//! the protected factor `P`, a layer of gates acts on the logical blocks, and `U_Q`
//! restores the code. Step `s` is the state after layer `s`; its check matrix is
//! `∂_s = M_s ∂ M_s⁻¹` with `M_s` the binary image of the CNOTs applied so far.
//! The transversal layer preserves the stabilizer group and is treated as the
//! identity at the matrix level.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::bands::Axis;
use crate::circuit::{Circuit, CnotCircuit, Gate, PauliOperator, SignedPauli, StabilizerTableau};
use crate::complex::{css_from_boundary, CanonicalForm, ChainComplex};
use crate::gf2::BinaryMatrix;
use crate::hprod::{Grid, ProductCode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Unencode,
    InnerUnencode,
    Transversal,
    InnerReencode,
    Reencode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub phase: Phase,
    pub gates: Vec<Gate>,
}

/// Which gate family a transversal layer applies on a logical block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransversalKind {
    H,
    S,
    Sdg,
    X,
    Z,
    T,
    /// CX from block `block` to block `block + 1`, position by position.
    Cx,
}

impl std::str::FromStr for TransversalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "h" => TransversalKind::H,
            "s" => TransversalKind::S,
            "sdg" => TransversalKind::Sdg,
            "x" => TransversalKind::X,
            "z" => TransversalKind::Z,
            "t" => TransversalKind::T,
            "cx" | "cnot" => TransversalKind::Cx,
            other => return Err(Error::InvalidArgument(format!("unknown transversal gate `{other}`"))),
        })
    }
}

/// Options for [`build_protocol_with`].
#[derive(Debug, Clone)]
pub struct ProtocolOptions {
    pub id: String,
    pub unencode_factor: usize,
    pub layer: Vec<Gate>,
    /// CNOT circuit on the protected factor's positions, undone on every logical
    /// block before the layer and redone after it.
    pub inner: Option<CnotCircuit>,
}

#[derive(Debug, Clone)]
pub struct GateSchedule {
    id: String,
    product: ProductCode,
    unencode_factor: usize,
    layers: Vec<Layer>,
    frames: Vec<BinaryMatrix>,
    to_frame: Vec<BinaryMatrix>,
    from_frame: Vec<BinaryMatrix>,
    frame_step: usize,
    transversal_step: Option<usize>,
    groups: Vec<usize>,
    propagation_approximate: bool,
}

impl GateSchedule {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn product(&self) -> &ProductCode {
        &self.product
    }

    pub fn grid(&self) -> Grid {
        self.product.grid()
    }

    pub fn n(&self) -> usize {
        self.product.n()
    }

    pub fn unencode_factor(&self) -> usize {
        self.unencode_factor
    }

    pub fn protected_factor(&self) -> usize {
        3 - self.unencode_factor
    }

    pub fn protected_axis(&self) -> Axis {
        if self.protected_factor() == 1 {
            Axis::One
        } else {
            Axis::Two
        }
    }

    pub fn protected_complex(&self) -> &ChainComplex {
        self.product.factor(self.protected_factor())
    }

    pub fn unencoded_complex(&self) -> &ChainComplex {
        self.product.factor(self.unencode_factor)
    }

    /// Number of positions `p` of the protected factor.
    pub fn positions(&self) -> usize {
        self.protected_complex().n()
    }

    /// Number of blocks `u` (qubits of the unencoded factor).
    pub fn blocks(&self) -> usize {
        self.unencoded_complex().n()
    }

    /// Blocks `u < k_Q` hold logical information after unencoding.
    pub fn logical_blocks(&self) -> usize {
        self.unencoded_complex().k()
    }

    pub fn qubit(&self, p: usize, u: usize) -> usize {
        let grid = self.grid();
        if self.protected_factor() == 1 {
            grid.flat(p, u)
        } else {
            grid.flat(u, p)
        }
    }

    /// `(position, block)` of a flat qubit.
    pub fn locate(&self, q: usize) -> (usize, usize) {
        let (i, j) = self.grid().coords(q);
        if self.protected_factor() == 1 {
            (i, j)
        } else {
            (j, i)
        }
    }

    /// Band of the protected axis containing `q`, merged across positions the
    /// inner circuit couples.
    pub fn band_of(&self, q: usize) -> usize {
        self.groups[self.locate(q).0]
    }

    pub fn band_count(&self) -> usize {
        self.groups.iter().copied().collect::<BTreeSet<_>>().len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of steps after step 0.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    /// Check matrix `∂_s`; rows are X checks, columns Z checks.
    pub fn frame(&self, step: usize) -> &BinaryMatrix {
        &self.frames[step]
    }

    /// Step at which `U_Q†` has been applied and the factor `Q` is in canonical form.
    pub fn frame_step(&self) -> usize {
        self.frame_step
    }

    /// Step reached right after the transversal layer, if the schedule has one.
    pub fn transversal_step(&self) -> Option<usize> {
        self.transversal_step
    }

    /// The half-canonical check matrix `δ_P ⊗ 1 + 1 ⊗ δ_Q,0` (up to axis order).
    pub fn half_canonical(&self) -> &BinaryMatrix {
        &self.frames[self.frame_step]
    }

    /// Set when the layer holds non-Clifford gates that Pauli propagation treats
    /// as the identity.
    pub fn propagation_approximate(&self) -> bool {
        self.propagation_approximate
    }

    /// `B_s = M_F M_s⁻¹`, carrying Z supports from step `s` to the decoding frame.
    pub fn to_frame(&self, step: usize) -> &BinaryMatrix {
        &self.to_frame[step]
    }

    /// `B_s⁻¹ = M_s M_F⁻¹`.
    pub fn from_frame(&self, step: usize) -> &BinaryMatrix {
        &self.from_frame[step]
    }

    /// Conjugates `p` through the CNOT layers between `step` and the decoding
    /// frame, gate by gate. Independent of the matrix path used by
    /// [`super::map_syndrome`].
    pub fn propagate_to_frame(&self, step: usize, p: &PauliOperator) -> PauliOperator {
        let mut out = p.clone();
        let cnot_layer = |l: &Layer| l.phase != Phase::Transversal;
        if step <= self.frame_step {
            for layer in self.layers[step..self.frame_step].iter().filter(|l| cnot_layer(l)) {
                layer.gates.iter().for_each(|g| g.conjugate(&mut out));
            }
        } else {
            for layer in self.layers[self.frame_step..step].iter().rev().filter(|l| cnot_layer(l)) {
                layer.gates.iter().rev().for_each(|g| g.inverse().conjugate(&mut out));
            }
        }
        out
    }

    pub fn to_circuit(&self) -> Circuit {
        Circuit::from_gates(self.n(), self.layers.iter().flat_map(|l| l.gates.iter().copied()))
            .expect("gates were validated when the schedule was built")
    }

    /// Circuit text with a `#STEP s` marker before the gates of layer `s`.
    pub fn to_text(&self) -> String {
        let mut s = format!("# schedule {}\nQUBITS {}\n", self.id, self.n());
        for (i, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(s, "#STEP {}", i + 1);
            for g in &layer.gates {
                let _ = writeln!(s, "{g}");
            }
        }
        s
    }
}

/// Gates of a transversal layer of `kind` on logical block `block`.
///
/// For single-qubit kinds the gate is applied at every position of the block;
/// `Cx` couples blocks `block` and `block + 1`.
pub fn transversal_layer(product: &ProductCode, unencode_factor: usize, kind: TransversalKind, block: usize) -> Result<Vec<Gate>> {
    check_factor(unencode_factor)?;
    let protected = product.factor(3 - unencode_factor).n();
    let grid = product.grid();
    let qubit = |p: usize, u: usize| {
        if unencode_factor == 2 {
            grid.flat(p, u)
        } else {
            grid.flat(u, p)
        }
    };
    let kq = product.factor(unencode_factor).k();
    let needed = if kind == TransversalKind::Cx { block + 2 } else { block + 1 };
    if needed > kq {
        return Err(Error::InvalidArgument(format!(
            "block {block} needs {needed} logical blocks, the unencoded factor has {kq}"
        )));
    }
    Ok((0..protected)
        .map(|p| {
            let q = qubit(p, block);
            match kind {
                TransversalKind::H => Gate::H(q),
                TransversalKind::S => Gate::S(q),
                TransversalKind::Sdg => Gate::Sdg(q),
                TransversalKind::X => Gate::X(q),
                TransversalKind::Z => Gate::Z(q),
                TransversalKind::T => Gate::T(q),
                TransversalKind::Cx => Gate::cx(q, qubit(p, block + 1)),
            }
        })
        .collect())
}

fn check_factor(f: usize) -> Result<()> {
    if f == 1 || f == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("factor must be 1 or 2, got {f}")))
    }
}

pub fn build_protocol(product: &ProductCode, unencode_factor: usize, layer: &[Gate]) -> Result<GateSchedule> {
    build_protocol_with(
        product,
        ProtocolOptions {
            id: format!("unencode{unencode_factor}"),
            unencode_factor,
            layer: layer.to_vec(),
            inner: None,
        },
    )
}

/// T protocol on `outer × double(base)`: unencode the outer factor, undo the
/// doubling circuit on the logical block, apply T on the first copy of `base`,
/// and redo both.
///
/// Pauli propagation through T is the identity, so the schedule is flagged
/// propagation-approximate.
pub fn doubled_t_protocol(outer: &ChainComplex, base: &crate::complex::CssCode) -> Result<GateSchedule> {
    let (doubled, inner) = crate::codes::double(base);
    let inner_complex = crate::complex::boundary_from_css(&doubled)?;
    let product = crate::hprod::homological_product(outer, &inner_complex);
    let grid = product.grid();
    // protected factor 2: position p of logical block 0 is (0, p)
    let layer = (0..base.n()).map(|p| Gate::T(grid.flat(0, p))).collect::<Vec<_>>();
    build_protocol_with(
        &product,
        ProtocolOptions {
            id: "doubled-t".into(),
            unencode_factor: 1,
            layer,
            inner: Some(inner),
        },
    )
}

fn union_find_root(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

pub fn build_protocol_with(product: &ProductCode, options: ProtocolOptions) -> Result<GateSchedule> {
    check_factor(options.unencode_factor)?;
    let n = product.n();
    let mut schedule = GateSchedule {
        id: options.id,
        product: product.clone(),
        unencode_factor: options.unencode_factor,
        layers: Vec::new(),
        frames: Vec::new(),
        to_frame: Vec::new(),
        from_frame: Vec::new(),
        frame_step: 0,
        transversal_step: None,
        groups: Vec::new(),
        propagation_approximate: false,
    };
    let positions = schedule.positions();
    let kq = schedule.logical_blocks();

    let encoder = CanonicalForm::of_complex(schedule.unencoded_complex()).encoder_circuit;
    let banded = |c: usize, t: usize, s: &GateSchedule| -> Vec<Gate> {
        (0..positions).map(|p| Gate::cx(s.qubit(p, c), s.qubit(p, t))).collect()
    };
    let unencode: Vec<Layer> = encoder
        .inverse()
        .gates()
        .iter()
        .map(|&(c, t)| Layer {
            phase: Phase::Unencode,
            gates: banded(c, t, &schedule),
        })
        .collect();
    let reencode: Vec<Layer> = encoder
        .gates()
        .iter()
        .map(|&(c, t)| Layer {
            phase: Phase::Reencode,
            gates: banded(c, t, &schedule),
        })
        .collect();

    let mut parent: Vec<usize> = (0..positions).collect();
    let mut inner_un = Vec::new();
    let mut inner_re = Vec::new();
    if let Some(inner) = &options.inner {
        if inner.n() != positions {
            return Err(Error::DimensionMismatch {
                op: "inner circuit",
                left: (inner.n(), inner.n()),
                right: (positions, positions),
            });
        }
        let per_block = |c: usize, t: usize, s: &GateSchedule| -> Vec<Gate> {
            (0..kq).map(|u| Gate::cx(s.qubit(c, u), s.qubit(t, u))).collect()
        };
        for &(c, t) in inner.gates() {
            let (a, b) = (union_find_root(&mut parent, c), union_find_root(&mut parent, t));
            parent[a] = b;
        }
        inner_un = inner
            .inverse()
            .gates()
            .iter()
            .map(|&(c, t)| Layer {
                phase: Phase::InnerUnencode,
                gates: per_block(c, t, &schedule),
            })
            .collect();
        inner_re = inner
            .gates()
            .iter()
            .map(|&(c, t)| Layer {
                phase: Phase::InnerReencode,
                gates: per_block(c, t, &schedule),
            })
            .collect();
    }
    let mut roots: Vec<usize> = (0..positions).map(|p| union_find_root(&mut parent, p)).collect();
    // relabel to the smallest position of each group
    let mut label = vec![usize::MAX; positions];
    for (p, root) in roots.iter_mut().enumerate() {
        if label[*root] == usize::MAX {
            label[*root] = p;
        }
        *root = label[*root];
    }
    schedule.groups = roots;

    validate_layer(&schedule, &options.layer)?;

    schedule.frame_step = unencode.len();
    schedule.layers.extend(unencode);
    schedule.layers.extend(inner_un);
    if !options.layer.is_empty() {
        schedule.layers.push(Layer {
            phase: Phase::Transversal,
            gates: options.layer.clone(),
        });
        schedule.transversal_step = Some(schedule.layers.len());
    }
    schedule.layers.extend(inner_re);
    schedule.layers.extend(reencode);

    let mut frame = product.boundary().clone();
    let mut m = BinaryMatrix::identity(n);
    let mut m_inv = BinaryMatrix::identity(n);
    let mut prefix = vec![m.clone()];
    let mut prefix_inv = vec![m_inv.clone()];
    schedule.frames.push(frame.clone());
    for layer in &schedule.layers {
        if layer.phase != Phase::Transversal {
            for g in &layer.gates {
                let Gate::Cx { control, target } = *g else {
                    unreachable!("encoder layers hold CNOTs only")
                };
                m.add_row(control, target);
                m_inv.add_column(target, control);
                frame.add_row(control, target);
                frame.add_column(target, control);
            }
        }
        schedule.frames.push(frame.clone());
        prefix.push(m.clone());
        prefix_inv.push(m_inv.clone());
    }
    let f = schedule.frame_step;
    for s in 0..prefix.len() {
        schedule.to_frame.push(prefix[f].multiply(&prefix_inv[s])?);
        schedule.from_frame.push(prefix[s].multiply(&prefix_inv[f])?);
    }

    if let Some(step) = schedule.transversal_step {
        if options.layer.iter().all(Gate::is_clifford) {
            check_group_preserved(&schedule, step - 1, &options.layer)?;
        } else {
            schedule.propagation_approximate = true;
        }
    }
    Ok(schedule)
}

fn validate_layer(schedule: &GateSchedule, layer: &[Gate]) -> Result<()> {
    let n = schedule.n();
    let kq = schedule.logical_blocks();
    let mut used = BTreeSet::new();
    for g in layer {
        let qubits = g.qubits();
        for &q in &qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if !used.insert(q) {
                return Err(Error::NotTransversal {
                    gate: g.to_string(),
                    reason: format!("qubit {q} is used twice in the layer"),
                });
            }
            let (_, u) = schedule.locate(q);
            if u >= kq {
                return Err(Error::NotTransversal {
                    gate: g.to_string(),
                    reason: format!("qubit {q} lies in ancilla block {u}, logical blocks are 0..{kq}"),
                });
            }
        }
        if let [a, b] = qubits[..] {
            if schedule.band_of(a) != schedule.band_of(b) {
                return Err(Error::NotTransversal {
                    gate: g.to_string(),
                    reason: "the gate crosses protected bands".into(),
                });
            }
            if schedule.locate(a).1 == schedule.locate(b).1 {
                return Err(Error::NotTransversal {
                    gate: g.to_string(),
                    reason: "both qubits lie in the same block".into(),
                });
            }
        }
    }
    Ok(())
}

/// The codespace stabilizers at `step` all carry `+` signs; the layer must map
/// that signed group onto itself.
fn check_group_preserved(schedule: &GateSchedule, step: usize, layer: &[Gate]) -> Result<()> {
    let n = schedule.n();
    let code = css_from_boundary(&ChainComplex::new(schedule.frames[step].clone())?);
    let generators: Vec<PauliOperator> = code
        .x_stabilizer_paulis()
        .into_iter()
        .chain(code.z_stabilizer_paulis())
        .collect();
    let before = StabilizerTableau::from_generators(n, generators)?;
    let mut after = before.clone();
    for g in layer {
        after.apply(g)?;
    }
    if before.same_group(&after) {
        Ok(())
    } else {
        let witness = after
            .rows()
            .iter()
            .find(|r| !before.contains(r))
            .map(|r: &SignedPauli| format!("{}{}", if r.negative { "-" } else { "+" }, r.pauli))
            .unwrap_or_default();
        Err(Error::NotTransversal {
            gate: "layer".into(),
            reason: format!("the layer does not preserve the stabilizer group (image {witness} is not a stabilizer)"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalog;
    use crate::complex::canonical_boundary;
    use crate::hprod::homological_product;

    fn steane_422() -> ProductCode {
        homological_product(&catalog::steane(), &catalog::four_two_two_complex())
    }

    #[test]
    fn frames_start_and_end_at_the_code() {
        let p = steane_422();
        let s = build_protocol(&p, 2, &[]).unwrap();
        assert_eq!(s.frame(0), p.boundary());
        assert_eq!(s.frame(s.len()), p.boundary());
        assert!(s.transversal_step().is_none());
        let d0 = canonical_boundary(2, 1);
        let expected = crate::hprod::tensor_sum(catalog::steane().boundary(), &d0);
        assert_eq!(s.half_canonical(), &expected);
    }

    #[test]
    fn unencoding_factor_one_swaps_roles() {
        let p = steane_422();
        let s = build_protocol(&p, 1, &[]).unwrap();
        assert_eq!(s.protected_factor(), 2);
        assert_eq!(s.protected_axis(), Axis::Two);
        let expected = crate::hprod::tensor_sum(&canonical_boundary(1, 3), catalog::four_two_two_complex().boundary());
        assert_eq!(s.half_canonical(), &expected);
    }

    #[test]
    fn unencode_gates_stay_in_one_band() {
        let p = steane_422();
        let s = build_protocol(&p, 2, &[]).unwrap();
        for layer in s.layers() {
            for g in &layer.gates {
                let q = g.qubits();
                assert_eq!(s.band_of(q[0]), s.band_of(q[1]));
            }
        }
    }

    #[test]
    fn transversal_layers() {
        let p = steane_422();
        let h = transversal_layer(&p, 2, TransversalKind::H, 0).unwrap();
        let s = build_protocol(&p, 2, &h).unwrap();
        assert_eq!(s.transversal_step(), Some(s.frame_step() + 1));
        let cx = transversal_layer(&p, 2, TransversalKind::Cx, 0).unwrap();
        build_protocol(&p, 2, &cx).unwrap();
        assert!(transversal_layer(&p, 2, TransversalKind::Cx, 1).is_err());
        let t = transversal_layer(&p, 2, TransversalKind::T, 1).unwrap();
        assert!(build_protocol(&p, 2, &t).unwrap().propagation_approximate());
    }

    #[test]
    fn rejects_non_transversal_layers() {
        let p = steane_422();
        let s = build_protocol(&p, 2, &[]).unwrap();
        let cross = Gate::cx(s.qubit(0, 0), s.qubit(1, 1));
        assert!(matches!(build_protocol(&p, 2, &[cross]), Err(Error::NotTransversal { .. })));
        let ancilla = Gate::H(s.qubit(0, 3));
        assert!(matches!(build_protocol(&p, 2, &[ancilla]), Err(Error::NotTransversal { .. })));
        let twice = [Gate::H(0), Gate::S(0)];
        assert!(matches!(build_protocol(&p, 2, &twice), Err(Error::NotTransversal { .. })));
        // a single H is local but breaks the Steane group on the block
        assert!(matches!(build_protocol(&p, 2, &[Gate::H(0)]), Err(Error::NotTransversal { .. })));
    }

    #[test]
    fn propagation_matches_matrices() {
        let p = steane_422();
        let s = build_protocol(&p, 2, &transversal_layer(&p, 2, TransversalKind::H, 1).unwrap()).unwrap();
        for step in 0..=s.len() {
            let b = s.to_frame(step);
            for q in 0..s.n() {
                let z = PauliOperator::z_type(crate::gf2::BitVec::unit(s.n(), q));
                assert_eq!(s.propagate_to_frame(step, &z).z_bits(), &b.mul_vec(z.z_bits()));
            }
        }
    }

    #[test]
    fn text_has_step_markers() {
        let p = steane_422();
        let s = build_protocol(&p, 2, &[]).unwrap();
        let text = s.to_text();
        assert!(text.contains("#STEP 1\n"));
        let c = Circuit::parse_text(&text).unwrap();
        assert_eq!(c.len(), s.gate_count());
    }
}
