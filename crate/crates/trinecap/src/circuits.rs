//! Gate-level synthesis of the collective decoder and the Naimark-extended
//! accessible-information measurement: two-level (Givens) decomposition of
//! unitaries, compilation to controlled single-qubit gates on two qubits,
//! and a small gate simulator.

use num_complex::Complex64;
use std::fmt::Write as _;

use crate::measurement::naimark_extend;
use crate::qmath::{CMatrix, CVector};
use crate::trine::{acc_povm, singlet, srm_povm_closed_form};
use crate::{Error, Result};

/// A unitary acting only on span{|i>, |j>} of the computational basis.
#[derive(Debug, Clone)]
pub struct TwoLevelRotation {
    pub i: usize,
    pub j: usize,
    /// 2x2 block in the ordered (|i>, |j>) basis.
    pub block: [[Complex64; 2]; 2],
}

impl TwoLevelRotation {
    pub fn as_matrix(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::identity(dim);
        m.set(self.i, self.i, self.block[0][0]);
        m.set(self.i, self.j, self.block[0][1]);
        m.set(self.j, self.i, self.block[1][0]);
        m.set(self.j, self.j, self.block[1][1]);
        m
    }
}

/// Control polarity: fire on |0> (open circle) or on |1> (filled dot).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    OnZero,
    OnOne,
}

/// A (possibly controlled) single-qubit gate on a two-qubit register.
/// Qubit 0 is the high-order bit of the basis index.
#[derive(Debug, Clone)]
pub struct GateOp {
    pub target: usize,
    pub control: Option<(usize, Polarity)>,
    /// 2x2 unitary acting on the target qubit.
    pub matrix: [[Complex64; 2]; 2],
}

impl GateOp {
    /// Embed into the 4-dimensional two-qubit space.
    pub fn as_matrix(&self) -> CMatrix {
        let mut m = CMatrix::identity(4);
        let spectator = 1 - self.target;
        for spec_bit in 0..2usize {
            if let Some((cq, pol)) = self.control {
                debug_assert_eq!(cq, spectator);
                let fires = match pol {
                    Polarity::OnZero => spec_bit == 0,
                    Polarity::OnOne => spec_bit == 1,
                };
                if !fires {
                    continue;
                }
            }
            let idx = |target_bit: usize| -> usize {
                if self.target == 0 {
                    (target_bit << 1) | spec_bit
                } else {
                    (spec_bit << 1) | target_bit
                }
            };
            let (r0, r1) = (idx(0), idx(1));
            m.set(r0, r0, self.matrix[0][0]);
            m.set(r0, r1, self.matrix[0][1]);
            m.set(r1, r0, self.matrix[1][0]);
            m.set(r1, r1, self.matrix[1][1]);
        }
        m
    }
}

/// An ordered gate list; gates are applied first-to-last, so the overall
/// matrix is gates[n-1] * ... * gates[0].
#[derive(Debug, Clone, Default)]
pub struct GateSequence {
    pub gates: Vec<GateOp>,
}

impl GateSequence {
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::identity(4);
        for g in &self.gates {
            m = g.as_matrix().mul(&m);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Line-oriented text form, one gate per line:
    /// `CTRL q<k>=<0|1> TARGET q<m> U=[[..],[..]]`.
    pub fn to_text(&self) -> String {
        let fmt_c = |z: Complex64| format!("{:+.9}{:+.9}i", z.re, z.im);
        let mut out = String::new();
        for g in &self.gates {
            if let Some((cq, pol)) = g.control {
                let v = if pol == Polarity::OnOne { 1 } else { 0 };
                let _ = write!(out, "CTRL q{cq}={v} ");
            }
            let _ = writeln!(
                out,
                "TARGET q{} U=[[{},{}],[{},{}]]",
                g.target,
                fmt_c(g.matrix[0][0]),
                fmt_c(g.matrix[0][1]),
                fmt_c(g.matrix[1][0]),
                fmt_c(g.matrix[1][1]),
            );
        }
        out
    }
}

/// The collective-decoder unitary: rows are the SRM basis vectors and the
/// singlet, ordered so that U^dag maps |00>,|01>,|10>,|11> onto
/// Pi_00, Pi_11, S, Pi_22.
pub fn decoder_unitary() -> CMatrix {
    let srm = srm_povm_closed_form();
    let pis: Vec<CVector> = (0..3)
        .map(|k| srm.elements()[k].rank1_vector().unwrap().clone())
        .collect();
    let rows = [&pis[0], &pis[1], &singlet(), &pis[2]];
    let mut u = CMatrix::zeros(4);
    for (r, v) in rows.iter().enumerate() {
        for c in 0..4 {
            u.set(r, c, v.amp(c).conj());
        }
    }
    u
}

/// Decompose a unitary into two-level rotations by Gaussian elimination
/// (Reck scheme): the returned product rots[0] * rots[1] * ... equals `u`
/// within 1e-10. Any residual diagonal phase is folded into the final
/// rotation.
pub fn two_level_decompose(u: &CMatrix) -> Result<Vec<TwoLevelRotation>> {
    let d = u.dim();
    if u.unitarity_residual() > 1e-10 {
        return Err(Error::InvalidArgument("matrix is not unitary".into()));
    }
    let mut w = u.clone();
    let mut rots: Vec<TwoLevelRotation> = Vec::new();
    for c in 0..d {
        for r in (c + 1)..d {
            let a = w.get(c, c);
            let b = w.get(r, c);
            if b.norm() <= 1e-14 && a.im.abs() <= 1e-14 && a.re > 0.0 {
                continue;
            }
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            // G zeroes entry (r, c) and leaves a real positive pivot.
            let g = [[a.conj() / n, b.conj() / n], [-b / n, a / n]];
            // w <- G w on rows c and r.
            for col in 0..d {
                let wc = w.get(c, col);
                let wr = w.get(r, col);
                w.set(c, col, g[0][0] * wc + g[0][1] * wr);
                w.set(r, col, g[1][0] * wc + g[1][1] * wr);
            }
            // Record G^dag, a factor of u read left to right.
            rots.push(TwoLevelRotation {
                i: c,
                j: r,
                block: [
                    [g[0][0].conj(), g[1][0].conj()],
                    [g[0][1].conj(), g[1][1].conj()],
                ],
            });
        }
    }
    // w is now diagonal: identity except possibly a phase at (d-1, d-1).
    let phase = w.get(d - 1, d - 1);
    if (phase - Complex64::ONE).norm() > 1e-12 {
        match rots.last_mut() {
            Some(last) if last.i == d - 2 && last.j == d - 1 => {
                last.block[0][1] *= phase;
                last.block[1][1] *= phase;
            }
            _ => rots.push(TwoLevelRotation {
                i: d - 2,
                j: d - 1,
                block: [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, phase]],
            }),
        }
    }
    Ok(rots)
}

/// Multiply two-level rotations back together (left to right).
pub fn reconstruct(rots: &[TwoLevelRotation], dim: usize) -> CMatrix {
    let mut m = CMatrix::identity(dim);
    for r in rots {
        m = m.mul(&r.as_matrix(dim));
    }
    m
}

fn gray_adjacent_gate(i: usize, j: usize, block: [[Complex64; 2]; 2]) -> GateOp {
    let diff = i ^ j;
    debug_assert!(diff == 0b01 || diff == 0b10);
    if diff == 0b01 {
        // Indices share the high bit: gate on qubit 1, controlled on qubit 0.
        let pol = if (i >> 1) == 1 {
            Polarity::OnOne
        } else {
            Polarity::OnZero
        };
        GateOp {
            target: 1,
            control: Some((0, pol)),
            matrix: block,
        }
    } else {
        // Shared low bit: gate on qubit 0, controlled on qubit 1.
        let pol = if (i & 1) == 1 {
            Polarity::OnOne
        } else {
            Polarity::OnZero
        };
        GateOp {
            target: 0,
            control: Some((1, pol)),
            matrix: block,
        }
    }
}

/// Compile two-level rotations on the two-qubit space into controlled
/// single-qubit gates. Gray-adjacent index pairs compile to one gate;
/// pairs differing in both bits are conjugated by a controlled-X step.
pub fn compile_two_qubit(rots: &[TwoLevelRotation]) -> GateSequence {
    let x = [
        [Complex64::ZERO, Complex64::ONE],
        [Complex64::ONE, Complex64::ZERO],
    ];
    // Collect left-to-right matrix factors, then reverse into application
    // order (the sequence matrix is last * ... * first).
    let mut factors: Vec<GateOp> = Vec::new();
    for rot in rots {
        let diff = rot.i ^ rot.j;
        if diff == 0b11 {
            // Map |i> to the Gray-adjacent index m = i ^ 1 via a controlled-X
            // on qubit 1, rotate on (m, j), then map back.
            let m = rot.i ^ 1;
            debug_assert!(m < rot.j);
            let pol = if (rot.i >> 1) == 1 {
                Polarity::OnOne
            } else {
                Polarity::OnZero
            };
            let cx = GateOp {
                target: 1,
                control: Some((0, pol)),
                matrix: x,
            };
            factors.push(cx.clone());
            factors.push(gray_adjacent_gate(m, rot.j, rot.block));
            factors.push(cx);
        } else {
            factors.push(gray_adjacent_gate(rot.i, rot.j, rot.block));
        }
    }
    factors.reverse();
    GateSequence { gates: factors }
}

/// Apply a gate sequence to a state vector.
pub fn simulate_gates(gs: &GateSequence, input: &CVector) -> Result<CVector> {
    if input.dim() != 4 {
        return Err(Error::DimMismatch(format!(
            "gate simulator expects dim 4, got {}",
            input.dim()
        )));
    }
    let mut state = input.clone();
    for g in &gs.gates {
        state = g.as_matrix().mulvec(&state);
    }
    Ok(state)
}

/// The compiled collective-decoder circuit.
pub fn decoder_circuit() -> Result<GateSequence> {
    Ok(compile_two_qubit(&two_level_decompose(&decoder_unitary())?))
}

/// A compiled circuit together with the measurement-outcome bookkeeping of
/// its Naimark extension.
#[derive(Debug, Clone)]
pub struct NaimarkCircuit {
    pub sequence: GateSequence,
    /// Basis outcome index -> POVM element index (None: never fires).
    pub outcome_map: Vec<Option<usize>>,
}

/// Two-qubit circuit realizing a Naimark extension of the
/// accessible-information POVM; the system qubit is qubit 0 and the
/// ancilla starts in |0>.
pub fn acc_circuit() -> Result<NaimarkCircuit> {
    let ext = naimark_extend(&acc_povm())?;
    let rots = two_level_decompose(&ext.unitary)?;
    Ok(NaimarkCircuit {
        sequence: compile_two_qubit(&rots),
        outcome_map: ext.outcome_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::tensor;
    use crate::trine::{
        codeword_state, ideal_channel, letter_state, MeasurementKind, TrineConstants,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn decoder_unitary_entries() {
        let u = decoder_unitary();
        let k = TrineConstants::new();
        assert!((u.get(0, 0).re - k.cos_half_gamma()).abs() < 1e-12);
        assert!((u.get(2, 1).re - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(u.unitarity_residual() < 1e-12);
        assert!(u.max_imag() < 1e-15);
    }

    #[test]
    fn decompose_identity_and_fixed_point() {
        assert!(two_level_decompose(&CMatrix::identity(4))
            .unwrap()
            .is_empty());
        let mut g = CMatrix::identity(4);
        let (c, s) = (0.6, 0.8);
        g.set(0, 0, Complex64::new(c, 0.0));
        g.set(0, 1, Complex64::new(s, 0.0));
        g.set(1, 0, Complex64::new(-s, 0.0));
        g.set(1, 1, Complex64::new(c, 0.0));
        let rots = two_level_decompose(&g).unwrap();
        assert!(reconstruct(&rots, 4).max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn decompose_decoder() {
        let u = decoder_unitary();
        let rots = two_level_decompose(&u).unwrap();
        assert!(rots.len() <= 6);
        assert!(reconstruct(&rots, 4).max_abs_diff(&u) < 1e-10);
        // Real input gives real rotation blocks.
        for r in &rots {
            for row in &r.block {
                for z in row {
                    assert!(z.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn decompose_rejects_non_unitary() {
        assert!(two_level_decompose(&CMatrix::diag(&[1.0, 2.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn compile_gray_adjacent_single_gate() {
        let rot = TwoLevelRotation {
            i: 0,
            j: 1,
            block: [
                [Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)],
                [Complex64::new(-0.8, 0.0), Complex64::new(0.6, 0.0)],
            ],
        };
        let gs = compile_two_qubit(std::slice::from_ref(&rot));
        assert_eq!(gs.len(), 1);
        assert!(gs.matrix().max_abs_diff(&rot.as_matrix(4)) < 1e-12);
        let g = &gs.gates[0];
        assert_eq!(g.target, 1);
        assert_eq!(g.control, Some((0, Polarity::OnZero)));
    }

    #[test]
    fn compile_antipodal_three_gates() {
        let rot = TwoLevelRotation {
            i: 0,
            j: 3,
            block: [
                [Complex64::new(0.28, 0.0), Complex64::new(0.96, 0.0)],
                [Complex64::new(-0.96, 0.0), Complex64::new(0.28, 0.0)],
            ],
        };
        let gs = compile_two_qubit(std::slice::from_ref(&rot));
        assert_eq!(gs.len(), 3);
        assert!(gs.matrix().max_abs_diff(&rot.as_matrix(4)) < 1e-12);
        let rot2 = TwoLevelRotation {
            i: 1,
            j: 2,
            ..rot.clone()
        };
        let gs2 = compile_two_qubit(std::slice::from_ref(&rot2));
        assert_eq!(gs2.len(), 3);
        assert!(gs2.matrix().max_abs_diff(&rot2.as_matrix(4)) < 1e-12);
    }

    fn random_unitary(dim: usize, rng: &mut ChaCha12Rng) -> CMatrix {
        let mut cols: Vec<CVector> = Vec::new();
        while cols.len() < dim {
            let mut v = CVector::new(
                (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
            for b in &cols {
                let c = b.inner(&v);
                v = v.sub(&b.scale(c));
            }
            if v.norm() > 1e-3 {
                cols.push(v.normalized());
            }
        }
        let mut u = CMatrix::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                u.set(i, j, c.amp(i));
            }
        }
        u
    }

    #[test]
    fn roundtrip_random_unitaries() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..50 {
            let u = random_unitary(4, &mut rng);
            let rots = two_level_decompose(&u).unwrap();
            assert!(rots.len() <= 6);
            assert!(reconstruct(&rots, 4).max_abs_diff(&u) < 1e-9);
            let gs = compile_two_qubit(&rots);
            assert!(gs.matrix().max_abs_diff(&u) < 1e-9);
        }
    }

    #[test]
    fn decoder_circuit_statistics() {
        let gs = decoder_circuit().unwrap();
        assert!(gs.matrix().max_abs_diff(&decoder_unitary()) < 1e-10);
        let ideal = ideal_channel(MeasurementKind::Srm);
        // Outcome order per decoder convention: |00>, |01>, |10>=singlet, |11>.
        let outcome_of = [Some(0), Some(1), None, Some(2)];
        for x in 0..3 {
            let out = simulate_gates(&gs, &codeword_state(x).unwrap().vector).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
            for (r, oc) in outcome_of.iter().enumerate() {
                let p = out.amp(r).norm_sqr();
                match oc {
                    Some(y) => assert!((p - ideal.p(x, *y)).abs() < 1e-10),
                    None => assert!(p < 1e-10),
                }
            }
        }
    }

    #[test]
    fn decoder_circuit_preserves_norm() {
        let gs = decoder_circuit().unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v = CVector::new(
                (0..4)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .normalized();
            let out = simulate_gates(&gs, &v).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_sequence_is_identity() {
        let gs = GateSequence::default();
        let v = CVector::basis(4, 2);
        assert!(simulate_gates(&gs, &v).unwrap().max_abs_diff(&v) < 1e-15);
    }

    #[test]
    fn acc_circuit_reproduces_channel() {
        let circ = acc_circuit().unwrap();
        assert!(circ.sequence.matrix().unitarity_residual() < 1e-10);
        let ideal = ideal_channel(MeasurementKind::Acc);
        for x in 0..3 {
            let psi = letter_state(x).unwrap().vector;
            let input = tensor(&psi, &CVector::basis(2, 0));
            let out = simulate_gates(&circ.sequence, &input).unwrap();
            for (r, oc) in circ.outcome_map.iter().enumerate() {
                let p = out.amp(r).norm_sqr();
                match oc {
                    Some(y) => assert!((p - ideal.p(x, *y)).abs() < 1e-10),
                    None => assert!(p < 1e-10),
                }
            }
        }
    }

    #[test]
    fn serialization_shape() {
        let gs = decoder_circuit().unwrap();
        let text = gs.to_text();
        assert_eq!(text.lines().count(), gs.len());
        for line in text.lines() {
            assert!(line.contains("TARGET q"));
            assert!(line.contains("U=[["));
        }
    }
}
