//! Closed-form constructors for the qubit-trine ensemble: letter and
//! code-word states, the accessible-information POVM, the optimal
//! single-letter basis, the collective square-root-measurement basis,
//! and the ideal channel matrices they induce.

use num_complex::Complex64;

use crate::measurement::{ChannelMatrix, Ensemble, Povm};
use crate::qmath::{tensor, CVector};
use crate::{Error, Result};

/// Closed-form scalar constants of the trine geometry.
#[derive(Debug, Clone, Copy)]
pub struct TrineConstants {
    /// Overlap magnitude between distinct trine letters.
    pub kappa: f64,
    /// Collective-decoding angle: cos(gamma/2) = (sqrt2 + 1)/sqrt6.
    pub gamma: f64,
    /// Accessible-information angle: cos(gamma_acc/2) = 1/sqrt3.
    pub gamma_acc: f64,
    /// SRM basis coefficient on the matching code word.
    pub a: f64,
    /// SRM basis coefficient on each non-matching code word.
    pub b: f64,
    /// Crossover probability of the single-letter binary channel.
    pub epsilon: f64,
}

impl TrineConstants {
    pub fn new() -> Self {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        Self {
            kappa: 0.5,
            gamma: 2.0 * ((s2 + 1.0) / s6).acos(),
            gamma_acc: 2.0 * (1.0 / s3).acos(),
            a: (4.0 + s2) / (3.0 * s3),
            b: -(2.0 - s2) / (3.0 * s3),
            epsilon: (2.0 - s3) / 4.0,
        }
    }

    pub fn cos_half_gamma(&self) -> f64 {
        (self.gamma / 2.0).cos()
    }

    pub fn sin_half_gamma(&self) -> f64 {
        (self.gamma / 2.0).sin()
    }
}

impl Default for TrineConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// A named pure state.
#[derive(Debug, Clone)]
pub struct LabeledState {
    pub label: String,
    pub vector: CVector,
}

impl LabeledState {
    pub fn new(label: impl Into<String>, vector: CVector) -> Self {
        let s = Self {
            label: label.into(),
            vector,
        };
        debug_assert!((s.vector.norm() - 1.0).abs() < 1e-12);
        s
    }
}

fn check_letter(x: usize) -> Result<()> {
    if x > 2 {
        Err(Error::InvalidArgument(format!(
            "letter index {x} not in 0..=2"
        )))
    } else {
        Ok(())
    }
}

/// Trine letter at angle phi: (cos(phi/2), sin(phi/2)); the fixed letters
/// sit at phi = 2 pi x / 3.
pub fn rotated_letter(phi: f64) -> CVector {
    CVector::from_reals(&[(phi / 2.0).cos(), (phi / 2.0).sin()])
}

pub fn letter_state(x: usize) -> Result<LabeledState> {
    check_letter(x)?;
    let s3 = 3f64.sqrt();
    let amps = match x {
        0 => [1.0, 0.0],
        1 => [-0.5, -s3 / 2.0],
        _ => [-0.5, s3 / 2.0],
    };
    Ok(LabeledState::new(
        format!("{x}"),
        CVector::from_reals(&amps),
    ))
}

pub fn codeword_state(x: usize) -> Result<LabeledState> {
    let l = letter_state(x)?;
    Ok(LabeledState::new(
        format!("{x}{x}"),
        tensor(&l.vector, &l.vector),
    ))
}

pub fn rotated_codeword(phi: f64) -> CVector {
    let l = rotated_letter(phi);
    tensor(&l, &l)
}

pub fn letter_ensemble() -> Ensemble {
    let states = (0..3).map(|x| letter_state(x).unwrap()).collect();
    Ensemble::new(states, vec![1.0 / 3.0; 3]).unwrap()
}

pub fn codeword_ensemble() -> Ensemble {
    let states = (0..3).map(|x| codeword_state(x).unwrap()).collect();
    Ensemble::new(states, vec![1.0 / 3.0; 3]).unwrap()
}

/// Singlet vector (|01> - |10>)/sqrt2, orthogonal to all code words.
pub fn singlet() -> CVector {
    let s = 1.0 / 2f64.sqrt();
    CVector::from_reals(&[0.0, s, -s, 0.0])
}

/// The accessible-information POVM: three rank-1 elements |w_y><w_y| with
/// each w_y orthogonal to letter y.
pub fn acc_povm() -> Povm {
    let s = (2f64 / 3.0).sqrt(); // sin(gamma_acc / 2)
    let w0 = CVector::from_reals(&[0.0, -s]);
    let w1 = CVector::from_reals(&[-1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()]);
    let w2 = CVector::from_reals(&[1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()]);
    Povm::from_vectors(vec![w0, w1, w2], vec!["0".into(), "1".into(), "2".into()])
}

/// The optimal single-letter measurement basis (two orthonormal
/// projectors): nu_y = c psi_y + d psi_{1-y} over letters {0, 1} with
/// c = sqrt((2+sqrt3)/3), d = sqrt((2-sqrt3)/3); letter 2 is discarded.
pub fn c1_basis() -> Povm {
    let c = ((2.0 + 3f64.sqrt()) / 3.0).sqrt();
    let d = ((2.0 - 3f64.sqrt()) / 3.0).sqrt();
    let p0 = letter_state(0).unwrap().vector;
    let p1 = letter_state(1).unwrap().vector;
    let nu0 = p0
        .scale(Complex64::new(c, 0.0))
        .add(&p1.scale(Complex64::new(d, 0.0)));
    let nu1 = p0
        .scale(Complex64::new(d, 0.0))
        .add(&p1.scale(Complex64::new(c, 0.0)));
    Povm::from_vectors(vec![nu0, nu1], vec!["0".into(), "1".into()])
}

/// Closed-form square-root-measurement basis on the two-qubit code words:
/// |Pi_yy> = a |Psi_yy> + b sum_{x != y} |Psi_xx>.
pub fn srm_povm_closed_form() -> Povm {
    let k = TrineConstants::new();
    let words: Vec<CVector> = (0..3).map(|x| codeword_state(x).unwrap().vector).collect();
    let mut vecs = Vec::with_capacity(3);
    let mut labels = Vec::with_capacity(3);
    for y in 0..3 {
        let mut v = CVector::zeros(4);
        for (x, w) in words.iter().enumerate() {
            let coeff = if x == y { k.a } else { k.b };
            v = v.add(&w.scale(Complex64::new(coeff, 0.0)));
        }
        vecs.push(v.phase_normalized(1e-12));
        labels.push(format!("{y}{y}"));
    }
    Povm::from_vectors(vecs, labels)
}

/// Measurement families treated throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Acc,
    C1,
    Srm,
}

/// Ideal channel matrices in closed form.
pub fn ideal_channel(kind: MeasurementKind) -> ChannelMatrix {
    let k = TrineConstants::new();
    match kind {
        MeasurementKind::Acc => ChannelMatrix::new(
            vec![
                vec![0.0, 0.5, 0.5],
                vec![0.5, 0.0, 0.5],
                vec![0.5, 0.5, 0.0],
            ],
            vec!["0".into(), "1".into(), "2".into()],
            vec!["0".into(), "1".into(), "2".into()],
        )
        .unwrap(),
        MeasurementKind::C1 => {
            let e = k.epsilon;
            ChannelMatrix::new(
                vec![vec![1.0 - e, e], vec![e, 1.0 - e]],
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            )
            .unwrap()
        }
        MeasurementKind::Srm => {
            let diag = k.cos_half_gamma().powi(2);
            let off = 0.5 * k.sin_half_gamma().powi(2);
            let rows = (0..3)
                .map(|x| {
                    (0..3)
                        .map(|y| if x == y { diag } else { off })
                        .collect::<Vec<_>>()
                })
                .collect();
            ChannelMatrix::new(
                rows,
                vec!["00".into(), "11".into(), "22".into()],
                vec!["00".into(), "11".into(), "22".into()],
            )
            .unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{born_channel, validate_povm};

    #[test]
    fn constants_consistency() {
        let k = TrineConstants::new();
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        assert!((k.sin_half_gamma() - (s2 - 1.0) / s6).abs() < 1e-15);
        assert!((k.cos_half_gamma().powi(2) + k.sin_half_gamma().powi(2) - 1.0).abs() < 1e-15);
        assert!(k.epsilon > 0.0 && k.epsilon < 0.5);
        assert!((k.a - 1.0419).abs() < 1e-4);
    }

    #[test]
    fn letter_overlaps() {
        let p0 = letter_state(0).unwrap().vector;
        let p1 = letter_state(1).unwrap().vector;
        let p2 = letter_state(2).unwrap().vector;
        assert!((p0.inner(&p1).re + 0.5).abs() < 1e-15);
        assert!((p1.inner(&p2).re + 0.5).abs() < 1e-15);
        assert!((p0.amp(0).re - 1.0).abs() < 1e-15);
        assert!(letter_state(3).is_err());
    }

    #[test]
    fn codeword_values() {
        let w0 = codeword_state(0).unwrap().vector;
        assert!(w0.max_abs_diff(&CVector::from_reals(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
        let w1 = codeword_state(1).unwrap().vector;
        let s3 = 3f64.sqrt();
        let want = CVector::from_reals(&[0.25, s3 / 4.0, s3 / 4.0, 0.75]);
        assert!(w1.max_abs_diff(&want) < 1e-15);
        let w2 = codeword_state(2).unwrap().vector;
        assert!((w0.inner(&w1).re - 0.25).abs() < 1e-15);
        assert!((w1.inner(&w2).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn codewords_match_phi_parameterization() {
        for x in 0..3usize {
            let phi = 2.0 * std::f64::consts::PI * x as f64 / 3.0;
            let param = rotated_codeword(phi);
            let word = codeword_state(x).unwrap().vector;
            // Letter signs flip under the phi parameterization but the
            // two-qubit code word is sign-free.
            assert!(param.max_abs_diff(&word) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn acc_povm_structure() {
        let povm = acc_povm();
        let report = validate_povm(&povm);
        assert!(report.pass);
        let w0 = povm.elements()[0].rank1_vector().unwrap();
        assert!(w0.max_abs_diff(&CVector::from_reals(&[0.0, -(2f64 / 3.0).sqrt()])) < 1e-15);
        // Each w_y is orthogonal to letter y.
        for y in 0..3 {
            let w = povm.elements()[y].rank1_vector().unwrap();
            let psi = letter_state(y).unwrap().vector;
            assert!(w.inner(&psi).norm() < 1e-15);
        }
    }

    #[test]
    fn c1_basis_is_the_right_bsc() {
        let povm = c1_basis();
        let n0 = povm.elements()[0].rank1_vector().unwrap();
        let n1 = povm.elements()[1].rank1_vector().unwrap();
        assert!(n0.inner(n1).norm() < 1e-12);
        assert!((n0.norm() - 1.0).abs() < 1e-12);
        let eps = TrineConstants::new().epsilon;
        let p0 = letter_state(0).unwrap().vector;
        let p1 = letter_state(1).unwrap().vector;
        assert!((n0.inner(&p0).norm_sqr() - (1.0 - eps)).abs() < 1e-12);
        assert!((n1.inner(&p0).norm_sqr() - eps).abs() < 1e-12);
        assert!((n0.inner(&p1).norm_sqr() - eps).abs() < 1e-12);
        assert!((n1.inner(&p1).norm_sqr() - (1.0 - eps)).abs() < 1e-12);
    }

    #[test]
    fn srm_closed_form_orthonormal_and_overlaps() {
        let k = TrineConstants::new();
        let povm = srm_povm_closed_form();
        let vs: Vec<_> = (0..3)
            .map(|i| povm.elements()[i].rank1_vector().unwrap().clone())
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((vs[i].inner(&vs[j]).norm() - want).abs() < 1e-12);
            }
        }
        let w0 = codeword_state(0).unwrap().vector;
        assert!((vs[0].inner(&w0).norm_sqr() - k.cos_half_gamma().powi(2)).abs() < 1e-12);
        assert!((vs[1].inner(&w0).norm_sqr() - 0.5 * k.sin_half_gamma().powi(2)).abs() < 1e-12);
        // All SRM basis vectors are orthogonal to the singlet.
        for v in &vs {
            assert!(v.inner(&singlet()).norm() < 1e-12);
        }
    }

    #[test]
    fn ideal_channels_match_born_rule() {
        let pairs = [
            (MeasurementKind::Acc, letter_ensemble(), acc_povm()),
            (
                MeasurementKind::Srm,
                codeword_ensemble(),
                srm_povm_closed_form(),
            ),
        ];
        for (kind, ens, povm) in pairs {
            let ideal = ideal_channel(kind);
            let born = born_channel(&ens, &povm).unwrap();
            for x in 0..ideal.num_inputs() {
                for y in 0..ideal.num_outputs() {
                    assert!((ideal.p(x, y) - born.p(x, y)).abs() < 1e-12, "{kind:?}");
                }
            }
        }
        // C1 channel uses only letters 0 and 1.
        let ens = Ensemble::new(
            vec![letter_state(0).unwrap(), letter_state(1).unwrap()],
            vec![0.5, 0.5],
        )
        .unwrap();
        let born = born_channel(&ens, &c1_basis()).unwrap();
        let ideal = ideal_channel(MeasurementKind::C1);
        for x in 0..2 {
            for y in 0..2 {
                assert!((ideal.p(x, y) - born.p(x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn all_states_real() {
        for x in 0..3 {
            assert!(letter_state(x).unwrap().vector.max_imag() == 0.0);
            assert!(codeword_state(x).unwrap().vector.max_imag() == 0.0);
        }
    }
}
