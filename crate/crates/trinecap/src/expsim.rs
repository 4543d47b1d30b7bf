//! Deterministic optics model of the polarization-location encoder and a
//! seeded stochastic simulation of the photon-counting experiments:
//! visibility and darkcount imperfections, count generation, channel
//! estimation from counts, and full experiment reproduction.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::infotheory::{mutual_information, InfoResult};
use crate::measurement::ChannelMatrix;
use crate::qmath::{CMatrix, CVector};
use crate::trine::{ideal_channel, MeasurementKind};
use crate::{Error, Result};

/// Default counting duration in seconds.
pub const DEFAULT_DURATION: f64 = 5.0;

/// Idealized optical elements and their mode-space transfer matrices.
#[derive(Debug, Clone, Copy)]
pub enum OpticsElement {
    /// Half waveplate at fast-axis angle theta from vertical.
    Hwp(f64),
    /// Polarizing beam splitter on (H_A, V_A, H_B, V_B).
    Pbs,
    /// Balanced beam splitter on two paths.
    Bs5050,
    /// Relative phase on the second mode.
    Phase(f64),
}

impl OpticsElement {
    pub fn mode_dim(&self) -> usize {
        match self {
            OpticsElement::Pbs => 4,
            _ => 2,
        }
    }

    pub fn transfer(&self) -> CMatrix {
        match *self {
            OpticsElement::Hwp(theta) => hwp_matrix(theta),
            OpticsElement::Pbs => {
                let mut m = CMatrix::zeros(4);
                m.set(0, 0, Complex64::ONE);
                m.set(2, 2, Complex64::ONE);
                m.set(3, 1, Complex64::I);
                m.set(1, 3, Complex64::I);
                m
            }
            OpticsElement::Bs5050 => {
                let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
                CMatrix::from_rows(&[vec![s, s], vec![s, -s]])
            }
            OpticsElement::Phase(delta) => {
                let mut m = CMatrix::identity(2);
                m.set(1, 1, Complex64::from_polar(1.0, delta));
                m
            }
        }
    }
}

/// Half-waveplate action |H> -> -cos2t |H> + sin2t |V>,
/// |V> -> sin2t |H> + cos2t |V>.
pub fn hwp_matrix(theta: f64) -> CMatrix {
    let (s, c) = (2.0 * theta).sin_cos();
    CMatrix::from_real_rows(&[vec![-c, s], vec![s, c]])
}

/// Encoder waveplate angles for code-word parameter phi; the phi -> 0
/// limit fixes theta_2 = -pi/4 where the formula is 0/0.
pub fn hwp_angles(phi: f64) -> (f64, f64, f64) {
    let c = phi.cos();
    let s = phi.sin();
    let t0 = 0.5 * ((1.0 - c).max(0.0) / (1.0 + c)).sqrt().atan();
    let t1 = 0.5 * (-s / (1.0 + c)).atan();
    let t2 = if (1.0 - c).abs() < 1e-12 {
        -std::f64::consts::FRAC_PI_4
    } else {
        0.5 * (-s / (1.0 - c)).atan()
    };
    (t0, t1, t2)
}

/// Output of the polarization-location encoder for code-word parameter phi.
pub fn encoder_state(phi: f64) -> CVector {
    let (t0, t1, t2) = hwp_angles(phi);
    let (s0, c0) = (2.0 * t0).sin_cos();
    let (s1, c1) = (2.0 * t1).sin_cos();
    let (s2, c2) = (2.0 * t2).sin_cos();
    CVector::from_reals(&[c0 * c1, -s0 * s2, -c0 * s1, s0 * c2])
}

/// Imperfection model for the photon-counting experiments.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NoiseModel {
    /// Interference fringe visibility in [0,1].
    pub visibility: f64,
    /// Darkcounts per second per detector.
    pub dark_rate: f64,
    /// Total background counts per second.
    pub background_rate: f64,
    /// Detector efficiency in (0,1].
    pub detector_efficiency: f64,
    /// Signal photons per second entering the detection stage.
    pub signal_rate: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            visibility: 0.99,
            dark_rate: 100.0,
            background_rate: 300.0,
            detector_efficiency: 0.7,
            signal_rate: 1e6,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::InvalidArgument("visibility outside [0,1]".into()));
        }
        if self.dark_rate < 0.0 || self.background_rate < 0.0 {
            return Err(Error::InvalidArgument("negative noise rate".into()));
        }
        if !(0.0 < self.detector_efficiency && self.detector_efficiency <= 1.0) {
            return Err(Error::InvalidArgument("efficiency outside (0,1]".into()));
        }
        if self.signal_rate < 0.0 {
            return Err(Error::InvalidArgument("negative signal rate".into()));
        }
        Ok(())
    }
}

fn mix_rows(ch: &ChannelMatrix, weight: f64) -> Vec<Vec<f64>> {
    let ny = ch.num_outputs() as f64;
    ch.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&p| (1.0 - weight) * p + weight / ny)
                .collect()
        })
        .collect()
}

fn noisy_rows(ideal: &ChannelMatrix, nm: &NoiseModel, interference: bool) -> Vec<Vec<f64>> {
    // Fringe-visibility contraction toward the uniform row, then an
    // additive floor from darkcounts and background weighted against the
    // detected signal rate.
    let v = if interference { nm.visibility } else { 1.0 };
    let contracted = ChannelMatrix::new(
        mix_rows(ideal, 1.0 - v),
        ideal.input_labels().to_vec(),
        ideal.output_labels().to_vec(),
    )
    .unwrap();
    let noise = nm.dark_rate * ideal.num_outputs() as f64 + nm.background_rate;
    let signal = nm.signal_rate * nm.detector_efficiency;
    let f = if signal + noise > 0.0 {
        noise / (signal + noise)
    } else {
        0.0
    };
    let mut rows = mix_rows(&contracted, f);
    for row in &mut rows {
        let s: f64 = row.iter().sum();
        for p in row.iter_mut() {
            *p /= s;
        }
    }
    rows
}

/// Apply the noise model to an ideal channel.
pub fn noisy_channel(ideal: &ChannelMatrix, nm: &NoiseModel) -> Result<ChannelMatrix> {
    nm.validate()?;
    ChannelMatrix::new(
        noisy_rows(ideal, nm, true),
        ideal.input_labels().to_vec(),
        ideal.output_labels().to_vec(),
    )
}

/// Raw photon-count data per (input, outcome) cell.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub counts: Vec<Vec<u64>>,
    pub duration: f64,
    pub seed: u64,
    pub input_labels: Vec<String>,
    pub outcome_labels: Vec<String>,
    pub noise: NoiseModel,
}

impl CountTable {
    /// CSV form `input,outcome,count`, stable row order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input,outcome,count\n");
        for (x, row) in self.counts.iter().enumerate() {
            for (y, c) in row.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    self.input_labels[x], self.outcome_labels[y], c
                ));
            }
        }
        out
    }

    /// JSON sidecar with the run metadata.
    pub fn sidecar_json(&self) -> String {
        serde_json::json!({
            "duration": self.duration,
            "seed": self.seed,
            "noise_model": self.noise,
        })
        .to_string()
    }
}

/// Draw a multinomial sample by sequential binomial splitting.
fn multinomial(rng: &mut ChaCha12Rng, total: u64, probs: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = total;
    let mut mass = 1.0f64;
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, q).unwrap().sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass -= p;
        if mass <= 0.0 {
            break;
        }
    }
    counts
}

fn poisson(rng: &mut ChaCha12Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        0
    } else {
        Poisson::new(mean).unwrap().sample(rng) as u64
    }
}

/// Seeded count simulation: per input, a Poisson(mean_total * duration)
/// signal total split multinomially across outcomes, plus independent
/// Poisson darkcounts per detector.
pub fn simulate_counts(
    ch: &ChannelMatrix,
    mean_total: f64,
    duration: f64,
    nm: &NoiseModel,
    seed: u64,
) -> Result<CountTable> {
    if mean_total < 0.0 || duration <= 0.0 {
        return Err(Error::InvalidArgument("bad mean_total or duration".into()));
    }
    nm.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts = Vec::with_capacity(ch.num_inputs());
    for x in 0..ch.num_inputs() {
        let total = poisson(&mut rng, mean_total * duration);
        let mut row = multinomial(&mut rng, total, ch.row(x));
        for c in row.iter_mut() {
            *c += poisson(&mut rng, nm.dark_rate * duration);
        }
        counts.push(row);
    }
    Ok(CountTable {
        counts,
        duration,
        seed,
        input_labels: ch.input_labels().to_vec(),
        outcome_labels: ch.output_labels().to_vec(),
        noise: *nm,
    })
}

/// Row-normalized channel estimate with multinomial standard errors
/// sqrt(p (1-p) / N_row).
pub fn estimate_channel(ct: &CountTable) -> Result<(ChannelMatrix, Vec<Vec<f64>>)> {
    let mut rows = Vec::with_capacity(ct.counts.len());
    let mut errs = Vec::with_capacity(ct.counts.len());
    for (x, row) in ct.counts.iter().enumerate() {
        let n: u64 = row.iter().sum();
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "input {} has no counts",
                ct.input_labels[x]
            )));
        }
        let nf = n as f64;
        let probs: Vec<f64> = row.iter().map(|&c| c as f64 / nf).collect();
        errs.push(probs.iter().map(|&p| (p * (1.0 - p) / nf).sqrt()).collect());
        rows.push(probs);
    }
    Ok((
        ChannelMatrix::new(rows, ct.input_labels.clone(), ct.outcome_labels.clone())?,
        errs,
    ))
}

/// The four measurement configurations of the optical experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Accessible-information measurement on the polarization qubit.
    AccPol,
    /// Accessible-information measurement on the location qubit.
    AccLoc,
    /// Optimal single-letter (projective) measurement.
    C1,
    /// Collective square-root measurement on code-word pairs.
    Srm,
}

impl ExperimentKind {
    fn ideal(self) -> ChannelMatrix {
        match self {
            ExperimentKind::AccPol | ExperimentKind::AccLoc => ideal_channel(MeasurementKind::Acc),
            ExperimentKind::C1 => ideal_channel(MeasurementKind::C1),
            ExperimentKind::Srm => ideal_channel(MeasurementKind::Srm),
        }
    }

    /// The C1 basis measurement has no interferometer, so fringe
    /// visibility does not degrade it.
    fn interferometric(self) -> bool {
        !matches!(self, ExperimentKind::C1)
    }

    fn letters(self) -> usize {
        match self {
            ExperimentKind::Srm => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::AccPol => "acc-pol",
            ExperimentKind::AccLoc => "acc-loc",
            ExperimentKind::C1 => "c1",
            ExperimentKind::Srm => "srm",
        }
    }
}

/// Full pipeline output of one simulated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub info: InfoResult,
    pub counts: CountTable,
    pub estimated: ChannelMatrix,
}

/// Reproduce an experiment end to end: ideal channel, noise model, count
/// simulation, channel estimation, and mutual information.
pub fn reproduce_experiment(
    kind: ExperimentKind,
    nm: &NoiseModel,
    seed: u64,
) -> Result<ExperimentOutcome> {
    nm.validate()?;
    let ideal = kind.ideal();
    let noisy = ChannelMatrix::new(
        noisy_rows(&ideal, nm, kind.interferometric()),
        ideal.input_labels().to_vec(),
        ideal.output_labels().to_vec(),
    )?;
    let counts = simulate_counts(&noisy, nm.signal_rate, DEFAULT_DURATION, nm, seed)?;
    let (estimated, _) = estimate_channel(&counts)?;
    let nx = estimated.num_inputs();
    let priors = vec![1.0 / nx as f64; nx];
    let bits = mutual_information(&priors, &estimated)?;
    let info = InfoResult::new(bits, kind.letters(), kind.name());
    Ok(ExperimentOutcome {
        info,
        counts,
        estimated,
    })
}

/// Bisect for the visibility at which the analytic noisy-model mutual
/// information of `kind` equals `target_mi` bits. The model MI is
/// monotone increasing in visibility.
pub fn calibrate_visibility(
    kind: ExperimentKind,
    nm: &NoiseModel,
    target_mi: f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::InvalidArgument("bad visibility bracket".into()));
    }
    let ideal = kind.ideal();
    let nx = ideal.num_inputs();
    let priors = vec![1.0 / nx as f64; nx];
    let mi_at = |v: f64| -> f64 {
        let mut m = *nm;
        m.visibility = v;
        let rows = noisy_rows(&ideal, &m, kind.interferometric());
        let ch = ChannelMatrix::new(
            rows,
            ideal.input_labels().to_vec(),
            ideal.output_labels().to_vec(),
        )
        .unwrap();
        mutual_information(&priors, &ch).unwrap()
    };
    if !(mi_at(lo) <= target_mi && target_mi <= mi_at(hi)) {
        return Err(Error::InvalidArgument(format!(
            "target {target_mi} outside bracket [{:.4}, {:.4}]",
            mi_at(lo),
            mi_at(hi)
        )));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mi_at(mid) < target_mi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
