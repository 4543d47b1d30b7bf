//! Mutual information, single-letter capacity limits, accessible-information
//! optimization, offset-angle sweeps, and the small-block superadditive
//! coding-gain studies.

use crate::measurement::{born_channel, sqrt_measurement, ChannelMatrix, Ensemble, Povm};
use crate::qmath::{tensor, CVector};
use crate::trine::{
    acc_povm, rotated_codeword, rotated_letter, srm_povm_closed_form, LabeledState, TrineConstants,
};
use crate::{Error, Result};

/// Binary entropy in bits; H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Shannon mutual information I(X:Y) in bits; zero-probability terms
/// contribute nothing.
pub fn mutual_information(priors: &[f64], ch: &ChannelMatrix) -> Result<f64> {
    if priors.len() != ch.num_inputs() {
        return Err(Error::DimMismatch(format!(
            "{} priors vs {} channel inputs",
            priors.len(),
            ch.num_inputs()
        )));
    }
    let ny = ch.num_outputs();
    let mut py = vec![0.0f64; ny];
    for (x, &px) in priors.iter().enumerate() {
        for y in 0..ny {
            py[y] += px * ch.p(x, y);
        }
    }
    let mut bits = 0.0;
    for (x, &px) in priors.iter().enumerate() {
        if px <= 0.0 {
            continue;
        }
        for y in 0..ny {
            let p = ch.p(x, y);
            if p > 0.0 && py[y] > 0.0 {
                bits += px * p * (p / py[y]).log2();
            }
        }
    }
    Ok(bits.max(0.0))
}

/// Classical single-letter capacity limit of the trine: 1 - H(epsilon).
pub fn c1_trine() -> f64 {
    binary_c1(0.5).unwrap()
}

/// Single-letter capacity of a binary pure-state alphabet with overlap
/// kappa, attained by the minimum-error projective measurement.
pub fn binary_c1(kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidArgument(format!(
            "kappa {kappa} outside [0,1]"
        )));
    }
    let eps = (1.0 - (1.0 - kappa * kappa).sqrt()) / 2.0;
    Ok(1.0 - binary_entropy(eps))
}

/// Information result with per-letter normalization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InfoResult {
    pub bits: f64,
    pub per_letter: f64,
    pub meta: String,
}

impl InfoResult {
    pub fn new(bits: f64, n_letters: usize, meta: impl Into<String>) -> Self {
        Self {
            bits,
            per_letter: bits / n_letters as f64,
            meta: meta.into(),
        }
    }
}

/// Offset-angle sweep data.
#[derive(Debug, Clone)]
pub struct SweepCurve {
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Rotate the trine letters against the fixed accessible-information POVM.
    AccPolarization,
    /// Rotate the code-word parameter against the fixed collective decoder.
    SrmCollective,
}

/// 121 points over [-pi/3, pi/3].
pub fn default_sweep_grid() -> Vec<f64> {
    let n = 121;
    let lo = -std::f64::consts::FRAC_PI_3;
    let hi = std::f64::consts::FRAC_PI_3;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Mutual information versus signal-set offset angle for a fixed measurement.
pub fn offset_sweep(kind: SweepKind, grid: &[f64]) -> Result<SweepCurve> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    let priors = [1.0 / 3.0; 3];
    let mut values = Vec::with_capacity(grid.len());
    match kind {
        SweepKind::AccPolarization => {
            let povm = acc_povm();
            for &off in grid {
                let states: Vec<LabeledState> = (0..3)
                    .map(|x| {
                        let phi = 2.0 * std::f64::consts::PI * x as f64 / 3.0 + off;
                        LabeledState::new(format!("{x}"), rotated_letter(phi))
                    })
                    .collect();
                let ch = born_channel(&Ensemble::uniform(states)?, &povm)?;
                values.push(mutual_information(&priors, &ch)?);
            }
        }
        SweepKind::SrmCollective => {
            let povm = srm_povm_closed_form().completed_with_kernel("S");
            for &off in grid {
                let states: Vec<LabeledState> = (0..3)
                    .map(|x| {
                        let phi = 2.0 * std::f64::consts::PI * x as f64 / 3.0 + off;
                        LabeledState::new(format!("{x}{x}"), rotated_codeword(phi))
                    })
                    .collect();
                let ch = born_channel(&Ensemble::uniform(states)?, &povm)?;
                values.push(mutual_information(&priors, &ch)?);
            }
        }
    }
    Ok(SweepCurve {
        offsets: grid.to_vec(),
        values,
    })
}

/// Headline numbers of the superadditivity demonstration.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SuperadditivityReport {
    pub i_acc: f64,
    pub c1: f64,
    pub i2: f64,
    pub i2_per_letter: f64,
    pub gain: f64,
}

pub fn superadditivity_report() -> SuperadditivityReport {
    let k = TrineConstants::new();
    let i_acc = 3f64.log2() - 1.0;
    let c1 = c1_trine();
    // I2 in closed form from the SRM channel entries.
    let diag = k.cos_half_gamma().powi(2);
    let off = 0.5 * k.sin_half_gamma().powi(2);
    let i2 = 3f64.log2() + diag * diag.log2() + 2.0 * off * off.log2();
    SuperadditivityReport {
        i_acc,
        c1,
        i2,
        i2_per_letter: i2 / 2.0,
        gain: i2 / 2.0 - c1,
    }
}

/// Search controls for `accessible_info_optimize`.
#[derive(Debug, Clone, Copy)]
pub struct OptimizeOpts {
    /// Grid points per angle coordinate in the three-outcome family.
    pub coarse_steps: usize,
    /// Golden-section refinement rounds per coordinate.
    pub refine_rounds: usize,
}

impl Default for OptimizeOpts {
    fn default() -> Self {
        Self {
            coarse_steps: 24,
            refine_rounds: 3,
        }
    }
}

fn direction(theta: f64) -> CVector {
    CVector::from_reals(&[theta.cos(), theta.sin()])
}

/// Mutual information of measuring `e` with rank-1 directions u(theta_k)
/// carrying weights w_k.
fn real_povm_mi(e: &Ensemble, thetas: &[f64], weights: &[f64]) -> f64 {
    let nx = e.len();
    let ny = thetas.len();
    let mut ch = vec![vec![0.0f64; ny]; nx];
    for (x, s) in e.states().iter().enumerate() {
        let mut sum = 0.0;
        for (k, (&th, &w)) in thetas.iter().zip(weights).enumerate() {
            let p = w * direction(th).inner(&s.vector).norm_sqr();
            ch[x][k] = p.max(0.0);
            sum += ch[x][k];
        }
        for v in &mut ch[x] {
            *v /= sum;
        }
    }
    let mut py = vec![0.0f64; ny];
    for (x, &px) in e.priors().iter().enumerate() {
        for y in 0..ny {
            py[y] += px * ch[x][y];
        }
    }
    let mut bits = 0.0;
    for (x, &px) in e.priors().iter().enumerate() {
        for y in 0..ny {
            let p = ch[x][y];
            if px > 0.0 && p > 0.0 && py[y] > 0.0 {
                bits += px * p * (p / py[y]).log2();
            }
        }
    }
    bits
}

/// Solve the completeness constraints for three weighted rank-1 directions:
/// sum w_k u_k u_k^T = I. Returns None when the system is singular or any
/// weight is negative.
fn solve_weights(thetas: &[f64; 3]) -> Option<[f64; 3]> {
    // Rows: cos^2, sin*cos, sin^2 equations; rhs (1, 0, 1).
    let mut m = [[0.0f64; 4]; 3];
    for (k, &th) in thetas.iter().enumerate() {
        let (s, c) = th.sin_cos();
        m[0][k] = c * c;
        m[1][k] = s * c;
        m[2][k] = s * s;
    }
    m[0][3] = 1.0;
    m[1][3] = 0.0;
    m[2][3] = 1.0;
    // Gaussian elimination with partial pivoting.
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let w = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    if w.iter().any(|&x| x < -1e-9) {
        return None;
    }
    Some([w[0].max(0.0), w[1].max(0.0), w[2].max(0.0)])
}

fn golden_max(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Numerically maximize the mutual information over real rank-1 POVMs with
/// at most `max_outcomes` outcomes on a real qubit ensemble. Returns the
/// best POVM found and its mutual information.
pub fn accessible_info_optimize(
    e: &Ensemble,
    max_outcomes: usize,
    opts: &OptimizeOpts,
) -> Result<(Povm, f64)> {
    if e.dim() != 2 {
        return Err(Error::InvalidArgument(
            "optimizer handles qubit ensembles only".into(),
        ));
    }
    if max_outcomes < 2 {
        return Err(Error::InvalidArgument(format!(
            "max_outcomes {max_outcomes} below ensemble dimension 2"
        )));
    }
    if e.states().iter().any(|s| s.vector.max_imag() > 1e-12) {
        return Err(Error::InvalidArgument(
            "optimizer is restricted to real-amplitude ensembles".into(),
        ));
    }

    // Two-outcome projective family: basis (theta, theta + pi/2).
    let proj_mi = |th: f64| real_povm_mi(e, &[th, th + std::f64::consts::FRAC_PI_2], &[1.0, 1.0]);
    let step = std::f64::consts::PI / 180.0;
    let mut best_theta = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    let mut th = 0.0;
    while th < std::f64::consts::PI {
        let v = proj_mi(th);
        if v > best_val {
            best_val = v;
            best_theta = th;
        }
        th += step;
    }
    for _ in 0..opts.refine_rounds {
        best_theta = golden_max(best_theta - step, best_theta + step, proj_mi);
        best_val = proj_mi(best_theta);
    }
    let mut best = (
        vec![best_theta, best_theta + std::f64::consts::FRAC_PI_2],
        vec![1.0, 1.0],
        best_val,
    );

    if max_outcomes >= 3 {
        let n = opts.coarse_steps;
        let grid: Vec<f64> = (0..n)
            .map(|i| std::f64::consts::PI * i as f64 / n as f64)
            .collect();
        let mut best3: Option<([f64; 3], [f64; 3], f64)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let thetas = [grid[i], grid[j], grid[k]];
                    if let Some(w) = solve_weights(&thetas) {
                        let v = real_povm_mi(e, &thetas, &w);
                        if best3.as_ref().is_none_or(|b| v > b.2) {
                            best3 = Some((thetas, w, v));
                        }
                    }
                }
            }
        }
        if let Some((mut thetas, mut w, mut val)) = best3 {
            let window = std::f64::consts::PI / n as f64;
            for _ in 0..opts.refine_rounds {
                for c in 0..3 {
                    let t = golden_max(thetas[c] - window, thetas[c] + window, |x| {
                        let mut cand = thetas;
                        cand[c] = x;
                        match solve_weights(&cand) {
                            Some(cw) => real_povm_mi(e, &cand, &cw),
                            None => f64::NEG_INFINITY,
                        }
                    });
                    let mut cand = thetas;
                    cand[c] = t;
                    if let Some(cw) = solve_weights(&cand) {
                        let v = real_povm_mi(e, &cand, &cw);
                        if v > val {
                            thetas = cand;
                            w = cw;
                            val = v;
                        }
                    }
                }
            }
            if val > best.2 {
                best = (thetas.to_vec(), w.to_vec(), val);
            }
        }
    }

    let (thetas, weights, value) = best;
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (k, (&th, &w)) in thetas.iter().zip(&weights).enumerate() {
        if w > 1e-12 {
            vectors.push(
                direction(th)
                    .scale(num_complex::Complex64::new(w.sqrt(), 0.0))
                    .phase_normalized(1e-12),
            );
            labels.push(format!("{k}"));
        }
    }
    Ok((Povm::from_vectors(vectors, labels), value))
}

/// Block-code lengths studied for the binary-letter alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLength {
    Two,
    Three,
}

/// Result of a superadditive-gain evaluation for binary-letter block codes.
#[derive(Debug, Clone)]
pub struct BlockGain {
    pub kappa: f64,
    pub bits: f64,
    pub per_letter: f64,
    pub c1: f64,
    pub gain: f64,
    pub detail: String,
}

fn binary_letters(kappa: f64) -> (CVector, CVector) {
    let c = ((1.0 + kappa) / 2.0).sqrt();
    let s = ((1.0 - kappa) / 2.0).sqrt();
    (CVector::from_reals(&[c, s]), CVector::from_reals(&[c, -s]))
}

fn block_word(bits: &[usize], letters: &(CVector, CVector)) -> CVector {
    let mut v = match bits[0] {
        0 => letters.0.clone(),
        _ => letters.1.clone(),
    };
    for &b in &bits[1..] {
        v = tensor(&v, if b == 0 { &letters.0 } else { &letters.1 });
    }
    v
}

fn srm_block_mi(words: &[CVector], labels: &[String], priors: &[f64]) -> Result<f64> {
    let states = words
        .iter()
        .zip(labels)
        .map(|(v, l)| LabeledState::new(l.clone(), v.clone()))
        .collect();
    let ens = Ensemble::new(states, priors.to_vec())?;
    let povm = sqrt_measurement(&ens)?.completed_with_kernel("null");
    let ch = born_channel(&ens, &povm)?;
    mutual_information(priors, &ch)
}

/// Superadditive coding gain I_n/n - C1(kappa) for binary-letter block
/// codes decoded by the square-root measurement.
///
/// Length three uses the fixed code {001, 010, 100, 111} with uniform
/// priors. Length two searches the four three-word subsets of {00,01,10,11}
/// and a prior simplex grid (coarse step 0.02, refined twice); the search
/// is exploratory and the returned gain is the best found.
pub fn binary_block_gain(kappa: f64, length: BlockLength) -> Result<BlockGain> {
    if !(0.0 < kappa && kappa < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kappa {kappa} outside (0,1)"
        )));
    }
    let letters = binary_letters(kappa);
    let c1 = binary_c1(kappa)?;
    match length {
        BlockLength::Three => {
            let code = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1]];
            let words: Vec<CVector> = code.iter().map(|b| block_word(b, &letters)).collect();
            let labels: Vec<String> = code
                .iter()
                .map(|b| b.iter().map(|x| x.to_string()).collect())
                .collect();
            let priors = vec![0.25; 4];
            let bits = srm_block_mi(&words, &labels, &priors)?;
            Ok(BlockGain {
                kappa,
                bits,
                per_letter: bits / 3.0,
                c1,
                gain: bits / 3.0 - c1,
                detail: "code {001,010,100,111}, uniform priors".into(),
            })
        }
        BlockLength::Two => {
            let seqs = [[0, 0], [0, 1], [1, 0], [1, 1]];
            let subsets = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
            let eval = |subset: &[usize; 3], a: f64, b: f64| -> Result<f64> {
                let words: Vec<CVector> = subset
                    .iter()
                    .map(|&i| block_word(&seqs[i], &letters))
                    .collect();
                let labels: Vec<String> = subset
                    .iter()
                    .map(|&i| seqs[i].iter().map(|x| x.to_string()).collect())
                    .collect();
                let priors = vec![a, b, 1.0 - a - b];
                srm_block_mi(&words, &labels, &priors).map(|m| m / 2.0 - c1)
            };
            let mut best_gain = f64::NEG_INFINITY;
            let mut best_subset = subsets[0];
            let mut best_priors = (1.0 / 3.0, 1.0 / 3.0);
            let coarse = 0.02;
            for subset in &subsets {
                let mut a = coarse;
                while a < 1.0 - coarse / 2.0 {
                    let mut b = coarse;
                    while a + b < 1.0 - coarse / 2.0 {
                        let g = eval(subset, a, b)?;
                        if g > best_gain {
                            best_gain = g;
                            best_subset = *subset;
                            best_priors = (a, b);
                        }
                        b += coarse;
                    }
                    a += coarse;
                }
            }
            for step in [0.002, 0.0002] {
                let (a0, b0) = best_priors;
                let window = 10.0 * step;
                let mut a = (a0 - window).max(step);
                while a <= a0 + window {
                    let mut b = (b0 - window).max(step);
                    while b <= (b0 + window).min(1.0 - a - step) {
                        let g = eval(&best_subset, a, b)?;
                        if g > best_gain {
                            best_gain = g;
                            best_priors = (a, b);
                        }
                        b += step;
                    }
                    a += step;
                }
            }
            let bits = 2.0 * (best_gain + c1);
            Ok(BlockGain {
                kappa,
                bits,
                per_letter: bits / 2.0,
                c1,
                gain: best_gain,
                detail: format!(
                    "subset {:?}, priors ({:.4}, {:.4}, {:.4})",
                    best_subset,
                    best_priors.0,
                    best_priors.1,
                    1.0 - best_priors.0 - best_priors.1
                ),
            })
        }
    }
}

/// Maximize the block gain over a kappa grid; returns the best record.
pub fn max_block_gain(length: BlockLength, lo: f64, hi: f64, step: f64) -> Result<BlockGain> {
    if !(0.0 < lo && lo <= hi && hi < 1.0) || step <= 0.0 {
        return Err(Error::InvalidArgument("bad kappa grid".into()));
    }
    let mut best: Option<BlockGain> = None;
    let mut kappa = lo;
    while kappa <= hi + step / 2.0 {
        let g = binary_block_gain(kappa.min(hi), length)?;
        if best.as_ref().is_none_or(|b| g.gain > b.gain) {
            best = Some(g);
        }
        kappa += step;
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::validate_povm;
    use crate::trine::{ideal_channel, MeasurementKind};

    #[test]
    fn acc_channel_information() {
        let ch = ideal_channel(MeasurementKind::Acc);
        let mi = mutual_information(&[1.0 / 3.0; 3], &ch).unwrap();
        assert!((mi - (3f64.log2() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn identity_channel_information() {
        let ch = ChannelMatrix::new(
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            vec!["0".into(), "1".into(), "2".into()],
            vec!["0".into(), "1".into(), "2".into()],
        )
        .unwrap();
        let mi = mutual_information(&[1.0 / 3.0; 3], &ch).unwrap();
        assert!((mi - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn srm_channel_information() {
        let ch = ideal_channel(MeasurementKind::Srm);
        let mi = mutual_information(&[1.0 / 3.0; 3], &ch).unwrap();
        assert!((mi - 1.369068422943415).abs() < 1e-12);
        assert!((mi - 1.3690).abs() < 1e-4);
    }

    #[test]
    fn c1_values() {
        assert!((c1_trine() - 0.645421097334730).abs() < 1e-12);
        assert!((c1_trine() - 0.6454).abs() < 1e-4);
        assert!((binary_c1(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(binary_c1(1.0).unwrap().abs() < 1e-15);
        assert!(binary_c1(1.5).is_err());
    }

    #[test]
    fn superadditivity_numbers() {
        let r = superadditivity_report();
        assert!((r.gain - 0.0391).abs() < 5e-4);
        assert!(r.i2_per_letter > r.c1);
        assert!(r.c1 > r.i_acc);
        assert!((r.i2 - 1.369068422943415).abs() < 1e-12);
    }

    #[test]
    fn mi_bounds_and_permutation_invariance() {
        let ch = ideal_channel(MeasurementKind::Srm);
        let mi = mutual_information(&[0.2, 0.5, 0.3], &ch).unwrap();
        assert!(mi >= 0.0 && mi <= 3f64.log2() + 1e-12);
        // Permute output columns.
        let rows: Vec<Vec<f64>> = ch.rows().iter().map(|r| vec![r[2], r[0], r[1]]).collect();
        let perm = ChannelMatrix::new(
            rows,
            ch.input_labels().to_vec(),
            ch.output_labels().to_vec(),
        )
        .unwrap();
        let mi2 = mutual_information(&[0.2, 0.5, 0.3], &perm).unwrap();
        assert!((mi - mi2).abs() < 1e-12);
    }

    #[test]
    fn sweeps_peak_at_zero_and_are_periodic() {
        let grid = default_sweep_grid();
        for kind in [SweepKind::AccPolarization, SweepKind::SrmCollective] {
            let curve = offset_sweep(kind, &grid).unwrap();
            let at_zero = curve.values[grid.len() / 2];
            let max = curve.values.iter().cloned().fold(f64::MIN, f64::max);
            assert!(at_zero >= max - 1e-10, "{kind:?}");
            // Period 2 pi / 3.
            let period = 2.0 * std::f64::consts::PI / 3.0;
            for &off in &[0.1, -0.2, 0.5] {
                let a = offset_sweep(kind, &[off]).unwrap().values[0];
                let b = offset_sweep(kind, &[off + period]).unwrap().values[0];
                assert!((a - b).abs() < 1e-10, "{kind:?}");
            }
        }
        let srm0 = offset_sweep(SweepKind::SrmCollective, &[0.0])
            .unwrap()
            .values[0];
        assert!((srm0 - 1.369068422943415).abs() < 1e-10);
        let acc0 = offset_sweep(SweepKind::AccPolarization, &[0.0])
            .unwrap()
            .values[0];
        assert!((acc0 - 0.5849625007211562).abs() < 1e-10);
    }

    #[test]
    fn optimizer_recovers_trine_optimum() {
        let (povm, bits) = accessible_info_optimize(
            &crate::trine::letter_ensemble(),
            3,
            &OptimizeOpts::default(),
        )
        .unwrap();
        assert!(bits >= 0.5849, "bits = {bits}");
        assert!((bits - 0.5849625).abs() < 5e-4);
        assert!(validate_povm(&povm).pass);
    }

    #[test]
    fn optimizer_orthogonal_binary() {
        let states = vec![
            LabeledState::new("0", CVector::basis(2, 0)),
            LabeledState::new("1", CVector::basis(2, 1)),
        ];
        let (povm, bits) = accessible_info_optimize(
            &Ensemble::uniform(states).unwrap(),
            2,
            &OptimizeOpts::default(),
        )
        .unwrap();
        assert!((bits - 1.0).abs() < 1e-9);
        assert!(validate_povm(&povm).pass);
    }

    #[test]
    fn optimizer_binary_overlap_half() {
        let (letters, _) = (binary_letters(0.5), ());
        let states = vec![
            LabeledState::new("0", letters.0),
            LabeledState::new("1", letters.1),
        ];
        let (_, bits) = accessible_info_optimize(
            &Ensemble::uniform(states).unwrap(),
            3,
            &OptimizeOpts::default(),
        )
        .unwrap();
        assert!((bits - 0.645421097334730).abs() < 5e-4, "bits = {bits}");
    }

    #[test]
    fn optimizer_rejects_bad_outcome_count() {
        assert!(accessible_info_optimize(
            &crate::trine::letter_ensemble(),
            1,
            &OptimizeOpts::default()
        )
        .is_err());
    }

    #[test]
    fn length_three_gain_near_kappa_peak() {
        let g = binary_block_gain(0.855, BlockLength::Three).unwrap();
        assert!((g.gain - 0.0090872).abs() < 2e-4, "gain = {}", g.gain);
    }

    #[test]
    fn small_kappa_gain_nonpositive() {
        let g = binary_block_gain(1e-6, BlockLength::Three).unwrap();
        assert!(g.gain <= 1e-9, "gain = {}", g.gain);
    }
}
