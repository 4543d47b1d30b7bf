//! Generic POVM machinery: Born-rule channel matrices, the square-root
//! measurement for arbitrary pure-state ensembles, POVM validation,
//! Naimark extension of rank-1 POVMs, and a product-factorization probe
//! for collective measurements.

use num_complex::Complex64;

use crate::qmath::{
    complete_orthonormal_basis, eig_hermitian, psd_inv_sqrt, tensor, CMatrix, CVector,
    DEFAULT_KERNEL_TOL,
};
use crate::trine::LabeledState;
use crate::{Error, Result};

/// A signal set {|psi_x>, P(x)}.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<LabeledState>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<LabeledState>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != priors.len() {
            return Err(Error::InvalidArgument(
                "ensemble needs equally many states and priors".into(),
            ));
        }
        let dim = states[0].vector.dim();
        for s in &states {
            if s.vector.dim() != dim {
                return Err(Error::DimMismatch("ensemble states differ in dim".into()));
            }
            if (s.vector.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "state {} is not normalized",
                    s.label
                )));
            }
        }
        let sum: f64 = priors.iter().sum();
        if priors.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "priors must be a distribution".into(),
            ));
        }
        Ok(Self { states, priors })
    }

    pub fn uniform(states: Vec<LabeledState>) -> Result<Self> {
        let n = states.len();
        Ensemble::new(states, vec![1.0 / n as f64; n])
    }

    pub fn states(&self) -> &[LabeledState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dim(&self) -> usize {
        self.states[0].vector.dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Product ensemble over all ordered pairs of this ensemble's states.
    pub fn product_with(&self, other: &Ensemble) -> Ensemble {
        let mut states = Vec::new();
        let mut priors = Vec::new();
        for (s1, p1) in self.states.iter().zip(&self.priors) {
            for (s2, p2) in other.states.iter().zip(&other.priors) {
                states.push(LabeledState::new(
                    format!("{}{}", s1.label, s2.label),
                    tensor(&s1.vector, &s2.vector),
                ));
                priors.push(p1 * p2);
            }
        }
        Ensemble::new(states, priors).unwrap()
    }

    /// Weighted density operator sum_x P(x) |psi_x><psi_x|.
    pub fn density(&self) -> CMatrix {
        let mut rho = CMatrix::zeros(self.dim());
        for (s, &p) in self.states.iter().zip(&self.priors) {
            rho = rho.add(&CMatrix::outer(&s.vector).scale(Complex64::new(p, 0.0)));
        }
        rho
    }
}

/// A single POVM element: either a weighted rank-1 vector |w><w| (weight
/// folded into the vector norm) or a general PSD operator.
#[derive(Debug, Clone)]
pub enum PovmElement {
    Rank1(CVector),
    Operator(CMatrix),
}

impl PovmElement {
    pub fn dim(&self) -> usize {
        match self {
            PovmElement::Rank1(v) => v.dim(),
            PovmElement::Operator(m) => m.dim(),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match self {
            PovmElement::Rank1(v) => CMatrix::outer(v),
            PovmElement::Operator(m) => m.clone(),
        }
    }

    pub fn rank1_vector(&self) -> Option<&CVector> {
        match self {
            PovmElement::Rank1(v) => Some(v),
            PovmElement::Operator(_) => None,
        }
    }

    /// Born-rule probability <psi| E |psi>.
    pub fn probability(&self, psi: &CVector) -> f64 {
        match self {
            PovmElement::Rank1(v) => v.inner(psi).norm_sqr(),
            PovmElement::Operator(m) => psi.inner(&m.mulvec(psi)).re,
        }
    }
}

/// A labeled positive operator-valued measure.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<PovmElement>,
    labels: Vec<String>,
}

impl Povm {
    pub fn from_vectors(vectors: Vec<CVector>, labels: Vec<String>) -> Self {
        assert_eq!(vectors.len(), labels.len());
        let dim = vectors[0].dim();
        assert!(vectors.iter().all(|v| v.dim() == dim));
        Self {
            dim,
            elements: vectors.into_iter().map(PovmElement::Rank1).collect(),
            labels,
        }
    }

    pub fn from_elements(elements: Vec<PovmElement>, labels: Vec<String>) -> Self {
        assert_eq!(elements.len(), labels.len());
        let dim = elements[0].dim();
        assert!(elements.iter().all(|e| e.dim() == dim));
        Self {
            dim,
            elements,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn completeness_sum(&self) -> CMatrix {
        let mut sum = CMatrix::zeros(self.dim);
        for e in &self.elements {
            sum = sum.add(&e.matrix());
        }
        sum
    }

    /// Append the kernel operator I - sum(E) as an extra labeled outcome if
    /// the elements do not already resolve the identity.
    pub fn completed_with_kernel(mut self, label: impl Into<String>) -> Self {
        let gap = CMatrix::identity(self.dim).sub(&self.completeness_sum());
        if gap.max_abs() > 1e-12 {
            self.elements.push(PovmElement::Operator(gap));
            self.labels.push(label.into());
        }
        self
    }

    /// Tensor product POVM over all ordered element pairs.
    pub fn product_with(&self, other: &Povm) -> Povm {
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for (e1, l1) in self.elements.iter().zip(&self.labels) {
            for (e2, l2) in other.elements.iter().zip(&other.labels) {
                let el = match (e1, e2) {
                    (PovmElement::Rank1(a), PovmElement::Rank1(b)) => {
                        PovmElement::Rank1(tensor(a, b))
                    }
                    _ => PovmElement::Operator(crate::qmath::tensor_matrix(
                        &e1.matrix(),
                        &e2.matrix(),
                    )),
                };
                elements.push(el);
                labels.push(format!("{l1}{l2}"));
            }
        }
        Povm::from_elements(elements, labels)
    }
}

/// Conditional probability table P(y|x).
#[derive(Debug, Clone)]
pub struct ChannelMatrix {
    p: Vec<Vec<f64>>,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
}

impl ChannelMatrix {
    pub fn new(
        p: Vec<Vec<f64>>,
        input_labels: Vec<String>,
        output_labels: Vec<String>,
    ) -> Result<Self> {
        if p.len() != input_labels.len() || p.iter().any(|r| r.len() != output_labels.len()) {
            return Err(Error::DimMismatch("channel table vs labels".into()));
        }
        for row in &p {
            if row.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
                return Err(Error::InvalidArgument("channel entry outside [0,1]".into()));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "channel row sums to {s}, not 1"
                )));
            }
        }
        Ok(Self {
            p,
            input_labels,
            output_labels,
        })
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.p[x][y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.p[x]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn num_inputs(&self) -> usize {
        self.p.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_labels.len()
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }
}

/// Born-rule channel: p[x][y] = Tr(E_y |psi_x><psi_x|).
pub fn born_channel(e: &Ensemble, m: &Povm) -> Result<ChannelMatrix> {
    if e.dim() != m.dim() {
        return Err(Error::DimMismatch(format!(
            "ensemble dim {} vs povm dim {}",
            e.dim(),
            m.dim()
        )));
    }
    let p = e
        .states()
        .iter()
        .map(|s| {
            let mut row: Vec<f64> = m
                .elements()
                .iter()
                .map(|el| el.probability(&s.vector).max(0.0))
                .collect();
            // Clean float dust so rows sum to 1 exactly enough.
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() < 1e-9 {
                for v in &mut row {
                    *v /= sum;
                }
            }
            row
        })
        .collect();
    ChannelMatrix::new(
        p,
        e.states().iter().map(|s| s.label.clone()).collect(),
        m.labels().to_vec(),
    )
}

/// Square-root measurement of an ensemble: elements
/// |mu_y> = rho^(-1/2) sqrt(P(y)) |psi_y> with rho the weighted density.
/// Completeness holds on the span of the states; call
/// `completed_with_kernel` to resolve the full identity.
pub fn sqrt_measurement(e: &Ensemble) -> Result<Povm> {
    let rho = e.density();
    let (vals, _) = eig_hermitian(&rho)?;
    if vals.iter().all(|&l| l <= DEFAULT_KERNEL_TOL) {
        return Err(Error::InvalidArgument(
            "degenerate ensemble: zero density".into(),
        ));
    }
    let inv_sqrt = psd_inv_sqrt(&rho, DEFAULT_KERNEL_TOL)?;
    let mut vectors = Vec::with_capacity(e.len());
    for (s, &p) in e.states().iter().zip(e.priors()) {
        let mu = inv_sqrt
            .mulvec(&s.vector)
            .scale(Complex64::new(p.sqrt(), 0.0));
        vectors.push(mu.phase_normalized(1e-12));
    }
    Ok(Povm::from_vectors(
        vectors,
        e.states().iter().map(|s| s.label.clone()).collect(),
    ))
}

/// POVM validation report.
#[derive(Debug, Clone, Copy)]
pub struct PovmReport {
    pub completeness_residual: f64,
    pub min_eigenvalue: f64,
    pub pass: bool,
}

pub fn validate_povm(m: &Povm) -> PovmReport {
    let residual = m
        .completeness_sum()
        .max_abs_diff(&CMatrix::identity(m.dim()));
    let mut min_eig = f64::INFINITY;
    for e in m.elements() {
        match e {
            PovmElement::Rank1(_) => min_eig = min_eig.min(0.0),
            PovmElement::Operator(op) => {
                if let Ok((vals, _)) = eig_hermitian(op) {
                    if let Some(&l) = vals.last() {
                        min_eig = min_eig.min(l);
                    }
                } else {
                    min_eig = f64::NEG_INFINITY;
                }
            }
        }
    }
    PovmReport {
        completeness_residual: residual,
        min_eigenvalue: min_eig,
        pass: residual <= 1e-10 && min_eig >= -1e-10,
    }
}

/// A Naimark extension: a unitary on system x ancilla whose
/// computational-basis statistics reproduce the POVM.
#[derive(Debug, Clone)]
pub struct NaimarkExtension {
    pub unitary: CMatrix,
    /// Basis outcome index -> POVM element index, or None for outcomes that
    /// never fire on the embedded input space.
    pub outcome_map: Vec<Option<usize>>,
    pub system_dim: usize,
    pub ancilla_dim: usize,
}

/// Extend a rank-1 POVM on dim d to a projective measurement on
/// d * ceil(N/d) dimensions. The input is embedded as |psi> tensor |0>
/// with the system on the high-order factor.
pub fn naimark_extend(m: &Povm) -> Result<NaimarkExtension> {
    let d = m.dim();
    let n = m.len();
    let d_anc = n.div_ceil(d).max(1);
    let big = d * d_anc;
    if n > big {
        return Err(Error::InvalidArgument(format!(
            "{n} outcomes exceed extended dimension {big}"
        )));
    }
    let mut vectors = Vec::with_capacity(n);
    for e in m.elements() {
        match e.rank1_vector() {
            Some(v) => vectors.push(v.clone()),
            None => {
                return Err(Error::InvalidArgument(
                    "naimark_extend requires rank-1 elements".into(),
                ))
            }
        }
    }

    // Column i*d_anc (system basis i, ancilla 0) carries conj(w_y[i]) in row
    // y; these columns are orthonormal because the POVM resolves identity.
    let mut specified = Vec::with_capacity(d);
    for i in 0..d {
        let mut col = CVector::zeros(big);
        for (y, w) in vectors.iter().enumerate() {
            col.set(y, w.amp(i).conj());
        }
        specified.push(col);
    }
    let completion = complete_orthonormal_basis(&specified, big);

    let mut u = CMatrix::zeros(big);
    let mut extra = completion.into_iter();
    for c in 0..big {
        let col = if c % d_anc == 0 {
            specified[c / d_anc].clone()
        } else {
            extra.next().expect("completion exhausted")
        };
        for r in 0..big {
            u.set(r, c, col.amp(r));
        }
    }

    let outcome_map = (0..big)
        .map(|r| if r < n { Some(r) } else { None })
        .collect();
    Ok(NaimarkExtension {
        unitary: u,
        outcome_map,
        system_dim: d,
        ancilla_dim: d_anc,
    })
}

impl NaimarkExtension {
    /// Outcome distribution over the extended basis for a system input.
    pub fn outcome_probabilities(&self, psi: &CVector) -> Vec<f64> {
        let mut emb = CVector::zeros(self.system_dim * self.ancilla_dim);
        for i in 0..self.system_dim {
            emb.set(i * self.ancilla_dim, psi.amp(i));
        }
        let out = self.unitary.mulvec(&emb);
        (0..out.dim()).map(|r| out.amp(r).norm_sqr()).collect()
    }
}

fn simplex_grid(step: f64) -> Vec<[f64; 3]> {
    let n = (1.0 / step).round() as usize;
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (a, b) = (i as f64 * step, j as f64 * step);
            pts.push([a, b, 1.0 - a - b]);
        }
    }
    pts
}

/// Maximum deviation between the joint pair channel of `povm` on the
/// two-letter product ensemble of `letters` and its best product
/// approximation q1(y1|x1) q2(y2|x2).
///
/// `outcome_pairs[k]` assigns POVM element k to a letter-outcome pair;
/// `None` marks null outcomes excluded from the pair table. The product fit
/// starts from the marginal channels and is improved by alternating
/// row-wise minimax search on a simplex grid (coarse step 0.02, one local
/// refinement at 0.002); a brute-force oracle, not an API guarantee.
pub fn factorization_check(
    letters: &Ensemble,
    povm: &Povm,
    outcome_pairs: &[Option<(usize, usize)>],
) -> Result<f64> {
    let l = letters.len();
    if outcome_pairs.len() != povm.len() {
        return Err(Error::DimMismatch("outcome_pairs vs povm elements".into()));
    }
    let e2 = letters.product_with(letters);
    let ch = born_channel(&e2, povm)?;

    // Joint table over inputs (x1,x2) and pairs (y1,y2).
    let mut joint = vec![vec![0.0f64; l * l]; l * l];
    for x in 0..l * l {
        for (k, pair) in outcome_pairs.iter().enumerate() {
            if let Some((y1, y2)) = pair {
                joint[x][y1 * l + y2] += ch.p(x, k);
            }
        }
    }

    let max_dev = |q1: &[Vec<f64>], q2: &[Vec<f64>]| -> f64 {
        let mut d = 0.0f64;
        for x1 in 0..l {
            for x2 in 0..l {
                for y1 in 0..l {
                    for y2 in 0..l {
                        let dev = (joint[x1 * l + x2][y1 * l + y2] - q1[x1][y1] * q2[x2][y2]).abs();
                        d = d.max(dev);
                    }
                }
            }
        }
        d
    };

    // Marginal initialization.
    let marginal = |first: bool| -> Vec<Vec<f64>> {
        let mut q = vec![vec![0.0f64; l]; l];
        for x1 in 0..l {
            for x2 in 0..l {
                for y1 in 0..l {
                    for y2 in 0..l {
                        let x = if first { x1 } else { x2 };
                        let y = if first { y1 } else { y2 };
                        q[x][y] += joint[x1 * l + x2][y1 * l + y2];
                    }
                }
            }
        }
        for row in &mut q {
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                for v in row.iter_mut() {
                    *v /= s;
                }
            }
        }
        q
    };
    let mut q1 = marginal(true);
    let mut q2 = marginal(false);
    if l != 3 {
        return Ok(max_dev(&q1, &q2));
    }

    // Deviation restricted to inputs touching row x of q1 (or q2).
    let row_dev = |q1: &[Vec<f64>], q2: &[Vec<f64>], first: bool, x: usize| -> f64 {
        let mut d = 0.0f64;
        for x1 in 0..l {
            for x2 in 0..l {
                if (if first { x1 } else { x2 }) != x {
                    continue;
                }
                for y1 in 0..l {
                    for y2 in 0..l {
                        let dev = (joint[x1 * l + x2][y1 * l + y2] - q1[x1][y1] * q2[x2][y2]).abs();
                        d = d.max(dev);
                    }
                }
            }
        }
        d
    };

    let coarse = simplex_grid(0.02);
    for _ in 0..6 {
        for first in [true, false] {
            for x in 0..l {
                let mut best = row_dev(&q1, &q2, first, x);
                let mut best_row: Option<Vec<f64>> = None;
                for cand in &coarse {
                    let saved = if first {
                        std::mem::replace(&mut q1[x], cand.to_vec())
                    } else {
                        std::mem::replace(&mut q2[x], cand.to_vec())
                    };
                    let d = row_dev(&q1, &q2, first, x);
                    if first {
                        q1[x] = saved;
                    } else {
                        q2[x] = saved;
                    }
                    if d < best {
                        best = d;
                        best_row = Some(cand.to_vec());
                    }
                }
                if let Some(r) = best_row {
                    if first {
                        q1[x] = r;
                    } else {
                        q2[x] = r;
                    }
                }
            }
        }
    }
    Ok(max_dev(&q1, &q2))
}
