//! Gallager reliability-function lower bounds E_r(R), in generic and
//! closed form, with decoding-error bounds, code-length solving, the
//! quantum-classical hybrid coding comparison, and effective transmission
//! speed.

use crate::infotheory::{binary_entropy, mutual_information};
use crate::measurement::ChannelMatrix;
use crate::trine::TrineConstants;
use crate::{Error, Result};

/// Coding scheme for the trine alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Single-letter measurement + classical coding over the trine BSC.
    Classical,
    /// Pairwise collective decoding + classical outer code.
    Qchc,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Classical => "classical",
            Scheme::Qchc => "qchc",
        }
    }

    /// Largest admissible k/n.
    pub fn rate_ceiling(self) -> f64 {
        match self {
            Scheme::Classical => crate::infotheory::c1_trine(),
            Scheme::Qchc => i2_exact() / 3f64.log2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    BelowR0,
    AboveR0,
}

/// An evaluated error exponent.
#[derive(Debug, Clone, Copy)]
pub struct ExponentResult {
    pub er: f64,
    /// Optimizing rho in (0,1]; None in the low-rate regime where the
    /// maximum sits at rho = 1.
    pub rho_star: Option<f64>,
    pub regime: Regime,
    /// Set when the requested rate is at or above the channel's
    /// mutual-information ceiling (er is 0 there).
    pub above_ceiling: bool,
}

/// Prior handling for the generic optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorChoice {
    Uniform,
    /// Coarse simplex-grid search over input priors (|X| <= 3).
    Optimize,
}

fn i2_exact() -> f64 {
    let k = TrineConstants::new();
    let diag = k.cos_half_gamma().powi(2);
    let off = 0.5 * k.sin_half_gamma().powi(2);
    3f64.log2() + diag * diag.log2() + 2.0 * off * off.log2()
}

/// Gallager function E_0(rho, P) = -log2 sum_y (sum_x P(x) P(y|x)^(1/(1+rho)))^(1+rho).
pub fn e0(rho: f64, priors: &[f64], ch: &ChannelMatrix) -> Result<f64> {
    if !(0.0 < rho && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("rho {rho} outside (0,1]")));
    }
    if priors.len() != ch.num_inputs() {
        return Err(Error::DimMismatch("priors vs channel inputs".into()));
    }
    let u = 1.0 / (1.0 + rho);
    let mut sum = 0.0;
    for y in 0..ch.num_outputs() {
        let inner: f64 = priors
            .iter()
            .enumerate()
            .map(|(x, &p)| p * ch.p(x, y).powf(u))
            .sum();
        sum += inner.powf(1.0 + rho);
    }
    Ok(-sum.log2())
}

fn golden_max(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
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
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Random-coding exponent E_r(R) = max_{rho in (0,1]} [E_0(rho) - rho R],
/// maximized by golden section; symmetric channels are optimal at uniform
/// priors, `PriorChoice::Optimize` adds a coarse prior grid search.
pub fn er_general(r: f64, ch: &ChannelMatrix, priors: PriorChoice) -> Result<ExponentResult> {
    if r < 0.0 {
        return Err(Error::InvalidArgument(format!("negative rate {r}")));
    }
    let nx = ch.num_inputs();
    let uniform = vec![1.0 / nx as f64; nx];

    let prior_sets: Vec<Vec<f64>> = match priors {
        PriorChoice::Uniform => vec![uniform.clone()],
        PriorChoice::Optimize => {
            let mut sets = vec![uniform.clone()];
            if nx == 2 {
                let mut a = 0.02;
                while a < 1.0 {
                    sets.push(vec![a, 1.0 - a]);
                    a += 0.02;
                }
            } else if nx == 3 {
                let step = 0.05;
                let mut a = step;
                while a < 1.0 {
                    let mut b = step;
                    while a + b < 1.0 {
                        sets.push(vec![a, b, 1.0 - a - b]);
                        b += step;
                    }
                    a += step;
                }
            }
            sets
        }
    };

    let ceiling = prior_sets
        .iter()
        .map(|p| mutual_information(p, ch).unwrap_or(0.0))
        .fold(0.0, f64::max);
    if r >= ceiling - 1e-12 {
        return Ok(ExponentResult {
            er: 0.0,
            rho_star: None,
            regime: Regime::AboveR0,
            above_ceiling: true,
        });
    }

    let mut best_er = 0.0f64;
    let mut best_rho = None;
    for pri in &prior_sets {
        let f = |rho: f64| e0(rho, pri, ch).unwrap_or(f64::NEG_INFINITY) - rho * r;
        let (x, fx) = golden_max(1e-9, 1.0, f);
        let f1 = f(1.0);
        let (er, rho) = if f1 >= fx { (f1, 1.0) } else { (fx, x) };
        if er > best_er {
            best_er = er;
            best_rho = Some(rho);
        }
    }
    let rho = best_rho.unwrap_or(1.0);
    let low_rate = rho > 1.0 - 1e-6;
    Ok(ExponentResult {
        er: best_er.max(0.0),
        rho_star: if low_rate { None } else { Some(rho) },
        regime: if low_rate {
            Regime::BelowR0
        } else {
            Regime::AboveR0
        },
        above_ceiling: false,
    })
}

fn eps_tilted(eps: f64, rho: f64) -> f64 {
    let u = 1.0 / (1.0 + rho);
    let a = eps.powf(u);
    a / (a + (1.0 - eps).powf(u))
}

/// Closed-form E_r(R) for the binary symmetric channel BSC(eps).
///
/// Below the cutoff rate R_0 = 1 - H(eps_1) the exponent is
/// 1 - 2 log2(sqrt(eps) + sqrt(1-eps)) - R; above it, KL(eps_rho || eps)
/// with eps_rho solving R = 1 - H(eps_rho).
pub fn er_bsc_closed(r: f64, eps: f64) -> Result<ExponentResult> {
    if !(0.0 < eps && eps < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "eps {eps} outside (0, 1/2)"
        )));
    }
    let capacity = 1.0 - binary_entropy(eps);
    if !(0.0..capacity).contains(&r) {
        return Err(Error::RateAboveCeiling {
            rate: r,
            ceiling: capacity,
        });
    }
    let r0 = 1.0 - binary_entropy(eps_tilted(eps, 1.0));
    if r < r0 {
        let er = 1.0 - 2.0 * (eps.sqrt() + (1.0 - eps).sqrt()).log2() - r;
        return Ok(ExponentResult {
            er,
            rho_star: None,
            regime: Regime::BelowR0,
            above_ceiling: false,
        });
    }
    // Bisect on eps_rho in [eps, eps_1]: R = 1 - H(eps_rho) is decreasing
    // in eps_rho.
    let (mut lo, mut hi) = (eps, eps_tilted(eps, 1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - binary_entropy(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let e = 0.5 * (lo + hi);
    let er = e * (e / eps).log2() + (1.0 - e) * ((1.0 - e) / (1.0 - eps)).log2();
    // Recover rho from the tilt: eps_rho/(1-eps_rho) = (eps/(1-eps))^(1/(1+rho)).
    let u = (e / (1.0 - e)).ln() / (eps / (1.0 - eps)).ln();
    Ok(ExponentResult {
        er,
        rho_star: Some((1.0 / u - 1.0).clamp(0.0, 1.0)),
        regime: Regime::AboveR0,
        above_ceiling: false,
    })
}

fn gamma_tilted(rho: f64) -> f64 {
    let k = TrineConstants::new();
    let s2 = k.sin_half_gamma().powi(2);
    let c2 = k.cos_half_gamma().powi(2);
    let u = 1.0 / (1.0 + rho);
    let num = s2.powf(u);
    num / (0.5 * (2.0 * c2).powf(u) + num)
}

/// Closed-form E_r(R) for the ternary symmetric channel of the pairwise
/// collective decoder. The low-rate branch includes the -R term required
/// for consistency with the E_0 definition.
pub fn er_ternary_closed(r: f64) -> Result<ExponentResult> {
    let k = TrineConstants::new();
    let s2 = k.sin_half_gamma().powi(2);
    let c2 = k.cos_half_gamma().powi(2);
    let capacity = i2_exact();
    if !(0.0..capacity).contains(&r) {
        return Err(Error::RateAboveCeiling {
            rate: r,
            ceiling: capacity,
        });
    }
    let g1 = gamma_tilted(1.0);
    let r0 = 3f64.log2() - g1 - binary_entropy(g1);
    if r < r0 {
        let er =
            3f64.log2() - 2.0 * (k.cos_half_gamma() + 2f64.sqrt() * k.sin_half_gamma()).log2() - r;
        return Ok(ExponentResult {
            er,
            rho_star: None,
            regime: Regime::BelowR0,
            above_ceiling: false,
        });
    }
    // Bisect Gamma in [s2, Gamma_1]: R = log2 3 - Gamma - H(Gamma) is
    // decreasing in Gamma on this interval.
    let (mut lo, mut hi) = (s2, g1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 3f64.log2() - mid - binary_entropy(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let g = 0.5 * (lo + hi);
    let er = g * (g / s2).log2() + (1.0 - g) * ((1.0 - g) / c2).log2();
    // Gamma/(1-Gamma) = 2 (s2/(2 c2))^u.
    let u = (g / (2.0 * (1.0 - g))).ln() / (s2 / (2.0 * c2)).ln();
    Ok(ExponentResult {
        er,
        rho_star: Some((1.0 / u - 1.0).clamp(0.0, 1.0)),
        regime: Regime::AboveR0,
        above_ceiling: false,
    })
}

/// Closed-form exponent for a scheme at bit rate k/n per letter; QCHC
/// rates are converted to the collective-channel scale R = (k/n) log2 3.
pub fn scheme_exponent(k_over_n: f64, scheme: Scheme) -> Result<ExponentResult> {
    let ceiling = scheme.rate_ceiling();
    if k_over_n >= ceiling {
        return Err(Error::RateAboveCeiling {
            rate: k_over_n,
            ceiling,
        });
    }
    match scheme {
        Scheme::Classical => er_bsc_closed(k_over_n, TrineConstants::new().epsilon),
        Scheme::Qchc => er_ternary_closed(k_over_n * 3f64.log2()),
    }
}

/// Random-coding bound on the decoding error probability:
/// classical 2^(-n Er^C(k/n)); QCHC 2^(-(n/2) Er^QC((k/n) log2 3)).
pub fn error_bound(n: u64, k_over_n: f64, scheme: Scheme) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if scheme == Scheme::Qchc && !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "qchc needs even n, got {n}"
        )));
    }
    let er = scheme_exponent(k_over_n, scheme)?.er;
    let blocks = match scheme {
        Scheme::Classical => n as f64,
        Scheme::Qchc => n as f64 / 2.0,
    };
    Ok((-blocks * er).exp2())
}

/// Smallest code length meeting a target error probability (even for QCHC).
pub fn codelength_for(target_pe: f64, k_over_n: f64, scheme: Scheme) -> Result<u64> {
    if !(0.0 < target_pe && target_pe <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target_pe {target_pe} outside (0,1]"
        )));
    }
    let er = scheme_exponent(k_over_n, scheme)?.er;
    let needed = -target_pe.log2() / er;
    Ok(match scheme {
        Scheme::Classical => (needed.ceil() as u64).max(1),
        Scheme::Qchc => (2.0 * needed.ceil()) as u64 + if needed <= 0.0 { 2 } else { 0 },
    })
}

/// One row of the QCHC-versus-classical comparison table.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub scheme: Scheme,
    pub k_over_n: f64,
    pub r: f64,
    pub n: u64,
    pub er: f64,
    pub pe_bound: f64,
}

/// Error-bound table across rates and code lengths for both schemes;
/// odd lengths are skipped for QCHC.
pub fn qchc_compare(rates: &[f64], ns: &[u64]) -> Result<Vec<CompareRow>> {
    let mut rows = Vec::new();
    for &k_over_n in rates {
        for scheme in [Scheme::Classical, Scheme::Qchc] {
            let ex = scheme_exponent(k_over_n, scheme)?;
            let r = match scheme {
                Scheme::Classical => k_over_n,
                Scheme::Qchc => k_over_n * 3f64.log2(),
            };
            for &n in ns {
                if scheme == Scheme::Qchc && n % 2 != 0 {
                    continue;
                }
                rows.push(CompareRow {
                    scheme,
                    k_over_n,
                    r,
                    n,
                    er: ex.er,
                    pe_bound: error_bound(n, k_over_n, scheme)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Effective transmission speed R n / (chi(n) tau0) with decoding cost
/// chi(n) = (n log2 n)^2 (unit constant: meaningful as ratios only).
pub fn effective_rate(r: f64, n: u64, tau0: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if tau0 <= 0.0 {
        return Err(Error::InvalidArgument("tau0 must be positive".into()));
    }
    let nf = n as f64;
    let chi = (nf * nf.log2()).powi(2);
    Ok(r * nf / (chi * tau0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trine::{ideal_channel, MeasurementKind};

    fn bsc(eps: f64) -> ChannelMatrix {
        ChannelMatrix::new(
            vec![vec![1.0 - eps, eps], vec![eps, 1.0 - eps]],
            vec!["0".into(), "1".into()],
            vec!["0".into(), "1".into()],
        )
        .unwrap()
    }

    #[test]
    fn e0_reference_points() {
        let noiseless = ChannelMatrix::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec!["0".into(), "1".into()],
            vec!["0".into(), "1".into()],
        )
        .unwrap();
        assert!((e0(1.0, &[0.5, 0.5], &noiseless).unwrap() - 1.0).abs() < 1e-12);
        assert!(e0(0.7, &[0.5, 0.5], &bsc(0.5)).unwrap().abs() < 1e-12);
        let eps = TrineConstants::new().epsilon;
        let want = 1.0 - 2.0 * (eps.sqrt() + (1.0 - eps).sqrt()).log2();
        assert!((e0(1.0, &[0.5, 0.5], &bsc(eps)).unwrap() - want).abs() < 1e-12);
        assert!((want - 0.41504).abs() < 1e-5);
        assert!(e0(0.0, &[0.5, 0.5], &bsc(eps)).is_err());
    }

    #[test]
    fn bsc_closed_form_values() {
        let eps = TrineConstants::new().epsilon;
        let low = er_bsc_closed(0.1, eps).unwrap();
        assert!((low.er - 0.3150375).abs() < 1e-6, "er = {}", low.er);
        assert_eq!(low.regime, Regime::BelowR0);
        assert!(low.rho_star.is_none());
        let high = er_bsc_closed(0.62, eps).unwrap();
        assert!((high.er - 5.218147e-4).abs() < 1e-8, "er = {}", high.er);
        assert_eq!(high.regime, Regime::AboveR0);
        assert!(high.rho_star.unwrap() > 0.0 && high.rho_star.unwrap() < 1.0);
        let zero = er_bsc_closed(0.0, eps).unwrap();
        let cutoff = 1.0 - 2.0 * (eps.sqrt() + (1.0 - eps).sqrt()).log2();
        assert!((zero.er - cutoff).abs() < 1e-12);
        assert!(er_bsc_closed(0.99, eps).is_err());
    }

    #[test]
    fn ternary_closed_form_values() {
        let a = er_ternary_closed(0.15850).unwrap();
        assert!((a.er - 0.8415).abs() < 1e-4, "er = {}", a.er);
        let b = er_ternary_closed(0.98268).unwrap();
        assert!((b.er - 0.09753).abs() < 1e-5, "er = {}", b.er);
        let zero = er_ternary_closed(0.0).unwrap();
        assert!((zero.er - 1.0).abs() < 1e-12, "er = {}", zero.er);
        assert!(er_ternary_closed(1.37).is_err());
    }

    #[test]
    fn generic_matches_closed_forms() {
        let eps = TrineConstants::new().epsilon;
        let ch = bsc(eps);
        for i in 0..20 {
            let r = 0.644 * i as f64 / 19.0;
            let gen = er_general(r, &ch, PriorChoice::Uniform).unwrap();
            let closed = er_bsc_closed(r, eps).unwrap();
            assert!((gen.er - closed.er).abs() < 1e-8, "r = {r}");
        }
        let tch = ideal_channel(MeasurementKind::Srm);
        for i in 0..20 {
            let r = 1.3689 * i as f64 / 19.0;
            let gen = er_general(r, &tch, PriorChoice::Uniform).unwrap();
            let closed = er_ternary_closed(r).unwrap();
            assert!((gen.er - closed.er).abs() < 1e-8, "r = {r}");
        }
    }

    #[test]
    fn generic_at_capacity_is_zero() {
        let eps = TrineConstants::new().epsilon;
        let ch = bsc(eps);
        let cap = 1.0 - binary_entropy(eps);
        let res = er_general(cap, &ch, PriorChoice::Uniform).unwrap();
        assert!(res.er < 1e-6);
        assert!(res.above_ceiling);
    }

    #[test]
    fn prior_optimization_agrees_on_symmetric_channel() {
        let eps = TrineConstants::new().epsilon;
        let ch = bsc(eps);
        let a = er_general(0.3, &ch, PriorChoice::Uniform).unwrap();
        let b = er_general(0.3, &ch, PriorChoice::Optimize).unwrap();
        assert!((a.er - b.er).abs() < 1e-9);
    }

    #[test]
    fn monotone_and_continuous_at_r0() {
        let eps = TrineConstants::new().epsilon;
        let r0 = 1.0 - binary_entropy(eps_tilted(eps, 1.0));
        assert!((r0 - 0.2559924).abs() < 1e-6);
        let below = er_bsc_closed(r0 - 1e-9, eps).unwrap().er;
        let above = er_bsc_closed(r0 + 1e-9, eps).unwrap().er;
        assert!((below - above).abs() < 1e-7);
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let r = 0.644 * i as f64 / 49.0;
            let er = er_bsc_closed(r, eps).unwrap().er;
            assert!(er <= last + 1e-12);
            last = er;
        }
        let g1 = gamma_tilted(1.0);
        let r0t = 3f64.log2() - g1 - binary_entropy(g1);
        assert!((r0t - 0.6773498).abs() < 1e-6);
        let below = er_ternary_closed(r0t - 1e-9).unwrap().er;
        let above = er_ternary_closed(r0t + 1e-9).unwrap().er;
        assert!((below - above).abs() < 1e-7);
    }

    #[test]
    fn reference_code_lengths() {
        assert_eq!(codelength_for(1e-9, 0.62, Scheme::Qchc).unwrap(), 614);
        let nc = codelength_for(1e-9, 0.62, Scheme::Classical).unwrap();
        assert!((57200..=57400).contains(&nc), "n = {nc}");
        assert_eq!(codelength_for(1.0, 0.62, Scheme::Classical).unwrap(), 1);
        assert_eq!(codelength_for(1.0, 0.62, Scheme::Qchc).unwrap(), 2);
        assert!(codelength_for(1e-9, 0.9, Scheme::Classical).is_err());
    }

    #[test]
    fn error_bounds() {
        let qc = error_bound(614, 0.62, Scheme::Qchc).unwrap();
        assert!(qc <= 1e-9, "pe = {qc}");
        let cl = error_bound(57300, 0.62, Scheme::Classical).unwrap();
        assert!(cl < 1.05e-9 && cl > 1e-10, "pe = {cl}");
        assert!(error_bound(2, 0.1, Scheme::Qchc).unwrap() < 1.0);
        assert!(error_bound(613, 0.62, Scheme::Qchc).is_err());
        // Monotone decreasing in n.
        let mut last = 1.0f64;
        for n in [10, 100, 1000, 10000] {
            let b = error_bound(n, 0.3, Scheme::Classical).unwrap();
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn compare_table_anchors() {
        let rows = qchc_compare(&[0.1, 0.62], &[100, 10000]).unwrap();
        // QCHC beats classical at equal (rate, n) for the reference rates:
        // compare exponents to dodge underflow at large n.
        for &k in &[0.1, 0.62] {
            let get = |s: Scheme| {
                rows.iter()
                    .find(|r| r.scheme == s && r.k_over_n == k)
                    .unwrap()
                    .er
            };
            assert!(get(Scheme::Qchc) / 2.0 > get(Scheme::Classical));
            let pe = |s: Scheme| {
                rows.iter()
                    .find(|r| r.scheme == s && r.k_over_n == k && r.n == 100)
                    .unwrap()
                    .pe_bound
            };
            assert!(pe(Scheme::Qchc) < pe(Scheme::Classical));
        }
        let cl = rows
            .iter()
            .find(|r| r.scheme == Scheme::Classical && r.k_over_n == 0.62 && r.n == 10000)
            .unwrap();
        assert!((cl.pe_bound - 0.027).abs() < 0.003, "pe = {}", cl.pe_bound);
    }

    #[test]
    fn effective_rate_behavior() {
        let base = effective_rate(0.62, 600, 1.0).unwrap();
        let long = effective_rate(0.62, 57300, 1.0).unwrap();
        let ratio = base / long;
        assert!((ratio - 280.14).abs() < 0.5, "ratio = {ratio}");
        let halved = effective_rate(0.62, 600, 2.0).unwrap();
        assert!((halved - base / 2.0).abs() < 1e-15);
        assert!(effective_rate(0.0, 600, 1.0).unwrap() == 0.0);
        assert!(effective_rate(0.5, 1, 1.0).is_err());
        assert!(effective_rate(0.5, 10, 0.0).is_err());
    }
}
