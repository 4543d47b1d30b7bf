use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trinecap::circuits::{acc_circuit, decoder_circuit, decoder_unitary, simulate_gates};
use trinecap::expsim::{calibrate_visibility, reproduce_experiment, ExperimentKind, NoiseModel};
use trinecap::infotheory::{default_sweep_grid, offset_sweep, superadditivity_report, SweepKind};
use trinecap::measurement::validate_povm;
use trinecap::qmath::CVector;
use trinecap::reliability::{codelength_for, qchc_compare, scheme_exponent, Scheme};
use trinecap::trine::{codeword_state, ideal_channel, srm_povm_closed_form, MeasurementKind};

/// Trine-ensemble measurement toolkit: information rates, collective
/// decoding, circuit synthesis, coding bounds, and counting simulations.
#[derive(Parser)]
#[command(name = "trinecap", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write output to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepTarget {
    /// Single letters against the fixed accessible-information measurement.
    Acc,
    /// Code-word pairs against the fixed collective decoder.
    Srm,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitTarget {
    Srm,
    Acc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpKind {
    AccPol,
    AccLoc,
    C1,
    Srm,
}

impl ExpKind {
    fn into_kind(self) -> ExperimentKind {
        match self {
            ExpKind::AccPol => ExperimentKind::AccPol,
            ExpKind::AccLoc => ExperimentKind::AccLoc,
            ExpKind::C1 => ExperimentKind::C1,
            ExpKind::Srm => ExperimentKind::Srm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Classical,
    Qchc,
}

impl SchemeArg {
    fn into_scheme(self) -> Scheme {
        match self {
            SchemeArg::Classical => Scheme::Classical,
            SchemeArg::Qchc => Scheme::Qchc,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Headline rates (I_Acc, C1, I2, I2/2, gain) and the three ideal channels.
    Report {
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Mutual information versus signal offset angle over [-pi/3, pi/3].
    Sweep {
        #[arg(value_enum)]
        kind: SweepTarget,
        /// Number of grid points (at least 2).
        #[arg(long, default_value_t = 121)]
        points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Synthesize a measurement circuit and verify it.
    Circuit {
        #[arg(value_enum)]
        target: CircuitTarget,
        /// Write the listing to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare classical and hybrid coding bounds; optionally solve for n.
    Qchc {
        /// Bit rate(s) k/n per letter (repeatable).
        #[arg(long = "rate", default_values_t = vec![0.1, 0.62])]
        rates: Vec<f64>,
        /// Code length(s) n (repeatable).
        #[arg(long = "n", default_values_t = vec![100u64, 1000, 10000])]
        ns: Vec<u64>,
        /// Solve for the code length reaching this error probability.
        #[arg(long)]
        solve: Option<f64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Simulate a counting experiment; prints result JSON then count CSV.
    Expsim {
        #[arg(value_enum)]
        kind: ExpKind,
        /// Interference visibility in [0,1].
        #[arg(long, default_value_t = 0.99)]
        visibility: f64,
        /// Darkcounts per second per detector.
        #[arg(long, default_value_t = 100.0)]
        dark: f64,
        /// Background counts per second.
        #[arg(long, default_value_t = 300.0)]
        background: f64,
        /// Detector efficiency in (0,1].
        #[arg(long, default_value_t = 0.7)]
        efficiency: f64,
        /// Signal photons per second.
        #[arg(long, default_value_t = 1e6)]
        signal: f64,
        /// RNG seed (default 0).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Calibrate visibility by bisection to hit this model MI (bits),
        /// then run at the calibrated value.
        #[arg(long)]
        calibrate_mi: Option<f64>,
        /// Write count CSV here (with a .json metadata sidecar).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collective-decoder POVM table and pair channel.
    SrmTable {
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Random-coding exponent curve E_r(R) over a rate grid.
    Reliability {
        #[arg(value_enum)]
        scheme: SchemeArg,
        /// Number of grid points (at least 2).
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

fn emit(output: &OutputOpts, text: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn channel_csv(out: &mut String, name: &str, ch: &trinecap::measurement::ChannelMatrix) {
    for x in 0..ch.num_inputs() {
        for y in 0..ch.num_outputs() {
            out.push_str(&format!(
                "{},{},{},{:.12}\n",
                name,
                ch.input_labels()[x],
                ch.output_labels()[y],
                ch.p(x, y)
            ));
        }
    }
}

fn channel_json(ch: &trinecap::measurement::ChannelMatrix) -> serde_json::Value {
    serde_json::json!({
        "inputs": ch.input_labels(),
        "outputs": ch.output_labels(),
        "p": ch.rows(),
    })
}

fn cmd_report(output: &OutputOpts) -> trinecap::Result<String> {
    let rep = superadditivity_report();
    let channels = [
        ("acc", ideal_channel(MeasurementKind::Acc)),
        ("c1", ideal_channel(MeasurementKind::C1)),
        ("srm", ideal_channel(MeasurementKind::Srm)),
    ];
    Ok(match output.format {
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in [
                ("i_acc", rep.i_acc),
                ("c1", rep.c1),
                ("i2", rep.i2),
                ("i2_per_letter", rep.i2_per_letter),
                ("gain", rep.gain),
            ] {
                s.push_str(&format!("{k},{v:.6}\n"));
            }
            s.push_str("channel,input,outcome,p\n");
            for (name, ch) in &channels {
                channel_csv(&mut s, name, ch);
            }
            s
        }
        Format::Json => {
            let mut doc = serde_json::to_value(rep).unwrap();
            let chs: serde_json::Map<String, serde_json::Value> = channels
                .iter()
                .map(|(name, ch)| (name.to_string(), channel_json(ch)))
                .collect();
            doc["channels"] = serde_json::Value::Object(chs);
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    })
}

fn cmd_sweep(kind: SweepTarget, points: usize, output: &OutputOpts) -> trinecap::Result<String> {
    if points < 2 {
        usage_error("--points must be at least 2");
    }
    let grid: Vec<f64> = if points == 121 {
        default_sweep_grid()
    } else {
        let lo = -std::f64::consts::FRAC_PI_3;
        let hi = std::f64::consts::FRAC_PI_3;
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let sweep_kind = match kind {
        SweepTarget::Acc => SweepKind::AccPolarization,
        SweepTarget::Srm => SweepKind::SrmCollective,
    };
    let curve = offset_sweep(sweep_kind, &grid)?;
    Ok(match output.format {
        Format::Csv => {
            let mut s = String::from("phi_off,bits\n");
            for (o, v) in curve.offsets.iter().zip(&curve.values) {
                s.push_str(&format!("{o:.12},{v:.12}\n"));
            }
            s
        }
        Format::Json => format!(
            "{}\n",
            serde_json::json!({
                "phi_off": curve.offsets,
                "bits": curve.values,
            })
        ),
    })
}

fn cmd_circuit(target: CircuitTarget) -> trinecap::Result<String> {
    let mut s = String::new();
    match target {
        CircuitTarget::Srm => {
            let seq = decoder_circuit()?;
            let residual = seq.matrix().max_abs_diff(&decoder_unitary());
            s.push_str("# collective decoder circuit\n");
            s.push_str(&seq.to_text());
            s.push_str(&format!("gate_count: {}\n", seq.len()));
            s.push_str(&format!("reconstruction_residual: {residual:.3e}\n"));
            // Outcome statistics on the three code words.
            let ch = ideal_channel(MeasurementKind::Srm);
            let mut worst = 0.0f64;
            for x in 0..3 {
                let out = simulate_gates(&seq, &codeword_state(x)?.vector)?;
                let probs = [
                    out.amp(0).norm_sqr(),
                    out.amp(1).norm_sqr(),
                    out.amp(3).norm_sqr(),
                ];
                for (y, &p) in probs.iter().enumerate() {
                    worst = worst.max((p - ch.p(x, y)).abs());
                }
                worst = worst.max(out.amp(2).norm_sqr());
            }
            s.push_str(&format!("statistics_residual: {worst:.3e}\n"));
        }
        CircuitTarget::Acc => {
            let circ = acc_circuit()?;
            s.push_str("# accessible-information measurement circuit\n");
            s.push_str(&circ.sequence.to_text());
            s.push_str(&format!("gate_count: {}\n", circ.sequence.len()));
            let ch = ideal_channel(MeasurementKind::Acc);
            let mut worst = 0.0f64;
            for x in 0..3 {
                let phi = 2.0 * std::f64::consts::PI * x as f64 / 3.0;
                let letter = CVector::from_reals(&[(phi / 2.0).cos(), (phi / 2.0).sin()]);
                let psi = trinecap::qmath::tensor(&letter, &CVector::basis(2, 0));
                let out = simulate_gates(&circ.sequence, &psi)?;
                for (r, mapped) in circ.outcome_map.iter().enumerate() {
                    let p = out.amp(r).norm_sqr();
                    match mapped {
                        Some(y) => worst = worst.max((p - ch.p(x, *y)).abs()),
                        None => worst = worst.max(p),
                    }
                }
            }
            s.push_str(&format!("statistics_residual: {worst:.3e}\n"));
            s.push_str(&format!(
                "statistics_check: {}\n",
                if worst < 1e-10 { "pass" } else { "fail" }
            ));
        }
    }
    Ok(s)
}

fn cmd_qchc(
    rates: &[f64],
    ns: &[u64],
    solve: Option<f64>,
    output: &OutputOpts,
) -> trinecap::Result<String> {
    if let Some(pe) = solve {
        if !(0.0 < pe && pe <= 1.0) {
            usage_error("--solve must be in (0, 1]");
        }
        let mut rows = Vec::new();
        for &rate in rates {
            for scheme in [Scheme::Classical, Scheme::Qchc] {
                rows.push((scheme, rate, codelength_for(pe, rate, scheme)?));
            }
        }
        return Ok(match output.format {
            Format::Csv => {
                let mut s = String::from("scheme,k_over_n,n_required\n");
                for (scheme, rate, n) in rows {
                    s.push_str(&format!("{},{rate},{n}\n", scheme.name()));
                }
                s
            }
            Format::Json => {
                let arr: Vec<_> = rows
                    .iter()
                    .map(|(scheme, rate, n)| {
                        serde_json::json!({
                            "scheme": scheme.name(),
                            "k_over_n": rate,
                            "n_required": n,
                        })
                    })
                    .collect();
                format!("{}\n", serde_json::Value::Array(arr))
            }
        });
    }
    let rows = qchc_compare(rates, ns)?;
    Ok(match output.format {
        Format::Csv => {
            let mut s = String::from("scheme,k_over_n,R,n,Er,Pe_bound\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{:.12},{},{:.12},{:.6e}\n",
                    r.scheme.name(),
                    r.k_over_n,
                    r.r,
                    r.n,
                    r.er,
                    r.pe_bound
                ));
            }
            s
        }
        Format::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "scheme": r.scheme.name(),
                        "k_over_n": r.k_over_n,
                        "R": r.r,
                        "n": r.n,
                        "Er": r.er,
                        "Pe_bound": r.pe_bound,
                    })
                })
                .collect();
            format!("{}\n", serde_json::Value::Array(arr))
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_expsim(
    kind: ExpKind,
    nm: NoiseModel,
    seed: u64,
    calibrate_mi: Option<f64>,
    out: &Option<PathBuf>,
) -> trinecap::Result<String> {
    if nm.validate().is_err() {
        usage_error("noise parameters out of range");
    }
    let kind = kind.into_kind();
    let mut nm = nm;
    let mut calibrated = None;
    if let Some(target) = calibrate_mi {
        let v = calibrate_visibility(kind, &nm, target, 0.97, 1.0)?;
        nm.visibility = v;
        calibrated = Some(v);
    }
    let outcome = reproduce_experiment(kind, &nm, seed)?;
    let mut doc = serde_json::json!({
        "experiment": kind.name(),
        "seed": seed,
        "bits": outcome.info.bits,
        "per_letter": outcome.info.per_letter,
        "noise_model": nm,
    });
    if let Some(v) = calibrated {
        doc["calibrated_visibility"] = serde_json::json!(v);
    }
    let json = serde_json::to_string_pretty(&doc).unwrap();
    let csv = outcome.counts.to_csv();
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| {
            trinecap::Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        })?;
        let sidecar = path.with_extension("json");
        std::fs::write(&sidecar, outcome.counts.sidecar_json()).map_err(|e| {
            trinecap::Error::InvalidArgument(format!("cannot write {}: {e}", sidecar.display()))
        })?;
        Ok(format!("{json}\n"))
    } else {
        Ok(format!("{json}\n{csv}"))
    }
}

fn cmd_srm_table(output: &OutputOpts) -> trinecap::Result<String> {
    let povm = srm_povm_closed_form().completed_with_kernel("S");
    let report = validate_povm(&povm);
    let ch = ideal_channel(MeasurementKind::Srm);
    Ok(match output.format {
        Format::Csv => {
            let mut s = String::from("channel,input,outcome,p\n");
            channel_csv(&mut s, "srm", &ch);
            s.push_str(&format!(
                "# completeness_residual {:.3e}\n",
                report.completeness_residual
            ));
            s
        }
        Format::Json => format!(
            "{}\n",
            serde_json::json!({
                "channel": channel_json(&ch),
                "completeness_residual": report.completeness_residual,
                "min_eigenvalue": report.min_eigenvalue,
            })
        ),
    })
}

fn cmd_reliability(
    scheme: SchemeArg,
    points: usize,
    output: &OutputOpts,
) -> trinecap::Result<String> {
    if points < 2 {
        usage_error("--points must be at least 2");
    }
    let scheme = scheme.into_scheme();
    let ceiling = scheme.rate_ceiling();
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let rate = ceiling * (0.01 + 0.98 * i as f64 / (points - 1) as f64);
        let ex = scheme_exponent(rate, scheme)?;
        rows.push((rate, ex));
    }
    Ok(match output.format {
        Format::Csv => {
            let mut s = String::from("scheme,k_over_n,Er,rho_star\n");
            for (rate, ex) in rows {
                s.push_str(&format!(
                    "{},{:.12},{:.12},{}\n",
                    scheme.name(),
                    rate,
                    ex.er,
                    ex.rho_star.map_or("".to_string(), |r| format!("{r:.12}")),
                ));
            }
            s
        }
        Format::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|(rate, ex)| {
                    serde_json::json!({
                        "scheme": scheme.name(),
                        "k_over_n": rate,
                        "Er": ex.er,
                        "rho_star": ex.rho_star,
                    })
                })
                .collect();
            format!("{}\n", serde_json::Value::Array(arr))
        }
    })
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report { output } => cmd_report(output).map(|s| (s, output.out.clone())),
        Command::Sweep {
            kind,
            points,
            output,
        } => cmd_sweep(*kind, *points, output).map(|s| (s, output.out.clone())),
        Command::Circuit { target, out } => cmd_circuit(*target).map(|s| (s, out.clone())),
        Command::Qchc {
            rates,
            ns,
            solve,
            output,
        } => cmd_qchc(rates, ns, *solve, output).map(|s| (s, output.out.clone())),
        Command::Expsim {
            kind,
            visibility,
            dark,
            background,
            efficiency,
            signal,
            seed,
            calibrate_mi,
            out,
        } => {
            let nm = NoiseModel {
                visibility: *visibility,
                dark_rate: *dark,
                background_rate: *background,
                detector_efficiency: *efficiency,
                signal_rate: *signal,
            };
            cmd_expsim(*kind, nm, *seed, *calibrate_mi, out).map(|s| (s, None))
        }
        Command::SrmTable { output } => cmd_srm_table(output).map(|s| (s, output.out.clone())),
        Command::Reliability {
            scheme,
            points,
            output,
        } => cmd_reliability(*scheme, *points, output).map(|s| (s, output.out.clone())),
    };
    match result {
        Ok((text, out)) => {
            let opts = OutputOpts {
                format: Format::Csv,
                out,
            };
            if let Err(e) = emit(&opts, &text) {
                eprintln!("error: {e}");
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
