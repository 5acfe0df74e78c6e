//! `qci` — coherent information of quantum channels from the command line.
//!
//! States and channels travel as JSON files (complex numbers as `[re, im]`
//! pairs, matrices as nested row arrays). Exit codes: 0 success, 1 valid but
//! negative result (not saturating), 2 input error, 3 detector failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qci_core::json::{ChannelJson, SaturationReportJson, StateJson};
use qci_core::{
    build_recovery, check_coherent_saturation_with, coherent_info, random_channel, random_density,
    random_saturating_instance, verify_recovery, vn_entropy, CoherentMethod, DensityMatrix,
    KrausChannel, SeededRng, DEFAULT_RECONSTRUCT_TOL, DEFAULT_SATURATION_TOL, DEFAULT_TOL,
};

#[derive(Parser)]
#[command(
    name = "qci",
    version,
    about = "Coherent information of quantum channels: entropies, saturation certificates, recovery maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Purification,
    Complementary,
}

impl From<Method> for CoherentMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Purification => CoherentMethod::Purification,
            Method::Complementary => CoherentMethod::Complementary,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Von Neumann entropy of a state, in bits
    Entropy {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Coherent information of a state through a channel
    CoherentInfo {
        state: PathBuf,
        channel: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Purification)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gap to the entropy bound; emits the factorization certificate when it closes
    CheckSaturation {
        state: PathBuf,
        channel: PathBuf,
        /// Saturation-gap tolerance (default 1e-7, or QCI_TOL)
        #[arg(long)]
        tol: Option<f64>,
        /// Certificate reconstruction tolerance (default 1e-7)
        #[arg(long)]
        reconstruct_tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build the recovery channel for a saturating instance and verify it
    Recover {
        state: PathBuf,
        channel: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        reconstruct_tol: Option<f64>,
        /// Write the recovery channel's Kraus JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write a seeded random (state, channel) pair to state.json / channel.json
    RandomInstance {
        /// System dimension for a generic random instance
        #[arg(long)]
        dim: Option<usize>,
        /// Left factor dimension for a saturating instance
        #[arg(long)]
        dl: Option<usize>,
        /// Right factor dimension for a saturating instance
        #[arg(long)]
        dr: Option<usize>,
        /// Number of Kraus operators of the generic random channel
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generate an instance guaranteed to saturate the bound
        #[arg(long)]
        saturating: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Tabulate (gap, product-output distance, certificate residual) over seeded instances
    GapSurvey {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        saturating: bool,
        #[arg(long)]
        dl: Option<usize>,
        #[arg(long)]
        dr: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qci_core::Error> for CliError {
    fn from(e: qci_core::Error) -> Self {
        let code = match &e {
            qci_core::Error::NotSaturating { .. } => 1,
            qci_core::Error::StructureNotFound { .. } => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(format!("JSON parse error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// --tol beats QCI_TOL beats the default.
fn resolve_tol(flag: Option<f64>, default: f64) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("QCI_TOL") {
            Ok(s) => s
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("QCI_TOL is not a number: {s:?}")))?,
            Err(_) => default,
        },
    };
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: StateJson = serde_json::from_str(&text)?;
    Ok(parsed.to_density(DEFAULT_TOL)?)
}

fn load_channel(path: &Path) -> Result<KrausChannel, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: ChannelJson = serde_json::from_str(&text)?;
    Ok(parsed.to_channel(DEFAULT_TOL)?)
}

fn write_json_file<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Six-decimal text rounding that never shows a negative zero.
fn fmt6(x: f64) -> String {
    let rounded = (x * 1e6).round() / 1e6 + 0.0;
    format!("{rounded:.6}")
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Entropy { state, format } => {
            let rho = load_state(&state)?;
            let s = vn_entropy(&rho);
            match format {
                Format::Text => println!("{}", fmt6(s)),
                Format::Json => println!("{}", serde_json::json!({ "entropy": s })),
            }
            Ok(0)
        }

        Command::CoherentInfo {
            state,
            channel,
            method,
            format,
        } => {
            let rho = load_state(&state)?;
            let phi = load_channel(&channel)?;
            let report = coherent_info(&rho, &phi, method.into())?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(&report)?),
                Format::Text => {
                    println!("s_rho = {}", fmt6(report.s_rho));
                    println!("s_output = {}", fmt6(report.s_output));
                    println!("s_joint_or_exchange = {}", fmt6(report.s_joint_or_exchange));
                    println!("coherent_info = {}", fmt6(report.coherent_info));
                    println!("gap_to_bound = {}", fmt6(report.gap_to_bound));
                }
            }
            Ok(0)
        }

        Command::CheckSaturation {
            state,
            channel,
            tol,
            reconstruct_tol,
            format,
        } => {
            let rho = load_state(&state)?;
            let phi = load_channel(&channel)?;
            let tol = resolve_tol(tol, DEFAULT_SATURATION_TOL)?;
            let rtol = resolve_tol(reconstruct_tol, DEFAULT_RECONSTRUCT_TOL)?;
            let report = check_coherent_saturation_with(&rho, &phi, tol, rtol)?;
            let saturating = report.certificate.is_some();
            match format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string(&SaturationReportJson::from_report(&report))?
                    )
                }
                Format::Text => {
                    println!("gap = {}", fmt6(report.gap));
                    println!("saturating = {saturating}");
                    if let Some(cert) = &report.certificate {
                        println!("d_l = {}", cert.d_l);
                        println!("d_r = {}", cert.d_r);
                        println!("residual = {:.6e}", cert.residual);
                        println!(
                            "product_output_distance = {:.6e}",
                            report.product_output_distance.unwrap_or(f64::NAN)
                        );
                    }
                }
            }
            Ok(if saturating { 0 } else { 1 })
        }

        Command::Recover {
            state,
            channel,
            tol,
            reconstruct_tol,
            out,
            format,
        } => {
            let rho = load_state(&state)?;
            let phi = load_channel(&channel)?;
            let tol = resolve_tol(tol, DEFAULT_SATURATION_TOL)?;
            let rtol = resolve_tol(reconstruct_tol, DEFAULT_RECONSTRUCT_TOL)?;
            let report = check_coherent_saturation_with(&rho, &phi, tol, rtol)?;
            let Some(cert) = &report.certificate else {
                eprintln!(
                    "not saturating: gap = {:.6e} exceeds tol = {tol:.3e}",
                    report.gap
                );
                return Ok(1);
            };
            let dilation = phi.stinespring()?;
            let recovery = build_recovery(&dilation, cert)?;
            let distance = verify_recovery(&rho, &phi, &recovery)?;
            let out_path = match &out {
                Some(path) => {
                    write_json_file(path, &ChannelJson::from_channel(&recovery.kraus))?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "gap": report.gap,
                        "recovery_distance": distance,
                        "kraus_count": recovery.kraus.kraus().len(),
                        "out": out_path,
                    })
                ),
                Format::Text => {
                    println!("gap = {}", fmt6(report.gap));
                    println!("recovery_distance = {distance:.6e}");
                    if let Some(p) = out_path {
                        println!("out = {p}");
                    }
                }
            }
            Ok(0)
        }

        Command::RandomInstance {
            dim,
            dl,
            dr,
            kraus,
            seed,
            saturating,
            out_dir,
        } => {
            let mut rng = SeededRng::new(seed);
            let (rho, phi) = if saturating {
                let (Some(dl), Some(dr)) = (dl, dr) else {
                    return Err(CliError::input("--saturating needs --dl and --dr"));
                };
                if dl == 0 || dr == 0 {
                    return Err(CliError::input("factor dimensions must be positive"));
                }
                random_saturating_instance(dl, dr, &mut rng)?
            } else {
                let dim = match (dim, dl, dr) {
                    (Some(d), _, _) => d,
                    (None, Some(dl), Some(dr)) => dl * dr,
                    _ => return Err(CliError::input("need --dim (or --dl with --dr)")),
                };
                if dim == 0 || kraus == 0 {
                    return Err(CliError::input(
                        "dimensions and Kraus count must be positive",
                    ));
                }
                let phi = random_channel(dim, kraus, &mut rng);
                let rho = random_density(dim, dim, &mut rng)?;
                (rho, phi)
            };
            fs::create_dir_all(&out_dir)?;
            let state_path = out_dir.join("state.json");
            let channel_path = out_dir.join("channel.json");
            write_json_file(&state_path, &StateJson::from_density(&rho))?;
            write_json_file(&channel_path, &ChannelJson::from_channel(&phi))?;
            println!(
                "{}",
                serde_json::json!({
                    "state": state_path.display().to_string(),
                    "channel": channel_path.display().to_string(),
                })
            );
            Ok(0)
        }

        Command::GapSurvey {
            dim,
            kraus,
            count,
            seed,
            saturating,
            dl,
            dr,
            tol,
            format,
        } => {
            let tol = resolve_tol(tol, DEFAULT_SATURATION_TOL)?;
            if saturating {
                if dl.is_none_or(|d| d == 0) || dr.is_none_or(|d| d == 0) {
                    return Err(CliError::input("--saturating needs positive --dl and --dr"));
                }
            } else if dim.is_none_or(|d| d == 0) || kraus == 0 {
                return Err(CliError::input("need positive --dim and --kraus"));
            }

            let mut rows = Vec::with_capacity(count);
            for index in 0..count {
                let mut rng = SeededRng::new(seed.wrapping_add(index as u64));
                let (rho, phi) = if saturating {
                    random_saturating_instance(dl.unwrap(), dr.unwrap(), &mut rng)?
                } else {
                    let d = dim.unwrap();
                    let phi = random_channel(d, kraus, &mut rng);
                    let rho = random_density(d, d, &mut rng)?;
                    (rho, phi)
                };
                let ci = coherent_info(&rho, &phi, CoherentMethod::Complementary)?;
                let gap = ci.gap_to_bound;
                let (product_distance, residual) = if gap <= tol {
                    match check_coherent_saturation_with(&rho, &phi, tol, DEFAULT_RECONSTRUCT_TOL) {
                        Ok(report) => (
                            report.product_output_distance,
                            report.certificate.map(|c| c.residual),
                        ),
                        Err(qci_core::Error::StructureNotFound { residual }) => {
                            (None, Some(residual))
                        }
                        Err(e) => return Err(e.into()),
                    }
                } else {
                    (None, None)
                };
                rows.push((index, gap, product_distance, residual));
            }

            let mut gaps: Vec<f64> = rows.iter().map(|r| r.1).collect();
            gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let min_gap = gaps.first().copied();
            let median_gap = if gaps.is_empty() {
                None
            } else if gaps.len() % 2 == 1 {
                Some(gaps[gaps.len() / 2])
            } else {
                Some(0.5 * (gaps[gaps.len() / 2 - 1] + gaps[gaps.len() / 2]))
            };

            match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(i, gap, prod, res)| {
                            serde_json::json!({
                                "index": i,
                                "gap": gap,
                                "product_output_distance": prod,
                                "certificate_residual": res,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({
                            "rows": rows,
                            "min_gap": min_gap,
                            "median_gap": median_gap,
                        })
                    );
                }
                Format::Text => {
                    println!("index,gap,product_output_distance,certificate_residual");
                    for (i, gap, prod, res) in &rows {
                        let prod = prod.map(|v| v.to_string()).unwrap_or_default();
                        let res = res.map(|v| v.to_string()).unwrap_or_default();
                        println!("{i},{gap},{prod},{res}");
                    }
                    let fmt =
                        |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "none".into());
                    println!("# min_gap={} median_gap={}", fmt(min_gap), fmt(median_gap));
                }
            }
            Ok(0)
        }
    }
}
