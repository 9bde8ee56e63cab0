//! Command-line surface: classification, cusp reports, defect computation,
//! surveys, partial L-sums and representation building.
//!
//! Exit codes: 0 success, 1 usage or input-parse error, 2 domain error
//! (for example a non-Sol monodromy passed to `delta`). Every conceptually
//! exact number in JSON output is a string rational; floats appear only in
//! the explicitly approximate fields.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use cusplab_core::cuspinv::{delta, CuspDatum, DeltaResult, ObstructionVerdict};
use cusplab_core::dedekind::Monodromy;
use cusplab_core::error::CuspError;
use cusplab_core::exactnum::QuadIrr;
use cusplab_core::quadfield::{field_data, squarefree_up_to};
use cusplab_core::solbundle::{
    arithmeticity_report, build_representation, parse_presentation, LatticeModule,
    PresentationData, Representation,
};

#[derive(Parser)]
#[command(
    name = "cusplab",
    version,
    about = "Exact cusp invariants of Sol torus bundles and Hilbert modular surfaces",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a monodromy by geometry and report its arithmetic data
    Classify {
        /// Row-major matrix entries "a,b,c,d" with ad - bc = 1
        #[arg(short = 'm', long = "matrix", value_name = "a,b,c,d")]
        matrix: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Report the standard cusp of Q(sqrt(d))
    Cusp {
        /// Squarefree field label d > 1
        #[arg(short = 'd')]
        d: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Signature defect of a monodromy or of a module datum
    Delta {
        #[arg(short = 'm', long = "matrix", value_name = "a,b,c,d")]
        matrix: Option<String>,
        /// Module basis "mu1;mu2" in (p+q*sqrt(d))/r syntax; needs -d
        #[arg(long, value_name = "mu1;mu2")]
        module: Option<String>,
        #[arg(short = 'd')]
        d: Option<u64>,
        /// Replace the full stabilizer generator by its e-th power
        #[arg(long, default_value_t = 1, value_name = "e")]
        power: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Partial Shimizu L-sum over orbit representatives of bounded norm
    Lsum {
        #[arg(short = 'm', long = "matrix", value_name = "a,b,c,d")]
        matrix: Option<String>,
        #[arg(long, value_name = "mu1;mu2")]
        module: Option<String>,
        #[arg(short = 'd')]
        d: Option<u64>,
        #[arg(long, default_value_t = 1, value_name = "e")]
        power: u32,
        /// Exponent s >= 2 (absolute convergence region)
        #[arg(short = 's', default_value_t = 2)]
        s: i64,
        /// Norm bound of the enumerated orbit representatives
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Build the affine representation of a torus-bundle presentation
    Rep {
        #[arg(short = 'm', long = "matrix", value_name = "a,b,c,d")]
        matrix: Option<String>,
        /// Presentation file (fiber_rank / base_rank / holonomy / rel lines)
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Survey standard cusp reports for all squarefree 2 <= d <= dmax
    Table {
        #[arg(long)]
        dmax: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// One row of the survey; also the payload of `cusp`.
#[derive(Debug, Clone, Serialize)]
pub struct CuspReport {
    pub d: u64,
    pub disc: u64,
    pub fundamental_unit: String,
    pub unit_norm: i32,
    pub tp_generator: String,
    pub class_number: u64,
    pub cusp_count: u64,
    pub delta: String,
    pub delta_integral: bool,
    pub obstruction_verdict: String,
    pub cycle: Vec<String>,
    pub psi: String,
}

impl CuspReport {
    const CSV_HEADER: &'static str = "d,disc,fundamental_unit,unit_norm,tp_generator,\
class_number,cusp_count,delta,delta_integral,obstruction_verdict,cycle,psi";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.d,
            self.disc,
            self.fundamental_unit,
            self.unit_norm,
            self.tp_generator,
            self.class_number,
            self.cusp_count,
            self.delta,
            self.delta_integral,
            self.obstruction_verdict,
            self.cycle.join(";"),
            self.psi
        )
    }
}

/// Builds the standard cusp report of Q(sqrt(d)).
pub fn cusp_report(d: u64) -> Result<CuspReport, CuspError> {
    let fd = field_data(&BigInt::from(d))?;
    let datum = CuspDatum::standard(&fd);
    let result = delta(&datum)?;
    let verdict = if result.integral {
        ObstructionVerdict::Inconclusive
    } else {
        ObstructionVerdict::Obstructed
    };
    let h = fd.h();
    Ok(CuspReport {
        d,
        disc: fd.disc().to_u64().expect("desk-scale discriminant"),
        fundamental_unit: fd.eps0().to_string(),
        unit_norm: fd.eps0_norm(),
        tp_generator: fd.eps_plus().to_string(),
        class_number: h,
        cusp_count: h,
        delta: result.delta.to_string(),
        delta_integral: result.integral,
        obstruction_verdict: verdict.to_string(),
        cycle: result.cycle.iter().map(|b| b.to_string()).collect(),
        psi: result.psi.to_string(),
    })
}

/// Survey rows for all squarefree 2 <= d <= dmax, ascending. Rows are
/// computed in parallel and emitted in order.
pub fn survey(dmax: u64) -> Result<Vec<CuspReport>, CuspError> {
    squarefree_up_to(dmax)
        .into_par_iter()
        .map(cusp_report)
        .collect()
}

#[derive(Debug, Serialize)]
struct DeltaReport {
    delta: String,
    delta_reversed: String,
    psi: String,
    cycle: Vec<String>,
    route_agreement: bool,
    implied_signature: String,
    l_at_1: String,
    l_at_1_approx: f64,
    integral: bool,
    obstruction_verdict: String,
    scope_note: Option<String>,
}

fn delta_report(result: &DeltaResult, scope_note: Option<String>) -> DeltaReport {
    let verdict = if result.integral {
        ObstructionVerdict::Inconclusive
    } else {
        ObstructionVerdict::Obstructed
    };
    DeltaReport {
        delta: result.delta.to_string(),
        delta_reversed: (-result.delta.clone()).to_string(),
        psi: result.psi.to_string(),
        cycle: result.cycle.iter().map(|b| b.to_string()).collect(),
        route_agreement: result.route_agreement,
        implied_signature: result.implied_signature.to_string(),
        l_at_1: result.l_at_1.to_string(),
        l_at_1_approx: result.l_at_1_approx,
        integral: result.integral,
        obstruction_verdict: verdict.to_string(),
        scope_note,
    }
}

#[derive(Debug, Serialize)]
struct LsumReport {
    s: i64,
    bound: u64,
    value: String,
}

/// Runs one invocation. `argv` excludes the program name.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let full = std::iter::once("cusplab".to_string()).chain(argv.iter().cloned());
    let cli = match Cli::try_parse_from(full) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &CuspError) -> i32 {
    match e {
        CuspError::ParseValue(_) | CuspError::PresentationSyntax { .. } => 1,
        _ => 2,
    }
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<(), CuspError> {
    match cli.command {
        Command::Classify { matrix, format } => {
            let m = parse_matrix(&matrix)?;
            let report = arithmeticity_report(&m)?;
            match format {
                Format::Json => emit_json(out, &report),
                Format::Text => {
                    writeln!(out, "geometry: {}", report.geometry).ok();
                    writeln!(out, "trace: {}", report.trace).ok();
                    match report.variety_type {
                        None => {
                            writeln!(out, "type: not-applicable ({})", report.geometry).ok();
                        }
                        Some(vt) => {
                            writeln!(out, "type: {vt}").ok();
                            writeln!(out, "d: {}", report.d.as_ref().unwrap()).ok();
                            writeln!(out, "beta: {}", report.beta.as_ref().unwrap()).ok();
                            writeln!(
                                out,
                                "totally_positive: {}",
                                report.totally_positive.unwrap()
                            )
                            .ok();
                            let module = report.module.as_ref().unwrap();
                            writeln!(out, "module: {} ; {}", module.basis()[0], module.basis()[1])
                                .ok();
                            writeln!(
                                out,
                                "module_index_in_Ok: {}",
                                report.module_index_in_ok.as_ref().unwrap()
                            )
                            .ok();
                            writeln!(out, "unit_exponent: {}", report.unit_exponent.unwrap()).ok();
                        }
                    }
                    Ok(())
                }
                Format::Csv => Err(CuspError::ParseValue(
                    "csv format is only available for cusp and table".into(),
                )),
            }
        }
        Command::Cusp { d, format } => {
            let report = cusp_report(d)?;
            match format {
                Format::Json => emit_json(out, &report),
                Format::Csv => {
                    writeln!(out, "{}", CuspReport::CSV_HEADER).ok();
                    writeln!(out, "{}", report.csv_row()).ok();
                    Ok(())
                }
                Format::Text => {
                    writeln!(out, "d: {}", report.d).ok();
                    writeln!(out, "disc: {}", report.disc).ok();
                    writeln!(out, "fundamental_unit: {}", report.fundamental_unit).ok();
                    writeln!(out, "unit_norm: {}", report.unit_norm).ok();
                    writeln!(out, "tp_generator: {}", report.tp_generator).ok();
                    writeln!(out, "class_number: {}", report.class_number).ok();
                    writeln!(out, "cusp_count: {}", report.cusp_count).ok();
                    writeln!(out, "delta: {}", report.delta).ok();
                    writeln!(out, "delta_integral: {}", report.delta_integral).ok();
                    writeln!(out, "obstruction_verdict: {}", report.obstruction_verdict).ok();
                    writeln!(out, "cycle: ({})", report.cycle.join(",")).ok();
                    writeln!(out, "psi: {}", report.psi).ok();
                    Ok(())
                }
            }
        }
        Command::Delta {
            matrix,
            module,
            d,
            power,
            format,
        } => {
            let (datum, scope_note) = datum_from_flags(matrix, module, d, power)?;
            let result = delta(&datum)?;
            let report = delta_report(&result, scope_note);
            match format {
                Format::Json => emit_json(out, &report),
                Format::Text => {
                    writeln!(out, "delta: {}", report.delta).ok();
                    writeln!(out, "delta_reversed: {}", report.delta_reversed).ok();
                    writeln!(out, "psi: {}", report.psi).ok();
                    writeln!(out, "cycle: ({})", report.cycle.join(",")).ok();
                    writeln!(out, "route_agreement: {}", report.route_agreement).ok();
                    writeln!(out, "implied_signature: {}", report.implied_signature).ok();
                    writeln!(
                        out,
                        "l_at_1: {} * pi^2 = {:.5}",
                        report.l_at_1, report.l_at_1_approx
                    )
                    .ok();
                    writeln!(out, "integral: {}", report.integral).ok();
                    writeln!(out, "obstruction_verdict: {}", report.obstruction_verdict).ok();
                    if let Some(note) = &report.scope_note {
                        writeln!(out, "scope_note: {note}").ok();
                    }
                    Ok(())
                }
                Format::Csv => Err(CuspError::ParseValue(
                    "csv format is only available for cusp and table".into(),
                )),
            }
        }
        Command::Lsum {
            matrix,
            module,
            d,
            power,
            s,
            bound,
            format,
        } => {
            let (datum, _) = datum_from_flags(matrix, module, d, power)?;
            let value = cusplab_core::cuspinv::l_series_partial(&datum, s, bound)?;
            let report = LsumReport {
                s,
                bound,
                value: value.to_string(),
            };
            match format {
                Format::Json => emit_json(out, &report),
                Format::Text => {
                    writeln!(out, "value: {}", report.value).ok();
                    Ok(())
                }
                Format::Csv => Err(CuspError::ParseValue(
                    "csv format is only available for cusp and table".into(),
                )),
            }
        }
        Command::Rep {
            matrix,
            file,
            format,
        } => {
            let pres = presentation_from_flags(matrix, file)?;
            let rep = build_representation(&pres)?;
            match format {
                Format::Json => emit_json(out, &rep),
                Format::Text => {
                    render_representation(out, &rep);
                    Ok(())
                }
                Format::Csv => Err(CuspError::ParseValue(
                    "csv format is only available for cusp and table".into(),
                )),
            }
        }
        Command::Table { dmax, format } => {
            if dmax < 2 {
                return Err(CuspError::ParseValue("--dmax must be at least 2".into()));
            }
            let rows = survey(dmax)?;
            match format {
                Format::Json => emit_json(out, &rows),
                Format::Csv => {
                    writeln!(out, "{}", CuspReport::CSV_HEADER).ok();
                    for row in &rows {
                        writeln!(out, "{}", row.csv_row()).ok();
                    }
                    Ok(())
                }
                Format::Text => {
                    let header = format!(
                        "{:>5} {:>5} {:>3} {:>8} {:>7} {:>12} {:>8}  eps0",
                        "d", "disc", "h", "delta", "verdict", "cycle", "psi"
                    );
                    writeln!(out, "{header}").ok();
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>5} {:>5} {:>3} {:>8} {:>7} {:>12} {:>8}  {}",
                            r.d,
                            r.disc,
                            r.class_number,
                            r.delta,
                            if r.delta_integral { "-" } else { "OBSTR" },
                            format!("({})", r.cycle.join(",")),
                            r.psi,
                            r.fundamental_unit
                        )
                        .ok();
                    }
                    Ok(())
                }
            }
        }
    }
}

fn emit_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<(), CuspError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CuspError::ParseValue(format!("json encoding failed: {e}")))?;
    writeln!(out, "{text}").ok();
    Ok(())
}

fn render_representation<W: Write>(out: &mut W, rep: &Representation) {
    writeln!(out, "target: {}", rep.target).ok();
    writeln!(out, "d: {}", rep.d).ok();
    writeln!(out, "fiber_index: {}", rep.fiber_index).ok();
    for (j, alpha) in rep.alpha.iter().enumerate() {
        writeln!(out, "x{} -> ({}, 1)", j + 1, alpha).ok();
    }
    for (k, (gamma, beta)) in rep.gamma.iter().zip(&rep.beta).enumerate() {
        writeln!(out, "y{} -> ({}, {})", k + 1, gamma, beta).ok();
    }
}

/// Parses "a,b,c,d" row-major into a monodromy.
pub fn parse_matrix(text: &str) -> Result<Monodromy, CuspError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CuspError::ParseValue(format!(
            "expected four comma-separated integers, got {text:?}"
        )));
    }
    let mut nums = Vec::with_capacity(4);
    for p in parts {
        nums.push(
            p.parse::<BigInt>()
                .map_err(|_| CuspError::ParseValue(format!("bad integer {p:?}")))?,
        );
    }
    Monodromy::new(
        nums[0].clone(),
        nums[1].clone(),
        nums[2].clone(),
        nums[3].clone(),
    )
}

/// Parses "mu1;mu2" with QuadIrr syntax over Q(sqrt(d)).
pub fn parse_module(text: &str, d: u64) -> Result<LatticeModule, CuspError> {
    let d = BigInt::from(d);
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CuspError::ParseValue(format!(
            "expected two basis entries separated by ';', got {text:?}"
        )));
    }
    let mu1 = QuadIrr::parse(parts[0], Some(&d))?;
    let mu2 = QuadIrr::parse(parts[1], Some(&d))?;
    LatticeModule::new(mu1, mu2)
}

fn datum_from_flags(
    matrix: Option<String>,
    module: Option<String>,
    d: Option<u64>,
    power: u32,
) -> Result<(CuspDatum, Option<String>), CuspError> {
    if power == 0 {
        return Err(CuspError::ParseValue("--power must be at least 1".into()));
    }
    let (datum, note) = match (matrix, module) {
        (Some(m), None) => {
            let mono = parse_matrix(&m)?;
            let note = if mono.trace() < BigInt::from(0) {
                Some("standard-case theorem only".to_string())
            } else {
                None
            };
            (CuspDatum::from_monodromy(&mono)?, note)
        }
        (None, Some(text)) => {
            let d = d.ok_or_else(|| {
                CuspError::ParseValue("--module requires the field label -d".into())
            })?;
            let module = parse_module(&text, d)?;
            let (eps_m, _) = cusplab_core::solbundle::stabilizer_unit(&module)?;
            (CuspDatum::new(module, eps_m)?, None)
        }
        _ => {
            return Err(CuspError::ParseValue(
                "provide exactly one of --matrix or --module".into(),
            ));
        }
    };
    if power > 1 {
        Ok((datum.with_power(power)?, note))
    } else {
        Ok((datum, note))
    }
}

fn presentation_from_flags(
    matrix: Option<String>,
    file: Option<PathBuf>,
) -> Result<PresentationData, CuspError> {
    match (matrix, file) {
        (Some(m), None) => {
            let mono = parse_matrix(&m)?;
            let (a, b, c, d) = mono.entries();
            let text = format!("fiber_rank 2\nbase_rank 1\nholonomy y1 {a} {b} {c} {d}\n");
            parse_presentation(&text)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CuspError::ParseValue(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_presentation(&text)
        }
        _ => Err(CuspError::ParseValue(
            "provide exactly one of --matrix or --file".into(),
        )),
    }
}

/// Round trip named in the output contract: classify + delta on the standard
/// O_k action matrix agree with the cusp report.
pub fn standard_action_matrix(d: u64) -> Result<Monodromy, CuspError> {
    let fd = field_data(&BigInt::from(d))?;
    let ok = LatticeModule::ring_of_integers(&fd);
    ok.multiplication_monodromy(fd.eps_plus())
}
