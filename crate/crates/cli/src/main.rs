//! `wcurve`: command-line front end for wcurve-core.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wcurve::classnum::{class_number, reduced_forms, weighted_class_number};
use wcurve::cusps::{cusp_count_wd, cusp_split, one_cylinder_count, pd_components, y0_cusp_count};
use wcurve::eulerchar::chi_record;
use wcurve::modular::{
    fd_factors, fd_minimal_factor, fd_polynomial, BigComplexCtx, FdForm, RationalPoly,
};
use wcurve::prototypes::{
    enumerate_prototypes, enumerate_prototypes_all, orbifold_signature, spin_of_prototype,
};
use wcurve::rational::{self, Q};
use wcurve::reference::{ReferenceTables, TABLES_ENV};
use wcurve::topology::{
    check_bounds, compute_invariants, compute_invariants_with, genus_zero_components,
    invariants_range, verify_reference_tables, ComponentInvariants,
};
use wcurve::{Discriminant, Error};

#[derive(Parser)]
#[command(
    name = "wcurve",
    version,
    about = "Invariants of Weierstrass curves W_D and their algebraic models"
)]
struct Cli {
    /// Worker threads for range sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, orbifold points, cusps and χ of each component of W_D.
    Invariants {
        d: i64,
        /// Do not fill square-D genus and cusps from reference data.
        #[arg(long)]
        computed_only: bool,
    },
    /// Invariants for every discriminant in a range.
    Table {
        #[arg(long, default_value_t = 5)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        computed_only: bool,
    },
    /// The prototypes E(D) with their spins.
    Prototypes {
        d: i64,
        /// Include improper prototypes (multiples of prototypes of smaller discriminants).
        #[arg(long)]
        all: bool,
    },
    /// The polynomial f_D(t).
    Fd {
        d: i64,
        #[arg(long, default_value_t = 256)]
        precision: usize,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        /// Emit a JSON record instead of the polynomial text.
        #[arg(long)]
        json: bool,
    },
    /// Euler characteristics of X_D, W_D, P_D and S_D.
    Chi { d: i64 },
    /// Components of P_D and cusp counts.
    Cusps { d: i64 },
    /// Class number h and weighted class number of a negative discriminant.
    #[command(allow_negative_numbers = true)]
    Classnumber { disc: i64 },
    /// Components of genus zero with D up to a bound.
    GenusZero {
        #[arg(long)]
        max: i64,
    },
    /// Recompute the reference tables and report differences.
    Verify {
        /// Directory with invariants.csv and polynomials.csv to use instead of the bundled copies.
        #[arg(long, env = TABLES_ENV)]
        tables: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        precision: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the effective inequalities for D.
    Bounds { d: i64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Defining,
    Primitive,
    Radical,
    Minimal,
}

impl From<FormArg> for FdForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Defining => FdForm::Defining,
            FormArg::Primitive => FdForm::Primitive,
            FormArg::Radical => FdForm::Radical,
            FormArg::Minimal => FdForm::Minimal,
        }
    }
}

#[derive(Serialize)]
struct OutputRecord {
    command: &'static str,
    input: Value,
    result: Value,
    elapsed_ms: f64,
}

enum Failure {
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Run = Result<(), Failure>;

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Write a line to stdout; a closed pipe is not an error worth reporting.
fn out_line(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn emit(command: &'static str, input: Value, result: Value, start: Instant) {
    let rec = OutputRecord {
        command,
        input,
        result,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    out_line(&serde_json::to_string_pretty(&rec).expect("serializable"));
}

fn ratio_json(x: &Q) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

fn refs() -> Result<ReferenceTables, Failure> {
    Ok(ReferenceTables::from_env()?)
}

fn invariants_for(
    d: &Discriminant,
    computed_only: bool,
) -> Result<Vec<ComponentInvariants>, Failure> {
    Ok(if computed_only {
        compute_invariants(d)?
    } else {
        compute_invariants_with(d, &refs()?)?
    })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_line(r: &ComponentInvariants) -> String {
    let mut flags: Vec<String> = r
        .reference_fields
        .iter()
        .map(|f| format!("ref:{f}"))
        .collect();
    if r.genus.is_none() {
        flags.push("genus:unavailable".into());
    }
    if r.cusps.is_none() {
        flags.push("cusps:unavailable".into());
    }
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.d,
        opt(r.spin),
        opt(r.genus),
        r.e2,
        r.e4,
        r.e5,
        opt(r.cusps),
        r.chi.numer(),
        r.chi.denom(),
        flags.join(";")
    )
}

/// Text form of a polynomial: the product of its factors over ℚ in primitive
/// integer form when the factor search applies, otherwise the expanded form.
fn factored_text(factors: Option<&[RationalPoly]>, fallback: &RationalPoly) -> String {
    let prim = |p: &RationalPoly| wcurve::modular::format_integer_poly(&p.primitive());
    let Some(fs) = factors else {
        return prim(fallback);
    };
    let mut grouped: Vec<(&RationalPoly, usize)> = Vec::new();
    for f in fs {
        match grouped.iter_mut().find(|(g, _)| *g == f) {
            Some((_, n)) => *n += 1,
            None => grouped.push((f, 1)),
        }
    }
    if let [(f, 1)] = grouped[..] {
        return prim(f);
    }
    grouped
        .iter()
        .map(|(f, n)| {
            if *n == 1 {
                format!("({})", prim(f))
            } else {
                format!("({})^{n}", prim(f))
            }
        })
        .collect()
}

fn run(cli: Cli) -> Run {
    let start = Instant::now();
    match cli.command {
        Command::Invariants { d, computed_only } => {
            let disc = Discriminant::new(d)?;
            let recs = invariants_for(&disc, computed_only)?;
            emit(
                "invariants",
                json!({ "D": d, "computed_only": computed_only }),
                to_json(&recs),
                start,
            );
        }
        Command::Table {
            from,
            to,
            format,
            computed_only,
        } => {
            if from > to {
                return Err(Failure::Domain(format!(
                    "empty range: --from {from} > --to {to}"
                )));
            }
            let t = if computed_only { None } else { Some(refs()?) };
            let recs = invariants_range(from, to, t.as_ref())?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            let res = match format {
                TableFormat::Csv => {
                    let mut s = String::from("D,spin,genus,e2,e4,e5,cusps,chi_num,chi_den,flags\n");
                    for r in &recs {
                        s += &csv_line(r);
                        s.push('\n');
                    }
                    out.write_all(s.as_bytes())
                }
                TableFormat::Json => {
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&recs).expect("serializable")
                    )
                }
            };
            match res {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Failure::Internal(format!("writing output: {e}")))
                }
                _ => {}
            }
            eprintln!(
                "{} components in {:.1} ms",
                recs.len(),
                start.elapsed().as_secs_f64() * 1e3
            );
        }
        Command::Prototypes { d, all } => {
            let disc = Discriminant::new(d)?;
            let proper = enumerate_prototypes(&disc);
            let list = if all {
                enumerate_prototypes_all(&disc)
            } else {
                proper.clone()
            };
            let mut rows = Vec::new();
            for p in &list {
                let spin = if disc.is_spin_split() {
                    Some(spin_of_prototype(p)?)
                } else {
                    None
                };
                rows.push(json!({
                    "e": p.e, "c": p.c, "b": p.b,
                    "proper": proper.contains(p),
                    "spin": spin,
                }));
            }
            let sig = orbifold_signature(&disc)?;
            emit(
                "prototypes",
                json!({ "D": d, "all": all }),
                json!({ "count": proper.len(), "signature": sig, "prototypes": rows }),
                start,
            );
        }
        Command::Fd {
            d,
            precision,
            form,
            json,
        } => {
            let disc = Discriminant::new(d)?;
            let mut ctx = BigComplexCtx::new(precision)?;
            let res = fd_polynomial(&disc, &mut ctx)?;
            let form = form.map(FdForm::from).unwrap_or(FdForm::Defining);
            let factors = match fd_factors(&res) {
                Ok(fs) => Some(fs),
                Err(Error::NotApplicable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let (poly, text) = match form {
                FdForm::Defining => (
                    res.defining.clone(),
                    factored_text(factors.as_deref(), &res.defining),
                ),
                FdForm::Primitive => {
                    let p = RationalPoly::from_bigints(&res.primitive());
                    let t = wcurve::modular::format_integer_poly(&res.primitive());
                    (p, t)
                }
                FdForm::Radical => {
                    let rad = res.radical();
                    let fs = factors.as_ref().map(|fs| {
                        let mut uniq: Vec<RationalPoly> = Vec::new();
                        for f in fs {
                            if !uniq.contains(f) {
                                uniq.push(f.clone());
                            }
                        }
                        uniq
                    });
                    let t = factored_text(fs.as_deref(), &rad);
                    (rad, t)
                }
                FdForm::Minimal => {
                    let m = match &factors {
                        Some(fs) => fs[0].clone(),
                        None => fd_minimal_factor(&res)?,
                    };
                    let t = wcurve::modular::format_integer_poly(&m.primitive());
                    (m, t)
                }
            };
            if json {
                let coeffs: Vec<Value> = poly.coeffs().iter().map(ratio_json).collect();
                let form_name = match form {
                    FdForm::Defining => "defining",
                    FdForm::Primitive => "primitive",
                    FdForm::Radical => "radical",
                    FdForm::Minimal => "minimal",
                };
                let result = json!({
                    "polynomial": text,
                    "coefficients_ascending": coeffs,
                    "degree": poly.degree(),
                    "max_residual_log2": res.max_residual_log2,
                    "prototypes": res.prototypes.iter().map(|p| [p.e, p.c, p.b]).collect::<Vec<_>>(),
                });
                emit(
                    "fd",
                    json!({ "D": d, "precision": precision, "form": form_name }),
                    result,
                    start,
                );
            } else {
                out_line(&text);
            }
        }
        Command::Chi { d } => {
            let disc = Discriminant::new(d)?;
            emit(
                "chi",
                json!({ "D": d }),
                to_json(&chi_record(&disc)?),
                start,
            );
        }
        Command::Cusps { d } => {
            let disc = Discriminant::new(d)?;
            let mut comps = Vec::new();
            for c in pd_components(&disc) {
                comps
                    .push(json!({ "e": c.e, "l": c.l, "m": c.m, "y0_cusps": y0_cusp_count(c.m)? }));
            }
            let mut result = json!({ "pd_components": comps });
            if disc.is_square {
                result["one_cylinder_cusps"] = json!(one_cylinder_count(disc.conductor)?);
                result["cusps_wd"] = Value::Null;
            } else {
                result["cusps_wd"] = json!(cusp_count_wd(&disc)?);
                if disc.is_spin_split() {
                    result["cusps_by_spin"] = json!(cusp_split(&disc)?);
                }
            }
            emit("cusps", json!({ "D": d }), result, start);
        }
        Command::Classnumber { disc } => {
            let forms = reduced_forms(disc)?;
            let result = json!({
                "h": class_number(disc)?,
                "h_weighted": rational::to_string(&weighted_class_number(disc)?),
                "reduced_forms": forms.iter().map(|f| [f.a, f.b, f.c]).collect::<Vec<_>>(),
            });
            emit("classnumber", json!({ "disc": disc }), result, start);
        }
        Command::GenusZero { max } => {
            let comps = genus_zero_components(max, &refs()?)?;
            let list: Vec<Value> = comps
                .iter()
                .map(|(d, s)| json!({ "D": d, "spin": s }))
                .collect();
            emit(
                "genus-zero",
                json!({ "max": max }),
                json!({ "count": list.len(), "components": list }),
                start,
            );
        }
        Command::Verify {
            tables,
            precision,
            json,
        } => {
            let t = match &tables {
                Some(dir) => ReferenceTables::load(dir)?,
                None => ReferenceTables::bundled()?,
            };
            let rep = verify_reference_tables(&t, precision)?;
            if json {
                let input = json!({ "tables": tables.as_ref().map(|p| p.display().to_string()), "precision": precision });
                emit("verify", input, to_json(&rep), start);
            } else {
                for m in &rep.mismatches {
                    let spin = m.spin.map(|s| format!(" spin {s}")).unwrap_or_default();
                    match &m.erratum {
                        Some(note) => eprintln!(
                            "erratum: {} table, D = {}{spin} {}: printed {}, computed {} ({note})",
                            m.table, m.d, m.column, m.printed, m.computed
                        ),
                        None => eprintln!(
                            "MISMATCH: {} table, D = {}{spin} {}: printed {}, computed {}",
                            m.table, m.d, m.column, m.printed, m.computed
                        ),
                    }
                }
                out_line(&rep.summary());
            }
            if !rep.is_ok() {
                return Err(Failure::Internal(format!(
                    "{} reference cell(s) disagree",
                    rep.failures().count()
                )));
            }
        }
        Command::Bounds { d } => {
            let disc = Discriminant::new(d)?;
            let rep = check_bounds(&disc, Some(&refs()?))?;
            let failed = rep.failures().count();
            emit("bounds", json!({ "D": d }), to_json(&rep), start);
            if failed > 0 {
                return Err(Failure::Internal(format!(
                    "{failed} bound(s) violated for D = {d}"
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
