//! Command-line driver: argument parsing, subcommand dispatch and exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use waistcert_core::bank::{self, BankEntry, EntryValue};
use waistcert_core::catalog::{self, WaistValue};
use waistcert_core::exact::rational::{parse_rational, to_decimal};
use waistcert_core::exact::{Rational, TowerElement};
use waistcert_core::horoball::{self, Branch};
use waistcert_core::interval::{
    replay, CoverageCertificate, Interval, IntervalBox, NamedPredicate,
};
use waistcert_core::points::{special_point, PointId};
use waistcert_core::poly::{eliminate_angle_traced, five_two_relations, ExactPoint};
use waistcert_core::svg::{self, RenderOptions, Viewport};
use waistcert_core::theorem::{self, TheoremParams};
use waistcert_core::Error;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{
        // a closed pipe is not worth failing the run over
        let _ = writeln!($out, $($arg)*);
    }};
}

pub const REPORT_FILE: &str = "theorem_report.json";
pub const CERTIFICATE_FILE: &str = "coverage_certificate.json";

#[derive(Parser)]
#[command(
    name = "waistcert",
    version,
    about = "Certified checks of the small waist-size theorem for cusps"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Ccw,
    Cw,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Ccw => Branch::CounterClockwise,
            BranchArg::Cw => Branch::Clockwise,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all eight inequalities at a point.
    Eval {
        /// Waist w: a decimal or p/q, or with --exact a Q(sqrt2, sqrt3) element such as `1` or `r2`.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "point")]
        w: Option<String>,
        /// Second-shortest distance e, in the same syntax as --w.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "point")]
        e: Option<String>,
        /// Evaluate exactly in Q(sqrt2, sqrt3).
        #[arg(long)]
        exact: bool,
        /// A named point instead of --w/--e: fig8, (1,sqrt2), I, II, III (always exact).
        #[arg(long, conflicts_with_all = ["w", "e"])]
        point: Option<String>,
    },
    /// Run every check of the theorem and write the report and certificate.
    Theorem {
        /// Gap between the strip and w = 2^(1/4).
        #[arg(long, default_value = "1/1000")]
        delta: String,
        /// Radius of the disk removed around (1, sqrt2).
        #[arg(long, default_value = "1/100")]
        exclusion_radius: String,
        /// Boxes with both sides at most this size are not split.
        #[arg(long, default_value = "1/1048576")]
        min_box: String,
        /// Maximum number of boxes examined.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Worker threads for the coverage search.
        #[arg(long, env = "WAISTCERT_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Directory for theorem_report.json and coverage_certificate.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Re-check a stored coverage certificate.
    Replay {
        #[arg(long)]
        certificate: PathBuf,
        /// Only replay the subdivision; skip the checks tying it to the theorem.
        #[arg(long)]
        generic: bool,
    },
    /// Certified waist size of a catalogued cusp.
    Waist { name: String },
    /// Audit the printed factorization of the degree-14 polynomial.
    FactorAudit,
    /// Show the angle elimination that produces the degree-14 polynomial.
    Eliminate,
    /// Unknotting-tunnel length bound.
    TunnelBound {
        #[arg(long, required_unless_present = "universal")]
        a0: Option<f64>,
        #[arg(long, required_unless_present = "universal")]
        b0: Option<f64>,
        /// The bound valid for every two-cusped one-tunnel manifold.
        #[arg(long, conflicts_with_all = ["a0", "b0"])]
        universal: bool,
    },
    /// Draw the horoball configuration for (w, e).
    RenderConfig {
        #[arg(long)]
        w: f64,
        #[arg(long)]
        e: f64,
        #[arg(long, value_enum, default_value_t = BranchArg::Ccw)]
        branch: BranchArg,
        #[arg(long, default_value_t = 300.0)]
        scale: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Draw the inequality regions in the (w, e)-plane.
    RenderRegion {
        #[arg(short, long)]
        output: PathBuf,
        /// Tint the leaves of this certificate by their witness.
        #[arg(long)]
        overlay_certificate: Option<PathBuf>,
        /// Comma-separated inequality names.
        #[arg(long, value_delimiter = ',', default_value = "lower-e,upper-e,y,v")]
        predicates: Vec<String>,
        #[arg(long, default_value_t = 200)]
        density: usize,
        #[arg(long, default_value_t = 1600.0)]
        scale: f64,
        /// Viewport as w_min,w_max,e_min,e_max.
        #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [1.0, 1.25, 0.5, 2.0])]
        viewport: Vec<f64>,
    },
    /// List the catalogued cusps.
    Catalog,
}

/// A failed check (exit 1) or a usage problem (exit 2).
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::UnknownName { .. }
            | Error::DivisionByZero => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Exit code for a passed run.
pub const EXIT_OK: u8 = 0;
/// Exit code for a failed check or a counterexample.
pub const EXIT_CHECK: u8 = 1;
/// Exit code for a usage error.
pub const EXIT_USAGE: u8 = 2;

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render();
            if e.use_stderr() {
                say!(err, "{}", text);
            } else {
                say!(out, "{}", text);
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check(msg)) => {
            say!(err, "check failed: {msg}");
            EXIT_CHECK
        }
        Err(Failure::Usage(msg)) => {
            say!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Eval { w, e, exact, point } => eval(out, fmt, w, e, exact, point),
        Command::Theorem {
            delta,
            exclusion_radius,
            min_box,
            budget,
            jobs,
            out_dir,
        } => {
            let params = TheoremParams {
                delta: rational_arg("delta", &delta)?,
                exclusion_radius: rational_arg("exclusion-radius", &exclusion_radius)?,
                min_box: rational_arg("min-box", &min_box)?,
                budget,
                jobs: jobs.max(1),
            };
            run_theorem(out, fmt, &params, &out_dir)
        }
        Command::Replay {
            certificate,
            generic,
        } => run_replay(out, fmt, &certificate, generic),
        Command::Waist { name } => run_waist(out, fmt, &name),
        Command::FactorAudit => run_factor_audit(out, fmt),
        Command::Eliminate => run_eliminate(out, fmt),
        Command::TunnelBound { a0, b0, universal } => run_tunnel_bound(out, fmt, a0, b0, universal),
        Command::RenderConfig {
            w,
            e,
            branch,
            scale,
            output,
        } => {
            let c = horoball::build_configuration(w, e, branch.into())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = RenderOptions {
                scale,
                ..RenderOptions::default()
            };
            write_file(&output, &svg::render_configuration(&c, &opts)?)?;
            report(
                out,
                fmt,
                &json!({ "output": output, "balls": c.balls.len() }),
                &format!("wrote {}", output.display()),
            );
            Ok(())
        }
        Command::RenderRegion {
            output,
            overlay_certificate,
            predicates,
            density,
            scale,
            viewport,
        } => {
            let preds = predicates
                .iter()
                .map(|n| {
                    Ok(NamedPredicate::new(
                        n.clone(),
                        bank::by_name(n)?.lhs.clone(),
                    ))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let cert = overlay_certificate
                .as_deref()
                .map(read_certificate)
                .transpose()?;
            let view = Viewport::new(viewport[0], viewport[1], viewport[2], viewport[3])?;
            let opts = RenderOptions {
                scale,
                density,
                viewport: Some(view),
                ..RenderOptions::default()
            };
            write_file(
                &output,
                &svg::render_region_plot(&preds, &opts, cert.as_ref())?,
            )?;
            report(
                out,
                fmt,
                &json!({ "output": output }),
                &format!("wrote {}", output.display()),
            );
            Ok(())
        }
        Command::Catalog => {
            let cat = catalog::catalog();
            if fmt == Format::Json {
                say!(out, "{}", cat.to_json());
            } else {
                for m in &cat.manifolds {
                    say!(
                        out,
                        "{:<6} {:<28} w = {:.12}  ({})",
                        m.name,
                        m.aliases.join(", "),
                        m.waist.approx(),
                        m.defining_polynomial
                    );
                }
            }
            Ok(())
        }
    }
}

fn rational_arg(name: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_certificate(path: &Path) -> Result<CoverageCertificate, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    CoverageCertificate::from_json(&text).map_err(|e| Failure::Check(e.to_string()))
}

fn report(out: &mut dyn Write, fmt: Format, value: &serde_json::Value, text: &str) {
    match fmt {
        Format::Json => say!(
            out,
            "{}",
            serde_json::to_string_pretty(value).expect("json value")
        ),
        Format::Text => say!(out, "{text}"),
    }
}

fn eval(
    out: &mut dyn Write,
    fmt: Format,
    w: Option<String>,
    e: Option<String>,
    exact: bool,
    point: Option<String>,
) -> Outcome {
    let (label, entries): (String, Vec<BankEntry>) = if let Some(name) = point {
        let id = PointId::parse(&name)?;
        (
            format!("{} = {}", id.label(), id.coordinates()),
            bank::evaluate_exact(&special_point(id).exact)?,
        )
    } else {
        let (w, e) = (w.expect("required by clap"), e.expect("required by clap"));
        if exact {
            let (tw, te): (TowerElement, TowerElement) = (w.parse()?, e.parse()?);
            (
                format!("({tw}, {te})"),
                bank::evaluate_exact(&ExactPoint::plain(tw, te))?,
            )
        } else {
            let (qw, qe) = (parse_rational(&w)?, parse_rational(&e)?);
            let b = IntervalBox::new(Interval::from_rational(&qw), Interval::from_rational(&qe));
            (format!("({w}, {e})"), bank::evaluate_interval(&b))
        }
    };
    if fmt == Format::Json {
        say!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({ "point": label, "entries": entries }))
                .expect("json")
        );
        return Ok(());
    }
    say!(out, "inequalities at {label}");
    say!(
        out,
        "{:<8} {:<44} {:<14} {:<12} applicability",
        "name",
        "value",
        "sign",
        "min distance"
    );
    for entry in &entries {
        let (value, sign) = match &entry.value {
            EntryValue::Exact {
                value,
                approx,
                membership,
            } => (
                format!("{value} (~ {approx:.10})"),
                format!("{membership:?}").to_lowercase(),
            ),
            EntryValue::Interval { lo, hi, sign } => (
                format!("[{lo:.12e}, {hi:.12e}]"),
                format!("{sign:?}").to_lowercase(),
            ),
        };
        say!(
            out,
            "{:<8} {:<44} {:<14} {:<12} {}",
            entry.name,
            value,
            sign,
            entry.min_distance,
            entry.applicability
        );
    }
    Ok(())
}

fn run_theorem(
    out: &mut dyn Write,
    fmt: Format,
    params: &TheoremParams,
    out_dir: &Path,
) -> Outcome {
    let (report_data, cert) = theorem::certify_main_theorem(params)?;
    write_file(&out_dir.join(REPORT_FILE), &report_data.to_json())?;
    if let Some(cert) = &cert {
        write_file(&out_dir.join(CERTIFICATE_FILE), &cert.to_json())?;
    }
    if fmt == Format::Json {
        say!(out, "{}", report_data.to_json());
    } else {
        say!(out, "special points (exact):");
        for c in &report_data.special_points {
            say!(
                out,
                "  {} {:<8} at {:<4} = {} (expected {})",
                pass(c.passed),
                c.inequality,
                c.point.label(),
                c.value,
                c.expected
            );
        }
        say!(out, "segment and slope checks:");
        for c in &report_data.segment_checks {
            say!(out, "  {} {:<22} {}", pass(c.passed), c.name, c.claim);
        }
        let cov = &report_data.coverage;
        say!(
            out,
            "strip coverage [{}, {}] x [{}, {}]:",
            cov.region.w_lo,
            to_decimal(&cov.region.w_hi, 9),
            cov.region.e_lo,
            cov.region.e_hi
        );
        say!(
            out,
            "  {} complete = {}, leaves = {}, boxes examined = {}, witnesses = {:?}",
            pass(cov.complete),
            cov.complete,
            cov.leaves,
            cov.boxes_examined,
            cov.witness_counts
        );
        say!(out, "case analysis:");
        for c in &report_data.case_analysis {
            say!(
                out,
                "  {} {:<4} {}",
                pass(c.passed),
                c.point.label(),
                c.verdict
            );
        }
        say!(
            out,
            "verdict: {} (report: {}{})",
            if report_data.verdict.passed {
                "PASS"
            } else {
                "FAIL"
            },
            out_dir.join(REPORT_FILE).display(),
            if cert.is_some() {
                format!(
                    ", certificate: {}",
                    out_dir.join(CERTIFICATE_FILE).display()
                )
            } else {
                String::new()
            }
        );
    }
    if report_data.verdict.passed {
        Ok(())
    } else {
        Err(Failure::Check(report_data.verdict.failures.join("; ")))
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_replay(out: &mut dyn Write, fmt: Format, path: &Path, generic: bool) -> Outcome {
    let cert = read_certificate(path)?;
    let result = if generic {
        replay(&cert)
    } else {
        theorem::replay_theorem_certificate(&cert)
    };
    let rep = result.map_err(|e| Failure::Check(e.to_string()))?;
    report(
        out,
        fmt,
        &json!({ "accepted": true, "leaves_checked": rep.leaves_checked, "witness_counts": rep.witness_counts }),
        &format!(
            "certificate accepted: {} leaves, witnesses {:?}",
            rep.leaves_checked, rep.witness_counts
        ),
    );
    Ok(())
}

fn run_waist(out: &mut dyn Write, fmt: Format, name: &str) -> Outcome {
    let m = catalog::waist(name)?;
    if fmt == Format::Json {
        say!(out, "{}", serde_json::to_string_pretty(m).expect("json"));
        return Ok(());
    }
    match &m.waist {
        WaistValue::Exact { value } => say!(out, "{}: waist = {value} (exact)", m.name),
        WaistValue::Algebraic {
            closed_form,
            enclosure,
        } => {
            say!(
                out,
                "{}: waist is the root of {} in ({}, {})",
                m.name,
                m.defining_polynomial,
                enclosure.lo,
                enclosure.hi
            );
            say!(
                out,
                "  ~ {:.12}, enclosure width {}",
                enclosure.midpoint_f64(),
                to_decimal(&enclosure.width(), 12)
            );
            if let Some(cf) = closed_form {
                say!(out, "  closed form {cf}");
            }
        }
    }
    Ok(())
}

fn run_factor_audit(out: &mut dyn Write, fmt: Format) -> Outcome {
    let audit = catalog::factor_audit()?;
    if fmt == Format::Json {
        let mut v = serde_json::to_value(&audit).expect("json");
        v["exact"] = json!(audit.exact());
        say!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        say!(
            out,
            "target (degree {}): {}",
            audit.target_degree,
            audit.target
        );
        let printed: Vec<String> = audit
            .printed_factors
            .iter()
            .map(|f| format!("({f})"))
            .collect();
        say!(
            out,
            "printed factorization {} has degree {}",
            printed.join(""),
            audit.printed_degree
        );
        say!(
            out,
            "degree mismatch: {} != {}",
            audit.printed_degree,
            audit.target_degree
        );
        if let Some(f) = &audit.missing_factor {
            say!(out, "target / printed product = {f} (remainder 0): the printed factorization omits this factor");
        }
        say!(out, "target / ({}) = {}", audit.divisor, audit.quotient);
        say!(
            out,
            "remainder: {}",
            if audit.remainder.is_zero() {
                "0".to_string()
            } else {
                audit.remainder.to_string()
            }
        );
        say!(out, "corrected cofactor: {}", audit.quotient);
        for r in &audit.roots_above_one {
            say!(out, "root in (1, 2): ~ {:.12}", r.midpoint_f64());
        }
    }
    if audit.exact() {
        Ok(())
    } else {
        Err(Failure::Check(
            "the corrected factorization does not multiply back to the target".into(),
        ))
    }
}

fn run_eliminate(out: &mut dyn Write, fmt: Format) -> Outcome {
    let (first, second) = five_two_relations();
    let el = eliminate_angle_traced(&first, &second)?;
    if fmt == Format::Json {
        let v = json!({
            "first_relation": first.to_string(),
            "second_relation": second.to_string(),
            "cos_numerator": el.cos_numerator.to_string(),
            "cos_denominator": el.cos_denominator.to_string(),
            "combined": el.combined.to_string(),
            "cleared_by": el.cleared_by,
            "polynomial": el.polynomial.to_string(),
        });
        say!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        say!(out, "relation 1: {first}");
        say!(out, "relation 2: {second}");
        say!(
            out,
            "cos(theta) = ({}) / ({})",
            el.cos_numerator,
            el.cos_denominator
        );
        say!(out, "substituted: {} = 0", el.combined);
        say!(
            out,
            "multiplied by w^{}: {} = 0",
            el.cleared_by,
            el.polynomial
        );
    }
    Ok(())
}

fn run_tunnel_bound(
    out: &mut dyn Write,
    fmt: Format,
    a0: Option<f64>,
    b0: Option<f64>,
    universal: bool,
) -> Outcome {
    if universal {
        let u = catalog::universal_tunnel_bound();
        if fmt == Format::Json {
            say!(out, "{}", serde_json::to_string_pretty(&u).expect("json"));
        } else {
            say!(out, "{} = {:.12}", u.formula, u.approx);
            say!(
                out,
                "  enclosure [{}, {}]",
                to_decimal(&u.bound.lo, 15),
                to_decimal(&u.bound.hi, 15)
            );
            say!(out, "  earlier bound ln 4 = {:.12}", u.prior_approx);
        }
        return Ok(());
    }
    let t = catalog::tunnel_bound(a0.expect("required by clap"), b0.expect("required by clap"))?;
    if fmt == Format::Json {
        say!(out, "{}", serde_json::to_string_pretty(&t).expect("json"));
    } else {
        say!(
            out,
            "h = {:.12}, common waist w = {:.12}, bound ln(4/w^2) = {:.12}",
            t.h,
            t.w,
            t.bound
        );
    }
    Ok(())
}
