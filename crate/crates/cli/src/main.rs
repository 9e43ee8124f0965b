//! Command-line front end: parse → classify → solve → verify → report,
//! plus the finite-model oracle and the numeric fitting drivers.
//!
//! Exit codes: 0 recognized shape / success, 1 input errors, 2 open-problem
//! equations, 3 unrecognized equations, 4 oracle search-space bound
//! exceeded, 5 fit non-convergence.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use feforge_core::eqdsl::{
    classify, parse, render, Codomain, DomainClass, DomainSpec, GroupOp, ShapeId,
};
use feforge_core::oracle::{
    enumerate_solutions, match_family, DomainModel, FiniteGroup, OracleError, PairTable,
    PrimeField, ShapeModel, DEFAULT_MAX_SPACE,
};
use feforge_core::numeric::{fit_regular, FitVariant, SampleSet};
use feforge_core::scalar::Scalar;
use feforge_core::solver::{
    realize, real_admissible, sample_params, solve_constraints, solve_shape, SolutionFamily,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{
    family_report, EquationReport, FitReport, OracleReport, Report, VerifyReport,
};
use std::collections::BTreeMap;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_OPEN_PROBLEM: u8 = 2;
const EXIT_UNRECOGNIZED: u8 = 3;
const EXIT_BOUND: u8 = 4;
const EXIT_NO_CONVERGENCE: u8 = 5;

#[derive(Parser)]
#[command(name = "feforge", version, about = "Functional-equation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an equation and report its proved solution families.
    Solve(SolveArgs),
    /// Enumerate all solutions over a finite model.
    Oracle(OracleArgs),
    /// Fit a regular family to sampled data from a CSV file.
    Fit(FitArgs),
    /// Check a user-supplied family instance symbolically.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    Semigroup,
    Group,
    FieldAdd,
    FieldMult,
    FieldWithZero,
    Real,
    RealPos,
    RealNonzero,
    RealWithZero,
    RealNonneg,
}

impl DomainArg {
    fn class(self) -> DomainClass {
        match self {
            DomainArg::Semigroup => DomainClass::Semigroup,
            DomainArg::Group => DomainClass::Group,
            DomainArg::FieldAdd => DomainClass::FieldAdditive,
            DomainArg::FieldMult => DomainClass::FieldMultiplicativeNoZero,
            DomainArg::FieldWithZero => DomainClass::FieldWithZero,
            DomainArg::Real => DomainClass::RealLine,
            DomainArg::RealPos => DomainClass::RealPositive,
            DomainArg::RealNonzero => DomainClass::RealNonzero,
            DomainArg::RealWithZero => DomainClass::RealWithZero,
            DomainArg::RealNonneg => DomainClass::RealNonneg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodomainArg {
    Field,
    Complex,
    Real,
}

impl CodomainArg {
    fn codomain(self) -> Codomain {
        match self {
            CodomainArg::Field => Codomain::GeneralField,
            CodomainArg::Complex => Codomain::Complex,
            CodomainArg::Real => Codomain::Real,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Add,
    Mul,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit the report as versioned JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for all randomized steps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// The equation, e.g. "f(x*y)-f(x)-f(y)=a(x)*a(y)".
    equation: String,
    #[arg(long, value_enum)]
    domain: DomainArg,
    /// Group operation for abstract semigroup/group domains; inferred from
    /// the equation when omitted.
    #[arg(long, value_enum)]
    op: Option<OpArg>,
    #[arg(long, value_enum, default_value = "complex")]
    codomain: CodomainArg,
    /// Restrict to real-valued solutions and list regular closed forms.
    #[arg(long)]
    real: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Shape to enumerate (S1..S9).
    #[arg(long)]
    shape: String,
    /// Domain group, e.g. Z5 or Z3xZ3.
    #[arg(long)]
    group: String,
    /// Prime-field codomain, e.g. F5.
    #[arg(long)]
    field: String,
    /// The given biadditive form for S1: `product` or `zero`.
    #[arg(long = "B", value_name = "FORM")]
    b_form: Option<String>,
    /// The given scalar for S2/S3 (rational, e.g. 1 or 2/3).
    #[arg(long)]
    alpha: Option<String>,
    /// Search-space bound; FEFORGE_MAX_SPACE overrides.
    #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
    max_space: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FitArgs {
    /// CSV file with header `x,f,alpha`.
    csv: std::path::PathBuf,
    #[arg(long, default_value = "auto")]
    variant: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// The equation the instance should solve.
    equation: String,
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long, value_enum)]
    op: Option<OpArg>,
    #[arg(long, value_enum, default_value = "complex")]
    codomain: CodomainArg,
    /// Family label when the shape has several (e.g. "S9 case (ii)").
    #[arg(long)]
    family: Option<String>,
    /// Scalar parameter values, repeatable: --set gamma=1/2 --set alpha=i.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    sets: Vec<String>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, json, code) = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Fit(args) => run_fit(args),
        Command::Verify(args) => run_verify(args),
    };
    match report {
        Ok(report) => {
            print!("{}", if json { report.to_json() } else { report.to_text() });
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(code.max(EXIT_INPUT))
        }
    }
}

fn build_domain(
    domain: DomainArg,
    op: Option<OpArg>,
    codomain: CodomainArg,
    equation: &str,
) -> Result<DomainSpec, String> {
    let class = domain.class();
    let group_op = match (class.forced_op(), op) {
        (Some(forced), None) => forced,
        (Some(forced), Some(requested)) => {
            let requested = match requested {
                OpArg::Add => GroupOp::Additive,
                OpArg::Mul => GroupOp::Multiplicative,
            };
            if requested != forced {
                return Err(format!(
                    "domain `{}` fixes the {} operation",
                    class.name(),
                    match forced {
                        GroupOp::Additive => "additive",
                        GroupOp::Multiplicative => "multiplicative",
                    }
                ));
            }
            forced
        }
        (None, Some(OpArg::Add)) => GroupOp::Additive,
        (None, Some(OpArg::Mul)) => GroupOp::Multiplicative,
        // Infer from the f(...) argument in the equation text.
        (None, None) => {
            if equation.replace(' ', "").contains("f(x*y)") {
                GroupOp::Multiplicative
            } else {
                GroupOp::Additive
            }
        }
    };
    DomainSpec::new(class, group_op, codomain.codomain()).map_err(|e| e.to_string())
}

fn run_solve(args: SolveArgs) -> (Result<Report, String>, bool, u8) {
    let json = args.common.json;
    let seed = args.common.seed;
    let domain = match build_domain(args.domain, args.op, args.codomain, &args.equation) {
        Ok(d) => d,
        Err(e) => return (Err(e), json, EXIT_INPUT),
    };
    let eq = match parse(&args.equation, domain) {
        Ok(eq) => eq,
        Err(e) => return (Err(e.to_string()), json, EXIT_INPUT),
    };
    let shape = classify(&eq);
    let mut report = Report::new("solve", seed);
    report.equation = Some(EquationReport {
        input: args.equation.clone(),
        canonical: render(&eq),
        shape: shape.name().to_string(),
        domain: domain.class.name().to_string(),
        group_op: match domain.group_op {
            GroupOp::Additive => "additive".into(),
            GroupOp::Multiplicative => "multiplicative".into(),
        },
        codomain: domain.codomain.name().to_string(),
    });

    let exit = match shape {
        ShapeId::OpenProblemMixed => {
            report.status = Some(
                "open problem: recognized but not solvable by the methods implemented here"
                    .into(),
            );
            EXIT_OPEN_PROBLEM
        }
        ShapeId::Unrecognized => {
            report.status = Some("unrecognized equation shape".into());
            EXIT_UNRECOGNIZED
        }
        _ => EXIT_OK,
    };
    if exit != EXIT_OK {
        return (Ok(report), json, exit);
    }

    let families = match solve_shape(shape, domain) {
        Ok(fams) => fams,
        Err(e) => {
            report.status = Some(e.to_string());
            return (Ok(report), json, EXIT_INPUT);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for fam in &families {
        let fam = if args.real { real_admissible(fam) } else { fam.clone() };
        match add_family_report(&mut report, &fam, &mut rng) {
            Ok(()) => {}
            Err(e) => {
                report.status = Some(e);
                return (Ok(report), json, EXIT_INPUT);
            }
        }
    }
    (Ok(report), json, EXIT_OK)
}

/// Branches, then a handful of realized draws as the symbolic verification
/// summary; draw failures are internal bugs surfaced loudly.
fn add_family_report(
    report: &mut Report,
    fam: &SolutionFamily,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let branches = if fam.constraints.is_empty() {
        None
    } else {
        Some(solve_constraints(&fam.constraints).map_err(|e| e.to_string())?)
    };
    const DRAWS: usize = 5;
    for _ in 0..DRAWS {
        let vals = sample_params(fam, rng);
        realize(fam, &vals).map_err(|e| format!("family `{}`: {e}", fam.label))?;
    }
    let verification =
        format!("symbolic residual identically zero at {DRAWS} random parameter draws");
    report.families.push(family_report(fam, branches.as_ref(), Some(verification)));
    Ok(())
}

fn parse_group(text: &str) -> Result<FiniteGroup, String> {
    let mut factors = Vec::new();
    for part in text.split(['x', 'X']) {
        let digits = part
            .strip_prefix('Z')
            .or_else(|| part.strip_prefix('z'))
            .ok_or_else(|| format!("bad group spec `{text}` (expected e.g. Z5 or Z3xZ3)"))?;
        let n: u32 = digits.parse().map_err(|_| format!("bad cyclic order `{part}`"))?;
        if n == 0 {
            return Err("cyclic order must be positive".into());
        }
        factors.push(n);
    }
    FiniteGroup::new(factors).map_err(|e| e.to_string())
}

fn parse_field(text: &str) -> Result<PrimeField, String> {
    let digits = text
        .strip_prefix('F')
        .or_else(|| text.strip_prefix('f'))
        .ok_or_else(|| format!("bad field spec `{text}` (expected e.g. F5)"))?;
    let p: u64 = digits.parse().map_err(|_| format!("bad prime `{text}`"))?;
    PrimeField::new(p).map_err(|e| e.to_string())
}

fn parse_shape(text: &str) -> Result<ShapeId, String> {
    Ok(match text.to_ascii_uppercase().as_str() {
        "S1" => ShapeId::S1,
        "S2" => ShapeId::S2,
        "S3" => ShapeId::S3,
        "S4" => ShapeId::S4,
        "S5" => ShapeId::S5,
        "S6" => ShapeId::S6,
        "S7" => ShapeId::S7,
        "S8" => ShapeId::S8,
        "S9" => ShapeId::S9,
        other => return Err(format!("unknown shape `{other}`")),
    })
}

/// The scalar given on the command line, reduced into the prime field.
fn scalar_mod_p(text: &str, field: &PrimeField) -> Result<u64, String> {
    let s: Scalar = text.parse().map_err(|_| format!("bad scalar `{text}`"))?;
    if !s.is_real() {
        return Err("field scalars must be rational".into());
    }
    let p = field.p();
    let to_mod = |v: &num_bigint::BigInt| -> u64 {
        let m = v % p as i64;
        ((m + p as i64) % p as i64).try_into().expect("reduced")
    };
    let num = to_mod(s.re().numer());
    let den = to_mod(s.re().denom());
    if den == 0 {
        return Err(format!("denominator of `{text}` vanishes mod {p}"));
    }
    Ok(field.mul(num, field.inv(den)))
}

fn run_oracle(args: OracleArgs) -> (Result<Report, String>, bool, u8) {
    let json = args.common.json;
    let result = (|| -> Result<(Report, u8), (String, u8)> {
        let shape = parse_shape(&args.shape).map_err(|e| (e, EXIT_INPUT))?;
        let group = parse_group(&args.group).map_err(|e| (e, EXIT_INPUT))?;
        let field = parse_field(&args.field).map_err(|e| (e, EXIT_INPUT))?;
        let max_space = match std::env::var("FEFORGE_MAX_SPACE") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|_| ("bad FEFORGE_MAX_SPACE value".to_string(), EXIT_INPUT))?,
            Err(_) => args.max_space,
        };

        // Multiplicative shapes run on the monoid of the field itself; the
        // group spec must name the matching index set Z_p.
        let domain = match shape {
            ShapeId::S3 | ShapeId::S4 | ShapeId::S7 => {
                if group.factors() != [field.p() as u32] {
                    return Err((
                        format!(
                            "shape {} is modeled on the multiplicative monoid of F{p}; \
                             use --group Z{p}",
                            shape.name(),
                            p = field.p()
                        ),
                        EXIT_INPUT,
                    ));
                }
                DomainModel::MultiplicativeMonoid(field)
            }
            _ => DomainModel::AdditiveGroup(group.clone()),
        };

        let given_b = match (shape, args.b_form.as_deref()) {
            (ShapeId::S1, Some("product")) => {
                let n = domain.size();
                let mut table = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        let ex = domain
                            .embed(x, &field)
                            .map_err(|e| (e.to_string(), EXIT_INPUT))?;
                        let ey = domain
                            .embed(y, &field)
                            .map_err(|e| (e.to_string(), EXIT_INPUT))?;
                        table.push(field.mul(ex, ey));
                    }
                }
                Some(PairTable { n, values: table })
            }
            (ShapeId::S1, Some("zero")) => {
                let n = domain.size();
                Some(PairTable { n, values: vec![0; n * n] })
            }
            (ShapeId::S1, Some(other)) => {
                return Err((format!("unknown B form `{other}`"), EXIT_INPUT))
            }
            (ShapeId::S1, None) => {
                return Err(("shape S1 needs --B product|zero".to_string(), EXIT_INPUT))
            }
            _ => None,
        };
        let given_alpha = match &args.alpha {
            Some(text) => Some(scalar_mod_p(text, &field).map_err(|e| (e, EXIT_INPUT))?),
            None => None,
        };

        let model = ShapeModel::new(shape, domain, field, given_b, given_alpha)
            .map_err(|e| (e.to_string(), EXIT_INPUT))?;
        let solutions = enumerate_solutions(&model, max_space).map_err(|e| match e {
            OracleError::SearchSpaceExceeded { .. } => (e.to_string(), EXIT_BOUND),
            other => (other.to_string(), EXIT_INPUT),
        })?;

        let matched = solutions.iter().filter(|s| match_family(&model, s)).count();
        let mut report = Report::new("oracle", args.common.seed);
        report.oracle = Some(OracleReport {
            shape: shape.name().to_string(),
            group: args.group.clone(),
            field: field.p(),
            given: match (&args.b_form, &args.alpha) {
                (Some(b), _) => Some(format!("B = {b}")),
                (_, Some(a)) => Some(format!("alpha = {a}")),
                _ => None,
            },
            solution_count: solutions.len(),
            solutions: solutions
                .iter()
                .map(|s| {
                    let verdict =
                        if match_family(&model, s) { "matched" } else { "UNMATCHED" };
                    format!("{s}  [{verdict}]")
                })
                .collect(),
            matched,
        });
        Ok((report, EXIT_OK))
    })();
    match result {
        Ok((report, code)) => (Ok(report), json, code),
        Err((msg, code)) => (Err(msg), json, code),
    }
}

fn parse_csv(path: &std::path::Path) -> Result<SampleSet, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty CSV")?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["x", "f", "alpha"] {
        return Err(format!("expected header `x,f,alpha`, found `{header}`"));
    }
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(format!("line {}: expected 3 fields", idx + 2));
        }
        let parse =
            |s: &str| s.parse::<f64>().map_err(|_| format!("line {}: bad number `{s}`", idx + 2));
        samples.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
    }
    if samples.is_empty() {
        return Err("CSV contains no samples".into());
    }
    SampleSet::new(samples).map_err(|e| e.to_string())
}

fn run_fit(args: FitArgs) -> (Result<Report, String>, bool, u8) {
    let json = args.common.json;
    let samples = match parse_csv(&args.csv) {
        Ok(s) => s,
        Err(e) => return (Err(e), json, EXIT_INPUT),
    };
    let variant = match args.variant.as_str() {
        "auto" => FitVariant::Auto,
        "add-exp" => FitVariant::AddExp,
        "add-const" => FitVariant::AddConst,
        "mult-log" => FitVariant::MultLog,
        other => return (Err(format!("unknown variant `{other}`")), json, EXIT_INPUT),
    };
    let fit = match fit_regular(&samples, variant, args.common.seed) {
        Ok(f) => f,
        Err(e) => return (Err(e.to_string()), json, EXIT_INPUT),
    };
    let mut report = Report::new("fit", args.common.seed);
    let converged = fit.converged;
    report.fit = Some(FitReport {
        variant: fit.variant.to_string(),
        alpha: fit.alpha,
        gamma: fit.gamma,
        rate: fit.rate,
        max_residual: fit.max_residual,
        converged: fit.converged,
        iterations: fit.iterations,
        samples: samples.len(),
    });
    if !converged {
        report.status = Some("fit did not converge; parameters are best-effort".into());
        return (Ok(report), json, EXIT_NO_CONVERGENCE);
    }
    (Ok(report), json, EXIT_OK)
}

fn run_verify(args: VerifyArgs) -> (Result<Report, String>, bool, u8) {
    let json = args.common.json;
    let result = (|| -> Result<(Report, u8), String> {
        let domain = build_domain(args.domain, args.op, args.codomain, &args.equation)?;
        let eq = parse(&args.equation, domain).map_err(|e| e.to_string())?;
        let shape = classify(&eq);
        let families = solve_shape(shape, domain).map_err(|e| e.to_string())?;
        let fam = match &args.family {
            None => &families[0],
            Some(label) => families
                .iter()
                .find(|f| &f.label == label)
                .ok_or_else(|| {
                    format!(
                        "no family `{label}`; available: {}",
                        families.iter().map(|f| f.label.clone()).collect::<Vec<_>>().join(", ")
                    )
                })?,
        };
        let mut vals: BTreeMap<String, Scalar> = BTreeMap::new();
        for setting in &args.sets {
            let (name, value) = setting
                .split_once('=')
                .ok_or_else(|| format!("bad --set `{setting}` (expected NAME=VALUE)"))?;
            let scalar: Scalar =
                value.parse().map_err(|_| format!("bad scalar `{value}`"))?;
            vals.insert(name.trim().to_string(), scalar);
        }
        let realization = realize(fam, &vals).map_err(|e| e.to_string())?;
        let mut report = Report::new("verify", args.common.seed);
        report.equation = Some(EquationReport {
            input: args.equation.clone(),
            canonical: render(&eq),
            shape: shape.name().to_string(),
            domain: domain.class.name().to_string(),
            group_op: match domain.group_op {
                GroupOp::Additive => "additive".into(),
                GroupOp::Multiplicative => "multiplicative".into(),
            },
            codomain: domain.codomain.name().to_string(),
        });
        report.verify = Some(VerifyReport {
            family: fam.label.clone(),
            values: realization
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            f: realization.f.to_string(),
            alpha: realization.alpha.as_ref().map(|a| a.to_string()),
            residual_zero: true,
        });
        Ok((report, EXIT_OK))
    })();
    match result {
        Ok((report, code)) => (Ok(report), json, code),
        Err(msg) => (Err(msg), json, EXIT_INPUT),
    }
}
