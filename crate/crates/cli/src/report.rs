//! Report document: one structure, two deterministic renderings (text and
//! versioned JSON).

use feforge_core::solver::{
    Branch, ConstraintSystem, ParamKind, ParamRole, SolutionFamily, SolvedSet,
};
use serde::Serialize;
use std::fmt::Write as _;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: String,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            report_version: REPORT_VERSION,
            tool: format!("feforge {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            seed,
            equation: None,
            families: Vec::new(),
            oracle: None,
            fit: None,
            verify: None,
            status: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} report (version {})", self.tool, self.report_version);
        let _ = writeln!(s, "command: {} (seed {})", self.command, self.seed);
        if let Some(eq) = &self.equation {
            let _ = writeln!(s, "equation: {}", eq.canonical);
            let _ = writeln!(
                s,
                "domain: {} ({}), codomain {}",
                eq.domain, eq.group_op, eq.codomain
            );
            let _ = writeln!(s, "shape: {}", eq.shape);
        }
        if let Some(status) = &self.status {
            let _ = writeln!(s, "status: {status}");
        }
        for fam in &self.families {
            let _ = writeln!(s);
            let _ = writeln!(s, "family {}:", fam.label);
            let _ = writeln!(s, "  {}", fam.f);
            if let Some(a) = &fam.alpha {
                let _ = writeln!(s, "  {a}");
            }
            for p in &fam.params {
                let mut line = format!("  param {}: {}", p.name, p.kind);
                if p.role == "given" {
                    line.push_str(" (given)");
                }
                if let Some(iv) = &p.interval {
                    let _ = write!(line, " in {iv}");
                }
                let _ = writeln!(s, "{line}");
            }
            for c in &fam.constraints {
                let _ = writeln!(s, "  constraint: {c} = 0");
            }
            for b in &fam.branches {
                let _ = writeln!(s, "  branch: {b}");
            }
            for c in &fam.side_conditions {
                let _ = writeln!(s, "  side condition: {c}");
            }
            for form in &fam.regular_forms {
                let _ = writeln!(s, "  regular form: {form}");
            }
            for note in &fam.notes {
                let _ = writeln!(s, "  note: {note}");
            }
            if let Some(v) = &fam.verification {
                let _ = writeln!(s, "  verification: {v}");
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "oracle: shape {} on {} into F{}",
                o.shape, o.group, o.field
            );
            if let Some(g) = &o.given {
                let _ = writeln!(s, "given: {g}");
            }
            let _ = writeln!(s, "solutions: {}", o.solution_count);
            for line in &o.solutions {
                let _ = writeln!(s, "  {line}");
            }
            let _ = writeln!(
                s,
                "family match: {}/{} matched",
                o.matched, o.solution_count
            );
        }
        if let Some(fit) = &self.fit {
            let _ = writeln!(s);
            let _ = writeln!(s, "fit: variant {}", fit.variant);
            let _ = writeln!(s, "  alpha = {}", fit.alpha);
            let _ = writeln!(s, "  gamma = {}", fit.gamma);
            if let Some(rate) = fit.rate {
                let _ = writeln!(s, "  rate  = {rate}");
            }
            let _ = writeln!(s, "  max residual (validation) = {:e}", fit.max_residual);
            let _ = writeln!(
                s,
                "  converged: {} after {} iterations on {} samples",
                fit.converged, fit.iterations, fit.samples
            );
        }
        if let Some(v) = &self.verify {
            let _ = writeln!(s);
            let _ = writeln!(s, "verify: family {}", v.family);
            for (name, value) in &v.values {
                let _ = writeln!(s, "  {name} = {value}");
            }
            let _ = writeln!(s, "  f(x) = {}", v.f);
            if let Some(a) = &v.alpha {
                let _ = writeln!(s, "  a(x) = {a}");
            }
            let _ = writeln!(s, "  residual: {}", if v.residual_zero { "zero" } else { "NONZERO" });
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct EquationReport {
    pub input: String,
    pub canonical: String,
    pub shape: String,
    pub domain: String,
    pub group_op: String,
    pub codomain: String,
}

#[derive(Debug, Serialize)]
pub struct ParamReport {
    pub name: String,
    pub kind: String,
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FamilyReport {
    pub label: String,
    pub f: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub params: Vec<ParamReport>,
    pub constraints: Vec<String>,
    pub branches: Vec<String>,
    pub side_conditions: Vec<String>,
    pub regular_forms: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub shape: String,
    pub group: String,
    pub field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub given: Option<String>,
    pub solution_count: usize,
    pub solutions: Vec<String>,
    pub matched: usize,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub variant: String,
    pub alpha: f64,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    pub max_residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub samples: usize,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub values: Vec<(String, String)>,
    pub f: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub residual_zero: bool,
}

pub fn param_kind_name(kind: &ParamKind) -> String {
    match kind {
        ParamKind::ComplexScalar => "complex scalar".into(),
        ParamKind::RealScalar | ParamKind::RealInterval(..) => "real scalar".into(),
        ParamKind::AdditiveSymbol => "additive symbol".into(),
        ParamKind::ExponentialSymbol => "exponential symbol".into(),
        ParamKind::LogarithmicSymbol => "logarithmic symbol".into(),
    }
}

pub fn family_report(
    fam: &SolutionFamily,
    branches: Option<&SolvedSet>,
    verification: Option<String>,
) -> FamilyReport {
    FamilyReport {
        label: fam.label.clone(),
        f: fam.display_f.clone(),
        alpha: fam.display_alpha.clone(),
        params: fam
            .params
            .iter()
            .map(|p| ParamReport {
                name: p.name.clone(),
                kind: param_kind_name(&p.kind),
                role: match p.role {
                    ParamRole::Given => "given".into(),
                    ParamRole::Unknown => "unknown".into(),
                },
                interval: match &p.kind {
                    ParamKind::RealInterval(lo, hi) => Some(format!("[{lo}, {hi}]")),
                    _ => None,
                },
            })
            .collect(),
        constraints: render_constraints(&fam.constraints),
        branches: branches
            .map(|s| s.branches.iter().map(Branch::render).collect())
            .unwrap_or_default(),
        side_conditions: fam.constraints.side_conditions.clone(),
        regular_forms: fam.regular_forms.clone(),
        notes: fam.notes.clone(),
        verification,
    }
}

pub fn render_constraints(cs: &ConstraintSystem) -> Vec<String> {
    cs.equations.iter().map(|e| format!("{e}")).collect()
}
