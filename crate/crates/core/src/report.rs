//! Serializable analysis reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::analysis::{additivity_check, Analysis, AnalysisError};
use crate::cohomology::{
    block_oracle, class_signature, higher_dirac_cohomology, index_identity_check, vogan_check_any, CohomologyClass, CohomologyReport,
};
use crate::grothendieck::VirtualRModule;
use crate::jordan::verify_blocks;
use crate::linalg::{format_vector, Rational};
use crate::module::ShortExactSequence;
use crate::ndiff::{n_cohomology_dims, six_term_verify, NDifferential};
use crate::source::{module_source, ses_source};
use crate::spin::TensorComplex;
use crate::triangle::triangle_criterion;
use crate::weight::{Parity, Weight};
use crate::zero_ses::ZeroSes;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub degree: usize,
    pub weight: i64,
    pub parity: Parity,
    pub representative: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    /// `H^k` equals the bottoms of the blocks of size `2k+1`, for all `k`.
    #[serde(rename = "thm_3_2")]
    pub block_oracle: bool,
    /// Class weights are `±Λ`; `None` when `Λ` is unknown.
    #[serde(rename = "thm_3_3")]
    pub vogan: Option<bool>,
    /// `I(V) = V ⊗ S⁺ - V ⊗ S⁻`.
    #[serde(rename = "thm_3_5")]
    pub index_identity: bool,
    /// `I(V) = I(U) + I(W)`; `None` without a sequence.
    #[serde(rename = "cor_3_6")]
    pub additivity: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NDifferentialEntry {
    #[serde(rename = "N")]
    pub n: usize,
    /// `dim H^i_D` keyed by `i`.
    #[serde(rename = "H")]
    pub dims: BTreeMap<String, usize>,
    pub six_term_exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleEntry {
    pub dims: [usize; 3],
    pub a: Option<[usize; 3]>,
    pub exists: bool,
}

/// Everything `analyze` prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub module: String,
    pub zero_eigenspace_dim: usize,
    pub jordan_sizes: Vec<usize>,
    pub cohomology: Vec<ClassEntry>,
    pub index: VirtualRModule,
    pub checks: Checks,
    pub n_differential: NDifferentialEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle: Option<TriangleEntry>,
    /// Representatives written in the tensor basis, for the table view.
    #[serde(skip)]
    pub labelled: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions<'a> {
    pub lambda: Option<Vec<Rational>>,
    /// Overrides the default `N`, the smallest even number with `D^N = 0`.
    pub n: Option<usize>,
    /// When present, the analyzed module is its middle term.
    pub ses: Option<&'a ShortExactSequence>,
}

/// `c_1 b_1 + c_2 b_2 + …` with the tensor basis labels.
pub fn format_combination(t: &TensorComplex, c: &CohomologyClass) -> String {
    let mut out = String::new();
    for (i, x) in c.representative.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let label = t.basis_label(c.weight, i);
        let negative = x < &Rational::zero();
        let abs = if negative { -x.clone() } else { x.clone() };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if !abs.is_one() {
            let _ = write!(out, "{abs} ");
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn even_at_least(order: usize) -> usize {
    (order + order % 2).max(2)
}

impl Report {
    pub fn build(name: &str, a: &Analysis, opts: &ReportOptions) -> Result<Report, AnalysisError> {
        let g = &a.zero;
        let blocks_ok = verify_blocks(&a.jordan, g).ok();
        let mut oracle = blocks_ok;
        for k in 0..=g.nilpotency_order() / 2 {
            oracle &= class_signature(&higher_dirac_cohomology(g, k)?) == block_oracle(&a.jordan, k);
        }
        let identity = index_identity_check(&a.tensor, g, &a.report)?;
        let vogan = opts.lambda.as_ref().map(|ls| vogan_check_any(&a.report, ls));

        let mut triangle = None;
        let mut additivity = None;
        let mut six_term_exact = None;
        let mut order = g.nilpotency_order();
        let mut zero_ses = None;
        if let Some(s) = opts.ses {
            additivity = Some(additivity_check(s)?.holds());
            let z = ZeroSes::from_modules(s)?;
            order = order.max(z.nilpotency_order());
            let dims = [&z.u, &z.v, &z.w].map(|g| CohomologyReport::compute(g).map(|r| r.dim()));
            let [h1, h2, h3] = dims;
            let cert = triangle_criterion(h1?, h2?, h3?);
            triangle = Some(TriangleEntry { dims: cert.dims, a: cert.a, exists: cert.exists() });
            zero_ses = Some(z);
        }
        let n = match opts.n {
            Some(n) => n,
            None => even_at_least(order),
        };
        let nd = NDifferential::new(g.clone(), n)?;
        let dims = n_cohomology_dims(&nd)?.into_iter().map(|(i, d)| (i.to_string(), d)).collect();
        if let Some(z) = &zero_ses {
            let mut exact = true;
            for i in 1..n {
                exact &= six_term_verify(z, n, i)?.exact();
            }
            six_term_exact = Some(exact);
        }

        let classes: Vec<&CohomologyClass> = a.report.classes().collect();
        Ok(Report {
            module: name.to_string(),
            zero_eigenspace_dim: g.dim(),
            jordan_sizes: a.jordan.sizes(),
            cohomology: classes
                .iter()
                .map(|c| ClassEntry {
                    degree: c.degree,
                    weight: c.weight.0,
                    parity: c.parity,
                    representative: format_vector(&c.representative),
                })
                .collect(),
            index: a.index(),
            checks: Checks { block_oracle: oracle, vogan, index_identity: identity.holds(), additivity },
            n_differential: NDifferentialEntry { n, dims, six_term_exact },
            triangle,
            labelled: classes.iter().map(|c| format_combination(&a.tensor, c)).collect(),
        })
    }

    /// All checks that were run passed.
    pub fn passed(&self) -> bool {
        let c = &self.checks;
        c.block_oracle
            && c.index_identity
            && c.vogan != Some(false)
            && c.additivity != Some(false)
            && self.n_differential.six_term_exact != Some(false)
            && self.triangle.as_ref().is_none_or(|t| t.exists)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "module               {}", self.module);
        let _ = writeln!(out, "zero-eigenspace dim  {}", self.zero_eigenspace_dim);
        let _ = writeln!(out, "jordan sizes         {:?}", self.jordan_sizes);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<8}{:<8}{:<8}representative", "degree", "weight", "parity");
        for (c, label) in self.cohomology.iter().zip(&self.labelled) {
            let _ = writeln!(out, "{:<8}{:<8}{:<8}{}", c.degree, Weight(c.weight).to_string(), c.parity.symbol(), label);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "index                {}", self.index);
        let show = |b: Option<bool>| b.map_or("n/a".to_string(), |b| if b { "pass".into() } else { "FAIL".into() });
        let _ = writeln!(out, "block oracle         {}", show(Some(self.checks.block_oracle)));
        let _ = writeln!(out, "vogan constraint     {}", show(self.checks.vogan));
        let _ = writeln!(out, "index identity       {}", show(Some(self.checks.index_identity)));
        let _ = writeln!(out, "additivity           {}", show(self.checks.additivity));
        let dims: Vec<String> = self.n_differential.dims.iter().map(|(i, d)| format!("H^{i}={d}")).collect();
        let _ = writeln!(out, "N = {:<17}{}", self.n_differential.n, dims.join(" "));
        let _ = writeln!(out, "six-term exact       {}", show(self.n_differential.six_term_exact));
        if let Some(t) = &self.triangle {
            let a = t.a.map_or("-".to_string(), |a| format!("{a:?}"));
            let _ = writeln!(out, "triangle             dims {:?}, a = {a}, exists {}", t.dims, t.exists);
        }
        out
    }
}

/// The report for a builtin module name or module spec file.
pub fn module_report(name: &str, depth: usize, n: Option<usize>) -> Result<Report, AnalysisError> {
    let src = module_source(name, depth)?;
    let a = Analysis::new(&src.module)?;
    Report::build(name, &a, &ReportOptions { lambda: src.lambda, n, ses: None })
}

/// The report for the middle term of a builtin or file sequence.
pub fn ses_report(name: &str, depth: usize, n: Option<usize>) -> Result<Report, AnalysisError> {
    let src = ses_source(name, depth)?;
    let a = Analysis::new(src.ses.middle())?;
    Report::build(name, &a, &ReportOptions { lambda: src.lambda, n, ses: Some(&src.ses) })
}
