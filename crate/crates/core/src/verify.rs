//! Pass/fail summaries of every checker, for modules and for sequences.

use std::fmt;

use serde::Serialize;

use crate::analysis::{additivity_check, Analysis, AnalysisError};
use crate::cohomology::{
    block_oracle, class_signature, h_intermediate, h_top, higher_dirac_cohomology, index_identity_check,
    infchar_degeneration_check, top_bottom_iso, vogan_check_any,
};
use crate::jordan::{jordan_decomposition_seeded, verify_blocks};
use crate::linalg::Rational;
use crate::ndiff::{
    block_contribution, n_cohomology, remark_expressions, six_term_verify, stable_alternating_sum, tilde_identities,
    NDifferential,
};
use crate::source::{ModuleSource, SesSource};
use crate::triangle::{build_triangle, compatible_decomposition, triangle_criterion};
use crate::zero_ses::ZeroSes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A classical-functor comparison failed exactly where it is expected to.
    ExpectedFailure,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedFailure => "expected failure reproduced",
            Verdict::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifySummary {
    pub subject: String,
    pub lines: Vec<CheckLine>,
}

impl VerifySummary {
    fn push(&mut self, name: &str, verdict: Verdict, detail: impl Into<String>) {
        self.lines.push(CheckLine { name: name.to_string(), verdict, detail: detail.into() });
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.push(name, if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.verdict != Verdict::Fail)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{}\n", self.subject);
        for l in &self.lines {
            out.push_str(&format!("  {:<34} {:<28} {}\n", l.name, l.verdict.to_string(), l.detail));
        }
        out
    }
}

/// `Pass` when the classical functor agrees, `ExpectedFailure` when it
/// disagrees and `H` has classes in positive degree, `Fail` otherwise.
fn classical_verdict(agrees: bool, higher_classes: bool) -> Verdict {
    match (agrees, higher_classes) {
        (true, false) => Verdict::Pass,
        (false, true) => Verdict::ExpectedFailure,
        _ => Verdict::Fail,
    }
}

fn verify_analysis(
    s: &mut VerifySummary,
    a: &Analysis,
    lambda: Option<&[Rational]>,
    has_infchar: bool,
) -> Result<(), AnalysisError> {
    let g = &a.zero;
    let blocks = verify_blocks(&a.jordan, g);
    s.check("Jordan chains", blocks.ok(), format!("sizes {:?}", blocks.sizes));
    let again = jordan_decomposition_seeded(g, 17)?;
    s.check("re-decomposition invariance", again.signature() == a.jordan.signature(), "");

    let top_k = g.nilpotency_order() / 2;
    let mut oracle = true;
    let mut iso = true;
    let mut variants = true;
    for k in 0..=top_k {
        let h = higher_dirac_cohomology(g, k)?;
        oracle &= class_signature(&h) == block_oracle(&a.jordan, k);
        iso &= top_bottom_iso(g, k)? && h_top(g, k)?.len() == h.len();
        for i in 0..=k {
            variants &= class_signature(&h_intermediate(g, k, i)?) == class_signature(&h);
        }
    }
    s.check("H^k = odd block bottoms", oracle, format!("H = {}", a.report.signature().len()));
    s.check("top/bottom isomorphism", iso, "");
    s.check("intermediate functors", variants, "");

    match lambda {
        Some(ls) => {
            let shown: Vec<String> = ls.iter().map(ToString::to_string).collect();
            s.check("weights are ±Λ", vogan_check_any(&a.report, ls), format!("Λ ∈ {{{}}}", shown.join(", ")));
        }
        None => s.push("weights are ±Λ", Verdict::Skipped, "Λ unknown"),
    }
    if has_infchar {
        s.check("H = H^0", infchar_degeneration_check(&a.report), "");
    }

    let id = index_identity_check(&a.tensor, g, &a.report)?;
    s.check("index identity", id.holds(), format!("I = {}", id.index));
    let higher = a.report.degrees.keys().any(|&k| k > 0);
    s.push(
        "classical index identity",
        classical_verdict(id.classical_holds(), higher),
        format!("H^0 index {} vs {}", id.classical_index, id.character),
    );

    let order = g.nilpotency_order();
    let n = (order + order % 2).max(2);
    let h = a.report.weight_multiset();
    let mut stable = true;
    let mut rewritten = true;
    let mut tilde = true;
    for n in [n, n + 2] {
        let nd = NDifferential::new(g.clone(), n)?;
        stable &= stable_alternating_sum(&nd)? == h;
        let (x, y) = remark_expressions(&nd)?;
        rewritten &= x == h && y == h;
        tilde &= tilde_identities(&nd)?;
    }
    s.check("alternating sum of H^i_D", stable, format!("N = {n} and {}", n + 2));
    s.check("rewritten H expressions", rewritten, "");
    s.check("tilde functor identities", tilde, "");

    let mut predicate = true;
    for n in order.max(1)..=order + 2 {
        let nd = NDifferential::new(g.clone(), n)?;
        for i in 1..n {
            let expected: usize = a
                .jordan
                .blocks
                .iter()
                .map(|b| (1..=b.size()).filter(|&j| block_contribution(j, b.size(), n, i)).count())
                .sum();
            predicate &= n_cohomology(&nd, i)?.len() == expected;
        }
    }
    s.check("H^i_D block predicate", predicate, "");
    Ok(())
}

pub fn verify_module(src: &ModuleSource) -> Result<VerifySummary, AnalysisError> {
    let a = Analysis::new(&src.module)?;
    let mut s = VerifySummary { subject: format!("module {}", src.name), lines: Vec::new() };
    verify_analysis(&mut s, &a, src.lambda.as_deref(), src.has_infchar)?;
    Ok(s)
}

pub fn verify_ses(src: &SesSource) -> Result<VerifySummary, AnalysisError> {
    let mut s = VerifySummary { subject: format!("sequence {}", src.name), lines: Vec::new() };
    let report = src.ses.check()?;
    s.check("short exact sequence", report.holds(), "");
    let a = Analysis::new(src.ses.middle())?;
    verify_analysis(&mut s, &a, src.lambda.as_deref(), false)?;

    let add = additivity_check(&src.ses)?;
    s.check("index additivity", add.holds(), format!("{} = ({}) + ({})", add.indices[1], add.indices[0], add.indices[2]));
    let reports = [src.ses.sub(), src.ses.middle(), src.ses.quotient()].map(Analysis::new);
    let [ru, rv, rw] = reports;
    let (ru, rv, rw) = (ru?, rv?, rw?);
    let higher = [&ru, &rv, &rw].iter().any(|a| a.report.degrees.keys().any(|&k| k > 0));
    s.push(
        "classical index additivity",
        classical_verdict(add.classical_holds(), higher),
        format!("{} vs ({}) + ({})", add.classical[1], add.classical[0], add.classical[2]),
    );

    let z = ZeroSes::from_modules(&src.ses)?;
    let n = {
        let o = z.nilpotency_order();
        (o + o % 2).max(2)
    };
    let mut exact = true;
    let mut well_defined = true;
    for i in 1..n {
        let seq = six_term_verify(&z, n, i)?;
        exact &= seq.exact();
        well_defined &= seq.connecting_well_defined;
    }
    s.check("connecting map well defined", well_defined, "");
    s.check("six-term exactness", exact, format!("N = {n}, i = 1..{}", n - 1));

    let dims = [ru.report.dim(), rv.report.dim(), rw.report.dim()];
    let cert = triangle_criterion(dims[0], dims[1], dims[2]);
    s.check("triangle criterion", cert.exists(), format!("dims {dims:?}, a = {:?}", cert.a));
    let c = compatible_decomposition(&z)?;
    s.check("compatible decomposition", c.verified(), c.failures.join("; "));
    let tri = build_triangle(&c);
    s.check("exact triangle", tri.exact() && tri.dims == dims && cert.a == Some(tri.a), format!("a = {:?}", tri.a));

    let classical = [&ru, &rv, &rw].map(|a| a.report.degree(0).len());
    let classical_cert = triangle_criterion(classical[0], classical[1], classical[2]);
    let verdict = match (classical_cert.exists(), higher) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::ExpectedFailure,
        (false, false) => Verdict::Fail,
    };
    s.push("classical triangle", verdict, format!("H^0 dims {classical:?}"));
    Ok(s)
}
