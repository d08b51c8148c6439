//! Builtin module and sequence names, and spec files.
//!
//! Modules: `P`, `verma:<λ>`, `finite:<n>`, `trivial`, `sum:(a,b,…)`, or a
//! path to a module spec file. Sequences: `P`, `infchar`, or a path.

use std::path::Path;

use crate::analysis::AnalysisError;
use crate::linalg::{rat, Rational};
use crate::module::{
    build_finite_dim, build_infchar_sequence, build_module_p, build_verma, direct_sum, load_module_spec, load_ses_spec,
    ShortExactSequence, Sl2Module,
};
use crate::weight::Weight;

/// A module together with what is known about its infinitesimal character.
#[derive(Clone, Debug)]
pub struct ModuleSource {
    pub name: String,
    pub module: Sl2Module,
    /// Candidate values of `Λ` (one per summand), or `None` when unknown.
    pub lambda: Option<Vec<Rational>>,
    /// The module has an honest (not only generalized) infinitesimal character.
    pub has_infchar: bool,
}

fn input(msg: impl Into<String>) -> AnalysisError {
    AnalysisError::Input(msg.into())
}

/// Splits `a,b,(c,d)` at top-level commas.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

fn builtin(name: &str, depth: usize) -> Result<Option<ModuleSource>, AnalysisError> {
    let simple = |module: Sl2Module, lambda: i64, has_infchar: bool| ModuleSource {
        name: name.to_string(),
        module,
        lambda: Some(vec![rat(lambda)]),
        has_infchar,
    };
    if name == "P" {
        return Ok(Some(simple(build_module_p(depth)?.0, 1, false)));
    }
    if name == "trivial" {
        return Ok(Some(simple(build_finite_dim(1)?, 1, true)));
    }
    if let Some(rest) = name.strip_prefix("verma:") {
        let lambda: i64 = rest.trim().parse().map_err(|_| input(format!("bad highest weight in {name:?}")))?;
        return Ok(Some(simple(build_verma(Weight(lambda), depth)?, lambda + 1, true)));
    }
    if let Some(rest) = name.strip_prefix("finite:") {
        let n: usize = rest.trim().parse().map_err(|_| input(format!("bad dimension in {name:?}")))?;
        return Ok(Some(simple(build_finite_dim(n)?, n as i64, true)));
    }
    if let Some(rest) = name.strip_prefix("sum:") {
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| input(format!("expected sum:(a,b,…), got {name:?}")))?;
        let mut modules = Vec::new();
        let mut lambdas = Vec::new();
        let mut known = true;
        let mut has_infchar = true;
        for part in split_top_level(inner) {
            let s = builtin(part, depth)?.ok_or_else(|| input(format!("unknown summand {part:?}")))?;
            modules.push(s.module);
            match s.lambda {
                Some(l) => lambdas.extend(l),
                None => known = false,
            }
            has_infchar &= s.has_infchar;
        }
        if modules.is_empty() {
            return Err(input("empty sum"));
        }
        lambdas.sort();
        lambdas.dedup();
        has_infchar &= lambdas.len() == 1;
        return Ok(Some(ModuleSource {
            name: name.to_string(),
            module: direct_sum(&modules),
            lambda: known.then_some(lambdas),
            has_infchar,
        }));
    }
    Ok(None)
}

pub fn is_builtin_module(name: &str) -> bool {
    name == "P" || name == "trivial" || ["verma:", "finite:", "sum:"].iter().any(|p| name.starts_with(p))
}

/// Resolves a builtin name, or else reads a module spec file.
pub fn module_source(name: &str, depth: usize) -> Result<ModuleSource, AnalysisError> {
    if let Some(s) = builtin(name, depth)? {
        return Ok(s);
    }
    let text = std::fs::read_to_string(Path::new(name))
        .map_err(|e| input(format!("{name:?} is neither a builtin module nor a readable file: {e}")))?;
    Ok(ModuleSource { name: name.to_string(), module: load_module_spec(&text)?, lambda: None, has_infchar: false })
}

#[derive(Clone, Debug)]
pub struct SesSource {
    pub name: String,
    pub ses: ShortExactSequence,
    /// `Λ` candidates for the middle module, when known.
    pub lambda: Option<Vec<Rational>>,
}

pub fn is_builtin_ses(name: &str) -> bool {
    name == "P" || name == "infchar"
}

pub fn ses_source(name: &str, depth: usize) -> Result<SesSource, AnalysisError> {
    let (ses, lambda) = match name {
        "P" => (build_module_p(depth)?.1, Some(vec![rat(1)])),
        "infchar" => (build_infchar_sequence(depth)?, Some(vec![rat(1)])),
        path => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| input(format!("{path:?} is neither a builtin sequence nor a readable file: {e}")))?;
            (load_ses_spec(&text)?, None)
        }
    };
    Ok(SesSource { name: name.to_string(), ses, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        assert_eq!(module_source("P", 8).unwrap().module.dim(), 15);
        assert_eq!(module_source("verma:-2", 8).unwrap().lambda, Some(vec![rat(-1)]));
        assert_eq!(module_source("finite:3", 8).unwrap().module.dim(), 3);
        assert!(module_source("trivial", 8).unwrap().has_infchar);
        let s = module_source("sum:(verma:0, sum:(finite:1,trivial))", 8).unwrap();
        assert_eq!(s.module.dim(), 10);
        assert_eq!(s.lambda, Some(vec![rat(1)]));
        assert!(s.has_infchar);
        assert!(!module_source("sum:(verma:0,finite:2)", 8).unwrap().has_infchar);
        assert!(matches!(module_source("verma:x", 8), Err(AnalysisError::Input(_))));
        assert!(matches!(module_source("/no/such/file.json", 8), Err(AnalysisError::Input(_))));
    }

    #[test]
    fn sequences_resolve() {
        assert_eq!(ses_source("P", 8).unwrap().ses.middle().dim(), 15);
        assert_eq!(ses_source("infchar", 8).unwrap().ses.quotient().dim(), 1);
    }
}
