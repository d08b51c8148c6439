//! Higher Dirac cohomology `H^k(V)`, its top and intermediate variants, and the
//! Dirac index.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::grothendieck::VirtualRModule;
use crate::jordan::{GeneralizedZeroEigenspace, JordanDecomposition, JordanError, NilpotentSector};
use crate::linalg::{format_vector, rat, Matrix, Rational, Subspace};
use crate::spin::{parity_character, SpinError, TensorComplex};
use crate::weight::{Parity, Weight};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("intermediate index {i} exceeds degree {k}")]
    IndexOutOfRange { k: usize, i: usize },
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

/// A homogeneous representative of a class in one of the cohomology functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub weight: Weight,
    pub parity: Parity,
    /// Coordinates in the weight space of `V ⊗ S`.
    pub representative: Vec<Rational>,
}

impl CohomologyClass {
    pub fn representative_strings(&self) -> Vec<String> {
        format_vector(&self.representative)
    }
}

/// Collects the classes of `num / den`, computed sector by sector.
fn classes<F>(g: &GeneralizedZeroEigenspace, degree: usize, spaces: F) -> Result<Vec<CohomologyClass>, JordanError>
where
    F: Fn(&NilpotentSector) -> Result<(Subspace, Subspace), JordanError>,
{
    let mut out = Vec::new();
    for s in g.sectors().values() {
        let (num, den) = spaces(s)?;
        let q = s.graded_quotient(&num, &den)?;
        out.extend(q.classes.into_iter().map(|(parity, representative)| CohomologyClass {
            degree,
            weight: s.weight(),
            parity,
            representative,
        }));
    }
    Ok(out)
}

fn meet(a: &Subspace, b: &Subspace) -> Result<Subspace, JordanError> {
    Ok(a.intersect(b)?)
}

/// `H^k = Im D^{2k} ∩ Ker D / Im D^{2k+1} ∩ Ker D`.
pub fn higher_dirac_cohomology(g: &GeneralizedZeroEigenspace, k: usize) -> Result<Vec<CohomologyClass>, JordanError> {
    classes(g, k, |s| {
        let ker = s.ker_pow(1);
        Ok((meet(&s.im_pow(2 * k), &ker)?, meet(&s.im_pow(2 * k + 1), &ker)?))
    })
}

/// `H^k_top = Ker D^{2k+1} / (Im D ∩ Ker D^{2k+1} + Ker D^{2k})`.
pub fn h_top(g: &GeneralizedZeroEigenspace, k: usize) -> Result<Vec<CohomologyClass>, JordanError> {
    classes(g, k, |s| {
        let num = s.ker_pow(2 * k + 1);
        let den = meet(&s.im_pow(1), &num)?.sum(&s.ker_pow(2 * k))?;
        Ok((num, den))
    })
}

/// `H^k_i`, which picks the `(2k+1-2i)`-th vector of each block of size `2k+1`.
///
/// `i = k` gives `H^k` and `i = 0` gives `H^k_top`.
pub fn h_intermediate(g: &GeneralizedZeroEigenspace, k: usize, i: usize) -> Result<Vec<CohomologyClass>, CohomologyError> {
    if i > k {
        return Err(CohomologyError::IndexOutOfRange { k, i });
    }
    let height = 2 * k + 1 - 2 * i;
    Ok(classes(g, k, |s| {
        let im = s.im_pow(2 * i);
        let num = meet(&im, &s.ker_pow(height))?;
        let den = meet(&s.im_pow(2 * i + 1), &s.ker_pow(height))?.sum(&meet(&im, &s.ker_pow(height - 1))?)?;
        Ok((num, den))
    })?)
}

/// Bottoms of the blocks of size exactly `2k+1`, sorted.
pub fn block_oracle(d: &JordanDecomposition, k: usize) -> Vec<(Weight, Parity)> {
    let mut out: Vec<_> =
        d.blocks.iter().filter(|b| b.size() == 2 * k + 1).map(|b| (b.weight, b.bottom_parity)).collect();
    out.sort();
    out
}

/// Sorted `(weight, parity)` data of a list of classes.
pub fn class_signature(classes: &[CohomologyClass]) -> Vec<(Weight, Parity)> {
    let mut out: Vec<_> = classes.iter().map(|c| (c.weight, c.parity)).collect();
    out.sort();
    out
}

/// Checks that `D^{2k}` maps the `H^k_top` representatives onto a basis of `H^k`.
pub fn top_bottom_iso(g: &GeneralizedZeroEigenspace, k: usize) -> Result<bool, JordanError> {
    for s in g.sectors().values() {
        let top_num = s.ker_pow(2 * k + 1);
        let top_den = meet(&s.im_pow(1), &top_num)?.sum(&s.ker_pow(2 * k))?;
        let tops = s.graded_quotient(&top_num, &top_den)?;
        let ker = s.ker_pow(1);
        let bottoms = s.graded_quotient(&meet(&s.im_pow(2 * k), &ker)?, &meet(&s.im_pow(2 * k + 1), &ker)?)?;
        if tops.dim() != bottoms.dim() {
            return Ok(false);
        }
        let power = s.power(2 * k);
        let mut columns = Vec::new();
        for (_, t) in &tops.classes {
            let image = power.mul_vec(t);
            match bottoms.coordinates(&image) {
                Ok(c) => columns.push(c),
                Err(_) => return Ok(false),
            }
        }
        if Matrix::from_columns(bottoms.dim(), &columns).rank() != bottoms.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H(V) = ⊕_k H^k(V)`.
#[derive(Clone, Debug, Default)]
pub struct CohomologyReport {
    pub degrees: BTreeMap<usize, Vec<CohomologyClass>>,
}

impl CohomologyReport {
    /// Every nonzero `H^k`; degrees with `2k+1` above the nilpotency order are
    /// zero and omitted.
    pub fn compute(g: &GeneralizedZeroEigenspace) -> Result<Self, JordanError> {
        let mut degrees = BTreeMap::new();
        let mut k = 0;
        while 2 * k < g.nilpotency_order() {
            let c = higher_dirac_cohomology(g, k)?;
            if !c.is_empty() {
                degrees.insert(k, c);
            }
            k += 1;
        }
        Ok(CohomologyReport { degrees })
    }

    pub fn classes(&self) -> impl Iterator<Item = &CohomologyClass> {
        self.degrees.values().flatten()
    }

    pub fn degree(&self, k: usize) -> &[CohomologyClass] {
        self.degrees.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self) -> usize {
        self.classes().count()
    }

    /// Sorted `(degree, weight, parity)` data.
    pub fn signature(&self) -> Vec<(usize, Weight, Parity)> {
        let mut out: Vec<_> = self.classes().map(|c| (c.degree, c.weight, c.parity)).collect();
        out.sort();
        out
    }

    /// `H(V)^p` as an honest weight multiset.
    pub fn part(&self, p: Parity) -> VirtualRModule {
        self.classes().filter(|c| c.parity == p).map(|c| (c.weight, 1)).collect()
    }

    /// Weights of all classes, parity ignored.
    pub fn weight_multiset(&self) -> VirtualRModule {
        self.classes().map(|c| (c.weight, 1)).collect()
    }

    /// The classical Dirac cohomology `H^0`.
    pub fn classical(&self) -> CohomologyReport {
        CohomologyReport { degrees: self.degrees.iter().filter(|(k, _)| **k == 0).map(|(k, v)| (*k, v.clone())).collect() }
    }
}

/// `I(V) = H(V)⁺ - H(V)⁻`.
pub fn dirac_index(report: &CohomologyReport) -> VirtualRModule {
    report.classes().map(|c| (c.weight, c.parity.sign())).collect()
}

/// The index built from `H^0` alone.
pub fn classical_index(report: &CohomologyReport) -> VirtualRModule {
    dirac_index(&report.classical())
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexIdentity {
    pub index: VirtualRModule,
    /// `V ⊗ S⁺ - V ⊗ S⁻` summed over every safe weight.
    pub character: VirtualRModule,
    /// The same character restricted to the generalized 0-eigenspace.
    pub zero_part: VirtualRModule,
    pub classical_index: VirtualRModule,
}

impl IndexIdentity {
    pub fn holds(&self) -> bool {
        self.index == self.character && self.character == self.zero_part
    }

    pub fn classical_holds(&self) -> bool {
        self.classical_index == self.character
    }
}

/// Compares `I(V)` with `V ⊗ S⁺ - V ⊗ S⁻`. Weight spaces where `D` is
/// invertible contribute zero to the character, which `zero_part` confirms.
pub fn index_identity_check(
    t: &TensorComplex,
    g: &GeneralizedZeroEigenspace,
    report: &CohomologyReport,
) -> Result<IndexIdentity, CohomologyError> {
    Ok(IndexIdentity {
        index: dirac_index(report),
        character: parity_character(t, t.safe_weights())?,
        zero_part: g.parity_character(),
        classical_index: classical_index(report),
    })
}

/// Every class weight `γ` satisfies `γ ∈ {Λ, -Λ}` (here `ρ_k = 0`).
pub fn vogan_check(report: &CohomologyReport, lambda: &Rational) -> bool {
    vogan_check_any(report, std::slice::from_ref(lambda))
}

/// As [`vogan_check`], each class matching one of several `Λ` (one per
/// summand of a direct sum).
pub fn vogan_check_any(report: &CohomologyReport, lambdas: &[Rational]) -> bool {
    report.classes().all(|c| {
        let gamma = rat(c.weight.0);
        lambdas.iter().any(|l| &gamma == l || gamma == -l.clone())
    })
}

/// `H(V) = H^0(V)`: nothing in positive degree.
pub fn infchar_degeneration_check(report: &CohomologyReport) -> bool {
    report.degrees.keys().all(|&k| k == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{generalized_zero_eigenspace, jordan_decomposition};
    use crate::linalg::frac;
    use crate::module::{build_finite_dim, build_module_p, build_verma, direct_sum, Sl2Module};
    use crate::spin::{build_tensor, SpinSymbol};

    fn analyze(m: &Sl2Module) -> (TensorComplex, GeneralizedZeroEigenspace, CohomologyReport) {
        let t = build_tensor(m).unwrap();
        let g = generalized_zero_eigenspace(&t).unwrap();
        let r = CohomologyReport::compute(&g).unwrap();
        (t, g, r)
    }

    fn p() -> Sl2Module {
        build_module_p(8).unwrap().0
    }

    fn vi(w: i64) -> VirtualRModule {
        VirtualRModule::single(Weight(w), 1)
    }

    fn proportional(a: &[Rational], b: &[Rational]) -> bool {
        let n = a.len();
        Subspace::span(n, [a.to_vec()]) == Subspace::span(n, [b.to_vec()])
    }

    #[test]
    fn p_higher_cohomology() {
        let (t, g, r) = analyze(&p());
        let h0 = higher_dirac_cohomology(&g, 0).unwrap();
        assert_eq!(class_signature(&h0), vec![(Weight(1), Parity::Odd)]);
        let v0e = t.unit_vector(Weight(1), "v0", SpinSymbol::Ecl).unwrap();
        assert!(proportional(&h0[0].representative, &v0e));
        assert_eq!(class_signature(&higher_dirac_cohomology(&g, 1).unwrap()), vec![(Weight(-1), Parity::Odd)]);
        assert!(higher_dirac_cohomology(&g, 2).unwrap().is_empty());
        assert_eq!(r.signature(), vec![(0, Weight(1), Parity::Odd), (1, Weight(-1), Parity::Odd)]);
        assert!(r.part(Parity::Even).is_zero());
    }

    #[test]
    fn oracle_matches_on_fixtures() {
        let modules = [
            p(),
            build_verma(Weight(0), 8).unwrap(),
            build_verma(Weight(-2), 8).unwrap(),
            build_verma(Weight(3), 10).unwrap(),
            build_finite_dim(1).unwrap(),
            build_finite_dim(4).unwrap(),
        ];
        for m in &modules {
            let (_, g, _) = analyze(m);
            let d = jordan_decomposition(&g).unwrap();
            for k in 0..4 {
                assert_eq!(class_signature(&higher_dirac_cohomology(&g, k).unwrap()), block_oracle(&d, k));
                assert_eq!(h_top(&g, k).unwrap().len(), higher_dirac_cohomology(&g, k).unwrap().len());
                assert!(top_bottom_iso(&g, k).unwrap());
                assert_eq!(
                    class_signature(&h_intermediate(&g, k, k).unwrap()),
                    class_signature(&higher_dirac_cohomology(&g, k).unwrap())
                );
                assert_eq!(class_signature(&h_intermediate(&g, k, 0).unwrap()), class_signature(&h_top(&g, k).unwrap()));
            }
        }
    }

    #[test]
    fn p_top_and_intermediate() {
        let (t, g, _) = analyze(&p());
        let top = h_top(&g, 1).unwrap();
        assert_eq!(class_signature(&top), vec![(Weight(-1), Parity::Odd)]);
        // the top class is w-2⊗e modulo Ker D²
        let s = g.sector(Weight(-1)).unwrap();
        let w = t.unit_vector(Weight(-1), "w-2", SpinSymbol::Ecl).unwrap();
        let q = s.graded_quotient(s.space(), &s.ker_pow(2)).unwrap();
        assert!(!q.coordinates(&top[0].representative).unwrap().iter().all(|x| *x == rat(0)));
        assert!(!q.coordinates(&w).unwrap().iter().all(|x| *x == rat(0)));
        let bottom = s.power(2).mul_vec(&w);
        assert!(proportional(&bottom, &t.unit_vector(Weight(-1), "v-2", SpinSymbol::Ecl).unwrap()));
        assert_eq!(class_signature(&h_top(&g, 0).unwrap()), vec![(Weight(1), Parity::Odd)]);
        for i in 0..=1 {
            assert_eq!(class_signature(&h_intermediate(&g, 1, i).unwrap()), vec![(Weight(-1), Parity::Odd)]);
        }
        assert!(matches!(h_intermediate(&g, 1, 2), Err(CohomologyError::IndexOutOfRange { .. })));
    }

    #[test]
    fn indices() {
        let (t, g, r) = analyze(&p());
        let id = index_identity_check(&t, &g, &r).unwrap();
        assert_eq!(id.index, &(-&vi(1)) - &vi(-1));
        assert!(id.holds());
        assert!(!id.classical_holds());
        assert_eq!(id.classical_index, -&vi(1));

        let (_, _, r0) = analyze(&build_verma(Weight(0), 8).unwrap());
        assert_eq!(dirac_index(&r0), -&vi(1));
        let (_, _, r2) = analyze(&build_verma(Weight(-2), 8).unwrap());
        assert_eq!(dirac_index(&r2), -&vi(-1));
        assert_eq!(dirac_index(&r), &dirac_index(&r0) + &dirac_index(&r2));
        assert_ne!(classical_index(&r), &classical_index(&r0) + &classical_index(&r2));

        let (t1, g1, r1) = analyze(&build_finite_dim(1).unwrap());
        let id = index_identity_check(&t1, &g1, &r1).unwrap();
        assert!(id.holds());
        assert_eq!(id.index, &vi(-1) - &vi(1));
        assert!(dirac_index(&CohomologyReport::default()).is_zero());
    }

    #[test]
    fn vogan_and_degeneration() {
        let (_, _, r) = analyze(&p());
        assert!(vogan_check(&r, &rat(1)));
        assert!(!vogan_check(&r, &rat(5)));
        assert!(!infchar_degeneration_check(&r));
        let (_, _, r2) = analyze(&build_verma(Weight(-2), 8).unwrap());
        assert!(vogan_check(&r2, &rat(1)));
        assert!(infchar_degeneration_check(&r2));
        let (_, _, r0) = analyze(&build_verma(Weight(0), 8).unwrap());
        assert!(infchar_degeneration_check(&r0));
        assert!(!vogan_check(&r0, &frac(1, 2)));
        let (_, _, r5) = analyze(&build_finite_dim(5).unwrap());
        assert!(vogan_check(&r5, &rat(5)));
    }

    #[test]
    fn direct_sum_concatenates() {
        let a = build_verma(Weight(0), 8).unwrap();
        let b = build_finite_dim(3).unwrap();
        let (_, _, ra) = analyze(&a);
        let (_, _, rb) = analyze(&b);
        let (_, _, rs) = analyze(&direct_sum(&[a, b]));
        let mut both = ra.signature();
        both.extend(rb.signature());
        both.sort();
        assert_eq!(rs.signature(), both);
    }
}
