//! Random nilpotent operators and short exact sequences with a known Jordan
//! type, and the property suites run on them.
//!
//! Operators are planted Jordan chains conjugated by random parity-preserving
//! invertible matrices, optionally padded with an invertible odd part that
//! the generalized 0-eigenspace has to discard.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::{
    block_oracle, class_signature, dirac_index, h_intermediate, h_top, higher_dirac_cohomology, top_bottom_iso,
    CohomologyReport,
};
use crate::grothendieck::VirtualRModule;
use crate::jordan::{
    jordan_decomposition, jordan_decomposition_seeded, rank_partition, verify_blocks, GeneralizedZeroEigenspace,
    NilpotentSector,
};
use crate::linalg::{rat, Matrix, Subspace};
use crate::ndiff::{
    block_contribution, n_cohomology, remark_expressions, six_term_verify, stable_alternating_sum, tilde_identities,
    NDifferential,
};
use crate::triangle::{build_triangle, compatible_decomposition, triangle_criterion};
use crate::weight::{Parity, Weight};
use crate::zero_ses::ZeroSes;

/// One planted block: `(size, weight, bottom parity)`.
pub type PlantedBlock = (usize, Weight, Parity);

/// Chains `e_1 <- e_2 <- …` in the given order, plus `pairs` invertible odd
/// 2x2 pieces, before conjugation.
fn planted_operator(sizes: &[(usize, Parity)], pairs: &[i64]) -> (Matrix, Vec<Parity>) {
    let n: usize = sizes.iter().map(|s| s.0).sum::<usize>() + 2 * pairs.len();
    let mut d = Matrix::zeros(n, n);
    let mut parities = Vec::with_capacity(n);
    let mut at = 0;
    for &(k, p) in sizes {
        for i in 0..k {
            parities.push(p.shifted(i));
            if i > 0 {
                d.set(at + i - 1, at + i, rat(1));
            }
        }
        at += k;
    }
    for &c in pairs {
        // D a = b, D b = c a
        parities.push(Parity::Even);
        parities.push(Parity::Odd);
        d.set(at + 1, at, rat(1));
        d.set(at, at + 1, rat(c));
        at += 2;
    }
    (d, parities)
}

/// Random invertible matrix preserving the parity decomposition.
pub fn random_graded_invertible<R: Rng>(parities: &[Parity], rng: &mut R) -> Matrix {
    let n = parities.len();
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::zeros(n, n);
    for i in 0..n {
        let diag = [1, -1, 2, 3][rng.random_range(0..4)];
        upper.set(i, i, rat(diag));
        for j in 0..n {
            if parities[i] != parities[j] {
                continue;
            }
            if j < i {
                lower.set(i, j, rat(rng.random_range(-2..=2)));
            } else if j > i {
                upper.set(i, j, rat(rng.random_range(-2..=2)));
            }
        }
    }
    &lower * &upper
}

fn conjugate(d: &Matrix, g: &Matrix) -> Matrix {
    let inv = g.inverse().expect("invertible by construction");
    &(g * d) * &inv
}

/// A random operator with a known Jordan type on its generalized kernel.
#[derive(Clone, Debug)]
pub struct OperatorCase {
    pub planted: Vec<PlantedBlock>,
    pub space: GeneralizedZeroEigenspace,
}

impl OperatorCase {
    /// Plants the given blocks, conjugates each weight space, and adds
    /// `invertible_pairs` invertible 2x2 pieces per weight.
    pub fn plant<R: Rng>(planted: &[PlantedBlock], invertible_pairs: usize, rng: &mut R) -> Self {
        let mut by_weight: BTreeMap<Weight, Vec<(usize, Parity)>> = BTreeMap::new();
        for &(k, w, p) in planted {
            by_weight.entry(w).or_default().push((k, p));
        }
        let mut sectors = Vec::new();
        for (w, sizes) in by_weight {
            let pairs: Vec<i64> = (0..invertible_pairs).map(|_| [1, -1, 2, -3][rng.random_range(0..4)]).collect();
            let (d, parities) = planted_operator(&sizes, &pairs);
            let g = random_graded_invertible(&parities, rng);
            let sector = NilpotentSector::from_operator(w, conjugate(&d, &g), parities).expect("planted operator is valid");
            sectors.push(sector);
        }
        let mut planted = planted.to_vec();
        planted.sort();
        OperatorCase { planted, space: GeneralizedZeroEigenspace::from_sectors(sectors) }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let weights = rng.random_range(1..=2);
        let mut planted = Vec::new();
        for n in 0..weights {
            let w = Weight(2 * n as i64 - 1);
            for _ in 0..rng.random_range(1..=3) {
                let p = if rng.random_bool(0.5) { Parity::Even } else { Parity::Odd };
                planted.push((rng.random_range(1..=5), w, p));
            }
        }
        let pairs = rng.random_range(0..=2);
        Self::plant(&planted, pairs, rng)
    }
}

/// A random sequence `0 -> U -> V -> W -> 0` of direct sums of triples
/// `(chain of size a, chain of size a+b, chain of size b)`, each space
/// conjugated independently.
#[derive(Clone, Debug)]
pub struct SesCase {
    /// `(a, b, weight, bottom parity of V)` per triple.
    pub triples: Vec<(usize, usize, Weight, Parity)>,
    pub ses: ZeroSes,
}

impl SesCase {
    pub fn plant<R: Rng>(triples: &[(usize, usize, Weight, Parity)], rng: &mut R) -> Self {
        let mut by_weight: BTreeMap<Weight, Vec<(usize, usize, Parity)>> = BTreeMap::new();
        for &(a, b, w, p) in triples {
            by_weight.entry(w).or_default().push((a, b, p));
        }
        let mut sectors: [Vec<NilpotentSector>; 3] = Default::default();
        let mut inclusion = BTreeMap::new();
        let mut projection = BTreeMap::new();
        for (w, list) in by_weight {
            let u_sizes: Vec<(usize, Parity)> = list.iter().filter(|t| t.0 > 0).map(|&(a, _, p)| (a, p)).collect();
            let v_sizes: Vec<(usize, Parity)> = list.iter().map(|&(a, b, p)| (a + b, p)).collect();
            let w_sizes: Vec<(usize, Parity)> =
                list.iter().filter(|t| t.1 > 0).map(|&(a, b, p)| (b, p.shifted(a))).collect();
            let (du, pu) = planted_operator(&u_sizes, &[]);
            let (dv, pv) = planted_operator(&v_sizes, &[]);
            let (dw, pw) = planted_operator(&w_sizes, &[]);
            let mut inc = Matrix::zeros(pv.len(), pu.len());
            let mut proj = Matrix::zeros(pw.len(), pv.len());
            let (mut at_u, mut at_v, mut at_w) = (0, 0, 0);
            for &(a, b, _) in &list {
                for i in 0..a {
                    inc.set(at_v + i, at_u + i, rat(1));
                }
                for i in 0..b {
                    proj.set(at_w + i, at_v + a + i, rat(1));
                }
                at_u += a;
                at_v += a + b;
                at_w += b;
            }
            let gu = random_graded_invertible(&pu, rng);
            let gv = random_graded_invertible(&pv, rng);
            let gw = random_graded_invertible(&pw, rng);
            let gu_inv = gu.inverse().expect("invertible");
            let gv_inv = gv.inverse().expect("invertible");
            inclusion.insert(w, &(&gv * &inc) * &gu_inv);
            projection.insert(w, &(&gw * &proj) * &gv_inv);
            for (n, (d, p, g)) in [(du, pu, gu), (dv, pv, gv), (dw, pw, gw)].into_iter().enumerate() {
                let full = Subspace::full(p.len());
                sectors[n].push(NilpotentSector::new(w, conjugate(&d, &g), p, full).expect("planted operator is valid"));
            }
        }
        let [su, sv, sw] = sectors;
        let ses = ZeroSes::new(
            GeneralizedZeroEigenspace::from_sectors(su),
            GeneralizedZeroEigenspace::from_sectors(sv),
            GeneralizedZeroEigenspace::from_sectors(sw),
            inclusion,
            projection,
        )
        .expect("planted sequence is exact");
        SesCase { triples: triples.to_vec(), ses }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut triples = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let (a, b) = loop {
                let a = rng.random_range(0..=3);
                let b = rng.random_range(0..=3);
                if a + b > 0 {
                    break (a, b);
                }
            };
            let w = Weight(if rng.random_bool(0.5) { 1 } else { -1 });
            let p = if rng.random_bool(0.5) { Parity::Even } else { Parity::Odd };
            triples.push((a, b, w, p));
        }
        Self::plant(&triples, rng)
    }
}

fn weight_multiset(r: &CohomologyReport) -> VirtualRModule {
    r.weight_multiset()
}

/// Runs every operator property; returns one message per violation.
pub fn check_operator(case: &OperatorCase, seed: u64) -> Vec<String> {
    let mut bad = Vec::new();
    let g = &case.space;
    let result = (|| -> Result<(), String> {
        let d = jordan_decomposition(g).map_err(|e| e.to_string())?;
        let report = verify_blocks(&d, g);
        if !report.ok() {
            bad.push(format!("chain/parity check: {:?}", report.failures));
        }
        if d.signature() != case.planted {
            bad.push(format!("Jordan type {:?} differs from planted {:?}", d.signature(), case.planted));
        }
        let again = jordan_decomposition_seeded(g, seed).map_err(|e| e.to_string())?;
        if again.signature() != d.signature() || !verify_blocks(&again, g).ok() {
            bad.push("re-decomposition changed the block data".into());
        }
        let mut planted_sizes: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for &(k, w, _) in &case.planted {
            planted_sizes.entry(w).or_default().push(k);
        }
        for v in planted_sizes.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let ranks: BTreeMap<Weight, Vec<usize>> = rank_partition(g).into_iter().filter(|(_, v)| !v.is_empty()).collect();
        if ranks != planted_sizes {
            bad.push(format!("rank partition {ranks:?} differs from planted {planted_sizes:?}"));
        }

        let order = g.nilpotency_order();
        for k in 0..=order / 2 + 1 {
            let h = higher_dirac_cohomology(g, k).map_err(|e| e.to_string())?;
            let planted_bottoms: Vec<(Weight, Parity)> = {
                let mut v: Vec<_> = case.planted.iter().filter(|b| b.0 == 2 * k + 1).map(|b| (b.1, b.2)).collect();
                v.sort();
                v
            };
            if class_signature(&h) != block_oracle(&d, k) || class_signature(&h) != planted_bottoms {
                bad.push(format!("H^{k} disagrees with the odd block bottoms"));
            }
            let top = h_top(g, k).map_err(|e| e.to_string())?;
            if top.len() != h.len() || !top_bottom_iso(g, k).map_err(|e| e.to_string())? {
                bad.push(format!("top/bottom isomorphism fails in degree {k}"));
            }
            for i in 0..=k {
                let mid = h_intermediate(g, k, i).map_err(|e| e.to_string())?;
                if class_signature(&mid) != class_signature(&h) {
                    bad.push(format!("H^{k}_{i} differs from H^{k}"));
                }
            }
        }

        let report = CohomologyReport::compute(g).map_err(|e| e.to_string())?;
        let h = weight_multiset(&report);
        if dirac_index(&report) != g.parity_character() {
            bad.push("index differs from the parity character".into());
        }
        let even = order + order % 2;
        for n in [even.max(2), even.max(2) + 2] {
            let nd = NDifferential::new(g.clone(), n).map_err(|e| e.to_string())?;
            if stable_alternating_sum(&nd).map_err(|e| e.to_string())? != h {
                bad.push(format!("alternating sum with N = {n} differs from H"));
            }
            let (a, b) = remark_expressions(&nd).map_err(|e| e.to_string())?;
            if a != h || b != h {
                bad.push(format!("rewritten expressions {a} / {b} differ from H = {h}"));
            }
            if !tilde_identities(&nd).map_err(|e| e.to_string())? {
                bad.push(format!("tilde functor identities fail for N = {n}"));
            }
        }
        for n in order.max(1)..=order + 2 {
            let nd = NDifferential::new(g.clone(), n).map_err(|e| e.to_string())?;
            for i in 1..n {
                let mut expected: BTreeMap<Weight, i64> = BTreeMap::new();
                for &(k, w, _) in &case.planted {
                    *expected.entry(w).or_default() += (1..=k).filter(|&j| block_contribution(j, k, n, i)).count() as i64;
                }
                let got: VirtualRModule = n_cohomology(&nd, i).map_err(|e| e.to_string())?.iter().map(|c| (c.weight, 1)).collect();
                if got != expected.into_iter().collect::<VirtualRModule>() {
                    bad.push(format!("dim H^{i}_D for N = {n} disagrees with the block predicate"));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        bad.push(format!("error: {e}"));
    }
    bad
}

/// Runs every sequence property; returns one message per violation.
pub fn check_sequence(case: &SesCase) -> Vec<String> {
    let mut bad = Vec::new();
    let z = &case.ses;
    let result = (|| -> Result<(), String> {
        let reports = [&z.u, &z.v, &z.w].map(|g| CohomologyReport::compute(g).map_err(|e| e.to_string()));
        let [ru, rv, rw] = reports;
        let (ru, rv, rw) = (ru?, rv?, rw?);
        if dirac_index(&rv) != &dirac_index(&ru) + &dirac_index(&rw) {
            bad.push("index is not additive".into());
        }
        let order = z.nilpotency_order().max(1);
        for n in [order, order + 1] {
            for i in 1..n {
                let seq = six_term_verify(z, n, i).map_err(|e| e.to_string())?;
                if !seq.connecting_well_defined {
                    bad.push(format!("connecting map depends on the lift (N = {n}, i = {i})"));
                }
                if !seq.exact() {
                    bad.push(format!("six-term sequence not exact (N = {n}, i = {i}): {:?}", seq.exactness()));
                }
            }
        }
        let c = compatible_decomposition(z).map_err(|e| e.to_string())?;
        if !c.verified() {
            bad.push(format!("compatible decomposition: {:?}", c.failures));
        }
        let dims = [ru.dim(), rv.dim(), rw.dim()];
        let cert = triangle_criterion(dims[0], dims[1], dims[2]);
        if !cert.exists() {
            bad.push(format!("dims {dims:?} admit no triangle"));
        }
        let tri = build_triangle(&c);
        if !tri.exact() || tri.dims != dims || cert.a != Some(tri.a) {
            bad.push(format!("triangle {:?} / a {:?} does not match dims {dims:?}", tri.exactness(), tri.a));
        }
        Ok(())
    })();
    if let Err(e) = result {
        bad.push(format!("error: {e}"));
    }
    bad
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub kind: &'static str,
    pub planted: String,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub cases: usize,
    pub operator_cases: usize,
    pub sequence_cases: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Case `n` of a run uses its own generator, so any case can be replayed
/// from `(seed, n)`.
pub fn case_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

/// Each case runs one random operator and one random sequence.
pub fn run_fuzz(seed: u64, cases: usize) -> FuzzSummary {
    let mut counterexamples = Vec::new();
    for n in 0..cases {
        let mut rng = case_rng(seed, n);
        let op = OperatorCase::random(&mut rng);
        let failures = check_operator(&op, rng.random());
        if !failures.is_empty() {
            counterexamples.push(Counterexample { case: n, kind: "operator", planted: format!("{:?}", op.planted), failures });
        }
        let ses = SesCase::random(&mut rng);
        let failures = check_sequence(&ses);
        if !failures.is_empty() {
            counterexamples.push(Counterexample { case: n, kind: "sequence", planted: format!("{:?}", ses.triples), failures });
        }
    }
    FuzzSummary { seed, cases, operator_cases: cases, sequence_cases: cases, counterexamples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_types() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let odd = [(5, Weight(1), Parity::Odd), (3, Weight(1), Parity::Even), (1, Weight(1), Parity::Odd)];
        let case = OperatorCase::plant(&odd, 2, &mut rng);
        assert!(check_operator(&case, 3).is_empty());
        for k in 0..3 {
            assert_eq!(higher_dirac_cohomology(&case.space, k).unwrap().len(), 1);
        }

        let even = [(4, Weight(-1), Parity::Even), (2, Weight(-1), Parity::Odd)];
        let case = OperatorCase::plant(&even, 1, &mut rng);
        assert!(check_operator(&case, 3).is_empty());
        let r = CohomologyReport::compute(&case.space).unwrap();
        assert_eq!(r.dim(), 0);
        assert!(dirac_index(&r).is_zero());
    }

    #[test]
    fn planted_sequence() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let case = SesCase::plant(&[(2, 1, Weight(-1), Parity::Odd), (1, 0, Weight(1), Parity::Odd)], &mut rng);
        assert!(check_sequence(&case).is_empty());
    }

    #[test]
    fn short_run_is_clean_and_deterministic() {
        let a = run_fuzz(1, 12);
        assert!(a.counterexamples.is_empty(), "{:?}", a.counterexamples);
        let b = run_fuzz(1, 12);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
