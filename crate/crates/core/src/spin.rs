//! The spin module, the tensor complex `V ⊗ S` and the Dirac operator.
//!
//! For the pair `(sl(2), span(h))` the complement is `s = span(e, f)`, its
//! Clifford algebra acts on `S = C·1 ⊕ C·e` and the Dirac operator is
//! `D = e ⊗ f + f ⊗ e`. There is no cubic correction term: it is a sum over
//! triples of distinct basis elements of `s`, and `s` is 2-dimensional.
//!
//! `D` commutes with `h`, so it is stored as one square matrix per weight of
//! `V ⊗ S`. The weight-`μ` space is spanned by `v ⊗ 1` with `v` of weight
//! `μ + 1` followed by `v ⊗ e` with `v` of weight `μ - 1`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::grothendieck::VirtualRModule;
use crate::linalg::{rat, Matrix, Rational};
use crate::module::{check_relations, Generator, Sl2Module};
use crate::weight::{Parity, Weight};

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("module fails {relation} on basis vector {label}")]
    RelationViolation { relation: String, label: String },
    #[error("weight {0} is outside the certified window of the truncated module")]
    UnsafeWeight(Weight),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpinSymbol {
    /// `1`, even, weight `-1`
    One,
    /// `e`, odd, weight `+1`
    Ecl,
}

/// The 2-dimensional spin module. A constant object.
pub struct SpinModule;

impl SpinModule {
    pub const BASIS: [SpinSymbol; 2] = [SpinSymbol::One, SpinSymbol::Ecl];

    pub fn weight(s: SpinSymbol) -> i64 {
        match s {
            SpinSymbol::One => -1,
            SpinSymbol::Ecl => 1,
        }
    }

    pub fn parity(s: SpinSymbol) -> Parity {
        match s {
            SpinSymbol::One => Parity::Even,
            SpinSymbol::Ecl => Parity::Odd,
        }
    }

    /// Clifford action of `e` or `f` on a spin basis vector:
    /// `e·1 = e`, `e·e = 0`, `f·1 = 0`, `f·e = -2`.
    pub fn clifford(g: Generator, s: SpinSymbol) -> Option<(Rational, SpinSymbol)> {
        match (g, s) {
            (Generator::E, SpinSymbol::One) => Some((rat(1), SpinSymbol::Ecl)),
            (Generator::F, SpinSymbol::Ecl) => Some((rat(-2), SpinSymbol::One)),
            _ => None,
        }
    }

    pub fn symbol(s: SpinSymbol) -> &'static str {
        match s {
            SpinSymbol::One => "1",
            SpinSymbol::Ecl => "e",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorBasis {
    pub module_index: usize,
    pub spin: SpinSymbol,
}

/// One weight space of `V ⊗ S` with the Dirac operator restricted to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBlock {
    pub weight: Weight,
    pub basis: Vec<TensorBasis>,
    pub parities: Vec<Parity>,
    pub dirac: Matrix,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, module_index: usize, spin: SpinSymbol) -> Option<usize> {
        self.basis.iter().position(|b| b.module_index == module_index && b.spin == spin)
    }
}

#[derive(Clone, Debug)]
pub struct TensorComplex {
    module: Sl2Module,
    blocks: BTreeMap<Weight, WeightBlock>,
    safe: BTreeSet<Weight>,
}

impl TensorComplex {
    pub fn module(&self) -> &Sl2Module {
        &self.module
    }

    pub fn blocks(&self) -> &BTreeMap<Weight, WeightBlock> {
        &self.blocks
    }

    pub fn block(&self, w: Weight) -> Option<&WeightBlock> {
        self.blocks.get(&w)
    }

    /// Weights whose block equals the block of the untruncated module: both
    /// `μ - 1` and `μ + 1` lie in the trusted window.
    pub fn safe_weights(&self) -> &BTreeSet<Weight> {
        &self.safe
    }

    pub fn is_safe(&self, w: Weight) -> bool {
        self.safe.contains(&w)
    }

    /// True when every module vector the block reads is stored, even if the
    /// weight is not certified. Only the edge block below the lowest stored
    /// weight is incomplete.
    pub fn is_complete(&self, w: Weight) -> bool {
        self.module.is_certified() || self.module.min_weight().is_some_and(|m| w > m)
    }

    /// Human-readable label such as `w-2⊗e`.
    pub fn basis_label(&self, w: Weight, index: usize) -> String {
        let b = self.blocks[&w].basis[index];
        format!("{}⊗{}", self.module.labels()[b.module_index], SpinModule::symbol(b.spin))
    }

    /// Coordinates in the weight-`w` block of a single basis tensor.
    pub fn unit_vector(&self, w: Weight, label: &str, spin: SpinSymbol) -> Option<Vec<Rational>> {
        let block = self.blocks.get(&w)?;
        let idx = block.index_of(self.module.index_of_label(label)?, spin)?;
        let mut v = vec![Rational::zero(); block.dim()];
        v[idx] = rat(1);
        Some(v)
    }
}

/// Assembles `D = e ⊗ γ(f) + f ⊗ γ(e)` weight by weight.
pub fn build_tensor(m: &Sl2Module) -> Result<TensorComplex, SpinError> {
    if let Some(fail) = check_relations(m).failures.first() {
        return Err(SpinError::RelationViolation { relation: fail.relation.to_string(), label: fail.label.clone() });
    }
    let mut weights = BTreeSet::new();
    for &w in m.weights() {
        for s in SpinModule::BASIS {
            weights.insert(w + SpinModule::weight(s));
        }
    }
    let mut blocks = BTreeMap::new();
    for &mu in &weights {
        let mut basis = Vec::new();
        for s in SpinModule::BASIS {
            for i in m.indices_of_weight(mu - SpinModule::weight(s)) {
                basis.push(TensorBasis { module_index: i, spin: s });
            }
        }
        let parities = basis.iter().map(|b| SpinModule::parity(b.spin)).collect();
        let n = basis.len();
        let position = |module_index: usize, spin: SpinSymbol| {
            basis
                .iter()
                .position(|b| b.module_index == module_index && b.spin == spin)
                .expect("D preserves the weight of V ⊗ S")
        };
        let mut dirac = Matrix::zeros(n, n);
        for (col, b) in basis.iter().enumerate() {
            // (x ⊗ γ(y)) with (x, y) = (e, f) and (f, e)
            for (module_gen, clifford_gen) in [(Generator::E, Generator::F), (Generator::F, Generator::E)] {
                let Some((c, s_out)) = SpinModule::clifford(clifford_gen, b.spin) else {
                    continue;
                };
                let action = m.action(module_gen);
                for i in 0..m.dim() {
                    let a = action.get(i, b.module_index);
                    if !a.is_zero() {
                        dirac.add_to(position(i, s_out), col, &(a * &c));
                    }
                }
            }
        }
        blocks.insert(mu, WeightBlock { weight: mu, basis, parities, dirac });
    }
    let safe = weights
        .iter()
        .copied()
        .filter(|&mu| m.is_certified() || mu > m.interior_min_weight())
        .collect();
    Ok(TensorComplex { module: m.clone(), blocks, safe })
}

/// Structure of `D²` on one safe weight space.
#[derive(Clone, Debug)]
pub struct DSquaredEntry {
    pub weight: Weight,
    pub dim: usize,
    pub square: Matrix,
    /// The unique generalized eigenvalue, when `D²` is scalar plus nilpotent.
    pub eigenvalue: Option<Rational>,
    /// Smallest `j` with `(D² - c)^j = 0`, when `eigenvalue = Some(c)`.
    pub nilpotent_index: Option<usize>,
}

pub fn d_squared_check(t: &TensorComplex) -> Vec<DSquaredEntry> {
    let mut out = Vec::new();
    for (&w, block) in &t.blocks {
        if !t.is_safe(w) {
            continue;
        }
        let n = block.dim();
        let square = &block.dirac * &block.dirac;
        let (eigenvalue, nilpotent_index) = if n == 0 {
            (None, None)
        } else {
            // a single generalized eigenvalue must equal trace / n
            let trace = (0..n).fold(Rational::zero(), |acc, i| acc + square.get(i, i));
            let c = trace / rat(n as i64);
            let shifted = &square - &Matrix::identity(n).scale(&c);
            let mut power = Matrix::identity(n);
            let mut index = None;
            for j in 0..=n {
                if power.is_zero() {
                    index = Some(j);
                    break;
                }
                power = &power * &shifted;
            }
            (index.map(|_| c), index)
        };
        out.push(DSquaredEntry { weight: w, dim: n, square, eigenvalue, nilpotent_index });
    }
    out
}

/// `Σ (+[μ] per even basis vector) + Σ (-[μ] per odd basis vector)` over the
/// listed weight spaces.
pub fn parity_character(t: &TensorComplex, weights: &BTreeSet<Weight>) -> Result<VirtualRModule, SpinError> {
    let mut out = VirtualRModule::zero();
    for &w in weights {
        if !t.is_safe(w) {
            return Err(SpinError::UnsafeWeight(w));
        }
        if let Some(block) = t.blocks.get(&w) {
            for p in &block.parities {
                out.add_term(w, p.sign());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;
    use crate::module::{build_finite_dim, build_module_p, build_verma};

    fn entry(t: &TensorComplex, w: i64, to: (&str, SpinSymbol), from: (&str, SpinSymbol)) -> Rational {
        let block = t.block(Weight(w)).unwrap();
        let m = t.module();
        let r = block.index_of(m.index_of_label(to.0).unwrap(), to.1).unwrap();
        let c = block.index_of(m.index_of_label(from.0).unwrap(), from.1).unwrap();
        block.dirac.get(r, c).clone()
    }

    #[test]
    fn dirac_on_p_matches_closed_forms() {
        use SpinSymbol::{Ecl, One};
        let (p, _) = build_module_p(8).unwrap();
        let t = build_tensor(&p).unwrap();
        for k in 0..6i64 {
            let (vk, vk1, vkm1) = (format!("v{}", -2 * k), format!("v{}", -2 * k - 2), format!("v{}", -2 * k + 2));
            let mu = -2 * k - 1;
            if t.is_safe(Weight(mu)) {
                // D(v_{-2k} ⊗ 1) = (k+1) v_{-2k-2} ⊗ e
                assert_eq!(entry(&t, mu, (&vk1, Ecl), (&vk, One)), rat(k + 1));
            }
            if k >= 1 && t.is_safe(Weight(mu + 2)) {
                // D(v_{-2k} ⊗ e) = 2(k-1) v_{-2k+2} ⊗ 1
                assert_eq!(entry(&t, mu + 2, (&vkm1, One), (&vk, Ecl)), rat(2 * (k - 1)));
            }
        }
        for k in 1..6i64 {
            let (wk, wk1, wkm1, vkm1) =
                (format!("w{}", -2 * k), format!("w{}", -2 * k - 2), format!("w{}", -2 * k + 2), format!("v{}", -2 * k + 2));
            let mu = -2 * k - 1;
            if t.is_safe(Weight(mu)) {
                assert_eq!(entry(&t, mu, (&wk1, Ecl), (&wk, One)), rat(k + 1));
            }
            if t.is_safe(Weight(mu + 2)) {
                // D(w_{-2k} ⊗ e) = 2(k-1) w_{-2k+2} ⊗ 1 - (2/k) v_{-2k+2} ⊗ 1
                if k >= 2 {
                    assert_eq!(entry(&t, mu + 2, (&wkm1, One), (&wk, Ecl)), rat(2 * (k - 1)));
                }
                assert_eq!(entry(&t, mu + 2, (&vkm1, One), (&wk, Ecl)), frac(-2, k));
            }
        }
    }

    #[test]
    fn blocks_swap_parity() {
        let (p, _) = build_module_p(8).unwrap();
        let t = build_tensor(&p).unwrap();
        for block in t.blocks().values() {
            for i in 0..block.dim() {
                for j in 0..block.dim() {
                    if !block.dirac.get(i, j).is_zero() {
                        assert_ne!(block.parities[i], block.parities[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_module_has_zero_dirac() {
        let t = build_tensor(&build_finite_dim(1).unwrap()).unwrap();
        assert!(t.blocks().values().all(|b| b.dirac.is_zero()));
        assert_eq!(t.safe_weights().iter().copied().collect::<Vec<_>>(), vec![Weight(-1), Weight(1)]);
        let all = t.safe_weights().clone();
        let chi = parity_character(&t, &all).unwrap();
        assert_eq!(chi, [(Weight(-1), 1), (Weight(1), -1)].into_iter().collect());
        assert!(d_squared_check(&t).iter().all(|e| e.eigenvalue == Some(Rational::zero())));
    }

    #[test]
    fn d_squared_on_v0() {
        let v0 = build_verma(Weight(0), 8).unwrap();
        let t = build_tensor(&v0).unwrap();
        let report = d_squared_check(&t);
        for e in &report {
            // weight -2k-1 carries v_{-2k} ⊗ 1 with D² = 2k(k+1)
            let k = (-e.weight.0 - 1) / 2;
            if e.weight.0 < 0 {
                assert_eq!(e.eigenvalue, Some(rat(2 * k * (k + 1))), "weight {}", e.weight);
            }
        }
        let at = |w: i64| report.iter().find(|e| e.weight == Weight(w)).unwrap().eigenvalue.clone();
        assert_eq!(at(-1), Some(rat(0)));
        assert_eq!(at(-3), Some(rat(4)));
    }

    #[test]
    fn d_squared_on_p_is_scalar_plus_nilpotent() {
        let (p, _) = build_module_p(8).unwrap();
        let t = build_tensor(&p).unwrap();
        for e in d_squared_check(&t) {
            assert!(e.eigenvalue.is_some(), "weight {}", e.weight);
        }
        // a genuine nilpotent part appears at weight -1 (the length-3 chain)
        let e = d_squared_check(&t).into_iter().find(|e| e.weight == Weight(-1)).unwrap();
        assert_eq!(e.eigenvalue, Some(rat(0)));
        assert_eq!(e.nilpotent_index, Some(2));
    }

    #[test]
    fn unsafe_weight_rejected() {
        let v0 = build_verma(Weight(0), 4).unwrap();
        let t = build_tensor(&v0).unwrap();
        let lowest = *t.blocks().keys().next().unwrap();
        assert!(!t.is_safe(lowest));
        let err = parity_character(&t, &[lowest].into_iter().collect()).unwrap_err();
        assert!(matches!(err, SpinError::UnsafeWeight(_)));
    }

    #[test]
    fn deeper_truncation_keeps_safe_blocks() {
        let (p8, _) = build_module_p(8).unwrap();
        let (p12, _) = build_module_p(12).unwrap();
        let (t8, t12) = (build_tensor(&p8).unwrap(), build_tensor(&p12).unwrap());
        for &w in t8.safe_weights() {
            let (a, b) = (t8.block(w).unwrap(), t12.block(w).unwrap());
            assert_eq!(a.dirac, b.dirac, "weight {w}");
            let la: Vec<String> = (0..a.dim()).map(|i| t8.basis_label(w, i)).collect();
            let lb: Vec<String> = (0..b.dim()).map(|i| t12.basis_label(w, i)).collect();
            assert_eq!(la, lb);
        }
    }
}
