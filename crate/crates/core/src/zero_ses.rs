//! Short exact sequences restricted to generalized 0-eigenspaces.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::jordan::{generalized_zero_eigenspace, GeneralizedZeroEigenspace, JordanError, NilpotentSector};
use crate::linalg::{kernel, solve, Matrix, Rational, Subspace};
use crate::module::ShortExactSequence;
use crate::spin::{build_tensor, SpinError, TensorComplex};
use crate::weight::Weight;

#[derive(Debug, Error)]
pub enum SesError {
    #[error("sequence is not exact on the 0-eigenspaces at weight {weight}: {reason}")]
    NotExact { weight: Weight, reason: String },
    #[error("the three 0-eigenspaces have different weights")]
    WeightMismatch,
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

/// `0 -> U_(0) -> V_(0) -> W_(0) -> 0`, one pair of matrices per weight.
///
/// Matrices act on ambient weight-space coordinates; only their restrictions
/// to the 0-eigenspaces matter.
#[derive(Clone, Debug)]
pub struct ZeroSes {
    pub u: GeneralizedZeroEigenspace,
    pub v: GeneralizedZeroEigenspace,
    pub w: GeneralizedZeroEigenspace,
    pub inclusion: BTreeMap<Weight, Matrix>,
    pub projection: BTreeMap<Weight, Matrix>,
}

/// `x ∈ space` with `m x = target`, free variables set to zero.
pub fn lift_into(m: &Matrix, space: &Subspace, target: &[Rational]) -> Option<Vec<Rational>> {
    let c = solve(&(m * space.basis()), target)?;
    Some(space.basis().mul_vec(&c))
}

fn empty_sector(w: Weight) -> NilpotentSector {
    NilpotentSector::new(w, Matrix::zeros(0, 0), Vec::new(), Subspace::zero(0)).expect("empty sector is valid")
}

impl ZeroSes {
    pub fn new(
        u: GeneralizedZeroEigenspace,
        v: GeneralizedZeroEigenspace,
        w: GeneralizedZeroEigenspace,
        inclusion: BTreeMap<Weight, Matrix>,
        projection: BTreeMap<Weight, Matrix>,
    ) -> Result<Self, SesError> {
        let keys: BTreeSet<Weight> = v.sectors().keys().copied().collect();
        let same = |g: &GeneralizedZeroEigenspace| g.sectors().keys().copied().collect::<BTreeSet<_>>() == keys;
        let maps_same = inclusion.keys().copied().collect::<BTreeSet<_>>() == keys
            && projection.keys().copied().collect::<BTreeSet<_>>() == keys;
        if !same(&u) || !same(&w) || !maps_same {
            return Err(SesError::WeightMismatch);
        }
        let ses = ZeroSes { u, v, w, inclusion, projection };
        for &wt in &keys {
            ses.check_weight(wt).map_err(|reason| SesError::NotExact { weight: wt, reason })?;
        }
        Ok(ses)
    }

    /// Restricts a module sequence to its generalized 0-eigenspaces.
    ///
    /// Weights where some module is outside its safe window are dropped,
    /// provided no module has a nonzero 0-eigenspace there.
    pub fn from_modules(s: &ShortExactSequence) -> Result<Self, SesError> {
        let tensors = [build_tensor(s.sub())?, build_tensor(s.middle())?, build_tensor(s.quotient())?];
        let zeros = [
            generalized_zero_eigenspace(&tensors[0])?,
            generalized_zero_eigenspace(&tensors[1])?,
            generalized_zero_eigenspace(&tensors[2])?,
        ];
        let weights: BTreeSet<Weight> = tensors.iter().flat_map(|t| t.blocks().keys().copied()).collect();
        let mut sectors: [Vec<NilpotentSector>; 3] = Default::default();
        let mut inclusion = BTreeMap::new();
        let mut projection = BTreeMap::new();
        for wt in weights {
            let unsafe_somewhere = tensors.iter().any(|t| t.block(wt).is_some() && !t.is_safe(wt));
            if unsafe_somewhere {
                if zeros.iter().any(|g| g.sector(wt).is_some_and(|s| s.dim() > 0)) {
                    return Err(JordanError::ShallowTruncation { weight: wt }.into());
                }
                continue;
            }
            for (n, g) in zeros.iter().enumerate() {
                sectors[n].push(g.sector(wt).cloned().unwrap_or_else(|| empty_sector(wt)));
            }
            inclusion.insert(wt, tensor_map(&tensors[0], &tensors[1], &s.inclusion.matrix, wt));
            projection.insert(wt, tensor_map(&tensors[1], &tensors[2], &s.projection.matrix, wt));
        }
        let [su, sv, sw] = sectors;
        Self::new(
            GeneralizedZeroEigenspace::from_sectors(su),
            GeneralizedZeroEigenspace::from_sectors(sv),
            GeneralizedZeroEigenspace::from_sectors(sw),
            inclusion,
            projection,
        )
    }

    pub fn weights(&self) -> impl Iterator<Item = Weight> + '_ {
        self.v.sectors().keys().copied()
    }

    /// A common nilpotency order: the largest of the three.
    pub fn nilpotency_order(&self) -> usize {
        [&self.u, &self.v, &self.w].iter().map(|g| g.nilpotency_order()).max().unwrap_or(0)
    }

    pub fn sectors(&self, wt: Weight) -> (&NilpotentSector, &NilpotentSector, &NilpotentSector) {
        (self.u.sector(wt).unwrap(), self.v.sector(wt).unwrap(), self.w.sector(wt).unwrap())
    }

    fn check_weight(&self, wt: Weight) -> Result<(), String> {
        let (su, sv, sw) = self.sectors(wt);
        let (inc, proj) = (&self.inclusion[&wt], &self.projection[&wt]);
        if inc.rows() != sv.ambient_dim() || inc.cols() != su.ambient_dim() {
            return Err("inclusion has the wrong shape".into());
        }
        if proj.rows() != sw.ambient_dim() || proj.cols() != sv.ambient_dim() {
            return Err("projection has the wrong shape".into());
        }
        for (m, a, b) in [(inc, su, sv), (proj, sv, sw)] {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if !m.get(i, j).is_zero() && b.parities()[i] != a.parities()[j] {
                        return Err("a map does not preserve parity".into());
                    }
                }
            }
            for x in a.space().vectors() {
                if b.dirac().mul_vec(&m.mul_vec(&x)) != m.mul_vec(&a.dirac().mul_vec(&x)) {
                    return Err("a map does not commute with D".into());
                }
            }
            if !a.space().map(m).is_subspace_of(b.space()).map_err(|e| e.to_string())? {
                return Err("a map leaves the 0-eigenspace".into());
            }
        }
        let image = su.space().map(inc);
        if image.dim() != su.dim() {
            return Err("inclusion is not injective".into());
        }
        if sv.space().map(proj) != *sw.space() {
            return Err("projection is not surjective".into());
        }
        let ker = sv.space().intersect(&kernel(proj)).map_err(|e| e.to_string())?;
        if image != ker {
            return Err("image of the inclusion differs from the kernel of the projection".into());
        }
        Ok(())
    }
}

/// `φ ⊗ id` on the weight-`wt` space of `V ⊗ S`.
pub fn tensor_map(source: &TensorComplex, target: &TensorComplex, m: &Matrix, wt: Weight) -> Matrix {
    let (Some(sb), Some(tb)) = (source.block(wt), target.block(wt)) else {
        let rows = target.block(wt).map_or(0, |b| b.dim());
        let cols = source.block(wt).map_or(0, |b| b.dim());
        return Matrix::zeros(rows, cols);
    };
    let mut out = Matrix::zeros(tb.dim(), sb.dim());
    for (col, b) in sb.basis.iter().enumerate() {
        for (row, t) in tb.basis.iter().enumerate() {
            if t.spin == b.spin {
                out.set(row, col, m.get(t.module_index, b.module_index).clone());
            }
        }
    }
    out
}
