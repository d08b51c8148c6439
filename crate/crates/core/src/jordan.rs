//! The generalized 0-eigenspace of `D` and its Jordan chains.
//!
//! `D` preserves weights, so the generalized 0-eigenspace splits into one
//! [`NilpotentSector`] per weight: a `D`-invariant subspace of that weight
//! space on which `D` is nilpotent. Each sector is also graded by parity and
//! `D` is odd, so every kernel and image of a power of `D` is graded; all
//! quotients are taken one parity at a time to get homogeneous
//! representatives.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grothendieck::VirtualRModule;
use crate::linalg::{kernel, quotient, rat, solve, LinalgError, Matrix, Quotient, Rational, Subspace};
use crate::spin::TensorComplex;
use crate::weight::{Parity, Weight};

#[derive(Debug, Error)]
pub enum JordanError {
    #[error(
        "generalized 0-eigenspace reaches weight {weight}, outside the certified window; \
         increase the truncation depth"
    )]
    ShallowTruncation { weight: Weight },
    #[error("operator at weight {0} has inconsistent shape")]
    Shape(Weight),
    #[error("operator at weight {0} does not swap parity")]
    NotParitySwapping(Weight),
    #[error("subspace at weight {0} is not invariant under D")]
    NotInvariant(Weight),
    #[error("subspace at weight {0} is not graded by parity")]
    NotGraded(Weight),
    #[error("D is not nilpotent on the subspace at weight {0}")]
    NotNilpotent(Weight),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `D` restricted to one weight of the generalized 0-eigenspace.
#[derive(Clone, Debug)]
pub struct NilpotentSector {
    weight: Weight,
    dirac: Matrix,
    parities: Vec<Parity>,
    space: Subspace,
    /// `powers[j] = D^j`, for `j = 0..=order`.
    powers: Vec<Matrix>,
    /// `Ker D^j` and `Im D^j` inside the sector, for `j = 0..=order`.
    kers: Vec<Subspace>,
    ims: Vec<Subspace>,
    order: usize,
}

impl NilpotentSector {
    /// `space` must be graded, `D`-invariant, and `D` nilpotent on it.
    pub fn new(weight: Weight, dirac: Matrix, parities: Vec<Parity>, space: Subspace) -> Result<Self, JordanError> {
        let n = parities.len();
        if dirac.rows() != n || dirac.cols() != n || space.ambient_dim() != n {
            return Err(JordanError::Shape(weight));
        }
        for i in 0..n {
            for j in 0..n {
                if !dirac.get(i, j).is_zero() && parities[i] == parities[j] {
                    return Err(JordanError::NotParitySwapping(weight));
                }
            }
        }
        if !space.map(&dirac).is_subspace_of(&space)? {
            return Err(JordanError::NotInvariant(weight));
        }
        let graded: usize = Parity::BOTH
            .iter()
            .map(|&p| space.intersect(&parity_subspace(&parities, p)).map(|s| s.dim()))
            .sum::<Result<usize, _>>()?;
        if graded != space.dim() {
            return Err(JordanError::NotGraded(weight));
        }
        let mut powers = vec![Matrix::identity(n)];
        let mut order = 0;
        while !space.map(&powers[order]).is_zero() {
            if order > space.dim() {
                return Err(JordanError::NotNilpotent(weight));
            }
            let next = &powers[order] * &dirac;
            powers.push(next);
            order += 1;
        }
        let kers = powers.iter().map(|p| space.intersect(&kernel(p))).collect::<Result<_, _>>()?;
        let ims = powers.iter().map(|p| space.map(p)).collect();
        Ok(NilpotentSector { weight, dirac, parities, space, powers, kers, ims, order })
    }

    /// Takes the generalized kernel `ker D^n` of the whole weight space.
    pub fn from_operator(weight: Weight, dirac: Matrix, parities: Vec<Parity>) -> Result<Self, JordanError> {
        let n = parities.len();
        if dirac.rows() != n || dirac.cols() != n {
            return Err(JordanError::Shape(weight));
        }
        let space = kernel(&dirac.pow(n));
        Self::new(weight, dirac, parities, space)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn dirac(&self) -> &Matrix {
        &self.dirac
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn ambient_dim(&self) -> usize {
        self.parities.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Smallest `N` with `D^N = 0` on the sector.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `D^j` on the ambient weight space.
    pub fn power(&self, j: usize) -> Matrix {
        match self.powers.get(j) {
            Some(p) => p.clone(),
            None => self.dirac.pow(j),
        }
    }

    pub fn apply_pow(&self, j: usize, v: &[Rational]) -> Vec<Rational> {
        if j > self.order && self.space.contains(v).unwrap_or(false) {
            return vec![Rational::zero(); v.len()];
        }
        self.power(j).mul_vec(v)
    }

    /// `Ker D^j` inside the sector.
    pub fn ker_pow(&self, j: usize) -> Subspace {
        if j >= self.order {
            return self.space.clone();
        }
        self.kers[j].clone()
    }

    /// `Im D^j` of the sector.
    pub fn im_pow(&self, j: usize) -> Subspace {
        if j >= self.order {
            return Subspace::zero(self.ambient_dim());
        }
        self.ims[j].clone()
    }

    /// Coordinate subspace of one parity in the ambient weight space.
    pub fn parity_subspace(&self, p: Parity) -> Subspace {
        parity_subspace(&self.parities, p)
    }

    /// `sub ∩ X^p`.
    pub fn homogeneous(&self, sub: &Subspace, p: Parity) -> Subspace {
        let others: Vec<usize> = (0..self.parities.len()).filter(|&i| self.parities[i] != p).collect();
        sub.with_zero_coordinates(&others)
    }

    pub fn parity_of(&self, v: &[Rational]) -> Option<Parity> {
        let nonzero: Vec<Parity> = v.iter().zip(&self.parities).filter(|(x, _)| !x.is_zero()).map(|(_, p)| *p).collect();
        let first = *nonzero.first()?;
        nonzero.iter().all(|p| *p == first).then_some(first)
    }

    /// `num / den` computed one parity at a time.
    pub fn graded_quotient(&self, num: &Subspace, den: &Subspace) -> Result<GradedQuotient, JordanError> {
        let mut classes = Vec::new();
        for p in Parity::BOTH {
            let q = quotient(&self.homogeneous(num, p), &self.homogeneous(den, p))?;
            classes.extend(q.representatives.into_iter().map(|r| (p, r)));
        }
        let whole = quotient(num, den)?;
        if whole.dim() != classes.len() {
            return Err(JordanError::NotGraded(self.weight));
        }
        Ok(GradedQuotient { weight: self.weight, whole, classes })
    }
}

fn parity_subspace(parities: &[Parity], p: Parity) -> Subspace {
    Subspace::coordinate(parities.len(), (0..parities.len()).filter(|&i| parities[i] == p))
}

/// A quotient of graded subspaces with parity-homogeneous representatives.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    pub weight: Weight,
    whole: Quotient,
    /// Representatives, even ones first.
    pub classes: Vec<(Parity, Vec<Rational>)>,
}

impl GradedQuotient {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn num(&self) -> &Subspace {
        &self.whole.num
    }

    pub fn den(&self) -> &Subspace {
        &self.whole.den
    }

    /// Coordinates of the class of `x` in the basis `classes`.
    pub fn coordinates(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        let n = x.len();
        let mut columns: Vec<Vec<Rational>> = self.classes.iter().map(|(_, r)| r.clone()).collect();
        columns.extend(self.whole.den.vectors());
        let sol = solve(&Matrix::from_columns(n, &columns), x).ok_or(LinalgError::VectorNotInSubspace)?;
        Ok(sol[..self.dim()].to_vec())
    }

    /// `dim` of the even part minus `dim` of the odd part, at this weight.
    pub fn character(&self) -> VirtualRModule {
        self.classes.iter().map(|(p, _)| (self.weight, p.sign())).collect()
    }

    /// Each class counted with `+1`, parity ignored.
    pub fn weight_multiset(&self) -> VirtualRModule {
        VirtualRModule::single(self.weight, self.dim() as i64)
    }
}

/// `(V ⊗ S)_[0]`: one nilpotent sector per weight.
#[derive(Clone, Debug)]
pub struct GeneralizedZeroEigenspace {
    sectors: BTreeMap<Weight, NilpotentSector>,
}

impl GeneralizedZeroEigenspace {
    pub fn from_sectors(sectors: impl IntoIterator<Item = NilpotentSector>) -> Self {
        GeneralizedZeroEigenspace { sectors: sectors.into_iter().map(|s| (s.weight, s)).collect() }
    }

    pub fn sectors(&self) -> &BTreeMap<Weight, NilpotentSector> {
        &self.sectors
    }

    pub fn sector(&self, w: Weight) -> Option<&NilpotentSector> {
        self.sectors.get(&w)
    }

    pub fn dim(&self) -> usize {
        self.sectors.values().map(NilpotentSector::dim).sum()
    }

    /// Smallest `N` with `D^N = 0` on the whole space.
    pub fn nilpotency_order(&self) -> usize {
        self.sectors.values().map(NilpotentSector::order).max().unwrap_or(0)
    }

    /// `(V ⊗ S)_[0]⁺ - (V ⊗ S)_[0]⁻` as a virtual module.
    pub fn parity_character(&self) -> VirtualRModule {
        let mut out = VirtualRModule::zero();
        for s in self.sectors.values() {
            for p in Parity::BOTH {
                out.add_term(s.weight, p.sign() * s.homogeneous(&s.space, p).dim() as i64);
            }
        }
        out
    }
}

/// Generalized 0-eigenspace of the Dirac operator on `V ⊗ S`.
///
/// Computed as `ker D^n` on every safe weight space. A nonzero generalized
/// kernel on a stored but uncertified weight means the truncation is too
/// shallow. The block just below the lowest stored weight is skipped: it only
/// sees the bottom vectors, whose `f`-images were cut off.
pub fn generalized_zero_eigenspace(t: &TensorComplex) -> Result<GeneralizedZeroEigenspace, JordanError> {
    let mut sectors = Vec::new();
    for (&w, block) in t.blocks() {
        if t.is_safe(w) {
            sectors.push(NilpotentSector::from_operator(w, block.dirac.clone(), block.parities.clone())?);
        } else if t.is_complete(w) && !kernel(&block.dirac.pow(block.dim())).is_zero() {
            return Err(JordanError::ShallowTruncation { weight: w });
        }
    }
    Ok(GeneralizedZeroEigenspace::from_sectors(sectors))
}

/// A chain `V_1 <- V_2 <- … <- V_k` with `D V_1 = 0` and `D V_i = V_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBlock {
    pub weight: Weight,
    /// Bottom first.
    pub chain: Vec<Vec<Rational>>,
    pub bottom_parity: Parity,
}

impl JordanBlock {
    pub fn size(&self) -> usize {
        self.chain.len()
    }

    pub fn bottom(&self) -> &[Rational] {
        &self.chain[0]
    }

    pub fn top(&self) -> &[Rational] {
        &self.chain[self.chain.len() - 1]
    }

    pub fn top_parity(&self) -> Parity {
        self.bottom_parity.shifted(self.size() - 1)
    }

    /// Chain generated by `top` under `D`, which must be homogeneous.
    pub fn from_top(sector: &NilpotentSector, top: Vec<Rational>) -> Option<JordanBlock> {
        let parity = sector.parity_of(&top)?;
        let mut chain = vec![top];
        loop {
            let next = sector.dirac.mul_vec(chain.last().unwrap());
            if next.iter().all(Zero::is_zero) {
                break;
            }
            chain.push(next);
        }
        let size = chain.len();
        chain.reverse();
        Some(JordanBlock { weight: sector.weight, chain, bottom_parity: parity.shifted(size - 1) })
    }
}

#[derive(Clone, Debug, Default)]
pub struct JordanDecomposition {
    pub blocks: Vec<JordanBlock>,
}

impl JordanDecomposition {
    /// Block sizes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(JordanBlock::size).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// `(size, weight, bottom parity)` for every block, sorted.
    pub fn signature(&self) -> Vec<(usize, Weight, Parity)> {
        let mut s: Vec<_> = self.blocks.iter().map(|b| (b.size(), b.weight, b.bottom_parity)).collect();
        s.sort();
        s
    }
}

/// Tops of size `m` and parity `p`: `Ker D^m / (Ker D^{m-1} + D Ker D^{m+1})`.
fn top_quotient(s: &NilpotentSector, m: usize, p: Parity) -> Result<Quotient, JordanError> {
    let num = s.homogeneous(&s.ker_pow(m), p);
    let lower = s.homogeneous(&s.ker_pow(m - 1), p);
    let from_above = s.homogeneous(&s.ker_pow(m + 1), p.flip()).map(&s.dirac);
    Ok(quotient(&num, &lower.sum(&from_above)?)?)
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-3..=3))
}

fn decompose_sector<R: Rng>(s: &NilpotentSector, mut rng: Option<&mut R>) -> Result<Vec<JordanBlock>, JordanError> {
    let mut blocks = Vec::new();
    for m in (1..=s.order()).rev() {
        for p in Parity::BOTH {
            let q = top_quotient(s, m, p)?;
            let mut tops = q.representatives.clone();
            if let Some(rng) = rng.as_deref_mut() {
                // unitriangular mixing plus arbitrary elements of the denominator
                let den = q.den.vectors();
                for i in 0..tops.len() {
                    let mut t = tops[i].clone();
                    for other in tops.iter().skip(i + 1).chain(den.iter()) {
                        let c = small_rational(rng);
                        for (x, y) in t.iter_mut().zip(other) {
                            *x += &c * y;
                        }
                    }
                    tops[i] = t;
                }
            }
            for top in tops {
                let block = JordanBlock::from_top(s, top).expect("tops are homogeneous");
                debug_assert_eq!(block.size(), m);
                blocks.push(block);
            }
        }
    }
    Ok(blocks)
}

/// Deterministic decomposition: weights ascending, sizes descending, even
/// tops before odd ones, tops taken from echelon-ordered complements.
pub fn jordan_decomposition(g: &GeneralizedZeroEigenspace) -> Result<JordanDecomposition, JordanError> {
    let mut blocks = Vec::new();
    for s in g.sectors.values() {
        blocks.extend(decompose_sector::<ChaCha8Rng>(s, None)?);
    }
    Ok(JordanDecomposition { blocks })
}

/// Same algorithm with randomly perturbed tops; only the size, weight and
/// parity data are meant to agree with [`jordan_decomposition`].
pub fn jordan_decomposition_seeded(g: &GeneralizedZeroEigenspace, seed: u64) -> Result<JordanDecomposition, JordanError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    for s in g.sectors.values() {
        blocks.extend(decompose_sector(s, Some(&mut rng))?);
    }
    Ok(JordanDecomposition { blocks })
}

/// Block sizes per weight read off from ranks:
/// `#{blocks of size >= i} = rank D^{i-1} - rank D^i`.
pub fn rank_partition(g: &GeneralizedZeroEigenspace) -> BTreeMap<Weight, Vec<usize>> {
    let mut out = BTreeMap::new();
    for (&w, s) in &g.sectors {
        let ranks: Vec<usize> = (0..=s.order() + 1).map(|j| s.im_pow(j).dim()).collect();
        let at_least: Vec<usize> = (1..=s.order() + 1).map(|i| ranks[i - 1] - ranks[i]).collect();
        let mut sizes = Vec::new();
        for i in 1..=s.order() {
            let exactly = at_least[i - 1] - at_least[i];
            sizes.extend(std::iter::repeat_n(i, exactly));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        out.insert(w, sizes);
    }
    out
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    /// Largest first.
    pub sizes: Vec<usize>,
    /// `(size, bottom weight, bottom parity)`, sorted.
    pub bottoms: Vec<(usize, Weight, Parity)>,
    pub failures: Vec<String>,
}

impl BlockReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every chain condition, parity alternation, and that the chains form
/// a basis of each sector.
pub fn verify_blocks(d: &JordanDecomposition, g: &GeneralizedZeroEigenspace) -> BlockReport {
    let mut failures = Vec::new();
    let mut per_weight: BTreeMap<Weight, Vec<Vec<Rational>>> = BTreeMap::new();
    for (n, b) in d.blocks.iter().enumerate() {
        let Some(s) = g.sector(b.weight) else {
            failures.push(format!("block {n}: no sector at weight {}", b.weight));
            continue;
        };
        if b.chain.is_empty() {
            failures.push(format!("block {n}: empty chain"));
            continue;
        }
        if !s.dirac.mul_vec(b.bottom()).iter().all(Zero::is_zero) {
            failures.push(format!("block {n}: D(V_1) != 0"));
        }
        for i in 1..b.size() {
            if s.dirac.mul_vec(&b.chain[i]) != b.chain[i - 1] {
                failures.push(format!("block {n}: D(V_{}) != V_{}", i + 1, i));
            }
        }
        for (i, v) in b.chain.iter().enumerate() {
            if s.parity_of(v) != Some(b.bottom_parity.shifted(i)) {
                failures.push(format!("block {n}: V_{} has the wrong parity", i + 1));
            }
        }
        if s.im_pow(1).contains(b.top()).unwrap_or(true) {
            failures.push(format!("block {n}: top lies in Im D"));
        }
        per_weight.entry(b.weight).or_default().extend(b.chain.iter().cloned());
    }
    for (&w, s) in &g.sectors {
        let vectors = per_weight.remove(&w).unwrap_or_default();
        let count = vectors.len();
        let span = Subspace::span(s.ambient_dim(), vectors);
        if count != s.dim() || span != s.space {
            failures.push(format!("weight {w}: chains do not form a basis of the sector"));
        }
    }
    BlockReport { sizes: d.sizes(), bottoms: d.signature().iter().map(|&(k, w, p)| (k, w, p)).collect(), failures }
}
