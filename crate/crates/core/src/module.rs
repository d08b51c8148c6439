//! Truncated `sl(2)` weight modules and intertwiners.
//!
//! Infinite-dimensional modules (Verma modules and the extension `P`) are
//! stored as finitely many weight spaces. Each module carries an
//! `interior_min_weight`: the relation `[e, f] = h` is only guaranteed on basis
//! vectors of weight at least that value, because `f` applied to the lowest
//! stored vectors has been cut off. A module whose interior reaches its lowest
//! stored weight is *certified*: nothing was truncated.
//!
//! Action matrices act on columns: entry `(i, j)` is the coefficient of basis
//! vector `i` in `x · b_j`.
//!
//! Verma normalizations. For highest weight `0` the basis `v_{-2k}` satisfies
//! `e v_{-2k} = (1-k) v_{-2k+2}` and `f v_{-2k} = (k+1) v_{-2k-2}`; for highest
//! weight `-2` the basis `w_{-2k}` (`k >= 1`) satisfies the same two formulas.
//! Any other highest weight `λ` uses `v_j` of weight `λ - 2j` with
//! `f v_j = (j+1) v_{j+1}` and `e v_j = (λ - j + 1) v_{j-1}`, which agrees with
//! the first normalization at `λ = 0`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{frac, image, kernel, parse_rational, rat, LinalgError, Matrix, Rational};
use crate::weight::Weight;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("{0} must be at least 1")]
    Empty(&'static str),
    #[error("depth {depth} is too shallow; at least {min} is required")]
    TooShallow { depth: usize, min: usize },
    #[error("action of {generator} does not respect the weight grading at entry ({row}, {col})")]
    Grading { generator: Generator, row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse module description: {0}")]
    Parse(String),
    #[error("relation {relation} fails on basis vector {index} ({label})")]
    RelationViolation { relation: Relation, index: usize, label: String },
    #[error("maps are not intertwiners or do not form a short exact sequence: {0}")]
    NotExact(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    H,
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Generator::E => "e",
            Generator::F => "f",
            Generator::H => "h",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `[h, e] = 2e`
    HE,
    /// `[h, f] = -2f`
    HF,
    /// `[e, f] = h`
    EF,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::HE => "[h,e]=2e",
            Relation::HF => "[h,f]=-2f",
            Relation::EF => "[e,f]=h",
        })
    }
}

/// A finite (possibly truncated) weight module for `sl(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Module {
    labels: Vec<String>,
    weights: Vec<Weight>,
    e: Matrix,
    f: Matrix,
    h: Matrix,
    interior_min_weight: Weight,
}

impl Sl2Module {
    /// Builds a module with `h` derived from the weights. Fails if `e` or `f`
    /// do not shift weights by exactly `+2` / `-2`.
    pub fn new(
        labels: Vec<String>,
        weights: Vec<Weight>,
        e: Matrix,
        f: Matrix,
        interior_min_weight: Weight,
    ) -> Result<Self, ModuleError> {
        let n = weights.len();
        let mut h = Matrix::zeros(n, n);
        for (i, w) in weights.iter().enumerate() {
            h.set(i, i, rat(w.0));
        }
        Self::with_h(labels, weights, e, f, h, interior_min_weight)
    }

    pub fn with_h(
        labels: Vec<String>,
        weights: Vec<Weight>,
        e: Matrix,
        f: Matrix,
        h: Matrix,
        interior_min_weight: Weight,
    ) -> Result<Self, ModuleError> {
        let n = weights.len();
        if labels.len() != n {
            return Err(ModuleError::DimensionMismatch(format!("{} labels for {n} basis vectors", labels.len())));
        }
        for (name, m) in [("e", &e), ("f", &f), ("h", &h)] {
            if m.rows() != n || m.cols() != n {
                return Err(ModuleError::DimensionMismatch(format!(
                    "action of {name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let expected_h = if i == j { rat(weights[i].0) } else { Rational::zero() };
                if h.get(i, j) != &expected_h {
                    return Err(ModuleError::Grading { generator: Generator::H, row: i, col: j });
                }
                if !e.get(i, j).is_zero() && weights[i] != weights[j] + 2 {
                    return Err(ModuleError::Grading { generator: Generator::E, row: i, col: j });
                }
                if !f.get(i, j).is_zero() && weights[i] != weights[j] - 2 {
                    return Err(ModuleError::Grading { generator: Generator::F, row: i, col: j });
                }
            }
        }
        Ok(Sl2Module { labels, weights, e, f, h, interior_min_weight })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn action(&self, g: Generator) -> &Matrix {
        match g {
            Generator::E => &self.e,
            Generator::F => &self.f,
            Generator::H => &self.h,
        }
    }

    pub fn interior_min_weight(&self) -> Weight {
        self.interior_min_weight
    }

    pub fn min_weight(&self) -> Option<Weight> {
        self.weights.iter().copied().min()
    }

    pub fn max_weight(&self) -> Option<Weight> {
        self.weights.iter().copied().max()
    }

    /// True when no weight space was cut off.
    pub fn is_certified(&self) -> bool {
        self.min_weight().is_none_or(|m| self.interior_min_weight <= m)
    }

    /// Lowest weight from which the stored module is trusted, or `None` when
    /// the whole module is certified.
    pub fn trusted_from(&self) -> Option<Weight> {
        (!self.is_certified()).then_some(self.interior_min_weight)
    }

    pub fn is_interior(&self, w: Weight) -> bool {
        self.is_certified() || w >= self.interior_min_weight
    }

    /// Basis indices of the given weight, ascending.
    pub fn indices_of_weight(&self, w: Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Copy with one action entry replaced; used for mutation tests.
    pub fn with_entry(&self, g: Generator, row: usize, col: usize, value: Rational) -> Result<Self, ModuleError> {
        let mut e = self.e.clone();
        let mut f = self.f.clone();
        let mut h = self.h.clone();
        match g {
            Generator::E => e.set(row, col, value),
            Generator::F => f.set(row, col, value),
            Generator::H => h.set(row, col, value),
        }
        Self::with_h(self.labels.clone(), self.weights.clone(), e, f, h, self.interior_min_weight)
    }

    /// `ef + fe + h²/2`. Exact on interior vectors.
    pub fn casimir(&self) -> Matrix {
        let ef = &self.e * &self.f;
        let fe = &self.f * &self.e;
        let hh = (&self.h * &self.h).scale(&frac(1, 2));
        &(&ef + &fe) + &hh
    }
}

fn label(prefix: &str, w: i64) -> String {
    format!("{prefix}{w}")
}

/// Verma module with the given highest weight, truncated to `depth` weight
/// spaces.
pub fn build_verma(highest_weight: Weight, depth: usize) -> Result<Sl2Module, ModuleError> {
    if depth == 0 {
        return Err(ModuleError::Empty("depth"));
    }
    let lambda = highest_weight.0;
    let prefix = match lambda {
        0 => "v",
        -2 => "w",
        _ => "m",
    };
    let weights: Vec<Weight> = (0..depth as i64).map(|j| Weight(lambda - 2 * j)).collect();
    let labels = weights.iter().map(|w| label(prefix, w.0)).collect();
    let mut e = Matrix::zeros(depth, depth);
    let mut f = Matrix::zeros(depth, depth);
    for (j, w) in weights.iter().enumerate() {
        let mu = w.0;
        let (e_coeff, f_coeff) = if lambda == -2 {
            (frac(2 + mu, 2), frac(2 - mu, 2))
        } else {
            let jj = j as i64;
            (rat(lambda - jj + 1), rat(jj + 1))
        };
        if j > 0 {
            e.set(j - 1, j, e_coeff);
        }
        if j + 1 < depth {
            f.set(j + 1, j, f_coeff);
        }
    }
    let interior = Weight(lambda - 2 * (depth as i64 - 2));
    Sl2Module::new(labels, weights, e, f, interior)
}

/// The extension `0 -> V_0 -> P -> V_{-2} -> 0`: basis `v_0, …, v_{-2(depth-1)}`
/// followed by `w_{-2}, …, w_{-2(depth-1)}`, with
/// `e w_{-2k} = (1-k) w_{-2k+2} + (1/k) v_{-2k+2}` (`w_0 = 0`).
pub fn build_module_p(depth: usize) -> Result<(Sl2Module, ShortExactSequence), ModuleError> {
    if depth < 3 {
        return Err(ModuleError::TooShallow { depth, min: 3 });
    }
    let v0 = build_verma(Weight(0), depth)?;
    let vm2 = build_verma(Weight(-2), depth - 1)?;
    let nv = v0.dim();
    let nw = vm2.dim();
    let n = nv + nw;
    let mut labels = v0.labels().to_vec();
    labels.extend(vm2.labels().iter().cloned());
    let mut weights = v0.weights().to_vec();
    weights.extend(vm2.weights().iter().copied());
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    for (offset, m) in [(0, &v0), (nv, &vm2)] {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                e.set(offset + i, offset + j, m.action(Generator::E).get(i, j).clone());
                f.set(offset + i, offset + j, m.action(Generator::F).get(i, j).clone());
            }
        }
    }
    // w_{-2k} (column nv + k - 1) picks up (1/k) v_{-2k+2} (row k - 1)
    for k in 1..=nw {
        e.set(k - 1, nv + k - 1, frac(1, k as i64));
    }
    let p = Sl2Module::new(labels, weights, e, f, v0.interior_min_weight())?;

    let mut incl = Matrix::zeros(n, nv);
    for i in 0..nv {
        incl.set(i, i, Rational::one());
    }
    let mut proj = Matrix::zeros(nw, n);
    for i in 0..nw {
        proj.set(i, nv + i, Rational::one());
    }
    let ses = ShortExactSequence::new(
        ModuleMap::new(v0, p.clone(), incl)?,
        ModuleMap::new(p.clone(), vm2, proj)?,
    )?;
    Ok((p, ses))
}

/// The `n`-dimensional simple module, weights `n-1, n-3, …, -(n-1)`.
pub fn build_finite_dim(n: usize) -> Result<Sl2Module, ModuleError> {
    if n == 0 {
        return Err(ModuleError::Empty("dimension"));
    }
    let lambda = n as i64 - 1;
    let weights: Vec<Weight> = (0..n as i64).map(|j| Weight(lambda - 2 * j)).collect();
    let labels = weights.iter().map(|w| label("u", w.0)).collect();
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    for j in 0..n {
        let jj = j as i64;
        if j > 0 {
            e.set(j - 1, j, rat(lambda - jj + 1));
        }
        if j + 1 < n {
            f.set(j + 1, j, rat(jj + 1));
        }
    }
    Sl2Module::new(labels, weights, e, f, Weight(-lambda))
}

/// Block-diagonal direct sum. The trusted window is the intersection of the
/// summands' windows.
pub fn direct_sum(modules: &[Sl2Module]) -> Sl2Module {
    let n: usize = modules.iter().map(Sl2Module::dim).sum();
    let mut labels = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    let mut offset = 0;
    for (s, m) in modules.iter().enumerate() {
        labels.extend(m.labels().iter().map(|l| format!("{s}:{l}")));
        weights.extend(m.weights().iter().copied());
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                e.set(offset + i, offset + j, m.e.get(i, j).clone());
                f.set(offset + i, offset + j, m.f.get(i, j).clone());
            }
        }
        offset += m.dim();
    }
    let interior = modules
        .iter()
        .filter_map(Sl2Module::trusted_from)
        .max()
        .or_else(|| weights.iter().copied().min())
        .unwrap_or(Weight(0));
    Sl2Module::new(labels, weights, e, f, interior).expect("direct sum of graded modules is graded")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: Relation,
    pub index: usize,
    pub label: String,
    pub weight: Weight,
}

/// Residuals of the defining relations, one column per basis vector.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub residual_he: Matrix,
    pub residual_hf: Matrix,
    /// `ef - fe - h`, with columns outside the interior zeroed.
    pub residual_ef: Matrix,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_relations(m: &Sl2Module) -> RelationReport {
    let n = m.dim();
    let residual_he = &(&(&m.h * &m.e) - &(&m.e * &m.h)) - &m.e.scale(&rat(2));
    let residual_hf = &(&(&m.h * &m.f) - &(&m.f * &m.h)) + &m.f.scale(&rat(2));
    let mut residual_ef = &(&(&m.e * &m.f) - &(&m.f * &m.e)) - &m.h;
    for j in (0..n).filter(|&j| !m.is_interior(m.weights[j])) {
        for i in 0..n {
            residual_ef.set(i, j, Rational::zero());
        }
    }
    let mut failures = Vec::new();
    for (relation, res) in [(Relation::HE, &residual_he), (Relation::HF, &residual_hf), (Relation::EF, &residual_ef)] {
        for j in 0..n {
            if (0..n).any(|i| !res.get(i, j).is_zero()) {
                failures.push(RelationFailure {
                    relation,
                    index: j,
                    label: m.labels[j].clone(),
                    weight: m.weights[j],
                });
            }
        }
    }
    RelationReport { residual_he, residual_hf, residual_ef, failures }
}

/// A linear map between modules, `target.dim() x source.dim()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Sl2Module,
    pub target: Sl2Module,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: Sl2Module, target: Sl2Module, matrix: Matrix) -> Result<Self, ModuleError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(ModuleError::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &Sl2Module) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.dim()) }
    }

    /// Source weights on which both modules are trusted.
    fn checked_columns(&self) -> Vec<usize> {
        let bound = [self.source.trusted_from(), self.target.trusted_from()].into_iter().flatten().max();
        (0..self.source.dim()).filter(|&j| bound.is_none_or(|b| self.source.weights[j] >= b)).collect()
    }
}

/// True iff the map commutes with `e`, `f` and `h` on the trusted window of
/// the source.
pub fn check_intertwiner(map: &ModuleMap) -> bool {
    let m = &map.matrix;
    let cols = map.checked_columns();
    for g in [Generator::E, Generator::F, Generator::H] {
        let lhs = m * map.source.action(g);
        let rhs = map.target.action(g) * m;
        let diff = &lhs - &rhs;
        if cols.iter().any(|&j| (0..diff.rows()).any(|i| !diff.get(i, j).is_zero())) {
            return false;
        }
    }
    // h-commutation only sees weight preservation inside the window; check it everywhere
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).is_zero() || map.target.weights[i] == map.source.weights[j]))
}

/// `0 -> U -> V -> W -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequence {
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesReport {
    pub intertwiners: bool,
    pub injective: bool,
    pub surjective: bool,
    pub exact_in_middle: bool,
}

impl SesReport {
    pub fn holds(&self) -> bool {
        self.intertwiners && self.injective && self.surjective && self.exact_in_middle
    }
}

impl ShortExactSequence {
    /// Validates that the maps compose and that the sequence is exact on the
    /// trusted window.
    pub fn new(inclusion: ModuleMap, projection: ModuleMap) -> Result<Self, ModuleError> {
        if inclusion.target != projection.source {
            return Err(ModuleError::DimensionMismatch("inclusion target differs from projection source".into()));
        }
        let ses = ShortExactSequence { inclusion, projection };
        let report = ses.check()?;
        if !report.holds() {
            return Err(ModuleError::NotExact(format!("{report:?}")));
        }
        Ok(ses)
    }

    pub fn sub(&self) -> &Sl2Module {
        &self.inclusion.source
    }

    pub fn middle(&self) -> &Sl2Module {
        &self.inclusion.target
    }

    pub fn quotient(&self) -> &Sl2Module {
        &self.projection.target
    }

    /// The split sequence `0 -> U -> U ⊕ W -> W -> 0`.
    pub fn split(u: &Sl2Module, w: &Sl2Module) -> Result<Self, ModuleError> {
        let v = direct_sum(&[u.clone(), w.clone()]);
        let mut incl = Matrix::zeros(v.dim(), u.dim());
        for i in 0..u.dim() {
            incl.set(i, i, Rational::one());
        }
        let mut proj = Matrix::zeros(w.dim(), v.dim());
        for i in 0..w.dim() {
            proj.set(i, u.dim() + i, Rational::one());
        }
        Self::new(ModuleMap::new(u.clone(), v.clone(), incl)?, ModuleMap::new(v, w.clone(), proj)?)
    }

    /// Weights on which all three modules are trusted.
    pub fn trusted_weights(&self) -> Vec<Weight> {
        let bound = [self.sub(), self.middle(), self.quotient()].iter().filter_map(|m| m.trusted_from()).max();
        let mut ws: Vec<Weight> = [self.sub(), self.middle(), self.quotient()]
            .iter()
            .flat_map(|m| m.weights().iter().copied())
            .filter(|w| bound.is_none_or(|b| *w >= b))
            .collect();
        ws.sort();
        ws.dedup();
        ws
    }

    pub fn check(&self) -> Result<SesReport, ModuleError> {
        let intertwiners = check_intertwiner(&self.inclusion) && check_intertwiner(&self.projection);
        let (u, v, w) = (self.sub(), self.middle(), self.quotient());
        let mut injective = true;
        let mut surjective = true;
        let mut exact_in_middle = true;
        for wt in self.trusted_weights() {
            let (iu, iv, iw) = (u.indices_of_weight(wt), v.indices_of_weight(wt), w.indices_of_weight(wt));
            let incl = self.inclusion.matrix.select(&iv, &iu);
            let proj = self.projection.matrix.select(&iw, &iv);
            injective &= incl.rank() == iu.len();
            surjective &= proj.rank() == iw.len();
            exact_in_middle &= image(&incl) == kernel(&proj);
        }
        Ok(SesReport { intertwiners, injective, surjective, exact_in_middle })
    }
}

/// JSON description of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub basis: Vec<BasisEntry>,
    pub interior_min_weight: i64,
    pub actions: ActionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub weight: i64,
}

/// `[src_idx, dst_idx, "p/q"]`: the coefficient of basis vector `dst` in `x · b_src`.
pub type Arrow = (usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub e: Vec<Arrow>,
    pub f: Vec<Arrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Arrow>>,
}

fn arrows_to_matrix(rows: usize, cols: usize, arrows: &[Arrow]) -> Result<Matrix, ModuleError> {
    let mut m = Matrix::zeros(rows, cols);
    for (src, dst, coeff) in arrows {
        if *src >= cols || *dst >= rows {
            return Err(ModuleError::Parse(format!("arrow index out of range: [{src}, {dst}, {coeff:?}]")));
        }
        let c = parse_rational(coeff).map_err(|e| ModuleError::Parse(e.to_string()))?;
        m.add_to(*dst, *src, &c);
    }
    Ok(m)
}

fn matrix_to_arrows(m: &Matrix) -> Vec<Arrow> {
    let mut out = Vec::new();
    for src in 0..m.cols() {
        for dst in 0..m.rows() {
            let c = m.get(dst, src);
            if !c.is_zero() {
                out.push((src, dst, c.to_string()));
            }
        }
    }
    out
}

impl ModuleSpec {
    pub fn from_module(m: &Sl2Module) -> Self {
        ModuleSpec {
            basis: m
                .labels
                .iter()
                .zip(&m.weights)
                .map(|(l, w)| BasisEntry { label: l.clone(), weight: w.0 })
                .collect(),
            interior_min_weight: m.interior_min_weight.0,
            actions: ActionSpec { e: matrix_to_arrows(&m.e), f: matrix_to_arrows(&m.f), h: None },
        }
    }

    /// Builds the module and rejects it if a relation fails on the interior.
    pub fn build(&self) -> Result<Sl2Module, ModuleError> {
        let n = self.basis.len();
        let labels = self.basis.iter().map(|b| b.label.clone()).collect();
        let weights = self.basis.iter().map(|b| Weight(b.weight)).collect::<Vec<_>>();
        let e = arrows_to_matrix(n, n, &self.actions.e)?;
        let f = arrows_to_matrix(n, n, &self.actions.f)?;
        let interior = Weight(self.interior_min_weight);
        let m = match &self.actions.h {
            Some(h) => Sl2Module::with_h(labels, weights, e, f, arrows_to_matrix(n, n, h)?, interior)?,
            None => Sl2Module::new(labels, weights, e, f, interior)?,
        };
        if let Some(fail) = check_relations(&m).failures.first() {
            return Err(ModuleError::RelationViolation {
                relation: fail.relation,
                index: fail.index,
                label: fail.label.clone(),
            });
        }
        Ok(m)
    }
}

pub fn load_module_spec(json: &str) -> Result<Sl2Module, ModuleError> {
    let spec: ModuleSpec = serde_json::from_str(json).map_err(|e| ModuleError::Parse(e.to_string()))?;
    spec.build()
}

pub fn module_to_spec_json(m: &Sl2Module) -> String {
    serde_json::to_string_pretty(&ModuleSpec::from_module(m)).expect("module spec serializes")
}

/// JSON description of a short exact sequence `0 -> u -> v -> w -> 0`; map
/// arrows use the same `[src, dst, "p/q"]` convention as module actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesSpec {
    pub u: ModuleSpec,
    pub v: ModuleSpec,
    pub w: ModuleSpec,
    pub inclusion: Vec<Arrow>,
    pub projection: Vec<Arrow>,
}

impl SesSpec {
    pub fn from_ses(s: &ShortExactSequence) -> Self {
        SesSpec {
            u: ModuleSpec::from_module(s.sub()),
            v: ModuleSpec::from_module(s.middle()),
            w: ModuleSpec::from_module(s.quotient()),
            inclusion: matrix_to_arrows(&s.inclusion.matrix),
            projection: matrix_to_arrows(&s.projection.matrix),
        }
    }

    pub fn build(&self) -> Result<ShortExactSequence, ModuleError> {
        let (u, v, w) = (self.u.build()?, self.v.build()?, self.w.build()?);
        let incl = arrows_to_matrix(v.dim(), u.dim(), &self.inclusion)?;
        let proj = arrows_to_matrix(w.dim(), v.dim(), &self.projection)?;
        ShortExactSequence::new(ModuleMap::new(u, v.clone(), incl)?, ModuleMap::new(v, w, proj)?)
    }
}

pub fn load_ses_spec(json: &str) -> Result<ShortExactSequence, ModuleError> {
    let spec: SesSpec = serde_json::from_str(json).map_err(|e| ModuleError::Parse(e.to_string()))?;
    spec.build()
}

/// `0 -> V_{-2} -> V_0 -> C_0 -> 0`, all modules with trivial infinitesimal
/// character.
pub fn build_infchar_sequence(depth: usize) -> Result<ShortExactSequence, ModuleError> {
    if depth < 3 {
        return Err(ModuleError::TooShallow { depth, min: 3 });
    }
    let v0 = build_verma(Weight(0), depth)?;
    let vm2 = build_verma(Weight(-2), depth - 1)?;
    let c0 = build_finite_dim(1)?;
    // w_{-2k} -> v_{-2k}: the two normalizations agree for k >= 1
    let mut incl = Matrix::zeros(v0.dim(), vm2.dim());
    for k in 0..vm2.dim() {
        incl.set(k + 1, k, Rational::one());
    }
    let mut proj = Matrix::zeros(1, v0.dim());
    proj.set(0, 0, Rational::one());
    ShortExactSequence::new(ModuleMap::new(vm2, v0.clone(), incl)?, ModuleMap::new(v0, c0, proj)?)
}
