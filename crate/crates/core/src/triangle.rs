//! Exact triangles `H(U) -> H(V) -> H(W) -> H(U)` for short exact sequences.
//!
//! The triangle is built from a decomposition of `0 -> U -> V -> W -> 0` into
//! matched Jordan blocks `(U_j, V_j, W_j)` with `|U_j| + |W_j| = |V_j|`. Every
//! odd block carries one class of `H`, and within a triple exactly two or none
//! of the blocks are odd, which fixes the maps.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::jordan::{JordanBlock, JordanError, NilpotentSector};
use crate::linalg::{image, kernel, rat, Matrix, Rational, Subspace};
use crate::weight::{Parity, Weight};
use crate::zero_ses::{lift_into, ZeroSes};

/// Outcome of the dimension test for an exact triangle with sides `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCertificate {
    pub dims: [usize; 3],
    /// `a_1 = (h1-h2+h3)/2`, `a_2 = (h1+h2-h3)/2`, `a_3 = (-h1+h2+h3)/2`.
    pub a: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
}

impl TriangleCertificate {
    pub fn exists(&self) -> bool {
        self.a.is_some()
    }
}

/// An exact triangle with these dimensions exists iff the sum is even and
/// each side is at most the sum of the other two.
pub fn triangle_criterion(h1: usize, h2: usize, h3: usize) -> TriangleCertificate {
    let dims = [h1, h2, h3];
    let refusal = if !(h1 + h2 + h3).is_multiple_of(2) {
        Some(format!("h1 + h2 + h3 = {} is odd", h1 + h2 + h3))
    } else if h1 > h2 + h3 || h2 > h1 + h3 || h3 > h1 + h2 {
        Some("triangle inequality fails".to_string())
    } else {
        None
    };
    let a = refusal.is_none().then(|| [(h1 + h3 - h2) / 2, (h1 + h2 - h3) / 2, (h2 + h3 - h1) / 2]);
    TriangleCertificate { dims, a, refusal }
}

/// Blocks of `U`, `V`, `W` forming a short exact sequence of chains.
/// `u` and `w` are in their own coordinates; `v` is in `V`'s.
#[derive(Clone, Debug)]
pub struct MatchedTriple {
    pub weight: Weight,
    pub u: Option<JordanBlock>,
    pub v: JordanBlock,
    pub w: Option<JordanBlock>,
}

impl MatchedTriple {
    pub fn sizes(&self) -> [usize; 3] {
        [self.u.as_ref().map_or(0, JordanBlock::size), self.v.size(), self.w.as_ref().map_or(0, JordanBlock::size)]
    }
}

#[derive(Clone, Debug, Default)]
pub struct CompatibleDecomposition {
    pub triples: Vec<MatchedTriple>,
    /// Verification problems; empty when the construction succeeded.
    pub failures: Vec<String>,
}

impl CompatibleDecomposition {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Tops of a Jordan basis of `D` on `space / sub` (both `D`-invariant),
/// lifted to vectors `y` with `D^m y = 0`. Returns `(top, m)` pairs, or the
/// sizes for which no such lift exists.
fn relative_tops(s: &NilpotentSector, space: &Subspace, below: &Subspace) -> Result<Vec<(Vec<Rational>, usize)>, usize> {
    let level = |m: usize| space.preimage(&s.power(m), below).expect("same ambient");
    let mut height = 0;
    while level(height) != *space {
        height += 1;
    }
    let mut out = Vec::new();
    for m in (1..=height).rev() {
        for p in Parity::BOTH {
            let num = s.homogeneous(&level(m), p);
            let den = s
                .homogeneous(&level(m - 1), p)
                .sum(&s.homogeneous(&level(m + 1), p.flip()).map(s.dirac()))
                .and_then(|d| d.sum(&s.homogeneous(below, p)))
                .expect("same ambient");
            let q = crate::linalg::quotient(&num, &den).expect("den inside num");
            for y in q.representatives {
                let power = s.power(m);
                let target = power.mul_vec(&y);
                let k = lift_into(&power, &s.homogeneous(below, p), &target).ok_or(m)?;
                out.push((sub(&y, &k), m));
            }
        }
    }
    Ok(out)
}

/// Tops of a Jordan basis of `W`, chosen so that each lifts to `V` with the
/// least possible height.
///
/// Within one block size the lift height is not constant on the classes of
/// tops (adding the image of a longer block can raise it), so the tops are
/// taken along the filtration by "lifts with height `m`", smallest `m` first.
fn adapted_w_tops(sv: &NilpotentSector, sw: &NilpotentSector, proj: &Matrix) -> Result<Vec<Vec<Rational>>, JordanError> {
    let mut tops = Vec::new();
    for b in (1..=sw.order()).rev() {
        for p in Parity::BOTH {
            let num = sw.homogeneous(&sw.ker_pow(b), p);
            let mut chosen = sw
                .homogeneous(&sw.ker_pow(b - 1), p)
                .sum(&sw.homogeneous(&sw.ker_pow(b + 1), p.flip()).map(sw.dirac()))?;
            for m in b..=sv.order().max(b) {
                let liftable = sv.homogeneous(&sv.ker_pow(m), p).map(proj).intersect(&num)?;
                let q = crate::linalg::quotient(&liftable, &liftable.intersect(&chosen)?)?;
                if q.representatives.is_empty() {
                    continue;
                }
                chosen = chosen.sum(&Subspace::span(sw.ambient_dim(), q.representatives.clone()))?;
                tops.extend(q.representatives);
            }
        }
    }
    Ok(tops)
}

fn pull_back(z: &ZeroSes, wt: Weight, chain: &[Vec<Rational>], parity: Parity) -> Option<JordanBlock> {
    let su = z.u.sector(wt)?;
    let inc = &z.inclusion[&wt];
    let vectors: Option<Vec<Vec<Rational>>> = chain.iter().map(|v| lift_into(inc, su.space(), v)).collect();
    Some(JordanBlock { weight: wt, chain: vectors?, bottom_parity: parity })
}

fn decompose_weight(z: &ZeroSes, wt: Weight, out: &mut CompatibleDecomposition) -> Result<(), JordanError> {
    let (su, sv, sw) = z.sectors(wt);
    let inc = &z.inclusion[&wt];
    let proj = &z.projection[&wt];
    let k_space = su.space().map(inc);
    let w_blocks: Vec<JordanBlock> = adapted_w_tops(sv, sw, proj)?
        .into_iter()
        .map(|y| JordanBlock::from_top(sw, y).expect("homogeneous top"))
        .collect();

    let mut v_vectors = Vec::new();
    for wb in w_blocks {
        let b = wb.size();
        let eps = wb.top_parity();
        let Some(x0) = lift_into(proj, &sv.homogeneous(sv.space(), eps), wb.top()) else {
            out.failures.push(format!("weight {wt}: a top of W has no homogeneous preimage"));
            continue;
        };
        // shortest chain among the lifts x0 + K
        let k_eps = sv.homogeneous(&k_space, eps);
        let mut x = x0.clone();
        for m in b..=sv.order().max(b) {
            let power = sv.power(m);
            let target = power.mul_vec(&x0);
            if let Some(k) = lift_into(&power, &k_eps, &target) {
                x = sub(&x0, &k);
                break;
            }
        }
        let v = JordanBlock::from_top(sv, x).expect("homogeneous lift");
        let c = v.size() - b;
        let u = if c == 0 {
            None
        } else {
            let pb = pull_back(z, wt, &v.chain[..c], v.bottom_parity);
            if pb.is_none() {
                out.failures.push(format!("weight {wt}: the tail of a lifted chain is not in U"));
            }
            pb
        };
        v_vectors.extend(v.chain.iter().cloned());
        out.triples.push(MatchedTriple { weight: wt, u, v, w: Some(wb) });
    }

    // complement of (lifted chains ∩ K) inside K
    let s_space = Subspace::span(sv.ambient_dim(), v_vectors);
    let meet = s_space.intersect(&k_space)?;
    match relative_tops(sv, &k_space, &meet) {
        Ok(tops) => {
            for (y, _) in tops {
                let v = JordanBlock::from_top(sv, y).expect("homogeneous top");
                match pull_back(z, wt, &v.chain, v.bottom_parity) {
                    Some(u) => out.triples.push(MatchedTriple { weight: wt, u: Some(u), v, w: None }),
                    None => out.failures.push(format!("weight {wt}: a complement chain leaves U")),
                }
            }
        }
        Err(m) => out.failures.push(format!("weight {wt}: no D-invariant complement for a block of size {m}")),
    }
    Ok(())
}

fn spans_sector(s: &NilpotentSector, vectors: Vec<Vec<Rational>>) -> bool {
    let count = vectors.len();
    count == s.dim() && Subspace::span(s.ambient_dim(), vectors) == *s.space()
}

/// Runs the construction and verifies every property of the result: length
/// additivity, chain-level exactness of each triple, and that the blocks of
/// each of `U`, `V`, `W` form bases.
pub fn compatible_decomposition(z: &ZeroSes) -> Result<CompatibleDecomposition, JordanError> {
    let mut out = CompatibleDecomposition::default();
    for wt in z.weights().collect::<Vec<_>>() {
        decompose_weight(z, wt, &mut out)?;
    }
    let mut failures = Vec::new();
    for (n, t) in out.triples.iter().enumerate() {
        let [c, m, b] = t.sizes();
        if c + b != m {
            failures.push(format!("triple {n}: lengths {c} + {b} != {m}"));
        }
        let (su, sv, sw) = z.sectors(t.weight);
        let inc = &z.inclusion[&t.weight];
        let proj = &z.projection[&t.weight];
        let chain_ok = |blk: &JordanBlock, s: &NilpotentSector| {
            blk.chain.iter().enumerate().all(|(i, x)| {
                let d = s.dirac().mul_vec(x);
                if i == 0 {
                    d.iter().all(|e| *e == rat(0))
                } else {
                    d == blk.chain[i - 1]
                }
            })
        };
        if !chain_ok(&t.v, sv) || t.u.as_ref().is_some_and(|u| !chain_ok(u, su)) || t.w.as_ref().is_some_and(|w| !chain_ok(w, sw)) {
            failures.push(format!("triple {n}: a chain condition fails"));
        }
        let amb = sv.ambient_dim();
        let v_span = Subspace::span(amb, t.v.chain.clone());
        let u_image = Subspace::span(amb, t.u.iter().flat_map(|u| u.chain.iter().map(|x| inc.mul_vec(x))));
        let w_span = Subspace::span(sw.ambient_dim(), t.w.iter().flat_map(|w| w.chain.clone()));
        if u_image != Subspace::span(amb, t.v.chain[..c.min(m)].to_vec()) {
            failures.push(format!("triple {n}: U_j is not the bottom of V_j"));
        }
        if v_span.map(proj) != w_span || v_span.intersect(&kernel(proj))? != u_image {
            failures.push(format!("triple {n}: U_j -> V_j -> W_j is not exact"));
        }
    }
    for wt in z.weights() {
        let (su, sv, sw) = z.sectors(wt);
        let here: Vec<&MatchedTriple> = out.triples.iter().filter(|t| t.weight == wt).collect();
        let gather = |f: &dyn Fn(&MatchedTriple) -> Option<JordanBlock>| -> Vec<Vec<Rational>> {
            here.iter().filter_map(|t| f(t)).flat_map(|b| b.chain).collect()
        };
        if !spans_sector(su, gather(&|t| t.u.clone())) {
            failures.push(format!("weight {wt}: the U blocks are not a basis"));
        }
        if !spans_sector(sv, gather(&|t| Some(t.v.clone()))) {
            failures.push(format!("weight {wt}: the V blocks are not a basis"));
        }
        if !spans_sector(sw, gather(&|t| t.w.clone())) {
            failures.push(format!("weight {wt}: the W blocks are not a basis"));
        }
    }
    out.failures.extend(failures);
    Ok(out)
}

/// The triangle assembled from a compatible decomposition. Node `0` is
/// `H(U)`, `1` is `H(V)`, `2` is `H(W)`; `maps[k]` goes from node `k` to
/// node `k+1 mod 3`.
#[derive(Clone, Debug)]
pub struct ExactTriangle {
    pub dims: [usize; 3],
    /// Numbers of triples whose odd blocks are `(U, W)`, `(U, V)`, `(V, W)`.
    pub a: [usize; 3],
    pub maps: [Matrix; 3],
    /// `(triple index, weight, parity)` of each basis class, per node.
    pub basis: [Vec<(usize, Weight, Parity)>; 3],
}

impl ExactTriangle {
    pub fn exactness(&self) -> [bool; 3] {
        std::array::from_fn(|k| image(&self.maps[(k + 2) % 3]) == kernel(&self.maps[k]))
    }

    pub fn exact(&self) -> bool {
        self.exactness().iter().all(|&b| b)
    }
}

pub fn build_triangle(c: &CompatibleDecomposition) -> ExactTriangle {
    let mut basis: [Vec<(usize, Weight, Parity)>; 3] = Default::default();
    let mut position: [BTreeMap<usize, usize>; 3] = Default::default();
    for (n, t) in c.triples.iter().enumerate() {
        let blocks = [t.u.as_ref(), Some(&t.v), t.w.as_ref()];
        for (k, b) in blocks.iter().enumerate() {
            if let Some(b) = b.filter(|b| b.size() % 2 == 1) {
                position[k].insert(n, basis[k].len());
                basis[k].push((n, t.weight, b.bottom_parity));
            }
        }
    }
    let dims = [basis[0].len(), basis[1].len(), basis[2].len()];
    let mut maps: [Matrix; 3] = std::array::from_fn(|k| Matrix::zeros(dims[(k + 1) % 3], dims[k]));
    let mut a = [0; 3];
    for n in 0..c.triples.len() {
        let odd: [bool; 3] = std::array::from_fn(|k| position[k].contains_key(&n));
        // the one map between the two odd nodes is an isomorphism
        let (from, slot) = match odd {
            [true, true, false] => (0, 1),
            [false, true, true] => (1, 2),
            [true, false, true] => (2, 0),
            _ => continue,
        };
        let to = (from + 1) % 3;
        maps[from].set(position[to][&n], position[from][&n], rat(1));
        a[slot] += 1;
    }
    ExactTriangle { dims, a, maps, basis }
}
