//! Independent reference computations for the integration tests.
//!
//! Nothing here calls the library's linear algebra: ranks come from a plain
//! fraction-free elimination on `BigRational` rows, and Jordan data is read
//! off rank sequences of powers instead of constructed chains.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use higher_dirac::grothendieck::VirtualRModule;
use higher_dirac::linalg::Matrix;
use higher_dirac::spin::{TensorComplex, WeightBlock};
use higher_dirac::weight::{Parity, Weight};

pub type Rows = Vec<Vec<BigRational>>;

pub fn rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect()).collect()
}

pub fn rank(m: &Rows) -> usize {
    let mut a = m.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                let pivot = a[r].clone();
                for (x, y) in a[i][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn mul(a: &Rows, b: &Rows) -> Rows {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn is_zero(m: &Rows) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

pub fn apply(m: &Rows, v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)).collect()
}

fn power(d: &Rows, j: usize) -> Rows {
    let n = d.len();
    let mut out: Rows = (0..n)
        .map(|r| (0..n).map(|c| if r == c { BigRational::from_integer(1.into()) } else { BigRational::zero() }).collect())
        .collect();
    for _ in 0..j {
        out = mul(d, &out);
    }
    out
}

fn columns(m: &Rows, keep: &[usize]) -> Rows {
    m.iter().map(|r| keep.iter().map(|&c| r[c].clone()).collect()).collect()
}

/// `rank(D^j restricted to the parity-p coordinates)`.
fn parity_rank(d: &Rows, parities: &[Parity], p: Parity, j: usize) -> usize {
    let keep: Vec<usize> = (0..parities.len()).filter(|&i| parities[i] == p).collect();
    if keep.is_empty() {
        return 0;
    }
    rank(&columns(&power(d, j), &keep))
}

fn flip(p: Parity) -> Parity {
    match p {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    }
}

/// Jordan blocks of the nilpotent part of a parity-swapping operator, as
/// `size -> [#bottom even, #bottom odd]`.
///
/// With `c(s, p)` the number of chain vectors of height exactly `s` and
/// parity `p`, the blocks of size `s` with top parity `p` number
/// `c(s, p) - c(s+1, flip p)`.
pub fn census(dirac: &Matrix, parities: &[Parity]) -> BTreeMap<usize, [usize; 2]> {
    let d = rows(dirac);
    let n = parities.len();
    let r = |p: Parity, j: usize| parity_rank(&d, parities, p, j);
    let c = |s: usize, p: Parity| r(p, s - 1) - r(p, s);
    let mut out = BTreeMap::new();
    for s in 1..=n {
        for top in [Parity::Even, Parity::Odd] {
            let next = if s < n { c(s + 1, flip(top)) } else { 0 };
            let count = c(s, top) - next;
            if count > 0 {
                let bottom = if s % 2 == 1 { top } else { flip(top) };
                out.entry(s).or_insert([0, 0])[(bottom == Parity::Odd) as usize] += count;
            }
        }
    }
    out
}

pub fn block_census(b: &WeightBlock) -> BTreeMap<usize, [usize; 2]> {
    census(&b.dirac, &b.parities)
}

/// Sizes of all blocks over the safe weights, largest first.
pub fn jordan_sizes(t: &TensorComplex) -> Vec<usize> {
    let mut sizes = Vec::new();
    for w in t.safe_weights() {
        for (s, counts) in block_census(&t.blocks()[w]) {
            sizes.extend(std::iter::repeat_n(s, counts[0] + counts[1]));
        }
    }
    sizes.sort_by(|a, b| b.cmp(a));
    sizes
}

/// `(degree, weight, parity)` of the higher cohomology: one class per block
/// of size `2k+1`, sitting at its bottom.
pub fn higher_cohomology(t: &TensorComplex) -> Vec<(usize, Weight, Parity)> {
    let mut out = Vec::new();
    for &w in t.safe_weights() {
        for (s, counts) in block_census(&t.blocks()[&w]) {
            if s % 2 == 1 {
                for (p, &n) in [Parity::Even, Parity::Odd].iter().zip(&counts) {
                    out.extend(std::iter::repeat_n(((s - 1) / 2, w, *p), n));
                }
            }
        }
    }
    out.sort();
    out
}

/// `Ker D / (Ker D ∩ Im D)` per safe weight and parity.
pub fn classical_cohomology(t: &TensorComplex) -> Vec<(Weight, Parity)> {
    let mut out = Vec::new();
    for &w in t.safe_weights() {
        let b = &t.blocks()[&w];
        let d = rows(&b.dirac);
        for p in [Parity::Even, Parity::Odd] {
            let n_p = b.parities.iter().filter(|&&q| q == p).count();
            let q = flip(p);
            let dim = n_p + parity_rank(&d, &b.parities, q, 2)
                - parity_rank(&d, &b.parities, p, 1)
                - parity_rank(&d, &b.parities, q, 1);
            out.extend(std::iter::repeat_n((w, p), dim));
        }
    }
    out.sort();
    out
}

fn signed(p: Parity) -> i64 {
    match p {
        Parity::Even => 1,
        Parity::Odd => -1,
    }
}

/// Even minus odd over the generalized 0-eigenspace at the safe weights.
pub fn zero_eigenspace_character(t: &TensorComplex) -> VirtualRModule {
    let mut out = VirtualRModule::zero();
    for &w in t.safe_weights() {
        let b = &t.blocks()[&w];
        let d = rows(&b.dirac);
        let n = b.dim();
        for p in [Parity::Even, Parity::Odd] {
            let n_p = b.parities.iter().filter(|&&q| q == p).count();
            // the invertible part of D^n is injective on its parity piece
            let dim = n_p - parity_rank(&d, &b.parities, p, n);
            out.add_term(w, signed(p) * dim as i64);
        }
    }
    out
}

pub fn index_of(classes: impl IntoIterator<Item = (Weight, Parity)>) -> VirtualRModule {
    let mut out = VirtualRModule::zero();
    for (w, p) in classes {
        out.add_term(w, signed(p));
    }
    out
}

/// Whether a cyclic sequence of maps is exact: at each node the incoming
/// map lands in the kernel and `rank in + rank out = dim`.
pub fn cyclic_exact(dims: &[usize], maps: &[Rows]) -> bool {
    let k = dims.len();
    (0..k).all(|i| {
        let into = &maps[(i + k - 1) % k];
        let out = &maps[i];
        let composite_zero = dims[i] == 0 || is_zero(&mul(out, into));
        composite_zero && rank(into) + rank(out) == dims[i]
    })
}

/// All `a ≥ 0` with `h = (a0 + a1, a1 + a2, a0 + a2)`, by search.
pub fn triangle_solutions(h: [usize; 3]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a0 in 0..=h[0] {
        for a1 in 0..=h[0] {
            for a2 in 0..=h[1] {
                if a0 + a1 == h[0] && a1 + a2 == h[1] && a0 + a2 == h[2] {
                    out.push([a0, a1, a2]);
                }
            }
        }
    }
    out
}
