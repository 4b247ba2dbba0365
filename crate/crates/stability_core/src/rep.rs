//! Quiver representations over `F_2` and `F_3` and brute-force King
//! stability.

use std::cmp::Ordering;

use differential_core::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charge::CentralCharge;
use crate::field::{echelon, gl_order, subspaces, FpMatrix, Subspace};
use crate::StabilityError;

/// Largest total dimension accepted by [`king_stable`].
pub const MAX_TOTAL_DIM: usize = 6;
/// Largest field size accepted by [`king_stable`].
pub const MAX_FIELD: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepQuiver {
    pub vertices: usize,
    /// Arrows as `(source, target)`.
    pub arrows: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `i -> i + 1`.
    Right,
    /// `i + 1 -> i`.
    Left,
}

impl RepQuiver {
    /// Two arrows `1 -> 2`.
    pub fn kronecker() -> Self {
        RepQuiver { vertices: 2, arrows: vec![(0, 1), (0, 1)] }
    }

    /// Arrows `a: 1 -> 2`, `b: 1 -> 3`, `c: 3 -> 2`.
    pub fn affine_a2() -> Self {
        RepQuiver { vertices: 3, arrows: vec![(0, 1), (0, 2), (2, 1)] }
    }

    /// Linear quiver with one arrow between consecutive vertices.
    pub fn linear(orientation: &[Direction]) -> Self {
        let arrows = orientation
            .iter()
            .enumerate()
            .map(|(i, d)| match d {
                Direction::Right => (i, i + 1),
                Direction::Left => (i + 1, i),
            })
            .collect();
        RepQuiver { vertices: orientation.len() + 1, arrows }
    }

    /// The quiver whose arrows `i -> j` number `B_ij` when positive.
    pub fn from_exchange(q: &quiver_core::Quiver) -> Self {
        let n = q.n();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..q.arrows(i, j) {
                    arrows.push((i, j));
                }
            }
        }
        RepQuiver { vertices: n, arrows }
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Self {
        RepQuiver { vertices: self.vertices, arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

/// A representation: a vector space `F_p^{d_v}` at each vertex and a
/// `d_t x d_s` matrix for each arrow `s -> t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRep {
    pub quiver: RepQuiver,
    pub dims: Vec<usize>,
    pub p: u8,
    pub maps: Vec<FpMatrix>,
}

fn is_prime(p: u8) -> bool {
    p >= 2 && (2..p).all(|k| !p.is_multiple_of(k))
}

impl FiniteRep {
    pub fn new(quiver: RepQuiver, dims: Vec<usize>, p: u8, maps: Vec<FpMatrix>) -> Result<Self, StabilityError> {
        if !is_prime(p) {
            return Err(StabilityError::Shape(format!("{p} is not prime")));
        }
        if dims.len() != quiver.vertices || maps.len() != quiver.arrows.len() {
            return Err(StabilityError::Shape("dimension vector or arrow count mismatch".into()));
        }
        for (k, (&(s, t), m)) in quiver.arrows.iter().zip(&maps).enumerate() {
            if m.rows != dims[t] || m.cols != dims[s] {
                return Err(StabilityError::Shape(format!("arrow {k} needs a {}x{} matrix", dims[t], dims[s])));
            }
            if m.data.iter().any(|&x| x >= p) {
                return Err(StabilityError::Shape(format!("arrow {k} has entries outside F_{p}")));
            }
        }
        Ok(FiniteRep { quiver, dims, p, maps })
    }

    /// The simple representation at vertex `v`.
    pub fn simple(quiver: &RepQuiver, v: usize, p: u8) -> Self {
        let mut dims = vec![0; quiver.vertices];
        dims[v] = 1;
        let maps = quiver.arrows.iter().map(|&(s, t)| FpMatrix::zeros(dims[t], dims[s])).collect();
        FiniteRep { quiver: quiver.clone(), dims, p, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn class(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    fn closed(&self, subs: &[&Subspace]) -> bool {
        self.quiver.arrows.iter().zip(&self.maps).all(|(&(s, t), m)| {
            subs[s].basis.iter().all(|u| subs[t].contains(&m.apply(u, self.p), self.p))
        })
    }

    /// Dimension vectors of all subrepresentations, including zero and the
    /// whole representation.
    pub fn subrepresentation_classes(&self) -> Vec<Vec<usize>> {
        let lists: Vec<_> = self.dims.iter().map(|&d| subspaces(d, self.p)).collect();
        let mut idx = vec![0usize; self.dims.len()];
        let mut out = Vec::new();
        loop {
            let subs: Vec<&Subspace> = idx.iter().enumerate().map(|(v, &i)| &lists[v][i]).collect();
            if self.closed(&subs) {
                out.push(subs.iter().map(|s| s.dim()).collect());
            }
            let mut v = 0;
            loop {
                if v == idx.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                idx[v] += 1;
                if idx[v] < lists[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }

    /// A basis of the endomorphism algebra, each element one matrix per vertex.
    pub fn endomorphism_basis(&self) -> Vec<Vec<FpMatrix>> {
        let p = self.p;
        // Unknowns: entries of phi_v for every vertex, in order.
        let offsets: Vec<usize> = self.dims.iter().scan(0, |acc, &d| {
            let o = *acc;
            *acc += d * d;
            Some(o)
        }).collect();
        let unknowns: usize = self.dims.iter().map(|d| d * d).sum();
        let mut rows: Vec<Vec<u8>> = Vec::new();
        // M phi_s - phi_t M = 0 for each arrow, entrywise.
        for (&(s, t), m) in self.quiver.arrows.iter().zip(&self.maps) {
            let (ds, dt) = (self.dims[s], self.dims[t]);
            for i in 0..dt {
                for j in 0..ds {
                    let mut row = vec![0u8; unknowns];
                    for k in 0..ds {
                        let x = offsets[s] + k * ds + j;
                        row[x] = (row[x] + m.get(i, k)) % p;
                    }
                    for k in 0..dt {
                        let x = offsets[t] + i * dt + k;
                        row[x] = (row[x] + p - m.get(k, j)) % p;
                    }
                    rows.push(row);
                }
            }
        }
        let reduced = echelon(rows, p);
        let pivots: Vec<usize> = reduced.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
        let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u8; unknowns];
                x[f] = 1;
                for (r, &c) in reduced.iter().zip(&pivots) {
                    x[c] = (p - r[f]) % p;
                }
                self.dims
                    .iter()
                    .zip(&offsets)
                    .map(|(&d, &o)| FpMatrix { rows: d, cols: d, data: x[o..o + d * d].to_vec() })
                    .collect()
            })
            .collect()
    }

    /// Every endomorphism, enumerated from a basis.
    pub fn endomorphisms(&self) -> Vec<Vec<FpMatrix>> {
        let basis = self.endomorphism_basis();
        let p = self.p;
        let total = (p as u64).pow(basis.len() as u32);
        (0..total)
            .map(|mut code| {
                let mut acc: Vec<FpMatrix> = self.dims.iter().map(|&d| FpMatrix::zeros(d, d)).collect();
                for b in &basis {
                    let c = (code % p as u64) as u8;
                    code /= p as u64;
                    for (a, m) in acc.iter_mut().zip(b) {
                        for (x, y) in a.data.iter_mut().zip(&m.data) {
                            *x = ((*x as u32 + c as u32 * *y as u32) % p as u32) as u8;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Indecomposable iff the endomorphism algebra is local: every
    /// endomorphism is invertible or nilpotent.
    pub fn is_indecomposable(&self) -> bool {
        if self.total_dim() == 0 {
            return false;
        }
        let p = self.p;
        self.endomorphisms().iter().all(|phi| {
            let invertible = phi.iter().all(|m| m.is_invertible(p));
            let nilpotent = phi.iter().all(|m| {
                let mut pow = m.clone();
                for _ in 0..m.rows {
                    pow = pow.mul(m, p);
                }
                m.rows == 0 || pow.is_zero()
            });
            invertible || nilpotent
        })
    }

    /// Whether `g` conjugates `self` into `other` for some invertible gauge.
    pub fn is_isomorphic(&self, other: &FiniteRep) -> bool {
        if self.dims != other.dims || self.quiver != other.quiver || self.p != other.p {
            return false;
        }
        let p = self.p;
        let groups: Vec<Vec<FpMatrix>> =
            self.dims.iter().map(|&d| FpMatrix::all(d, d, p).filter(|m| m.is_invertible(p)).collect()).collect();
        let mut idx = vec![0usize; groups.len()];
        loop {
            let g: Vec<&FpMatrix> = idx.iter().enumerate().map(|(v, &i)| &groups[v][i]).collect();
            // g_t M = M' g_s for every arrow.
            let ok = self.quiver.arrows.iter().zip(self.maps.iter().zip(&other.maps)).all(|(&(s, t), (m, n))| {
                g[t].mul(m, p) == n.mul(g[s], p)
            });
            if ok {
                return true;
            }
            let mut v = 0;
            loop {
                if v == idx.len() {
                    return false;
                }
                idx[v] += 1;
                if idx[v] < groups[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }
}

/// King stability: stable iff every proper nonzero subrepresentation has
/// strictly smaller phase. Phases are compared by cross products.
pub fn king_stable<T: Real>(rep: &FiniteRep, z: &CentralCharge<T>) -> Result<Verdict, StabilityError> {
    if rep.total_dim() > MAX_TOTAL_DIM {
        return Err(StabilityError::BudgetExceeded(format!("total dimension {} > {MAX_TOTAL_DIM}", rep.total_dim())));
    }
    if rep.p > MAX_FIELD {
        return Err(StabilityError::BudgetExceeded(format!("field size {} > {MAX_FIELD}", rep.p)));
    }
    if z.rank() != rep.dims.len() {
        return Err(StabilityError::Shape("central charge rank differs from the vertex count".into()));
    }
    if rep.total_dim() == 0 {
        return Err(StabilityError::Shape("zero representation".into()));
    }
    let d = rep.class();
    let mut verdict = Verdict::Stable;
    for e in rep.subrepresentation_classes() {
        if e.iter().all(|&x| x == 0) || e == rep.dims {
            continue;
        }
        let e: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        match z.compare(&e, &d) {
            Ordering::Greater => return Ok(Verdict::Unstable),
            Ordering::Equal => verdict = Verdict::StrictlySemistable,
            Ordering::Less => {}
        }
    }
    Ok(verdict)
}

/// Stable with endomorphisms only the scalars, so stable after any field
/// extension.
pub fn absolutely_stable<T: Real>(rep: &FiniteRep, z: &CentralCharge<T>) -> Result<bool, StabilityError> {
    Ok(king_stable(rep, z)? == Verdict::Stable && rep.endomorphism_basis().len() == 1)
}

/// Number of representations of class `dims` over `F_p`.
pub fn rep_count(quiver: &RepQuiver, dims: &[usize], p: u8) -> u64 {
    let entries: u32 = quiver.arrows.iter().map(|&(s, t)| (dims[s] * dims[t]) as u32).sum();
    (p as u64).pow(entries)
}

/// The `k`-th representation of class `dims` in a fixed enumeration.
pub fn rep_by_index(quiver: &RepQuiver, dims: &[usize], p: u8, mut k: u64) -> FiniteRep {
    let maps = quiver
        .arrows
        .iter()
        .map(|&(s, t)| {
            let mut m = FpMatrix::zeros(dims[t], dims[s]);
            for x in m.data.iter_mut() {
                *x = (k % p as u64) as u8;
                k /= p as u64;
            }
            m
        })
        .collect();
    FiniteRep { quiver: quiver.clone(), dims: dims.to_vec(), p, maps }
}

/// Isomorphism classes of absolutely stable representations of a class,
/// counted as `N (p - 1) / |GL(d)|` from the number `N` of such
/// representations (their automorphisms are the nonzero scalars).
pub fn stable_class_count<T: Real>(quiver: &RepQuiver, dims: &[usize], z: &CentralCharge<T>, p: u8) -> Result<u64, StabilityError> {
    let total = rep_count(quiver, dims, p);
    let stable: Result<Vec<bool>, StabilityError> =
        (0..total).into_par_iter().map(|k| absolutely_stable(&rep_by_index(quiver, dims, p, k), z)).collect();
    let n = stable?.into_iter().filter(|&s| s).count() as u128;
    let gl: u128 = dims.iter().map(|&d| gl_order(d, p)).product();
    let classes = n * (p as u128 - 1);
    if !classes.is_multiple_of(gl) {
        return Err(StabilityError::Shape("stable representations do not form free orbits".into()));
    }
    Ok((classes / gl) as u64)
}

/// Some absolutely stable representation of the class, if one exists.
pub fn find_stable<T: Real>(quiver: &RepQuiver, dims: &[usize], z: &CentralCharge<T>, p: u8) -> Result<Option<FiniteRep>, StabilityError> {
    let total = rep_count(quiver, dims, p);
    let found = (0..total)
        .into_par_iter()
        .map(|k| rep_by_index(quiver, dims, p, k))
        .find_first(|r| absolutely_stable(r, z).unwrap_or(false));
    Ok(found)
}
