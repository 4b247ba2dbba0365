//! Linear algebra over a small prime field.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

/// Dense matrix over `F_p`, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries in `0..p`.
    pub data: Vec<u8>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        FpMatrix { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FpMatrix, p: u8) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = FpMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u32 = (0..self.cols).map(|k| self.get(i, k) as u32 * other.get(k, j) as u32).sum();
                out.set(i, j, (s % p as u32) as u8);
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix, p: u8) -> FpMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % p).collect();
        FpMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix, p: u8) -> FpMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect();
        FpMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, v: &[u8], p: u8) -> Vec<u8> {
        (0..self.rows)
            .map(|i| ((0..self.cols).map(|k| self.get(i, k) as u32 * v[k] as u32).sum::<u32>() % p as u32) as u8)
            .collect()
    }

    pub fn rank(&self, p: u8) -> usize {
        let rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        echelon(rows, p).len()
    }

    pub fn is_invertible(&self, p: u8) -> bool {
        self.rows == self.cols && self.rank(p) == self.rows
    }

    /// All matrices of the given shape.
    pub fn all(rows: usize, cols: usize, p: u8) -> impl Iterator<Item = FpMatrix> {
        let len = rows * cols;
        let total = (p as u64).pow(len as u32);
        (0..total).map(move |mut k| {
            let mut data = vec![0u8; len];
            for x in data.iter_mut() {
                *x = (k % p as u64) as u8;
                k /= p as u64;
            }
            FpMatrix { rows, cols, data }
        })
    }
}

pub fn inverse(a: u8, p: u8) -> u8 {
    (1..p).find(|&b| (a as u32 * b as u32) % p as u32 == 1).expect("nonzero element")
}

/// Reduced row echelon form of the span of `rows`, zero rows dropped.
pub fn echelon(mut rows: Vec<Vec<u8>>, p: u8) -> Vec<Vec<u8>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = inverse(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = ((*x as u32 * inv as u32) % p as u32) as u8;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c] as u32;
                for j in 0..n {
                    rows[k][j] = ((rows[k][j] as u32 + (p as u32 - f) * rows[r][j] as u32) % p as u32) as u8;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A subspace of `F_p^n` stored by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[u8], p: u8) -> bool {
        let mut w = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("echelon rows are nonzero");
            let f = w[c] as u32;
            if f != 0 {
                for j in 0..w.len() {
                    w[j] = ((w[j] as u32 + (p as u32 - f) * row[j] as u32) % p as u32) as u8;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in pivot_sets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

fn generate(n: usize, p: u8) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in pivot_sets(n, k) {
            // Free entries: row r, columns after its pivot that are not pivots.
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for mut code in 0..total {
                let mut basis = vec![vec![0u8; n]; k];
                for (r, &c) in pivots.iter().enumerate() {
                    basis[r][c] = 1;
                }
                for &(r, c) in &free {
                    basis[r][c] = (code % p as u64) as u8;
                    code /= p as u64;
                }
                out.push(Subspace { ambient: n, basis });
            }
        }
    }
    out
}

/// All subspaces of `F_p^n`, cached.
pub fn subspaces(n: usize, p: u8) -> std::sync::Arc<Vec<Subspace>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u8), std::sync::Arc<Vec<Subspace>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("subspace cache");
    guard.entry((n, p)).or_insert_with(|| std::sync::Arc::new(generate(n, p))).clone()
}

/// `|GL_n(F_p)|`.
pub fn gl_order(n: usize, p: u8) -> u128 {
    let q = p as u128;
    (0..n as u32).map(|i| q.pow(n as u32) - q.pow(i)).product()
}
