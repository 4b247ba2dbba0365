use serde::{Deserialize, Serialize};

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix(pub Vec<Vec<i64>>);

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix(vec![vec![0; n]; n])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.0[i][i] = 1;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.0[i][j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.0[i][k];
                if a != 0 {
                    for j in 0..n {
                        out.0[i][j] += a * other.0[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.0.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n();
        IntMatrix((0..n).map(|i| (0..n).map(|j| self.0[j][i]).collect()).collect())
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> i64 {
        let n = self.n();
        let mut a: Vec<Vec<i128>> = self.0.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            1
        } else {
            (sign * a[n - 1][n - 1]) as i64
        }
    }

    /// Inverse of a unimodular matrix, by Gauss-Jordan over the rationals
    /// with integer results checked.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let n = self.n();
        let mut a: Vec<Vec<f64>> = self.0.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let mut inv: Vec<Vec<f64>> = IntMatrix::identity(n).0.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
            if a[p][c].abs() < 1e-12 {
                return None;
            }
            a.swap(c, p);
            inv.swap(c, p);
            let d = a[c][c];
            for j in 0..n {
                a[c][j] /= d;
                inv[c][j] /= d;
            }
            for r in 0..n {
                if r != c && a[r][c] != 0.0 {
                    let f = a[r][c];
                    for j in 0..n {
                        a[r][j] -= f * a[c][j];
                        inv[r][j] -= f * inv[c][j];
                    }
                }
            }
        }
        let out = IntMatrix(inv.iter().map(|r| r.iter().map(|x| x.round() as i64).collect()).collect());
        (self.mul(&out) == IntMatrix::identity(n)).then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMatrix(vec![vec![2, 1, 0], vec![1, 1, 0], vec![0, 3, -1]]);
        assert_eq!(m.det(), -1);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(inv.mul(&m), IntMatrix::identity(3));
        assert_eq!(IntMatrix(vec![vec![2, 0], vec![0, 1]]).inverse_unimodular(), None);
        assert_eq!(IntMatrix(vec![vec![0, 1], vec![1, 0]]).det(), -1);
    }
}
