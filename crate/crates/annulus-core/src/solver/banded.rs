//! Banded LU factorization with partial pivoting (LAPACK gbtrf layout).
//!
//! The Shortley-Weller Jacobian is banded with bandwidth bounded by the
//! number of interior nodes per lattice line, so a direct band solve is
//! cheap at the node counts this crate targets.

/// Column-major band storage: entry (i, j) lives at
/// `data[j * nrows + kl + ku + i - j]` with `nrows = 2*kl + ku + 1`.
/// The extra `kl` rows hold the fill produced by row pivoting.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    nrows: usize,
    data: Vec<f64>,
}

pub struct BandedLu {
    n: usize,
    kl: usize,
    kv: usize,
    nrows: usize,
    data: Vec<f64>,
    ipiv: Vec<u32>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let nrows = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            nrows,
            data: vec![0.0; nrows * n],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!((j >= i && j - i <= self.ku) || (i >= j && i - j <= self.kl));
        j * self.nrows + self.kl + self.ku + i - j
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// Factor in place; returns the column of the first exactly-zero pivot
    /// on failure.
    pub fn factor(mut self) -> Result<BandedLu, usize> {
        let (n, kl, ku, nrows) = (self.n, self.kl, self.ku, self.nrows);
        let kv = kl + ku;
        let mut ipiv = vec![0u32; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // pivot search in column j, rows j..=j+km
            let col = j * nrows;
            let mut piv = 0usize;
            let mut piv_abs = self.data[col + kv].abs();
            for t in 1..=km {
                let a = self.data[col + kv + t].abs();
                if a > piv_abs {
                    piv_abs = a;
                    piv = t;
                }
            }
            ipiv[j] = (j + piv) as u32;
            if self.data[col + kv + piv] == 0.0 {
                return Err(j);
            }
            ju = ju.max((j + ku + piv).min(n - 1));
            if piv != 0 {
                // swap rows j and j+piv across columns j..=ju
                for c in j..=ju {
                    let base = c * nrows + kv + j - c;
                    self.data.swap(base, base + piv);
                }
            }
            if km > 0 {
                let inv = 1.0 / self.data[col + kv];
                for t in 1..=km {
                    self.data[col + kv + t] *= inv;
                }
                for c in (j + 1)..=ju {
                    let ajc = self.data[c * nrows + kv + j - c];
                    if ajc != 0.0 {
                        let base = c * nrows + kv + j - c;
                        for t in 1..=km {
                            let m = self.data[col + kv + t];
                            self.data[base + t] -= m * ajc;
                        }
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            kv,
            nrows,
            data: self.data,
            ipiv,
        })
    }
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, kv, nrows) = (self.n, self.kl, self.kv, self.nrows);
        // L: unit lower triangular, multipliers under the diagonal
        for j in 0..n {
            let p = self.ipiv[j] as usize;
            if p != j {
                b.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let col = j * nrows + kv;
            let bj = b[j];
            for t in 1..=km {
                b[j + t] -= self.data[col + t] * bj;
            }
        }
        // U: bandwidth kv
        for i in (0..n).rev() {
            let jmax = (i + kv).min(n - 1);
            let mut sum = b[i];
            for j in (i + 1)..=jmax {
                sum -= self.data[j * nrows + kv + i - j] * b[j];
            }
            b[i] = sum / self.data[i * nrows + kv];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for j in 0..n {
            let piv = (j..n).max_by(|&p, &q| a[p][j].abs().total_cmp(&a[q][j].abs())).unwrap();
            a.swap(j, piv);
            b.swap(j, piv);
            for i in j + 1..n {
                let m = a[i][j] / a[j][j];
                for c in j..n {
                    a[i][c] -= m * a[j][c];
                }
                b[i] -= m * b[j];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= a[i][j] * b[j];
            }
            b[i] = s / a[i][i];
        }
        b
    }

    #[test]
    fn matches_dense_on_random_bands() {
        let mut rng = StdRng::seed_from_u64(42);
        for &(n, kl, ku) in &[(1usize, 0usize, 0usize), (7, 1, 1), (25, 3, 2), (40, 5, 5)] {
            let mut band = BandedMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if (j >= i && j - i <= ku) || (i >= j && i - j <= kl) {
                        let v: f64 = rng.gen_range(-1.0..1.0);
                        let v = if i == j { v + 4.0 } else { v };
                        band.set(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = band.factor().unwrap();
            let mut x = b.clone();
            lu.solve_in_place(&mut x);
            let want = dense_solve(dense, b);
            for (got, want) in x.iter().zip(&want) {
                assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn tridiagonal_poisson_exact_on_quadratic() {
        // -u'' = 2 with u(0)=u(1)=0 has u = x(1-x); the 3-point scheme is exact
        let n = 33;
        let h = 1.0 / (n + 1) as f64;
        let mut m = BandedMatrix::zeros(n, 1, 1);
        let mut b = vec![2.0; n];
        for i in 0..n {
            m.set(i, i, 2.0 / (h * h));
            if i > 0 {
                m.set(i, i - 1, -1.0 / (h * h));
            }
            if i + 1 < n {
                m.set(i, i + 1, -1.0 / (h * h));
            }
        }
        let lu = m.factor().unwrap();
        lu.solve_in_place(&mut b);
        for i in 0..n {
            let x = (i + 1) as f64 * h;
            assert!((b[i] - x * (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_reports_column() {
        let mut m = BandedMatrix::zeros(2, 0, 0);
        m.set(0, 0, 1.0);
        // leave (1,1) zero: diagonal-only band, no pivoting possible
        assert_eq!(m.factor().err(), Some(1));
    }
}
