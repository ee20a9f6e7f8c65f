//! Small dense real linear algebra: row-major square matrices, LU solves and
//! eigenvalues of general (non-symmetric) matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::{fabs, sqrt};

/// Row-major `n x n` real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Solves `A x = b` by LU with partial pivoting. `None` if `A` is
    /// numerically singular.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(fabs(*v))).max(1.0);
        for col in 0..n {
            let (pivot, best) =
                (col..n)
                    .map(|r| (r, fabs(a[r * n + col])))
                    .fold(
                        (col, -1.0),
                        |acc, cur| if cur.1 > acc.1 { cur } else { acc },
                    );
            if best <= scale * 1e-300 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                x.swap(col, pivot);
            }
            let diag = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / diag;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
                x[r] -= factor * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut acc = x[col];
            for j in col + 1..n {
                acc -= a[col * n + j] * x[j];
            }
            x[col] = acc / a[col * n + col];
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }

    /// All eigenvalues as `(re, im)` pairs, complex pairs adjacent.
    ///
    /// Gaussian reduction to upper Hessenberg form followed by the Francis
    /// double-shift QR iteration. Returns `None` if the iteration fails to
    /// converge.
    pub fn eigenvalues(&self) -> Option<Vec<(f64, f64)>> {
        let n = self.n;
        if n == 0 {
            return Some(Vec::new());
        }
        // 1-based working copy, (n+1)^2 with row/column 0 unused
        let w = n + 1;
        let mut a = vec![0.0; w * w];
        for i in 0..n {
            for j in 0..n {
                a[(i + 1) * w + (j + 1)] = self.data[i * n + j];
            }
        }
        hessenberg(&mut a, n);
        hqr(&mut a, n)
    }

    /// Largest real part among the eigenvalues.
    pub fn spectral_abscissa(&self) -> Option<f64> {
        self.eigenvalues()
            .map(|ev| ev.iter().fold(f64::NEG_INFINITY, |m, &(re, _)| m.max(re)))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

fn hessenberg(a: &mut [f64], n: usize) {
    let w = n + 1;
    let at = |i: usize, j: usize| i * w + j;
    for m in 2..n {
        let mut x = 0.0;
        let mut i = m;
        for j in m..=n {
            if fabs(a[at(j, m - 1)]) > fabs(x) {
                x = a[at(j, m - 1)];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                a.swap(at(i, j), at(m, j));
            }
            for j in 1..=n {
                a.swap(at(j, i), at(j, m));
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a[at(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[at(i, m - 1)] = y;
                    for j in m..=n {
                        a[at(i, j)] -= y * a[at(m, j)];
                    }
                    for j in 1..=n {
                        a[at(j, m)] += y * a[at(j, i)];
                    }
                }
            }
        }
    }
    // drop the stored multipliers below the subdiagonal
    for i in 3..=n {
        for j in 1..(i - 1) {
            a[at(i, j)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        fabs(a)
    } else {
        -fabs(a)
    }
}

fn hqr(a: &mut [f64], n: usize) -> Option<Vec<(f64, f64)>> {
    let w = n + 1;
    let at = |i: usize, j: usize| i * w + j;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += fabs(a[at(i, j)]);
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = fabs(a[at(l - 1, l - 1)]) + fabs(a[at(l, l)]);
                if s == 0.0 {
                    s = anorm;
                }
                if fabs(a[at(l, l - 1)]) + s == s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[at(nn - 1, nn - 1)];
                let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + ww;
                    let mut z = sqrt(fabs(q));
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - ww / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return None;
                    }
                    if its == 10 || its == 20 || its == 40 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[at(i, i)] -= x;
                        }
                        let s = fabs(a[at(nn, nn - 1)]) + fabs(a[at(nn - 1, nn - 2)]);
                        x = 0.75 * s;
                        y = x;
                        ww = -0.4375 * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r);
                    let mut z;
                    let mut m = nn - 2;
                    loop {
                        z = a[at(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - ww) / a[at(m + 1, m)] + a[at(m, m + 1)];
                        q = a[at(m + 1, m + 1)] - z - r - s;
                        r = a[at(m + 2, m + 1)];
                        let s = fabs(p) + fabs(q) + fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = fabs(a[at(m, m - 1)]) * (fabs(q) + fabs(r));
                        let v = fabs(p)
                            * (fabs(a[at(m - 1, m - 1)]) + fabs(z) + fabs(a[at(m + 1, m + 1)]));
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[at(i, i - 2)] = 0.0;
                        if i != m + 2 {
                            a[at(i, i - 3)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[at(k, k - 1)];
                            q = a[at(k + 1, k - 1)];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[at(k + 2, k - 1)];
                            }
                            x = fabs(p) + fabs(q) + fabs(r);
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign(sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[at(k, k - 1)] = -a[at(k, k - 1)];
                                }
                            } else {
                                a[at(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[at(k, j)] + q * a[at(k + 1, j)];
                                if k != nn - 1 {
                                    p += r * a[at(k + 2, j)];
                                    a[at(k + 2, j)] -= p * z;
                                }
                                a[at(k + 1, j)] -= p * y;
                                a[at(k, j)] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[at(i, k)] + y * a[at(i, k + 1)];
                                if k != nn - 1 {
                                    p += z * a[at(i, k + 2)];
                                    a[at(i, k + 2)] -= p * r;
                                }
                                a[at(i, k + 1)] -= p * q;
                                a[at(i, k)] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Some((1..=n).map(|i| (wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn solve_small_system() {
        let a = DenseMatrix::from_fn(3, |i, j| {
            [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]][i][j]
        });
        let x = a.solve(&[1.0, 2.0, 3.0]).unwrap();
        let back = a.mul_vec(&x);
        for (b, e) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((b - e).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_system() {
        let a = DenseMatrix::from_fn(2, |_, _| 1.0);
        assert!(a.solve(&[1.0, 2.0]).is_none());
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = DenseMatrix::from_fn(2, |i, j| [[0.0, -1.0], [1.0, 0.0]][i][j]);
        let ev = sorted(a.eigenvalues().unwrap());
        assert!((ev[0].0).abs() < 1e-14 && (ev[0].1 + 1.0).abs() < 1e-14);
        assert!((ev[1].0).abs() < 1e-14 && (ev[1].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn triangular_eigenvalues_are_diagonal() {
        let a = DenseMatrix::from_fn(4, |i, j| {
            if j >= i {
                (i + 1) as f64 + j as f64 * 0.5
            } else {
                0.0
            }
        });
        let ev = sorted(a.eigenvalues().unwrap());
        let want = [1.0, 2.5, 4.0, 5.5];
        for ((re, im), w) in ev.iter().zip(want) {
            assert!(
                (re - w).abs() < 1e-12 && im.abs() < 1e-12,
                "{re} {im} vs {w}"
            );
        }
    }

    #[test]
    fn one_by_one() {
        let a = DenseMatrix::from_fn(1, |_, _| -3.5);
        assert_eq!(a.eigenvalues().unwrap(), vec![(-3.5, 0.0)]);
        assert_eq!(a.spectral_abscissa(), Some(-3.5));
    }
}
