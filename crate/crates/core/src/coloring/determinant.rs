//! Exact integer determinants and the aperiodicity criteria built on them.

use alloc::vec::Vec;

use super::{ColoringError, ColoringMatrix};
use crate::lattice::GridKind;

/// Determinant of a row-major `n x n` integer matrix by fraction-free
/// (Bareiss) elimination. Every intermediate division is exact.
pub fn bareiss_determinant(n: usize, entries: &[i128]) -> Result<i128, ColoringError> {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<i128> = entries.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Ok(0);
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i * n + j]
                    .checked_mul(pivot)
                    .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                    .ok_or(ColoringError::Overflow)?;
                debug_assert_eq!(num % prev, 0);
                a[i * n + j] = num / prev;
            }
            a[i * n + k] = 0;
        }
        prev = pivot;
    }
    Ok(sign * a[n * n - 1])
}

/// The determinant whose vanishing characterizes aperiodic perfect colorings:
/// `det(m)` on the square grid, `det(m + 2I)` on the triangular grid and
/// `det(m^2 - I)` on the hexagonal grid.
pub fn aperiodicity_determinant(
    matrix: &ColoringMatrix,
    kind: GridKind,
) -> Result<i128, ColoringError> {
    if !kind.is_planar() {
        return Err(ColoringError::UnsupportedKind);
    }
    if matrix.k() != kind.degree() || !matrix.validate().row_sum_violations.is_empty() {
        return Err(ColoringError::RowSums { k: kind.degree() });
    }
    let n = matrix.n();
    let m = matrix.to_i128();
    let work: Vec<i128> = match kind {
        GridKind::Square => m,
        GridKind::Triangular => (0..n * n)
            .map(|idx| m[idx] + if idx / n == idx % n { 2 } else { 0 })
            .collect(),
        GridKind::Hexagonal => (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let sq: i128 = (0..n).map(|s| m[i * n + s] * m[s * n + j]).sum();
                sq - i128::from(i == j)
            })
            .collect(),
        GridKind::Path | GridKind::BinaryTree => unreachable!(),
    };
    bareiss_determinant(n, &work)
}

/// True iff an aperiodic `matrix`-perfect coloring of the grid exists.
pub fn aperiodicity_test(matrix: &ColoringMatrix, kind: GridKind) -> Result<bool, ColoringError> {
    Ok(aperiodicity_determinant(matrix, kind)? == 0)
}
