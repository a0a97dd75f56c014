use crate::linalg::nullspace;
use crate::matrix::Matrix;

/// Basis of {Y : XY = YX}, solved as a linear system in the d^2 entries of Y.
pub fn centralizer_space(x: &Matrix) -> Vec<Matrix> {
    let f = x.field();
    let d = x.dim();
    let n = d * d;
    let mut rows = Vec::with_capacity(n);
    for r in 0..d {
        for c in 0..d {
            // (XY - YX)_{r,c} = sum_k X_{r,k} Y_{k,c} - Y_{r,k} X_{k,c}.
            let mut row = vec![f.zero(); n];
            for k in 0..d {
                let a = f.add(&row[k * d + c], x.at(r, k));
                row[k * d + c] = a;
                let b = f.sub(&row[r * d + k], x.at(k, c));
                row[r * d + k] = b;
            }
            rows.push(row);
        }
    }
    nullspace(f, &rows, n)
        .into_iter()
        .map(|v| Matrix::from_data(f, d, v))
        .collect()
}
