use nalgebra::DMatrix;

use super::{Complex, ComplexMatrix};

/// Gram matrices whose 1-norm condition estimate exceeds this are handed to
/// the SVD path.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// Which formula produced a pseudo-inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinvRoute {
    /// `A^H (A A^H)^-1`, used for square and wide matrices.
    RightInverse,
    /// `(A^H A)^-1 A^H`, used for tall matrices.
    LeftInverse,
    /// Singular value decomposition, used when the Gram matrix is
    /// (numerically) singular.
    Svd,
}

#[derive(Debug, Clone)]
pub struct Pinv {
    pub matrix: ComplexMatrix,
    pub route: PinvRoute,
}

impl Pinv {
    pub fn used_fallback(&self) -> bool {
        self.route == PinvRoute::Svd
    }
}

/// Moore-Penrose pseudo-inverse.
pub fn pseudo_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    pseudo_inverse_with_route(a).matrix
}

/// Moore-Penrose pseudo-inverse, also reporting which route was taken.
///
/// Full-rank inputs go through the Gram-matrix formula on the short side;
/// rank-deficient or badly conditioned inputs fall back to an SVD.
pub fn pseudo_inverse_with_route(a: &ComplexMatrix) -> Pinv {
    let ah = a.hermitian();
    let (gram, route) = if a.rows() <= a.cols() {
        (a.matmul(&ah), PinvRoute::RightInverse)
    } else {
        (ah.matmul(a), PinvRoute::LeftInverse)
    };
    if let Some(gram_inv) = invert_well_conditioned(&gram) {
        let matrix = match route {
            PinvRoute::RightInverse => ah.matmul(&gram_inv),
            _ => gram_inv.matmul(&ah),
        };
        return Pinv { matrix, route };
    }
    log::debug!(
        "Gram matrix of {}x{} input is singular to tolerance, using SVD",
        a.rows(),
        a.cols()
    );
    Pinv {
        matrix: svd_pseudo_inverse(a),
        route: PinvRoute::Svd,
    }
}

/// Inverts a square matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` when a pivot vanishes or the 1-norm condition
/// estimate exceeds [`GRAM_CONDITION_LIMIT`].
fn invert_well_conditioned(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.rows();
    debug_assert_eq!(n, m.cols());
    let scale = m.norm_one();
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let mut work = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| work[(i, col)].norm().total_cmp(&work[(j, col)].norm()))
            .unwrap();
        if work[(pivot_row, col)].norm() <= scale * f64::EPSILON * n as f64 {
            return None;
        }
        if pivot_row != col {
            for j in 0..n {
                let t = work[(col, j)];
                work[(col, j)] = work[(pivot_row, j)];
                work[(pivot_row, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot_row, j)];
                inv[(pivot_row, j)] = t;
            }
        }
        let p = work[(col, col)].inv();
        for j in 0..n {
            work[(col, j)] *= p;
            inv[(col, j)] *= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = work[(i, col)];
            if f == Complex::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let w = work[(col, j)];
                let v = inv[(col, j)];
                work[(i, j)] -= f * w;
                inv[(i, j)] -= f * v;
            }
        }
    }
    let condition = scale * inv.norm_one();
    if !condition.is_finite() || condition > GRAM_CONDITION_LIMIT {
        return None;
    }
    Some(inv)
}

fn svd_pseudo_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (a.rows(), a.cols());
    let m = DMatrix::<Complex>::from_row_slice(rows, cols, a.as_slice());
    let svd = m.svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = sigma_max * rows.max(cols) as f64 * f64::EPSILON;
    let pinv = svd
        .pseudo_inverse(eps.max(f64::MIN_POSITIVE))
        .expect("SVD computed with both singular vector sets");
    let mut out = ComplexMatrix::zeros(cols, rows);
    for i in 0..cols {
        for j in 0..rows {
            out[(i, j)] = pinv[(i, j)];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn random_matrix(rows: usize, cols: usize, rng: &mut RngStream) -> ComplexMatrix {
        let data = (0..rows * cols).map(|_| rng.complex_normal(1.0)).collect();
        ComplexMatrix::from_vec(rows, cols, data)
    }

    fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.sub(b).frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    #[test]
    fn identity_is_its_own_pseudo_inverse() {
        let i = ComplexMatrix::identity(2);
        let p = pseudo_inverse_with_route(&i);
        assert_eq!(p.route, PinvRoute::RightInverse);
        assert!(rel(&p.matrix, &i) < 1e-15);
    }

    #[test]
    fn rank_deficient_diagonal_uses_svd() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 0.0]]);
        let p = pseudo_inverse_with_route(&a);
        assert_eq!(p.route, PinvRoute::Svd);
        let expected = ComplexMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.0]]);
        assert!(p.matrix.sub(&expected).frobenius_norm() < 1e-12);
    }

    #[test]
    fn wide_random_matrix_satisfies_penrose_conditions() {
        let mut rng = RngStream::new(11, 0);
        let a = random_matrix(2, 4, &mut rng);
        let p = pseudo_inverse_with_route(&a);
        assert_eq!(p.route, PinvRoute::RightInverse);
        let ap = p.matrix;
        assert!(rel(&a.matmul(&ap).matmul(&a), &a) < 1e-9);
        assert!(rel(&ap.matmul(&a).matmul(&ap), &ap) < 1e-9);
    }

    #[test]
    fn tall_matrix_uses_left_inverse() {
        let mut rng = RngStream::new(12, 0);
        let a = random_matrix(4, 2, &mut rng);
        let p = pseudo_inverse_with_route(&a);
        assert_eq!(p.route, PinvRoute::LeftInverse);
        assert!(rel(&p.matrix.matmul(&a), &ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn zero_column_goes_through_svd() {
        let mut rng = RngStream::new(13, 0);
        let a = random_matrix(2, 2, &mut rng).with_zeroed_columns(&[1]);
        let p = pseudo_inverse_with_route(&a);
        assert!(p.used_fallback());
        assert!(p.matrix.row_norm_sqr(1) < 1e-24);
        assert!(rel(&a.matmul(&p.matrix).matmul(&a), &a) < 1e-9);
    }
}
