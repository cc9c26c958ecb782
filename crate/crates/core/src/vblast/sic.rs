use super::complexity::{CmLedger, StepCosts};
use crate::modem::Constellation;
use crate::numerics::{pseudo_inverse_with_route, Complex, ComplexMatrix};

/// Result of ZF successive nulling and cancelling.
#[derive(Debug, Clone, PartialEq)]
pub struct SicOutput {
    /// Decided constellation point per transmit antenna.
    pub decisions: Vec<usize>,
    /// Antenna indices in the order they were detected.
    pub order: Vec<usize>,
    /// Pseudo-inverses that needed the SVD route.
    pub fallbacks: u32,
}

impl SicOutput {
    pub fn symbols(&self, c: &Constellation) -> Vec<Complex> {
        self.decisions.iter().map(|&d| c.point(d)).collect()
    }
}

/// Pseudo-inverse of `v` with every inactive column zeroed.
///
/// The pseudo-inverse of `[A 0]` is `[A⁺; 0]`, so only the active columns
/// are inverted and the remaining rows are left at zero.
pub(super) fn deflated_pseudo_inverse(v: &ComplexMatrix, active: &[bool]) -> (ComplexMatrix, bool) {
    let cols: Vec<usize> = (0..v.cols()).filter(|&j| active[j]).collect();
    if cols.len() == v.cols() {
        let p = pseudo_inverse_with_route(v);
        let fb = p.used_fallback();
        return (p.matrix, fb);
    }
    let mut reduced = ComplexMatrix::zeros(v.rows(), cols.len());
    for i in 0..v.rows() {
        for (k, &j) in cols.iter().enumerate() {
            reduced[(i, k)] = v[(i, j)];
        }
    }
    let p = pseudo_inverse_with_route(&reduced);
    let mut w = ComplexMatrix::zeros(v.cols(), v.rows());
    for (k, &j) in cols.iter().enumerate() {
        for i in 0..v.rows() {
            w[(j, i)] = p.matrix[(k, i)];
        }
    }
    (w, p.used_fallback())
}

/// Active row of `w` with the smallest squared norm; ties go to the lowest
/// index.
pub(super) fn weakest_noise_row(w: &ComplexMatrix, active: &[bool]) -> usize {
    let mut best = usize::MAX;
    let mut best_norm = f64::INFINITY;
    for (j, _) in active.iter().enumerate().filter(|(_, &a)| a) {
        let n = w.row_norm_sqr(j);
        if best == usize::MAX || n < best_norm {
            best = j;
            best_norm = n;
        }
    }
    best
}

/// `y = wᵀ r` for row `k` of `w`.
#[inline]
pub(super) fn null(w: &ComplexMatrix, k: usize, r: &[Complex]) -> Complex {
    w.row(k).iter().zip(r).map(|(a, b)| a * b).sum()
}

/// ZF-based successive nulling and cancelling.
///
/// `v` is the `Nr x Nt` equivalent channel (transmit energy already folded
/// in) and `r` the received vector. Streams are detected in order of the
/// smallest row norm of the current nulling matrix; after each decision its
/// contribution is subtracted from `r` and its column removed.
pub fn zf_nulling_cancelling(
    v: &ComplexMatrix,
    r: &[Complex],
    c: &Constellation,
    mut ledger: Option<&mut CmLedger>,
) -> SicOutput {
    let (n_rx, n_tx) = (v.rows(), v.cols());
    assert_eq!(r.len(), n_rx, "received vector length differs from Nr");
    let costs = StepCosts::new(n_tx, n_rx, 0, c.order());
    let mut charge = |f: fn(&mut CmLedger) -> &mut u128, amount: u128| {
        if let Some(l) = ledger.as_deref_mut() {
            *f(l) += amount;
        }
    };

    let mut active = vec![true; n_tx];
    let mut residual = r.to_vec();
    let mut decisions = vec![0usize; n_tx];
    let mut order = Vec::with_capacity(n_tx);
    let mut fallbacks = 0u32;

    let (mut w, fb) = deflated_pseudo_inverse(v, &active);
    fallbacks += u32::from(fb);
    charge(|l| &mut l.pseudo_inverse, costs.pseudo_inverse());
    let mut k = weakest_noise_row(&w, &active);
    charge(|l| &mut l.ordering, costs.ordering());

    for step in 0..n_tx {
        let y = null(&w, k, &residual);
        charge(|l| &mut l.nulling, costs.nulling());
        let d = c.slice_index(y);
        charge(|l| &mut l.distance, costs.distance());
        decisions[k] = d;
        order.push(k);
        if step + 1 == n_tx {
            break;
        }
        let x = c.point(d);
        for (i, res) in residual.iter_mut().enumerate() {
            *res -= x * v[(i, k)];
        }
        charge(|l| &mut l.cancelling, costs.cancelling());
        active[k] = false;
        let (next, fb) = deflated_pseudo_inverse(v, &active);
        fallbacks += u32::from(fb);
        w = next;
        charge(|l| &mut l.pseudo_inverse, costs.pseudo_inverse());
        k = weakest_noise_row(&w, &active);
        charge(|l| &mut l.ordering, costs.ordering());
    }

    SicOutput {
        decisions,
        order,
        fallbacks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{pseudo_inverse, RngStream};
    use crate::vblast::closed_form_c3;

    fn random_v(rng: &mut RngStream, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.complex_normal(1.0)).collect())
    }

    #[test]
    fn deflated_inverse_matches_zeroed_matrix_svd() {
        let mut rng = RngStream::new(3, 0);
        let v = random_v(&mut rng, 3, 3);
        let (w, fb) = deflated_pseudo_inverse(&v, &[true, false, true]);
        assert!(!fb);
        let direct = pseudo_inverse(&v.with_zeroed_columns(&[1]));
        assert!(w.sub(&direct).frobenius_norm() < 1e-10);
    }

    #[test]
    fn noiseless_recovery() {
        let mut rng = RngStream::new(4, 0);
        for order in [2, 4, 16] {
            let c = if order == 16 {
                Constellation::qam(16).unwrap()
            } else {
                Constellation::psk(order).unwrap()
            };
            for (nr, nt) in [(2, 2), (4, 2), (4, 4), (3, 1)] {
                for _ in 0..50 {
                    let v = random_v(&mut rng, nr, nt);
                    let sent: Vec<usize> = (0..nt).map(|_| rng.pick(c.order())).collect();
                    let x: Vec<Complex> = sent.iter().map(|&i| c.point(i)).collect();
                    let r = v.mul_vec(&x);
                    let out = zf_nulling_cancelling(&v, &r, &c, None);
                    assert_eq!(out.decisions, sent);
                    let mut o = out.order.clone();
                    o.sort();
                    assert_eq!(o, (0..nt).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn single_stream_is_plain_zf() {
        let mut rng = RngStream::new(5, 0);
        let c = Constellation::psk(4).unwrap();
        for _ in 0..50 {
            let v = random_v(&mut rng, 2, 1);
            let r = vec![rng.complex_normal(1.0), rng.complex_normal(1.0)];
            let w = pseudo_inverse(&v);
            let y = w.row(0)[0] * r[0] + w.row(0)[1] * r[1];
            assert_eq!(zf_nulling_cancelling(&v, &r, &c, None).decisions, vec![c.slice_index(y)]);
        }
    }

    #[test]
    fn strongest_column_goes_first() {
        let v = ComplexMatrix::from_real_rows(&[[100.0, 0.3], [0.2, 1.0]]);
        let c = Constellation::psk(2).unwrap();
        let out = zf_nulling_cancelling(&v, &[Complex::new(1.0, 0.0); 2], &c, None);
        assert_eq!(out.order[0], 0);
    }

    #[test]
    fn instrumented_cost_matches_closed_form() {
        let mut rng = RngStream::new(6, 0);
        for (nt, nr) in [(2, 2), (4, 4), (2, 4), (1, 3)] {
            for order in [2, 4] {
                let c = Constellation::psk(order).unwrap();
                let v = random_v(&mut rng, nr, nt);
                let r: Vec<Complex> = (0..nr).map(|_| rng.complex_normal(1.0)).collect();
                let mut ledger = CmLedger::default();
                zf_nulling_cancelling(&v, &r, &c, Some(&mut ledger));
                assert_eq!(ledger.total(), closed_form_c3(nt, nr, 0, order));
            }
        }
    }
}
