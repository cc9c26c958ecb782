//! Complex-multiplication (CM) accounting for the receiver algorithms.
//!
//! Per-step costs follow the usual derivation table: greedy search `Nr`,
//! building `V̂` `Nr·N + Nr·N·Nt`, pseudo-inverse `2Nr²Nt + Nr³`, ordering
//! `Nt·Nr`, nulling `Nr`, distance/slicing `2^M`, cancelling `Nr`. `M` is the
//! constellation order exactly as it appears in the closed forms.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Joint exhaustive index search.
    Optimal,
    /// Greedy receive index, then a transmit-index search.
    Suboptimal,
    /// ZF successive nulling and cancelling.
    NullingCancelling,
}

/// Table costs for one `(Nt, Nr, N, M)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepCosts {
    pub n_tx: u128,
    pub n_rx: u128,
    pub n_elements: u128,
    pub two_pow_m: u128,
}

impl StepCosts {
    pub fn new(n_tx: usize, n_rx: usize, n_elements: usize, order: usize) -> Self {
        Self {
            n_tx: n_tx as u128,
            n_rx: n_rx as u128,
            n_elements: n_elements as u128,
            two_pow_m: 1u128 << order.min(127),
        }
    }

    pub fn search(&self) -> u128 {
        self.n_rx
    }

    pub fn construct(&self) -> u128 {
        self.n_rx * self.n_elements + self.n_rx * self.n_elements * self.n_tx
    }

    pub fn pseudo_inverse(&self) -> u128 {
        2 * self.n_rx * self.n_rx * self.n_tx + self.n_rx.pow(3)
    }

    pub fn ordering(&self) -> u128 {
        self.n_tx * self.n_rx
    }

    pub fn nulling(&self) -> u128 {
        self.n_rx
    }

    pub fn distance(&self) -> u128 {
        self.two_pow_m
    }

    pub fn cancelling(&self) -> u128 {
        self.n_rx
    }
}

/// Instrumented CM counts per step category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmLedger {
    pub search: u128,
    pub construct: u128,
    pub pseudo_inverse: u128,
    pub ordering: u128,
    pub nulling: u128,
    pub distance: u128,
    pub cancelling: u128,
}

impl CmLedger {
    pub fn total(&self) -> u128 {
        self.search
            + self.construct
            + self.pseudo_inverse
            + self.ordering
            + self.nulling
            + self.distance
            + self.cancelling
    }

    pub fn merge(&mut self, other: &CmLedger) {
        self.search += other.search;
        self.construct += other.construct;
        self.pseudo_inverse += other.pseudo_inverse;
        self.ordering += other.ordering;
        self.nulling += other.nulling;
        self.distance += other.distance;
        self.cancelling += other.cancelling;
    }
}

/// Closed-form cost of the joint index detector.
pub fn closed_form_c1(n_tx: usize, n_rx: usize, n_elements: usize, order: usize) -> u128 {
    let c = StepCosts::new(n_tx, n_rx, n_elements, order);
    c.n_tx * c.n_rx * per_hypothesis(&c)
}

/// Closed-form cost of the greedy index detector.
pub fn closed_form_c2(n_tx: usize, n_rx: usize, n_elements: usize, order: usize) -> u128 {
    let c = StepCosts::new(n_tx, n_rx, n_elements, order);
    c.n_rx + c.n_tx * per_hypothesis(&c)
}

/// Closed-form cost of ZF successive nulling and cancelling.
pub fn closed_form_c3(n_tx: usize, n_rx: usize, n_elements: usize, order: usize) -> u128 {
    let c = StepCosts::new(n_tx, n_rx, n_elements, order);
    let nr = c.n_rx;
    let pinv = c.pseudo_inverse();
    let ordering = c.ordering();
    pinv + ordering + (c.n_tx - 1) * (nr + c.two_pow_m + nr + pinv + ordering) + nr + c.two_pow_m
}

fn per_hypothesis(c: &StepCosts) -> u128 {
    c.construct() + c.pseudo_inverse() + c.ordering() + c.nulling() + c.distance()
}

/// `C1` re-arranged for `Nt = Nr`.
pub fn square_form_c1(n_rx: usize, n_elements: usize, order: usize) -> u128 {
    let (nr, n, t) = (n_rx as u128, n_elements as u128, 1u128 << order);
    n * (nr.pow(3) + nr.pow(4)) + 3 * nr.pow(5) + nr.pow(4) + nr.pow(3) + nr.pow(2) * t
}

/// `C2` re-arranged for `Nt = Nr`.
pub fn square_form_c2(n_rx: usize, n_elements: usize, order: usize) -> u128 {
    let (nr, n, t) = (n_rx as u128, n_elements as u128, 1u128 << order);
    nr + n * (nr.pow(2) + nr.pow(3)) + 3 * nr.pow(4) + nr.pow(3) + nr.pow(2) + nr * t
}

/// `C3` re-arranged for `Nt = Nr`, as printed alongside the other two.
pub fn square_form_c3(n_rx: usize, order: usize) -> u128 {
    let (nr, t) = (n_rx as u128, 1u128 << order);
    4 * nr.pow(3) + 3 * nr.pow(2) + nr * t + 3 * nr.pow(4) + nr + t
}

/// Closed-form CM count of one algorithm.
pub fn count_complexity(n_tx: usize, n_rx: usize, n_elements: usize, order: usize, algorithm: Algorithm) -> u128 {
    match algorithm {
        Algorithm::Optimal => closed_form_c1(n_tx, n_rx, n_elements, order),
        Algorithm::Suboptimal => closed_form_c2(n_tx, n_rx, n_elements, order),
        Algorithm::NullingCancelling => closed_form_c3(n_tx, n_rx, n_elements, order),
    }
}
