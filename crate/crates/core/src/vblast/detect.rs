use serde::{Deserialize, Serialize};

use super::complexity::{CmLedger, StepCosts};
use super::sic::{deflated_pseudo_inverse, null, weakest_noise_row};
use super::{equivalent_channel, ris_phases_for_pair, AntennaPair, PhaseQuantization};
use crate::channel::ChannelRealization;
use crate::modem::{min_distance, Constellation};
use crate::numerics::{Complex, ComplexMatrix};

/// Which index detector the receiver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDetector {
    /// Exhaustive search over every admissible pair.
    #[default]
    Optimal,
    /// Strongest receive antenna first, then a search over transmit indices.
    Suboptimal,
}

/// Detected antenna pair with the equivalent channel it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDecision {
    pub pair: AntennaPair,
    pub v_hat: ComplexMatrix,
    /// Slicer distance of the winning hypothesis.
    pub metric: f64,
    pub fallbacks: u32,
}

struct Scored {
    v_hat: ComplexMatrix,
    metric: f64,
    fallback: bool,
}

/// Builds `V̂` for one hypothesis, nulls its strongest stream and scores the
/// slicer distance.
fn score_hypothesis(
    realization: &ChannelRealization,
    r: &[Complex],
    c: &Constellation,
    pair: AntennaPair,
    quantization: PhaseQuantization,
    costs: &StepCosts,
    ledger: &mut Option<&mut CmLedger>,
) -> Scored {
    let phases = ris_phases_for_pair(&realization.h1, &realization.g1, pair, quantization);
    let v_hat = equivalent_channel(realization, &phases).v;
    let active = vec![true; v_hat.cols()];
    let (w, fallback) = deflated_pseudo_inverse(&v_hat, &active);
    let k = weakest_noise_row(&w, &active);
    let y = null(&w, k, r);
    let metric = min_distance(y, c);
    if let Some(l) = ledger.as_deref_mut() {
        l.construct += costs.construct();
        l.pseudo_inverse += costs.pseudo_inverse();
        l.ordering += costs.ordering();
        l.nulling += costs.nulling();
        l.distance += costs.distance();
    }
    Scored {
        v_hat,
        metric,
        fallback,
    }
}

fn best_of(
    realization: &ChannelRealization,
    r: &[Complex],
    c: &Constellation,
    candidates: &[AntennaPair],
    quantization: PhaseQuantization,
    mut ledger: Option<&mut CmLedger>,
    fallbacks: u32,
) -> IndexDecision {
    assert!(!candidates.is_empty(), "no index hypotheses");
    let d = realization.dims();
    let costs = StepCosts::new(d.n_tx, d.n_rx, d.n_elements, c.order());
    let mut best: Option<(AntennaPair, Scored)> = None;
    let mut fallbacks = fallbacks;
    for &pair in candidates {
        let s = score_hypothesis(realization, r, c, pair, quantization, &costs, &mut ledger);
        fallbacks += u32::from(s.fallback);
        // strict comparison keeps the first hypothesis on ties
        if best.as_ref().is_none_or(|(_, b)| s.metric < b.metric) {
            best = Some((pair, s));
        }
    }
    let (pair, s) = best.unwrap();
    IndexDecision {
        pair,
        v_hat: s.v_hat,
        metric: s.metric,
        fallbacks,
    }
}

/// Joint search over `hypotheses` (all `Nt·Nr` pairs in full-IM mode).
///
/// Each hypothesis configures `Θ` for its pair, builds `V̂`, nulls the stream
/// whose nulling row has the smallest norm, and is scored by that output's
/// squared distance to the nearest constellation point. The smallest score
/// wins.
pub fn detect_indices_optimal(
    realization: &ChannelRealization,
    r: &[Complex],
    c: &Constellation,
    hypotheses: &[AntennaPair],
    quantization: PhaseQuantization,
    ledger: Option<&mut CmLedger>,
) -> IndexDecision {
    best_of(realization, r, c, hypotheses, quantization, ledger, 0)
}

/// Greedy receive index `m̂ = argmax |r_m|²`, then the transmit-index search
/// restricted to pairs with `rx = m̂`.
pub fn detect_indices_suboptimal(
    realization: &ChannelRealization,
    r: &[Complex],
    c: &Constellation,
    hypotheses: &[AntennaPair],
    quantization: PhaseQuantization,
    mut ledger: Option<&mut CmLedger>,
) -> IndexDecision {
    let mut m_hat = 0;
    let mut best_energy = f64::NEG_INFINITY;
    for (m, z) in r.iter().enumerate() {
        let e = z.norm_sqr();
        if e > best_energy {
            best_energy = e;
            m_hat = m;
        }
    }
    if let Some(l) = ledger.as_deref_mut() {
        l.search += r.len() as u128;
    }
    let restricted: Vec<AntennaPair> = hypotheses.iter().copied().filter(|p| p.rx == m_hat).collect();
    let candidates = if restricted.is_empty() {
        hypotheses
    } else {
        &restricted
    };
    best_of(realization, r, c, candidates, quantization, ledger, 0)
}
