//! RIS-assisted, index-modulation VBLAST and its classical baseline.
//!
//! The RIS cancels the cascaded S-RIS-D channel phases of one transmit /
//! receive antenna pair. In full-IM and partial-IM modes that pair is chosen
//! by extra information bits; in enhancing mode it is fixed. The receiver
//! recovers the pair with a nulling-based index detector and then runs ZF
//! successive nulling and cancelling on the implied equivalent channel.

mod complexity;
mod detect;
mod link;
mod sic;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, LinkDims};
use crate::error::{Error, Result};
use crate::numerics::{Complex, ComplexMatrix};

pub use complexity::{
    closed_form_c1, closed_form_c2, closed_form_c3, count_complexity, square_form_c1, square_form_c2,
    square_form_c3, Algorithm, CmLedger, StepCosts,
};
pub use detect::{detect_indices_optimal, detect_indices_suboptimal, IndexDecision, IndexDetector};
pub use link::{classical_vblast_frame, ris_im_vblast_frame, VblastLink};
pub use sic::{zf_nulling_cancelling, SicOutput};

/// Zero-based transmit / receive antenna pair (`tx` = l*, `rx` = m*).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaPair {
    pub tx: usize,
    pub rx: usize,
}

impl AntennaPair {
    pub fn new(tx: usize, rx: usize) -> Self {
        Self { tx, rx }
    }
}

impl fmt::Display for AntennaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}-R{}", self.tx + 1, self.rx + 1)
    }
}

/// RIS operating mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ImMode {
    /// Any of the `Nt·Nr` pairs, `log2(Nt·Nr)` index bits.
    FullIm,
    /// Pairs `(l, l)`, `log2(Nt)` index bits.
    PartialIm,
    /// Always the same pair, no index bits.
    Enhancing { pair: AntennaPair },
}

impl ImMode {
    /// Number of index bits carried per channel use.
    pub fn index_bits(&self, n_tx: usize, n_rx: usize) -> Result<usize> {
        match *self {
            ImMode::FullIm => {
                let n = n_tx * n_rx;
                if !n.is_power_of_two() {
                    return Err(Error::config("mode", format!("full IM needs Nt·Nr a power of two, got {n}")));
                }
                Ok(n.trailing_zeros() as usize)
            }
            ImMode::PartialIm => {
                if !n_tx.is_power_of_two() {
                    return Err(Error::config("mode", format!("partial IM needs Nt a power of two, got {n_tx}")));
                }
                if n_rx < n_tx {
                    return Err(Error::config("mode", "partial IM needs Nr >= Nt"));
                }
                Ok(n_tx.trailing_zeros() as usize)
            }
            ImMode::Enhancing { pair } => {
                if pair.tx >= n_tx || pair.rx >= n_rx {
                    return Err(Error::config("pair", format!("{pair} is outside {n_tx}x{n_rx}")));
                }
                Ok(0)
            }
        }
    }

    /// Pairs the RIS may target, in detector loop order (`l` outer, `m`
    /// inner).
    pub fn hypotheses(&self, n_tx: usize, n_rx: usize) -> Vec<AntennaPair> {
        match *self {
            ImMode::FullIm => (0..n_tx)
                .flat_map(|l| (0..n_rx).map(move |m| AntennaPair::new(l, m)))
                .collect(),
            ImMode::PartialIm => (0..n_tx).map(|l| AntennaPair::new(l, l)).collect(),
            ImMode::Enhancing { pair } => vec![pair],
        }
    }
}

/// Index bits and the pair they select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImSelection {
    pub pair: AntennaPair,
    pub im_bits: Vec<u8>,
}

/// Natural-binary decode of index bits (MSB first) into a pair.
pub fn select_pair(im_bits: &[u8], mode: ImMode, n_tx: usize, n_rx: usize) -> Result<ImSelection> {
    let expected = mode.index_bits(n_tx, n_rx)?;
    if im_bits.len() != expected {
        return Err(Error::BitLength {
            len: im_bits.len(),
            group: expected,
        });
    }
    let index = im_bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
    let pair = match mode {
        ImMode::FullIm => AntennaPair::new(index / n_rx, index % n_rx),
        ImMode::PartialIm => AntennaPair::new(index, index),
        ImMode::Enhancing { pair } => pair,
    };
    Ok(ImSelection {
        pair,
        im_bits: im_bits.to_vec(),
    })
}

/// Inverse of [`select_pair`]: the natural-binary index of a pair.
pub fn pair_index(pair: AntennaPair, mode: ImMode, n_rx: usize) -> usize {
    match mode {
        ImMode::FullIm => pair.tx * n_rx + pair.rx,
        ImMode::PartialIm => pair.tx,
        ImMode::Enhancing { .. } => 0,
    }
}

/// Phase resolution of the RIS elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseQuantization {
    #[default]
    Continuous,
    /// `Z = 2^b` uniformly spaced phases `{0, 2π/Z, …}`.
    Bits(u32),
}

impl PhaseQuantization {
    pub fn from_bits(bits: Option<u32>) -> Self {
        bits.map_or(PhaseQuantization::Continuous, PhaseQuantization::Bits)
    }

    pub fn levels(&self) -> Option<u32> {
        match *self {
            PhaseQuantization::Continuous => None,
            PhaseQuantization::Bits(b) => Some(1 << b),
        }
    }
}

/// Reflection phases of all RIS elements.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseConfig {
    quantization: PhaseQuantization,
    /// `e^{jΦ_i}`.
    phasors: Vec<Complex>,
    /// Grid index of each phase when quantized.
    levels: Option<Vec<u32>>,
}

impl RisPhaseConfig {
    /// Arbitrary continuous phases.
    pub fn from_phases(phases: &[f64]) -> Self {
        Self {
            quantization: PhaseQuantization::Continuous,
            phasors: phases.iter().map(|&p| Complex::from_polar(1.0, p)).collect(),
            levels: None,
        }
    }

    pub fn n_elements(&self) -> usize {
        self.phasors.len()
    }

    pub fn quantization(&self) -> PhaseQuantization {
        self.quantization
    }

    pub fn phasors(&self) -> &[Complex] {
        &self.phasors
    }

    pub fn levels(&self) -> Option<&[u32]> {
        self.levels.as_deref()
    }

    /// Phases in `[0, 2π)`.
    pub fn phases(&self) -> Vec<f64> {
        match (&self.levels, self.quantization.levels()) {
            (Some(levels), Some(z)) => levels.iter().map(|&k| 2.0 * PI * k as f64 / z as f64).collect(),
            _ => self.phasors.iter().map(|p| p.arg().rem_euclid(2.0 * PI)).collect(),
        }
    }
}

/// `conj(z) / |z|`, or `1` for `z = 0`.
#[inline]
fn unit_conj(z: Complex) -> Complex {
    let n2 = z.norm_sqr();
    if n2 > 0.0 {
        z.conj() * n2.sqrt().recip()
    } else {
        Complex::new(1.0, 0.0)
    }
}

/// Rounds a phase in `[0, 2π)` to the nearest level of a `z`-point grid; a
/// phase exactly midway goes to the lower level.
pub fn quantize_phase(phase: f64, z: u32) -> u32 {
    let step = 2.0 * PI / z as f64;
    let k = (phase.rem_euclid(2.0 * PI) / step - 0.5).ceil();
    (k as i64).rem_euclid(z as i64) as u32
}

/// Phases `Φ_i = -arg h1[i, l*] - arg g1[i, m*]` that make every cascaded
/// coefficient `h1[i,l*] e^{jΦ_i} g1[i,m*]` real and non-negative, optionally
/// rounded to the `2^b` grid.
pub fn ris_phases_for_pair(
    h1: &ComplexMatrix,
    g1: &ComplexMatrix,
    pair: AntennaPair,
    quantization: PhaseQuantization,
) -> RisPhaseConfig {
    let n = h1.rows();
    debug_assert_eq!(n, g1.rows());
    match quantization.levels() {
        None => RisPhaseConfig {
            quantization,
            phasors: (0..n)
                .map(|i| unit_conj(h1[(i, pair.tx)] * g1[(i, pair.rx)]))
                .collect(),
            levels: None,
        },
        Some(z) => {
            let table: Vec<Complex> = (0..z)
                .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / z as f64))
                .collect();
            let levels: Vec<u32> = (0..n)
                .map(|i| {
                    let phase = -h1[(i, pair.tx)].arg() - g1[(i, pair.rx)].arg();
                    quantize_phase(phase, z)
                })
                .collect();
            RisPhaseConfig {
                quantization,
                phasors: levels.iter().map(|&k| table[k as usize]).collect(),
                levels: Some(levels),
            }
        }
    }
}

/// `V = √pl1 · G1ᵀ Θ H1 + √pl2 · H2`, `Nr x Nt`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannel {
    pub v: ComplexMatrix,
}

/// Builds the equivalent channel for one RIS phase configuration.
pub fn equivalent_channel(realization: &ChannelRealization, phases: &RisPhaseConfig) -> EquivalentChannel {
    let LinkDims {
        n_elements,
        n_tx,
        n_rx,
    } = realization.dims();
    assert_eq!(phases.n_elements(), n_elements, "phase vector length differs from N");
    let a1 = realization.pl1.sqrt();
    let a2 = realization.pl2.sqrt();
    let mut v = realization.h2.scale(Complex::new(a2, 0.0));
    if a1 > 0.0 {
        let h1 = &realization.h1;
        let g1 = &realization.g1;
        let phasors = phases.phasors();
        // one pass over the elements: acc[m][l] += g1[i,m]·e^{jΦ_i}·h1[i,l]
        let mut acc = vec![Complex::new(0.0, 0.0); n_rx * n_tx];
        for (i, &t) in phasors.iter().enumerate() {
            let h_row = h1.row(i);
            for (m, &g) in g1.row(i).iter().enumerate() {
                let gt = g * t;
                for (slot, &h) in acc[m * n_tx..(m + 1) * n_tx].iter_mut().zip(h_row) {
                    *slot += gt * h;
                }
            }
        }
        for m in 0..n_rx {
            for l in 0..n_tx {
                v[(m, l)] += a1 * acc[m * n_tx + l];
            }
        }
    }
    EquivalentChannel { v }
}
