//! Monte Carlo engine: scheme configuration, seeded SNR sweeps, BER
//! estimates with confidence intervals, and comparisons against theory.
//!
//! Every trial draws from its own [`RngStream`] keyed by `(seed, snr index,
//! trial index)`. Trials run in fixed blocks that are merged in block order,
//! with the stopping rule checked after each block, so a curve does not depend
//! on how many workers computed it.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alamouti::{blind_ris_ap_frame, classical_alamouti_frame, ris_alamouti_frame, sep_theory};
use crate::channel::{path_loss_direct, path_loss_ris, ChannelModel, FadingSpec, Geometry, LinkDims, LosPattern};
use crate::error::{Error, Result};
use crate::modem::{Constellation, ModulationKind};
use crate::numerics::{trial_stream_id, RngStream};
use crate::vblast::{classical_vblast_frame, ris_im_vblast_frame, ImMode, IndexDetector, PhaseQuantization, VblastLink};

/// Trials per scheduling block.
pub const BLOCK_TRIALS: u64 = 256;

/// `N0` for a given `Es/N0` in dB with `Es = 1`; `+inf` dB gives a noiseless
/// link.
pub fn noise_density(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

/// Error counts of one simulated frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    /// All bits sent, index bits included.
    pub bits: u64,
    pub bit_errors: u64,
    pub symbols: u64,
    pub symbol_errors: u64,
    pub index_bits: u64,
    pub index_bit_errors: u64,
    /// Complex multiplications spent by the detector.
    pub cm: u128,
    /// Pseudo-inverses that needed the SVD route.
    pub fallbacks: u64,
}

/// Running sums over frames. Merging is associative and commutative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Tally {
    pub trials: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub symbols: u64,
    pub symbol_errors: u64,
    pub index_bits: u64,
    pub index_bit_errors: u64,
    pub cm: u128,
    pub fallbacks: u64,
    /// Sum over frames of squared per-frame bit errors.
    pub bit_errors_sq: u128,
    /// Sum over frames of squared per-frame symbol errors.
    pub symbol_errors_sq: u128,
}

impl Tally {
    pub fn record(&mut self, o: &FrameOutcome) {
        self.trials += 1;
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.symbols += o.symbols;
        self.symbol_errors += o.symbol_errors;
        self.index_bits += o.index_bits;
        self.index_bit_errors += o.index_bit_errors;
        self.cm += o.cm;
        self.fallbacks += o.fallbacks;
        self.bit_errors_sq += u128::from(o.bit_errors) * u128::from(o.bit_errors);
        self.symbol_errors_sq += u128::from(o.symbol_errors) * u128::from(o.symbol_errors);
    }

    pub fn merge(&mut self, other: &Tally) {
        self.trials += other.trials;
        self.bits += other.bits;
        self.bit_errors += other.bit_errors;
        self.symbols += other.symbols;
        self.symbol_errors += other.symbol_errors;
        self.index_bits += other.index_bits;
        self.index_bit_errors += other.index_bit_errors;
        self.cm += other.cm;
        self.fallbacks += other.fallbacks;
        self.bit_errors_sq += other.bit_errors_sq;
        self.symbol_errors_sq += other.symbol_errors_sq;
    }
}

/// Standard error of a ratio estimate `Σe / Σn` when the `trials` frames all
/// carry `n / trials` units, treating frames (not units) as independent.
fn clustered_se(trials: u64, units: u64, errors: u64, errors_sq: u128) -> f64 {
    if trials < 2 || units == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let per_frame = units as f64 / n;
    let p = errors as f64 / units as f64;
    let ss = errors_sq as f64 - n * (p * per_frame).powi(2);
    (ss.max(0.0) / (n * (n - 1.0))).sqrt() / per_frame
}

/// Aggregate results at one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub symbols: u64,
    pub symbol_errors: u64,
    pub index_bits: u64,
    pub index_bit_errors: u64,
    pub ber: f64,
    pub ser: f64,
    /// `1.96·√(p(1−p)/bits)`.
    pub ci95: f64,
    /// Standard error of `ber` with frames as the sampling unit.
    pub ber_se: f64,
    /// Standard error of `ser` with frames as the sampling unit.
    pub ser_se: f64,
    /// Complex multiplications per detection.
    pub cm_count: f64,
    pub fallbacks: u64,
}

impl BerPoint {
    pub fn from_tally(snr_db: f64, t: &Tally) -> Self {
        let ratio = |e: u64, n: u64| if n == 0 { 0.0 } else { e as f64 / n as f64 };
        let ber = ratio(t.bit_errors, t.bits);
        let ci95 = if t.bits == 0 {
            0.0
        } else {
            1.96 * (ber * (1.0 - ber) / t.bits as f64).sqrt()
        };
        Self {
            snr_db,
            trials: t.trials,
            bits: t.bits,
            bit_errors: t.bit_errors,
            symbols: t.symbols,
            symbol_errors: t.symbol_errors,
            index_bits: t.index_bits,
            index_bit_errors: t.index_bit_errors,
            ber,
            ser: ratio(t.symbol_errors, t.symbols),
            ci95,
            ber_se: clustered_se(t.trials, t.bits, t.bit_errors, t.bit_errors_sq),
            ser_se: clustered_se(t.trials, t.symbols, t.symbol_errors, t.symbol_errors_sq),
            cm_count: if t.trials == 0 {
                0.0
            } else {
                t.cm as f64 / t.trials as f64
            },
            fallbacks: t.fallbacks,
        }
    }

    /// Re-checks the ledger invariants of this point.
    pub fn validate(&self) -> Result<()> {
        let fail = |field: &str, why: String| Err(Error::config(field, why));
        if self.bit_errors > self.bits {
            return fail("bit_errors", format!("{} errors in {} bits", self.bit_errors, self.bits));
        }
        if self.symbol_errors > self.symbols {
            return fail("symbol_errors", format!("{} errors in {} symbols", self.symbol_errors, self.symbols));
        }
        if self.index_bit_errors > self.index_bits || self.index_bits > self.bits {
            return fail(
                "index_bit_errors",
                format!("{} errors in {} index bits", self.index_bit_errors, self.index_bits),
            );
        }
        let expect = if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        };
        if self.ber != expect {
            return fail("ber", format!("{} but counts give {expect}", self.ber));
        }
        let ci = if self.bits == 0 {
            0.0
        } else {
            1.96 * (expect * (1.0 - expect) / self.bits as f64).sqrt()
        };
        if (self.ci95 - ci).abs() > 1e-15 {
            return fail("ci95", format!("{} but counts give {ci}", self.ci95));
        }
        Ok(())
    }
}

/// One BER curve over an SNR grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn snr_db(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.snr_db).collect()
    }

    pub fn ber(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ber).collect()
    }

    pub fn total_fallbacks(&self) -> u64 {
        self.points.iter().map(|p| p.fallbacks).sum()
    }

    pub fn validate(&self) -> Result<()> {
        self.points.iter().try_for_each(BerPoint::validate)
    }

    /// Hash of every count and estimate, for reproducibility checks.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for p in &self.points {
            p.snr_db.to_bits().hash(&mut h);
            (p.trials, p.bits, p.bit_errors, p.symbols, p.symbol_errors).hash(&mut h);
            (p.index_bits, p.index_bit_errors, p.fallbacks).hash(&mut h);
            for x in [p.ber, p.ser, p.ci95, p.ber_se, p.ser_se, p.cm_count] {
                x.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }
}

/// How the total symbol energy `Es` is shared between transmit antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerSplit {
    /// Each antenna sends `Es / Nt`.
    #[default]
    Split,
    /// Each antenna sends the full `Es`.
    Full,
}

impl PowerSplit {
    pub fn per_antenna_energy(self, es: f64, n_tx: usize) -> f64 {
        match self {
            PowerSplit::Split => es / n_tx as f64,
            PowerSplit::Full => es,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    ClassicalAlamouti,
    RisAlamouti,
    RisApBlind,
    ClassicalVblast,
    RisImVblast,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::ClassicalAlamouti,
        SchemeKind::RisAlamouti,
        SchemeKind::RisApBlind,
        SchemeKind::ClassicalVblast,
        SchemeKind::RisImVblast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::ClassicalAlamouti => "classical_alamouti",
            SchemeKind::RisAlamouti => "ris_alamouti",
            SchemeKind::RisApBlind => "ris_ap_blind",
            SchemeKind::ClassicalVblast => "classical_vblast",
            SchemeKind::RisImVblast => "ris_im_vblast",
        }
    }

    /// `(Nt, Nr)` used when a configuration leaves them out.
    pub fn default_antennas(self) -> (usize, usize) {
        match self {
            SchemeKind::ClassicalAlamouti => (2, 1),
            SchemeKind::RisAlamouti | SchemeKind::RisApBlind => (1, 1),
            SchemeKind::ClassicalVblast | SchemeKind::RisImVblast => (2, 2),
        }
    }

    pub fn default_geometry(self) -> Geometry {
        match self {
            SchemeKind::ClassicalAlamouti | SchemeKind::RisAlamouti | SchemeKind::RisApBlind => {
                Geometry::alamouti_indoor()
            }
            SchemeKind::ClassicalVblast | SchemeKind::RisImVblast => Geometry::vblast_indoor(),
        }
    }

    fn is_vblast(self) -> bool {
        matches!(self, SchemeKind::ClassicalVblast | SchemeKind::RisImVblast)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config("scheme", format!("unknown scheme `{s}`")))
    }
}

/// Per-point stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_bit_errors: 200,
            max_trials: 10_000_000,
        }
    }
}

/// Complete description of one simulated system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub n_tx: usize,
    pub n_rx: usize,
    /// RIS elements; ignored by the classical schemes.
    pub n_elements: usize,
    pub modulation: ModulationKind,
    pub order: usize,
    /// RIS operating mode, `ris_im_vblast` only.
    pub mode: Option<ImMode>,
    #[serde(default)]
    pub detector: IndexDetector,
    /// RIS phase resolution in bits; `None` is continuous.
    pub quant_bits: Option<u32>,
    pub fading_h1: FadingSpec,
    pub fading_g1: FadingSpec,
    #[serde(default)]
    pub los: LosPattern,
    pub geometry: Geometry,
    #[serde(default)]
    pub power: PowerSplit,
    pub snr_grid_db: Vec<f64>,
    #[serde(default)]
    pub stop: StopRule,
    pub seed: u64,
}

impl SchemeConfig {
    /// A configuration with the scheme's default antennas and geometry,
    /// BPSK, Rayleigh hops and an empty SNR grid.
    pub fn new(scheme: SchemeKind) -> Self {
        let (n_tx, n_rx) = scheme.default_antennas();
        Self {
            scheme,
            n_tx,
            n_rx,
            n_elements: 0,
            modulation: ModulationKind::Psk,
            order: 2,
            mode: (scheme == SchemeKind::RisImVblast).then_some(ImMode::FullIm),
            detector: IndexDetector::Optimal,
            quant_bits: None,
            fading_h1: FadingSpec::Rayleigh,
            fading_g1: FadingSpec::Rayleigh,
            los: LosPattern::AllOnes,
            geometry: scheme.default_geometry(),
            power: PowerSplit::Split,
            snr_grid_db: Vec::new(),
            stop: StopRule::default(),
            seed: 0,
        }
    }

    pub fn constellation(&self) -> Result<Constellation> {
        Constellation::new(self.modulation, self.order)
    }

    pub fn quantization(&self) -> PhaseQuantization {
        PhaseQuantization::from_bits(self.quant_bits)
    }

    /// Rejects anything the sweep could not run.
    pub fn validate(&self) -> Result<()> {
        let c = self.constellation()?;
        self.geometry.validate()?;
        self.fading_h1.validate()?;
        self.fading_g1.validate()?;
        if self.n_tx == 0 || self.n_rx == 0 {
            return Err(Error::config("n_tx", "antenna counts must be at least 1"));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::config("snr_grid_db", "empty SNR grid"));
        }
        if let Some(x) = self.snr_grid_db.iter().find(|x| x.is_nan() || **x == f64::NEG_INFINITY) {
            return Err(Error::config("snr_grid_db", format!("invalid SNR {x}")));
        }
        if self.stop.min_bit_errors == 0 || self.stop.max_trials == 0 {
            return Err(Error::config("stop", "min_bit_errors and max_trials must be positive"));
        }
        if let Some(b) = self.quant_bits {
            if !(1..=16).contains(&b) {
                return Err(Error::config("quant_bits", format!("expected 1..=16, got {b}")));
            }
        }
        let rayleigh = |field: &str, spec: &FadingSpec| match spec {
            FadingSpec::Rayleigh => Ok(()),
            _ => Err(Error::config(field, format!("{} models Rayleigh hops only", self.scheme))),
        };
        let antennas = |nt: usize, nr: usize| {
            if (self.n_tx, self.n_rx) == (nt, nr) {
                Ok(())
            } else {
                Err(Error::config(
                    "n_tx",
                    format!("{} needs Nt = {nt}, Nr = {nr}, got {}x{}", self.scheme, self.n_tx, self.n_rx),
                ))
            }
        };
        let vblast = matches!(self.scheme, SchemeKind::ClassicalVblast | SchemeKind::RisImVblast);
        if vblast && self.n_rx < self.n_tx {
            return Err(Error::config(
                "n_rx",
                format!("zero-forcing needs Nr >= Nt, got {}x{}", self.n_tx, self.n_rx),
            ));
        }
        match self.scheme {
            SchemeKind::ClassicalAlamouti => {
                antennas(2, 1)?;
                rayleigh("fading_h1", &self.fading_h1)?;
            }
            SchemeKind::RisAlamouti | SchemeKind::RisApBlind => {
                antennas(1, 1)?;
                if c.kind() != ModulationKind::Psk {
                    return Err(Error::config("modulation", format!("{} carries PSK only", self.scheme)));
                }
                if self.n_elements == 0 || (self.scheme == SchemeKind::RisAlamouti && self.n_elements % 2 != 0) {
                    return Err(Error::config(
                        "n_elements",
                        format!("{} needs a positive, even N, got {}", self.scheme, self.n_elements),
                    ));
                }
                rayleigh("fading_g1", &self.fading_g1)?;
            }
            SchemeKind::ClassicalVblast => {}
            SchemeKind::RisImVblast => {
                if self.n_elements == 0 {
                    return Err(Error::config("n_elements", "RIS needs at least one element"));
                }
                let mode = self.mode.ok_or_else(|| Error::config("mode", "ris_im_vblast needs a mode"))?;
                mode.index_bits(self.n_tx, self.n_rx)?;
            }
        }
        if self.mode.is_some() && self.scheme != SchemeKind::RisImVblast {
            return Err(Error::config("mode", format!("{} has no RIS mode", self.scheme)));
        }
        Ok(())
    }

    /// Channel uses per simulated frame.
    pub fn channel_uses_per_frame(&self) -> u64 {
        match self.scheme {
            SchemeKind::ClassicalAlamouti | SchemeKind::RisAlamouti => 2,
            _ => 1,
        }
    }

    /// Index bits per channel use.
    pub fn index_bits(&self) -> Result<usize> {
        match (self.scheme, self.mode) {
            (SchemeKind::RisImVblast, Some(mode)) => mode.index_bits(self.n_tx, self.n_rx),
            _ => Ok(0),
        }
    }

    /// Spectral efficiency in bits per channel use.
    pub fn bpcu(&self) -> Result<f64> {
        let m = self.constellation()?.bits_per_symbol();
        let payload = if self.scheme.is_vblast() { self.n_tx * m } else { m };
        Ok((payload + self.index_bits()?) as f64)
    }

    /// Bits carried by one frame.
    pub fn bits_per_frame(&self) -> Result<u64> {
        Ok(self.bpcu()? as u64 * self.channel_uses_per_frame())
    }
}

/// A validated configuration turned into a frame generator.
enum Simulator {
    ClassicalAlamouti { c: Constellation, pl: f64, power: PowerSplit },
    RisAlamouti { c: Constellation, n: usize, pl: f64 },
    RisApBlind { c: Constellation, n: usize, pl: f64 },
    ClassicalVblast(VblastLink),
    RisImVblast(VblastLink),
}

impl Simulator {
    fn new(cfg: &SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let c = cfg.constellation()?;
        let g = &cfg.geometry;
        let vblast_link = || {
            let model = ChannelModel::new(
                LinkDims::new(cfg.n_elements.max(1), cfg.n_tx, cfg.n_rx),
                cfg.fading_h1,
                cfg.fading_g1,
                cfg.los,
                g,
            )?;
            VblastLink::new(
                c.clone(),
                model,
                cfg.mode.unwrap_or(ImMode::FullIm),
                cfg.detector,
                cfg.quantization(),
                cfg.power.per_antenna_energy(1.0, cfg.n_tx),
            )
        };
        Ok(match cfg.scheme {
            SchemeKind::ClassicalAlamouti => Simulator::ClassicalAlamouti {
                pl: path_loss_direct(g)?,
                power: cfg.power,
                c,
            },
            SchemeKind::RisAlamouti => Simulator::RisAlamouti {
                n: cfg.n_elements,
                pl: path_loss_ris(g)?,
                c,
            },
            SchemeKind::RisApBlind => Simulator::RisApBlind {
                n: cfg.n_elements,
                pl: path_loss_ris(g)?,
                c,
            },
            SchemeKind::ClassicalVblast => Simulator::ClassicalVblast(vblast_link()?),
            SchemeKind::RisImVblast => Simulator::RisImVblast(vblast_link()?),
        })
    }

    fn frame(&self, n0: f64, rng: &mut RngStream) -> FrameOutcome {
        match self {
            Simulator::ClassicalAlamouti { c, pl, power } => classical_alamouti_frame(c, *pl, *power, n0, rng),
            Simulator::RisAlamouti { c, n, pl } => ris_alamouti_frame(c, *n, *pl, n0, rng),
            Simulator::RisApBlind { c, n, pl } => blind_ris_ap_frame(c, *n, *pl, n0, rng),
            Simulator::ClassicalVblast(link) => classical_vblast_frame(link, n0, rng),
            Simulator::RisImVblast(link) => ris_im_vblast_frame(link, n0, rng),
        }
    }
}

fn run_block(sim: &Simulator, seed: u64, snr_index: usize, n0: f64, first: u64, count: u64) -> Tally {
    let mut tally = Tally::default();
    for trial in first..first + count {
        let mut rng = RngStream::new(seed, trial_stream_id(snr_index, trial));
        tally.record(&sim.frame(n0, &mut rng));
    }
    tally
}

fn run_point(sim: &Simulator, cfg: &SchemeConfig, snr_index: usize, workers: usize) -> Tally {
    let n0 = noise_density(cfg.snr_grid_db[snr_index]);
    let StopRule {
        min_bit_errors,
        max_trials,
    } = cfg.stop;
    let n_blocks = max_trials.div_ceil(BLOCK_TRIALS);
    let mut total = Tally::default();
    let mut next = 0u64;
    while next < n_blocks {
        // a round computes `workers` blocks; ones past the stopping point
        // are discarded, so the result does not depend on the round size
        let round: Vec<u64> = (next..n_blocks.min(next + workers as u64)).collect();
        let tallies: Vec<Tally> = round
            .par_iter()
            .map(|&b| {
                let first = b * BLOCK_TRIALS;
                let count = BLOCK_TRIALS.min(max_trials - first);
                run_block(sim, cfg.seed, snr_index, n0, first, count)
            })
            .collect();
        for t in &tallies {
            total.merge(t);
            if total.bit_errors >= min_bit_errors {
                return total;
            }
        }
        next += round.len() as u64;
    }
    total
}

/// Runs a sweep on the global rayon pool.
pub fn run_sweep(cfg: &SchemeConfig) -> Result<BerCurve> {
    let sim = Simulator::new(cfg)?;
    Ok(sweep(&sim, cfg, rayon::current_num_threads()))
}

/// Runs a sweep on a dedicated pool of `workers` threads. The result is
/// bit-identical for every worker count.
pub fn run_sweep_on(cfg: &SchemeConfig, workers: usize) -> Result<BerCurve> {
    let sim = Simulator::new(cfg)?;
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    Ok(pool.install(|| sweep(&sim, cfg, workers)))
}

fn sweep(sim: &Simulator, cfg: &SchemeConfig, workers: usize) -> BerCurve {
    let points = (0..cfg.snr_grid_db.len())
        .map(|i| {
            let tally = run_point(sim, cfg, i, workers);
            if tally.fallbacks > 0 {
                log::info!(
                    "{} at {} dB: {} pseudo-inverse fallbacks",
                    cfg.scheme,
                    cfg.snr_grid_db[i],
                    tally.fallbacks
                );
            }
            BerPoint::from_tally(cfg.snr_grid_db[i], &tally)
        })
        .collect();
    BerCurve { points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryStatus {
    Agree,
    /// Off by more than three standard errors.
    Flagged,
    /// Too few errors to judge.
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub snr_db: f64,
    pub simulated: f64,
    pub theory: f64,
    pub std_error: f64,
    pub symbol_errors: u64,
    pub status: TheoryStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub rows: Vec<TheoryRow>,
}

impl TheoryReport {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.status == TheoryStatus::Flagged).count()
    }

    pub fn judged(&self) -> usize {
        self.rows.iter().filter(|r| r.status != TheoryStatus::Insufficient).count()
    }
}

/// Compares simulated SER of an RIS-Alamouti curve against the closed-form
/// SEP. Points with fewer than `min_errors` symbol errors (at least one) are
/// marked insufficient.
///
/// The standard error is the larger of the binomial one at the theoretical
/// SEP and the frame-clustered empirical one, since both symbols of a frame
/// share a channel draw.
pub fn compare_theory(curve: &BerCurve, cfg: &SchemeConfig, min_errors: u64) -> Result<TheoryReport> {
    if cfg.scheme != SchemeKind::RisAlamouti {
        return Err(Error::config("scheme", "theory exists for ris_alamouti only"));
    }
    if cfg.modulation != ModulationKind::Psk {
        return Err(Error::config("modulation", "theory covers PSK only"));
    }
    let pl = path_loss_ris(&cfg.geometry)?;
    let rows = curve
        .points
        .iter()
        .map(|p| {
            let gamma = 1.0 / noise_density(p.snr_db);
            let theory = sep_theory(cfg.order, cfg.n_elements, pl, gamma)?;
            let binomial = if p.symbols == 0 {
                0.0
            } else {
                (theory * (1.0 - theory) / p.symbols as f64).sqrt()
            };
            let std_error = binomial.max(p.ser_se);
            let status = if p.symbol_errors < min_errors.max(1) {
                TheoryStatus::Insufficient
            } else if (p.ser - theory).abs() > 3.0 * std_error {
                TheoryStatus::Flagged
            } else {
                TheoryStatus::Agree
            };
            Ok(TheoryRow {
                snr_db: p.snr_db,
                simulated: p.ser,
                theory,
                std_error,
                symbol_errors: p.symbol_errors,
                status,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TheoryReport { rows })
}

/// SNR in dB at which `(snr, ber)` samples first fall through `target`,
/// interpolating `log10 BER` linearly in dB.
pub fn snr_at_ber(snr_db: &[f64], ber: &[f64], target: f64) -> Option<f64> {
    snr_db.windows(2).zip(ber.windows(2)).find_map(|(s, b)| {
        let (b0, b1) = (b[0], b[1]);
        if b0 >= target && b1 < target && b0 > 0.0 && b1 > 0.0 && s[1].is_finite() {
            let t = (b0.log10() - target.log10()) / (b0.log10() - b1.log10());
            Some(s[0] + t * (s[1] - s[0]))
        } else {
            None
        }
    })
}

fn crossing(curve: &BerCurve, name: &str, target: f64) -> Result<f64> {
    snr_at_ber(&curve.snr_db(), &curve.ber(), target).ok_or_else(|| Error::NotCrossed {
        curve: name.to_string(),
        target,
    })
}

/// SNR advantage of `candidate` over `reference` at `target` BER, in dB
/// (positive when `candidate` needs less SNR).
pub fn gain_at_ber(reference: &BerCurve, candidate: &BerCurve, target: f64) -> Result<f64> {
    Ok(crossing(reference, "reference", target)? - crossing(candidate, "candidate", target)?)
}

/// Least-squares slope of `log10 BER` against `log10 SNR` over the last
/// `n_points` finite points with nonzero BER.
pub fn high_snr_slope(curve: &BerCurve, n_points: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.ber > 0.0 && p.snr_db.is_finite())
        .map(|p| (p.snr_db / 10.0, p.ber.log10()))
        .collect();
    if pts.len() < 2 || n_points < 2 {
        return None;
    }
    let pts = &pts[pts.len().saturating_sub(n_points)..];
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Indices `i` where BER rises from point `i` to `i + 1` by more than the
/// combined CI, among points whose CI half-width is below a third of the BER.
pub fn monotonicity_violations(curve: &BerCurve) -> Vec<usize> {
    let tight = |p: &BerPoint| p.bit_errors > 0 && p.ci95 < p.ber / 3.0;
    curve
        .points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| tight(&w[0]) && tight(&w[1]))
        .filter(|(_, w)| w[1].ber - w[0].ber > w[0].ci95.hypot(w[1].ci95))
        .map(|(i, _)| i)
        .collect()
}
