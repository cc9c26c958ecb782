//! Quasi-static fading realizations and the indoor path-loss models.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Complex, ComplexMatrix, RngStream};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space loss at one meter for the direct link, in dB (1.8 GHz).
pub const DIRECT_LOSS_AT_1M_DB: f64 = 42.7;
/// Penetration loss of the two walls on the direct link, in dB.
pub const WALL_LOSS_DB: f64 = 13.8;

/// Link distances and carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Source to RIS distance (m).
    pub r_s: f64,
    /// RIS to destination distance (m).
    pub r_d: f64,
    /// Source to destination distance (m).
    pub direct: f64,
    pub frequency_hz: f64,
}

impl Geometry {
    pub fn new(r_s: f64, r_d: f64, direct: f64, frequency_hz: f64) -> Result<Self> {
        let g = Self {
            r_s,
            r_d,
            direct,
            frequency_hz,
        };
        g.validate()?;
        Ok(g)
    }

    /// Indoor layout used for the Alamouti-type links.
    pub fn alamouti_indoor() -> Self {
        Self {
            r_s: 1.0,
            r_d: 9.0,
            direct: 9.85,
            frequency_hz: 1.8e9,
        }
    }

    /// Indoor layout used for the VBLAST-type links.
    pub fn vblast_indoor() -> Self {
        Self {
            r_s: 3.0,
            r_d: 3.0,
            direct: 5.91,
            frequency_hz: 1.8e9,
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r_s", self.r_s),
            ("r_d", self.r_d),
            ("direct", self.direct),
            ("frequency_hz", self.frequency_hz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Small-scale fading law of one hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingSpec {
    Rayleigh,
    /// Rician with LOS-to-scatter power ratio `K`. `+inf` gives pure LOS.
    Rician { k_factor_db: f64 },
}

impl FadingSpec {
    /// Maps a K-factor in dB to a spec; `-inf` is Rayleigh.
    pub fn from_k_db(k_factor_db: f64) -> Result<Self> {
        let spec = if k_factor_db == f64::NEG_INFINITY {
            FadingSpec::Rayleigh
        } else {
            FadingSpec::Rician { k_factor_db }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingSpec::Rayleigh => Ok(()),
            FadingSpec::Rician { k_factor_db } if k_factor_db.is_nan() || k_factor_db == f64::NEG_INFINITY => {
                Err(Error::InvalidFading(format!(
                    "Rician K-factor must be a number above -inf dB, got {k_factor_db}"
                )))
            }
            FadingSpec::Rician { .. } => Ok(()),
        }
    }

    /// `(LOS amplitude, scatter variance)` so that `E|h|^2 = 1`.
    pub fn split(&self) -> (f64, f64) {
        match *self {
            FadingSpec::Rayleigh => (0.0, 1.0),
            FadingSpec::Rician { k_factor_db } => {
                if k_factor_db == f64::INFINITY {
                    return (1.0, 0.0);
                }
                let k = 10f64.powf(k_factor_db / 10.0);
                ((k / (k + 1.0)).sqrt(), 1.0 / (k + 1.0))
            }
        }
    }
}

/// Deterministic line-of-sight structure of a Rician hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LosPattern {
    /// Zero phase on every entry (rank-one all-ones LOS matrix).
    #[default]
    AllOnes,
    /// Per-entry uniform phases, drawn once from `seed` and then held fixed.
    RandomFixed { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDims {
    pub n_elements: usize,
    pub n_tx: usize,
    pub n_rx: usize,
}

impl LinkDims {
    pub fn new(n_elements: usize, n_tx: usize, n_rx: usize) -> Self {
        Self {
            n_elements,
            n_tx,
            n_rx,
        }
    }
}

/// One quasi-static draw of every hop plus linear path gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Source to RIS, `N x Nt`.
    pub h1: ComplexMatrix,
    /// RIS to destination, `N x Nr`.
    pub g1: ComplexMatrix,
    /// Source to destination, `Nr x Nt`.
    pub h2: ComplexMatrix,
    /// Linear power gain of the S-RIS-D path.
    pub pl1: f64,
    /// Linear power gain of the S-D path.
    pub pl2: f64,
}

impl ChannelRealization {
    pub fn dims(&self) -> LinkDims {
        LinkDims::new(self.h1.rows(), self.h1.cols(), self.g1.cols())
    }

    /// Same realization with both path gains multiplied by `factor`. Used to
    /// fold the per-antenna transmit energy into the channel.
    pub fn scaled_power(&self, factor: f64) -> Self {
        Self {
            pl1: self.pl1 * factor,
            pl2: self.pl2 * factor,
            ..self.clone()
        }
    }
}

/// Direct-link path loss in dB.
pub fn direct_loss_db(distance: f64) -> f64 {
    DIRECT_LOSS_AT_1M_DB + 20.0 * distance.log10() + WALL_LOSS_DB
}

/// Linear power gain of the direct S-D link (1.8 GHz indoor model with two
/// walls).
pub fn path_loss_direct(geom: &Geometry) -> Result<f64> {
    if !(geom.direct > 0.0) || !geom.direct.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "direct distance must be positive, got {}",
            geom.direct
        )));
    }
    Ok(10f64.powf(-direct_loss_db(geom.direct) / 10.0))
}

/// Linear power gain of the S-RIS-D link, `λ^4 / (256 π² r_s² r_d²)`.
pub fn path_loss_ris(geom: &Geometry) -> Result<f64> {
    for (name, v) in [("r_s", geom.r_s), ("r_d", geom.r_d), ("frequency_hz", geom.frequency_hz)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
        }
    }
    let lambda = geom.wavelength();
    Ok(lambda.powi(4) / (256.0 * PI * PI * geom.r_s.powi(2) * geom.r_d.powi(2)))
}

/// Additional loss of the RIS path over the direct path, in dB.
pub fn excess_ris_loss_db(geom: &Geometry) -> Result<f64> {
    Ok(10.0 * (path_loss_direct(geom)? / path_loss_ris(geom)?).log10())
}

/// Pre-computed generator for a fixed link: dimensions, fading laws and the
/// LOS matrices.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    dims: LinkDims,
    h1: HopSampler,
    g1: HopSampler,
    pl1: f64,
    pl2: f64,
}

#[derive(Debug, Clone)]
struct HopSampler {
    los_amplitude: f64,
    scatter_variance: f64,
    /// Unit LOS phasors, row-major; `None` for the all-ones pattern.
    los: Option<Vec<Complex>>,
}

impl HopSampler {
    fn new(spec: &FadingSpec, pattern: LosPattern, rows: usize, cols: usize, tag: u64) -> Self {
        let (los_amplitude, scatter_variance) = spec.split();
        let los = match pattern {
            LosPattern::RandomFixed { seed } if los_amplitude > 0.0 => {
                let mut rng = RngStream::new(seed, tag);
                Some(
                    (0..rows * cols)
                        .map(|_| Complex::from_polar(1.0, 2.0 * PI * rng.uniform()))
                        .collect(),
                )
            }
            _ => None,
        };
        Self {
            los_amplitude,
            scatter_variance,
            los,
        }
    }

    fn draw(&self, rows: usize, cols: usize, rng: &mut RngStream) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|k| {
                let los = match &self.los {
                    Some(p) => p[k] * self.los_amplitude,
                    None => Complex::new(self.los_amplitude, 0.0),
                };
                if self.scatter_variance > 0.0 {
                    los + rng.complex_normal(self.scatter_variance)
                } else {
                    los
                }
            })
            .collect();
        ComplexMatrix::from_vec(rows, cols, data)
    }
}

impl ChannelModel {
    pub fn new(
        dims: LinkDims,
        spec_h1: FadingSpec,
        spec_g1: FadingSpec,
        los: LosPattern,
        geom: &Geometry,
    ) -> Result<Self> {
        if dims.n_elements == 0 || dims.n_tx == 0 || dims.n_rx == 0 {
            return Err(Error::config("dims", "N, Nt and Nr must be at least 1"));
        }
        spec_h1.validate()?;
        spec_g1.validate()?;
        Ok(Self {
            dims,
            h1: HopSampler::new(&spec_h1, los, dims.n_elements, dims.n_tx, 1),
            g1: HopSampler::new(&spec_g1, los, dims.n_elements, dims.n_rx, 2),
            pl1: path_loss_ris(geom)?,
            pl2: path_loss_direct(geom)?,
        })
    }

    /// Models a fully blocked direct path (`pl2 = 0`).
    pub fn with_direct_blocked(mut self) -> Self {
        self.pl2 = 0.0;
        self
    }

    /// Removes the RIS path (`pl1 = 0`).
    pub fn without_ris(mut self) -> Self {
        self.pl1 = 0.0;
        self
    }

    pub fn dims(&self) -> LinkDims {
        self.dims
    }

    /// Power loss of the RIS path.
    pub fn ris_gain(&self) -> f64 {
        self.pl1
    }

    /// Power loss of the direct path.
    pub fn direct_gain(&self) -> f64 {
        self.pl2
    }

    pub fn draw(&self, rng: &mut RngStream) -> ChannelRealization {
        let LinkDims {
            n_elements,
            n_tx,
            n_rx,
        } = self.dims;
        let h1 = self.h1.draw(n_elements, n_tx, rng);
        let g1 = self.g1.draw(n_elements, n_rx, rng);
        let h2 = ComplexMatrix::from_vec(n_rx, n_tx, (0..n_rx * n_tx).map(|_| rng.complex_normal(1.0)).collect());
        ChannelRealization {
            h1,
            g1,
            h2,
            pl1: self.pl1,
            pl2: self.pl2,
        }
    }
}

/// Draws one realization with the all-ones LOS pattern.
pub fn draw_channel(
    rng: &mut RngStream,
    dims: LinkDims,
    spec_h1: FadingSpec,
    spec_g1: FadingSpec,
    geom: &Geometry,
) -> Result<ChannelRealization> {
    Ok(ChannelModel::new(dims, spec_h1, spec_g1, LosPattern::AllOnes, geom)?.draw(rng))
}
