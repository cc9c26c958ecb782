//! RIS-emulated Alamouti transmission with a single RF carrier, the classical
//! 2x1 Alamouti MISO baseline, the blind RIS access point, and the
//! closed-form average SEP of the RIS scheme.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harness::{BerCurve, BerPoint, FrameOutcome, PowerSplit, Tally};
use crate::modem::{slice, Constellation, Decision, ModulationKind};
use crate::numerics::{integrate, Complex, RngStream};

/// Two PSK symbols carried by one two-slot Alamouti frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlamoutiFrame {
    pub theta0: f64,
    pub theta1: f64,
    pub s0: Complex,
    pub s1: Complex,
}

impl AlamoutiFrame {
    pub fn new(theta0: f64, theta1: f64, es: f64) -> Self {
        let amp = es.sqrt();
        Self {
            theta0,
            theta1,
            s0: Complex::from_polar(amp, theta0),
            s1: Complex::from_polar(amp, theta1),
        }
    }

    /// Frame carrying constellation points `i0` and `i1` of a PSK alphabet.
    pub fn from_points(c: &Constellation, i0: usize, i1: usize, es: f64) -> Self {
        let (p0, p1) = (c.point(i0), c.point(i1));
        let amp = es.sqrt();
        Self {
            theta0: p0.arg(),
            theta1: p1.arg(),
            s0: p0 * amp,
            s1: p1 * amp,
        }
    }
}

/// Common reflection phases of the two RIS halves over the two slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisHalvesState {
    pub n_elements: usize,
    pub phase_part1_slot1: f64,
    pub phase_part2_slot1: f64,
    pub phase_part1_slot2: f64,
    pub phase_part2_slot2: f64,
}

impl RisHalvesState {
    /// Slot 1 reflects `(θ0, θ1)`, slot 2 reflects `(-(θ1 + π), -θ0)`.
    pub fn for_frame(n_elements: usize, frame: &AlamoutiFrame) -> Result<Self> {
        check_even(n_elements)?;
        Ok(Self {
            n_elements,
            phase_part1_slot1: frame.theta0,
            phase_part2_slot1: frame.theta1,
            phase_part1_slot2: -(frame.theta1 + PI),
            phase_part2_slot2: -frame.theta0,
        })
    }
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::config("n_elements", format!("must be even and positive, got {n}")));
    }
    Ok(())
}

fn check_noise(n0: f64) -> Result<()> {
    if !(n0 >= 0.0) {
        return Err(Error::config("n0", format!("noise density must be >= 0, got {n0}")));
    }
    Ok(())
}

#[inline]
fn noise(rng: &mut RngStream, n0: f64) -> Complex {
    if n0 > 0.0 {
        rng.complex_normal(n0)
    } else {
        Complex::new(0.0, 0.0)
    }
}

/// Sums of the channel coefficients over the first and second RIS halves.
pub fn half_sums(h: &[Complex]) -> (Complex, Complex) {
    let (first, second) = h.split_at(h.len() / 2);
    (first.iter().sum(), second.iter().sum())
}

/// Received samples of the two slots.
///
/// The RF carrier of energy `es` (folded into `frame`) reaches every RIS
/// element with unit gain; element `i` reflects with the common phase of its
/// half and reaches the destination through `h[i]`.
pub fn ris_alamouti_transmit(
    frame: &AlamoutiFrame,
    h: &[Complex],
    pl: f64,
    rng: &mut RngStream,
    n0: f64,
) -> Result<(Complex, Complex)> {
    check_noise(n0)?;
    let state = RisHalvesState::for_frame(h.len(), frame)?;
    let es_amp = frame.s0.norm();
    let (sum0, sum1) = half_sums(h);
    let g = pl.sqrt() * es_amp;
    let reflect = |phase1: f64, phase2: f64| {
        g * (Complex::from_polar(1.0, phase1) * sum0 + Complex::from_polar(1.0, phase2) * sum1)
    };
    let r0 = reflect(state.phase_part1_slot1, state.phase_part2_slot1) + noise(rng, n0);
    let r1 = reflect(state.phase_part1_slot2, state.phase_part2_slot2) + noise(rng, n0);
    Ok((r0, r1))
}

/// Alamouti combiner: `s0~ = r0 a0* + r1* a1`, `s1~ = r0 a1* - r1* a0`.
#[inline]
pub fn combine(r0: Complex, r1: Complex, a0: Complex, a1: Complex) -> (Complex, Complex) {
    (
        r0 * a0.conj() + r1.conj() * a1,
        r0 * a1.conj() - r1.conj() * a0,
    )
}

/// Nearest-point decision on a combined statistic. The positive combiner
/// gain does not move PSK decision regions.
pub fn ml_detect_psk(s_tilde: Complex, c: &Constellation) -> Decision {
    debug_assert_eq!(c.kind(), ModulationKind::Psk);
    slice(s_tilde, c)
}

/// One slot of the blind RIS access point: all `N` elements carry the data
/// phase, no channel-phase correction.
pub fn ris_ap_blind_transmit(
    theta: f64,
    h: &[Complex],
    pl: f64,
    es: f64,
    rng: &mut RngStream,
    n0: f64,
) -> Result<Complex> {
    check_noise(n0)?;
    let sum: Complex = h.iter().sum();
    Ok(Complex::from_polar((pl * es).sqrt(), theta) * sum + noise(rng, n0))
}

/// Classical Alamouti over two `CN(0,1)` direct channels `h = [h_a, h_b]`.
pub fn classical_alamouti_transmit(
    s0: Complex,
    s1: Complex,
    h: [Complex; 2],
    pl: f64,
    per_antenna_es: f64,
    rng: &mut RngStream,
    n0: f64,
) -> Result<(Complex, Complex)> {
    check_noise(n0)?;
    let g = (pl * per_antenna_es).sqrt();
    let r0 = g * (h[0] * s0 + h[1] * s1) + noise(rng, n0);
    let r1 = g * (-h[0] * s1.conj() + h[1] * s0.conj()) + noise(rng, n0);
    Ok((r0, r1))
}

fn symbol_outcome(c: &Constellation, sent: &[usize], decided: &[usize]) -> FrameOutcome {
    let mut out = FrameOutcome::default();
    for (&s, &d) in sent.iter().zip(decided) {
        out.bits += c.bits_per_symbol() as u64;
        out.bit_errors += u64::from((c.label(s) ^ c.label(d)).count_ones());
        out.symbols += 1;
        out.symbol_errors += u64::from(s != d);
    }
    out
}

fn random_point(c: &Constellation, rng: &mut RngStream) -> usize {
    rng.pick(c.order())
}

/// Simulates one RIS-Alamouti frame with unit `Es` and fresh Rayleigh RIS-D
/// channels.
pub fn ris_alamouti_frame(c: &Constellation, n_elements: usize, pl: f64, n0: f64, rng: &mut RngStream) -> FrameOutcome {
    let i0 = random_point(c, rng);
    let i1 = random_point(c, rng);
    let frame = AlamoutiFrame::from_points(c, i0, i1, 1.0);
    let h: Vec<Complex> = (0..n_elements).map(|_| rng.complex_normal(1.0)).collect();
    let (r0, r1) = ris_alamouti_transmit(&frame, &h, pl, rng, n0).expect("validated configuration");
    let (sum0, sum1) = half_sums(&h);
    let (a0, a1) = (pl.sqrt() * sum0, pl.sqrt() * sum1);
    let (t0, t1) = combine(r0, r1, a0, a1);
    symbol_outcome(c, &[i0, i1], &[c.slice_index(t0), c.slice_index(t1)])
}

/// One classical 2x1 Alamouti frame.
pub fn classical_alamouti_frame(
    c: &Constellation,
    pl: f64,
    power: PowerSplit,
    n0: f64,
    rng: &mut RngStream,
) -> FrameOutcome {
    let i0 = random_point(c, rng);
    let i1 = random_point(c, rng);
    let h = [rng.complex_normal(1.0), rng.complex_normal(1.0)];
    let es = power.per_antenna_energy(1.0, 2);
    let (r0, r1) =
        classical_alamouti_transmit(c.point(i0), c.point(i1), h, pl, es, rng, n0).expect("validated configuration");
    let g = (pl * es).sqrt();
    let (t0, t1) = combine(r0, r1, g * h[0], g * h[1]);
    // undo the combiner gain so QAM amplitudes line up with the grid
    let norm = g * g * (h[0].norm_sqr() + h[1].norm_sqr());
    let (t0, t1) = (t0 / norm, t1 / norm);
    symbol_outcome(c, &[i0, i1], &[c.slice_index(t0), c.slice_index(t1)])
}

/// One symbol through the blind RIS access point with a blocked direct path.
pub fn blind_ris_ap_frame(c: &Constellation, n_elements: usize, pl: f64, n0: f64, rng: &mut RngStream) -> FrameOutcome {
    let i = random_point(c, rng);
    let h: Vec<Complex> = (0..n_elements).map(|_| rng.complex_normal(1.0)).collect();
    let r = ris_ap_blind_transmit(c.point(i).arg(), &h, pl, 1.0, rng, n0).expect("validated configuration");
    let sum: Complex = h.iter().sum();
    // ML for PSK with known effective gain: derotate and slice
    let d = c.slice_index(r * sum.conj());
    symbol_outcome(c, &[i], &[d])
}

/// Classical Alamouti BER sweep driven by a single sequential stream.
///
/// `snr_grid_db` is `Es/N0`; `pl` is the linear direct-link gain.
pub fn classical_alamouti_simulate(
    c: &Constellation,
    pl: f64,
    power: PowerSplit,
    snr_grid_db: &[f64],
    trials: u64,
    rng: &mut RngStream,
) -> Result<BerCurve> {
    if c.kind() != ModulationKind::Psk {
        return Err(Error::config("constellation", "classical Alamouti baseline uses PSK"));
    }
    let points = snr_grid_db
        .iter()
        .map(|&snr_db| {
            let n0 = crate::harness::noise_density(snr_db);
            let mut tally = Tally::default();
            for _ in 0..trials {
                tally.record(&classical_alamouti_frame(c, pl, power, n0, rng));
            }
            BerPoint::from_tally(snr_db, &tally)
        })
        .collect();
    Ok(BerCurve { points })
}

/// Average SEP of M-PSK over the RIS-Alamouti link:
///
/// `P = 1/π ∫_0^{(M-1)π/M} (1 + sin²(π/M)/sin²η · pl·N·Es/(2N0))^-2 dη`,
///
/// evaluated with 64-point Gauss-Legendre. `es_over_n0` is linear.
pub fn sep_theory(order: usize, n_elements: usize, pl: f64, es_over_n0: f64) -> Result<f64> {
    if order < 2 {
        return Err(Error::config("order", format!("must be >= 2, got {order}")));
    }
    check_even(n_elements)?;
    if !(pl >= 0.0) || !(es_over_n0 >= 0.0) {
        return Err(Error::config("snr", "path gain and Es/N0 must be non-negative"));
    }
    let mean_snr = pl * n_elements as f64 * es_over_n0 / 2.0;
    if mean_snr.is_infinite() {
        return Ok(0.0);
    }
    let m = order as f64;
    let s2 = (PI / m).sin().powi(2);
    let upper = (m - 1.0) * PI / m;
    let p = integrate(
        |eta| {
            let sin2 = eta.sin().powi(2);
            let t = sin2 / (sin2 + s2 * mean_snr);
            t * t
        },
        0.0,
        upper,
        64,
    )?;
    Ok(p / PI)
}
