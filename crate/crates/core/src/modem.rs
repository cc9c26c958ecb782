//! M-PSK and square M-QAM constellations with Gray labels, the nearest-point
//! slicer and the minimum-distance metric used by the index detectors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulationKind {
    Psk,
    Qam,
}

/// A unit-energy symbol alphabet with Gray labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ModulationKind,
    order: usize,
    bits_per_symbol: usize,
    points: Vec<Complex>,
    /// Label of each point, MSB first when expanded to bits.
    labels: Vec<u32>,
    /// Point index for each label.
    by_label: Vec<usize>,
}

#[inline]
fn gray(k: u32) -> u32 {
    k ^ (k >> 1)
}

impl Constellation {
    pub fn new(kind: ModulationKind, order: usize) -> Result<Self> {
        match kind {
            ModulationKind::Psk => Self::psk(order),
            ModulationKind::Qam => Self::qam(order),
        }
    }

    /// M-PSK on the unit circle, point `k` at phase `2πk/M` carrying Gray
    /// label `k ^ (k >> 1)`.
    pub fn psk(order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::UnsupportedConstellation(format!(
                "PSK order must be a power of two >= 2, got {order}"
            )));
        }
        let points = (0..order)
            .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
            .map(|z| {
                // keep exact zeros on the axes
                Complex::new(snap(z.re), snap(z.im))
            })
            .collect();
        let labels = (0..order as u32).map(gray).collect();
        Ok(Self::assemble(ModulationKind::Psk, order, points, labels))
    }

    /// Square M-QAM normalised to unit average energy. `M = 2` degenerates to
    /// BPSK.
    pub fn qam(order: usize) -> Result<Self> {
        if order == 2 {
            let mut c = Self::psk(2)?;
            c.kind = ModulationKind::Qam;
            return Ok(c);
        }
        let bits = order.trailing_zeros() as usize;
        if order < 4 || !order.is_power_of_two() || bits % 2 != 0 {
            return Err(Error::UnsupportedConstellation(format!(
                "QAM order must be 2 or an even power of two, got {order}"
            )));
        }
        let side = 1usize << (bits / 2);
        let norm = (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
        let level = |i: usize| (2.0 * i as f64 - side as f64 + 1.0) / norm;
        let mut points = Vec::with_capacity(order);
        let mut labels = Vec::with_capacity(order);
        for i in 0..side {
            for q in 0..side {
                points.push(Complex::new(level(i), level(q)));
                labels.push((gray(i as u32) << (bits / 2)) | gray(q as u32));
            }
        }
        Ok(Self::assemble(ModulationKind::Qam, order, points, labels))
    }

    fn assemble(kind: ModulationKind, order: usize, points: Vec<Complex>, labels: Vec<u32>) -> Self {
        let mut by_label = vec![0; order];
        for (idx, &l) in labels.iter().enumerate() {
            by_label[l as usize] = idx;
        }
        Self {
            kind,
            order,
            bits_per_symbol: order.trailing_zeros() as usize,
            points,
            labels,
            by_label,
        }
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex {
        self.points[index]
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    pub fn index_of_label(&self, label: u32) -> usize {
        self.by_label[label as usize]
    }

    /// Expands a label into `bits_per_symbol` bits, MSB first.
    pub fn label_bits(&self, label: u32) -> Vec<u8> {
        (0..self.bits_per_symbol)
            .rev()
            .map(|b| ((label >> b) & 1) as u8)
            .collect()
    }

    /// Packs `bits_per_symbol` bits (MSB first) into a label.
    pub fn bits_to_label(&self, bits: &[u8]) -> u32 {
        debug_assert_eq!(bits.len(), self.bits_per_symbol);
        bits.iter().fold(0, |acc, &b| (acc << 1) | u32::from(b & 1))
    }

    /// Index of the nearest point; ties go to the lowest index.
    #[inline]
    pub fn slice_index(&self, y: Complex) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Slicer output.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub index: usize,
    pub symbol: Complex,
    pub bits: Vec<u8>,
}

/// Maps each `log2 M`-bit group (MSB first) to its labelled point.
pub fn modulate(bits: &[u8], c: &Constellation) -> Result<Vec<Complex>> {
    let group = c.bits_per_symbol();
    if bits.len() % group != 0 {
        return Err(Error::BitLength {
            len: bits.len(),
            group,
        });
    }
    Ok(bits
        .chunks(group)
        .map(|chunk| c.point(c.index_of_label(c.bits_to_label(chunk))))
        .collect())
}

/// Nearest-point decision.
pub fn slice(y: Complex, c: &Constellation) -> Decision {
    let index = c.slice_index(y);
    Decision {
        index,
        symbol: c.point(index),
        bits: c.label_bits(c.label(index)),
    }
}

/// Squared Euclidean distance from `y` to the closest point.
pub fn min_distance(y: Complex, c: &Constellation) -> f64 {
    c.points()
        .iter()
        .map(|p| (y - p).norm_sqr())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all(kind: ModulationKind) -> Vec<Constellation> {
        let orders: &[usize] = match kind {
            ModulationKind::Psk => &[2, 4, 8, 16, 64],
            ModulationKind::Qam => &[2, 4, 16, 64],
        };
        orders.iter().map(|&m| Constellation::new(kind, m).unwrap()).collect()
    }

    #[test]
    fn bpsk_mapping() {
        let c = Constellation::psk(2).unwrap();
        assert_eq!(
            modulate(&[0, 1], &c).unwrap(),
            vec![Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]
        );
    }

    #[test]
    fn qpsk_first_label_is_zero_phase() {
        let c = Constellation::psk(4).unwrap();
        assert_eq!(modulate(&[0, 0], &c).unwrap(), vec![Complex::new(1.0, 0.0)]);
        // Gray order around the circle: 00, 01, 11, 10
        assert_eq!(modulate(&[0, 1], &c).unwrap(), vec![Complex::new(0.0, 1.0)]);
        assert_eq!(modulate(&[1, 1], &c).unwrap(), vec![Complex::new(-1.0, 0.0)]);
        assert_eq!(modulate(&[1, 0], &c).unwrap(), vec![Complex::new(0.0, -1.0)]);
    }

    #[test]
    fn unit_average_energy() {
        for c in all(ModulationKind::Psk).into_iter().chain(all(ModulationKind::Qam)) {
            let e = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / c.order() as f64;
            assert!((e - 1.0).abs() < 1e-12, "{:?} {}", c.kind(), c.order());
        }
        let c16 = Constellation::qam(16).unwrap();
        assert!((c16.point(0).re + 3.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn psk_points_on_unit_circle() {
        for c in all(ModulationKind::Psk) {
            for p in c.points() {
                assert!((p.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn labels_are_bijective() {
        for c in all(ModulationKind::Psk).into_iter().chain(all(ModulationKind::Qam)) {
            let mut seen = vec![false; c.order()];
            for k in 0..c.order() {
                seen[c.label(k) as usize] = true;
                assert_eq!(c.index_of_label(c.label(k)), k);
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn psk_neighbours_differ_in_one_bit() {
        for c in all(ModulationKind::Psk) {
            let m = c.order();
            for k in 0..m {
                let d = c.label(k) ^ c.label((k + 1) % m);
                assert_eq!(d.count_ones(), 1, "M = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn qam_neighbours_differ_in_one_bit() {
        let c = Constellation::qam(16).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                let d = (c.point(a) - c.point(b)).norm();
                if (d - 2.0 / 10f64.sqrt()).abs() < 1e-12 {
                    assert_eq!((c.label(a) ^ c.label(b)).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn slicer_examples() {
        let c = Constellation::psk(2).unwrap();
        let d = slice(Complex::new(0.3, 0.0), &c);
        assert_eq!((d.symbol, d.bits), (Complex::new(1.0, 0.0), vec![0]));
        assert_eq!(slice(Complex::new(0.0, 0.0), &c).symbol, Complex::new(1.0, 0.0));
        let q = Constellation::psk(4).unwrap();
        for &p in q.points() {
            assert_eq!(slice(p, &q).symbol, p);
        }
    }

    #[test]
    fn min_distance_examples() {
        let c = Constellation::psk(2).unwrap();
        assert_eq!(min_distance(Complex::new(1.0, 0.0), &c), 0.0);
        assert_eq!(min_distance(Complex::new(0.0, 0.0), &c), 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = Constellation::psk(4).unwrap();
        assert_eq!(modulate(&[0, 1, 1], &c), Err(Error::BitLength { len: 3, group: 2 }));
        assert!(Constellation::psk(3).is_err());
        assert!(Constellation::qam(8).is_err());
        assert!(Constellation::qam(32).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(m_exp in 1usize..=6, qam in any::<bool>(), seed in any::<u64>()) {
            let m = 1usize << m_exp;
            let c = if qam {
                prop_assume!(m == 2 || m_exp % 2 == 0);
                Constellation::qam(m).unwrap()
            } else {
                Constellation::psk(m).unwrap()
            };
            let bits: Vec<u8> = (0..c.bits_per_symbol() * 8)
                .map(|i| ((seed >> (i % 64)) & 1) as u8)
                .collect();
            let symbols = modulate(&bits, &c).unwrap();
            let back: Vec<u8> = symbols.iter().flat_map(|&s| slice(s, &c).bits).collect();
            prop_assert_eq!(back, bits);
        }

        #[test]
        fn min_distance_matches_slicer_and_scan(re in -2.0f64..2.0, im in -2.0f64..2.0, m_exp in 1usize..=4) {
            let c = Constellation::psk(1 << m_exp).unwrap();
            let y = Complex::new(re, im);
            let brute = c.points().iter().map(|p| (y - p).norm_sqr()).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(min_distance(y, &c), brute);
            prop_assert_eq!(min_distance(y, &c), (y - slice(y, &c).symbol).norm_sqr());
        }
    }
}
