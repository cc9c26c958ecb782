use super::complexity::CmLedger;
use super::detect::{detect_indices_optimal, detect_indices_suboptimal, IndexDetector};
use super::sic::zf_nulling_cancelling;
use super::{equivalent_channel, pair_index, ris_phases_for_pair, select_pair, AntennaPair, ImMode, PhaseQuantization};
use crate::channel::{ChannelModel, LinkDims};
use crate::error::Result;
use crate::harness::FrameOutcome;
use crate::modem::Constellation;
use crate::numerics::{Complex, ComplexMatrix, RngStream};

/// Everything a VBLAST frame needs that does not change between frames.
#[derive(Debug, Clone)]
pub struct VblastLink {
    pub constellation: Constellation,
    pub model: ChannelModel,
    pub mode: ImMode,
    pub detector: IndexDetector,
    pub quantization: PhaseQuantization,
    /// Symbol energy per transmit antenna.
    pub es_per_antenna: f64,
    hypotheses: Vec<AntennaPair>,
    index_bits: usize,
}

impl VblastLink {
    pub fn new(
        constellation: Constellation,
        model: ChannelModel,
        mode: ImMode,
        detector: IndexDetector,
        quantization: PhaseQuantization,
        es_per_antenna: f64,
    ) -> Result<Self> {
        let LinkDims { n_tx, n_rx, .. } = model.dims();
        let index_bits = mode.index_bits(n_tx, n_rx)?;
        Ok(Self {
            hypotheses: mode.hypotheses(n_tx, n_rx),
            constellation,
            model,
            mode,
            detector,
            quantization,
            es_per_antenna,
            index_bits,
        })
    }

    pub fn dims(&self) -> LinkDims {
        self.model.dims()
    }

    pub fn index_bits(&self) -> usize {
        self.index_bits
    }

    pub fn hypotheses(&self) -> &[AntennaPair] {
        &self.hypotheses
    }
}

fn noise_vector(n: usize, n0: f64, rng: &mut RngStream) -> Vec<Complex> {
    if n0 > 0.0 {
        (0..n).map(|_| rng.complex_normal(n0)).collect()
    } else {
        vec![Complex::new(0.0, 0.0); n]
    }
}

fn tally_symbols(out: &mut FrameOutcome, c: &Constellation, sent: &[usize], decided: &[usize]) {
    for (&s, &d) in sent.iter().zip(decided) {
        out.bits += c.bits_per_symbol() as u64;
        out.bit_errors += u64::from((c.label(s) ^ c.label(d)).count_ones());
        out.symbols += 1;
        out.symbol_errors += u64::from(s != d);
    }
}

/// One classical VBLAST channel use over the direct path only:
/// `r = √(pl2·Es_tx) H2 x + n`, ZF successive nulling and cancelling.
pub fn classical_vblast_frame(link: &VblastLink, n0: f64, rng: &mut RngStream) -> FrameOutcome {
    let LinkDims { n_tx, n_rx, .. } = link.dims();
    let c = &link.constellation;
    let gain = (link.model.direct_gain() * link.es_per_antenna).sqrt();
    let h2 = ComplexMatrix::from_vec(n_rx, n_tx, (0..n_rx * n_tx).map(|_| rng.complex_normal(1.0)).collect());
    let v = h2.scale(Complex::new(gain, 0.0));
    let sent: Vec<usize> = (0..n_tx).map(|_| rng.pick(c.order())).collect();
    let x: Vec<Complex> = sent.iter().map(|&i| c.point(i)).collect();
    let mut r = v.mul_vec(&x);
    for (ri, ni) in r.iter_mut().zip(noise_vector(n_rx, n0, rng)) {
        *ri += ni;
    }
    let mut ledger = CmLedger::default();
    let sic = zf_nulling_cancelling(&v, &r, c, Some(&mut ledger));
    let mut out = FrameOutcome {
        cm: ledger.total(),
        fallbacks: u64::from(sic.fallbacks),
        ..FrameOutcome::default()
    };
    tally_symbols(&mut out, c, &sent, &sic.decisions);
    out
}

/// One RIS-assisted IM-VBLAST channel use: draw the channel, map index bits
/// to a pair, configure the RIS for it, transmit, detect the pair, then run
/// ZF successive nulling and cancelling on the implied equivalent channel.
pub fn ris_im_vblast_frame(link: &VblastLink, n0: f64, rng: &mut RngStream) -> FrameOutcome {
    let LinkDims { n_tx, n_rx, .. } = link.dims();
    let c = &link.constellation;
    let realization = link.model.draw(rng).scaled_power(link.es_per_antenna);

    let mut im_bits = vec![0u8; link.index_bits];
    rng.fill_bits(&mut im_bits);
    let selection = select_pair(&im_bits, link.mode, n_tx, n_rx).expect("validated mode");
    let sent: Vec<usize> = (0..n_tx).map(|_| rng.pick(c.order())).collect();
    let x: Vec<Complex> = sent.iter().map(|&i| c.point(i)).collect();

    let phases = ris_phases_for_pair(&realization.h1, &realization.g1, selection.pair, link.quantization);
    let v = equivalent_channel(&realization, &phases).v;
    let mut r = v.mul_vec(&x);
    for (ri, ni) in r.iter_mut().zip(noise_vector(n_rx, n0, rng)) {
        *ri += ni;
    }

    let mut ledger = CmLedger::default();
    let (pair, v_hat, mut fallbacks) = match link.mode {
        // no index to recover; the receiver rebuilds the known channel
        ImMode::Enhancing { pair } => (pair, v, 0),
        _ => {
            let d = match link.detector {
                IndexDetector::Optimal => detect_indices_optimal(
                    &realization,
                    &r,
                    c,
                    &link.hypotheses,
                    link.quantization,
                    Some(&mut ledger),
                ),
                IndexDetector::Suboptimal => detect_indices_suboptimal(
                    &realization,
                    &r,
                    c,
                    &link.hypotheses,
                    link.quantization,
                    Some(&mut ledger),
                ),
            };
            (d.pair, d.v_hat, d.fallbacks)
        }
    };
    let sic = zf_nulling_cancelling(&v_hat, &r, c, Some(&mut ledger));
    fallbacks += sic.fallbacks;

    let mut out = FrameOutcome {
        cm: ledger.total(),
        fallbacks: u64::from(fallbacks),
        ..FrameOutcome::default()
    };
    if link.index_bits > 0 {
        let sent_idx = pair_index(selection.pair, link.mode, n_rx);
        let got_idx = pair_index(pair, link.mode, n_rx);
        let errs = u64::from(((sent_idx ^ got_idx) as u32).count_ones());
        out.index_bits = link.index_bits as u64;
        out.index_bit_errors = errs;
        out.bits += link.index_bits as u64;
        out.bit_errors += errs;
    }
    tally_symbols(&mut out, c, &sent, &sic.decisions);
    out
}
