//! Link-level Monte Carlo simulation of MIMO transmission schemes assisted by a
//! reconfigurable intelligent surface (RIS).
//!
//! Two RIS-assisted schemes are modelled alongside their classical baselines:
//!
//! - an Alamouti space-time block code emulated by a single RF carrier and an
//!   RIS split into two halves (plus the classical 2x1 Alamouti MISO link and a
//!   blind RIS access point),
//! - a VBLAST link where the RIS cancels the cascaded channel phase of one
//!   transmit/receive antenna pair, optionally chosen by index-modulation bits,
//!   detected with nulling-based index detectors followed by ZF successive
//!   nulling and cancelling.
//!
//! The [`harness`] module drives SNR sweeps with seeded, worker-count
//! independent parallelism and produces [`harness::BerCurve`]s.

pub mod alamouti;
pub mod channel;
pub mod error;
pub mod harness;
pub mod modem;
pub mod numerics;
pub mod vblast;

pub use error::{Error, Result};
pub use numerics::{Complex, ComplexMatrix, RngStream};
