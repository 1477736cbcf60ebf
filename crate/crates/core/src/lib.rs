//! Quad-band notch filter design on an extended composite right/left-handed
//! (E-CRLH) unit cell.
//!
//! * [`net2p`]: ABCD two-port algebra and S-parameter conversion.
//! * [`ecrlh`]: the unit cell, its immittances, Bloch propagation and impedance.
//! * [`filter`]: the stub-loaded through line, sweeps and notch location.
//! * [`synth`]: receiver frequency planning and element synthesis.
//! * [`io`]: configuration, Touchstone and CSV files.
//! * [`cli`]: the `qbnf` command line.

pub mod cli;
pub mod ecrlh;
pub mod error;
pub mod filter;
pub mod io;
pub mod net2p;
pub mod numeric;
pub mod synth;

pub use error::{Error, Result};
