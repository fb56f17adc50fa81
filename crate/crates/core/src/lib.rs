//! Triangulations of unpunctured marked surfaces and their exchange graphs.
//!
//! * [`surface`]: half-edge triangulations, gluing tables, generators, flips.
//! * [`curve`]: curves between marked points as reduced crossing traces,
//!   intersection numbers, transport across flips, canonical arc codes.
//! * [`projection`]: the oriented projection onto the face of an arc.
//! * [`explorer`]: the implicit exchange graph, certified distances, geodesic
//!   intervals and the non-leaving-face check.
//! * [`oracle`]: an independent brute-force model of polygon triangulations.
//! * [`sweep`]: exhaustive and bounded property sweeps built on the above.

pub mod curve;
pub mod error;
pub mod explorer;
pub mod export;
pub mod oracle;
pub mod par;
pub mod projection;
pub mod surface;
pub mod sweep;

pub use error::{Error, Result};
