//! Simulation and decoding of the GKP-concatenated 8,8,4 color code on a
//! torus.
//!
//! The numerical core is generic over the float type through [`Real`]; the
//! aliases at the bottom of this file fix it to `f64` (or `f32`).

pub mod error;
pub mod gkp;
pub mod harness;
pub mod lattice;
pub mod matching;
pub mod restriction;
pub mod scalar;
pub mod spacetime;
pub mod stats;

pub use error::{Error, Result};
pub use gkp::{DeltaEstimate, DeltaMethod, NoiseParams, Scheme, Wiring};
pub use harness::{ExperimentConfig, ExperimentResult, NoiseModel, NoiseScale, PointStats, TrialResult, TrialRunner};
pub use lattice::{AnalogSyndrome, BinaryError, CheckSigmas, Color, DualLattice, ShiftFrame};
pub use restriction::{Decoded, DecodeTrace, Order, Reliabilities, RestrictionDecoder};
pub use scalar::{Real, Weight};
pub use spacetime::{RoundRecord, SpacetimeDecoder};
pub use stats::{find_threshold, wilson_interval, Curve, CurvePoint, RateEstimate, ThresholdEstimate};

pub type NoiseParams64 = NoiseParams<f64>;
pub type ShiftFrame64 = ShiftFrame<f64>;
pub type AnalogSyndrome64 = AnalogSyndrome<f64>;
pub type RoundRecord64 = RoundRecord<f64>;
pub type DeltaMethod64 = DeltaMethod<f64>;
pub type DeltaEstimate64 = DeltaEstimate<f64>;
pub type RestrictionDecoder64<'a> = RestrictionDecoder<'a, f64>;
pub type SpacetimeDecoder64<'a> = SpacetimeDecoder<'a, f64>;
pub type TrialRunner64<'a> = TrialRunner<'a, f64>;

pub type NoiseParams32 = NoiseParams<f32>;
pub type RestrictionDecoder32<'a> = RestrictionDecoder<'a, f32>;
pub type SpacetimeDecoder32<'a> = SpacetimeDecoder<'a, f32>;
pub type TrialRunner32<'a> = TrialRunner<'a, f32>;
