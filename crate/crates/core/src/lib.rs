//! The weighted Talmudic rebalancing rule.
//!
//! An agent following the rule keeps a fixed fraction `alpha` of its wealth in
//! money and `beta = 1 - alpha` in goods, rebalancing whenever the price moves.
//! The crate provides
//!
//! * [`rule`]: the Cobb-Douglas utility implied by the rule, target holdings,
//!   single rebalances and the closed-form per-transaction growth math;
//! * [`curves`]: the supply and demand curves induced by rebalancing, their
//!   slopes and areas, and the depth-equivalent budget;
//! * [`book`]: order-book snapshots and a local depth-slope estimate;
//! * [`sim`]: price-path generators and a threshold-triggered backtester.
//!
//! Everything numeric is generic over a [`Scalar`] (any `num_traits::Float`).
//! The aliases at the crate root fix the scalar to `f64`, which is what the
//! command-line front end uses.

pub mod book;
pub mod curves;
mod error;
mod quad;
pub mod rule;
mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Weights = rule::Weights<f64>;
pub type Holdings = rule::Holdings<f64>;
pub type UtilityContext = rule::UtilityContext<f64>;
pub type Trade = rule::Trade<f64>;
pub type GrowthFigures = rule::GrowthFigures<f64>;
pub type CurveAnchor = curves::CurveAnchor<f64>;
pub type CurveSample = curves::CurveSample<f64>;
pub type DemandArea = curves::DemandArea<f64>;
pub type OrderBookSnapshot = book::OrderBookSnapshot<f64>;
pub type DepthEstimate = book::DepthEstimate<f64>;
pub type PricePath = sim::PricePath<f64>;
pub type TriggerPolicy = sim::TriggerPolicy<f64>;
pub type BacktestReport = sim::BacktestReport<f64>;
pub type ScanRow = sim::ScanRow<f64>;

/// Single-precision variants, mostly useful for memory-bound scans.
pub mod f32 {
    pub type Weights = crate::rule::Weights<f32>;
    pub type Holdings = crate::rule::Holdings<f32>;
    pub type UtilityContext = crate::rule::UtilityContext<f32>;
    pub type CurveAnchor = crate::curves::CurveAnchor<f32>;
    pub type PricePath = crate::sim::PricePath<f32>;
    pub type BacktestReport = crate::sim::BacktestReport<f32>;
}
