//! Sharp identified sets for the joint distribution of potential outcomes in a
//! binary-outcome / binary-treatment / binary-instrument model.
//!
//! Everything is computed in exact rational arithmetic. The crate provides two
//! independent routes to every bound — closed-form expressions and an exact
//! linear-programming engine — together with consistency diagnostics, a test
//! for whether instrument monotonicity has identifying content, sharpness
//! witnesses, and a seeded generator of consistent data distributions.

pub mod analysis;
pub mod closed_form;
pub mod constraints;
pub mod lp;
pub mod model;
pub mod rational;

pub use model::{
    push_forward, response_types_for_cell, response_types_for_event, AssumptionSet,
    DataDistribution, Event, Interval, MassFunction, OutcomeCell, ResponseType,
};
pub use rational::Rational;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {0:?} as an exact rational")]
    MalformedNumber(String),
    #[error("P[{y},{d}|{z}] = {value} is negative")]
    NegativeEntry { y: u8, d: u8, z: u8, value: String },
    #[error("P[{y},{d}|{z}] = {value} exceeds one")]
    EntryAboveOne { y: u8, d: u8, z: u8, value: String },
    #[error("entries for z={z} sum to {sum}, not one")]
    ConditionalSumNotOne { z: u8, sum: String },
    #[error("mass function entry for type {index} is negative")]
    NegativeMass { index: u8 },
    #[error("mass function sums to {sum}, not one")]
    MassSumNotOne { sum: String },
    #[error("interval bounds {lo} > {hi} (or outside [0,1])")]
    InvalidInterval { lo: String, hi: String },
    #[error("input is not a valid distribution document: {0}")]
    MalformedInput(String),
    #[error("data distribution violates the treatment-arm consistency condition (margins {margins:?})")]
    ConsistencyViolated { margins: [String; 4] },
    #[error("target {target} lies outside the identified interval [{lo}, {hi}]")]
    TargetOutsideInterval {
        target: String,
        lo: String,
        hi: String,
    },
    #[error("malformed singleton targets: {0}")]
    MalformedTargets(String),
    #[error(transparent)]
    Infeasible(#[from] lp::Infeasible),
}
