//! Numerical toolkit for Orlicz and generalized Orlicz-Morrey spaces.
//!
//! The crate provides Young-function algebra ([`young`]), regular-grid
//! sampled functions ([`sampled`]), Luxemburg / weak / Morrey-type norms
//! ([`norms`]), fractional maximal and Riesz operators ([`operators`]) and
//! growth-condition checkers plus operator-norm experiments
//! ([`characterize`]).

pub mod characterize;
pub mod error;
pub mod exec;
pub mod family;
pub mod growth;
pub mod norms;
pub mod operators;
pub mod report;
pub mod roots;
pub mod sampled;
pub mod young;

pub use error::{OlabError, Result};
pub use growth::{GrowthFunction, GrowthSpec};
pub use report::{ConditionReport, ReportStep, Verdict};
pub use sampled::{Ball, FormulaSpec, GridSpec, Point, SampledFunction};
pub use young::{YoungFunction, YoungSpec};
