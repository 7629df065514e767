//! Enumerative point/line genealogy.
//!
//! Starting from `k` generic points, alternately join every pair of points
//! and meet every pair of lines, count the genuinely new objects born at each
//! generation, and report the coincidences (collinearities and concurrencies)
//! that make two different family trees produce the same object.

pub mod error;
pub mod field;
pub mod genealogy;
pub mod geometry;
pub mod miracles;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, FieldSpec, PrimeField, Rationals};
pub use geometry::{Gender, GeomObject, SeedMode};
pub use genealogy::{Ledger, MatingPolicy, ObjectId, Pedigree, RunConfig, SeedConfig};
pub use pipeline::{run_pipeline, PipelineConfig};
pub use report::{Convention, Report, VerificationStatus};
