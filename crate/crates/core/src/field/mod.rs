//! Exact scalar fields.
//!
//! Two fields back every computation in the crate: [`Rationals`] gives exact
//! ground truth at the cost of coordinate growth, and [`PrimeField`] gives
//! constant-size fingerprints of the same rational functions. Elements are
//! always held in canonical form so that `Eq` and `Hash` on elements agree
//! with equality in the field.

mod prime;
mod rational;

use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use prime::{is_prime, random_prime, PrimeField, MIN_PRIME_BITS};
pub use rational::{reduce_mod, Rationals};

/// Deterministic random stream used for every sampling decision.
pub type Stream = ChaCha8Rng;

/// Default bound on sampled numerators and denominators in rational mode.
pub const DEFAULT_SAMPLE_BOUND: u64 = 1_000_000;

/// Smallest accepted rational sample bound.
pub const MIN_SAMPLE_BOUND: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Rational,
    Prime,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => f.write_str("rational"),
            FieldKind::Prime => f.write_str("prime"),
        }
    }
}

/// User-facing description of which field to compute in and how to sample it.
///
/// `prime` pins the modulus in prime mode; when absent every instance draws
/// its own random prime of at least [`MIN_PRIME_BITS`] bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub prime: Option<u64>,
    pub rng_seed: u64,
    pub sample_bound: u64,
}

impl FieldSpec {
    pub fn rational(rng_seed: u64) -> Self {
        FieldSpec {
            kind: FieldKind::Rational,
            prime: None,
            rng_seed,
            sample_bound: DEFAULT_SAMPLE_BOUND,
        }
    }

    pub fn prime(rng_seed: u64) -> Self {
        FieldSpec {
            kind: FieldKind::Prime,
            prime: None,
            rng_seed,
            sample_bound: DEFAULT_SAMPLE_BOUND,
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.sample_bound < MIN_SAMPLE_BOUND {
            return Err(FieldError::InvalidSpec(format!(
                "sample bound {} is below {}",
                self.sample_bound, MIN_SAMPLE_BOUND
            )));
        }
        if let Some(p) = self.prime {
            if self.kind != FieldKind::Prime {
                return Err(FieldError::InvalidSpec(
                    "a prime modulus only applies to prime mode".into(),
                ));
            }
            if 64 - p.leading_zeros() < MIN_PRIME_BITS || !is_prime(p) {
                return Err(FieldError::InvalidSpec(format!(
                    "{p} is not an odd prime of at least {MIN_PRIME_BITS} bits"
                )));
            }
        }
        Ok(())
    }

    /// Independent stream number `stream` of attempt `attempt`, derived from `rng_seed`.
    pub fn stream(&self, stream: u64, attempt: u64) -> Stream {
        let mut rng = Stream::seed_from_u64(self.rng_seed);
        rng.set_stream((stream << 20) ^ attempt);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field with canonical element representation.
///
/// The field value itself carries the context (the modulus, or the sampling
/// bound); elements are plain data that can be hashed and shared freely.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    /// Builds the field for one independent instance, drawing whatever it needs
    /// (for instance a fresh prime) from `stream`.
    fn instantiate(spec: &FieldSpec, stream: &mut Stream) -> Result<Self, FieldError>
    where
        Self: Sized;

    /// Rebuilds a previously instantiated field from its spec and modulus.
    fn reinstate(spec: &FieldSpec, modulus: Option<u64>) -> Result<Self, FieldError>
    where
        Self: Sized;

    fn kind(&self) -> FieldKind;
    /// The modulus in prime mode.
    fn modulus(&self) -> Option<u64>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    fn arith(&self, x: &Self::Elem, y: &Self::Elem, op: ArithOp) -> Result<Self::Elem, FieldError> {
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Div => self.div(x, y)?,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Exact decimal text: `num/den` (or `num`) for rationals, the residue in prime mode.
    fn format(&self, x: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
}
