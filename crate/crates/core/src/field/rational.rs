use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{Field, FieldError, FieldKind, FieldSpec, Stream};

/// The rational numbers, elements in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rationals {
    sample_bound: u64,
}

impl Rationals {
    pub fn new(sample_bound: u64) -> Self {
        Rationals { sample_bound }
    }

    pub fn sample_bound(&self) -> u64 {
        self.sample_bound
    }
}

impl Default for Rationals {
    fn default() -> Self {
        Rationals::new(super::DEFAULT_SAMPLE_BOUND)
    }
}

/// Image of `x` in `Z/pZ`, or `None` when `p` divides the denominator.
pub fn reduce_mod(x: &BigRational, p: u64) -> Option<u64> {
    let modulus = BigInt::from(p);
    let num = x.numer().mod_floor_u64(&modulus);
    let den = x.denom().mod_floor_u64(&modulus);
    if den == 0 {
        return None;
    }
    let f = super::PrimeField::new(p).ok()?;
    Some(f.mul(&num, &f.inv(&den).ok()?))
}

trait ModFloor {
    fn mod_floor_u64(&self, m: &BigInt) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, m: &BigInt) -> u64 {
        let r = self % m;
        let r = if r.is_negative() { r + m } else { r };
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn instantiate(spec: &FieldSpec, _stream: &mut Stream) -> Result<Self, FieldError> {
        spec.validate()?;
        Ok(Rationals::new(spec.sample_bound))
    }

    fn reinstate(spec: &FieldSpec, modulus: Option<u64>) -> Result<Self, FieldError> {
        if modulus.is_some() {
            return Err(FieldError::InvalidSpec("rational mode has no modulus".into()));
        }
        Ok(Rationals::new(spec.sample_bound))
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }

    fn modulus(&self) -> Option<u64> {
        None
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }

    fn inv(&self, x: &BigRational) -> Result<BigRational, FieldError> {
        if x.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(x.recip())
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let bound = self.sample_bound as i64;
        let num = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=bound);
        BigRational::new(num.into(), den.into())
    }

    fn format(&self, x: &BigRational) -> String {
        x.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigUint = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        let value = BigRational::new(num, den.into());
        // only canonical text is accepted
        if value.to_string() != s {
            return Err(err());
        }
        Ok(value)
    }
}
