use rand::Rng;

use super::{Field, FieldError, FieldKind, FieldSpec, Stream};

/// Minimum bit length of a modulus accepted for fingerprinting runs.
pub const MIN_PRIME_BITS: u32 = 60;

/// Integers modulo an odd prime `p < 2^64`, residues kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Any odd prime is accepted here; the bit-length floor is enforced by [`FieldSpec::validate`].
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::InvalidSpec(format!("{p} is not an odd prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniformly random prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn instantiate(spec: &FieldSpec, stream: &mut Stream) -> Result<Self, FieldError> {
        spec.validate()?;
        match spec.prime {
            Some(p) => PrimeField::new(p),
            None => Ok(PrimeField {
                p: random_prime(stream),
            }),
        }
    }

    fn reinstate(_spec: &FieldSpec, modulus: Option<u64>) -> Result<Self, FieldError> {
        match modulus {
            Some(p) => PrimeField::new(p),
            None => Err(FieldError::InvalidSpec("prime mode needs a modulus".into())),
        }
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Prime
    }

    fn modulus(&self) -> Option<u64> {
        Some(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    #[inline]
    fn add(&self, x: &u64, y: &u64) -> u64 {
        add_mod(*x, *y, self.p)
    }

    #[inline]
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        if x >= y {
            x - y
        } else {
            self.p - (y - x)
        }
    }

    #[inline]
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        mul_mod(*x, *y, self.p)
    }

    fn neg(&self, x: &u64) -> u64 {
        if *x == 0 {
            0
        } else {
            self.p - x
        }
    }

    fn inv(&self, x: &u64) -> Result<u64, FieldError> {
        if *x == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // extended Euclid on (p, x)
        let (mut r0, mut r1) = (self.p as i128, *x as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn format(&self, x: &u64) -> String {
        x.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        match s.parse::<u64>() {
            Ok(v) if v < self.p => Ok(v),
            _ => Err(FieldError::Parse(s.to_string())),
        }
    }
}
