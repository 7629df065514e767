//! Points, lines and the two birth operations.
//!
//! A point is the affine point `(s, t)`; a line `[a, b]` is the line
//! `a x + b y + 1 = 0`. Lines through the origin and points at infinity have
//! no representation in this chart, and any operation that would produce one
//! reports [`Error::DegenerateConfiguration`]. For generic seeds this never
//! happens identically, so callers resample the whole instance instead.
//!
//! Joining two points and meeting two lines use one and the same coordinate
//! formula:
//!
//! ```text
//! (x1, x2), (y1, y2)  ->  ((x2 - y2) / d, (y1 - x1) / d),   d = x1 y2 - y1 x2
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gender {
    Point,
    Line,
}

impl Gender {
    pub fn opposite(self) -> Gender {
        match self {
            Gender::Point => Gender::Line,
            Gender::Line => Gender::Point,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Gender::Point => 0,
            Gender::Line => 1,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gender::Point => f.write_str("point"),
            Gender::Line => f.write_str("line"),
        }
    }
}

/// A gender-tagged pair of canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeomObject<E> {
    pub gender: Gender,
    pub coords: [E; 2],
}

impl<E> GeomObject<E> {
    pub fn point(s: E, t: E) -> Self {
        GeomObject {
            gender: Gender::Point,
            coords: [s, t],
        }
    }

    pub fn line(a: E, b: E) -> Self {
        GeomObject {
            gender: Gender::Line,
            coords: [a, b],
        }
    }
}

/// The shared join/meet formula on raw coordinate pairs.
pub fn cross<F: Field>(f: &F, x: &[F::Elem; 2], y: &[F::Elem; 2]) -> Result<[F::Elem; 2]> {
    let det = f.sub(&f.mul(&x[0], &y[1]), &f.mul(&y[0], &x[1]));
    if f.is_zero(&det) {
        return Err(Error::DegenerateConfiguration(
            "vanishing determinant (origin-incident join or parallel meet)",
        ));
    }
    let inv = f.inv(&det)?;
    Ok([
        f.mul(&f.sub(&x[1], &y[1]), &inv),
        f.mul(&f.sub(&y[0], &x[0]), &inv),
    ])
}

/// Child of two distinct objects of equal gender: the joining line of two
/// points or the common point of two lines.
pub fn child<F: Field>(
    f: &F,
    x: &GeomObject<F::Elem>,
    y: &GeomObject<F::Elem>,
) -> Result<GeomObject<F::Elem>> {
    if x.gender != y.gender {
        return Err(Error::InvalidConfig(
            "parents must have the same gender".into(),
        ));
    }
    if x.coords == y.coords {
        return Err(Error::DegenerateConfiguration("identical parents"));
    }
    Ok(GeomObject {
        gender: x.gender.opposite(),
        coords: cross(f, &x.coords, &y.coords)?,
    })
}

/// The line through two distinct points.
pub fn join<F: Field>(
    f: &F,
    p: &GeomObject<F::Elem>,
    q: &GeomObject<F::Elem>,
) -> Result<GeomObject<F::Elem>> {
    if p.gender != Gender::Point {
        return Err(Error::InvalidConfig("join expects two points".into()));
    }
    child(f, p, q)
}

/// The common point of two distinct lines.
pub fn meet<F: Field>(
    f: &F,
    l: &GeomObject<F::Elem>,
    m: &GeomObject<F::Elem>,
) -> Result<GeomObject<F::Elem>> {
    if l.gender != Gender::Line {
        return Err(Error::InvalidConfig("meet expects two lines".into()));
    }
    child(f, l, m)
}

/// True iff one argument is a point `(s, t)`, the other a line `[a, b]`, and `a s + b t + 1 = 0`.
pub fn incident<F: Field>(f: &F, x: &GeomObject<F::Elem>, y: &GeomObject<F::Elem>) -> bool {
    if x.gender == y.gender {
        return false;
    }
    let dot = f.add(&f.mul(&x.coords[0], &y.coords[0]), &f.mul(&x.coords[1], &y.coords[1]));
    f.is_zero(&f.add(&dot, &f.one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedMode {
    GenericPlane,
    GenericConic,
}

impl fmt::Display for SeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedMode::GenericPlane => f.write_str("generic"),
            SeedMode::GenericConic => f.write_str("conic"),
        }
    }
}

pub const DEFAULT_SEED_RETRIES: u32 = 32;

/// A nondegenerate conic, stored as the projective map sending it back to the
/// unit circle: `v` is on the conic iff `|N v|` has `n1^2 + n2^2 - n3^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conic<E> {
    to_circle: [[E; 3]; 3],
}

impl<E> Conic<E> {
    /// Value of the defining quadratic at the affine point `(s, t)`.
    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, s: &E, t: &E) -> E {
        let row = |r: &[E; 3]| f.add(&f.add(&f.mul(&r[0], s), &f.mul(&r[1], t)), &r[2]);
        let [n1, n2, n3] = [
            row(&self.to_circle[0]),
            row(&self.to_circle[1]),
            row(&self.to_circle[2]),
        ];
        f.sub(&f.add(&f.mul(&n1, &n1), &f.mul(&n2, &n2)), &f.mul(&n3, &n3))
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, object: &GeomObject<E>) -> bool {
        f.is_zero(&self.evaluate(f, &object.coords[0], &object.coords[1]))
    }
}

/// Seed objects of one instance.
#[derive(Debug, Clone)]
pub struct Seeds<E> {
    pub objects: Vec<GeomObject<E>>,
    /// The conic all seeds lie on, in conic mode.
    pub conic: Option<Conic<E>>,
}

/// Samples `k` pairwise distinct, pairwise composable seeds of the given gender.
pub fn seed_objects<F: Field>(
    f: &F,
    k: usize,
    mode: SeedMode,
    gender: Gender,
    stream: &mut Stream,
    retries: u32,
) -> Result<Seeds<F::Elem>> {
    for _ in 0..retries.max(1) {
        let (coords, conic) = match mode {
            SeedMode::GenericPlane => (
                (0..k).map(|_| [f.sample(stream), f.sample(stream)]).collect(),
                None,
            ),
            SeedMode::GenericConic => match sample_on_conic(f, k, stream) {
                Some((coords, conic)) => (coords, Some(conic)),
                None => continue,
            },
        };
        if pairwise_composable(f, &coords) {
            let objects = coords
                .into_iter()
                .map(|coords| GeomObject { gender, coords })
                .collect();
            return Ok(Seeds { objects, conic });
        }
    }
    Err(Error::SeedFailure { attempts: retries })
}

/// `k` generic points (the Adams) in the given mode.
pub fn seed_points<F: Field>(
    f: &F,
    k: usize,
    mode: SeedMode,
    stream: &mut Stream,
    retries: u32,
) -> Result<Seeds<F::Elem>> {
    seed_objects(f, k, mode, Gender::Point, stream, retries)
}

fn pairwise_composable<F: Field>(f: &F, coords: &[[F::Elem; 2]]) -> bool {
    coords.iter().enumerate().all(|(i, x)| {
        coords[i + 1..]
            .iter()
            .all(|y| x != y && cross(f, x, y).is_ok())
    })
}

fn det3<F: Field>(f: &F, m: &[[F::Elem; 3]; 3]) -> F::Elem {
    let minor = |a: usize, b: usize| {
        f.sub(&f.mul(&m[1][a], &m[2][b]), &f.mul(&m[1][b], &m[2][a]))
    };
    let t0 = f.mul(&m[0][0], &minor(1, 2));
    let t1 = f.mul(&m[0][1], &minor(0, 2));
    let t2 = f.mul(&m[0][2], &minor(0, 1));
    f.add(&f.sub(&t0, &t1), &t2)
}

fn adjugate<F: Field>(f: &F, m: &[[F::Elem; 3]; 3]) -> [[F::Elem; 3]; 3] {
    let cof = |r: usize, c: usize| {
        let (r0, r1) = ((r + 1) % 3, (r + 2) % 3);
        let (c0, c1) = ((c + 1) % 3, (c + 2) % 3);
        f.sub(&f.mul(&m[r0][c0], &m[r1][c1]), &f.mul(&m[r0][c1], &m[r1][c0]))
    };
    // adj[i][j] = cofactor(j, i); cyclic indices carry the sign
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i)))
}

fn sample_on_conic<F: Field>(
    f: &F,
    k: usize,
    stream: &mut Stream,
) -> Option<(Vec<[F::Elem; 2]>, Conic<F::Elem>)> {
    let map: [[F::Elem; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| f.sample(stream)));
    if f.is_zero(&det3(f, &map)) {
        return None;
    }
    let one = f.one();
    let mut coords: Vec<[F::Elem; 2]> = Vec::with_capacity(k);
    let mut tries = 0;
    while coords.len() < k {
        tries += 1;
        if tries > 4 * k + 16 {
            return None;
        }
        let u = f.sample(stream);
        let uu = f.mul(&u, &u);
        let circle = [f.sub(&one, &uu), f.add(&u, &u), f.add(&one, &uu)];
        let image: [F::Elem; 3] = std::array::from_fn(|r| {
            (0..3).fold(f.zero(), |acc, c| f.add(&acc, &f.mul(&map[r][c], &circle[c])))
        });
        let Ok(inv_z) = f.inv(&image[2]) else {
            continue;
        };
        let point = [f.mul(&image[0], &inv_z), f.mul(&image[1], &inv_z)];
        if !coords.contains(&point) {
            coords.push(point);
        }
    }
    Some((coords, Conic { to_circle: adjugate(f, &map) }))
}
