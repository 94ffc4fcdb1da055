//! The Lorentz-Minkowski space L³: `R^3` with `<v,w> = x x' + y y' - z z'`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of L³; `z` is the timelike direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3L {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3L {
    pub const ZERO: Vec3L = Vec3L::new(0.0, 0.0, 0.0);
    pub const E1: Vec3L = Vec3L::new(1.0, 0.0, 0.0);
    pub const E2: Vec3L = Vec3L::new(0.0, 1.0, 0.0);
    pub const E3: Vec3L = Vec3L::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn get(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("component index {i} out of range"),
        }
    }

    pub fn dot(self, o: Self) -> f64 {
        minkowski_inner(self, o)
    }

    pub fn cross(self, o: Self) -> Self {
        lorentz_cross(self, o)
    }

    /// The Lorentzian quadratic form `<v,v>`.
    pub fn norm_sqr(self) -> f64 {
        minkowski_inner(self, self)
    }

    pub fn euclid_dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn euclid_norm_sqr(self) -> f64 {
        self.euclid_dot(self)
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sqr().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3L {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3L {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Vec3L {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3L {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3L {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3L> for f64 {
    type Output = Vec3L;
    fn mul(self, v: Vec3L) -> Vec3L {
        v * self
    }
}

pub fn minkowski_inner(a: Vec3L, b: Vec3L) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Lorentzian cross product: the unique `c` with `<c, w> = det(a, b, w)`.
pub fn lorentz_cross(a: Vec3L, b: Vec3L) -> Vec3L {
    Vec3L::new(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.y * b.x - a.x * b.y,
    )
}

/// `det(a, b, c)` with the vectors as columns.
pub fn det3(a: Vec3L, b: Vec3L, c: Vec3L) -> f64 {
    a.x * (b.y * c.z - b.z * c.y) - b.x * (a.y * c.z - a.z * c.y) + c.x * (a.y * b.z - a.z * b.y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Causal {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Scale-aware lightlike threshold `1e-10 (1 + |v|^2)`.
pub fn default_tol(v: Vec3L) -> f64 {
    1e-10 * (1.0 + v.euclid_norm_sqr())
}

pub fn causal_character(v: Vec3L, tol: f64) -> Causal {
    let q = v.norm_sqr();
    if q > tol {
        Causal::Spacelike
    } else if q < -tol {
        Causal::Timelike
    } else {
        Causal::Lightlike
    }
}

/// `v / sqrt(|<v,v>|)`, using the default tolerance.
pub fn unit_normalize(v: Vec3L) -> Result<Vec3L> {
    unit_normalize_tol(v, default_tol(v))
}

pub fn unit_normalize_tol(v: Vec3L, tol: f64) -> Result<Vec3L> {
    let q = v.norm_sqr();
    if q.abs() <= tol {
        return Err(Error::LightlikeVector(q));
    }
    Ok(v * (1.0 / q.abs().sqrt()))
}

const BASIS_TOL: f64 = 1e-10;

/// Lorentz-orthonormal frame adapted to a timelike plane: `b1` is the unit
/// spacelike normal, `b2` spacelike and `b3` timelike span the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelikePlane {
    b1: Vec3L,
    b2: Vec3L,
    b3: Vec3L,
}

impl TimelikePlane {
    pub fn new(b1: Vec3L, b2: Vec3L, b3: Vec3L) -> Result<Self> {
        let checks = [
            ("<b1,b1> = 1", b1.norm_sqr() - 1.0),
            ("<b2,b2> = 1", b2.norm_sqr() - 1.0),
            ("<b3,b3> = -1", b3.norm_sqr() + 1.0),
            ("<b1,b2> = 0", b1.dot(b2)),
            ("<b1,b3> = 0", b1.dot(b3)),
            ("<b2,b3> = 0", b2.dot(b3)),
        ];
        for (name, defect) in checks {
            if !(defect.abs() <= BASIS_TOL) {
                return Err(Error::InvalidBasis(format!("{name} fails by {defect:e}")));
            }
        }
        Ok(Self { b1, b2, b3 })
    }

    /// The coordinate y–z plane with `b1 = e1`.
    pub fn yz() -> Self {
        Self {
            b1: Vec3L::E1,
            b2: Vec3L::E2,
            b3: Vec3L::E3,
        }
    }

    /// Frame with normal `b1 = (cosh β cos θ, cosh β sin θ, sinh β)`.
    pub fn from_angles(boost: f64, rotation: f64) -> Self {
        let (s, c) = rotation.sin_cos();
        let (sh, ch) = (boost.sinh(), boost.cosh());
        Self {
            b1: Vec3L::new(ch * c, ch * s, sh),
            b2: Vec3L::new(-s, c, 0.0),
            b3: Vec3L::new(sh * c, sh * s, ch),
        }
    }

    pub fn b1(&self) -> Vec3L {
        self.b1
    }
    pub fn b2(&self) -> Vec3L {
        self.b2
    }
    pub fn b3(&self) -> Vec3L {
        self.b3
    }

    /// Plane coordinates `(x2, x3)` and height `psi` with
    /// `X = x2 b2 + x3 b3 + psi b1`.
    pub fn coordinates(&self, x: Vec3L) -> (f64, f64, f64) {
        (x.dot(self.b2), -x.dot(self.b3), x.dot(self.b1))
    }

    pub fn reconstruct(&self, x2: f64, x3: f64, psi: f64) -> Vec3L {
        self.b2 * x2 + self.b3 * x3 + self.b1 * psi
    }
}
