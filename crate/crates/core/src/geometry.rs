//! Parameter-space geometry: which dimensions are linear, circular, or part
//! of a sphere, plus the two maneuvers the sampler relies on: wrapping a
//! scalar onto a circle and moving between spherical angles and Cartesian
//! directions.

use alloc::vec::Vec;

use crate::math::{PI, TAU};
use crate::{Error, Result};

/// Geometry of a single coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimensionKind {
    /// Plain interval; proposals are not wrapped.
    Linear { lo: f64, hi: f64 },
    /// `lo` and `hi` are the same physical point.
    Circular { lo: f64, hi: f64 },
    /// Azimuth φ ∈ [0, 2π) of a sphere whose zenith lives at `partner`.
    SphereAzimuth { partner: usize },
    /// Zenith θ ∈ [0, π] of a sphere whose azimuth lives at `partner`.
    SphereZenith { partner: usize },
}

impl DimensionKind {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            DimensionKind::Linear { lo, hi } | DimensionKind::Circular { lo, hi } => (lo, hi),
            DimensionKind::SphereAzimuth { .. } => (0.0, TAU),
            DimensionKind::SphereZenith { .. } => (0.0, PI),
        }
    }

    pub fn width(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    pub fn is_sphere(&self) -> bool {
        matches!(
            self,
            DimensionKind::SphereAzimuth { .. } | DimensionKind::SphereZenith { .. }
        )
    }
}

/// Ordered list of dimension kinds with every sphere pair complete.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpace {
    dims: Vec<DimensionKind>,
}

impl ParameterSpace {
    pub fn new(dims: Vec<DimensionKind>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpace("at least one dimension is required"));
        }
        for (i, kind) in dims.iter().enumerate() {
            match *kind {
                DimensionKind::Linear { lo, hi } | DimensionKind::Circular { lo, hi } => {
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(Error::InvalidBounds { lo, hi });
                    }
                }
                DimensionKind::SphereAzimuth { partner } => {
                    if dims.get(partner) != Some(&DimensionKind::SphereZenith { partner: i }) {
                        return Err(Error::InvalidSpace(
                            "sphere azimuth without matching zenith",
                        ));
                    }
                }
                DimensionKind::SphereZenith { partner } => {
                    if dims.get(partner) != Some(&DimensionKind::SphereAzimuth { partner: i }) {
                        return Err(Error::InvalidSpace(
                            "sphere zenith without matching azimuth",
                        ));
                    }
                }
            }
        }
        Ok(Self { dims })
    }

    /// `n` circular dimensions on `[lo, hi)`.
    pub fn circular(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![DimensionKind::Circular { lo, hi }; n])
    }

    /// `m` spheres laid out as `φ₁, θ₁, …, φ_m, θ_m`.
    pub fn spheres(m: usize) -> Result<Self> {
        let dims = (0..m)
            .flat_map(|j| {
                [
                    DimensionKind::SphereAzimuth { partner: 2 * j + 1 },
                    DimensionKind::SphereZenith { partner: 2 * j },
                ]
            })
            .collect();
        Self::new(dims)
    }

    pub fn dims(&self) -> &[DimensionKind] {
        &self.dims
    }

    /// Total dimension count `N`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `(azimuth index, zenith index)` for every sphere.
    pub fn sphere_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dims.iter().enumerate().filter_map(|(i, d)| match *d {
            DimensionKind::SphereAzimuth { partner } => Some((i, partner)),
            _ => None,
        })
    }

    /// Whether `theta` lies in the sampling domain.
    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.dims.len()
            && self.dims.iter().zip(theta).all(|(d, &x)| {
                let (lo, hi) = d.bounds();
                match d {
                    DimensionKind::Circular { .. } | DimensionKind::SphereAzimuth { .. } => {
                        lo <= x && x < hi
                    }
                    _ => lo <= x && x <= hi,
                }
            })
    }
}

/// Direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVector3 {
    /// Normalizes `v`; the zero vector has no direction.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let r = norm3(v);
        if r == 0.0 || !r.is_finite() {
            return Err(Error::DegeneratePoint);
        }
        Ok(Self {
            x: v[0] / r,
            y: v[1] / r,
            z: v[2] / r,
        })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: [f64; 3]) -> f64 {
        self.x * other[0] + self.y * other[1] + self.z * other[2]
    }

    /// Angle between two directions, accurate for small and large angles.
    pub fn angle_to(self, other: UnitVector3) -> f64 {
        let c = [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ];
        libm::atan2(norm3(c), self.dot(other.to_array()))
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    libm::hypot(libm::hypot(v[0], v[1]), v[2])
}

/// Maps `value` onto the circle `[lo, hi)` by translation, so that
/// `wrap(lo - d) == hi - d`. Values already in range come back unchanged.
///
/// Note this is translation, not reflection: an overshoot `hi + d` lands at
/// `lo + d`, never at `hi - d`.
pub fn wrap(value: f64, lo: f64, hi: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Domain {
            what: "wrapped value",
            value,
        });
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidBounds { lo, hi });
    }
    if lo <= value && value < hi {
        return Ok(value);
    }
    let width = hi - lo;
    let v = value - width * libm::floor((value - lo) / width);
    // rounding can land exactly on `hi` (e.g. lo - 1e-17), or a hair below lo
    if v >= hi || v < lo {
        Ok(lo)
    } else {
        Ok(v)
    }
}

/// Shortest distance between two points on the circle `[lo, hi)`.
pub fn circular_distance(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    let d = libm::fmod(libm::fabs(a - b), width);
    d.min(width - d)
}

/// `(φ, θ) ↦ (cos φ sin θ, sin φ sin θ, cos θ)`. Total on all finite input.
pub fn sph_to_cart(phi: f64, theta: f64) -> UnitVector3 {
    let (sp, cp) = (libm::sin(phi), libm::cos(phi));
    let (st, ct) = (libm::sin(theta), libm::cos(theta));
    UnitVector3 {
        x: cp * st,
        y: sp * st,
        z: ct,
    }
}

/// Inverse of [`sph_to_cart`] for any nonzero vector. The radius is
/// discarded, which projects the point onto the unit sphere.
///
/// Returns `φ ∈ [0, 2π)` and `θ ∈ [0, π]`. On the polar axis (`x = y = 0`)
/// `φ` is 0.
pub fn cart_to_sph(v: [f64; 3]) -> Result<(f64, f64)> {
    let [x, y, z] = v;
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::DegeneratePoint);
    }
    let rho = libm::hypot(x, y);
    if rho == 0.0 {
        return match z {
            z if z > 0.0 => Ok((0.0, 0.0)),
            z if z < 0.0 => Ok((0.0, PI)),
            _ => Err(Error::DegeneratePoint),
        };
    }
    let theta = libm::atan2(rho, z);
    let mut phi = libm::atan2(y, x);
    if phi < 0.0 {
        phi += TAU;
    }
    if phi >= TAU {
        phi = 0.0;
    }
    Ok((phi, theta))
}
