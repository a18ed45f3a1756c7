//! Quaternion scalars and the geometry of conjugacy spheres.
//!
//! A quaternion is written `a + b·i + c·j + d·k` with the usual relations
//! `i² = j² = k² = ijk = −1`.  The conjugacy class of `q` under nonzero
//! quaternionic similarity is the sphere `Re(q) + |Im(q)|·𝕊`, stored here as
//! an [`EigenSphere`] `(u, v)` with `v ≥ 0`.  All slice-plane work in this
//! crate happens in the fixed plane spanned by `1` and `i`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

// ── Quaternion ──────────────────────────────────────────────────────────────

/// A quaternion `a + b·i + c·j + d·k` with `f64` components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    /// Real part.
    pub a: f64,
    /// Coefficient of `i`.
    pub b: f64,
    /// Coefficient of `j`.
    pub c: f64,
    /// Coefficient of `k`.
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    /// Embeds a real number as `a + 0i + 0j + 0k`.
    #[inline]
    pub const fn from_real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    /// Embeds a slice-plane point `x + y·i` as `x + y·i + 0j + 0k`.
    #[inline]
    pub fn from_slice(z: Complex64) -> Self {
        Quaternion::new(z.re, z.im, 0.0, 0.0)
    }

    /// Real part `Re(q) = a`.
    #[inline]
    pub fn re(&self) -> f64 {
        self.a
    }

    /// Imaginary part `Im(q) = b·i + c·j + d·k` as a quaternion.
    #[inline]
    pub fn im(&self) -> Quaternion {
        Quaternion::new(0.0, self.b, self.c, self.d)
    }

    /// Conjugate `q̄ = a − b·i − c·j − d·k`.
    #[inline]
    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// Squared norm `a² + b² + c² + d²`.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Euclidean norm `|q| = √(q·q̄)`.
    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Magnitude of the imaginary part, `|Im(q)|`.
    #[inline]
    pub fn im_norm(&self) -> f64 {
        (self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    ///
    /// Fails with [`Error::ZeroDivisor`] when `q = 0`.
    pub fn inv(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(Quaternion::new(
            self.a / n2,
            -self.b / n2,
            -self.c / n2,
            -self.d / n2,
        ))
    }

    /// Scales every component by a real factor.
    #[inline]
    pub fn scale(&self, t: f64) -> Quaternion {
        Quaternion::new(self.a * t, self.b * t, self.c * t, self.d * t)
    }

    /// Splits `q = z₁ + z₂·j` into its slice-plane components
    /// `z₁ = a + b·i`, `z₂ = c + d·i`.
    #[inline]
    pub fn complex_parts(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.a, self.b),
            Complex64::new(self.c, self.d),
        )
    }

    /// Rebuilds `q = z₁ + z₂·j` from slice-plane components.
    #[inline]
    pub fn from_complex_parts(z1: Complex64, z2: Complex64) -> Self {
        Quaternion::new(z1.re, z1.im, z2.re, z2.im)
    }

    /// The conjugacy sphere `[q] = Re(q) + |Im(q)|·𝕊`.
    #[inline]
    pub fn sphere(&self) -> EigenSphere {
        EigenSphere {
            u: self.re(),
            v: self.im_norm(),
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a + rhs.a,
            self.b + rhs.b,
            self.c + rhs.c,
            self.d + rhs.d,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a - rhs.a,
            self.b - rhs.b,
            self.c - rhs.c,
            self.d - rhs.d,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product; `|p·q| = |p|·|q|`.
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, t: f64) -> Quaternion {
        self.scale(t)
    }
}

// ── Conjugacy spheres ───────────────────────────────────────────────────────

/// The conjugacy sphere `(u, v) = Re(q) + |Im(q)|·𝕊` of a quaternion, `v ≥ 0`.
///
/// A sphere with `v = 0` is a single real point; a sphere with `v > 0` is a
/// two-dimensional sphere of mutually conjugate quaternions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSphere {
    /// Real part shared by every point of the sphere.
    pub u: f64,
    /// Imaginary magnitude shared by every point, `v ≥ 0`.
    pub v: f64,
}

impl EigenSphere {
    /// Builds a sphere, rejecting negative imaginary magnitudes.
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if v < 0.0 {
            return Err(Error::NegativeRadius { v });
        }
        Ok(EigenSphere { u, v })
    }

    /// Canonical upper-half-plane representative `u + v·i` in the slice plane.
    #[inline]
    pub fn slice_rep(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// True for spheres that degenerate to a single real point.
    #[inline]
    pub fn is_real(&self) -> bool {
        self.v == 0.0
    }

    /// Distance of the sphere from the origin, `√(u² + v²)`.
    #[inline]
    pub fn radius_from_origin(&self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Spheres merge when both coordinates agree within `tol`.
    #[inline]
    pub fn approx_eq(&self, other: &EigenSphere, tol: f64) -> bool {
        (self.u - other.u).abs().max((self.v - other.v).abs()) <= tol
    }

    /// Membership test: `q ∈ (u,v)` iff `Re(q) = u` and `|Im(q)| = v`,
    /// each within `tol`.
    #[inline]
    pub fn contains(&self, q: &Quaternion, tol: f64) -> bool {
        (q.re() - self.u).abs() <= tol && (q.im_norm() - self.v).abs() <= tol
    }

    /// Slice-plane distance between the representative point sets of two
    /// spheres: min over the representative of `self` against `other` and
    /// its conjugate.
    pub fn slice_distance(&self, other: &EigenSphere) -> f64 {
        let a = self.slice_rep();
        let b = other.slice_rep();
        let d1 = (a - b).norm();
        let d2 = (a - b.conj()).norm();
        d1.min(d2)
    }
}

/// The conjugacy sphere of `q` — free-function form of [`Quaternion::sphere`].
#[inline]
pub fn sphere_of(q: Quaternion) -> EigenSphere {
    q.sphere()
}

/// Canonical slice-plane representative `u + v·i` of the sphere `(u, v)`.
///
/// Rejects `v < 0`.
pub fn slice_point(u: f64, v: f64) -> Result<Complex64> {
    if v < 0.0 {
        return Err(Error::NegativeRadius { v });
    }
    Ok(Complex64::new(u, v))
}

// ── Tests ───────────────────────────────────────────────────────────────────
