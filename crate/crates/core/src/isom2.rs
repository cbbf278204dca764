//! Orientation-preserving isometries of the hyperbolic plane.
//!
//! Elements are stored as real 2×2 matrices of determinant one, acting on the
//! upper half-plane by Möbius transformations `z ↦ (az + b) / (cz + d)`. The
//! group is `SL(2,R) / {±I}`, so every element is kept in a canonical sign
//! (the first nonzero entry in row-major order is positive).
//!
//! The boundary circle is parametrised by the direction angle of lines
//! through the origin of `R²`, which has period `π`. The linear action of a
//! matrix on directions is the boundary action of the isometry, and
//! [`CircleLift`] is its lift to a monotone map of the real line.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance on `|trace| - 2` used by [`IsometryElement::classify`].
pub const DEFAULT_CLASSIFY_TOLERANCE: f64 = 1e-9;

/// Default max-entry distance under which an element counts as the identity.
pub const DEFAULT_IDENTITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsomError {
    #[error("matrix entries must be finite")]
    NotFinite,
    #[error(
        "determinant {0} is not positive; only orientation-preserving isometries are supported"
    )]
    NonPositiveDeterminant(f64),
    #[error("the identity fixes every boundary point")]
    IdentityHasAllPoints,
    #[error("cannot parse matrix literal: {0}")]
    Parse(String),
}

/// Numeric tolerances shared by classification and identity tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Width of the parabolic band around `|trace| = 2`.
    pub classify: f64,
    /// Max-entry distance to `±I` below which an element is the identity.
    pub identity: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            classify: DEFAULT_CLASSIFY_TOLERANCE,
            identity: DEFAULT_IDENTITY_TOLERANCE,
        }
    }
}

impl Tolerance {
    pub fn with_classify(classify: f64) -> Self {
        Self {
            classify,
            ..Self::default()
        }
    }
}

/// An element of `PSL(2,R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct IsometryElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// A point on the boundary of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
            }
            // Very large finite points are close to infinity on the circle.
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => 1.0 / x.abs() <= tol,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Coarse conjugacy type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IsometryTag {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for IsometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryTag::Identity => "Identity",
            IsometryTag::Elliptic => "Elliptic",
            IsometryTag::Parabolic => "Parabolic",
            IsometryTag::Hyperbolic => "Hyperbolic",
        };
        f.write_str(s)
    }
}

/// Classification of an isometry with its numeric invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    /// Counterclockwise rotation angle about the fixed point, in `(0, 2π)`.
    Elliptic {
        rotation_angle: f64,
    },
    /// `ambiguous` is set when `|trace|` is within the tolerance band of 2
    /// without being exactly 2.
    Parabolic {
        ambiguous: bool,
    },
    Hyperbolic {
        translation_length: f64,
    },
}

impl IsometryClass {
    pub fn tag(&self) -> IsometryTag {
        match self {
            IsometryClass::Identity => IsometryTag::Identity,
            IsometryClass::Elliptic { .. } => IsometryTag::Elliptic,
            IsometryClass::Parabolic { .. } => IsometryTag::Parabolic,
            IsometryClass::Hyperbolic { .. } => IsometryTag::Hyperbolic,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryClass::Hyperbolic { .. })
    }
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsometryClass::Identity => f.write_str("Identity"),
            IsometryClass::Elliptic { rotation_angle } => {
                write!(f, "Elliptic (rotation angle {rotation_angle:.12})")
            }
            IsometryClass::Parabolic { ambiguous: false } => f.write_str("Parabolic"),
            IsometryClass::Parabolic { ambiguous: true } => {
                f.write_str("Parabolic (tolerance-ambiguous)")
            }
            IsometryClass::Hyperbolic { translation_length } => {
                write!(
                    f,
                    "Hyperbolic (translation length {translation_length:.12})"
                )
            }
        }
    }
}

impl IsometryElement {
    /// Builds an element from matrix entries, dividing by `sqrt(det)` and
    /// fixing the sign.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsomError> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(IsomError::NotFinite);
        }
        let det = a * d - b * c;
        if !(det > 0.0) {
            return Err(IsomError::NonPositiveDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Self::canonical(a / s, b / s, c / s, d / s))
    }

    fn canonical(a: f64, b: f64, c: f64, d: f64) -> Self {
        let lead = [a, b, c, d].into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            Self {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `diag(λ, 1/λ)`, translation along the imaginary axis by `2 ln λ`.
    pub fn dilation(lambda: f64) -> Result<Self, IsomError> {
        Self::new(lambda, 0.0, 0.0, 1.0 / lambda)
    }

    /// The rotation matrix `(cos φ, -sin φ; sin φ, cos φ)`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::canonical(c, -s, s, c)
    }

    /// `z ↦ z + t`.
    pub fn parabolic(t: f64) -> Self {
        Self::canonical(1.0, t, 0.0, 1.0)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Matrix product `self · other`.
    ///
    /// Not renormalised: for large entries `ad - bc` cancels badly, and
    /// dividing by its square root would add error rather than remove it.
    pub fn compose(&self, other: &Self) -> Self {
        let p = self.mul_raw(other);
        Self::canonical(p.a, p.b, p.c, p.d)
    }

    /// Unnormalised product, for hot loops. The determinant drifts only at
    /// rounding level over short words.
    #[inline]
    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Trace of `self · other` without forming the product.
    #[inline]
    pub(crate) fn trace_of_product(&self, other: &Self) -> f64 {
        self.a * other.a + self.b * other.c + self.c * other.b + self.d * other.d
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.d, -self.b, -self.c, self.a)
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Self) -> Self {
        self.compose(other).compose(&self.inverse())
    }

    /// Max-entry distance from `±I`.
    pub fn identity_distance(&self) -> f64 {
        let plus = (self.a - 1.0)
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max((self.d - 1.0).abs());
        let minus = (self.a + 1.0)
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max((self.d + 1.0).abs());
        plus.min(minus)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.identity_distance() <= tol
    }

    /// Equality modulo `±I`, entrywise within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let e = self.entries();
        let f = other.entries();
        let same = e.iter().zip(f.iter()).all(|(x, y)| (x - y).abs() <= tol);
        let flipped = e.iter().zip(f.iter()).all(|(x, y)| (x + y).abs() <= tol);
        same || flipped
    }

    pub fn classify(&self) -> IsometryClass {
        self.classify_with(&Tolerance::default())
    }

    pub fn classify_with(&self, tol: &Tolerance) -> IsometryClass {
        if self.is_identity(tol.identity) {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if t > 2.0 + tol.classify {
            IsometryClass::Hyperbolic {
                translation_length: 2.0 * (t / 2.0).acosh(),
            }
        } else if t < 2.0 - tol.classify {
            IsometryClass::Elliptic {
                rotation_angle: self.rotation_angle(),
            }
        } else {
            IsometryClass::Parabolic {
                ambiguous: t != 2.0,
            }
        }
    }

    /// Tag only; cheaper than [`classify_with`](Self::classify_with).
    #[inline]
    pub fn tag_with(&self, tol: &Tolerance) -> IsometryTag {
        let t = self.trace().abs();
        if t > 2.0 + tol.classify {
            IsometryTag::Hyperbolic
        } else if self.is_identity(tol.identity) {
            IsometryTag::Identity
        } else if t < 2.0 - tol.classify {
            IsometryTag::Elliptic
        } else {
            IsometryTag::Parabolic
        }
    }

    /// Interior fixed point of an elliptic element.
    pub(crate) fn elliptic_fixed_point(&self) -> Option<(f64, f64)> {
        let t = self.trace();
        if t.abs() >= 2.0 || self.c == 0.0 {
            return None;
        }
        // c z² + (d - a) z - b = 0, take the root in the upper half-plane.
        let re = (self.a - self.d) / (2.0 * self.c);
        let im = ((4.0 - t * t).sqrt() / (2.0 * self.c)).abs();
        Some((re, im))
    }

    fn rotation_angle(&self) -> f64 {
        let Some((x, y)) = self.elliptic_fixed_point() else {
            return 0.0;
        };
        // Derivative at the fixed point is (cz + d)^-2.
        let arg = (self.c * y).atan2(self.c * x + self.d);
        (-2.0 * arg).rem_euclid(2.0 * PI)
    }

    /// Boundary fixed points: roots of `c x² + (d - a) x - b = 0`, plus
    /// infinity when `c` vanishes.
    pub fn fixed_points(&self) -> Result<Vec<BoundaryPoint>, IsomError> {
        self.fixed_points_with(&Tolerance::default())
    }

    pub fn fixed_points_with(&self, tol: &Tolerance) -> Result<Vec<BoundaryPoint>, IsomError> {
        match self.classify_with(tol) {
            IsometryClass::Identity => Err(IsomError::IdentityHasAllPoints),
            IsometryClass::Elliptic { .. } => Ok(Vec::new()),
            IsometryClass::Parabolic { .. } => {
                if self.c.abs() <= tol.classify {
                    Ok(vec![BoundaryPoint::Infinity])
                } else {
                    Ok(vec![BoundaryPoint::Finite(
                        (self.a - self.d) / (2.0 * self.c),
                    )])
                }
            }
            IsometryClass::Hyperbolic { .. } => {
                let (a, b, c, d) = (self.a, self.b, self.c, self.d);
                if c.abs() <= tol.classify {
                    // z ↦ (az + b)/d: fixes ∞ and b/(d - a).
                    Ok(vec![
                        BoundaryPoint::Finite(b / (d - a)),
                        BoundaryPoint::Infinity,
                    ])
                } else {
                    let t = a + d;
                    let disc = (t * t - 4.0).max(0.0).sqrt();
                    let mut roots = [(a - d - disc) / (2.0 * c), (a - d + disc) / (2.0 * c)];
                    roots.sort_by(|x, y| x.total_cmp(y));
                    Ok(roots.into_iter().map(BoundaryPoint::Finite).collect())
                }
            }
        }
    }

    /// Möbius action on a point `x + iy` of the upper half-plane.
    pub fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        let (x, y) = z;
        // (a z + b) / (c z + d)
        let nr = self.a * x + self.b;
        let ni = self.a * y;
        let dr = self.c * x + self.d;
        let di = self.c * y;
        let den = dr * dr + di * di;
        ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }

    /// The canonical lift to the real line, with anchor in `[0, π)`.
    pub fn lift(&self) -> CircleLift {
        let anchor = direction_angle(self.a, self.c);
        CircleLift {
            base: *self,
            anchor,
        }
    }
}

impl Mul for IsometryElement {
    type Output = IsometryElement;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

impl<'a> Mul<&'a IsometryElement> for &'a IsometryElement {
    type Output = IsometryElement;
    fn mul(self, rhs: &'a IsometryElement) -> IsometryElement {
        self.compose(rhs)
    }
}

impl TryFrom<[f64; 4]> for IsometryElement {
    type Error = IsomError;
    fn try_from(e: [f64; 4]) -> Result<Self, IsomError> {
        Self::new(e[0], e[1], e[2], e[3])
    }
}

impl From<IsometryElement> for [f64; 4] {
    fn from(g: IsometryElement) -> Self {
        g.entries()
    }
}

/// Four whitespace-separated numbers in row-major order.
impl FromStr for IsometryElement {
    type Err = IsomError;
    fn from_str(s: &str) -> Result<Self, IsomError> {
        let nums = s
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| IsomError::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if nums.len() != 4 {
            return Err(IsomError::Parse(format!(
                "expected 4 numbers, found {}",
                nums.len()
            )));
        }
        Self::new(nums[0], nums[1], nums[2], nums[3])
    }
}

/// Writes 17 significant digits, enough to round-trip an `f64`.
impl fmt::Display for IsometryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.16e} {:.16e} {:.16e} {:.16e}",
            self.a, self.b, self.c, self.d
        )
    }
}

/// Direction of the vector `(x, y)` as an angle in `[0, π)`.
fn direction_angle(x: f64, y: f64) -> f64 {
    let t = y.atan2(x).rem_euclid(PI);
    // rem_euclid can round up to exactly π
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// A lift of the boundary action of an isometry to the real line.
///
/// The represented map `L` is continuous, strictly increasing, agrees with
/// the boundary action modulo `π`, and satisfies `L(θ + π) = L(θ) + π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleLift {
    base: IsometryElement,
    anchor: f64,
}

impl CircleLift {
    pub fn base(&self) -> &IsometryElement {
        &self.base
    }

    /// `L(0)`. In `[0, π)` for canonical lifts.
    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// The same boundary map composed with translation by `k·π`.
    pub fn shifted(&self, k: i64) -> CircleLift {
        CircleLift {
            base: self.base,
            anchor: self.anchor + k as f64 * PI,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let turns = (theta / PI).floor();
        let mut t0 = theta - turns * PI;
        if t0 >= PI {
            t0 -= PI;
        }
        let g = &self.base;
        // images of (1, 0) and (cos t0, sin t0)
        let (u0x, u0y) = (g.a, g.c);
        let (s, c) = t0.sin_cos();
        let (ux, uy) = (g.a * c + g.b * s, g.c * c + g.d * s);
        // cross product equals det · sin t0 = sin t0 ≥ 0, so the swept angle
        // lies in [0, π].
        let dot = u0x * ux + u0y * uy;
        let swept = s.atan2(dot);
        self.anchor + swept + turns * PI
    }

    /// The lift of the inverse isometry that is the inverse map of `self`.
    pub fn inverse(&self) -> CircleLift {
        let inv = self.base.inverse().lift();
        let v = inv.eval(self.anchor);
        let k = (v / PI).round() as i64;
        inv.shifted(-k)
    }
}
