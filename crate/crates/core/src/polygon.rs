//! Regular hyperbolic `4g`-gons and their side pairings.
//!
//! Gluing the sides of a `4g`-gon with the labelling
//! `a₁ b₁ a₁⁻¹ b₁⁻¹ ⋯ a_g b_g a_g⁻¹ b_g⁻¹` gives a closed genus-`g` surface
//! in which all vertices become one point. If the polygon is hyperbolic and
//! regular with interior angles `Θ/(4g)`, that point is a cone point of angle
//! `Θ`, and the side pairings generate the holonomy. For `Θ = 2π` the
//! structure is complete; for `Θ = 2π(k+1)` it is branched with one cone
//! point of order `k`.
//!
//! The polygon is built in the Poincaré disk, centred at the origin, so that
//! regularity is exact by symmetry. Pairings are converted to the upper
//! half-plane through the Cayley transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::euler::{euler_number, EulerError, RepresentationAssignment};
use crate::isom2::IsometryElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolygonError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("total angle {theta} must lie in (0, {max}): the area (4g-2)π - Θ must be positive")]
    AngleOutOfRange { theta: f64, max: f64 },
    #[error(
        "total angle {theta} is not a multiple of 2π, so the gluing has no closed-surface holonomy"
    )]
    NotIntegerAngle { theta: f64 },
    #[error(transparent)]
    Euler(#[from] EulerError),
}

/// Tolerance for recognising `Θ ∈ 2πZ`.
const ANGLE_TOLERANCE: f64 = 1e-9;

/// Orientation-preserving isometry of the disk, `z ↦ (αz + β)/(γz + δ)`.
#[derive(Debug, Clone, Copy)]
struct DiskMap([Complex64; 4]);

impl DiskMap {
    /// `z ↦ (z + p)/(p̄ z + 1)`, sending 0 to `p`.
    fn translate_to(p: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        DiskMap([one, p, p.conj(), one])
    }

    fn rotate(alpha: f64) -> Self {
        let h = Complex64::from_polar(1.0, alpha / 2.0);
        DiskMap([
            h,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            h.conj(),
        ])
    }

    fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.0;
        (a * z + b) / (c * z + d)
    }

    fn compose(&self, o: &Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        DiskMap([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn inverse(&self) -> Self {
        let [a, b, c, d] = self.0;
        DiskMap([d, -b, -c, a])
    }

    /// The isometry taking the oriented segment `p → q` to `p2 → q2`
    /// (segments of equal length).
    fn segment_to_segment(p: Complex64, q: Complex64, p2: Complex64, q2: Complex64) -> Self {
        let from = Self::translate_to(p);
        let to = Self::translate_to(p2);
        let u = from.inverse().apply(q);
        let u2 = to.inverse().apply(q2);
        let alpha = u2.arg() - u.arg();
        to.compose(&Self::rotate(alpha)).compose(&from.inverse())
    }

    /// Conjugate by the Cayley transform `z ↦ (z - i)/(z + i)` to get the
    /// half-plane matrix.
    fn to_half_plane(&self) -> IsometryElement {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let cayley = DiskMap([one, -i, one, i]);
        let cayley_adj = DiskMap([i, i, -one, one]);
        let m = cayley_adj.compose(self).compose(&cayley);
        let [a, b, c, d] = m.0;
        let scale = (a * d - b * c).sqrt().inv();
        let [a, b, c, d] = [a * scale, b * scale, c * scale, d * scale];
        debug_assert!(
            [a, b, c, d]
                .iter()
                .all(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs())),
            "Cayley conjugate of a disk isometry must be real: {:?}",
            [a, b, c, d]
        );
        IsometryElement::new(a.re, b.re, c.re, d.re)
            .expect("disk isometries have positive determinant")
    }
}

fn disk_distance(a: Complex64, b: Complex64) -> f64 {
    let r = ((a - b) / (Complex64::new(1.0, 0.0) - a.conj() * b)).norm();
    2.0 * r.atanh()
}

/// A regular hyperbolic `4g`-gon with total vertex angle `Θ` and its side
/// pairings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegularPolygonStructure {
    genus: usize,
    total_angle: f64,
    circumradius: f64,
    /// Disk-model vertices, counterclockwise from angle 0.
    vertices: Vec<(f64, f64)>,
    /// Half-plane pairings in the order `a₁, b₁, …, a_g, b_g`.
    pairings: Vec<IsometryElement>,
}

/// Circumradius of the regular `4g`-gon with total vertex angle `Θ`, from the
/// right triangle with angles `π/(4g)` at the centre and `Θ/(8g)` at a vertex.
pub fn circumradius(genus: usize, total_angle: f64) -> Result<f64, PolygonError> {
    if genus < 2 {
        return Err(PolygonError::GenusTooSmall(genus));
    }
    let n = 4.0 * genus as f64;
    let max = (n - 2.0) * PI;
    if !(total_angle > 0.0 && total_angle < max) {
        return Err(PolygonError::AngleOutOfRange {
            theta: total_angle,
            max,
        });
    }
    let cosh_r = 1.0 / (PI / n).tan() / (total_angle / (2.0 * n)).tan();
    if !(cosh_r > 1.0) {
        return Err(PolygonError::AngleOutOfRange {
            theta: total_angle,
            max,
        });
    }
    Ok(cosh_r.acosh())
}

/// Builds the regular `4g`-gon with interior angles `Θ/(4g)`.
///
/// Side `i` joins vertices `i` and `i+1`. Generator `a_{j+1}` maps side
/// `4j+2` (labelled `a⁻¹`) onto side `4j`, and `b_{j+1}` maps side `4j+1`
/// (labelled `b`) onto side `4j+3`, each reversing the boundary
/// orientation. With these directions the images satisfy
/// `[a₁,b₁]⋯[a_g,b_g] = 1` in the order written.
pub fn build_regular(
    genus: usize,
    total_angle: f64,
) -> Result<RegularPolygonStructure, PolygonError> {
    let radius = circumradius(genus, total_angle)?;
    let n = 4 * genus;
    let r = (radius / 2.0).tanh();
    let verts: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(r, 2.0 * PI * i as f64 / n as f64))
        .collect();
    let v = |i: usize| verts[i % n];
    let mut pairings = Vec::with_capacity(2 * genus);
    for j in 0..genus {
        let s = 4 * j;
        // a: side s+2 traversed backwards onto side s
        let a = DiskMap::segment_to_segment(v(s + 3), v(s + 2), v(s), v(s + 1));
        // b: side s+1 traversed backwards onto side s+3
        let b = DiskMap::segment_to_segment(v(s + 2), v(s + 1), v(s + 3), v(s + 4));
        pairings.push(a.to_half_plane());
        pairings.push(b.to_half_plane());
    }
    Ok(RegularPolygonStructure {
        genus,
        total_angle,
        circumradius: radius,
        vertices: verts.iter().map(|z| (z.re, z.im)).collect(),
        pairings,
    })
}

/// `Θ = 2π·m`.
pub fn build_with_cone_multiple(
    genus: usize,
    m: u32,
) -> Result<RegularPolygonStructure, PolygonError> {
    build_regular(genus, 2.0 * PI * m as f64)
}

/// Outcome of an identity check on a polygon structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub detail: String,
}

impl RegularPolygonStructure {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn total_angle(&self) -> f64 {
        self.total_angle
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn pairings(&self) -> &[IsometryElement] {
        &self.pairings
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Hyperbolic area `(4g - 2)π - Θ`.
    pub fn area(&self) -> f64 {
        (4.0 * self.genus as f64 - 2.0) * PI - self.total_angle
    }

    /// The cone order `k` when `Θ = 2π(k + 1)`.
    pub fn cone_data(&self) -> Option<u32> {
        let m = self.total_angle / (2.0 * PI);
        let rounded = m.round();
        if (m - rounded).abs() <= ANGLE_TOLERANCE && rounded >= 1.0 {
            Some(rounded as u32 - 1)
        } else {
            None
        }
    }

    /// Interior angles recomputed from the vertex coordinates.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        let z = |i: usize| {
            let (x, y) = self.vertices[i % n];
            Complex64::new(x, y)
        };
        (0..n)
            .map(|i| {
                let to_origin = DiskMap::translate_to(z(i)).inverse();
                let prev = to_origin.apply(z(i + n - 1));
                let next = to_origin.apply(z(i + 1));
                (prev.arg() - next.arg()).rem_euclid(2.0 * PI)
            })
            .collect()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        let z = |i: usize| {
            let (x, y) = self.vertices[i % n];
            Complex64::new(x, y)
        };
        (0..n).map(|i| disk_distance(z(i), z(i + 1))).collect()
    }

    /// Vertices mapped to the upper half-plane, `w ↦ i(1 + w)/(1 - w)`.
    pub fn half_plane_vertices(&self) -> Vec<(f64, f64)> {
        self.vertices
            .iter()
            .map(|&(x, y)| {
                let w = Complex64::new(x, y);
                let z = Complex64::i() * (1.0 + w) / (1.0 - w);
                (z.re, z.im)
            })
            .collect()
    }

    /// The pairing generators as a representation. Needs `Θ ∈ 2πZ`.
    pub fn holonomy_assignment(&self) -> Result<RepresentationAssignment, PolygonError> {
        if self.cone_data().is_none() {
            return Err(PolygonError::NotIntegerAngle {
                theta: self.total_angle,
            });
        }
        Ok(RepresentationAssignment::new(
            self.genus,
            self.pairings.clone(),
        )?)
    }

    /// `χ + k < 0` and `area = -2π(χ + k)`.
    pub fn check_gauss_bonnet(&self) -> IdentityCheck {
        let chi = self.euler_characteristic() as f64;
        // Θ = 2π(k+1) with k real in general.
        let k = self.total_angle / (2.0 * PI) - 1.0;
        let expected = -2.0 * PI * (chi + k);
        let area = self.area();
        let holds = chi + k < 0.0 && (area - expected).abs() <= 1e-9;
        IdentityCheck {
            holds,
            detail: format!(
                "chi + k = {}, area = {area}, -2π(chi + k) = {expected}",
                chi + k
            ),
        }
    }

    /// `|eu(holonomy)| = |χ + k|`.
    pub fn check_euler_identity(&self) -> IdentityCheck {
        let Some(k) = self.cone_data() else {
            return IdentityCheck {
                holds: false,
                detail: "total angle is not a multiple of 2π".into(),
            };
        };
        let expected = (self.euler_characteristic() + k as i64).abs();
        match self
            .holonomy_assignment()
            .and_then(|rho| Ok(euler_number(&rho)?))
        {
            Ok(eu) => IdentityCheck {
                holds: eu.value.abs() == expected,
                detail: format!("eu = {} (raw {}), |chi + k| = {expected}", eu.value, eu.raw),
            },
            Err(e) => IdentityCheck {
                holds: false,
                detail: e.to_string(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isom2::IsometryTag;

    #[test]
    fn octagon_areas_and_cone_orders() {
        let o = build_regular(2, 2.0 * PI).unwrap();
        assert!((o.area() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(o.cone_data(), Some(0));
        let r = build_regular(2, 4.0 * PI).unwrap();
        assert!((r.area() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(r.cone_data(), Some(1));
        let t = build_regular(3, 2.0 * PI).unwrap();
        assert!((t.area() - 8.0 * PI).abs() < 1e-12);
        assert_eq!(t.cone_data(), Some(0));
        assert_eq!(build_regular(2, 3.0 * PI).unwrap().cone_data(), None);
    }

    #[test]
    fn angle_range() {
        assert!(matches!(
            build_regular(2, 6.0 * PI),
            Err(PolygonError::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            build_regular(2, 0.0),
            Err(PolygonError::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            build_regular(1, PI),
            Err(PolygonError::GenusTooSmall(1))
        ));
        assert!(build_regular(2, 6.0 * PI - 1e-6).is_ok());
    }

    #[test]
    fn right_angled_octagon_radius() {
        let o = build_regular(2, 4.0 * PI).unwrap();
        let cot_pi_8 = 1.0 / (PI / 8.0).tan();
        assert!((o.circumradius().cosh() - cot_pi_8).abs() < 1e-12);
        assert!((o.circumradius().cosh() - 2.414214).abs() < 1e-6);
        assert!((o.circumradius() - 1.528571).abs() < 1e-6);
        for a in o.interior_angles() {
            assert!((a - PI / 2.0).abs() < 1e-9, "{a}");
        }
    }

    #[test]
    fn angles_and_sides_are_regular() {
        for (g, theta) in [
            (2, 2.0 * PI),
            (2, 4.0 * PI),
            (3, 2.0 * PI),
            (3, 5.5),
            (4, 6.0 * PI),
        ] {
            let p = build_regular(g, theta).unwrap();
            for a in p.interior_angles() {
                assert!((a - theta / (4.0 * g as f64)).abs() < 1e-9);
            }
            let sides = p.side_lengths();
            for s in &sides {
                assert!((s - sides[0]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pairings_match_sides() {
        for (g, theta) in [(2, 2.0 * PI), (2, 4.0 * PI), (3, 2.0 * PI), (3, 3.3)] {
            let p = build_regular(g, theta).unwrap();
            let v = p.half_plane_vertices();
            let n = v.len();
            let close = |x: (f64, f64), y: (f64, f64)| {
                ((x.0 - y.0).powi(2) + (x.1 - y.1).powi(2)).sqrt() < 1e-9 * (1.0 + x.0.abs() + x.1)
            };
            for j in 0..g {
                let s = 4 * j;
                let a = p.pairings()[2 * j];
                let b = p.pairings()[2 * j + 1];
                assert!(close(a.apply(v[(s + 3) % n]), v[s]));
                assert!(close(a.apply(v[(s + 2) % n]), v[s + 1]));
                assert!(close(b.apply(v[s + 1]), v[(s + 4) % n]));
                assert!(close(b.apply(v[s + 2]), v[s + 3]));
            }
        }
    }

    #[test]
    fn relator_holds_for_integer_angles() {
        for (g, m) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 1), (4, 5)] {
            let p = build_with_cone_multiple(g, m).unwrap();
            let rho = p.holonomy_assignment().unwrap();
            assert!(rho.relator_defect() < 1e-9);
        }
        assert!(matches!(
            build_regular(2, 3.0 * PI).unwrap().holonomy_assignment(),
            Err(PolygonError::NotIntegerAngle { .. })
        ));
    }

    #[test]
    fn pairings_are_hyperbolic() {
        for m in [1, 2] {
            let p = build_with_cone_multiple(2, m).unwrap();
            for g in p.pairings() {
                assert_eq!(g.classify().tag(), IsometryTag::Hyperbolic);
            }
        }
    }

    #[test]
    fn gauss_bonnet_and_euler_identities() {
        for (g, m) in [(2, 1), (2, 2), (3, 1), (3, 3)] {
            let p = build_with_cone_multiple(g, m).unwrap();
            assert!(p.check_gauss_bonnet().holds);
            let e = p.check_euler_identity();
            assert!(e.holds, "{}", e.detail);
        }
    }

    #[test]
    fn radius_decreases_with_angle() {
        for g in 2..5 {
            let max = (4.0 * g as f64 - 2.0) * PI;
            let radii: Vec<f64> = (1..=50)
                .map(|i| circumradius(g, max * i as f64 / 51.0).unwrap())
                .collect();
            assert!(radii.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
