//! Euler numbers of surface-group representations.
//!
//! For generator images `A₁, B₁, …, A_g, B_g` satisfying the surface
//! relation, pick any lifts `Ã_i, B̃_i` of their boundary actions to the
//! real line. The product of commutators `[Ã₁, B̃₁]⋯[Ã_g, B̃_g]` lifts the
//! identity, so it is a translation by `n·π` with `n` independent of the
//! lifts chosen. That integer is the Euler number of the flat circle bundle.
//!
//! Sign convention: the polygon side pairings built by
//! [`crate::polygon::build_regular`] are the orientation standard, and a
//! complete structure of genus `g` has Euler number `2 - 2g`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::isom2::{CircleLift, IsometryElement};
use crate::surfgrp::{GroupWord, HomError, Letter, SurfaceHom, SurfacePresentation};

/// Tolerance on the max-entry distance of the relator image from `±I`.
pub const RELATOR_TOLERANCE: f64 = 1e-6;

/// `|raw - value|` must stay below this, or the result is rejected.
pub const ROUNDING_THRESHOLD: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EulerError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("expected {expected} generator images, got {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error("relator image is {distance:e} away from the identity (tolerance {tolerance:e})")]
    RelatorViolated { distance: f64, tolerance: f64 },
    #[error("rotation number {raw} is too far from an integer to round safely")]
    RoundingUnsafe { raw: f64 },
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Images `ρ(a₁), ρ(b₁), …, ρ(a_g), ρ(b_g)` of the standard generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationAssignment {
    genus: usize,
    images: Vec<IsometryElement>,
}

impl RepresentationAssignment {
    /// Validates the image count and the surface relation.
    pub fn new(genus: usize, images: Vec<IsometryElement>) -> Result<Self, EulerError> {
        Self::with_relator_tolerance(genus, images, RELATOR_TOLERANCE)
    }

    pub fn with_relator_tolerance(
        genus: usize,
        images: Vec<IsometryElement>,
        tolerance: f64,
    ) -> Result<Self, EulerError> {
        let rho = Self::new_unchecked(genus, images)?;
        let distance = rho.relator_defect();
        if !(distance <= tolerance) {
            return Err(EulerError::RelatorViolated {
                distance,
                tolerance,
            });
        }
        Ok(rho)
    }

    /// Checks only the shape, not the relation.
    pub fn new_unchecked(genus: usize, images: Vec<IsometryElement>) -> Result<Self, EulerError> {
        if genus < 2 {
            return Err(EulerError::GenusTooSmall(genus));
        }
        if images.len() != 2 * genus {
            return Err(EulerError::WrongImageCount {
                expected: 2 * genus,
                found: images.len(),
            });
        }
        Ok(Self { genus, images })
    }

    /// All generators sent to the identity.
    pub fn trivial(genus: usize) -> Result<Self, EulerError> {
        Self::new(genus, vec![IsometryElement::identity(); 2 * genus])
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn presentation(&self) -> SurfacePresentation {
        SurfacePresentation::new(self.genus).expect("genus checked at construction")
    }

    pub fn images(&self) -> &[IsometryElement] {
        &self.images
    }

    pub fn generator_image(&self, generator: usize) -> &IsometryElement {
        &self.images[generator]
    }

    /// Image of every signed letter, indexed by [`Letter::column`].
    pub fn letter_images(&self) -> Vec<IsometryElement> {
        self.images.iter().flat_map(|g| [*g, g.inverse()]).collect()
    }

    pub fn letter_image(&self, l: Letter) -> IsometryElement {
        let g = self.images[l.generator()];
        if l.is_inverse() {
            g.inverse()
        } else {
            g
        }
    }

    pub fn eval(&self, w: &GroupWord) -> IsometryElement {
        w.letters()
            .iter()
            .fold(IsometryElement::identity(), |acc, l| {
                acc.compose(&self.letter_image(*l))
            })
    }

    /// Max-entry distance of `ρ([a₁,b₁]⋯[a_g,b_g])` from `±I`.
    pub fn relator_defect(&self) -> f64 {
        self.eval(&self.presentation().relator())
            .identity_distance()
    }

    /// `h ρ h⁻¹`.
    pub fn conjugate_by(&self, h: &IsometryElement) -> Self {
        Self {
            genus: self.genus,
            images: self.images.iter().map(|g| h.conjugate(g)).collect(),
        }
    }

    /// `ρ ∘ f_*` for a homomorphism into this representation's group.
    pub fn pull_back(&self, f: &SurfaceHom) -> Result<Self, EulerError> {
        if f.target().genus() != self.genus {
            return Err(HomError::TargetMismatch {
                expected: self.genus,
                found: f.target().genus(),
            }
            .into());
        }
        let images = f.images().iter().map(|w| self.eval(w)).collect();
        Self::new(f.source().genus(), images)
    }
}

/// Outcome of an Euler number computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerResult {
    pub value: i64,
    /// Translation of the lifted relator divided by `π`, before rounding.
    pub raw: f64,
    /// Largest `|raw' - raw|` over the validation conjugates.
    pub conjugation_spread: f64,
}

/// Product of lifted commutators evaluated at 0, divided by `π`.
///
/// `lifts` holds one lift per generator; the result does not depend on the
/// choice.
fn lifted_relator_translation(lifts: &[CircleLift]) -> f64 {
    let inverses: Vec<CircleLift> = lifts.iter().map(|l| l.inverse()).collect();
    let mut x = 0.0;
    // [A₁,B₁]⋯[A_g,B_g] acts right to left.
    for pair in (0..lifts.len() / 2).rev() {
        let (a, b) = (2 * pair, 2 * pair + 1);
        x = inverses[b].eval(x);
        x = inverses[a].eval(x);
        x = lifts[b].eval(x);
        x = lifts[a].eval(x);
    }
    x / PI
}

fn raw_with_shifts(rho: &RepresentationAssignment, shifts: &[i64]) -> f64 {
    let lifts: Vec<CircleLift> = rho
        .images
        .iter()
        .enumerate()
        .map(|(i, g)| g.lift().shifted(shifts.get(i).copied().unwrap_or(0)))
        .collect();
    lifted_relator_translation(&lifts)
}

fn validation_conjugators() -> [IsometryElement; 3] {
    [
        IsometryElement::rotation(0.7),
        IsometryElement::new(1.3, 0.4, -0.2, 0.7).expect("positive determinant"),
        IsometryElement::parabolic(-0.9),
    ]
}

fn round_checked(raw: f64) -> Result<i64, EulerError> {
    let value = raw.round();
    if !((raw - value).abs() < ROUNDING_THRESHOLD) {
        return Err(EulerError::RoundingUnsafe { raw });
    }
    Ok(value as i64)
}

/// Euler number of `ρ`.
pub fn euler_number(rho: &RepresentationAssignment) -> Result<EulerResult, EulerError> {
    euler_number_with_anchor_shifts(rho, &[])
}

/// Same as [`euler_number`], but lifts generator `i` with anchor shifted by
/// `shifts[i]·π`.
pub fn euler_number_with_anchor_shifts(
    rho: &RepresentationAssignment,
    shifts: &[i64],
) -> Result<EulerResult, EulerError> {
    let distance = rho.relator_defect();
    if !(distance <= RELATOR_TOLERANCE) {
        return Err(EulerError::RelatorViolated {
            distance,
            tolerance: RELATOR_TOLERANCE,
        });
    }
    let raw = raw_with_shifts(rho, shifts);
    let value = round_checked(raw)?;
    let mut spread: f64 = 0.0;
    for h in validation_conjugators() {
        let r = raw_with_shifts(&rho.conjugate_by(&h), shifts);
        if round_checked(r)? != value {
            return Err(EulerError::RoundingUnsafe { raw: r });
        }
        spread = spread.max((r - raw).abs());
    }
    Ok(EulerResult {
        value,
        raw,
        conjugation_spread: spread,
    })
}

/// Euler number of `ρ₀ ∘ f_*`.
pub fn euler_of_pullback(
    base: &RepresentationAssignment,
    f: &SurfaceHom,
) -> Result<EulerResult, EulerError> {
    euler_number(&base.pull_back(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation_has_zero_euler_number() {
        for g in 2..5 {
            let r = euler_number(&RepresentationAssignment::trivial(g).unwrap()).unwrap();
            assert_eq!(r.value, 0);
            assert!(r.raw.abs() < 1e-12);
        }
    }

    #[test]
    fn abelian_representation_has_zero_euler_number() {
        let d2 = IsometryElement::dilation(2.0).unwrap();
        let d4 = IsometryElement::dilation(4.0).unwrap();
        let id = IsometryElement::identity();
        let rho = RepresentationAssignment::new(2, vec![d2, d4, id, id]).unwrap();
        assert_eq!(euler_number(&rho).unwrap().value, 0);
    }

    #[test]
    fn rejects_relator_violation() {
        let d2 = IsometryElement::dilation(2.0).unwrap();
        let r = IsometryElement::rotation(0.5);
        let id = IsometryElement::identity();
        assert!(matches!(
            RepresentationAssignment::new(2, vec![d2, r, id, id]),
            Err(EulerError::RelatorViolated { .. })
        ));
        let bad = RepresentationAssignment::new_unchecked(2, vec![d2, r, id, id]).unwrap();
        assert!(matches!(
            euler_number(&bad),
            Err(EulerError::RelatorViolated { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let id = IsometryElement::identity();
        assert_eq!(
            RepresentationAssignment::new(2, vec![id; 3]),
            Err(EulerError::WrongImageCount {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            RepresentationAssignment::new(1, vec![id; 2]),
            Err(EulerError::GenusTooSmall(1))
        );
    }

    #[test]
    fn rounding_guard() {
        assert!(round_checked(1.2).is_ok());
        assert!(matches!(
            round_checked(1.3),
            Err(EulerError::RoundingUnsafe { .. })
        ));
        assert!(round_checked(f64::NAN).is_err());
    }
}
