use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dehn::DehnRewriter;
use super::word::{GroupWord, Letter, SurfacePresentation, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("need 2 <= kept genus < source genus, got source {source_genus}, kept {kept}")]
    BadGenusRange { source_genus: usize, kept: usize },
    #[error("expected {expected} generator images, got {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error("image of {generator} uses letters outside the genus-{target_genus} target")]
    ImageOutsideTarget {
        generator: String,
        target_genus: usize,
    },
    #[error("image of the relator reduces to the nontrivial word `{reduced}`")]
    RelatorImageNontrivial { reduced: GroupWord },
    #[error("homomorphism target has genus {found}, expected {expected}")]
    TargetMismatch { expected: usize, found: usize },
    #[error("cannot compose: inner target genus {inner} differs from outer source genus {outer}")]
    NotComposable { inner: usize, outer: usize },
    #[error("constructed homomorphism failed validation: {0}")]
    ConstructionInvalid(String),
}

/// A homomorphism of surface groups, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceHom {
    source: SurfacePresentation,
    target: SurfacePresentation,
    images: Vec<GroupWord>,
}

/// What [`SurfaceHom::validate`] found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomValidation {
    /// Image of the source relator after substitution and free reduction.
    pub relator_image: GroupWord,
    /// The same word after Dehn reduction; empty iff the map is well defined.
    pub reduced: GroupWord,
}

impl HomValidation {
    pub fn is_valid(&self) -> bool {
        self.reduced.is_empty()
    }
}

impl SurfaceHom {
    /// Builds and validates.
    pub fn new(
        source: SurfacePresentation,
        target: SurfacePresentation,
        images: Vec<GroupWord>,
    ) -> Result<Self, HomError> {
        let f = Self::from_images(source, target, images)?;
        let report = f.validate();
        if !report.is_valid() {
            return Err(HomError::RelatorImageNontrivial {
                reduced: report.reduced,
            });
        }
        Ok(f)
    }

    /// Structural checks only; the relator may map to something nontrivial.
    pub fn from_images(
        source: SurfacePresentation,
        target: SurfacePresentation,
        images: Vec<GroupWord>,
    ) -> Result<Self, HomError> {
        if images.len() != source.generator_count() {
            return Err(HomError::WrongImageCount {
                expected: source.generator_count(),
                found: images.len(),
            });
        }
        for (i, w) in images.iter().enumerate() {
            if !target.contains(w) {
                return Err(HomError::ImageOutsideTarget {
                    generator: Letter::generator_name(i),
                    target_genus: target.genus(),
                });
            }
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &SurfacePresentation) -> Self {
        let images = (0..p.generator_count())
            .map(|i| GroupWord::letter(Letter::new(i, false)))
            .collect();
        Self {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    pub fn source(&self) -> &SurfacePresentation {
        &self.source
    }

    pub fn target(&self) -> &SurfacePresentation {
        &self.target
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &GroupWord {
        &self.images[generator]
    }

    /// Checks that the source relator maps to the identity of the target.
    pub fn validate(&self) -> HomValidation {
        let relator_image = self.apply(&self.source.relator());
        let reduced = DehnRewriter::new(&self.target).reduce(&relator_image);
        HomValidation {
            relator_image,
            reduced,
        }
    }

    /// Substitution followed by free reduction.
    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        let letters = w.letters().iter().flat_map(|l| {
            let img = &self.images[l.generator()];
            let it: Box<dyn Iterator<Item = Letter>> = if l.is_inverse() {
                Box::new(img.letters().iter().rev().map(|x| x.inverse()))
            } else {
                Box::new(img.letters().iter().copied())
            };
            it
        });
        GroupWord::from_letters(letters)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SurfaceHom) -> Result<SurfaceHom, HomError> {
        if inner.target != self.source {
            return Err(HomError::NotComposable {
                inner: inner.target.genus(),
                outer: self.source.genus(),
            });
        }
        Ok(SurfaceHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|w| self.apply(w)).collect(),
        })
    }

    /// The subgroup generators of the image: nonempty generator images.
    pub fn image_generators(&self) -> Vec<GroupWord> {
        self.images
            .iter()
            .filter(|w| !w.is_empty())
            .cloned()
            .collect()
    }
}

/// The map collapsing handles `k+1, …, g` of a genus-`g` surface onto a
/// genus-`k` surface: `a_i, b_i ↦ a_i, b_i` for `i ≤ k`, and the identity
/// otherwise.
pub fn mk_pinch(source_genus: usize, kept: usize) -> Result<SurfaceHom, HomError> {
    if !(2 <= kept && kept < source_genus) {
        return Err(HomError::BadGenusRange { source_genus, kept });
    }
    let source = SurfacePresentation::new(source_genus)?;
    let target = SurfacePresentation::new(kept)?;
    let images = (0..2 * source_genus)
        .map(|i| {
            if i < 2 * kept {
                GroupWord::letter(Letter::new(i, false))
            } else {
                GroupWord::empty()
            }
        })
        .collect();
    SurfaceHom::new(source, target, images)
        .map_err(|e| HomError::ConstructionInvalid(e.to_string()))
}

/// Word of the loop through the slit used by [`mk_doubling`].
pub fn slit_word() -> GroupWord {
    GroupWord::letter(Letter::a(1))
}

/// The double of a genus-`g` surface along a slit, folded onto one copy:
/// a degree-2 map from genus `2g` with two branch points.
///
/// The first `g` handles map identically; handle `g + i` maps to the
/// conjugate of handle `i` by the slit word `c = a₁`.
pub fn mk_doubling(base_genus: usize) -> Result<SurfaceHom, HomError> {
    let target = SurfacePresentation::new(base_genus)?;
    let source = SurfacePresentation::new(2 * base_genus)?;
    let c = slit_word();
    let mut images = Vec::with_capacity(4 * base_genus);
    for i in 0..2 * base_genus {
        images.push(GroupWord::letter(Letter::new(i, false)));
    }
    for i in 0..2 * base_genus {
        images.push(c.conjugate(&GroupWord::letter(Letter::new(i, false))));
    }
    SurfaceHom::new(source, target, images)
        .map_err(|e| HomError::ConstructionInvalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    #[test]
    fn identity_and_pinch_are_valid() {
        let p = SurfacePresentation::new(3).unwrap();
        assert!(SurfaceHom::identity(&p).validate().is_valid());
        let f = mk_pinch(3, 2).unwrap();
        assert!(f.validate().is_valid());
        assert!(f.image(4).is_empty() && f.image(5).is_empty());
        assert_eq!(f.image(0), &w("a1"));
        assert!(mk_pinch(4, 2).unwrap().validate().is_valid());
    }

    #[test]
    fn pinch_genus_range() {
        assert!(matches!(
            mk_pinch(3, 3),
            Err(HomError::BadGenusRange { .. })
        ));
        assert!(matches!(
            mk_pinch(3, 1),
            Err(HomError::BadGenusRange { .. })
        ));
    }

    #[test]
    fn twist_is_a_valid_hom() {
        // a1 ↦ a1 b1 is a Dehn twist: [a1 b1, b1] = [a1, b1] after free
        // reduction, so the relator maps to itself.
        let p = SurfacePresentation::new(2).unwrap();
        let images = vec![w("a1 b1"), w("b1"), w("a2"), w("b2")];
        let f = SurfaceHom::from_images(p.clone(), p.clone(), images).unwrap();
        let report = f.validate();
        assert_eq!(report.relator_image, p.relator());
        assert!(report.is_valid());
    }

    #[test]
    fn invalid_hom_is_reported() {
        // a1 ↦ a1², everything else fixed (genus 2). By hand: the relator
        // image is a1 a1 b1 a1^-1 a1^-1 b1^-1 [a2,b2]; the trailing five
        // letters b1^-1 a2 b2 a2^-1 b2^-1 are more than half a rotation of
        // the relator and rewrite to a1 b1^-1 a1^-1, leaving
        // a1 a1 b1 a1^-1 b1^-1 a1^-1, which has no long piece.
        let p = SurfacePresentation::new(2).unwrap();
        let images = vec![w("a1 a1"), w("b1"), w("a2"), w("b2")];
        let f = SurfaceHom::from_images(p.clone(), p.clone(), images.clone()).unwrap();
        let report = f.validate();
        assert_eq!(
            report.relator_image,
            w("a1 a1 b1 a1^-1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")
        );
        assert_eq!(report.reduced, w("a1 a1 b1 a1^-1 b1^-1 a1^-1"));
        assert!(matches!(
            SurfaceHom::new(p.clone(), p, images),
            Err(HomError::RelatorImageNontrivial { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let p = SurfacePresentation::new(2).unwrap();
        let x = w("a1 b2^-1 a2");
        assert_eq!(SurfaceHom::identity(&p).apply(&x), x);
        let f = mk_pinch(3, 2).unwrap();
        assert!(f.apply(&w("a3")).is_empty());
        assert_eq!(f.apply(&w("a1 a3 b1^-1 b3^-1")), w("a1 b1^-1"));
        let d = mk_doubling(2).unwrap();
        assert_eq!(d.apply(&w("a1")), w("a1"));
        assert_eq!(d.apply(&w("a3")), w("a1"));
        assert_eq!(d.apply(&w("b3")), w("a1 b1 a1^-1"));
        assert_eq!(d.apply(&w("b3^-1")), w("a1 b1^-1 a1^-1"));
    }

    #[test]
    fn doubling_shape() {
        let d = mk_doubling(2).unwrap();
        assert_eq!(d.source().genus(), 4);
        assert_eq!(d.target().genus(), 2);
        assert!(d.validate().is_valid());
        let c = slit_word();
        for i in 0..4 {
            let gen = GroupWord::letter(Letter::new(i, false));
            assert_eq!(d.image(4 + i), &c.conjugate(&gen));
        }
        assert!(mk_doubling(3).unwrap().validate().is_valid());
    }

    #[test]
    fn compose_checks_genera() {
        let f = mk_pinch(3, 2).unwrap();
        let g = mk_pinch(4, 3).unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.source().genus(), 4);
        assert_eq!(fg.target().genus(), 2);
        assert!(fg.validate().is_valid());
        assert!(matches!(g.compose(&f), Err(HomError::NotComposable { .. })));
    }
}
