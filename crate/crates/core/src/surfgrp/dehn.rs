//! Dehn's algorithm for the word problem in a surface group.
//!
//! For genus `g ≥ 2` the standard presentation is C'(1/7): distinct cyclic
//! rotations of the relator and its inverse share at most one letter. A
//! freely reduced word is trivial exactly when repeated replacement of
//! "more than half a relator" by the inverse of the remaining part reaches
//! the empty word.

use super::word::{GroupWord, Letter, SurfacePresentation};

/// Cyclic rotations of `r` and `r⁻¹`, indexed by their first letter.
#[derive(Debug, Clone)]
pub struct DehnRewriter {
    genus: usize,
    /// `by_first[col]` lists the rotations starting with letter `col`.
    by_first: Vec<Vec<Vec<Letter>>>,
}

impl DehnRewriter {
    pub fn new(p: &SurfacePresentation) -> Self {
        let r = p.relator();
        let n = r.len();
        let mut by_first = vec![Vec::new(); p.letter_count()];
        for base in [r.clone(), r.inverse()] {
            let l = base.letters();
            for shift in 0..n {
                let rot: Vec<Letter> = (0..n).map(|k| l[(shift + k) % n]).collect();
                by_first[rot[0].column()].push(rot);
            }
        }
        DehnRewriter {
            genus: p.genus(),
            by_first,
        }
    }

    /// Finds the first (position, rotation, match length) with a match
    /// longer than half the relator.
    fn find_long_piece<'a>(&'a self, w: &[Letter]) -> Option<(usize, &'a [Letter], usize)> {
        let half = 2 * self.genus;
        if w.len() <= half {
            return None;
        }
        for i in 0..w.len() - half {
            let Some(rots) = self.by_first.get(w[i].column()) else {
                continue;
            };
            for rot in rots {
                let m = w[i..]
                    .iter()
                    .zip(rot.iter())
                    .take_while(|(x, y)| x == y)
                    .count();
                if m > half {
                    return Some((i, rot, m));
                }
            }
        }
        None
    }

    pub fn reduce(&self, w: &GroupWord) -> GroupWord {
        let mut cur = w.clone();
        while let Some((i, rot, m)) = self.find_long_piece(cur.letters()) {
            let letters = cur.letters();
            let replacement = rot[m..].iter().rev().map(|l| l.inverse());
            let next = letters[..i]
                .iter()
                .copied()
                .chain(replacement)
                .chain(letters[i + m..].iter().copied());
            cur = GroupWord::from_letters(next);
        }
        cur
    }

    pub fn is_trivial(&self, w: &GroupWord) -> bool {
        self.reduce(w).is_empty()
    }

    /// Whether `w`, which must be freely reduced, is certainly nontrivial
    /// without running the rewriting loop.
    #[inline]
    pub(crate) fn short_nontrivial(&self, len: usize) -> bool {
        len > 0 && len <= 2 * self.genus
    }
}

/// Dehn reduction of `w` in the group presented by `p`.
///
/// The result is empty iff `w` is trivial in the surface group.
pub fn dehn_reduce(p: &SurfacePresentation, w: &GroupWord) -> GroupWord {
    DehnRewriter::new(p).reduce(w)
}
