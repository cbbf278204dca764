use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("unknown generator token {0:?}")]
    BadToken(String),
    #[error("generator {token} does not exist in genus {genus}")]
    GeneratorOutOfRange { token: String, genus: usize },
}

/// A generator or its inverse.
///
/// Generators are numbered `a₁ = 0, b₁ = 1, a₂ = 2, b₂ = 3, …`. The column
/// index `2·gen + inv` orders letters as `a₁, a₁⁻¹, b₁, b₁⁻¹, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator * 2 + inverse as usize) as u16)
    }

    pub fn a(i: usize) -> Self {
        Letter::new(2 * (i - 1), false)
    }

    pub fn b(i: usize) -> Self {
        Letter::new(2 * (i - 1) + 1, false)
    }

    pub fn from_column(col: usize) -> Self {
        Letter(col as u16)
    }

    #[inline]
    pub fn column(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// `a1`, `b3`, …
    pub fn generator_name(generator: usize) -> String {
        let kind = if generator % 2 == 0 { 'a' } else { 'b' };
        format!("{kind}{}", generator / 2 + 1)
    }

    pub fn parse(token: &str) -> Result<Self, WordError> {
        let bad = || WordError::BadToken(token.to_string());
        let (name, inverse) = match token.split_once('^') {
            Some((n, "-1")) => (n, true),
            Some((n, "1")) => (n, false),
            Some(_) => return Err(bad()),
            None => (token, false),
        };
        let mut chars = name.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        let generator = match kind {
            'a' => 2 * (index - 1),
            'b' => 2 * (index - 1) + 1,
            _ => return Err(bad()),
        };
        Ok(Letter::new(generator, inverse))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Letter::generator_name(self.generator()))?;
        if self.is_inverse() {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A word in the surface-group generators.
///
/// Constructors free-reduce, so every `GroupWord` has no adjacent
/// letter–inverse pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    /// Wraps letters that are already freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        GroupWord(letters)
    }

    pub fn letter(l: Letter) -> Self {
        GroupWord(vec![l])
    }

    /// Parses `a1 b2^-1 …`; an empty or blank string is the identity.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        let letters = s
            .split_whitespace()
            .map(Letter::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupWord::from_letters(letters))
    }

    /// Parses and checks every generator exists in the given genus.
    pub fn parse_in(s: &str, genus: usize) -> Result<Self, WordError> {
        let w = GroupWord::parse(s)?;
        if let Some(l) = w.0.iter().find(|l| l.generator() >= 2 * genus) {
            return Err(WordError::GeneratorOutOfRange {
                token: l.to_string(),
                genus,
            });
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        GroupWord::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self · w · self⁻¹`
    pub fn conjugate(&self, w: &GroupWord) -> Self {
        self.concat(w).concat(&self.inverse())
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> Self {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }
}

/// Free reduction of a letter sequence (the [`GroupWord`] constructors do
/// this already; exposed for raw sequences).
pub fn free_reduce(letters: &[Letter]) -> GroupWord {
    GroupWord::from_letters(letters.iter().copied())
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<GroupWord> for String {
    fn from(w: GroupWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for GroupWord {
    type Error = WordError;
    fn try_from(s: String) -> Result<Self, WordError> {
        GroupWord::parse(&s)
    }
}

/// The standard one-relator presentation of a closed orientable surface
/// group of genus `g ≥ 2`: generators `a₁, b₁, …, a_g, b_g` and relator
/// `[a₁, b₁]⋯[a_g, b_g]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfacePresentation {
    genus: usize,
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self, WordError> {
        if genus < 2 {
            return Err(WordError::GenusTooSmall(genus));
        }
        Ok(SurfacePresentation { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    /// `4g`, the number of signed letters.
    pub fn letter_count(&self) -> usize {
        4 * self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.generator_count())
            .map(Letter::generator_name)
            .collect()
    }

    pub fn relator(&self) -> GroupWord {
        let mut letters = Vec::with_capacity(4 * self.genus);
        for i in 1..=self.genus {
            let (a, b) = (Letter::a(i), Letter::b(i));
            letters.extend([a, b, a.inverse(), b.inverse()]);
        }
        GroupWord::from_reduced(letters)
    }

    pub fn contains(&self, w: &GroupWord) -> bool {
        w.generator_bound() <= self.generator_count()
    }
}
