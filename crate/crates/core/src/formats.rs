//! Plain-text file formats.
//!
//! All formats are line-based `key = value` documents. Blank lines and
//! anything after `#` are ignored.
//!
//! A representation file lists the genus and one matrix per generator:
//!
//! ```text
//! genus = 2
//! a1 = 1.5 0.5 0.5 0.8333333333333334
//! b1 = ...
//! ```
//!
//! The four numbers are `a b c d` in row-major order; commas, semicolons and
//! brackets are accepted as separators. Every name `a1 … ag, b1 … bg` must
//! appear exactly once, and the surface relation is checked on load.
//!
//! A homomorphism file gives both genera and the image of every source
//! generator as a word; an empty right-hand side is the identity:
//!
//! ```text
//! source_genus = 3
//! target_genus = 2
//! a1 = a1
//! b1 = b1
//! a2 = a2
//! b2 = b2
//! a3 =
//! b3 =
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::euler::{EulerError, RepresentationAssignment, RELATOR_TOLERANCE};
use crate::isom2::{IsomError, IsometryElement};
use crate::surfgrp::{GroupWord, HomError, Letter, SurfaceHom, SurfacePresentation, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("unexpected key `{0}`")]
    Unexpected(String),
    #[error("`{key}`: invalid integer {value:?}")]
    BadInteger { key: String, value: String },
    #[error("`{key}`: {source}")]
    Matrix { key: String, source: IsomError },
    #[error("`{key}`: {source}")]
    Word { key: String, source: WordError },
    #[error("expected exactly one matrix")]
    NotOneMatrix,
    #[error(transparent)]
    Representation(#[from] EulerError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

struct Entries {
    values: BTreeMap<String, String>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, FormatError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(FormatError::Syntax { line: i + 1 })?;
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(FormatError::Syntax { line: i + 1 });
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(FormatError::Duplicate { line: i + 1, key });
            }
        }
        Ok(Self { values })
    }

    fn take(&mut self, key: &str) -> Result<String, FormatError> {
        self.values
            .remove(key)
            .ok_or_else(|| FormatError::Missing(key.to_string()))
    }

    fn take_usize(&mut self, key: &str) -> Result<usize, FormatError> {
        let value = self.take(key)?;
        value.parse().map_err(|_| FormatError::BadInteger {
            key: key.to_string(),
            value,
        })
    }

    fn finish(self) -> Result<(), FormatError> {
        match self.values.into_keys().next() {
            Some(k) => Err(FormatError::Unexpected(k)),
            None => Ok(()),
        }
    }
}

fn parse_matrix_value(key: &str, value: &str) -> Result<IsometryElement, FormatError> {
    let cleaned: String = value
        .chars()
        .map(|c| {
            if matches!(c, ',' | ';' | '[' | ']') {
                ' '
            } else {
                c
            }
        })
        .collect();
    cleaned.parse().map_err(|source| FormatError::Matrix {
        key: key.to_string(),
        source,
    })
}

/// Parses a representation file, checking the relator at the default
/// tolerance.
pub fn parse_representation(text: &str) -> Result<RepresentationAssignment, FormatError> {
    parse_representation_with(text, RELATOR_TOLERANCE)
}

pub fn parse_representation_with(
    text: &str,
    relator_tolerance: f64,
) -> Result<RepresentationAssignment, FormatError> {
    let mut entries = Entries::parse(text)?;
    let genus = entries.take_usize("genus")?;
    let names = (0..2 * genus).map(Letter::generator_name);
    let images = names
        .map(|name| {
            let value = entries.take(&name)?;
            parse_matrix_value(&name, &value)
        })
        .collect::<Result<Vec<_>, _>>()?;
    entries.finish()?;
    Ok(RepresentationAssignment::with_relator_tolerance(
        genus,
        images,
        relator_tolerance,
    )?)
}

pub fn write_representation(rho: &RepresentationAssignment) -> String {
    let mut out = format!("genus = {}\n", rho.genus());
    for (i, g) in rho.images().iter().enumerate() {
        out.push_str(&format!("{} = {}\n", Letter::generator_name(i), g));
    }
    out
}

/// Parses a file holding one matrix, either bare or as `name = a b c d`.
pub fn parse_matrix(text: &str) -> Result<IsometryElement, FormatError> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let [line] = lines[..] else {
        return Err(FormatError::NotOneMatrix);
    };
    match line.split_once('=') {
        Some((k, v)) => parse_matrix_value(k.trim(), v),
        None => parse_matrix_value("matrix", line),
    }
}

/// Parses and validates a homomorphism file.
pub fn parse_hom(text: &str) -> Result<SurfaceHom, FormatError> {
    let f = parse_hom_unchecked(text)?;
    let v = f.validate();
    if !v.is_valid() {
        return Err(HomError::RelatorImageNontrivial { reduced: v.reduced }.into());
    }
    Ok(f)
}

/// Parses a homomorphism file, checking only genera and image letters.
pub fn parse_hom_unchecked(text: &str) -> Result<SurfaceHom, FormatError> {
    let mut entries = Entries::parse(text)?;
    let source_genus = entries.take_usize("source_genus")?;
    let target_genus = entries.take_usize("target_genus")?;
    let source = SurfacePresentation::new(source_genus).map_err(HomError::from)?;
    let target = SurfacePresentation::new(target_genus).map_err(HomError::from)?;
    let images = (0..2 * source_genus)
        .map(|i| {
            let key = Letter::generator_name(i);
            let value = entries.take(&key)?;
            GroupWord::parse_in(&value, target_genus)
                .map_err(|source| FormatError::Word { key, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    entries.finish()?;
    Ok(SurfaceHom::from_images(source, target, images)?)
}

pub fn write_hom(f: &SurfaceHom) -> String {
    let mut out = format!(
        "source_genus = {}\ntarget_genus = {}\n",
        f.source().genus(),
        f.target().genus()
    );
    for (i, w) in f.images().iter().enumerate() {
        let name = Letter::generator_name(i);
        if w.is_empty() {
            out.push_str(&format!("{name} =\n"));
        } else {
            out.push_str(&format!("{name} = {w}\n"));
        }
    }
    out
}
