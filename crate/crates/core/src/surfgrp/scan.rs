//! Exhaustive scans over freely reduced words.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dehn::DehnRewriter;
use super::hom::{mk_pinch, SurfaceHom};
use super::word::{GroupWord, Letter, SurfacePresentation};
use crate::euler::RepresentationAssignment;
use crate::isom2::{BoundaryPoint, IsometryClass, IsometryElement, IsometryTag, Tolerance};

/// Identity tolerance for kernel witnesses: a word is a witness only if its
/// image is this close to `±I` and Dehn reduction says it is nontrivial.
pub const KERNEL_TOLERANCE: f64 = 1e-6;

/// At most this many entries are kept in each witness list of a
/// [`ScanReport`]; the counts are always exact.
pub const WITNESS_CAP: usize = 64;

/// All freely reduced words of length `≤ max_len` in length-lexicographic
/// order, letters ordered `a₁, a₁⁻¹, b₁, b₁⁻¹, …`.
pub fn enumerate_words(p: &SurfacePresentation, max_len: usize) -> WordEnumerator {
    WordEnumerator {
        letters: p.letter_count(),
        max_len,
        current: Some(Vec::new()),
    }
}

/// Number of freely reduced words of length exactly `len`.
pub fn reduced_word_count(p: &SurfacePresentation, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let n = p.letter_count() as u64;
    n * (n - 1).pow(len as u32 - 1)
}

/// Iterator returned by [`enumerate_words`].
#[derive(Debug, Clone)]
pub struct WordEnumerator {
    letters: usize,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl WordEnumerator {
    fn smallest_after(&self, prev: Option<usize>, from: usize) -> Option<usize> {
        (from..self.letters).find(|&c| prev.map_or(true, |p| c != p ^ 1))
    }

    fn fill_minimal(&self, w: &mut Vec<usize>, len: usize) {
        while w.len() < len {
            let prev = w.last().copied();
            let c = self
                .smallest_after(prev, 0)
                .expect("at least three letters available");
            w.push(c);
        }
    }

    fn successor(&self, mut w: Vec<usize>) -> Option<Vec<usize>> {
        let len = w.len();
        while let Some(last) = w.pop() {
            let prev = w.last().copied();
            if let Some(c) = self.smallest_after(prev, last + 1) {
                w.push(c);
                self.fill_minimal(&mut w, len);
                return Some(w);
            }
        }
        if len + 1 > self.max_len {
            return None;
        }
        self.fill_minimal(&mut w, len + 1);
        Some(w)
    }
}

impl Iterator for WordEnumerator {
    type Item = GroupWord;

    fn next(&mut self) -> Option<GroupWord> {
        let cur = self.current.take()?;
        let word = GroupWord::from_reduced(cur.iter().map(|&c| Letter::from_column(c)).collect());
        self.current = self.successor(cur);
        Some(word)
    }
}

/// One classified word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanHit {
    pub word: GroupWord,
    pub class: IsometryClass,
    pub trace: f64,
}

impl fmt::Display for ScanHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] -> {} (trace {:.12})",
            self.word, self.class, self.trace
        )
    }
}

/// Counts of word images by class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub identity: u64,
    pub elliptic: u64,
    pub parabolic: u64,
    pub hyperbolic: u64,
}

impl ClassCounts {
    fn add(&mut self, tag: IsometryTag) {
        match tag {
            IsometryTag::Identity => self.identity += 1,
            IsometryTag::Elliptic => self.elliptic += 1,
            IsometryTag::Parabolic => self.parabolic += 1,
            IsometryTag::Hyperbolic => self.hyperbolic += 1,
        }
    }

    fn merge(&mut self, other: &ClassCounts) {
        self.identity += other.identity;
        self.elliptic += other.elliptic;
        self.parabolic += other.parabolic;
        self.hyperbolic += other.hyperbolic;
    }

    pub fn total(&self) -> u64 {
        self.identity + self.elliptic + self.parabolic + self.hyperbolic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub max_len: usize,
    pub tolerance: Tolerance,
    /// Stop after the first word length that produced a non-hyperbolic,
    /// non-identity image.
    pub stop_at_first_non_hyperbolic: bool,
}

impl ScanOptions {
    pub fn new(max_len: usize) -> Self {
        Self {
            max_len,
            tolerance: Tolerance::default(),
            stop_at_first_non_hyperbolic: false,
        }
    }

    pub fn stopping_early(mut self) -> Self {
        self.stop_at_first_non_hyperbolic = true;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// Result of [`scan_classification`].
///
/// Non-hyperbolic hits exclude tolerance-ambiguous parabolics, which are
/// listed in `ambiguous` instead; both count as "not hyperbolic" for
/// [`ScanReport::first_non_hyperbolic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    /// Longest word length actually scanned.
    pub max_len: usize,
    pub completed: bool,
    /// Counts over all nonempty words scanned.
    pub counts: ClassCounts,
    pub first_non_hyperbolic: Option<ScanHit>,
    pub non_hyperbolic: Vec<ScanHit>,
    pub non_hyperbolic_count: u64,
    pub ambiguous: Vec<ScanHit>,
    pub ambiguous_count: u64,
    /// Words with numerically trivial image that are nontrivial in the group.
    pub kernel_witnesses: Vec<GroupWord>,
    pub kernel_witness_count: u64,
}

impl ScanReport {
    fn empty() -> Self {
        Self {
            max_len: 0,
            completed: true,
            counts: ClassCounts::default(),
            first_non_hyperbolic: None,
            non_hyperbolic: Vec::new(),
            non_hyperbolic_count: 0,
            ambiguous: Vec::new(),
            ambiguous_count: 0,
            kernel_witnesses: Vec::new(),
            kernel_witness_count: 0,
        }
    }

    /// Merges a report for words that come later in length-lex order.
    fn merge(&mut self, later: ScanReport) {
        self.counts.merge(&later.counts);
        if self.first_non_hyperbolic.is_none() {
            self.first_non_hyperbolic = later.first_non_hyperbolic;
        }
        fill_capped(&mut self.non_hyperbolic, later.non_hyperbolic);
        self.non_hyperbolic_count += later.non_hyperbolic_count;
        fill_capped(&mut self.ambiguous, later.ambiguous);
        self.ambiguous_count += later.ambiguous_count;
        fill_capped(&mut self.kernel_witnesses, later.kernel_witnesses);
        self.kernel_witness_count += later.kernel_witness_count;
    }

    /// Zero non-hyperbolic nontrivial images and zero kernel witnesses.
    pub fn is_purely_hyperbolic_and_faithful(&self) -> bool {
        self.first_non_hyperbolic.is_none() && self.kernel_witness_count == 0
    }
}

fn fill_capped<T>(dst: &mut Vec<T>, src: Vec<T>) {
    let room = WITNESS_CAP.saturating_sub(dst.len());
    dst.extend(src.into_iter().take(room));
}

struct LengthScan<'a> {
    gens: &'a [IsometryElement],
    letters: usize,
    len: usize,
    tol: Tolerance,
    dehn: &'a DehnRewriter,
    word: Vec<usize>,
    report: ScanReport,
}

impl LengthScan<'_> {
    fn visit(&mut self, prefix: &IsometryElement) {
        let depth = self.word.len();
        let prev = self.word.last().copied();
        if depth + 1 == self.len {
            for c in 0..self.letters {
                if prev == Some(c ^ 1) {
                    continue;
                }
                let t = prefix.trace_of_product(&self.gens[c]).abs();
                if t > 2.0 + self.tol.classify {
                    self.report.counts.hyperbolic += 1;
                } else {
                    self.word.push(c);
                    let m = prefix.mul_raw(&self.gens[c]);
                    self.record(&m);
                    self.word.pop();
                }
            }
        } else {
            for c in 0..self.letters {
                if prev == Some(c ^ 1) {
                    continue;
                }
                let m = prefix.mul_raw(&self.gens[c]);
                self.word.push(c);
                self.visit(&m);
                self.word.pop();
            }
        }
    }

    fn current_word(&self) -> GroupWord {
        GroupWord::from_reduced(self.word.iter().map(|&c| Letter::from_column(c)).collect())
    }

    fn record(&mut self, m: &IsometryElement) {
        let tag = m.tag_with(&self.tol);
        self.report.counts.add(tag);
        match tag {
            IsometryTag::Hyperbolic => {}
            IsometryTag::Identity => {
                let nontrivial = self.dehn.short_nontrivial(self.word.len()) || {
                    let w = self.current_word();
                    !self.dehn.is_trivial(&w)
                };
                if nontrivial && m.identity_distance() < KERNEL_TOLERANCE {
                    self.report.kernel_witness_count += 1;
                    if self.report.kernel_witnesses.len() < WITNESS_CAP {
                        let w = self.current_word();
                        self.report.kernel_witnesses.push(w);
                    }
                }
            }
            IsometryTag::Elliptic | IsometryTag::Parabolic => {
                let m = IsometryElement::new(m.a(), m.b(), m.c(), m.d())
                    .expect("products of unimodular matrices stay unimodular");
                let class = m.classify_with(&self.tol);
                let hit = ScanHit {
                    word: self.current_word(),
                    class,
                    trace: m.trace(),
                };
                if self.report.first_non_hyperbolic.is_none() {
                    self.report.first_non_hyperbolic = Some(hit.clone());
                }
                if matches!(class, IsometryClass::Parabolic { ambiguous: true }) {
                    self.report.ambiguous_count += 1;
                    if self.report.ambiguous.len() < WITNESS_CAP {
                        self.report.ambiguous.push(hit);
                    }
                } else {
                    self.report.non_hyperbolic_count += 1;
                    if self.report.non_hyperbolic.len() < WITNESS_CAP {
                        self.report.non_hyperbolic.push(hit);
                    }
                }
            }
        }
    }
}

/// Classifies the image of every freely reduced word of length
/// `1..=options.max_len`.
///
/// Each length is scanned in parallel by first letter and merged back in
/// length-lex order, so the report is deterministic.
pub fn scan_classification(rho: &RepresentationAssignment, options: &ScanOptions) -> ScanReport {
    let p = rho.presentation();
    let gens = rho.letter_images();
    let dehn = DehnRewriter::new(&p);
    let letters = p.letter_count();
    let mut report = ScanReport::empty();
    for len in 1..=options.max_len {
        let parts: Vec<ScanReport> = (0..letters)
            .into_par_iter()
            .map(|first| {
                let mut scan = LengthScan {
                    gens: &gens,
                    letters,
                    len,
                    tol: options.tolerance,
                    dehn: &dehn,
                    word: vec![first],
                    report: ScanReport::empty(),
                };
                if len == 1 {
                    let m = gens[first];
                    scan.record(&m);
                } else {
                    let m = gens[first];
                    scan.visit(&m);
                }
                scan.report
            })
            .collect();
        for part in parts {
            report.merge(part);
        }
        report.max_len = len;
        if options.stop_at_first_non_hyperbolic && report.first_non_hyperbolic.is_some() {
            report.completed = len == options.max_len;
            break;
        }
    }
    report
}

/// Certificate for [`is_elementary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ElementaryCertificate {
    AllIdentity,
    /// Every non-identity generator image fixes exactly these boundary points.
    CommonFixedPoints(Vec<String>),
    /// Every non-identity generator image is elliptic about this point.
    CommonCentre {
        x: f64,
        y: f64,
    },
    /// Two generator images with different fixed sets.
    Mismatch {
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum FixedSet {
    Boundary(Vec<BoundaryPoint>),
    Interior(f64, f64),
}

impl FixedSet {
    fn of(g: &IsometryElement, tol: &Tolerance) -> Option<FixedSet> {
        match g.classify_with(tol) {
            IsometryClass::Identity => None,
            IsometryClass::Elliptic { .. } => g
                .elliptic_fixed_point()
                .map(|(x, y)| FixedSet::Interior(x, y)),
            _ => g.fixed_points_with(tol).ok().map(FixedSet::Boundary),
        }
    }

    fn approx_eq(&self, other: &FixedSet) -> bool {
        const TOL: f64 = 1e-6;
        match (self, other) {
            (FixedSet::Boundary(p), FixedSet::Boundary(q)) => {
                p.len() == q.len()
                    && p.iter().all(|x| q.iter().any(|y| x.approx_eq(y, TOL)))
                    && q.iter().all(|y| p.iter().any(|x| x.approx_eq(y, TOL)))
            }
            (FixedSet::Interior(x1, y1), FixedSet::Interior(x2, y2)) => {
                (x1 - x2).abs() <= TOL * (1.0 + x1.abs())
                    && (y1 - y2).abs() <= TOL * (1.0 + y1.abs())
            }
            _ => false,
        }
    }
}

/// Whether all non-identity generator images share one fixed-point set.
pub fn is_elementary(rho: &RepresentationAssignment) -> (bool, ElementaryCertificate) {
    is_elementary_with(rho, &Tolerance::default())
}

pub fn is_elementary_with(
    rho: &RepresentationAssignment,
    tol: &Tolerance,
) -> (bool, ElementaryCertificate) {
    let mut reference: Option<(usize, FixedSet)> = None;
    for (i, g) in rho.images().iter().enumerate() {
        let Some(set) = FixedSet::of(g, tol) else {
            continue;
        };
        match &reference {
            None => reference = Some((i, set)),
            Some((j, r)) => {
                if !r.approx_eq(&set) {
                    return (
                        false,
                        ElementaryCertificate::Mismatch {
                            first: Letter::generator_name(*j),
                            second: Letter::generator_name(i),
                        },
                    );
                }
            }
        }
    }
    match reference {
        None => (true, ElementaryCertificate::AllIdentity),
        Some((_, FixedSet::Boundary(pts))) => (
            true,
            ElementaryCertificate::CommonFixedPoints(pts.iter().map(|p| p.to_string()).collect()),
        ),
        Some((_, FixedSet::Interior(x, y))) => (true, ElementaryCertificate::CommonCentre { x, y }),
    }
}

/// Result of [`mk_handle_attach`].
#[derive(Debug, Clone)]
pub struct HandleAttachment {
    pub presentation: SurfacePresentation,
    /// Pinch killing the new handle.
    pub pinch: SurfaceHom,
    /// `ρ ∘ pinch`: the old images, then the identity twice.
    pub assignment: RepresentationAssignment,
}

/// Adds a handle to the surface and extends `ρ` trivially over it.
pub fn mk_handle_attach(rho: &RepresentationAssignment) -> HandleAttachment {
    let g = rho.genus();
    let pinch = mk_pinch(g + 1, g).expect("g >= 2 by construction of the assignment");
    let assignment = rho
        .pull_back(&pinch)
        .expect("pinch images of a valid assignment satisfy the relator");
    HandleAttachment {
        presentation: pinch.source().clone(),
        pinch,
        assignment,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_and_order() {
        let p = SurfacePresentation::new(2).unwrap();
        assert_eq!(enumerate_words(&p, 0).count(), 1);
        let one: Vec<_> = enumerate_words(&p, 1).collect();
        assert_eq!(one.len(), 9);
        assert!(one[0].is_empty());
        assert_eq!(one[1].to_string(), "a1");
        assert_eq!(one[2].to_string(), "a1^-1");
        assert_eq!(enumerate_words(&p, 2).filter(|w| !w.is_empty()).count(), 64);
        let words: Vec<_> = enumerate_words(&p, 3).collect();
        for pair in words.windows(2) {
            let (x, y) = (&pair[0], &pair[1]);
            assert!((x.len(), x.letters()) < (y.len(), y.letters()));
        }
    }

    #[test]
    fn elementary_examples() {
        let id = IsometryElement::identity();
        let d2 = IsometryElement::dilation(2.0).unwrap();
        let d4 = IsometryElement::dilation(4.0).unwrap();
        let rho = RepresentationAssignment::new(2, vec![d2, d4, id, id]).unwrap();
        let (elem, cert) = is_elementary(&rho);
        assert!(elem);
        assert!(matches!(cert, ElementaryCertificate::CommonFixedPoints(ref p) if p.len() == 2));
        let triv = RepresentationAssignment::trivial(3).unwrap();
        assert_eq!(
            is_elementary(&triv),
            (true, ElementaryCertificate::AllIdentity)
        );
    }

    #[test]
    fn handle_attach_shape() {
        let d2 = IsometryElement::dilation(2.0).unwrap();
        let id = IsometryElement::identity();
        let rho = RepresentationAssignment::new(2, vec![d2, d2, id, id]).unwrap();
        let h = mk_handle_attach(&rho);
        assert_eq!(h.presentation.genus(), 3);
        assert_eq!(h.assignment.images()[..4], rho.images()[..]);
        assert!(h.assignment.images()[4..]
            .iter()
            .all(|g| g.is_identity(0.0)));
    }
}
