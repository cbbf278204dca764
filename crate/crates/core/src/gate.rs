//! Geometrisability decision for representations `ρ = ρ₀ ∘ f_*`.
//!
//! `ρ₀` is a Fuchsian base on a genus-`h` surface and `f_*` a homomorphism
//! from the genus-`g` surface group into the base group. Purely hyperbolic
//! status is checked only up to a word-length budget, so every verdict
//! carries that budget in its witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosets::{coset_enumerate, quotient_genus, EnumerationStatus, DEFAULT_MAX_COSETS};
use crate::euler::{euler_number, EulerError, RepresentationAssignment};
use crate::isom2::Tolerance;
use crate::surfgrp::{is_elementary_with, scan_classification, HomError, ScanOptions, SurfaceHom};

/// Witness words listed per category in a report.
const LISTED_WITNESSES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Euler(#[from] EulerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    FuchsianComplete,
    GeometrisableBranched,
    NotGeometrisablePinch,
    NotGeometrisableZeroEuler,
    NotGeometrisableElementary,
    NotPurelyHyperbolicAtBudget,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::FuchsianComplete => "FUCHSIAN_COMPLETE",
            Verdict::GeometrisableBranched => "GEOMETRISABLE_BRANCHED",
            Verdict::NotGeometrisablePinch => "NOT_GEOMETRISABLE_PINCH",
            Verdict::NotGeometrisableZeroEuler => "NOT_GEOMETRISABLE_ZERO_EULER",
            Verdict::NotGeometrisableElementary => "NOT_GEOMETRISABLE_ELEMENTARY",
            Verdict::NotPurelyHyperbolicAtBudget => "NOT_PURELY_HYPERBOLIC_AT_BUDGET",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }

    /// Verdicts that a larger scan budget cannot change.
    pub fn is_definitive(&self) -> bool {
        !matches!(
            self,
            Verdict::NotPurelyHyperbolicAtBudget | Verdict::Indeterminate
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A base representation, a homomorphism into its group, and the budgets.
#[derive(Debug, Clone)]
pub struct GateInput {
    base: RepresentationAssignment,
    hom: SurfaceHom,
    pub scan_depth: usize,
    pub max_cosets: usize,
    pub tolerance: Tolerance,
}

impl GateInput {
    /// Checks that `hom` is well defined and lands in the base group.
    pub fn new(
        base: RepresentationAssignment,
        hom: SurfaceHom,
        scan_depth: usize,
    ) -> Result<Self, GateError> {
        if hom.target().genus() != base.genus() {
            return Err(HomError::TargetMismatch {
                expected: base.genus(),
                found: hom.target().genus(),
            }
            .into());
        }
        let v = hom.validate();
        if !v.is_valid() {
            return Err(HomError::RelatorImageNontrivial { reduced: v.reduced }.into());
        }
        Ok(Self {
            base,
            hom,
            scan_depth,
            max_cosets: DEFAULT_MAX_COSETS,
            tolerance: Tolerance::default(),
        })
    }

    pub fn with_max_cosets(mut self, max_cosets: usize) -> Self {
        self.max_cosets = max_cosets;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn base(&self) -> &RepresentationAssignment {
        &self.base
    }

    pub fn base_genus(&self) -> usize {
        self.base.genus()
    }

    pub fn hom(&self) -> &SurfaceHom {
        &self.hom
    }

    pub fn source_genus(&self) -> usize {
        self.hom.source().genus()
    }

    /// `ρ₀ ∘ f_*`.
    pub fn composed(&self) -> Result<RepresentationAssignment, GateError> {
        Ok(self.base.pull_back(&self.hom)?)
    }
}

/// Verdict plus the numbers backing it. Fields the pipeline did not reach
/// are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    pub verdict: Verdict,
    pub euler: Option<i64>,
    /// `None` when coset enumeration ran out of budget.
    pub image_index: Option<u64>,
    pub quotient_genus: Option<u64>,
    /// `eu(ρ)/χ(Σ′)` when it is a positive integer.
    pub canonical_degree: Option<i64>,
    /// Total cone order `Σkᵢ = |χ(S)| - |eu(ρ)|` of a branched structure.
    pub cone_budget: Option<i64>,
    pub witnesses: Vec<String>,
}

impl GateReport {
    fn new(verdict: Verdict) -> Self {
        Self {
            verdict,
            euler: None,
            image_index: None,
            quotient_genus: None,
            canonical_degree: None,
            cone_budget: None,
            witnesses: Vec::new(),
        }
    }

    fn finish(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }
}

impl fmt::Display for GateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn opt<T: fmt::Display>(v: &Option<T>) -> String {
            v.as_ref()
                .map_or_else(|| "-".to_string(), |x| x.to_string())
        }
        writeln!(f, "verdict          {}", self.verdict)?;
        writeln!(f, "euler            {}", opt(&self.euler))?;
        writeln!(f, "image_index      {}", opt(&self.image_index))?;
        writeln!(f, "quotient_genus   {}", opt(&self.quotient_genus))?;
        writeln!(f, "canonical_degree {}", opt(&self.canonical_degree))?;
        writeln!(f, "cone_budget      {}", opt(&self.cone_budget))?;
        for w in &self.witnesses {
            writeln!(f, "  {w}")?;
        }
        Ok(())
    }
}

fn list_words<T: fmt::Display>(label: &str, items: &[T], total: u64) -> String {
    let shown: Vec<String> = items
        .iter()
        .take(LISTED_WITNESSES)
        .map(|w| format!("[{w}]"))
        .collect();
    let more = total.saturating_sub(shown.len() as u64);
    if more > 0 {
        format!("{label}: {} and {more} more", shown.join(" "))
    } else {
        format!("{label}: {}", shown.join(" "))
    }
}

/// Runs the decision pipeline.
pub fn decide(input: &GateInput) -> GateReport {
    let mut report = GateReport::new(Verdict::Indeterminate);
    let genus = input.source_genus() as i64;
    let chi_s = 2 - 2 * genus;
    let depth = input.scan_depth;

    let rho = match input.composed() {
        Ok(rho) => rho,
        Err(e) => {
            report.witnesses.push(format!("composition failed: {e}"));
            return report;
        }
    };
    let eu = euler_number(&rho);
    if let Ok(r) = &eu {
        report.euler = Some(r.value);
    }

    let (elementary, certificate) = is_elementary_with(&rho, &input.tolerance);
    if elementary {
        report
            .witnesses
            .push(format!("elementary image: {certificate:?}"));
        return report.finish(Verdict::NotGeometrisableElementary);
    }

    let options = ScanOptions::new(depth)
        .with_tolerance(input.tolerance)
        .stopping_early();
    let scan = scan_classification(&rho, &options);
    if let Some(hit) = &scan.first_non_hyperbolic {
        report.witnesses.push(format!(
            "non-hyperbolic image at word length {} (budget {depth}): {hit}",
            hit.word.len()
        ));
        return report.finish(Verdict::NotPurelyHyperbolicAtBudget);
    }
    report.witnesses.push(format!(
        "scan budget {depth}: {} words, all images hyperbolic or trivial",
        scan.counts.total()
    ));
    if scan.kernel_witness_count > 0 {
        report.witnesses.push(list_words(
            "kernel of rho",
            &scan.kernel_witnesses,
            scan.kernel_witness_count,
        ));
    }

    let base_scan = scan_classification(
        input.base(),
        &ScanOptions::new(depth).with_tolerance(input.tolerance),
    );
    if !base_scan.is_purely_hyperbolic_and_faithful() {
        if let Some(hit) = &base_scan.first_non_hyperbolic {
            report.witnesses.push(format!("base not Fuchsian: {hit}"));
        }
        if base_scan.kernel_witness_count > 0 {
            report.witnesses.push(list_words(
                "base not faithful",
                &base_scan.kernel_witnesses,
                base_scan.kernel_witness_count,
            ));
        }
        return report;
    }
    report.witnesses.push(format!(
        "base certified purely hyperbolic and faithful to length {depth}"
    ));

    let eu = match eu {
        Ok(r) => r.value,
        Err(e) => {
            report.witnesses.push(format!("Euler number: {e}"));
            return report;
        }
    };
    if eu == 0 {
        return report.finish(Verdict::NotGeometrisableZeroEuler);
    }

    let subgens = input.hom.image_generators();
    let table = match coset_enumerate(input.hom.target(), &subgens, input.max_cosets) {
        Ok(t) => t,
        Err(e) => {
            report.witnesses.push(format!("coset enumeration: {e}"));
            return report;
        }
    };
    let index = match table.status {
        EnumerationStatus::Closed(n) => n,
        EnumerationStatus::CutoffExceeded(live) => {
            report.witnesses.push(format!(
                "coset enumeration exceeded {} cosets ({live} live); index unknown",
                input.max_cosets
            ));
            return report;
        }
    };
    let g_quot = quotient_genus(input.base_genus(), index) as i64;
    report.image_index = Some(index as u64);
    report.quotient_genus = Some(g_quot as u64);
    let chi_quot = 2 - 2 * g_quot;

    if eu % chi_quot != 0 || eu / chi_quot <= 0 {
        report.witnesses.push(format!(
            "eu/chi(quotient) = {eu}/{chi_quot} is not a positive integer"
        ));
        return report;
    }
    let d = eu / chi_quot;
    report.canonical_degree = Some(d);

    if d == 1 && g_quot == genus {
        report.cone_budget = Some(0);
        return report.finish(Verdict::FuchsianComplete);
    }
    if d == 1 {
        report.witnesses.push(format!(
            "degree 1 with genus drop {genus} -> {g_quot}: pinch"
        ));
        return report.finish(Verdict::NotGeometrisablePinch);
    }
    let cone = chi_s.abs() - eu.abs();
    report.cone_budget = Some(cone);
    report.witnesses.push(format!(
        "riemann-hurwitz: chi(T) = d*chi(quotient) - B = {d}*({chi_quot}) - B; T = S gives B = {}",
        d * chi_quot - chi_s
    ));
    if cone < 1 || chi_s + cone >= 0 {
        report.witnesses.push(format!(
            "cone budget {cone} inconsistent with chi(S) = {chi_s}"
        ));
        return report.finish(Verdict::Indeterminate);
    }
    report.finish(Verdict::GeometrisableBranched)
}

/// Outcome of [`parity_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub holds: bool,
    pub detail: String,
}

/// Non-Fuchsian purely hyperbolic verdicts must carry an even, nonzero
/// Euler number. Other verdicts pass vacuously.
pub fn parity_check(report: &GateReport) -> ParityCheck {
    if !matches!(
        report.verdict,
        Verdict::GeometrisableBranched | Verdict::NotGeometrisablePinch
    ) {
        return ParityCheck {
            holds: true,
            detail: format!("{} is outside the parity check", report.verdict),
        };
    }
    match report.euler {
        Some(eu) if eu % 2 == 0 && eu != 0 => ParityCheck {
            holds: true,
            detail: format!("euler {eu} is even and nonzero"),
        },
        Some(eu) => ParityCheck {
            holds: false,
            detail: format!("{} with euler {eu}", report.verdict),
        },
        None => ParityCheck {
            holds: false,
            detail: format!("{} without an Euler number", report.verdict),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isom2::IsometryElement;
    use crate::polygon::{build_regular, build_with_cone_multiple};
    use crate::surfgrp::{mk_doubling, mk_handle_attach, mk_pinch, SurfacePresentation};
    use std::f64::consts::PI;

    fn octagon() -> RepresentationAssignment {
        build_regular(2, 2.0 * PI)
            .unwrap()
            .holonomy_assignment()
            .unwrap()
    }

    #[test]
    fn tan_input_is_a_pinch() {
        let input = GateInput::new(octagon(), mk_pinch(3, 2).unwrap(), 6).unwrap();
        let r = decide(&input);
        assert_eq!(r.verdict, Verdict::NotGeometrisablePinch, "{r}");
        assert_eq!(r.euler, Some(-2));
        assert_eq!(r.image_index, Some(1));
        assert_eq!(r.quotient_genus, Some(2));
        assert_eq!(r.canonical_degree, Some(1));
        assert!(parity_check(&r).holds);
    }

    #[test]
    fn doubling_is_branched() {
        let input = GateInput::new(octagon(), mk_doubling(2).unwrap(), 5).unwrap();
        let r = decide(&input);
        assert_eq!(r.verdict, Verdict::GeometrisableBranched, "{r}");
        assert_eq!(r.euler, Some(-4));
        assert_eq!(r.image_index, Some(1));
        assert_eq!(r.canonical_degree, Some(2));
        assert_eq!(r.cone_budget, Some(2));
        assert!(parity_check(&r).holds);
    }

    #[test]
    fn identity_hom_is_fuchsian_complete() {
        let p = SurfacePresentation::new(2).unwrap();
        let input = GateInput::new(octagon(), SurfaceHom::identity(&p), 5).unwrap();
        let r = decide(&input);
        assert_eq!(r.verdict, Verdict::FuchsianComplete, "{r}");
        assert_eq!(r.cone_budget, Some(0));
        assert!(parity_check(&r).holds);
    }

    #[test]
    fn handle_attach_over_cone_base_is_rejected_with_witness() {
        let base = build_with_cone_multiple(2, 2)
            .unwrap()
            .holonomy_assignment()
            .unwrap();
        let h = mk_handle_attach(&base);
        let input = GateInput::new(base, h.pinch, 8).unwrap();
        let r = decide(&input);
        assert_eq!(r.verdict, Verdict::NotPurelyHyperbolicAtBudget);
        assert!(r.witnesses[0].contains("a1 b1 a1^-1 b1^-1"), "{r}");
    }

    #[test]
    fn elementary_image() {
        let d2 = IsometryElement::dilation(2.0).unwrap();
        let id = IsometryElement::identity();
        let base = RepresentationAssignment::new(2, vec![d2, d2, id, id]).unwrap();
        let p = SurfacePresentation::new(2).unwrap();
        let r = decide(&GateInput::new(base, SurfaceHom::identity(&p), 4).unwrap());
        assert_eq!(r.verdict, Verdict::NotGeometrisableElementary);
        assert_eq!(r.euler, Some(0));
    }

    #[test]
    fn mismatched_target_is_rejected() {
        assert!(matches!(
            GateInput::new(octagon(), mk_pinch(4, 3).unwrap(), 4),
            Err(GateError::Hom(HomError::TargetMismatch { .. }))
        ));
    }

    #[test]
    fn verdict_serialises_as_screaming_string() {
        let s = serde_json::to_string(&Verdict::NotPurelyHyperbolicAtBudget).unwrap();
        assert_eq!(s, "\"NOT_PURELY_HYPERBOLIC_AT_BUDGET\"");
        for v in [
            Verdict::FuchsianComplete,
            Verdict::Indeterminate,
            Verdict::GeometrisableBranched,
        ] {
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{v}\""));
        }
    }

    #[test]
    fn parity_failures_are_reported() {
        let mut r = GateReport::new(Verdict::GeometrisableBranched);
        r.euler = Some(-3);
        assert!(!parity_check(&r).holds);
        r.euler = Some(0);
        assert!(!parity_check(&r).holds);
        r.verdict = Verdict::FuchsianComplete;
        assert!(parity_check(&r).holds);
    }
}
