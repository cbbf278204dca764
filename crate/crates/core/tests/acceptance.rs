//! End-to-end acceptance checks. Run with `--nocapture` to see one
//! PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use holonomy::cosets::{coset_enumerate, EnumerationStatus};
use holonomy::euler::{euler_number, RepresentationAssignment};
use holonomy::gate::{decide, parity_check, GateInput, Verdict};
use holonomy::isom2::IsometryElement;
use holonomy::polygon::{build_regular, build_with_cone_multiple, PolygonError};
use holonomy::suite::{run_all, run_example, ExampleParams, ExampleReport};
use holonomy::surfgrp::{
    dehn_reduce, enumerate_words, mk_doubling, mk_handle_attach, mk_pinch, DehnRewriter, GroupWord,
    Letter, SurfacePresentation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed)
}

fn random_element(rng: &mut impl Rng) -> IsometryElement {
    let phi = rng.gen_range(0.0..PI);
    let psi = rng.gen_range(0.0..PI);
    let lambda = rng.gen_range(0.2..5.0);
    IsometryElement::rotation(phi)
        .compose(&IsometryElement::dilation(lambda).unwrap())
        .compose(&IsometryElement::rotation(psi))
}

fn random_word(rng: &mut impl Rng, genus: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    GroupWord::from_letters(
        (0..len)
            .map(|_| Letter::new(rng.gen_range(0..2 * genus), rng.gen()))
            .collect::<Vec<_>>(),
    )
}

fn holonomy_of(genus: usize, multiple: u32) -> RepresentationAssignment {
    build_with_cone_multiple(genus, multiple)
        .unwrap()
        .holonomy_assignment()
        .unwrap()
}

fn suite() -> Vec<ExampleReport> {
    let params = ExampleParams::default();
    let mut reports = run_all(&params).unwrap();
    for (g, h) in [(4, 1), (4, 2)] {
        let p = ExampleParams {
            genus: Some(g),
            handles: Some(h),
            ..params
        };
        reports.push(run_example("tan", &p).unwrap());
    }
    reports
}

fn polygon_euler_numbers() -> Outcome {
    let mut lines = Vec::new();
    for (g, m, expected) in [(2, 1, -2), (2, 2, -1), (3, 1, -4)] {
        let start = Instant::now();
        let rho = holonomy_of(g, m);
        let r = euler_number(&rho).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(r.value == expected, || {
            format!("genus {g} x{m}: eu {} != {expected}", r.value)
        })?;
        ensure((r.raw - expected as f64).abs() < 1e-6, || {
            format!("raw {} too far", r.raw)
        })?;
        ensure(elapsed < Duration::from_secs(1), || {
            format!("took {elapsed:?}")
        })?;
        lines.push(format!(
            "g{g} m{m} eu {} raw {:.3e} off",
            r.value,
            (r.raw - r.value as f64).abs()
        ));
    }
    Ok(lines.join(", "))
}

fn tan_formula() -> Outcome {
    let mut lines = Vec::new();
    for (g, h) in [(3usize, 1usize), (4, 1), (4, 2)] {
        let base = holonomy_of(g - h, 1);
        let rho = base
            .pull_back(&mk_pinch(g, g - h).unwrap())
            .map_err(|e| e.to_string())?;
        let eu = euler_number(&rho).map_err(|e| e.to_string())?.value;
        let expected = 2 + 2 * h as i64 - 2 * g as i64;
        ensure(eu == expected, || {
            format!("(g,h)=({g},{h}): eu {eu} != {expected}")
        })?;
        lines.push(format!("({g},{h}) eu {eu}"));
    }
    Ok(lines.join(", "))
}

fn degree_multiplicativity() -> Outcome {
    let base = holonomy_of(2, 1);
    let f = mk_doubling(2).unwrap();
    let eu = euler_number(&base.pull_back(&f).unwrap()).unwrap().value;
    ensure(eu == -4, || format!("doubling eu {eu}"))?;
    let report = decide(&GateInput::new(base, f, 6).unwrap());
    ensure(report.canonical_degree == Some(2), || {
        format!("degree {:?}", report.canonical_degree)
    })?;
    Ok(format!("eu {eu}, canonical degree 2"))
}

fn gate_verdicts() -> Outcome {
    let octagon = holonomy_of(2, 1);
    let tan = decide(&GateInput::new(octagon.clone(), mk_pinch(3, 2).unwrap(), 6).unwrap());
    ensure(tan.verdict == Verdict::NotGeometrisablePinch, || {
        format!("tan: {tan}")
    })?;
    ensure(
        tan.canonical_degree == Some(1) && tan.quotient_genus == Some(2),
        || format!("tan: {tan}"),
    )?;

    let dbl = decide(&GateInput::new(octagon, mk_doubling(2).unwrap(), 6).unwrap());
    ensure(dbl.verdict == Verdict::GeometrisableBranched, || {
        format!("doubling: {dbl}")
    })?;
    ensure(dbl.cone_budget == Some(2), || format!("doubling: {dbl}"))?;

    let cone = holonomy_of(2, 2);
    let h = mk_handle_attach(&cone);
    let ha = decide(&GateInput::new(cone, h.pinch, 12).unwrap());
    ensure(ha.verdict == Verdict::NotPurelyHyperbolicAtBudget, || {
        format!("handle-attach: {ha}")
    })?;
    let witness = ha.witnesses.first().cloned().unwrap_or_default();
    let len: usize = witness
        .strip_prefix("non-hyperbolic image at word length ")
        .and_then(|s| s.split(' ').next())
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| format!("no witness in {ha}"))?;
    ensure(len <= 12, || format!("witness length {len}"))?;
    Ok(format!(
        "pinch, branched (cone budget 2), handle-attach witness of minimal length {len}: {witness}"
    ))
}

fn gauss_bonnet() -> Outcome {
    let mut built = 0;
    for g in 2..=5usize {
        let max = (4 * g - 2) as f64 * PI;
        for i in 1..40 {
            let theta = max * i as f64 / 40.0;
            let s = build_regular(g, theta).map_err(|e| e.to_string())?;
            let chi_plus_k = (2.0 - 2.0 * g as f64) + theta / (2.0 * PI) - 1.0;
            ensure(chi_plus_k < 0.0, || format!("chi + k = {chi_plus_k}"))?;
            let area = 2.0 * PI * -chi_plus_k;
            ensure((s.area() - area).abs() < 1e-9, || {
                format!("g {g} theta {theta}: area {} vs {area}", s.area())
            })?;
            built += 1;
        }
        for theta in [max, max + 1.0] {
            ensure(
                matches!(
                    build_regular(g, theta),
                    Err(PolygonError::AngleOutOfRange { .. })
                ),
                || format!("g {g} theta {theta} accepted"),
            )?;
        }
    }
    Ok(format!("{built} polygons, out-of-range angles rejected"))
}

fn parity_and_nonzero(reports: &[ExampleReport]) -> Outcome {
    let mut rng = rng();
    let mut checked = 0;
    for r in reports {
        let Some(gate) = &r.gate else { continue };
        if !matches!(
            gate.verdict,
            Verdict::GeometrisableBranched | Verdict::NotGeometrisablePinch
        ) {
            continue;
        }
        let pc = parity_check(gate);
        ensure(pc.holds, || format!("{}: {}", r.name, pc.detail))?;
        let rho = &r.representations[0];
        for _ in 0..20 {
            let eu = euler_number(&rho.conjugate_by(&random_element(&mut rng)))
                .map_err(|e| e.to_string())?
                .value;
            ensure(eu % 2 == 0 && eu != 0, || {
                format!("{}: conjugate has eu {eu}", r.name)
            })?;
        }
        checked += 1;
    }
    ensure(checked >= 4, || {
        format!("only {checked} non-Fuchsian purely hyperbolic examples")
    })?;
    Ok(format!("{checked} representations, 20 conjugates each"))
}

fn conjugation_invariance(reports: &[ExampleReport]) -> Outcome {
    let mut rng = rng();
    let mut reps = 0;
    for r in reports {
        for rho in &r.representations {
            let eu = euler_number(rho).map_err(|e| e.to_string())?.value;
            for _ in 0..20 {
                let c = euler_number(&rho.conjugate_by(&random_element(&mut rng)))
                    .map_err(|e| e.to_string())?
                    .value;
                ensure(c == eu, || format!("{}: {c} != {eu}", r.name))?;
            }
            reps += 1;
        }
    }
    for _ in 0..1000 {
        let g = random_element(&mut rng);
        let h = random_element(&mut rng);
        let (a, b) = (g.classify().tag(), h.conjugate(&g).classify().tag());
        ensure(a == b, || format!("{g}: {a:?} vs {b:?}"))?;
    }
    Ok(format!("{reps} representations x 20 conjugates, 1000 tags"))
}

fn word_engine() -> Outcome {
    let start = Instant::now();
    let mut rng = rng();
    let p = SurfacePresentation::new(2).unwrap();
    let dehn = DehnRewriter::new(&p);
    let r = p.relator();
    ensure(dehn.is_trivial(&r), || "relator not trivial".into())?;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=5);
        let w = (0..k).fold(GroupWord::empty(), |acc, _| {
            let c = random_word(&mut rng, 2, 6);
            let base = if rng.gen() { r.inverse() } else { r.clone() };
            acc.concat(&c.conjugate(&base))
        });
        ensure(dehn.is_trivial(&w), || format!("{w} not reduced to empty"))?;
    }

    let rho = holonomy_of(2, 1);
    let mut separated = 0;
    while separated < 1000 {
        let w = random_word(&mut rng, 2, 10);
        if rho.eval(&w).identity_distance() <= 0.01 {
            continue;
        }
        ensure(!dehn_reduce(&p, &w).is_empty(), || {
            format!("{w} declared trivial")
        })?;
        separated += 1;
    }

    for g in 2..=4 {
        let p = SurfacePresentation::new(g).unwrap();
        let mut counts = [0u64; 7];
        for w in enumerate_words(&p, 6) {
            counts[w.len()] += 1;
        }
        for (l, &n) in counts.iter().enumerate().skip(1) {
            let expected = 4 * g as u64 * (4 * g as u64 - 1).pow(l as u32 - 1);
            ensure(n == expected, || {
                format!("g {g} length {l}: {n} != {expected}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("all word checks in {:.2}s", elapsed.as_secs_f64()))
}

fn coset_enumeration() -> Outcome {
    let p = SurfacePresentation::new(2).unwrap();
    let words = |list: &[&str]| -> Vec<GroupWord> {
        list.iter().map(|s| GroupWord::parse(s).unwrap()).collect()
    };
    let whole = coset_enumerate(&p, &words(&["a1", "b1", "a2", "b2"]), 1000).unwrap();
    ensure(whole.status == EnumerationStatus::Closed(1), || {
        format!("{:?}", whole.status)
    })?;

    let gens = words(&[
        "b1",
        "a2",
        "b2",
        "a1 a1",
        "a1 b1 a1^-1",
        "a1 a2 a1^-1",
        "a1 b2 a1^-1",
    ]);
    let parity = coset_enumerate(&p, &gens, 1000).unwrap();
    ensure(parity.status == EnumerationStatus::Closed(2), || {
        format!("{:?}", parity.status)
    })?;
    for w in &gens {
        ensure(parity.permutation(w) == Some(vec![0, 1]), || {
            format!("{w} moves cosets")
        })?;
    }
    let a1 = GroupWord::parse("a1").unwrap();
    ensure(parity.permutation(&a1) == Some(vec![1, 0]), || {
        "a1 fixes cosets".into()
    })?;

    let cyclic = coset_enumerate(&p, &words(&["a1"]), 10_000).unwrap();
    ensure(
        matches!(cyclic.status, EnumerationStatus::CutoffExceeded(_)),
        || format!("{:?}", cyclic.status),
    )?;
    Ok("index 1, index 2 with consistent action, cutoff for <a1>".into())
}

fn lift_properties() -> Outcome {
    let mut rng = rng();
    for _ in 0..1000 {
        let g = random_element(&mut rng);
        let l = g.lift();
        let t = rng.gen_range(-10.0..10.0);
        let gap = rng.gen_range(1e-6..PI - 1e-6);
        let shift = l.eval(t + PI) - l.eval(t);
        ensure((shift - PI).abs() < 1e-9, || {
            format!("{g}: L(t+pi)-L(t) = {shift}")
        })?;
        ensure(l.eval(t) < l.eval(t + gap), || {
            format!("{g}: not increasing at {t}")
        })?;
    }
    for _ in 0..1000 {
        let phi = rng.gen_range(0.0..PI);
        let l = IsometryElement::rotation(phi).lift();
        let t = rng.gen_range(-10.0..10.0);
        let d = l.eval(t) - t - phi;
        ensure(d.abs() < 1e-12, || format!("rotation {phi}: off by {d}"))?;
    }
    Ok("1000 equivariance/monotonicity samples, 1000 rotations".into())
}

#[test]
fn acceptance() {
    let reports = suite();
    let criteria: Vec<Criterion> = vec![
        ("polygon Euler numbers", Box::new(polygon_euler_numbers)),
        ("pinch formula 2+2h-2g", Box::new(tan_formula)),
        ("degree multiplicativity", Box::new(degree_multiplicativity)),
        ("gate verdicts", Box::new(gate_verdicts)),
        ("area identity", Box::new(gauss_bonnet)),
        (
            "parity and nonzero",
            Box::new(|| parity_and_nonzero(&reports)),
        ),
        (
            "conjugation invariance",
            Box::new(|| conjugation_invariance(&reports)),
        ),
        ("word engine", Box::new(word_engine)),
        ("coset enumeration", Box::new(coset_enumeration)),
        ("lift properties", Box::new(lift_properties)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
