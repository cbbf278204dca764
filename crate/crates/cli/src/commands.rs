use std::fmt::Write as _;
use std::io::Read;

use holonomy::cosets::{coset_enumerate, quotient_genus, EnumerationStatus};
use holonomy::euler::euler_number;
use holonomy::formats::{
    parse_hom, parse_hom_unchecked, parse_matrix, parse_representation, write_representation,
};
use holonomy::gate::{decide, GateInput, Verdict};
use holonomy::isom2::Tolerance;
use holonomy::polygon::build_with_cone_multiple;
use holonomy::suite::{run_all, run_example, ExampleParams, ExampleReport};
use holonomy::surfgrp::{
    dehn_reduce, scan_classification, GroupWord, ScanOptions, SurfacePresentation,
};
use serde_json::json;

use crate::{Command, ExamplesArgs, HomAction, Outcome};

type CmdResult = Result<Outcome, String>;

fn read_input(file: Option<&str>) -> Result<String, String> {
    match file {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("reading standard input: {e}"))?;
            Ok(s)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}")),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ok(text: String, json: serde_json::Value) -> CmdResult {
    Ok(Outcome {
        text,
        json,
        ok: true,
    })
}

pub fn run(command: &Command, tol: Tolerance) -> CmdResult {
    match command {
        Command::Classify { file } => classify(file.as_deref(), tol),
        Command::Euler { file } => euler(file.as_deref()),
        Command::Reduce { genus, word } => reduce(*genus, &word.join(" ")),
        Command::Scan {
            file,
            max_length,
            stop_early,
        } => scan(file.as_deref(), *max_length, *stop_early, tol),
        Command::Hom { action } => match action {
            HomAction::Validate { file } => hom_validate(file.as_deref()),
            HomAction::Apply { file, word } => hom_apply(file, &word.join(" ")),
        },
        Command::Index {
            genus,
            max_cosets,
            generators_file,
            generators,
        } => {
            let mut words = generators.clone();
            if let Some(path) = generators_file {
                let text = read_input(Some(path))?;
                words.extend(
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .filter(|l| !l.is_empty())
                        .map(str::to_string),
                );
            }
            index(*genus, *max_cosets, &words)
        }
        Command::Polygon { genus, cone_angle } => polygon(*genus, cone_angle),
        Command::Gate {
            base,
            hom,
            max_length,
            max_cosets,
        } => gate(base, hom, *max_length, *max_cosets, tol),
        Command::Examples(args) => examples(args, tol),
    }
}

fn classify(file: Option<&str>, tol: Tolerance) -> CmdResult {
    let g = parse_matrix(&read_input(file)?).map_err(err)?;
    let class = g.classify_with(&tol);
    let fixed: Vec<String> = g
        .fixed_points_with(&tol)
        .map(|v| v.iter().map(|p| p.to_string()).collect())
        .unwrap_or_default();
    let mut text = format!("{class}\ntrace = {}\n", g.trace());
    if !fixed.is_empty() {
        writeln!(text, "fixed points = {}", fixed.join(" ")).unwrap();
    }
    ok(
        text,
        json!({ "class": class, "trace": g.trace(), "fixed_points": fixed }),
    )
}

fn euler(file: Option<&str>) -> CmdResult {
    let rho = parse_representation(&read_input(file)?).map_err(err)?;
    let r = euler_number(&rho).map_err(err)?;
    ok(
        format!(
            "euler = {}\nraw = {}\nconjugation_spread = {:e}\n",
            r.value, r.raw, r.conjugation_spread
        ),
        json!(r),
    )
}

fn word_text(w: &GroupWord) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.to_string()
    }
}

fn reduce(genus: usize, word: &str) -> CmdResult {
    let p = SurfacePresentation::new(genus).map_err(err)?;
    let w = GroupWord::parse_in(word, genus).map_err(err)?;
    let r = dehn_reduce(&p, &w);
    ok(
        format!("{}\n", word_text(&r)),
        json!({ "input": w, "reduced": r, "trivial": r.is_empty() }),
    )
}

fn scan(file: Option<&str>, max_len: usize, stop_early: bool, tol: Tolerance) -> CmdResult {
    let rho = parse_representation(&read_input(file)?).map_err(err)?;
    let mut options = ScanOptions::new(max_len).with_tolerance(tol);
    if stop_early {
        options = options.stopping_early();
    }
    let r = scan_classification(&rho, &options);
    let mut text = String::new();
    let c = &r.counts;
    writeln!(
        text,
        "scanned up to length {} ({} words)",
        r.max_len,
        c.total()
    )
    .unwrap();
    writeln!(
        text,
        "identity {} elliptic {} parabolic {} hyperbolic {}",
        c.identity, c.elliptic, c.parabolic, c.hyperbolic
    )
    .unwrap();
    match &r.first_non_hyperbolic {
        Some(hit) => writeln!(text, "first non-hyperbolic: {hit}").unwrap(),
        None => writeln!(text, "no non-hyperbolic image").unwrap(),
    }
    writeln!(text, "tolerance-ambiguous: {}", r.ambiguous_count).unwrap();
    for hit in &r.ambiguous {
        writeln!(text, "  {hit}").unwrap();
    }
    writeln!(text, "kernel witnesses: {}", r.kernel_witness_count).unwrap();
    for w in &r.kernel_witnesses {
        writeln!(text, "  {w}").unwrap();
    }
    ok(text, json!(r))
}

fn hom_validate(file: Option<&str>) -> CmdResult {
    let f = parse_hom_unchecked(&read_input(file)?).map_err(err)?;
    let v = f.validate();
    let text = if v.is_valid() {
        "valid\n".to_string()
    } else {
        format!("invalid: relator image reduces to {}\n", v.reduced)
    };
    Ok(Outcome {
        text,
        json: json!({ "valid": v.is_valid(), "relator_image": v.relator_image, "reduced": v.reduced }),
        ok: v.is_valid(),
    })
}

fn hom_apply(file: &str, word: &str) -> CmdResult {
    let f = parse_hom(&read_input(Some(file))?).map_err(err)?;
    let w = GroupWord::parse_in(word, f.source().genus()).map_err(err)?;
    let image = f.apply(&w);
    ok(
        format!("{}\n", word_text(&image)),
        json!({ "input": w, "image": image }),
    )
}

fn index(genus: usize, max_cosets: usize, generators: &[String]) -> CmdResult {
    let p = SurfacePresentation::new(genus).map_err(err)?;
    let gens = generators
        .iter()
        .map(|s| GroupWord::parse_in(s, genus))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let table = coset_enumerate(&p, &gens, max_cosets).map_err(err)?;
    match table.status {
        EnumerationStatus::Closed(n) => {
            let q = quotient_genus(genus, n);
            ok(
                format!("index = {n}\nquotient_genus = {q}\n"),
                json!({ "status": table.status, "index": n, "quotient_genus": q }),
            )
        }
        EnumerationStatus::CutoffExceeded(live) => Ok(Outcome {
            text: format!(
                "cutoff exceeded: {max_cosets} cosets allowed, {live} live; index unknown\n"
            ),
            json: json!({ "status": table.status, "index": null, "quotient_genus": null }),
            ok: false,
        }),
    }
}

fn polygon(genus: usize, cone_angle: &str) -> CmdResult {
    let m: u32 = match cone_angle {
        "complete" => 1,
        s => s.parse().map_err(|_| {
            format!("--cone-angle must be a positive integer or `complete`, got {s:?}")
        })?,
    };
    let s = build_with_cone_multiple(genus, m).map_err(err)?;
    let rho = s.holonomy_assignment().map_err(err)?;
    let body = write_representation(&rho);
    let mut text = String::new();
    writeln!(text, "# regular {}-gon, total angle {} * 2pi", 4 * genus, m).unwrap();
    writeln!(text, "# area {}", s.area()).unwrap();
    writeln!(text, "# circumradius {}", s.circumradius()).unwrap();
    text.push_str(&body);
    ok(
        text,
        json!({
            "genus": genus,
            "total_angle": s.total_angle(),
            "cone_order": s.cone_data(),
            "area": s.area(),
            "circumradius": s.circumradius(),
            "representation": rho,
        }),
    )
}

fn gate(base: &str, hom: &str, max_len: usize, max_cosets: usize, tol: Tolerance) -> CmdResult {
    let base = parse_representation(&read_input(Some(base))?).map_err(err)?;
    let f = parse_hom(&read_input(Some(hom))?).map_err(err)?;
    let input = GateInput::new(base, f, max_len)
        .map_err(err)?
        .with_max_cosets(max_cosets)
        .with_tolerance(tol);
    let report = decide(&input);
    Ok(Outcome {
        text: report.to_string(),
        json: json!(report),
        ok: report.verdict != Verdict::Indeterminate,
    })
}

fn example_text(r: &ExampleReport) -> String {
    let mut text = format!("{}: {}\n", r.name, if r.passed() { "PASS" } else { "FAIL" });
    for (k, v) in &r.values {
        writeln!(text, "  {k} = {v}").unwrap();
    }
    if let Some(g) = &r.gate {
        writeln!(text, "  verdict = {}", g.verdict).unwrap();
        for w in &g.witnesses {
            writeln!(text, "    {w}").unwrap();
        }
    }
    for c in &r.checks {
        let mark = if c.pass { "ok" } else { "FAILED" };
        writeln!(
            text,
            "  [{mark}] {}: expected {}, actual {}",
            c.name, c.expected, c.actual
        )
        .unwrap();
    }
    text
}

fn examples(args: &ExamplesArgs, tol: Tolerance) -> CmdResult {
    let params = ExampleParams {
        genus: args.genus,
        handles: args.handles,
        max_len: args.max_length,
        max_cosets: args.max_cosets,
        tolerance: tol,
    };
    let reports = if args.name == "all" {
        run_all(&params).map_err(err)?
    } else {
        vec![run_example(&args.name, &params).map_err(err)?]
    };
    let text = reports.iter().map(example_text).collect();
    Ok(Outcome {
        text,
        json: json!(reports),
        ok: reports.iter().all(|r| r.passed()),
    })
}
