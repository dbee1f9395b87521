//! The acceptance gate: the worked examples as golden tests and the
//! theorem-level properties at their full trial budgets. Each criterion
//! prints a single pass/fail line.

use cau::corpus;
use cau::gen::{check_property, GenSpec};
use cau::naive;
use cau::syntax::church;

fn verdict(criterion: u32, desc: &str, pass: bool, detail: String) {
    println!(
        "criterion {criterion}: {} - {desc}",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({desc}): {detail}");
}

fn property_verdict(criterion: u32, desc: &str, name: &str, spec: GenSpec, count: u64) {
    let report = check_property(name, &spec, count).expect("known property");
    verdict(criterion, desc, report.passed(), report.render());
}

#[test]
fn criterion_01_example2_trails() {
    let mut cur = naive::tau_normalize(&corpus::example2_term()).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for expected in corpus::example2_trails() {
        cur = naive::cau_step(&cur).unwrap().expect("a redex remains");
        let got = match &cur {
            cau::syntax::Term::Bang(q, _) => (**q).clone(),
            other => {
                pass = false;
                detail = format!("no bang at the root of {other}");
                break;
            }
        };
        let want = naive::tau_normalize_trail(&expected).unwrap();
        if got != want {
            pass = false;
            detail = format!("step trail {got}, expected {want}");
            break;
        }
    }
    verdict(1, "pair-construction bang trails after steps 1 and 2", pass, detail);
}

#[test]
fn criterion_02_example3_counting() {
    let counted =
        naive::apply_replacement(&corpus::example3_trail(), &corpus::theta_plus()).unwrap();
    let exact = counted == corpus::example3_expected();
    let normal = corpus::beta_normalize(&counted).unwrap();
    let decodes = normal == church(2);
    verdict(
        2,
        "trail replacement counts two contractions",
        exact && decodes,
        format!("replacement gave {counted}, normal form {normal}"),
    );
}

#[test]
fn criterion_03_example4_trail() {
    let cur = naive::tau_normalize(&corpus::example4_term()).unwrap();
    let next = naive::cau_step(&cur).unwrap().expect("a redex");
    let (pass, detail) = match &next {
        cau::syntax::Term::Bang(q, _) => {
            let want = naive::tau_normalize_trail(&corpus::example4_trail()).unwrap();
            ((**q).clone() == want, format!("trail {q}, expected {want}"))
        }
        other => (false, format!("no bang at the root of {other}")),
    };
    verdict(3, "let-unpacking bang trail after one step", pass, detail);
}

#[test]
fn criterion_04_fig1_reproduction() {
    property_verdict(
        4,
        "anachronistic and normalized branches are not joinable",
        "fig1-anachronism",
        GenSpec::pure_open(0, 5),
        1,
    );
}

#[test]
fn criterion_05_confluence_exhaustive_tau() {
    let report = check_property("tau-confluence", &GenSpec::pure_open(0, 9), 0).unwrap();
    let pass = report.passed() && report.inconclusive == 0;
    verdict(
        5,
        "tau confluence, exhaustive corpus of size <= 9",
        pass,
        report.render(),
    );
}

#[test]
fn criterion_05_confluence_exhaustive_sigmatau() {
    let report = check_property("sigmatau-confluence", &GenSpec::sigma_rich(0, 9), 0).unwrap();
    let pass = report.passed() && report.inconclusive == 0;
    verdict(
        5,
        "sigma-tau confluence, exhaustive corpus of size <= 9",
        pass,
        report.render(),
    );
}

#[test]
fn criterion_05_confluence_random() {
    for (name, spec) in [
        ("tau-confluence", GenSpec::pure_open(11, 25)),
        ("sigmatau-confluence", GenSpec::sigma_rich(12, 25)),
    ] {
        let report = check_property(name, &spec, 1000).unwrap();
        let pass = report.passed() && report.inconclusive == 0;
        verdict(
            5,
            &format!("{name}, 1000 random terms of size <= 25"),
            pass,
            report.render(),
        );
    }
}

#[test]
fn criterion_06_forward_simulation() {
    property_verdict(
        6,
        "each naive step is matched by a lazy contraction",
        "simulation-forward",
        GenSpec::pure_open(21, 25),
        1000,
    );
}

#[test]
fn criterion_07_backward_simulation() {
    property_verdict(
        7,
        "each lazy step projects to a naive reduction on normal forms",
        "simulation-backward",
        GenSpec::sigma_rich(31, 25),
        1000,
    );
}

#[test]
fn criterion_08_machine_soundness() {
    property_verdict(
        8,
        "machine transitions respect the per-rule denotation contract",
        "machine-soundness",
        GenSpec::pure_closed(41, 25),
        500,
    );
}

#[test]
fn criterion_09_machine_validity() {
    property_verdict(
        9,
        "every reachable machine configuration is valid",
        "machine-validity",
        GenSpec::pure_closed(41, 25),
        500,
    );
}

#[test]
fn criterion_10_projection_and_substitution_lemmas() {
    property_verdict(
        10,
        "projection agreement and focus preservation",
        "projection-agreement",
        GenSpec::pure_open(51, 20),
        1000,
    );
    property_verdict(
        10,
        "explicit and meta-level substitution agree",
        "substitution-lemma",
        GenSpec::pure_open(52, 16),
        1000,
    );
}
