//! Seeded term generation and the property harness: confluence and
//! termination of the rewrite relations, the two simulation directions,
//! machine soundness and validity, the projection and substitution lemmas,
//! and the fixed anachronism counterexample.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus;
use crate::machine;
use crate::naive;
use crate::rewrite::{self, RewriteError, Rules, SIGMA, SIGMA_TAU, TAU};
use crate::sigma::{self, sigmatau_equiv, sigmatau_normalize, sigmatau_normalize_trail};
use crate::syntax::{Replacement, Subst, Term, Trail};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub size: u32,
    pub bang: bool,
    pub inspect: bool,
    pub closure: bool,
    pub erase: bool,
    pub extract: bool,
    pub annot: bool,
    pub closed: bool,
}

impl GenSpec {
    /// Pure closed terms, the machine's input language.
    pub fn pure_closed(seed: u64, size: u32) -> Self {
        GenSpec {
            seed,
            size,
            bang: true,
            inspect: true,
            closure: false,
            erase: false,
            extract: false,
            annot: false,
            closed: true,
        }
    }

    /// Pure open terms with local annotations, the language of the naive
    /// reduction relation.
    pub fn pure_open(seed: u64, size: u32) -> Self {
        GenSpec {
            annot: true,
            closed: false,
            ..GenSpec::pure_closed(seed, size)
        }
    }

    /// Terms of the full explicit-substitution syntax.
    pub fn sigma_rich(seed: u64, size: u32) -> Self {
        GenSpec {
            seed,
            size,
            bang: true,
            inspect: true,
            closure: true,
            erase: true,
            extract: true,
            annot: true,
            closed: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("no term of size {0} satisfies the generation constraints")]
    Unsatisfiable(u32),
}

/// Deterministic term generation from a seed, within a node budget.
pub fn gen_term(spec: &GenSpec) -> Result<Term, GenError> {
    if spec.size == 0 || (spec.closed && spec.size < 2) {
        return Err(GenError::Unsatisfiable(spec.size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let t = gen(&mut rng, spec.size, 0, spec);
    let free = t.max_free_index();
    if spec.closed && free > 0 {
        // close stray indices introduced through substitution leaves
        Ok((0..free).fold(t, |acc, _| Term::lam(acc)))
    } else {
        Ok(t)
    }
}

fn gen(rng: &mut ChaCha8Rng, budget: u32, depth: u32, spec: &GenSpec) -> Term {
    // candidate constructors with weights; binders and applications 3:1
    // against the audited constructs to keep terms redex-rich
    let mut options: Vec<(u32, u8)> = Vec::new();
    if depth > 0 || !spec.closed {
        options.push((2, 0)); // index
    }
    if budget >= 2 {
        options.push((3, 1)); // lam
    }
    if budget >= 3 {
        options.push((3, 2)); // app
        options.push((2, 3)); // let
    }
    if spec.bang && budget >= 3 {
        options.push((1, 4));
    }
    if spec.annot && budget >= 3 {
        options.push((1, 5));
    }
    if spec.inspect && budget >= 10 {
        options.push((1, 6));
    }
    if spec.closure && budget >= 3 {
        options.push((1, 7));
    }
    if spec.erase && budget >= 2 {
        options.push((1, 8));
    }
    let choice = if options.is_empty() {
        1 // closed leaf position with no bindings: force a lambda
    } else {
        let total: u32 = options.iter().map(|(w, _)| w).sum();
        let mut roll = rng.gen_range(0..total);
        let mut pick = options[0].1;
        for (w, c) in &options {
            if roll < *w {
                pick = *c;
                break;
            }
            roll -= w;
        }
        pick
    };
    match choice {
        0 => {
            let max = if spec.closed { depth } else { depth + 1 };
            Term::Index(rng.gen_range(1..=max))
        }
        1 => Term::lam(gen(rng, budget.saturating_sub(1), depth + 1, spec)),
        2 => {
            let left = rng.gen_range(1..budget - 1);
            Term::app(
                gen(rng, left, depth, spec),
                gen(rng, budget - 1 - left, depth, spec),
            )
        }
        3 => {
            let left = rng.gen_range(1..budget - 1);
            Term::let_bang(
                gen(rng, left, depth, spec),
                gen(rng, budget - 1 - left, depth + 1, spec),
            )
        }
        4 => {
            let q = gen_trail(rng, (budget - 2).min(4), depth, spec);
            Term::bang(q, gen(rng, budget - 2, depth, spec))
        }
        5 => {
            let q = gen_trail(rng, (budget - 2).min(4), depth, spec);
            Term::annot(q, gen(rng, budget - 2, depth, spec))
        }
        6 => {
            let per = ((budget - 1) / 9).max(1);
            let mut slots = Vec::with_capacity(9);
            for _ in 0..9 {
                slots.push(gen(rng, per, depth, spec));
            }
            let slots: [Term; 9] = slots.try_into().expect("nine generated branches");
            Term::inspect(Replacement::new(slots))
        }
        7 => {
            let left = rng.gen_range(1..budget - 1);
            Term::closure(
                gen(rng, left, depth, spec),
                gen_subst(rng, budget - 1 - left, depth, spec),
            )
        }
        _ => Term::erase(gen(rng, budget.saturating_sub(1), depth, spec)),
    }
}

fn gen_trail(rng: &mut ChaCha8Rng, budget: u32, depth: u32, spec: &GenSpec) -> Trail {
    let leaves = [
        Trail::Refl,
        Trail::Beta,
        Trail::BetaBang,
        Trail::TrailInspect,
    ];
    if budget < 2 {
        return leaves[rng.gen_range(0..4)].clone();
    }
    match rng.gen_range(0..8) {
        0 | 1 => leaves[rng.gen_range(0..4)].clone(),
        2 if budget >= 3 => Trail::trans(
            gen_trail(rng, (budget - 1) / 2, depth, spec),
            gen_trail(rng, (budget - 1) / 2, depth, spec),
        ),
        3 => Trail::lam_t(gen_trail(rng, budget - 1, depth, spec)),
        4 if budget >= 3 => Trail::app_t(
            gen_trail(rng, (budget - 1) / 2, depth, spec),
            gen_trail(rng, (budget - 1) / 2, depth, spec),
        ),
        5 if budget >= 3 => Trail::let_t(
            gen_trail(rng, (budget - 1) / 2, depth, spec),
            gen_trail(rng, (budget - 1) / 2, depth, spec),
        ),
        6 if spec.extract => Trail::extract(gen(rng, budget - 1, depth, spec)),
        _ => leaves[rng.gen_range(0..4)].clone(),
    }
}

fn gen_subst(rng: &mut ChaCha8Rng, budget: u32, depth: u32, spec: &GenSpec) -> Subst {
    if budget < 3 {
        return if rng.gen_bool(0.5) { Subst::Id } else { Subst::Shift };
    }
    match rng.gen_range(0..4) {
        0 => Subst::Id,
        1 => Subst::Shift,
        2 => {
            let left = rng.gen_range(1..budget - 1);
            Subst::cons(
                gen(rng, left, depth, spec),
                gen_subst(rng, budget - 1 - left, depth, spec),
            )
        }
        _ => {
            let left = rng.gen_range(1..budget - 1);
            Subst::comp(
                gen_subst(rng, left, depth, spec),
                gen_subst(rng, budget - 1 - left, depth, spec),
            )
        }
    }
}

/// Every term of size at most `max_size` over a restricted alphabet: index 1,
/// lambda, application, let, bang and annotation with `r`/`b` trails, and
/// closures under `id`/`shift`. Used for the exhaustive confluence runs.
pub fn enumerate_terms(max_size: u32) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size as usize + 1];
    for n in 1..=max_size as usize {
        let mut out = Vec::new();
        if n == 1 {
            out.push(Term::Index(1));
        }
        for t in &by_size[n - 1] {
            out.push(Term::lam(t.clone()));
        }
        if n >= 3 {
            for t in &by_size[n - 2] {
                for q in [Trail::Refl, Trail::Beta] {
                    out.push(Term::bang(q.clone(), t.clone()));
                    out.push(Term::annot(q, t.clone()));
                }
                for s in [Subst::Id, Subst::Shift] {
                    out.push(Term::closure(t.clone(), s));
                }
            }
            for a in 1..n - 1 {
                let b = n - 1 - a;
                for f in &by_size[a] {
                    for x in &by_size[b] {
                        out.push(Term::app(f.clone(), x.clone()));
                        out.push(Term::let_bang(f.clone(), x.clone()));
                    }
                }
            }
        }
        by_size[n] = out;
    }
    by_size.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSet {
    Tau,
    Sigma,
    SigmaTau,
    BetaSigma,
    CauPrincipal,
}

impl RuleSet {
    fn rewrite_rules(self) -> Option<Rules> {
        match self {
            RuleSet::Tau => Some(TAU),
            RuleSet::Sigma => Some(SIGMA),
            RuleSet::SigmaTau => Some(SIGMA_TAU),
            _ => None,
        }
    }
}

/// All single-step successors of a term under the chosen rule set.
pub fn enumerate_one_step(m: &Term, rules: RuleSet) -> Vec<Term> {
    match rules {
        RuleSet::Tau | RuleSet::Sigma | RuleSet::SigmaTau => {
            rewrite::all_steps_term(m, rules.rewrite_rules().unwrap())
        }
        RuleSet::BetaSigma => {
            let mut out = rewrite::all_steps_term(m, SIGMA_TAU);
            for (path, _) in sigma::beta_sigma_redexes(m) {
                if let Ok(n) = sigma::beta_sigma_contract(m, &path) {
                    out.push(n);
                }
            }
            out
        }
        RuleSet::CauPrincipal => {
            let mut out = Vec::new();
            for (path, _) in naive::find_principal_redexes(m) {
                if let Ok(n) = naive::principal_contract(m, &path) {
                    if let Ok(n) = naive::tau_normalize(&n) {
                        out.push(n);
                    }
                }
            }
            out
        }
    }
}

/// For the confluent rule sets, joinability is equality of normal forms; for
/// the beta-bearing sets, a bounded breadth-first search over normalized
/// reducts from each side, looking for a common one.
pub fn joinable(x: &Term, y: &Term, rules: RuleSet, bound: u32) -> Result<bool, RewriteError> {
    match rules {
        RuleSet::Tau | RuleSet::Sigma | RuleSet::SigmaTau => {
            let r = rules.rewrite_rules().unwrap();
            let fuel = rewrite::default_fuel();
            Ok(rewrite::normalize_term(x, r, fuel)? == rewrite::normalize_term(y, r, fuel)?)
        }
        RuleSet::BetaSigma | RuleSet::CauPrincipal => {
            let rx = reachable_normal_forms(x, rules, bound)?;
            let ry = reachable_normal_forms(y, rules, bound)?;
            Ok(rx.iter().any(|t| ry.contains(t)))
        }
    }
}

fn reachable_normal_forms(
    x: &Term,
    rules: RuleSet,
    bound: u32,
) -> Result<HashSet<String>, RewriteError> {
    let start = match rules {
        RuleSet::CauPrincipal => naive::tau_normalize(x)?,
        _ => sigmatau_normalize(x)?,
    };
    let mut seen = HashSet::new();
    seen.insert(start.to_string());
    let mut frontier = vec![start];
    for _ in 0..bound {
        let mut next = Vec::new();
        for t in &frontier {
            for s in enumerate_one_step(t, rules) {
                let n = match rules {
                    RuleSet::CauPrincipal => s, // already tau-normalized
                    _ => sigmatau_normalize(&s)?,
                };
                if seen.insert(n.to_string()) {
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
}

/// All focused-beta successors: principal contraction of the normal form,
/// refocused.
pub fn beta_focused_step(m: &Term) -> Result<Vec<Term>, RewriteError> {
    let n = sigmatau_normalize(m)?;
    let mut out = Vec::new();
    for (path, _) in naive::find_principal_redexes(&n) {
        if let Ok(c) = naive::principal_contract(&n, &path) {
            out.push(sigma::focus(&c)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub property: String,
    pub trials: u64,
    pub failures: u64,
    pub inconclusive: u64,
    pub counterexample: Option<String>,
    pub detail: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn render(&self) -> String {
        let mut s = if self.passed() {
            format!(
                "{}: pass ({} trials, {} inconclusive)",
                self.property, self.trials, self.inconclusive
            )
        } else {
            format!(
                "{}: FAIL ({} trials, {} failures)",
                self.property, self.trials, self.failures
            )
        };
        if let Some(c) = &self.counterexample {
            s.push_str(&format!("\n  counterexample: {c}"));
        }
        if let Some(d) = &self.detail {
            s.push_str(&format!("\n  {d}"));
        }
        s
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PropertyError {
    #[error("unknown property {0:?}")]
    Unknown(String),
}

pub const PROPERTY_NAMES: [&str; 12] = [
    "tau-confluence",
    "sigmatau-confluence",
    "sigmatau-termination",
    "simulation-forward",
    "simulation-backward",
    "relativized-confluence",
    "machine-soundness",
    "machine-validity",
    "projection-agreement",
    "substitution-lemma",
    "admissible-rules",
    "fig1-anachronism",
];

pub fn check_property(name: &str, spec: &GenSpec, count: u64) -> Result<Report, PropertyError> {
    match name {
        "tau-confluence" => Ok(confluence_property(name, spec, count, RuleSet::Tau)),
        "sigmatau-confluence" => Ok(confluence_property(name, spec, count, RuleSet::SigmaTau)),
        "sigmatau-termination" => Ok(termination_property(name, spec, count)),
        "simulation-forward" => Ok(simulation_forward(name, spec, count)),
        "simulation-backward" => Ok(simulation_backward(name, spec, count)),
        "relativized-confluence" => Ok(relativized_confluence(name, spec, count)),
        "machine-soundness" => Ok(machine_property(name, spec, count, MachineCheck::Soundness)),
        "machine-validity" => Ok(machine_property(name, spec, count, MachineCheck::Validity)),
        "projection-agreement" => Ok(projection_agreement(name, spec, count)),
        "substitution-lemma" => Ok(substitution_lemma(name, spec, count)),
        "admissible-rules" => Ok(machine_property(
            name,
            spec,
            count,
            MachineCheck::AdmissibleRules,
        )),
        "fig1-anachronism" => Ok(fig1_anachronism(name)),
        other => Err(PropertyError::Unknown(other.to_string())),
    }
}

enum Trial {
    Pass,
    Inconclusive,
    Fail(String),
}

/// Generic trial loop: exhaustive when the size budget is small, seeded
/// random otherwise, with greedy subterm shrinking of the first failure.
fn run_trials(
    name: &str,
    spec: &GenSpec,
    count: u64,
    check: impl Fn(&Term) -> Trial,
) -> Report {
    let terms: Vec<Term> = if spec.size <= 10 {
        enumerate_terms(spec.size)
            .into_iter()
            .filter(|t| admissible_for(spec, t))
            .collect()
    } else {
        (0..count)
            .filter_map(|i| {
                gen_term(&GenSpec {
                    seed: spec.seed.wrapping_add(i),
                    ..spec.clone()
                })
                .ok()
            })
            .collect()
    };
    let mut report = Report {
        property: name.to_string(),
        trials: 0,
        failures: 0,
        inconclusive: 0,
        counterexample: None,
        detail: None,
    };
    for t in terms {
        report.trials += 1;
        match check(&t) {
            Trial::Pass => {}
            Trial::Inconclusive => report.inconclusive += 1,
            Trial::Fail(detail) => {
                report.failures += 1;
                let small = shrink(t, &|s| matches!(check(s), Trial::Fail(_)));
                report.counterexample = Some(small.to_string());
                report.detail = Some(detail);
                break;
            }
        }
    }
    report
}

fn admissible_for(spec: &GenSpec, t: &Term) -> bool {
    if spec.closed && !t.is_closed() {
        return false;
    }
    if !spec.closure || !spec.erase {
        // the restricted enumeration alphabet has no extract trails, so
        // purity is exactly "no closure, no erase"
        let pure_needed = !spec.closure && !spec.erase;
        if pure_needed && !t.is_pure() {
            return false;
        }
    }
    if !spec.annot && contains_annot(t) {
        return false;
    }
    true
}

fn contains_annot(t: &Term) -> bool {
    match t {
        Term::Annot(_, _) => true,
        Term::Index(_) => false,
        Term::Lam(b) | Term::Erase(b) => contains_annot(b),
        Term::App(a, b) | Term::LetBang(a, b) => contains_annot(a) || contains_annot(b),
        Term::Bang(_, b) => contains_annot(b),
        Term::Inspect(theta) => theta.iter().any(contains_annot),
        Term::Closure(b, s) => contains_annot(b) || subst_contains_annot(s),
    }
}

fn subst_contains_annot(s: &Subst) -> bool {
    match s {
        Subst::Id | Subst::Shift => false,
        Subst::Cons(m, t) => contains_annot(m) || subst_contains_annot(t),
        Subst::Comp(a, b) => subst_contains_annot(a) || subst_contains_annot(b),
    }
}

/// Greedy shrinking: replace the counterexample by any proper subterm that
/// still fails, repeatedly.
fn shrink(mut cur: Term, fails: &dyn Fn(&Term) -> bool) -> Term {
    loop {
        let mut found = None;
        for s in direct_subterms(&cur) {
            if fails(&s) {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => cur = s,
            None => return cur,
        }
    }
}

fn direct_subterms(t: &Term) -> Vec<Term> {
    match t {
        Term::Index(_) => Vec::new(),
        Term::Lam(b) | Term::Erase(b) => vec![(**b).clone()],
        Term::App(a, b) | Term::LetBang(a, b) => vec![(**a).clone(), (**b).clone()],
        Term::Bang(q, b) | Term::Annot(q, b) => {
            let mut out = vec![(**b).clone()];
            out.extend(trail_subterms(q));
            out
        }
        Term::Inspect(theta) => theta.iter().cloned().collect(),
        Term::Closure(b, s) => {
            let mut out = vec![(**b).clone()];
            out.extend(subst_subterms(s));
            out
        }
    }
}

fn trail_subterms(q: &Trail) -> Vec<Term> {
    match q {
        Trail::Extract(m) => vec![(**m).clone()],
        Trail::Trans(a, b) | Trail::AppT(a, b) | Trail::LetT(a, b) => {
            let mut out = trail_subterms(a);
            out.extend(trail_subterms(b));
            out
        }
        Trail::LamT(a) => trail_subterms(a),
        Trail::TrplT(zeta) => zeta.iter().flat_map(trail_subterms).collect(),
        _ => Vec::new(),
    }
}

fn subst_subterms(s: &Subst) -> Vec<Term> {
    match s {
        Subst::Cons(m, t) => {
            let mut out = vec![(**m).clone()];
            out.extend(subst_subterms(t));
            out
        }
        Subst::Comp(a, b) => {
            let mut out = subst_subterms(a);
            out.extend(subst_subterms(b));
            out
        }
        _ => Vec::new(),
    }
}

fn confluence_property(name: &str, spec: &GenSpec, count: u64, rules: RuleSet) -> Report {
    let rewrite_rules = rules.rewrite_rules().expect("confluent rule set");
    run_trials(name, spec, count, |t| {
        let fuel = rewrite::default_fuel();
        let nf = match rewrite::normalize_term(t, rewrite_rules, fuel) {
            Ok(n) => n,
            Err(_) => return Trial::Inconclusive,
        };
        // idempotence
        match rewrite::normalize_term(&nf, rewrite_rules, fuel) {
            Ok(again) if again == nf => {}
            Ok(again) => {
                return Trial::Fail(format!("normalization not idempotent: {nf} vs {again}"))
            }
            Err(_) => return Trial::Inconclusive,
        }
        // every one-step choice reaches the same normal form
        for s in enumerate_one_step(t, rules) {
            match rewrite::normalize_term(&s, rewrite_rules, fuel) {
                Ok(n) if n == nf => {}
                Ok(n) => {
                    return Trial::Fail(format!(
                        "distinct normal forms {nf} and {n} via successor {s}"
                    ))
                }
                Err(_) => return Trial::Inconclusive,
            }
        }
        Trial::Pass
    })
}

fn termination_property(name: &str, spec: &GenSpec, count: u64) -> Report {
    run_trials(name, spec, count, |t| {
        match rewrite::normalize_term(t, SIGMA_TAU, rewrite::default_fuel()) {
            Ok(_) => Trial::Pass,
            Err(RewriteError::FuelExhausted(f)) => {
                Trial::Fail(format!("no sigma-tau normal form within {f} steps"))
            }
        }
    })
}

fn simulation_forward(name: &str, spec: &GenSpec, count: u64) -> Report {
    run_trials(name, spec, count, |t| {
        let m = match naive::tau_normalize(t) {
            Ok(m) => m,
            Err(_) => return Trial::Inconclusive,
        };
        for (path, _) in naive::find_principal_redexes(&m) {
            let naive_next = match naive::principal_contract(&m, &path)
                .map_err(|e| e.to_string())
                .and_then(|n| naive::tau_normalize(&n).map_err(|e| e.to_string()))
            {
                Ok(n) => n,
                Err(_) => return Trial::Inconclusive,
            };
            let sigma_next = match sigma::beta_sigma_contract(&m, &path) {
                Ok(n) => n,
                Err(e) => {
                    return Trial::Fail(format!(
                        "no lazy contraction at a principal redex of {m}: {e}"
                    ))
                }
            };
            match sigmatau_equiv(&sigma_next, &naive_next) {
                Ok(true) => {}
                Ok(false) => {
                    return Trial::Fail(format!(
                        "lazy contraction diverges at {m}: {sigma_next} vs {naive_next}"
                    ))
                }
                Err(_) => return Trial::Inconclusive,
            }
        }
        Trial::Pass
    })
}

fn simulation_backward(name: &str, spec: &GenSpec, count: u64) -> Report {
    run_trials(name, spec, count, |t| {
        let t_nf = match sigmatau_normalize(t) {
            Ok(n) => n,
            Err(_) => return Trial::Inconclusive,
        };
        // sigma-tau steps preserve the normal form exactly
        for s in rewrite::all_steps_term(t, SIGMA_TAU) {
            match sigmatau_normalize(&s) {
                Ok(n) if n == t_nf => {}
                Ok(n) => {
                    return Trial::Fail(format!(
                        "sigma-tau step changed the normal form: {t_nf} vs {n}"
                    ))
                }
                Err(_) => return Trial::Inconclusive,
            }
        }
        // every lazy Beta step maps to a naive reduction on normal forms. A
        // redex placed inside a substitution can be duplicated (or dropped)
        // when the substitution distributes, so the match may take several
        // naive steps; redexes outside substitutions take at most one.
        for (path, _) in sigma::beta_sigma_redexes(t) {
            let n = match sigma::beta_sigma_contract(t, &path) {
                Ok(n) => n,
                Err(_) => continue, // malformed history in a generated trail
            };
            let n_nf = match sigmatau_normalize(&n) {
                Ok(n) => n,
                Err(_) => return Trial::Inconclusive,
            };
            if n_nf == t_nf || one_cau_step_reaches(&t_nf, &n_nf) {
                continue;
            }
            match guided_cau_reaches(&t_nf, &n_nf, 4096) {
                Some(true) => {}
                Some(false) => {
                    return Trial::Fail(format!(
                        "lazy step from {t} not matched: {t_nf} cannot reach {n_nf}"
                    ))
                }
                None => return Trial::Inconclusive,
            }
        }
        Trial::Pass
    })
}

/// Directed search for `to` among the iterated principal contractions of
/// `from`: best-first on the structural difference to the target. The
/// matching sequence contracts the residuals of the lazy redex and each of
/// those contractions shrinks the difference, so the search walks almost
/// straight to the target; unrelated contractions look worse and stay in
/// the queue. `Some(false)` means the whole reduction graph was explored
/// without finding `to`; `None` means a cap was hit and the search is
/// inconclusive.
fn guided_cau_reaches(from: &Term, to: &Term, node_cap: usize) -> Option<bool> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut seen = HashSet::new();
    seen.insert(from.to_string());
    let mut states = vec![from.clone()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((diff_cost_term(from, to), Reverse(0usize))));
    let mut expanded = 0usize;
    while let Some(Reverse((_, Reverse(i)))) = heap.pop() {
        let cur = states[i].clone();
        if cur == *to {
            return Some(true);
        }
        expanded += 1;
        if expanded > node_cap {
            return None;
        }
        for (p, _) in naive::find_principal_redexes(&cur) {
            let Ok(n) = naive::principal_contract(&cur, &p) else {
                continue;
            };
            let Ok(n) = naive::tau_normalize(&n) else {
                return None;
            };
            if seen.insert(n.to_string()) {
                // ties break toward the most recently discovered state,
                // keeping the search depth-first along an improving path
                heap.push(Reverse((diff_cost_term(&n, to), Reverse(states.len()))));
                states.push(n);
            }
        }
    }
    Some(false)
}

/// Node-count estimate of how far apart two terms are: equal subtrees cost
/// nothing, same-constructor nodes recurse, anything else costs the size of
/// both subtrees.
fn diff_cost_term(a: &Term, b: &Term) -> usize {
    if a == b {
        return 0;
    }
    match (a, b) {
        (Term::Lam(x), Term::Lam(y)) | (Term::Erase(x), Term::Erase(y)) => diff_cost_term(x, y),
        (Term::App(f, x), Term::App(g, y)) | (Term::LetBang(f, x), Term::LetBang(g, y)) => {
            diff_cost_term(f, g) + diff_cost_term(x, y)
        }
        (Term::Bang(p, x), Term::Bang(q, y)) | (Term::Annot(p, x), Term::Annot(q, y)) => {
            diff_cost_trail(p, q) + diff_cost_term(x, y)
        }
        (Term::Inspect(t1), Term::Inspect(t2)) => t1
            .iter()
            .zip(t2.iter())
            .map(|(x, y)| diff_cost_term(x, y))
            .sum(),
        (Term::Closure(x, s), Term::Closure(y, t)) => {
            diff_cost_term(x, y) + diff_cost_subst(s, t)
        }
        _ => a.size() + b.size(),
    }
}

fn diff_cost_trail(a: &Trail, b: &Trail) -> usize {
    if a == b {
        return 0;
    }
    match (a, b) {
        (Trail::LamT(x), Trail::LamT(y)) => diff_cost_trail(x, y),
        (Trail::Trans(x1, x2), Trail::Trans(y1, y2))
        | (Trail::AppT(x1, x2), Trail::AppT(y1, y2))
        | (Trail::LetT(x1, x2), Trail::LetT(y1, y2)) => {
            diff_cost_trail(x1, y1) + diff_cost_trail(x2, y2)
        }
        (Trail::TrplT(z1), Trail::TrplT(z2)) => z1
            .iter()
            .zip(z2.iter())
            .map(|(x, y)| diff_cost_trail(x, y))
            .sum(),
        (Trail::Extract(x), Trail::Extract(y)) => diff_cost_term(x, y),
        _ => a.size() + b.size(),
    }
}

fn diff_cost_subst(a: &Subst, b: &Subst) -> usize {
    if a == b {
        return 0;
    }
    match (a, b) {
        (Subst::Cons(x, s), Subst::Cons(y, t)) => diff_cost_term(x, y) + diff_cost_subst(s, t),
        (Subst::Comp(x1, x2), Subst::Comp(y1, y2)) => {
            diff_cost_subst(x1, y1) + diff_cost_subst(x2, y2)
        }
        _ => a.size() + b.size(),
    }
}

/// Whether some principal contraction of `from`, tau-normalized, equals `to`.
fn one_cau_step_reaches(from: &Term, to: &Term) -> bool {
    naive::find_principal_redexes(from).into_iter().any(|(p, _)| {
        naive::principal_contract(from, &p)
            .ok()
            .and_then(|n| naive::tau_normalize(&n).ok())
            .map(|n| n == *to)
            .unwrap_or(false)
    })
}

fn relativized_confluence(name: &str, spec: &GenSpec, count: u64) -> Report {
    run_trials(name, spec, count, |t| {
        let redexes = sigma::beta_sigma_redexes(t);
        if redexes.len() < 2 {
            return Trial::Pass;
        }
        let mut derivs = Vec::new();
        for (path, _) in redexes.iter().take(2) {
            match sigma::beta_sigma_contract(t, path) {
                Ok(n) => derivs.push(n),
                Err(_) => return Trial::Pass, // not a well-formed history
            }
        }
        let (n1, n2) = (&derivs[0], &derivs[1]);
        let (s1, s2) = match (sigmatau_normalize(n1), sigmatau_normalize(n2)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Trial::Inconclusive,
        };
        let naive_joinable = match joinable(&s1, &s2, RuleSet::CauPrincipal, 8) {
            Ok(j) => j,
            Err(_) => return Trial::Inconclusive,
        };
        if !naive_joinable {
            return Trial::Pass; // theorem is conditional on naive joinability
        }
        match joinable(n1, n2, RuleSet::BetaSigma, 8) {
            Ok(true) => Trial::Pass,
            Ok(false) => Trial::Fail(format!(
                "derivatives of {t} join naively but not lazily: {n1} vs {n2}"
            )),
            Err(_) => Trial::Inconclusive,
        }
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MachineCheck {
    Soundness,
    Validity,
    AdmissibleRules,
}

fn machine_property(name: &str, spec: &GenSpec, count: u64, mode: MachineCheck) -> Report {
    run_trials(name, spec, count, |t| machine_trial(t, mode))
}

fn machine_trial(t: &Term, mode: MachineCheck) -> Trial {
    let Ok(c0) = machine::inject(t) else {
        return Trial::Pass; // enumerated corpora may contain open terms
    };
    let fuel = 500;
    let (outcome, trace) = match machine::run(&c0, fuel) {
        Ok(r) => r,
        Err(_) => return Trial::Inconclusive,
    };
    if mode == MachineCheck::Validity {
        for (_, cfg) in &trace {
            if machine::validate(cfg) != machine::ConfigClass::TermConfig {
                return Trial::Fail(format!("invalid reachable configuration running {t}"));
            }
        }
        return Trial::Pass;
    }
    let mut prev = match machine::denote_config(&c0)
        .map_err(|e| e.to_string())
        .and_then(|d| sigmatau_normalize(&d).map_err(|e| e.to_string()))
    {
        Ok(d) => d,
        Err(_) => return Trial::Inconclusive,
    };
    for (rule, cfg) in &trace {
        let cur = match machine::denote_config(cfg)
            .map_err(|e| e.to_string())
            .and_then(|d| sigmatau_normalize(&d).map_err(|e| e.to_string()))
        {
            Ok(d) => d,
            Err(_) => return Trial::Inconclusive,
        };
        match rule {
            2 | 5 | 9 => {
                if !one_cau_step_reaches(&prev, &cur) {
                    return Trial::Fail(format!(
                        "machine rule {rule} is not one naive step on {t}: {prev} vs {cur}"
                    ));
                }
            }
            _ if mode == MachineCheck::Soundness => {
                if prev != cur {
                    return Trial::Fail(format!(
                        "machine rule {rule} changed the denotation on {t}: {prev} vs {cur}"
                    ));
                }
            }
            _ => {}
        }
        prev = cur;
    }
    if mode == MachineCheck::AdmissibleRules {
        return Trial::Pass;
    }
    // end-to-end agreement with the reference call-by-value evaluator
    match outcome {
        machine::RunOutcome::Final(v) => {
            let reference = match naive::cau_eval_cbv(t, rewrite::default_fuel()) {
                Ok(r) => r,
                Err(naive::EvalError::FuelExhausted(_)) => return Trial::Inconclusive,
                Err(_) => {
                    return Trial::Fail(format!(
                        "machine finished but the reference evaluator is stuck on {t}"
                    ))
                }
            };
            match sigmatau_equiv(&machine::value_term(&v), &reference) {
                Ok(true) => Trial::Pass,
                Ok(false) => Trial::Fail(format!(
                    "final value disagrees with the reference evaluator on {t}"
                )),
                Err(_) => Trial::Inconclusive,
            }
        }
        machine::RunOutcome::Stuck(_) | machine::RunOutcome::FuelExhausted => Trial::Inconclusive,
    }
}

/// Structural trail erasure of a local-trail term (no explicit operators).
pub fn meta_erase(m: &Term) -> Term {
    match m {
        Term::Index(n) => Term::Index(*n),
        Term::Lam(b) => Term::lam(meta_erase(b)),
        Term::App(a, b) => Term::app(meta_erase(a), meta_erase(b)),
        Term::LetBang(a, b) => Term::let_bang(meta_erase(a), meta_erase(b)),
        Term::Bang(q, b) => Term::bang((**q).clone(), (**b).clone()),
        Term::Annot(_, b) => meta_erase(b),
        Term::Inspect(theta) => Term::inspect(theta.map(meta_erase)),
        Term::Closure(_, _) | Term::Erase(_) => {
            unreachable!("meta projections apply to explicit-operator-free terms")
        }
    }
}

/// Structural trail extraction of a local-trail term.
pub fn meta_extract(m: &Term) -> Trail {
    match m {
        Term::Index(_) | Term::Bang(_, _) => Trail::Refl,
        Term::Lam(b) => Trail::lam_t(meta_extract(b)),
        Term::App(a, b) => Trail::app_t(meta_extract(a), meta_extract(b)),
        Term::LetBang(a, b) => Trail::let_t(meta_extract(a), meta_extract(b)),
        Term::Annot(q, b) => Trail::trans((**q).clone(), meta_extract(b)),
        Term::Inspect(theta) => Trail::trpl(theta.map(meta_extract)),
        Term::Closure(_, _) | Term::Erase(_) => {
            unreachable!("meta projections apply to explicit-operator-free terms")
        }
    }
}

fn projection_agreement(name: &str, spec: &GenSpec, count: u64) -> Report {
    run_trials(name, spec, count, |t| {
        if !t.is_pure() {
            return Trial::Pass;
        }
        let erased = match sigmatau_normalize(&Term::erase(t.clone())) {
            Ok(e) => e,
            Err(_) => return Trial::Inconclusive,
        };
        let meta_erased = match sigmatau_normalize(&meta_erase(t)) {
            Ok(e) => e,
            Err(_) => return Trial::Inconclusive,
        };
        if erased != meta_erased {
            return Trial::Fail(format!(
                "explicit erasure of {t} gives {erased}, structural gives {meta_erased}"
            ));
        }
        let extracted = match sigmatau_normalize_trail(&Trail::extract(t.clone())) {
            Ok(q) => q,
            Err(_) => return Trial::Inconclusive,
        };
        let meta_extracted = match sigmatau_normalize_trail(&meta_extract(t)) {
            Ok(q) => q,
            Err(_) => return Trial::Inconclusive,
        };
        if extracted != meta_extracted {
            return Trial::Fail(format!("explicit and structural extraction differ on {t}"));
        }
        // focusing preserves the sigma-tau class
        match sigma::focus(t).and_then(|f| {
            Ok(sigmatau_normalize(&f)? == sigmatau_normalize(t)?)
        }) {
            Ok(true) => Trial::Pass,
            Ok(false) => Trial::Fail(format!("focusing changed the class of {t}")),
            Err(_) => Trial::Inconclusive,
        }
    })
}

fn substitution_lemma(name: &str, spec: &GenSpec, count: u64) -> Report {
    let mut report = Report {
        property: name.to_string(),
        trials: 0,
        failures: 0,
        inconclusive: 0,
        counterexample: None,
        detail: None,
    };
    for i in 0..count {
        report.trials += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(i));
        let m_spec = GenSpec {
            seed: rng.gen(),
            ..spec.clone()
        };
        let Ok(m) = gen_term(&m_spec) else {
            continue;
        };
        let k = rng.gen_range(0..=2u32);
        let p = rng.gen_range(0..=2u32);
        let ns: Vec<Term> = (0..k)
            .map(|_| {
                gen_term(&GenSpec {
                    seed: rng.gen(),
                    size: (spec.size / 2).max(2),
                    ..spec.clone()
                })
                .unwrap_or(Term::Index(1))
            })
            .collect();
        let s = ns
            .iter()
            .rev()
            .fold(Subst::shift_n(p), |acc, n| Subst::cons(n.clone(), acc));
        let explicit = sigmatau_normalize(&Term::closure(m.clone(), s));
        let meta = sigmatau_normalize(&naive::meta_subst(&m, p, &ns));
        match (explicit, meta) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => {
                report.failures += 1;
                report.counterexample = Some(m.to_string());
                report.detail = Some(format!(
                    "explicit substitution gives {a}, meta-level gives {b} (p={p}, k={k})"
                ));
                break;
            }
            _ => report.inconclusive += 1,
        }
    }
    report
}

/// The lazy beta rule of the naive explicit-substitution semantics, without
/// projections: contracts an application at the root, keeping the argument's
/// local trail inside the substitution. This is the rule the counterexample
/// shows to be anachronistic.
pub fn naive_explicit_beta(m: &Term) -> Option<Term> {
    let Term::App(f, a) = m else { return None };
    let Term::Lam(body) = &**f else { return None };
    Some(Term::annot(
        Trail::Beta,
        Term::closure((**body).clone(), Subst::cons((**a).clone(), Subst::Id)),
    ))
}

fn fig1_anachronism(name: &str) -> Report {
    let mut report = Report {
        property: name.to_string(),
        trials: 1,
        failures: 0,
        inconclusive: 0,
        counterexample: None,
        detail: None,
    };
    let mut fail = |detail: String| {
        report.failures += 1;
        report.counterexample = Some(corpus::fig1_term().to_string());
        report.detail = Some(detail);
    };
    let t = corpus::fig1_term();
    let run = || -> Result<(Term, Term, bool, bool), String> {
        // left branch: contract first, normalize after
        let left = naive_explicit_beta(&t).ok_or("no beta redex at the root")?;
        let left = sigmatau_normalize(&left).map_err(|e| e.to_string())?;
        // right branch: normalize first, then contract under the annotation
        let tn = naive::tau_normalize(&t).map_err(|e| e.to_string())?;
        let right = naive::cau_step(&tn)
            .map_err(|e| e.to_string())?
            .ok_or("no naive step after normalization")?;
        let j = joinable(&left, &right, RuleSet::BetaSigma, 8).map_err(|e| e.to_string())?;
        // the normalize-first branch is the naive engine's own result
        let naive_matches = right == sigmatau_normalize(&right).map_err(|e| e.to_string())?;
        Ok((left, right, j, naive_matches))
    };
    match run() {
        Ok((left, right, j, naive_matches)) => {
            let want_left = Term::annot(corpus::fig1_left_trail(), strip_trail(&left));
            let want_right = Term::annot(corpus::fig1_right_trail(), strip_trail(&right));
            if left != want_left {
                fail(format!("anachronistic branch gave {left}, wanted {want_left}"));
            } else if right != want_right {
                fail(format!("normalized branch gave {right}, wanted {want_right}"));
            } else if j {
                fail("the two branches are joinable, expected non-joinable".to_string());
            } else if !naive_matches {
                fail("the normalized branch is not in naive normal shape".to_string());
            } else {
                report.detail = Some(format!("endpoints {left} and {right} are not joinable"));
            }
        }
        Err(e) => fail(e),
    }
    report
}

fn strip_trail(m: &Term) -> Term {
    match m {
        Term::Annot(_, b) => (**b).clone(),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_bounded() {
        for seed in 0..20 {
            let spec = GenSpec::sigma_rich(seed, 30);
            let a = gen_term(&spec).unwrap();
            let b = gen_term(&spec).unwrap();
            assert_eq!(a, b);
        }
        let spec = GenSpec::pure_closed(7, 25);
        let t = gen_term(&spec).unwrap();
        assert!(t.is_closed());
        assert!(t.is_pure());
    }

    #[test]
    fn generation_edge_cases() {
        assert_eq!(
            gen_term(&GenSpec::pure_closed(0, 0)),
            Err(GenError::Unsatisfiable(0))
        );
        assert_eq!(
            gen_term(&GenSpec::pure_closed(0, 1)),
            Err(GenError::Unsatisfiable(1))
        );
        assert_eq!(
            gen_term(&GenSpec::pure_open(0, 1)).unwrap(),
            Term::Index(1)
        );
        assert_eq!(
            gen_term(&GenSpec::pure_closed(123, 2)).unwrap(),
            Term::lam(Term::Index(1))
        );
    }

    #[test]
    fn enumeration_counts_and_membership() {
        let ts = enumerate_terms(3);
        assert!(ts.contains(&Term::Index(1)));
        assert!(ts.contains(&Term::lam(Term::lam(Term::Index(1)))));
        assert!(ts.contains(&Term::annot(Trail::Beta, Term::Index(1))));
        assert!(ts.iter().all(|t| t.size() <= 3));
        // sizes 1, 2, 3 of the restricted alphabet: 1 + 1 + 9 terms
        assert_eq!(ts.len(), 11);
    }

    #[test]
    fn one_step_enumeration_matches_the_tables() {
        let t = Term::annot(Trail::Refl, Term::Index(1));
        assert_eq!(enumerate_one_step(&t, RuleSet::Tau), vec![Term::Index(1)]);
        assert!(enumerate_one_step(&crate::syntax::church(2), RuleSet::BetaSigma).is_empty());
    }

    #[test]
    fn joinability_basics() {
        let t = Term::annot(Trail::Refl, Term::lam(Term::Index(1)));
        let nf = naive::tau_normalize(&t).unwrap();
        assert!(joinable(&t, &nf, RuleSet::Tau, 0).unwrap());
        assert!(joinable(&t, &t, RuleSet::BetaSigma, 0).unwrap());
    }

    #[test]
    fn focused_beta_on_identity_redex() {
        let t = Term::app(Term::lam(Term::Index(1)), Term::lam(Term::Index(1)));
        let succ = beta_focused_step(&t).unwrap();
        assert_eq!(
            succ,
            vec![Term::annot(Trail::Beta, Term::lam(Term::Index(1)))]
        );
        assert!(beta_focused_step(&crate::syntax::church(2)).unwrap().is_empty());
    }

    #[test]
    fn unknown_property_is_rejected() {
        let spec = GenSpec::pure_open(0, 5);
        assert!(matches!(
            check_property("no-such-property", &spec, 1),
            Err(PropertyError::Unknown(_))
        ));
    }

    #[test]
    fn duplicated_substitution_redex_needs_several_naive_steps() {
        // A lazy contraction under a substitution is distributed to every
        // occurrence by the sigma rules, so matching it naively can take
        // many principal steps. This term puts an inspection redex under a
        // cons whose head holds a beta redex that ends up in all nine
        // branches plus the argument.
        let theta = Replacement::new(std::array::from_fn(|_| Term::Index(1)));
        let body = Term::app(Term::inspect(theta), Term::Index(1));
        let bang = Term::bang(
            Trail::extract(Term::lam(Term::erase(Term::Index(1)))),
            body,
        );
        let head = Term::app(
            Term::lam(Term::Index(1)),
            Term::let_bang(Term::lam(Term::Index(1)), Term::Index(1)),
        );
        let t = Term::closure(bang, Subst::cons(head, Subst::Shift));
        let t_nf = sigmatau_normalize(&t).unwrap();
        let mut saw_multi_step = false;
        for (path, _) in sigma::beta_sigma_redexes(&t) {
            let n = sigma::beta_sigma_contract(&t, &path).unwrap();
            let n_nf = sigmatau_normalize(&n).unwrap();
            if n_nf == t_nf || one_cau_step_reaches(&t_nf, &n_nf) {
                continue;
            }
            saw_multi_step = true;
            assert_eq!(guided_cau_reaches(&t_nf, &n_nf, 4096), Some(true));
        }
        assert!(saw_multi_step, "expected a redex that needs several steps");
    }

    #[test]
    fn quick_property_smoke() {
        // small randomized runs of every property; the full budgets live in
        // the acceptance suite
        let cases: [(&str, GenSpec, u64); 12] = [
            ("tau-confluence", GenSpec::pure_open(1, 15), 60),
            ("sigmatau-confluence", GenSpec::sigma_rich(2, 15), 60),
            ("sigmatau-termination", GenSpec::sigma_rich(3, 30), 60),
            ("simulation-forward", GenSpec::pure_open(4, 15), 60),
            ("simulation-backward", GenSpec::sigma_rich(5, 15), 60),
            ("relativized-confluence", GenSpec::pure_open(6, 12), 40),
            ("machine-soundness", GenSpec::pure_closed(7, 15), 30),
            ("machine-validity", GenSpec::pure_closed(8, 15), 30),
            ("projection-agreement", GenSpec::pure_open(9, 15), 60),
            ("substitution-lemma", GenSpec::pure_open(10, 12), 60),
            ("admissible-rules", GenSpec::pure_closed(11, 15), 30),
            ("fig1-anachronism", GenSpec::pure_open(12, 5), 1),
        ];
        for (name, spec, count) in cases {
            let report = check_property(name, &spec, count).unwrap();
            assert!(report.passed(), "{}", report.render());
            assert!(report.trials > 0, "{name} ran no trials");
        }
    }

    #[test]
    fn meta_projections_on_a_known_term() {
        // lam(b |> 1): erasure drops the annotation, extraction keeps it
        let t = Term::lam(Term::annot(Trail::Beta, Term::Index(1)));
        assert_eq!(meta_erase(&t), Term::lam(Term::Index(1)));
        assert_eq!(meta_extract(&t), Trail::lam_t(Trail::trans(Trail::Beta, Trail::Refl)));
    }
}
