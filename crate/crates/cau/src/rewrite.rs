//! The permutation (tau) and substitution/projection (sigma) rewrite rules,
//! with a shared leftmost-outermost stepping engine.
//!
//! Root-rule tables return *every* rewrite applicable at the node, so the
//! deterministic stepper and the exhaustive-choice confluence oracle share one
//! source of truth. The combined sigma-tau system is terminating and
//! confluent; normalization still carries fuel so that a rule bug surfaces as
//! an error instead of a hang.

use crate::syntax::{Replacement, Subst, Term, Trail};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rules {
    pub tau: bool,
    pub sigma: bool,
}

pub const TAU: Rules = Rules {
    tau: true,
    sigma: false,
};
pub const SIGMA: Rules = Rules {
    tau: false,
    sigma: true,
};
pub const SIGMA_TAU: Rules = Rules {
    tau: true,
    sigma: true,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    /// Normalization did not reach a fixpoint within the fuel bound. The
    /// combined system is terminating, so this signals an implementation bug
    /// (or an absurdly small fuel override).
    #[error("rewrite fuel exhausted after {0} steps")]
    FuelExhausted(u64),
}

/// Default rewrite fuel; overridable through the `CAU_FUEL` variable.
pub fn default_fuel() -> u64 {
    std::env::var("CAU_FUEL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(10_000)
}

fn refl(q: &Trail) -> bool {
    matches!(q, Trail::Refl)
}

/// All tau rewrites applicable at the root of a term.
pub fn tau_term_roots(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Annot(q, m) => {
            if refl(q) {
                out.push((**m).clone());
            }
            if let Term::Annot(q2, m2) = &**m {
                out.push(Term::annot(
                    Trail::trans((**q).clone(), (**q2).clone()),
                    (**m2).clone(),
                ));
            }
        }
        Term::Bang(q, m) => {
            if let Term::Annot(q2, m2) = &**m {
                out.push(Term::bang(
                    Trail::trans((**q).clone(), (**q2).clone()),
                    (**m2).clone(),
                ));
            }
        }
        Term::Lam(b) => {
            if let Term::Annot(q, m) = &**b {
                out.push(Term::annot(
                    Trail::lam_t((**q).clone()),
                    Term::lam((**m).clone()),
                ));
            }
        }
        Term::App(f, a) => {
            if let Term::Annot(q, m) = &**f {
                out.push(Term::annot(
                    Trail::app_t((**q).clone(), Trail::Refl),
                    Term::app((**m).clone(), (**a).clone()),
                ));
            }
            if let Term::Annot(q, m) = &**a {
                out.push(Term::annot(
                    Trail::app_t(Trail::Refl, (**q).clone()),
                    Term::app((**f).clone(), (**m).clone()),
                ));
            }
        }
        Term::LetBang(d, b) => {
            if let Term::Annot(q, m) = &**d {
                out.push(Term::annot(
                    Trail::let_t((**q).clone(), Trail::Refl),
                    Term::let_bang((**m).clone(), (**b).clone()),
                ));
            }
            if let Term::Annot(q, m) = &**b {
                out.push(Term::annot(
                    Trail::let_t(Trail::Refl, (**q).clone()),
                    Term::let_bang((**d).clone(), (**m).clone()),
                ));
            }
        }
        Term::Inspect(theta) => {
            for (i, slot) in theta.slots().iter().enumerate() {
                if let Term::Annot(q, m) = slot {
                    let mut zeta = Replacement::uniform(Trail::Refl);
                    zeta = zeta.with_slot(i, (**q).clone());
                    out.push(Term::annot(
                        Trail::trpl(zeta),
                        Term::inspect(theta.with_slot(i, (**m).clone())),
                    ));
                }
            }
        }
        _ => {}
    }
    out
}

/// All tau rewrites applicable at the root of a trail.
pub fn tau_trail_roots(q: &Trail) -> Vec<Trail> {
    let mut out = Vec::new();
    match q {
        Trail::Trans(a, b) => {
            if refl(b) {
                out.push((**a).clone());
            }
            if refl(a) {
                out.push((**b).clone());
            }
            if let Trail::Trans(a1, a2) = &**a {
                out.push(Trail::trans(
                    (**a1).clone(),
                    Trail::trans((**a2).clone(), (**b).clone()),
                ));
            }
            match (&**a, &**b) {
                (Trail::LamT(x), Trail::LamT(y)) => {
                    out.push(Trail::lam_t(Trail::trans((**x).clone(), (**y).clone())));
                }
                (Trail::LamT(x), Trail::Trans(m, rest)) => {
                    if let Trail::LamT(y) = &**m {
                        out.push(Trail::trans(
                            Trail::lam_t(Trail::trans((**x).clone(), (**y).clone())),
                            (**rest).clone(),
                        ));
                    }
                }
                (Trail::AppT(x1, x2), Trail::AppT(y1, y2)) => {
                    out.push(Trail::app_t(
                        Trail::trans((**x1).clone(), (**y1).clone()),
                        Trail::trans((**x2).clone(), (**y2).clone()),
                    ));
                }
                (Trail::AppT(x1, x2), Trail::Trans(m, rest)) => {
                    if let Trail::AppT(y1, y2) = &**m {
                        out.push(Trail::trans(
                            Trail::app_t(
                                Trail::trans((**x1).clone(), (**y1).clone()),
                                Trail::trans((**x2).clone(), (**y2).clone()),
                            ),
                            (**rest).clone(),
                        ));
                    }
                }
                (Trail::LetT(x1, x2), Trail::LetT(y1, y2)) => {
                    out.push(Trail::let_t(
                        Trail::trans((**x1).clone(), (**y1).clone()),
                        Trail::trans((**x2).clone(), (**y2).clone()),
                    ));
                }
                (Trail::LetT(x1, x2), Trail::Trans(m, rest)) => {
                    if let Trail::LetT(y1, y2) = &**m {
                        out.push(Trail::trans(
                            Trail::let_t(
                                Trail::trans((**x1).clone(), (**y1).clone()),
                                Trail::trans((**x2).clone(), (**y2).clone()),
                            ),
                            (**rest).clone(),
                        ));
                    }
                }
                (Trail::TrplT(z1), Trail::TrplT(z2)) => {
                    out.push(Trail::trpl(pointwise_trans(z1, z2)));
                }
                (Trail::TrplT(z1), Trail::Trans(m, rest)) => {
                    if let Trail::TrplT(z2) = &**m {
                        out.push(Trail::trans(
                            Trail::trpl(pointwise_trans(z1, z2)),
                            (**rest).clone(),
                        ));
                    }
                }
                _ => {}
            }
        }
        Trail::LamT(a) => {
            if refl(a) {
                out.push(Trail::Refl);
            }
        }
        Trail::AppT(a, b) | Trail::LetT(a, b) => {
            if refl(a) && refl(b) {
                out.push(Trail::Refl);
            }
        }
        Trail::TrplT(zeta) => {
            if zeta.iter().all(refl) {
                out.push(Trail::Refl);
            }
        }
        _ => {}
    }
    out
}

fn pointwise_trans(z1: &Replacement<Trail>, z2: &Replacement<Trail>) -> Replacement<Trail> {
    let a = z1.slots();
    let b = z2.slots();
    Replacement::new([
        Trail::trans(a[0].clone(), b[0].clone()),
        Trail::trans(a[1].clone(), b[1].clone()),
        Trail::trans(a[2].clone(), b[2].clone()),
        Trail::trans(a[3].clone(), b[3].clone()),
        Trail::trans(a[4].clone(), b[4].clone()),
        Trail::trans(a[5].clone(), b[5].clone()),
        Trail::trans(a[6].clone(), b[6].clone()),
        Trail::trans(a[7].clone(), b[7].clone()),
        Trail::trans(a[8].clone(), b[8].clone()),
    ])
}

fn lift1(s: &Subst) -> Subst {
    Subst::cons(
        Term::Index(1),
        Subst::comp(s.clone(), Subst::Shift),
    )
}

/// All sigma rewrites applicable at the root of a term.
///
/// Index lookups use numeral indices directly, identifying the paper's
/// `1[shift^n]` normal forms with `Index(n+1)`.
pub fn sigma_term_roots(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Closure(body, s) => match &**body {
            Term::Index(n) => match &**s {
                Subst::Id => out.push(Term::Index(*n)),
                Subst::Shift => out.push(Term::Index(n + 1)),
                Subst::Cons(m, tail) => {
                    if *n == 1 {
                        out.push((**m).clone());
                    } else {
                        out.push(Term::closure(Term::Index(n - 1), (**tail).clone()));
                    }
                }
                Subst::Comp(a, b) => {
                    if matches!(&**a, Subst::Shift) {
                        out.push(Term::closure(Term::Index(n + 1), (**b).clone()));
                    }
                }
            },
            Term::Lam(m) => out.push(Term::lam(Term::closure((**m).clone(), lift1(s)))),
            Term::App(f, a) => out.push(Term::app(
                Term::closure((**f).clone(), (**s).clone()),
                Term::closure((**a).clone(), (**s).clone()),
            )),
            Term::LetBang(d, b) => out.push(Term::let_bang(
                Term::closure((**d).clone(), (**s).clone()),
                Term::closure((**b).clone(), lift1(s)),
            )),
            Term::Bang(q, m) => out.push(Term::bang(
                (**q).clone(),
                Term::closure((**m).clone(), (**s).clone()),
            )),
            Term::Annot(q, m) => out.push(Term::annot(
                (**q).clone(),
                Term::closure((**m).clone(), (**s).clone()),
            )),
            Term::Inspect(theta) => out.push(Term::inspect(
                theta.map(|m| Term::closure(m.clone(), (**s).clone())),
            )),
            Term::Closure(m, s1) => out.push(Term::closure(
                (**m).clone(),
                Subst::comp((**s1).clone(), (**s).clone()),
            )),
            Term::Erase(_) => {}
        },
        Term::Erase(body) => match &**body {
            Term::Index(n) => out.push(Term::Index(*n)),
            Term::Lam(m) => out.push(Term::lam(Term::erase((**m).clone()))),
            Term::App(f, a) => out.push(Term::app(
                Term::erase((**f).clone()),
                Term::erase((**a).clone()),
            )),
            Term::LetBang(d, b) => out.push(Term::let_bang(
                Term::erase((**d).clone()),
                Term::erase((**b).clone()),
            )),
            Term::Bang(q, m) => out.push(Term::bang((**q).clone(), (**m).clone())),
            Term::Annot(_, m) => out.push(Term::erase((**m).clone())),
            Term::Inspect(theta) => {
                out.push(Term::inspect(theta.map(|m| Term::erase(m.clone()))))
            }
            Term::Closure(_, _) | Term::Erase(_) => {}
        },
        _ => {}
    }
    out
}

/// All sigma rewrites applicable at the root of a trail (trail extraction).
pub fn sigma_trail_roots(q: &Trail) -> Vec<Trail> {
    let mut out = Vec::new();
    if let Trail::Extract(body) = q {
        match &**body {
            Term::Index(_) => out.push(Trail::Refl),
            Term::Lam(m) => out.push(Trail::lam_t(Trail::extract((**m).clone()))),
            Term::App(f, a) => out.push(Trail::app_t(
                Trail::extract((**f).clone()),
                Trail::extract((**a).clone()),
            )),
            Term::LetBang(d, b) => out.push(Trail::let_t(
                Trail::extract((**d).clone()),
                Trail::extract((**b).clone()),
            )),
            Term::Bang(_, _) => out.push(Trail::Refl),
            Term::Annot(q1, m) => out.push(Trail::trans(
                (**q1).clone(),
                Trail::extract((**m).clone()),
            )),
            Term::Inspect(theta) => {
                out.push(Trail::trpl(theta.map(|m| Trail::extract(m.clone()))))
            }
            Term::Closure(_, _) | Term::Erase(_) => {}
        }
    }
    out
}

/// All sigma rewrites applicable at the root of a substitution.
pub fn sigma_subst_roots(s: &Subst) -> Vec<Subst> {
    let mut out = Vec::new();
    if let Subst::Comp(a, b) = s {
        match (&**a, &**b) {
            (Subst::Id, _) => out.push((**b).clone()),
            (Subst::Shift, Subst::Id) => out.push(Subst::Shift),
            (Subst::Shift, Subst::Cons(_, tail)) => out.push((**tail).clone()),
            _ => {}
        }
        if let Subst::Cons(m, tail) = &**a {
            out.push(Subst::cons(
                Term::closure((**m).clone(), (**b).clone()),
                Subst::comp((**tail).clone(), (**b).clone()),
            ));
        }
        if let Subst::Comp(a1, a2) = &**a {
            out.push(Subst::comp(
                (**a1).clone(),
                Subst::comp((**a2).clone(), (**b).clone()),
            ));
        }
    }
    out
}

pub fn term_roots(t: &Term, rules: Rules) -> Vec<Term> {
    let mut out = Vec::new();
    if rules.tau {
        out.extend(tau_term_roots(t));
    }
    if rules.sigma {
        out.extend(sigma_term_roots(t));
    }
    out
}

pub fn trail_roots(q: &Trail, rules: Rules) -> Vec<Trail> {
    let mut out = Vec::new();
    if rules.tau {
        out.extend(tau_trail_roots(q));
    }
    if rules.sigma {
        out.extend(sigma_trail_roots(q));
    }
    out
}

pub fn subst_roots(s: &Subst, rules: Rules) -> Vec<Subst> {
    if rules.sigma {
        sigma_subst_roots(s)
    } else {
        Vec::new()
    }
}

/// One leftmost-outermost step; `None` when the term is a normal form.
pub fn step_term(t: &Term, rules: Rules) -> Option<Term> {
    if let Some(t2) = term_roots(t, rules).into_iter().next() {
        return Some(t2);
    }
    match t {
        Term::Index(_) => None,
        Term::Lam(b) => step_term(b, rules).map(Term::lam),
        Term::Erase(b) => step_term(b, rules).map(Term::erase),
        Term::App(f, a) => step_term(f, rules)
            .map(|f2| Term::app(f2, (**a).clone()))
            .or_else(|| step_term(a, rules).map(|a2| Term::app((**f).clone(), a2))),
        Term::LetBang(d, b) => step_term(d, rules)
            .map(|d2| Term::let_bang(d2, (**b).clone()))
            .or_else(|| step_term(b, rules).map(|b2| Term::let_bang((**d).clone(), b2))),
        Term::Bang(q, b) => step_trail(q, rules)
            .map(|q2| Term::bang(q2, (**b).clone()))
            .or_else(|| step_term(b, rules).map(|b2| Term::bang((**q).clone(), b2))),
        Term::Annot(q, b) => step_trail(q, rules)
            .map(|q2| Term::annot(q2, (**b).clone()))
            .or_else(|| step_term(b, rules).map(|b2| Term::annot((**q).clone(), b2))),
        Term::Inspect(theta) => {
            for (i, slot) in theta.slots().iter().enumerate() {
                if let Some(s2) = step_term(slot, rules) {
                    return Some(Term::inspect(theta.with_slot(i, s2)));
                }
            }
            None
        }
        Term::Closure(b, s) => step_term(b, rules)
            .map(|b2| Term::closure(b2, (**s).clone()))
            .or_else(|| step_subst(s, rules).map(|s2| Term::closure((**b).clone(), s2))),
    }
}

pub fn step_trail(q: &Trail, rules: Rules) -> Option<Trail> {
    if let Some(q2) = trail_roots(q, rules).into_iter().next() {
        return Some(q2);
    }
    match q {
        Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => None,
        Trail::Trans(a, b) => step_trail(a, rules)
            .map(|a2| Trail::trans(a2, (**b).clone()))
            .or_else(|| step_trail(b, rules).map(|b2| Trail::trans((**a).clone(), b2))),
        Trail::AppT(a, b) => step_trail(a, rules)
            .map(|a2| Trail::app_t(a2, (**b).clone()))
            .or_else(|| step_trail(b, rules).map(|b2| Trail::app_t((**a).clone(), b2))),
        Trail::LetT(a, b) => step_trail(a, rules)
            .map(|a2| Trail::let_t(a2, (**b).clone()))
            .or_else(|| step_trail(b, rules).map(|b2| Trail::let_t((**a).clone(), b2))),
        Trail::LamT(a) => step_trail(a, rules).map(Trail::lam_t),
        Trail::TrplT(zeta) => {
            for (i, slot) in zeta.slots().iter().enumerate() {
                if let Some(s2) = step_trail(slot, rules) {
                    return Some(Trail::trpl(zeta.with_slot(i, s2)));
                }
            }
            None
        }
        Trail::Extract(m) => step_term(m, rules).map(Trail::extract),
    }
}

pub fn step_subst(s: &Subst, rules: Rules) -> Option<Subst> {
    if let Some(s2) = subst_roots(s, rules).into_iter().next() {
        return Some(s2);
    }
    match s {
        Subst::Id | Subst::Shift => None,
        Subst::Cons(m, t) => step_term(m, rules)
            .map(|m2| Subst::cons(m2, (**t).clone()))
            .or_else(|| step_subst(t, rules).map(|t2| Subst::cons((**m).clone(), t2))),
        Subst::Comp(a, b) => step_subst(a, rules)
            .map(|a2| Subst::comp(a2, (**b).clone()))
            .or_else(|| step_subst(b, rules).map(|b2| Subst::comp((**a).clone(), b2))),
    }
}

pub fn normalize_term(t: &Term, rules: Rules, fuel: u64) -> Result<Term, RewriteError> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step_term(&cur, rules) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(RewriteError::FuelExhausted(fuel))
}

pub fn normalize_trail(q: &Trail, rules: Rules, fuel: u64) -> Result<Trail, RewriteError> {
    let mut cur = q.clone();
    for _ in 0..fuel {
        match step_trail(&cur, rules) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(RewriteError::FuelExhausted(fuel))
}

pub fn normalize_subst(s: &Subst, rules: Rules, fuel: u64) -> Result<Subst, RewriteError> {
    let mut cur = s.clone();
    for _ in 0..fuel {
        match step_subst(&cur, rules) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(RewriteError::FuelExhausted(fuel))
}

/// Every distinct single-step rewrite of a term (at any position).
pub fn all_steps_term(t: &Term, rules: Rules) -> Vec<Term> {
    let mut out = term_roots(t, rules);
    match t {
        Term::Index(_) => {}
        Term::Lam(b) => out.extend(all_steps_term(b, rules).into_iter().map(Term::lam)),
        Term::Erase(b) => out.extend(all_steps_term(b, rules).into_iter().map(Term::erase)),
        Term::App(f, a) => {
            out.extend(all_steps_term(f, rules).into_iter().map(|f2| Term::app(f2, (**a).clone())));
            out.extend(all_steps_term(a, rules).into_iter().map(|a2| Term::app((**f).clone(), a2)));
        }
        Term::LetBang(d, b) => {
            out.extend(
                all_steps_term(d, rules)
                    .into_iter()
                    .map(|d2| Term::let_bang(d2, (**b).clone())),
            );
            out.extend(
                all_steps_term(b, rules)
                    .into_iter()
                    .map(|b2| Term::let_bang((**d).clone(), b2)),
            );
        }
        Term::Bang(q, b) => {
            out.extend(
                all_steps_trail(q, rules)
                    .into_iter()
                    .map(|q2| Term::bang(q2, (**b).clone())),
            );
            out.extend(
                all_steps_term(b, rules)
                    .into_iter()
                    .map(|b2| Term::bang((**q).clone(), b2)),
            );
        }
        Term::Annot(q, b) => {
            out.extend(
                all_steps_trail(q, rules)
                    .into_iter()
                    .map(|q2| Term::annot(q2, (**b).clone())),
            );
            out.extend(
                all_steps_term(b, rules)
                    .into_iter()
                    .map(|b2| Term::annot((**q).clone(), b2)),
            );
        }
        Term::Inspect(theta) => {
            for (i, slot) in theta.slots().iter().enumerate() {
                out.extend(
                    all_steps_term(slot, rules)
                        .into_iter()
                        .map(|s2| Term::inspect(theta.with_slot(i, s2))),
                );
            }
        }
        Term::Closure(b, s) => {
            out.extend(
                all_steps_term(b, rules)
                    .into_iter()
                    .map(|b2| Term::closure(b2, (**s).clone())),
            );
            out.extend(
                all_steps_subst(s, rules)
                    .into_iter()
                    .map(|s2| Term::closure((**b).clone(), s2)),
            );
        }
    }
    out
}

pub fn all_steps_trail(q: &Trail, rules: Rules) -> Vec<Trail> {
    let mut out = trail_roots(q, rules);
    match q {
        Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => {}
        Trail::Trans(a, b) => {
            out.extend(
                all_steps_trail(a, rules)
                    .into_iter()
                    .map(|a2| Trail::trans(a2, (**b).clone())),
            );
            out.extend(
                all_steps_trail(b, rules)
                    .into_iter()
                    .map(|b2| Trail::trans((**a).clone(), b2)),
            );
        }
        Trail::AppT(a, b) => {
            out.extend(
                all_steps_trail(a, rules)
                    .into_iter()
                    .map(|a2| Trail::app_t(a2, (**b).clone())),
            );
            out.extend(
                all_steps_trail(b, rules)
                    .into_iter()
                    .map(|b2| Trail::app_t((**a).clone(), b2)),
            );
        }
        Trail::LetT(a, b) => {
            out.extend(
                all_steps_trail(a, rules)
                    .into_iter()
                    .map(|a2| Trail::let_t(a2, (**b).clone())),
            );
            out.extend(
                all_steps_trail(b, rules)
                    .into_iter()
                    .map(|b2| Trail::let_t((**a).clone(), b2)),
            );
        }
        Trail::LamT(a) => out.extend(all_steps_trail(a, rules).into_iter().map(Trail::lam_t)),
        Trail::TrplT(zeta) => {
            for (i, slot) in zeta.slots().iter().enumerate() {
                out.extend(
                    all_steps_trail(slot, rules)
                        .into_iter()
                        .map(|s2| Trail::trpl(zeta.with_slot(i, s2))),
                );
            }
        }
        Trail::Extract(m) => out.extend(all_steps_term(m, rules).into_iter().map(Trail::extract)),
    }
    out
}

pub fn all_steps_subst(s: &Subst, rules: Rules) -> Vec<Subst> {
    let mut out = subst_roots(s, rules);
    match s {
        Subst::Id | Subst::Shift => {}
        Subst::Cons(m, t) => {
            out.extend(
                all_steps_term(m, rules)
                    .into_iter()
                    .map(|m2| Subst::cons(m2, (**t).clone())),
            );
            out.extend(
                all_steps_subst(t, rules)
                    .into_iter()
                    .map(|t2| Subst::cons((**m).clone(), t2)),
            );
        }
        Subst::Comp(a, b) => {
            out.extend(
                all_steps_subst(a, rules)
                    .into_iter()
                    .map(|a2| Subst::comp(a2, (**b).clone())),
            );
            out.extend(
                all_steps_subst(b, rules)
                    .into_iter()
                    .map(|b2| Subst::comp((**a).clone(), b2)),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::church;

    fn tau_nf(t: &Term) -> Term {
        normalize_term(t, TAU, default_fuel()).unwrap()
    }

    #[test]
    fn tau_unit_annotation() {
        let t = Term::annot(Trail::Refl, church(1));
        assert_eq!(step_term(&t, TAU), Some(church(1)));
    }

    #[test]
    fn tau_bang_absorption() {
        let t = Term::bang(
            Trail::Beta,
            Term::annot(Trail::Beta, Term::Index(1)),
        );
        assert_eq!(
            step_term(&t, TAU),
            Some(Term::bang(
                Trail::trans(Trail::Beta, Trail::Beta),
                Term::Index(1)
            ))
        );
    }

    #[test]
    fn tau_trail_collapse() {
        let q = Trail::app_t(Trail::Refl, Trail::Refl);
        assert_eq!(step_trail(&q, TAU), Some(Trail::Refl));
    }

    #[test]
    fn tau_lambda_pushout() {
        let t = Term::lam(Term::annot(Trail::Beta, Term::Index(1)));
        assert_eq!(
            tau_nf(&t),
            Term::annot(Trail::lam_t(Trail::Beta), Term::lam(Term::Index(1)))
        );
    }

    #[test]
    fn tau_double_annotation_under_bang() {
        let t = Term::bang(
            Trail::Refl,
            Term::annot(Trail::Beta, Term::annot(Trail::Beta, Term::Index(1))),
        );
        assert_eq!(
            tau_nf(&t),
            Term::bang(Trail::trans(Trail::Beta, Trail::Beta), Term::Index(1))
        );
    }

    #[test]
    fn sigma_lookup() {
        let t = Term::closure(Term::Index(1), Subst::cons(church(3), Subst::Id));
        assert_eq!(step_term(&t, SIGMA), Some(church(3)));
    }

    #[test]
    fn sigma_erase_lambda() {
        let t = Term::erase(Term::lam(Term::Index(1)));
        assert_eq!(
            step_term(&t, SIGMA),
            Some(Term::lam(Term::erase(Term::Index(1))))
        );
    }

    #[test]
    fn sigma_extract_bang() {
        let q = Trail::extract(Term::bang(Trail::Beta, church(2)));
        assert_eq!(step_trail(&q, SIGMA), Some(Trail::Refl));
    }

    #[test]
    fn sigmatau_closure_beta_shape() {
        // (1 1)[ (\.1) . id ]  ->*  (\.1) (\.1)
        let id = Term::lam(Term::Index(1));
        let t = Term::closure(
            Term::app(Term::Index(1), Term::Index(1)),
            Subst::cons(id.clone(), Subst::Id),
        );
        assert_eq!(
            normalize_term(&t, SIGMA_TAU, default_fuel()).unwrap(),
            Term::app(id.clone(), id)
        );
    }

    #[test]
    fn sigmatau_erase_annotation() {
        let t = Term::erase(Term::annot(Trail::Beta, Term::Index(1)));
        assert_eq!(
            normalize_term(&t, SIGMA_TAU, default_fuel()).unwrap(),
            Term::Index(1)
        );
    }

    #[test]
    fn sigmatau_extract_double_annotation() {
        let q = Trail::extract(Term::annot(
            Trail::Beta,
            Term::annot(Trail::Beta, Term::Index(1)),
        ));
        assert_eq!(
            normalize_trail(&q, SIGMA_TAU, default_fuel()).unwrap(),
            Trail::trans(Trail::Beta, Trail::Beta)
        );
    }

    #[test]
    fn shift_chains_resolve_to_numerals() {
        // 1[shift o shift] = index 3
        let t = Term::closure(Term::Index(1), Subst::comp(Subst::Shift, Subst::Shift));
        assert_eq!(
            normalize_term(&t, SIGMA, default_fuel()).unwrap(),
            Term::Index(3)
        );
    }
}
