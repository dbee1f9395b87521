//! Reference semantics of the plain audited calculus: trail-replacement
//! application, meta-level substitution, principal contractions, and the
//! combined step (contract, then tau-normalize).
//!
//! Everything here works on pure terms (no explicit closures, erasures or
//! extractions); the sigma-refined engine lives in `sigma`.

use crate::path::{get_term_at, node_child, replace_term_at, NodeRef, TermPath};
use crate::rewrite::{self, RewriteError, TAU};
use crate::syntax::{Replacement, Term, Trail, TrailCtor};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("trail contains an explicit extraction")]
    ImpureTrail,
    #[error("no principal redex at the given position")]
    NotARedex,
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation fuel exhausted after {0} contractions")]
    FuelExhausted(u64),
    #[error("stuck: {0}")]
    Stuck(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

pub fn tau_step(t: &Term) -> Option<Term> {
    rewrite::step_term(t, TAU)
}

pub fn tau_step_trail(q: &Trail) -> Option<Trail> {
    rewrite::step_trail(q, TAU)
}

pub fn tau_normalize(t: &Term) -> Result<Term, RewriteError> {
    rewrite::normalize_term(t, TAU, rewrite::default_fuel())
}

pub fn tau_normalize_trail(q: &Trail) -> Result<Trail, RewriteError> {
    rewrite::normalize_trail(q, TAU, rewrite::default_fuel())
}

/// The term `q theta` of Definition 1: structural recursion over a pure
/// trail, mapping each constructor to the corresponding replacement branch
/// applied to the recursively converted children.
pub fn apply_replacement(q: &Trail, theta: &Replacement<Term>) -> Result<Term, StepError> {
    Ok(match q {
        Trail::Refl => theta.get(TrailCtor::Refl).clone(),
        Trail::Beta => theta.get(TrailCtor::Beta).clone(),
        Trail::BetaBang => theta.get(TrailCtor::BetaBang).clone(),
        Trail::TrailInspect => theta.get(TrailCtor::TrailInspect).clone(),
        Trail::Trans(a, b) => Term::app(
            Term::app(
                theta.get(TrailCtor::Trans).clone(),
                apply_replacement(a, theta)?,
            ),
            apply_replacement(b, theta)?,
        ),
        Trail::LamT(a) => Term::app(
            theta.get(TrailCtor::Lam).clone(),
            apply_replacement(a, theta)?,
        ),
        Trail::AppT(a, b) => Term::app(
            Term::app(
                theta.get(TrailCtor::App).clone(),
                apply_replacement(a, theta)?,
            ),
            apply_replacement(b, theta)?,
        ),
        Trail::LetT(a, b) => Term::app(
            Term::app(
                theta.get(TrailCtor::Let).clone(),
                apply_replacement(a, theta)?,
            ),
            apply_replacement(b, theta)?,
        ),
        Trail::TrplT(zeta) => {
            let mut acc = theta.get(TrailCtor::Trpl).clone();
            for sub in zeta.iter() {
                acc = Term::app(acc, apply_replacement(sub, theta)?);
            }
            acc
        }
        Trail::Extract(_) => return Err(StepError::ImpureTrail),
    })
}

/// Shift dangling indices above `cutoff` up by `by`.
fn lift(t: &Term, by: u32, cutoff: u32) -> Term {
    match t {
        Term::Index(n) => {
            if *n > cutoff {
                Term::Index(n + by)
            } else {
                Term::Index(*n)
            }
        }
        Term::Lam(b) => Term::lam(lift(b, by, cutoff + 1)),
        Term::App(f, a) => Term::app(lift(f, by, cutoff), lift(a, by, cutoff)),
        Term::LetBang(d, b) => Term::let_bang(lift(d, by, cutoff), lift(b, by, cutoff + 1)),
        Term::Bang(q, b) => Term::bang((**q).clone(), lift(b, by, cutoff)),
        Term::Annot(q, b) => Term::annot((**q).clone(), lift(b, by, cutoff)),
        Term::Inspect(theta) => Term::inspect(theta.map(|m| lift(m, by, cutoff))),
        Term::Closure(_, _) | Term::Erase(_) => {
            unreachable!("meta-level substitution applies to sigma-normal terms only")
        }
    }
}

/// Simultaneous meta-level substitution `M{p <- Ns}`: index `m <= k` becomes
/// `Ns[m]` (with `k` the vector length), index `k + j` becomes `j + p`, and
/// binders extend the vector with index 1 while lifting every entry.
///
/// Trails are left untouched: pure trails contain no terms.
pub fn meta_subst(m: &Term, p: u32, ns: &[Term]) -> Term {
    let k = ns.len() as u32;
    match m {
        Term::Index(n) => {
            if *n <= k {
                ns[(*n - 1) as usize].clone()
            } else {
                Term::Index(n - k + p)
            }
        }
        Term::Lam(b) => {
            let mut ns2 = Vec::with_capacity(ns.len() + 1);
            ns2.push(Term::Index(1));
            ns2.extend(ns.iter().map(|t| lift(t, 1, 0)));
            Term::lam(meta_subst(b, p + 1, &ns2))
        }
        Term::App(f, a) => Term::app(meta_subst(f, p, ns), meta_subst(a, p, ns)),
        Term::LetBang(d, b) => {
            let mut ns2 = Vec::with_capacity(ns.len() + 1);
            ns2.push(Term::Index(1));
            ns2.extend(ns.iter().map(|t| lift(t, 1, 0)));
            Term::let_bang(meta_subst(d, p, ns), meta_subst(b, p + 1, &ns2))
        }
        Term::Bang(q, b) => Term::bang((**q).clone(), meta_subst(b, p, ns)),
        Term::Annot(q, b) => Term::annot((**q).clone(), meta_subst(b, p, ns)),
        Term::Inspect(theta) => Term::inspect(theta.map(|t| meta_subst(t, p, ns))),
        Term::Closure(_, _) | Term::Erase(_) => {
            unreachable!("meta-level substitution applies to sigma-normal terms only")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RedexKind {
    Beta,
    BetaBang,
    /// Trail inspection; records the nearest enclosing bang, which is
    /// reachable through a bang-free context by construction.
    Inspect { bang_path: TermPath },
}

/// All principal-contraction positions in leftmost-outermost order.
pub fn find_principal_redexes(m: &Term) -> Vec<(TermPath, RedexKind)> {
    let mut out = Vec::new();
    collect_redexes(m, &TermPath::root(), None, &mut out);
    out
}

fn collect_redexes(
    t: &Term,
    path: &TermPath,
    bang: Option<&TermPath>,
    out: &mut Vec<(TermPath, RedexKind)>,
) {
    match t {
        Term::App(f, a) => {
            if matches!(&**f, Term::Lam(_)) {
                out.push((path.clone(), RedexKind::Beta));
            }
            collect_redexes(f, &path.child(0), bang, out);
            collect_redexes(a, &path.child(1), bang, out);
        }
        Term::LetBang(d, b) => {
            if matches!(&**d, Term::Bang(_, _)) {
                out.push((path.clone(), RedexKind::BetaBang));
            }
            collect_redexes(d, &path.child(0), bang, out);
            collect_redexes(b, &path.child(1), bang, out);
        }
        Term::Inspect(theta) => {
            if let Some(bp) = bang {
                out.push((
                    path.clone(),
                    RedexKind::Inspect {
                        bang_path: bp.clone(),
                    },
                ));
            }
            for (i, slot) in theta.slots().iter().enumerate() {
                collect_redexes(slot, &path.child(i as u8), bang, out);
            }
        }
        Term::Lam(b) => collect_redexes(b, &path.child(0), bang, out),
        Term::Bang(_, b) => {
            let here = path.clone();
            collect_redexes(b, &path.child(1), Some(&here), out);
        }
        Term::Annot(_, b) => collect_redexes(b, &path.child(1), bang, out),
        Term::Index(_) => {}
        Term::Closure(b, _) | Term::Erase(b) => {
            // explicit nodes do not occur in pure terms; be permissive and
            // keep scanning so callers get sensible answers on mixed input
            collect_redexes(b, &path.child(0), bang, out);
        }
    }
}

/// Trail of the innermost bang strictly above `at`, when one exists.
pub fn bang_trail_above(m: &Term, at: &TermPath) -> Option<Trail> {
    let mut cur = NodeRef::T(m);
    let mut found = None;
    for &i in &at.0 {
        if let NodeRef::T(Term::Bang(q, _)) = cur {
            if i == 1 {
                found = Some((**q).clone());
            }
        }
        cur = node_child(cur, i)?;
    }
    found
}

/// Contract the principal redex at `at` (no tau-normalization).
pub fn principal_contract(m: &Term, at: &TermPath) -> Result<Term, StepError> {
    let node = get_term_at(m, at).ok_or(StepError::NotARedex)?;
    let contractum = match node {
        Term::App(f, a) => match &**f {
            Term::Lam(body) => Term::annot(Trail::Beta, meta_subst(body, 0, &[(**a).clone()])),
            _ => return Err(StepError::NotARedex),
        },
        Term::LetBang(d, b) => match &**d {
            Term::Bang(q, dm) => Term::annot(
                Trail::BetaBang,
                meta_subst(b, 0, &[Term::annot((**q).clone(), (**dm).clone())]),
            ),
            _ => return Err(StepError::NotARedex),
        },
        Term::Inspect(theta) => {
            let q = bang_trail_above(m, at).ok_or(StepError::NotARedex)?;
            Term::annot(Trail::TrailInspect, apply_replacement(&q, theta)?)
        }
        _ => return Err(StepError::NotARedex),
    };
    replace_term_at(m, at, contractum).ok_or(StepError::NotARedex)
}

/// One combined reduction step: contract the leftmost-outermost principal
/// redex, then tau-normalize. `None` when no principal redex exists.
pub fn cau_step(m: &Term) -> Result<Option<Term>, StepError> {
    let Some((path, _)) = find_principal_redexes(m).into_iter().next() else {
        return Ok(None);
    };
    let contracted = principal_contract(m, &path)?;
    Ok(Some(tau_normalize(&contracted)?))
}

enum Search {
    Value,
    Redex(TermPath),
    Stuck(String),
}

fn cbv_search(t: &Term, path: &TermPath, bang: Option<&TermPath>) -> Search {
    match t {
        Term::Lam(_) => Search::Value,
        Term::Index(_) => Search::Stuck("free variable at evaluation position".into()),
        Term::Bang(_, b) => {
            let here = path.clone();
            match cbv_search(b, &path.child(1), Some(&here)) {
                Search::Value => Search::Value,
                other => other,
            }
        }
        Term::Annot(_, b) => cbv_search(b, &path.child(1), bang),
        Term::App(f, a) => match cbv_search(f, &path.child(0), bang) {
            Search::Value => match cbv_search(a, &path.child(1), bang) {
                Search::Value => {
                    if matches!(&**f, Term::Lam(_)) {
                        Search::Redex(path.clone())
                    } else {
                        Search::Stuck("application of a non-lambda value".into())
                    }
                }
                other => other,
            },
            other => other,
        },
        Term::LetBang(d, _) => match cbv_search(d, &path.child(0), bang) {
            Search::Value => {
                if matches!(&**d, Term::Bang(_, _)) {
                    Search::Redex(path.clone())
                } else {
                    Search::Stuck("let definiens is not a bang".into())
                }
            }
            other => other,
        },
        Term::Inspect(theta) => {
            for (i, slot) in theta.slots().iter().enumerate() {
                match cbv_search(slot, &path.child(i as u8), bang) {
                    Search::Value => {}
                    other => return other,
                }
            }
            match bang {
                Some(_) => Search::Redex(path.clone()),
                None => Search::Stuck("inspection-locked".into()),
            }
        }
        Term::Closure(_, _) | Term::Erase(_) => {
            Search::Stuck("explicit node in pure evaluator".into())
        }
    }
}

/// Weak call-by-value evaluation mirroring the abstract machine's order:
/// functions before arguments, let definientia before bodies, inspection
/// branches left to right, reduction inside bang bodies but never under a
/// lambda. Tau-normalizes after every contraction.
pub fn cau_eval_cbv(m: &Term, fuel: u64) -> Result<Term, EvalError> {
    let mut cur = tau_normalize(m)?;
    for _ in 0..fuel {
        match cbv_search(&cur, &TermPath::root(), None) {
            Search::Value => return Ok(cur),
            Search::Stuck(reason) => return Err(EvalError::Stuck(reason)),
            Search::Redex(path) => {
                let contracted =
                    principal_contract(&cur, &path).map_err(|e| EvalError::Stuck(e.to_string()))?;
                cur = tau_normalize(&contracted)?;
            }
        }
    }
    Err(EvalError::FuelExhausted(fuel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::church;

    fn theta_probe() -> Replacement<Term> {
        // nine distinct closed markers so tests can see which slot was used
        Replacement::new([
            church(10),
            church(11),
            church(12),
            church(13),
            church(14),
            church(15),
            church(16),
            church(17),
            church(18),
        ])
    }

    #[test]
    fn replacement_leaf_and_congruence() {
        let th = theta_probe();
        assert_eq!(apply_replacement(&Trail::Refl, &th).unwrap(), church(10));
        assert_eq!(
            apply_replacement(&Trail::lam_t(Trail::Beta), &th).unwrap(),
            Term::app(church(15), church(12))
        );
        assert_eq!(
            apply_replacement(&Trail::trans(Trail::Refl, Trail::Beta), &th).unwrap(),
            Term::app(Term::app(church(11), church(10)), church(12))
        );
        assert_eq!(
            apply_replacement(&Trail::extract(Term::Index(1)), &th),
            Err(StepError::ImpureTrail)
        );
    }

    #[test]
    fn replacement_nine_branches() {
        let th = theta_probe();
        let zeta = Replacement::uniform(Trail::Refl);
        assert_eq!(
            apply_replacement(&Trail::trpl(zeta), &th).unwrap(),
            Term::apps(church(18), std::iter::repeat(church(10)).take(9))
        );
    }

    #[test]
    fn meta_subst_examples() {
        assert_eq!(meta_subst(&Term::Index(1), 0, &[church(2)]), church(2));
        assert_eq!(
            meta_subst(
                &Term::lam(Term::app(Term::Index(1), Term::Index(2))),
                0,
                &[church(0)]
            ),
            Term::lam(Term::app(Term::Index(1), church(0)))
        );
        assert_eq!(
            meta_subst(&Term::annot(Trail::Beta, Term::Index(1)), 0, &[Term::Index(5)]),
            Term::annot(Trail::Beta, Term::Index(5))
        );
    }

    #[test]
    fn meta_subst_lifts_open_arguments() {
        // (\. 1 2){0 <- [3]} : the argument's dangling index must survive the binder
        let m = Term::lam(Term::app(Term::Index(1), Term::Index(2)));
        assert_eq!(
            meta_subst(&m, 0, &[Term::Index(3)]),
            Term::lam(Term::app(Term::Index(1), Term::Index(4)))
        );
    }

    #[test]
    fn redexes_found_in_order() {
        let id = Term::lam(Term::Index(1));
        let t = Term::app(Term::lam(Term::Index(1)), Term::app(id.clone(), id));
        let found = find_principal_redexes(&t);
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].0, TermPath::root());
        assert_eq!(found[0].1, RedexKind::Beta);
        assert_eq!(found[1].0, TermPath(vec![1]));
    }

    #[test]
    fn inspection_needs_a_bang() {
        let iota = Term::inspect(Replacement::uniform(church(0)));
        assert!(find_principal_redexes(&iota).is_empty());
        let banged = Term::bang(Trail::Beta, iota);
        let found = find_principal_redexes(&banged);
        assert_eq!(found.len(), 1);
        assert_eq!(
            found[0],
            (
                TermPath(vec![1]),
                RedexKind::Inspect {
                    bang_path: TermPath::root()
                }
            )
        );
    }

    #[test]
    fn contract_beta() {
        let id = Term::lam(Term::Index(1));
        let t = Term::app(id.clone(), id.clone());
        assert_eq!(
            principal_contract(&t, &TermPath::root()).unwrap(),
            Term::annot(Trail::Beta, id)
        );
    }

    #[test]
    fn contract_beta_bang() {
        let t = Term::let_bang(Term::bang(Trail::Beta, church(2)), Term::Index(1));
        assert_eq!(
            principal_contract(&t, &TermPath::root()).unwrap(),
            Term::annot(Trail::BetaBang, Term::annot(Trail::Beta, church(2)))
        );
    }

    #[test]
    fn contract_inspection_uses_bang_trail() {
        let th = theta_probe();
        let t = Term::bang(Trail::Beta, Term::inspect(th.clone()));
        assert_eq!(
            principal_contract(&t, &TermPath(vec![1])).unwrap(),
            Term::bang(
                Trail::Beta,
                Term::annot(Trail::TrailInspect, church(12))
            )
        );
    }

    fn example2_start() -> Term {
        // ! ((\x.\y.\p. p x y) two) six
        let triple = Term::lam(Term::lam(Term::lam(Term::app(
            Term::app(Term::Index(1), Term::Index(3)),
            Term::Index(2),
        ))));
        Term::bang(
            Trail::Refl,
            Term::app(Term::app(triple, church(2)), church(6)),
        )
    }

    #[test]
    fn example2_first_two_steps() {
        let s1 = cau_step(&example2_start()).unwrap().unwrap();
        let expect1 = Term::bang(
            Trail::app_t(Trail::Beta, Trail::Refl),
            Term::app(
                Term::lam(Term::lam(Term::app(
                    Term::app(Term::Index(1), church(2)),
                    Term::Index(2),
                ))),
                church(6),
            ),
        );
        assert_eq!(s1, expect1);
        let s2 = cau_step(&s1).unwrap().unwrap();
        let expect2 = Term::bang(
            Trail::trans(Trail::app_t(Trail::Beta, Trail::Refl), Trail::Beta),
            Term::lam(Term::app(Term::app(Term::Index(1), church(2)), church(6))),
        );
        assert_eq!(s2, expect2);
    }

    #[test]
    fn normal_forms_have_no_step() {
        assert_eq!(cau_step(&church(2)).unwrap(), None);
    }

    #[test]
    fn cbv_identity_application() {
        let id = Term::lam(Term::Index(1));
        let t = Term::app(id.clone(), id.clone());
        assert_eq!(
            cau_eval_cbv(&t, 100).unwrap(),
            Term::annot(Trail::Beta, id)
        );
    }

    #[test]
    fn cbv_let_bang() {
        // ! let x = ! two in x
        let t = Term::bang(
            Trail::Refl,
            Term::let_bang(Term::bang(Trail::Refl, church(2)), Term::Index(1)),
        );
        let v = cau_eval_cbv(&t, 100).unwrap();
        assert_eq!(v, Term::bang(Trail::BetaBang, church(2)));
    }

    #[test]
    fn cbv_omega_exhausts_fuel() {
        let d = Term::lam(Term::app(Term::Index(1), Term::Index(1)));
        let omega = Term::app(d.clone(), d);
        assert_eq!(cau_eval_cbv(&omega, 100), Err(EvalError::FuelExhausted(100)));
    }

    #[test]
    fn cbv_stuck_on_non_lambda() {
        let t = Term::app(Term::bang(Trail::Refl, church(0)), church(0));
        assert!(matches!(cau_eval_cbv(&t, 100), Err(EvalError::Stuck(_))));
    }
}
