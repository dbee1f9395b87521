//! The sigma-refined engine: sigma/sigma-tau normalization, meta-level
//! projections and focused forms, and the lazy Beta relation whose contracta
//! carry explicit erasures and extractions.
//!
//! Beta redexes are located through the restricted contexts E_sigma: reduction
//! may happen inside bangs, annotations, closures and substitution
//! components, but never inside an erasure. Inspection redexes additionally
//! need an enclosing bang reachable without crossing another bang, an
//! erasure, or a closure.

use crate::naive::{apply_replacement, RedexKind, StepError};
use crate::path::{get_term_at, node_child, replace_term_at, NodeRef, TermPath};
use crate::rewrite::{self, RewriteError, SIGMA, SIGMA_TAU};
use crate::syntax::{Subst, Term, Trail};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SigmaError {
    #[error("no lazy redex at the given position")]
    NotARedex,
    #[error("inspection history is not a pure trail after normalization")]
    MalformedHistory,
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

pub fn sigma_step(t: &Term) -> Option<Term> {
    rewrite::step_term(t, SIGMA)
}

pub fn sigma_normalize(t: &Term) -> Result<Term, RewriteError> {
    rewrite::normalize_term(t, SIGMA, rewrite::default_fuel())
}

pub fn sigmatau_normalize(t: &Term) -> Result<Term, RewriteError> {
    rewrite::normalize_term(t, SIGMA_TAU, rewrite::default_fuel())
}

pub fn sigmatau_normalize_trail(q: &Trail) -> Result<Trail, RewriteError> {
    rewrite::normalize_trail(q, SIGMA_TAU, rewrite::default_fuel())
}

pub fn sigmatau_normalize_subst(s: &Subst) -> Result<Subst, RewriteError> {
    rewrite::normalize_subst(s, SIGMA_TAU, rewrite::default_fuel())
}

pub fn sigmatau_equiv(m: &Term, n: &Term) -> Result<bool, RewriteError> {
    Ok(sigmatau_normalize(m)? == sigmatau_normalize(n)?)
}

/// Meta-level erasure: the sigma-tau-normal form with its top annotation
/// stripped, if any.
pub fn erase_meta(m: &Term) -> Result<Term, RewriteError> {
    Ok(match sigmatau_normalize(m)? {
        Term::Annot(_, body) => *body,
        other => other,
    })
}

/// Meta-level extraction: the top annotation of the sigma-tau-normal form,
/// or the reflexivity trail when there is none.
pub fn trailify_meta(m: &Term) -> Result<Trail, RewriteError> {
    Ok(match sigmatau_normalize(m)? {
        Term::Annot(q, _) => *q,
        _ => Trail::Refl,
    })
}

/// Focused form: the extracted trail annotating the erased skeleton.
pub fn focus(m: &Term) -> Result<Term, RewriteError> {
    Ok(Term::annot(trailify_meta(m)?, erase_meta(m)?))
}

/// All lazy-Beta redex positions reachable through E_sigma, in
/// leftmost-outermost order.
pub fn beta_sigma_redexes(m: &Term) -> Vec<(TermPath, RedexKind)> {
    let mut out = Vec::new();
    collect(m, &TermPath::root(), None, &mut out);
    out
}

fn collect(
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
            collect(f, &path.child(0), bang, out);
            collect(a, &path.child(1), bang, out);
        }
        Term::LetBang(d, b) => {
            if matches!(&**d, Term::Bang(_, _)) {
                out.push((path.clone(), RedexKind::BetaBang));
            }
            collect(d, &path.child(0), bang, out);
            collect(b, &path.child(1), bang, out);
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
                collect(slot, &path.child(i as u8), bang, out);
            }
        }
        Term::Lam(b) => collect(b, &path.child(0), bang, out),
        Term::Bang(_, b) => {
            let here = path.clone();
            collect(b, &path.child(1), Some(&here), out);
        }
        Term::Annot(_, b) => collect(b, &path.child(1), bang, out),
        Term::Index(_) => {}
        Term::Closure(b, s) => {
            // closures keep Beta reachable but break the bang-free context
            collect(b, &path.child(0), None, out);
            collect_subst(s, &path.child(1), out);
        }
        Term::Erase(_) => {}
    }
}

fn collect_subst(s: &Subst, path: &TermPath, out: &mut Vec<(TermPath, RedexKind)>) {
    match s {
        Subst::Id | Subst::Shift => {}
        Subst::Cons(m, tail) => {
            collect(m, &path.child(0), None, out);
            collect_subst(tail, &path.child(1), out);
        }
        Subst::Comp(a, b) => {
            collect_subst(a, &path.child(0), out);
            collect_subst(b, &path.child(1), out);
        }
    }
}

/// Innermost bang above `at` whose gap crosses no bang, closure, or erasure;
/// returns its trail and the path to its body.
fn enclosing_bang(m: &Term, at: &TermPath) -> Option<(Trail, TermPath)> {
    let mut cur = NodeRef::T(m);
    let mut found = None;
    let mut walked = TermPath::root();
    for &i in &at.0 {
        match cur {
            NodeRef::T(Term::Bang(q, _)) if i == 1 => {
                found = Some(((**q).clone(), walked.child(1)));
            }
            NodeRef::T(Term::Closure(_, _)) | NodeRef::T(Term::Erase(_)) => found = None,
            _ => {}
        }
        cur = node_child(cur, i)?;
        walked = walked.child(i);
    }
    found
}

/// Contract the lazy redex at `at`. Beta and let-bang contracta keep their
/// erasures and extractions unevaluated; the inspection rule normalizes its
/// materialized history eagerly, as required before replaying it.
pub fn beta_sigma_contract(m: &Term, at: &TermPath) -> Result<Term, SigmaError> {
    let node = get_term_at(m, at).ok_or(SigmaError::NotARedex)?;
    let contractum = match node {
        Term::App(f, a) => match &**f {
            Term::Lam(body) => Term::annot(
                Trail::trans(
                    Trail::app_t(
                        Trail::lam_t(Trail::extract((**body).clone())),
                        Trail::extract((**a).clone()),
                    ),
                    Trail::Beta,
                ),
                Term::closure(
                    Term::erase((**body).clone()),
                    Subst::cons(Term::erase((**a).clone()), Subst::Id),
                ),
            ),
            _ => return Err(SigmaError::NotARedex),
        },
        Term::LetBang(d, b) => match &**d {
            Term::Bang(q, dm) => Term::annot(
                Trail::trans(
                    Trail::let_t(Trail::Refl, Trail::extract((**b).clone())),
                    Trail::BetaBang,
                ),
                Term::closure(
                    Term::erase((**b).clone()),
                    Subst::cons(Term::annot((**q).clone(), (**dm).clone()), Subst::Id),
                ),
            ),
            _ => return Err(SigmaError::NotARedex),
        },
        Term::Inspect(theta) => {
            let (q, body_path) = enclosing_bang(m, at).ok_or(SigmaError::NotARedex)?;
            let bang_body = get_term_at(m, &body_path).ok_or(SigmaError::NotARedex)?;
            let history = sigmatau_normalize_trail(&Trail::trans(
                q,
                Trail::extract(bang_body.clone()),
            ))?;
            if !history.is_pure() {
                return Err(SigmaError::MalformedHistory);
            }
            let replayed = apply_replacement(&history, theta).map_err(|e| match e {
                StepError::ImpureTrail => SigmaError::MalformedHistory,
                _ => SigmaError::NotARedex,
            })?;
            Term::annot(Trail::TrailInspect, replayed)
        }
        _ => return Err(SigmaError::NotARedex),
    };
    replace_term_at(m, at, contractum).ok_or(SigmaError::NotARedex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{church, Replacement};

    fn id() -> Term {
        Term::lam(Term::Index(1))
    }

    #[test]
    fn erase_and_trailify_split_annotations() {
        let m = Term::annot(Trail::Beta, Term::Index(1));
        assert_eq!(erase_meta(&m).unwrap(), Term::Index(1));
        assert_eq!(trailify_meta(&m).unwrap(), Trail::Beta);
        assert_eq!(erase_meta(&id()).unwrap(), id());
        assert_eq!(trailify_meta(&id()).unwrap(), Trail::Refl);
    }

    #[test]
    fn trailify_pushes_out_inner_annotations() {
        let m = Term::app(Term::annot(Trail::Beta, id()), church(0));
        assert_eq!(
            trailify_meta(&m).unwrap(),
            Trail::app_t(Trail::Beta, Trail::Refl)
        );
    }

    #[test]
    fn focus_examples() {
        assert_eq!(
            focus(&Term::Index(1)).unwrap(),
            Term::annot(Trail::Refl, Term::Index(1))
        );
        let m = Term::annot(Trail::Beta, Term::Index(1));
        assert_eq!(focus(&m).unwrap(), m);
        let b = Term::bang(Trail::Beta, Term::annot(Trail::Beta, Term::Index(1)));
        assert_eq!(
            focus(&b).unwrap(),
            Term::annot(
                Trail::Refl,
                Term::bang(Trail::trans(Trail::Beta, Trail::Beta), Term::Index(1))
            )
        );
    }

    #[test]
    fn focus_preserves_sigmatau_class() {
        let m = Term::app(Term::annot(Trail::Beta, id()), church(0));
        assert!(sigmatau_equiv(&focus(&m).unwrap(), &m).unwrap());
    }

    #[test]
    fn no_redex_under_erasure() {
        let t = Term::erase(Term::app(id(), church(0)));
        assert!(beta_sigma_redexes(&t).is_empty());
    }

    #[test]
    fn redex_inside_closure_and_subst() {
        let t = Term::closure(Term::app(id(), church(0)), Subst::Id);
        let found = beta_sigma_redexes(&t);
        assert_eq!(found, vec![(TermPath(vec![0]), RedexKind::Beta)]);

        let t2 = Term::closure(
            Term::Index(1),
            Subst::cons(Term::app(id(), church(0)), Subst::Id),
        );
        let found2 = beta_sigma_redexes(&t2);
        assert_eq!(found2, vec![(TermPath(vec![1, 0]), RedexKind::Beta)]);
    }

    #[test]
    fn lazy_beta_literal_contractum() {
        let t = Term::app(id(), id());
        let c = beta_sigma_contract(&t, &TermPath::root()).unwrap();
        let expect = Term::annot(
            Trail::trans(
                Trail::app_t(
                    Trail::lam_t(Trail::extract(Term::Index(1))),
                    Trail::extract(id()),
                ),
                Trail::Beta,
            ),
            Term::closure(
                Term::erase(Term::Index(1)),
                Subst::cons(Term::erase(id()), Subst::Id),
            ),
        );
        assert_eq!(c, expect);
        assert_eq!(
            sigmatau_normalize(&c).unwrap(),
            Term::annot(Trail::Beta, id())
        );
    }

    #[test]
    fn lazy_let_bang_matches_naive() {
        let t = Term::let_bang(Term::bang(Trail::Beta, church(2)), Term::Index(1));
        let c = beta_sigma_contract(&t, &TermPath::root()).unwrap();
        let naive = crate::naive::principal_contract(&t, &TermPath::root()).unwrap();
        assert!(sigmatau_equiv(&c, &naive).unwrap());
    }

    #[test]
    fn lazy_inspection_replays_bang_history() {
        let theta = Replacement::new([
            church(10),
            church(11),
            church(12),
            church(13),
            church(14),
            church(15),
            church(16),
            church(17),
            church(18),
        ]);
        let t = Term::bang(Trail::Beta, Term::inspect(theta));
        let c = beta_sigma_contract(&t, &TermPath(vec![1])).unwrap();
        assert_eq!(
            c,
            Term::bang(
                Trail::Beta,
                Term::annot(Trail::TrailInspect, church(12))
            )
        );
    }

    #[test]
    fn inspection_not_reachable_through_closure() {
        let theta = Replacement::uniform(church(0));
        let t = Term::bang(
            Trail::Beta,
            Term::closure(Term::inspect(theta), Subst::Id),
        );
        assert!(beta_sigma_redexes(&t).is_empty());
    }
}
