//! Fixed terms used across the golden tests, the property harness, and the
//! CLI demos: Church arithmetic, the counting replacement, and the worked
//! reduction examples.

use crate::syntax::{church, Replacement, Term, Trail};

/// Church addition, `\m n s z. m s (n s z)`.
pub fn plus() -> Term {
    Term::lam(Term::lam(Term::lam(Term::lam(Term::app(
        Term::app(Term::Index(4), Term::Index(2)),
        Term::app(
            Term::app(Term::Index(3), Term::Index(2)),
            Term::Index(1),
        ),
    )))))
}

/// Nine-argument Church addition, `\a1 .. a9 s z. a1 s (a2 s (... (a9 s z)))`.
pub fn sum9() -> Term {
    // under eleven binders: z = 1, s = 2, a9 = 3, .., a1 = 11
    let mut body = Term::Index(1);
    for i in (3..=11).rev() {
        body = Term::app(Term::app(Term::Index(i), Term::Index(2)), body);
    }
    (0..11).fold(body, |acc, _| Term::lam(acc))
}

/// The contraction-counting replacement: principal-contraction leaves count 1,
/// reflexivity counts 0, and every congruence sums its children.
pub fn theta_plus() -> Replacement<Term> {
    Replacement::new([
        church(0),                 // r
        plus(),                    // t
        church(1),                 // b
        church(1),                 // bb
        church(1),                 // ti
        Term::lam(Term::Index(1)), // lam
        plus(),                    // app
        plus(),                    // letq
        sum9(),                    // tb
    ])
}

/// The divergent self-application.
pub fn omega() -> Term {
    let d = Term::lam(Term::app(Term::Index(1), Term::Index(1)));
    Term::app(d.clone(), d)
}

/// Reads back a Church numeral; absent when the term is not literally
/// `\s z. s (s (... z))`.
pub fn church_decode(m: &Term) -> Option<u32> {
    let Term::Lam(b) = m else { return None };
    let Term::Lam(b) = &**b else { return None };
    let mut cur = &**b;
    let mut n = 0u32;
    loop {
        match cur {
            Term::Index(1) => return Some(n),
            Term::App(f, a) if **f == Term::Index(2) => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

/// `! ((\x y p. p x y) two) six`, the pair-building audited unit.
pub fn example2_term() -> Term {
    let pair = Term::lam(Term::lam(Term::lam(Term::app(
        Term::app(Term::Index(1), Term::Index(3)),
        Term::Index(2),
    ))));
    Term::bang(
        Trail::Refl,
        Term::app(Term::app(pair, church(2)), church(6)),
    )
}

/// Bang trails after the first two steps on the term above, written as the
/// worked example displays them (not trail-normalized): `t(r, app(b, r))`
/// and `t(t(r, app(b, r)), b)`.
pub fn example2_trails() -> [Trail; 2] {
    let first = Trail::trans(Trail::Refl, Trail::app_t(Trail::Beta, Trail::Refl));
    let second = Trail::trans(first.clone(), Trail::Beta);
    [first, second]
}

/// The counted trail of the counting example, `t(letq(b, r), bb)`.
pub fn example3_trail() -> Trail {
    Trail::trans(Trail::let_t(Trail::Beta, Trail::Refl), Trail::BetaBang)
}

/// `plus (plus one zero) one`, what the counting replacement makes of
/// the trail above.
pub fn example3_expected() -> Term {
    Term::app(
        Term::app(
            plus(),
            Term::app(Term::app(plus(), church(1)), church(0)),
        ),
        church(1),
    )
}

/// `! let x = !{b} two in let y = !{b} six in plus x y`, the unpacking
/// example with both ingredient histories instantiated to a single beta.
pub fn example4_term() -> Term {
    Term::bang(
        Trail::Refl,
        Term::let_bang(
            Term::bang(Trail::Beta, church(2)),
            Term::let_bang(
                Term::bang(Trail::Beta, church(6)),
                Term::app(Term::app(plus(), Term::Index(2)), Term::Index(1)),
            ),
        ),
    )
}

/// Expected bang trail after one step on the term above,
/// `t(bb, letq(r, app(app(r, b), r)))`.
pub fn example4_trail() -> Trail {
    Trail::trans(
        Trail::BetaBang,
        Trail::let_t(
            Trail::Refl,
            Trail::app_t(Trail::app_t(Trail::Refl, Trail::Beta), Trail::Refl),
        ),
    )
}

/// The non-joinable-reduction start term `(\. x 1 1) (b |> \. 1)` where x is
/// a free variable (index 2 under the binder).
pub fn fig1_term() -> Term {
    let n = Term::lam(Term::Index(1));
    Term::app(
        Term::lam(Term::app(
            Term::app(Term::Index(2), Term::Index(1)),
            Term::Index(1),
        )),
        Term::annot(Trail::Beta, n),
    )
}

/// Trail of the anachronistic branch, `t(b, app(app(r, b), b))`.
pub fn fig1_left_trail() -> Trail {
    Trail::trans(
        Trail::Beta,
        Trail::app_t(Trail::app_t(Trail::Refl, Trail::Beta), Trail::Beta),
    )
}

/// Trail of the normalize-first branch, `t(app(r, b), b)`.
pub fn fig1_right_trail() -> Trail {
    Trail::trans(Trail::app_t(Trail::Refl, Trail::Beta), Trail::Beta)
}

/// Full beta normalization for pure trail-free terms, dropping the `b`
/// annotations the calculus introduces along the way.
pub fn beta_normalize(m: &Term) -> Result<Term, crate::naive::StepError> {
    let mut cur = m.clone();
    for _ in 0..crate::rewrite::default_fuel() {
        match crate::naive::cau_step(&cur)? {
            Some(next) => cur = strip_annots(&next),
            None => return Ok(cur),
        }
    }
    Err(crate::naive::StepError::Rewrite(
        crate::rewrite::RewriteError::FuelExhausted(crate::rewrite::default_fuel()),
    ))
}

fn strip_annots(m: &Term) -> Term {
    match m {
        Term::Annot(_, body) => strip_annots(body),
        Term::Lam(b) => Term::lam(strip_annots(b)),
        Term::App(f, a) => Term::app(strip_annots(f), strip_annots(a)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn decode_inverts_encode() {
        for n in 0..=20 {
            assert_eq!(church_decode(&church(n)), Some(n));
        }
        assert_eq!(church_decode(&plus()), None);
        assert_eq!(church_decode(&Term::lam(Term::Index(1))), None);
    }

    #[test]
    fn corpus_terms_are_pure_and_closed() {
        for t in [
            plus(),
            sum9(),
            omega(),
            example2_term(),
            example3_expected(),
            example4_term(),
        ] {
            assert!(t.is_pure(), "{t}");
            assert!(t.is_closed(), "{t}");
        }
        assert!(example3_trail().is_pure());
        assert!(fig1_term().is_pure());
        assert_eq!(fig1_term().max_free_index(), 1);
    }

    #[test]
    fn plus_adds() {
        let app = Term::app(Term::app(plus(), church(2)), church(3));
        let normal = beta_normalize(&app).unwrap();
        assert_eq!(church_decode(&normal), Some(5));
    }

    #[test]
    fn sum9_adds_nine() {
        let t = Term::apps(sum9(), (1..=9).map(church));
        assert_eq!(church_decode(&beta_normalize(&t).unwrap()), Some(45));
    }
}
