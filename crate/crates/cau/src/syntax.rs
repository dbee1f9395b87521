//! Nameless syntax trees for terms, trails, substitutions and replacements.
//!
//! Terms use 1-based de Bruijn indices. The "explicit" constructors
//! ([`Term::Closure`], [`Term::Erase`], [`Trail::Extract`]) belong to the
//! sigma-refined calculus; a term without any of them (recursively) is called
//! *pure* and coincides with the plain audited lambda calculus.

use std::fmt;

/// The nine trail constructors, in the fixed slot order used by replacements
/// and by the trail-to-term reification of the abstract machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrailCtor {
    Refl,
    Trans,
    Beta,
    BetaBang,
    TrailInspect,
    Lam,
    App,
    Let,
    Trpl,
}

impl TrailCtor {
    pub const ALL: [TrailCtor; 9] = [
        TrailCtor::Refl,
        TrailCtor::Trans,
        TrailCtor::Beta,
        TrailCtor::BetaBang,
        TrailCtor::TrailInspect,
        TrailCtor::Lam,
        TrailCtor::App,
        TrailCtor::Let,
        TrailCtor::Trpl,
    ];

    /// Position in the fixed slot order, 0-based.
    pub fn slot(self) -> usize {
        match self {
            TrailCtor::Refl => 0,
            TrailCtor::Trans => 1,
            TrailCtor::Beta => 2,
            TrailCtor::BetaBang => 3,
            TrailCtor::TrailInspect => 4,
            TrailCtor::Lam => 5,
            TrailCtor::App => 6,
            TrailCtor::Let => 7,
            TrailCtor::Trpl => 8,
        }
    }

    /// Surface keyword for this constructor.
    pub fn keyword(self) -> &'static str {
        match self {
            TrailCtor::Refl => "r",
            TrailCtor::Trans => "t",
            TrailCtor::Beta => "b",
            TrailCtor::BetaBang => "bb",
            TrailCtor::TrailInspect => "ti",
            TrailCtor::Lam => "lam",
            TrailCtor::App => "app",
            TrailCtor::Let => "letq",
            TrailCtor::Trpl => "tb",
        }
    }
}

/// A nine-slot map from trail constructors to payloads (terms for inspection
/// branches, trails for trail congruences).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Replacement<T> {
    slots: [T; 9],
}

impl<T> Replacement<T> {
    pub fn new(slots: [T; 9]) -> Self {
        Replacement { slots }
    }

    pub fn get(&self, c: TrailCtor) -> &T {
        &self.slots[c.slot()]
    }

    pub fn slots(&self) -> &[T; 9] {
        &self.slots
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.slots.iter()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Replacement<U> {
        let s = &self.slots;
        Replacement::new([
            f(&s[0]),
            f(&s[1]),
            f(&s[2]),
            f(&s[3]),
            f(&s[4]),
            f(&s[5]),
            f(&s[6]),
            f(&s[7]),
            f(&s[8]),
        ])
    }

    /// Replace one slot, returning the updated replacement.
    pub fn with_slot(&self, i: usize, v: T) -> Self
    where
        T: Clone,
    {
        let mut slots = self.slots.clone();
        slots[i] = v;
        Replacement { slots }
    }
}

impl<T: Clone> Replacement<T> {
    pub fn uniform(v: T) -> Self {
        Replacement::new([
            v.clone(),
            v.clone(),
            v.clone(),
            v.clone(),
            v.clone(),
            v.clone(),
            v.clone(),
            v.clone(),
            v,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// De Bruijn index, 1-based.
    Index(u32),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `let(M, N)`: binds the first free index of `N` to the unpacked bang.
    LetBang(Box<Term>, Box<Term>),
    /// Audited unit `!_q M`.
    Bang(Box<Trail>, Box<Term>),
    /// Local trail annotation `q |> M`.
    Annot(Box<Trail>, Box<Term>),
    /// Trail inspection `iota(theta)`.
    Inspect(Box<Replacement<Term>>),
    /// Explicit substitution application `M[s]`.
    Closure(Box<Term>, Box<Subst>),
    /// Explicit trail erasure.
    Erase(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Trail {
    Refl,
    Trans(Box<Trail>, Box<Trail>),
    Beta,
    BetaBang,
    TrailInspect,
    LamT(Box<Trail>),
    AppT(Box<Trail>, Box<Trail>),
    LetT(Box<Trail>, Box<Trail>),
    TrplT(Box<Replacement<Trail>>),
    /// Explicit trail extraction of a term.
    Extract(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subst {
    Id,
    Shift,
    Cons(Box<Term>, Box<Subst>),
    Comp(Box<Subst>, Box<Subst>),
}

impl Term {
    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }
    pub fn let_bang(def: Term, body: Term) -> Term {
        Term::LetBang(Box::new(def), Box::new(body))
    }
    pub fn bang(q: Trail, body: Term) -> Term {
        Term::Bang(Box::new(q), Box::new(body))
    }
    pub fn annot(q: Trail, body: Term) -> Term {
        Term::Annot(Box::new(q), Box::new(body))
    }
    pub fn inspect(theta: Replacement<Term>) -> Term {
        Term::Inspect(Box::new(theta))
    }
    pub fn closure(body: Term, s: Subst) -> Term {
        Term::Closure(Box::new(body), Box::new(s))
    }
    pub fn erase(body: Term) -> Term {
        Term::Erase(Box::new(body))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Term::Index(_) => true,
            Term::Lam(b) => b.is_pure(),
            Term::App(f, a) => f.is_pure() && a.is_pure(),
            Term::LetBang(d, b) => d.is_pure() && b.is_pure(),
            Term::Bang(q, b) => q.is_pure() && b.is_pure(),
            Term::Annot(q, b) => q.is_pure() && b.is_pure(),
            Term::Inspect(theta) => theta.iter().all(Term::is_pure),
            Term::Closure(_, _) | Term::Erase(_) => false,
        }
    }

    /// Largest dangling de Bruijn index, or 0 when closed.
    pub fn max_free_index(&self) -> u32 {
        match self {
            Term::Index(n) => *n,
            Term::Lam(b) => b.max_free_index().saturating_sub(1),
            Term::App(f, a) => f.max_free_index().max(a.max_free_index()),
            Term::LetBang(d, b) => d
                .max_free_index()
                .max(b.max_free_index().saturating_sub(1)),
            Term::Bang(q, b) => q.max_free_index().max(b.max_free_index()),
            Term::Annot(q, b) => q.max_free_index().max(b.max_free_index()),
            Term::Inspect(theta) => theta.iter().map(Term::max_free_index).max().unwrap_or(0),
            Term::Closure(b, s) => s.applied_max_free_index(b.max_free_index()),
            Term::Erase(b) => b.max_free_index(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.max_free_index() == 0
    }

    /// Number of nodes, counting embedded trails and substitutions.
    pub fn size(&self) -> usize {
        match self {
            Term::Index(_) => 1,
            Term::Lam(b) | Term::Erase(b) => 1 + b.size(),
            Term::App(f, a) | Term::LetBang(f, a) => 1 + f.size() + a.size(),
            Term::Bang(q, b) | Term::Annot(q, b) => 1 + q.size() + b.size(),
            Term::Inspect(theta) => 1 + theta.iter().map(Term::size).sum::<usize>(),
            Term::Closure(b, s) => 1 + b.size() + s.size(),
        }
    }
}

impl Trail {
    pub fn trans(a: Trail, b: Trail) -> Trail {
        Trail::Trans(Box::new(a), Box::new(b))
    }
    pub fn lam_t(q: Trail) -> Trail {
        Trail::LamT(Box::new(q))
    }
    pub fn app_t(a: Trail, b: Trail) -> Trail {
        Trail::AppT(Box::new(a), Box::new(b))
    }
    pub fn let_t(a: Trail, b: Trail) -> Trail {
        Trail::LetT(Box::new(a), Box::new(b))
    }
    pub fn trpl(zeta: Replacement<Trail>) -> Trail {
        Trail::TrplT(Box::new(zeta))
    }
    pub fn extract(m: Term) -> Trail {
        Trail::Extract(Box::new(m))
    }

    /// Right-nested transitivity chain, the paper's semicolon notation.
    pub fn seq(parts: impl IntoIterator<Item = Trail>) -> Trail {
        let mut it = parts.into_iter().collect::<Vec<_>>().into_iter().rev();
        let last = it.next().expect("Trail::seq of empty sequence");
        it.fold(last, |acc, q| Trail::trans(q, acc))
    }

    pub fn leaf(c: TrailCtor) -> Option<Trail> {
        match c {
            TrailCtor::Refl => Some(Trail::Refl),
            TrailCtor::Beta => Some(Trail::Beta),
            TrailCtor::BetaBang => Some(Trail::BetaBang),
            TrailCtor::TrailInspect => Some(Trail::TrailInspect),
            _ => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => true,
            Trail::Trans(a, b) | Trail::AppT(a, b) | Trail::LetT(a, b) => {
                a.is_pure() && b.is_pure()
            }
            Trail::LamT(q) => q.is_pure(),
            Trail::TrplT(zeta) => zeta.iter().all(Trail::is_pure),
            Trail::Extract(_) => false,
        }
    }

    pub fn max_free_index(&self) -> u32 {
        match self {
            Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => 0,
            Trail::Trans(a, b) | Trail::AppT(a, b) | Trail::LetT(a, b) => {
                a.max_free_index().max(b.max_free_index())
            }
            Trail::LamT(q) => q.max_free_index(),
            Trail::TrplT(zeta) => zeta.iter().map(Trail::max_free_index).max().unwrap_or(0),
            Trail::Extract(m) => m.max_free_index(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => 1,
            Trail::Trans(a, b) | Trail::AppT(a, b) | Trail::LetT(a, b) => 1 + a.size() + b.size(),
            Trail::LamT(q) => 1 + q.size(),
            Trail::TrplT(zeta) => 1 + zeta.iter().map(Trail::size).sum::<usize>(),
            Trail::Extract(m) => 1 + m.size(),
        }
    }
}

impl Subst {
    pub fn cons(head: Term, tail: Subst) -> Subst {
        Subst::Cons(Box::new(head), Box::new(tail))
    }
    pub fn comp(a: Subst, b: Subst) -> Subst {
        Subst::Comp(Box::new(a), Box::new(b))
    }

    /// Right-nested `Shift^n` (identity when `n` is 0).
    pub fn shift_n(n: u32) -> Subst {
        match n {
            0 => Subst::Id,
            1 => Subst::Shift,
            _ => Subst::comp(Subst::Shift, Subst::shift_n(n - 1)),
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Subst::Id | Subst::Shift => true,
            Subst::Cons(m, s) => m.is_pure() && s.is_pure(),
            Subst::Comp(a, b) => a.is_pure() && b.is_pure(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Subst::Id | Subst::Shift => 1,
            Subst::Cons(m, s) => 1 + m.size() + s.size(),
            Subst::Comp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Largest index left dangling when a term with free indices up to `k`
    /// is closed by this substitution.
    pub fn applied_max_free_index(&self, k: u32) -> u32 {
        match self {
            Subst::Id => k,
            Subst::Shift => {
                if k == 0 {
                    0
                } else {
                    k + 1
                }
            }
            Subst::Cons(m, s) => {
                if k == 0 {
                    0
                } else {
                    m.max_free_index().max(s.applied_max_free_index(k - 1))
                }
            }
            Subst::Comp(s, t) => t.applied_max_free_index(s.applied_max_free_index(k)),
        }
    }
}

/// Church encoding of a natural number: `\f.\x. f^n x`.
pub fn church(n: u32) -> Term {
    let mut body = Term::Index(1);
    for _ in 0..n {
        body = Term::app(Term::Index(2), body);
    }
    Term::lam(Term::lam(body))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_term(self))
    }
}

impl fmt::Display for Trail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::surface::print_trail(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn church_shapes() {
        assert_eq!(church(0), Term::lam(Term::lam(Term::Index(1))));
        assert_eq!(
            church(1),
            Term::lam(Term::lam(Term::app(Term::Index(2), Term::Index(1))))
        );
        assert_eq!(
            church(2),
            Term::lam(Term::lam(Term::app(
                Term::Index(2),
                Term::app(Term::Index(2), Term::Index(1))
            )))
        );
    }

    #[test]
    fn church_closed() {
        for n in 0..=20 {
            assert_eq!(church(n).max_free_index(), 0);
        }
    }

    #[test]
    fn purity() {
        assert!(Term::lam(Term::Index(1)).is_pure());
        assert!(!Term::erase(Term::Index(1)).is_pure());
        assert!(!Term::bang(Trail::extract(Term::Index(1)), Term::Index(1)).is_pure());
        assert!(!Term::closure(Term::Index(1), Subst::Id).is_pure());
    }

    #[test]
    fn free_indices() {
        assert_eq!(Term::lam(Term::Index(1)).max_free_index(), 0);
        assert_eq!(Term::Index(3).max_free_index(), 3);
        assert_eq!(
            Term::app(Term::lam(Term::Index(2)), Term::Index(1)).max_free_index(),
            1
        );
        // closure: indices resolve through the substitution
        assert_eq!(
            Term::closure(Term::Index(1), Subst::cons(church(2), Subst::Id)).max_free_index(),
            0
        );
        assert_eq!(
            Term::closure(Term::Index(1), Subst::Shift).max_free_index(),
            2
        );
    }

    #[test]
    fn seq_is_right_nested() {
        assert_eq!(
            Trail::seq([Trail::Beta, Trail::BetaBang, Trail::Refl]),
            Trail::trans(Trail::Beta, Trail::trans(Trail::BetaBang, Trail::Refl))
        );
    }
}
