//! Paths into the mutually recursive term/trail/substitution trees.
//!
//! A path is a sequence of child ordinals. Child numbering is fixed per
//! constructor: binary nodes number left-to-right, annotated nodes put the
//! trail first, and inspection/replacement nodes use the nine slot positions.

use crate::syntax::{Subst, Term, Trail};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermPath(pub Vec<u8>);

impl TermPath {
    pub fn root() -> TermPath {
        TermPath(Vec::new())
    }

    pub fn child(&self, i: u8) -> TermPath {
        let mut v = self.0.clone();
        v.push(i);
        TermPath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

/// Borrowed view onto one node of any of the three sorts.
#[derive(Clone, Copy, Debug)]
pub enum NodeRef<'a> {
    T(&'a Term),
    Q(&'a Trail),
    S(&'a Subst),
}

/// Owned node of any sort, used for generic rewriting APIs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    T(Term),
    Q(Trail),
    S(Subst),
}

impl Node {
    pub fn as_ref(&self) -> NodeRef<'_> {
        match self {
            Node::T(t) => NodeRef::T(t),
            Node::Q(q) => NodeRef::Q(q),
            Node::S(s) => NodeRef::S(s),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::T(t) => t.size(),
            Node::Q(q) => q.size(),
            Node::S(s) => s.size(),
        }
    }
}

pub fn term_child<'a>(t: &'a Term, i: u8) -> Option<NodeRef<'a>> {
    let i = i as usize;
    match t {
        Term::Index(_) => None,
        Term::Lam(b) | Term::Erase(b) => (i == 0).then_some(NodeRef::T(b)),
        Term::App(f, a) | Term::LetBang(f, a) => match i {
            0 => Some(NodeRef::T(f)),
            1 => Some(NodeRef::T(a)),
            _ => None,
        },
        Term::Bang(q, b) | Term::Annot(q, b) => match i {
            0 => Some(NodeRef::Q(q)),
            1 => Some(NodeRef::T(b)),
            _ => None,
        },
        Term::Inspect(theta) => theta.slots().get(i).map(NodeRef::T),
        Term::Closure(b, s) => match i {
            0 => Some(NodeRef::T(b)),
            1 => Some(NodeRef::S(s)),
            _ => None,
        },
    }
}

pub fn trail_child<'a>(q: &'a Trail, i: u8) -> Option<NodeRef<'a>> {
    let i = i as usize;
    match q {
        Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => None,
        Trail::Trans(a, b) | Trail::AppT(a, b) | Trail::LetT(a, b) => match i {
            0 => Some(NodeRef::Q(a)),
            1 => Some(NodeRef::Q(b)),
            _ => None,
        },
        Trail::LamT(a) => (i == 0).then_some(NodeRef::Q(a)),
        Trail::TrplT(zeta) => zeta.slots().get(i).map(NodeRef::Q),
        Trail::Extract(m) => (i == 0).then_some(NodeRef::T(m)),
    }
}

pub fn subst_child<'a>(s: &'a Subst, i: u8) -> Option<NodeRef<'a>> {
    match s {
        Subst::Id | Subst::Shift => None,
        Subst::Cons(m, t) => match i {
            0 => Some(NodeRef::T(m)),
            1 => Some(NodeRef::S(t)),
            _ => None,
        },
        Subst::Comp(a, b) => match i {
            0 => Some(NodeRef::S(a)),
            1 => Some(NodeRef::S(b)),
            _ => None,
        },
    }
}

pub fn node_child<'a>(n: NodeRef<'a>, i: u8) -> Option<NodeRef<'a>> {
    match n {
        NodeRef::T(t) => term_child(t, i),
        NodeRef::Q(q) => trail_child(q, i),
        NodeRef::S(s) => subst_child(s, i),
    }
}

pub fn node_arity(n: NodeRef<'_>) -> u8 {
    let mut i = 0;
    while node_child(n, i).is_some() {
        i += 1;
    }
    i
}

/// Resolve a path starting at a term.
pub fn get_at<'a>(t: &'a Term, path: &TermPath) -> Option<NodeRef<'a>> {
    let mut cur = NodeRef::T(t);
    for &i in &path.0 {
        cur = node_child(cur, i)?;
    }
    Some(cur)
}

/// Resolve a path and expect a term node there.
pub fn get_term_at<'a>(t: &'a Term, path: &TermPath) -> Option<&'a Term> {
    match get_at(t, path)? {
        NodeRef::T(sub) => Some(sub),
        _ => None,
    }
}

/// Replace the term at `path` (which must address a term node) with `new`.
pub fn replace_term_at(t: &Term, path: &TermPath, new: Term) -> Option<Term> {
    replace_in_term(t, &path.0, new)
}

fn replace_in_term(t: &Term, path: &[u8], new: Term) -> Option<Term> {
    let Some((&i, rest)) = path.split_first() else {
        return Some(new);
    };
    let i = i as usize;
    Some(match t {
        Term::Index(_) => return None,
        Term::Lam(b) => {
            if i != 0 {
                return None;
            }
            Term::lam(replace_in_term(b, rest, new)?)
        }
        Term::Erase(b) => {
            if i != 0 {
                return None;
            }
            Term::erase(replace_in_term(b, rest, new)?)
        }
        Term::App(f, a) => match i {
            0 => Term::app(replace_in_term(f, rest, new)?, (**a).clone()),
            1 => Term::app((**f).clone(), replace_in_term(a, rest, new)?),
            _ => return None,
        },
        Term::LetBang(f, a) => match i {
            0 => Term::let_bang(replace_in_term(f, rest, new)?, (**a).clone()),
            1 => Term::let_bang((**f).clone(), replace_in_term(a, rest, new)?),
            _ => return None,
        },
        Term::Bang(q, b) => match i {
            0 => Term::bang(replace_in_trail(q, rest, new)?, (**b).clone()),
            1 => Term::bang((**q).clone(), replace_in_term(b, rest, new)?),
            _ => return None,
        },
        Term::Annot(q, b) => match i {
            0 => Term::annot(replace_in_trail(q, rest, new)?, (**b).clone()),
            1 => Term::annot((**q).clone(), replace_in_term(b, rest, new)?),
            _ => return None,
        },
        Term::Inspect(theta) => {
            if i >= 9 {
                return None;
            }
            let slot = replace_in_term(&theta.slots()[i], rest, new)?;
            Term::inspect(theta.with_slot(i, slot))
        }
        Term::Closure(b, s) => match i {
            0 => Term::closure(replace_in_term(b, rest, new)?, (**s).clone()),
            1 => Term::closure((**b).clone(), replace_in_subst(s, rest, new)?),
            _ => return None,
        },
    })
}

fn replace_in_trail(q: &Trail, path: &[u8], new: Term) -> Option<Trail> {
    let Some((&i, rest)) = path.split_first() else {
        // path ends on a trail node: cannot replace a trail with a term
        return None;
    };
    let i = i as usize;
    Some(match q {
        Trail::Refl | Trail::Beta | Trail::BetaBang | Trail::TrailInspect => return None,
        Trail::Trans(a, b) => match i {
            0 => Trail::trans(replace_in_trail(a, rest, new)?, (**b).clone()),
            1 => Trail::trans((**a).clone(), replace_in_trail(b, rest, new)?),
            _ => return None,
        },
        Trail::AppT(a, b) => match i {
            0 => Trail::app_t(replace_in_trail(a, rest, new)?, (**b).clone()),
            1 => Trail::app_t((**a).clone(), replace_in_trail(b, rest, new)?),
            _ => return None,
        },
        Trail::LetT(a, b) => match i {
            0 => Trail::let_t(replace_in_trail(a, rest, new)?, (**b).clone()),
            1 => Trail::let_t((**a).clone(), replace_in_trail(b, rest, new)?),
            _ => return None,
        },
        Trail::LamT(a) => {
            if i != 0 {
                return None;
            }
            Trail::lam_t(replace_in_trail(a, rest, new)?)
        }
        Trail::TrplT(zeta) => {
            if i >= 9 {
                return None;
            }
            let slot = replace_in_trail(&zeta.slots()[i], rest, new)?;
            Trail::trpl(zeta.with_slot(i, slot))
        }
        Trail::Extract(m) => {
            if i != 0 {
                return None;
            }
            Trail::extract(replace_in_term(m, rest, new)?)
        }
    })
}

fn replace_in_subst(s: &Subst, path: &[u8], new: Term) -> Option<Subst> {
    let Some((&i, rest)) = path.split_first() else {
        return None;
    };
    Some(match s {
        Subst::Id | Subst::Shift => return None,
        Subst::Cons(m, t) => match i {
            0 => Subst::cons(replace_in_term(m, rest, new)?, (**t).clone()),
            1 => Subst::cons((**m).clone(), replace_in_subst(t, rest, new)?),
            _ => return None,
        },
        Subst::Comp(a, b) => match i {
            0 => Subst::comp(replace_in_subst(a, rest, new)?, (**b).clone()),
            1 => Subst::comp((**a).clone(), replace_in_subst(b, rest, new)?),
            _ => return None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::church;

    #[test]
    fn get_and_replace() {
        let t = Term::app(Term::lam(Term::Index(1)), church(0));
        let p = TermPath(vec![0, 0]);
        assert_eq!(get_term_at(&t, &p), Some(&Term::Index(1)));
        let t2 = replace_term_at(&t, &p, Term::Index(7)).unwrap();
        assert_eq!(t2, Term::app(Term::lam(Term::Index(7)), church(0)));
    }

    #[test]
    fn path_into_bang_trail_is_not_a_term() {
        let t = Term::bang(Trail::Beta, Term::Index(1));
        assert!(get_term_at(&t, &TermPath(vec![0])).is_none());
        assert!(get_term_at(&t, &TermPath(vec![1])).is_some());
    }

    #[test]
    fn leftmost_outermost_order_is_lexicographic() {
        let outer = TermPath(vec![0]);
        let inner = TermPath(vec![0, 1]);
        let right = TermPath(vec![1]);
        assert!(outer < inner && inner < right);
    }
}
