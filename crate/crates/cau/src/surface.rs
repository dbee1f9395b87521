//! Surface syntax: named-variable parser and pretty-printer.
//!
//! Grammar (sketch):
//!   term   := "\" ident+ "." term
//!           | "let" ident "=" term "in" term
//!           | trail "|>" term
//!           | atom+
//!   atom   := ident | "#" digits | "(" term ")" | "!" ("{" trail "}")? atom
//!           | "iota" "{" nine named branches "}" | "erase" "(" term ")"
//!           | atom "[" subst "]"
//!   trail  := r | b | bb | ti | t(q,q) | lam(q) | app(q,q) | letq(q,q)
//!           | tb(q * 9) | ext(term)
//!   subst  := id | shift | term "." subst | subst "o" subst | "(" subst ")"
//!
//! `#k` denotes the k-th dangling index beyond the enclosing binders, so
//! open terms print and re-parse exactly. Binders print as fresh names x1,
//! x2, ...

use crate::syntax::{Replacement, Subst, Term, Trail, TrailCtor};
use std::fmt::Write as _;
use thiserror::Error;

pub const RESERVED: [&str; 16] = [
    "let", "in", "iota", "erase", "ext", "r", "t", "b", "bb", "ti", "lam", "app", "letq", "tb",
    "id", "shift",
];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub msg: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    FreeIdx(u32),
    Lambda,
    Dot,
    LParen,
    RParen,
    BangTok,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Triangle,
    Eq,
    Comma,
    Colon,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '\\' => {
                bump(&mut chars);
                Tok::Lambda
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '!' => {
                bump(&mut chars);
                Tok::BangTok
            }
            '{' => {
                bump(&mut chars);
                Tok::LBrace
            }
            '}' => {
                bump(&mut chars);
                Tok::RBrace
            }
            '[' => {
                bump(&mut chars);
                Tok::LBrack
            }
            ']' => {
                bump(&mut chars);
                Tok::RBrack
            }
            '=' => {
                bump(&mut chars);
                Tok::Eq
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            '|' => {
                bump(&mut chars);
                match chars.peek() {
                    Some('>') => {
                        bump(&mut chars);
                        Tok::Triangle
                    }
                    _ => {
                        return Err(ParseError {
                            msg: "expected '>' after '|'".into(),
                            line: l,
                            col: co,
                        })
                    }
                }
            }
            '#' => {
                bump(&mut chars);
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let n: u32 = digits.parse().map_err(|_| ParseError {
                    msg: "expected digits after '#'".into(),
                    line: l,
                    col: co,
                })?;
                if n == 0 {
                    return Err(ParseError {
                        msg: "indices are 1-based".into(),
                        line: l,
                        col: co,
                    });
                }
                Tok::FreeIdx(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        name.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Ident(name)
            }
            other => {
                return Err(ParseError {
                    msg: format!("unexpected character {other:?}"),
                    line: l,
                    col: co,
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            col: co,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            msg: msg.into(),
            line,
            col,
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn take_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Ident(s)) => self.err(format!("'{s}' is a reserved word")),
            _ => self.err("expected an identifier"),
        }
    }

    fn trail_starts(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s))
            if ["r", "b", "bb", "ti", "t", "lam", "app", "letq", "tb", "ext"]
                .contains(&s.as_str()))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                let mut names = vec![self.take_ident()?];
                while matches!(self.peek(), Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()))
                {
                    names.push(self.take_ident()?);
                }
                self.expect(Tok::Dot, "'.' after binders")?;
                let depth = names.len();
                self.scope.extend(names);
                let body = self.term()?;
                self.scope.truncate(self.scope.len() - depth);
                Ok((0..depth).fold(body, |b, _| Term::lam(b)))
            }
            Some(Tok::Ident(s)) if s == "let" => {
                self.pos += 1;
                let name = self.take_ident()?;
                self.expect(Tok::Eq, "'=' in let")?;
                let def = self.term()?;
                if !self.is_kw("in") {
                    return self.err("expected 'in'");
                }
                self.pos += 1;
                self.scope.push(name);
                let body = self.term()?;
                self.scope.pop();
                Ok(Term::let_bang(def, body))
            }
            _ if self.trail_starts() => {
                let q = self.trail()?;
                self.expect(Tok::Triangle, "'|>' after trail")?;
                let body = self.term()?;
                Ok(Term::annot(q, body))
            }
            _ => self.appchain(),
        }
    }

    fn atom_starts(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => !RESERVED.contains(&s.as_str()) || s == "iota" || s == "erase",
            Some(Tok::FreeIdx(_)) | Some(Tok::LParen) | Some(Tok::BangTok) => true,
            _ => false,
        }
    }

    fn appchain(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.atom_starts() {
            let arg = self.atom()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let mut base = match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "iota" => {
                self.pos += 1;
                self.expect(Tok::LBrace, "'{' after iota")?;
                let mut slots = Vec::with_capacity(9);
                for (i, ctor) in TrailCtor::ALL.iter().enumerate() {
                    if i > 0 {
                        self.expect(Tok::Comma, "',' (inspections name all nine branches)")?;
                    }
                    if !self.is_kw(ctor.keyword()) {
                        return self.err(format!(
                            "inspection branches must name all nine slots in order; expected '{}'",
                            ctor.keyword()
                        ));
                    }
                    self.pos += 1;
                    self.expect(Tok::Colon, "':' after branch name")?;
                    slots.push(self.term()?);
                }
                self.expect(Tok::RBrace, "'}' closing iota")?;
                let slots: [Term; 9] = slots.try_into().expect("nine branches collected");
                Term::inspect(Replacement::new(slots))
            }
            Some(Tok::Ident(s)) if s == "erase" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after erase")?;
                let body = self.term()?;
                self.expect(Tok::RParen, "')' closing erase")?;
                Term::erase(body)
            }
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                self.pos += 1;
                match self.scope.iter().rev().position(|n| *n == s) {
                    Some(i) => Term::Index(i as u32 + 1),
                    None => return self.err(format!("unbound identifier '{s}'")),
                }
            }
            Some(Tok::FreeIdx(k)) => {
                self.pos += 1;
                Term::Index(self.scope.len() as u32 + k)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                t
            }
            Some(Tok::BangTok) => {
                self.pos += 1;
                let q = if self.peek() == Some(&Tok::LBrace) {
                    self.pos += 1;
                    let q = self.trail()?;
                    self.expect(Tok::RBrace, "'}' closing bang trail")?;
                    q
                } else {
                    Trail::Refl
                };
                let body = self.atom()?;
                Term::bang(q, body)
            }
            _ => return self.err("expected a term"),
        };
        while self.peek() == Some(&Tok::LBrack) {
            self.pos += 1;
            let s = self.subst()?;
            self.expect(Tok::RBrack, "']' closing substitution")?;
            base = Term::closure(base, s);
        }
        Ok(base)
    }

    fn trail(&mut self) -> Result<Trail, ParseError> {
        let Some(Tok::Ident(kw)) = self.peek().cloned() else {
            return self.err("expected a trail");
        };
        self.pos += 1;
        let unary = |p: &mut Self, f: fn(Trail) -> Trail| -> Result<Trail, ParseError> {
            p.expect(Tok::LParen, "'('")?;
            let a = p.trail()?;
            p.expect(Tok::RParen, "')'")?;
            Ok(f(a))
        };
        let binary = |p: &mut Self, f: fn(Trail, Trail) -> Trail| -> Result<Trail, ParseError> {
            p.expect(Tok::LParen, "'('")?;
            let a = p.trail()?;
            p.expect(Tok::Comma, "','")?;
            let b = p.trail()?;
            p.expect(Tok::RParen, "')'")?;
            Ok(f(a, b))
        };
        match kw.as_str() {
            "r" => Ok(Trail::Refl),
            "b" => Ok(Trail::Beta),
            "bb" => Ok(Trail::BetaBang),
            "ti" => Ok(Trail::TrailInspect),
            "t" => binary(self, Trail::trans),
            "lam" => unary(self, Trail::lam_t),
            "app" => binary(self, Trail::app_t),
            "letq" => binary(self, Trail::let_t),
            "tb" => {
                self.expect(Tok::LParen, "'('")?;
                let mut slots = Vec::with_capacity(9);
                for i in 0..9 {
                    if i > 0 {
                        self.expect(Tok::Comma, "',' in tb")?;
                    }
                    slots.push(self.trail()?);
                }
                self.expect(Tok::RParen, "')' closing tb")?;
                let slots: [Trail; 9] = slots.try_into().expect("nine trails collected");
                Ok(Trail::trpl(Replacement::new(slots)))
            }
            "ext" => {
                self.expect(Tok::LParen, "'('")?;
                let m = self.term()?;
                self.expect(Tok::RParen, "')' closing ext")?;
                Ok(Trail::extract(m))
            }
            other => self.err(format!("'{other}' does not start a trail")),
        }
    }

    fn subst(&mut self) -> Result<Subst, ParseError> {
        let first = self.subst_item()?;
        if self.is_kw("o") {
            self.pos += 1;
            let rest = self.subst()?;
            Ok(Subst::comp(first, rest))
        } else {
            Ok(first)
        }
    }

    fn subst_item(&mut self) -> Result<Subst, ParseError> {
        if self.is_kw("id") {
            self.pos += 1;
            return Ok(Subst::Id);
        }
        if self.is_kw("shift") {
            self.pos += 1;
            return Ok(Subst::Shift);
        }
        // '(' may open a parenthesized substitution or a cons-head term;
        // try the substitution reading first and backtrack on failure
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            if let Ok(s) = self.subst() {
                if self.peek() == Some(&Tok::RParen) && self.toks.get(self.pos + 1).map(|t| &t.tok) != Some(&Tok::Dot) {
                    self.pos += 1;
                    return Ok(s);
                }
            }
            self.pos = save;
        }
        let head = self.appchain()?;
        self.expect(Tok::Dot, "'.' after substitution head")?;
        let tail = self.subst()?;
        Ok(Subst::cons(head, tail))
    }
}

/// Parse a complete term from source text.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
    };
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input after term");
    }
    Ok(t)
}

/// Parse a complete trail from source text.
pub fn parse_trail(text: &str) -> Result<Trail, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
    };
    let q = p.trail()?;
    if p.peek().is_some() {
        return p.err("trailing input after trail");
    }
    Ok(q)
}

struct Printer {
    counter: u32,
    env: Vec<String>,
}

impl Printer {
    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("x{}", self.counter)
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Lam(b) => {
                let name = self.fresh();
                write!(out, "\\{name}. ").unwrap();
                self.env.push(name);
                self.term(b, out);
                self.env.pop();
            }
            Term::LetBang(d, b) => {
                let name = self.fresh();
                write!(out, "let {name} = ").unwrap();
                self.term(d, out);
                out.push_str(" in ");
                self.env.push(name);
                self.term(b, out);
                self.env.pop();
            }
            Term::Annot(q, b) => {
                self.trail(q, out);
                out.push_str(" |> ");
                self.term(b, out);
            }
            Term::App(_, _) => self.appchain(t, out),
            _ => self.atom(t, out),
        }
    }

    fn appchain(&mut self, t: &Term, out: &mut String) {
        if let Term::App(f, a) = t {
            self.appchain(f, out);
            out.push(' ');
            self.atom(a, out);
        } else {
            self.atom(t, out);
        }
    }

    fn atom(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Index(n) => {
                let n = *n as usize;
                if n <= self.env.len() {
                    out.push_str(&self.env[self.env.len() - n]);
                } else {
                    write!(out, "#{}", n - self.env.len()).unwrap();
                }
            }
            Term::Bang(q, b) => {
                if matches!(**q, Trail::Refl) {
                    out.push_str("! ");
                } else {
                    out.push_str("!{");
                    self.trail(q, out);
                    out.push_str("} ");
                }
                self.atom(b, out);
            }
            Term::Inspect(theta) => {
                out.push_str("iota{");
                for (i, ctor) in TrailCtor::ALL.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write!(out, "{}: ", ctor.keyword()).unwrap();
                    self.term(&theta.slots()[i], out);
                }
                out.push('}');
            }
            Term::Erase(b) => {
                out.push_str("erase(");
                self.term(b, out);
                out.push(')');
            }
            Term::Closure(b, s) => {
                match **b {
                    Term::Index(_) | Term::Inspect(_) | Term::Erase(_) | Term::Closure(_, _) => {
                        self.atom(b, out)
                    }
                    _ => {
                        out.push('(');
                        self.term(b, out);
                        out.push(')');
                    }
                }
                out.push('[');
                self.subst(s, out);
                out.push(']');
            }
            other => {
                out.push('(');
                self.term(other, out);
                out.push(')');
            }
        }
    }

    fn trail(&mut self, q: &Trail, out: &mut String) {
        match q {
            Trail::Refl => out.push('r'),
            Trail::Beta => out.push('b'),
            Trail::BetaBang => out.push_str("bb"),
            Trail::TrailInspect => out.push_str("ti"),
            Trail::Trans(a, b) => {
                out.push_str("t(");
                self.trail(a, out);
                out.push_str(", ");
                self.trail(b, out);
                out.push(')');
            }
            Trail::LamT(a) => {
                out.push_str("lam(");
                self.trail(a, out);
                out.push(')');
            }
            Trail::AppT(a, b) => {
                out.push_str("app(");
                self.trail(a, out);
                out.push_str(", ");
                self.trail(b, out);
                out.push(')');
            }
            Trail::LetT(a, b) => {
                out.push_str("letq(");
                self.trail(a, out);
                out.push_str(", ");
                self.trail(b, out);
                out.push(')');
            }
            Trail::TrplT(zeta) => {
                out.push_str("tb(");
                for (i, sub) in zeta.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.trail(sub, out);
                }
                out.push(')');
            }
            Trail::Extract(m) => {
                out.push_str("ext(");
                self.term(m, out);
                out.push(')');
            }
        }
    }

    fn subst(&mut self, s: &Subst, out: &mut String) {
        match s {
            Subst::Id => out.push_str("id"),
            Subst::Shift => out.push_str("shift"),
            Subst::Cons(m, tail) => {
                self.atom(m, out);
                out.push_str(" . ");
                self.subst(tail, out);
            }
            Subst::Comp(a, b) => {
                match **a {
                    Subst::Cons(_, _) | Subst::Comp(_, _) => {
                        out.push('(');
                        self.subst(a, out);
                        out.push(')');
                    }
                    _ => self.subst(a, out),
                }
                out.push_str(" o ");
                self.subst(b, out);
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut p = Printer {
        counter: 0,
        env: Vec::new(),
    };
    let mut out = String::new();
    p.term(t, &mut out);
    out
}

pub fn print_trail(q: &Trail) -> String {
    let mut p = Printer {
        counter: 0,
        env: Vec::new(),
    };
    let mut out = String::new();
    p.trail(q, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::church;

    fn roundtrip(t: &Term) {
        let s = print_term(t);
        let back = parse_term(&s).unwrap_or_else(|e| panic!("{e} in {s:?}"));
        assert_eq!(&back, t, "printed as {s:?}");
    }

    #[test]
    fn parse_identity() {
        assert_eq!(parse_term("\\x. x").unwrap(), Term::lam(Term::Index(1)));
    }

    #[test]
    fn parse_multi_binder() {
        assert_eq!(
            parse_term("\\f x. f x").unwrap(),
            Term::lam(Term::lam(Term::app(Term::Index(2), Term::Index(1))))
        );
    }

    #[test]
    fn parse_let_and_bang() {
        assert_eq!(
            parse_term("let x = ! (\\y. y) in x").unwrap(),
            Term::let_bang(
                Term::bang(Trail::Refl, Term::lam(Term::Index(1))),
                Term::Index(1)
            )
        );
        assert_eq!(
            parse_term("!{b} \\x. x").unwrap_err().msg,
            "expected a term"
        );
        assert_eq!(
            parse_term("!{b} (\\x. x)").unwrap(),
            Term::bang(Trail::Beta, Term::lam(Term::Index(1)))
        );
    }

    #[test]
    fn parse_annotation_and_trails() {
        assert_eq!(
            parse_term("t(b, app(r, bb)) |> \\x. x").unwrap(),
            Term::annot(
                Trail::trans(Trail::Beta, Trail::app_t(Trail::Refl, Trail::BetaBang)),
                Term::lam(Term::Index(1))
            )
        );
    }

    #[test]
    fn parse_closure_and_subst() {
        assert_eq!(
            parse_term("#1[(\\x. x) . shift o id]").unwrap(),
            Term::closure(
                Term::Index(1),
                Subst::cons(
                    Term::lam(Term::Index(1)),
                    Subst::comp(Subst::Shift, Subst::Id)
                )
            )
        );
    }

    #[test]
    fn unbound_identifier_is_an_error() {
        let e = parse_term("(\\x. y)").unwrap_err();
        assert!(e.msg.contains("unbound identifier"));
    }

    #[test]
    fn inspection_requires_all_nine_slots() {
        let e = parse_term("iota{r: \\x. x}").unwrap_err();
        assert!(e.msg.contains("nine"));
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&Term::lam(Term::Index(1))), "\\x1. x1");
        assert_eq!(
            print_term(&Term::annot(Trail::Beta, Term::lam(Term::Index(1)))),
            "b |> \\x1. x1"
        );
    }

    #[test]
    fn roundtrip_handpicked() {
        roundtrip(&church(3));
        roundtrip(&Term::Index(4));
        roundtrip(&Term::bang(
            Trail::trans(Trail::Beta, Trail::lam_t(Trail::Refl)),
            Term::app(Term::lam(Term::Index(2)), Term::Index(1)),
        ));
        roundtrip(&Term::closure(
            Term::erase(Term::let_bang(Term::Index(1), Term::Index(2))),
            Subst::comp(
                Subst::comp(Subst::Shift, Subst::Id),
                Subst::cons(Term::lam(Term::Index(1)), Subst::Shift),
            ),
        ));
        roundtrip(&Term::inspect(Replacement::uniform(Term::Index(1))));
        roundtrip(&Term::bang(
            Trail::extract(Term::closure(Term::Index(2), Subst::Shift)),
            Term::lam(Term::erase(Term::Index(1))),
        ));
        roundtrip(&Term::closure(
            Term::Index(1),
            Subst::cons(
                Term::annot(Trail::trpl(crate::syntax::Replacement::uniform(Trail::Refl)), Term::Index(1)),
                Subst::comp(Subst::cons(Term::Index(1), Subst::Id), Subst::Shift),
            ),
        ));
    }

    #[test]
    fn closure_of_bang_keeps_grouping() {
        let t = Term::closure(Term::bang(Trail::Refl, Term::Index(1)), Subst::Id);
        roundtrip(&t);
    }
}
