//! Call-by-value abstract machine over closures and trail-carrying tuples.
//!
//! The state is a stack of (trail | code | environment) tuples plus a dump of
//! already-computed values. Codes are either pure terms or syntax-tree
//! fragments (application, bang, incomplete let, inspection nodes). Tuple and
//! value trails are kept pure and sigma-tau-normal across every transition.
//!
//! Stack and dump are stored top-first (index 0 is the top).

use crate::rewrite::RewriteError;
use crate::sigma::sigmatau_normalize_trail;
use crate::syntax::{Replacement, Subst, Term, Trail, TrailCtor};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineClosure {
    /// An erased lambda paired with its environment.
    Lam { body: Term, env: Env },
    /// A bang wrapping a closure, carrying the complete history of its body.
    Bang {
        trail: Trail,
        inner: Box<MachineClosure>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value {
    pub trail: Trail,
    pub closure: MachineClosure,
}

/// Environment; index 0 is the most recent binding (de Bruijn index 1).
pub type Env = Vec<Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Code {
    Pure(Term),
    AppNode,
    BangNode,
    LetNode(Term),
    InspectNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tuple {
    pub trail: Trail,
    pub code: Code,
    pub env: Env,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub stack: Vec<Tuple>,
    pub dump: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StuckReason {
    NonLambdaApplication,
    NonBangDefiniens,
    InspectionLocked,
    EnvUnderflow,
    /// Annotated or explicit (closure/erase) code has no machine rule.
    UnsupportedCode,
    /// The configuration shape matches no rule.
    NoRule,
}

impl std::fmt::Display for StuckReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StuckReason::NonLambdaApplication => "application of a non-lambda value",
            StuckReason::NonBangDefiniens => "let definiens is not a bang",
            StuckReason::InspectionLocked => "inspection-locked",
            StuckReason::EnvUnderflow => "environment lookup out of range",
            StuckReason::UnsupportedCode => "code has no machine rule",
            StuckReason::NoRule => "no transition rule matches",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next { rule: u8, config: Config },
    Final(Value),
    Stuck(StuckReason),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InjectError {
    #[error("the machine evaluates closed terms only")]
    OpenTerm,
    #[error("the machine evaluates pure terms only")]
    ImpureTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Final(Value),
    Stuck(StuckReason),
    FuelExhausted,
}

/// Initial configuration for a pure closed term.
pub fn inject(m: &Term) -> Result<Config, InjectError> {
    if !m.is_pure() {
        return Err(InjectError::ImpureTerm);
    }
    if !m.is_closed() {
        return Err(InjectError::OpenTerm);
    }
    Ok(Config {
        stack: vec![Tuple {
            trail: Trail::Refl,
            code: Code::Pure(m.clone()),
            env: Vec::new(),
        }],
        dump: Vec::new(),
    })
}

/// The n-th closure of the environment, discarding its trail.
pub fn env_lookup(e: &Env, n: u32) -> Option<MachineClosure> {
    e.get((n.checked_sub(1)?) as usize).map(|v| v.closure.clone())
}

/// Environment rendered as the substitution it stands for.
pub fn env_subst(e: &Env) -> Subst {
    e.iter()
        .rev()
        .fold(Subst::Id, |acc, v| Subst::cons(value_term(v), acc))
}

/// `1 . (e o shift)`: the substitution used under one binder.
fn lifted_env_subst(e: &Env) -> Subst {
    Subst::cons(Term::Index(1), Subst::comp(env_subst(e), Subst::Shift))
}

pub fn closure_term(c: &MachineClosure) -> Term {
    match c {
        MachineClosure::Lam { body, env } => Term::erase(Term::closure(
            Term::lam(body.clone()),
            env_subst(env),
        )),
        MachineClosure::Bang { trail, inner } => {
            Term::bang(trail.clone(), closure_term(inner))
        }
    }
}

pub fn value_term(v: &Value) -> Term {
    Term::annot(v.trail.clone(), closure_term(&v.closure))
}

/// Reify a pure trail as an open term with nine dangling indices in the
/// fixed slot order (r=1, t=2, b=3, bb=4, ti=5, lam=6, app=7, letq=8, tb=9).
pub fn trail_to_open_term(q: &Trail) -> Term {
    let idx = |c: TrailCtor| Term::Index(c.slot() as u32 + 1);
    match q {
        Trail::Refl => idx(TrailCtor::Refl),
        Trail::Beta => idx(TrailCtor::Beta),
        Trail::BetaBang => idx(TrailCtor::BetaBang),
        Trail::TrailInspect => idx(TrailCtor::TrailInspect),
        Trail::Trans(a, b) => Term::app(
            Term::app(idx(TrailCtor::Trans), trail_to_open_term(a)),
            trail_to_open_term(b),
        ),
        Trail::LamT(a) => Term::app(idx(TrailCtor::Lam), trail_to_open_term(a)),
        Trail::AppT(a, b) => Term::app(
            Term::app(idx(TrailCtor::App), trail_to_open_term(a)),
            trail_to_open_term(b),
        ),
        Trail::LetT(a, b) => Term::app(
            Term::app(idx(TrailCtor::Let), trail_to_open_term(a)),
            trail_to_open_term(b),
        ),
        Trail::TrplT(zeta) => Term::apps(
            idx(TrailCtor::Trpl),
            zeta.iter().map(trail_to_open_term),
        ),
        Trail::Extract(_) => unreachable!("machine trails are pure"),
    }
}

/// The trail-materialization operator for inspection: walks outward over the
/// context configuration accumulating the congruence trails that surround the
/// current bang, and stops at the first bang node (whose own outer trail is
/// not included). `None` when the walk runs off the end: the inspection has
/// no enclosing bang and is locked.
pub fn materialize_inspection_trail(
    q: Trail,
    stack: &[Tuple],
    dump: &[Value],
) -> Result<Option<Trail>, RewriteError> {
    let mut acc = q;
    let mut si = 0usize;
    let mut di = 0usize;
    loop {
        let run_start = si;
        while si < stack.len() && matches!(stack[si].code, Code::Pure(_)) {
            si += 1;
        }
        let run = &stack[run_start..si];
        let Some(node) = stack.get(si) else {
            return Ok(None);
        };
        si += 1;
        match &node.code {
            Code::BangNode if run.is_empty() => {
                return Ok(Some(sigmatau_normalize_trail(&acc)?));
            }
            Code::AppNode if run.len() == 1 => {
                acc = Trail::trans(
                    node.trail.clone(),
                    Trail::app_t(acc, run[0].trail.clone()),
                );
            }
            Code::AppNode if run.is_empty() => {
                let Some(v) = dump.get(di) else {
                    return Ok(None);
                };
                di += 1;
                acc = Trail::trans(node.trail.clone(), Trail::app_t(v.trail.clone(), acc));
            }
            Code::LetNode(_) if run.is_empty() => {
                acc = Trail::trans(node.trail.clone(), Trail::let_t(acc, Trail::Refl));
            }
            Code::InspectNode if run.len() <= 8 => {
                let j = 8 - run.len();
                if di + j > dump.len() {
                    return Ok(None);
                }
                let mut slots = Vec::with_capacity(9);
                for x in (0..j).rev() {
                    slots.push(dump[di + x].trail.clone());
                }
                slots.push(acc);
                for t in run {
                    slots.push(t.trail.clone());
                }
                di += j;
                let slots: [Trail; 9] = slots.try_into().expect("nine inspection slots");
                acc = Trail::trans(node.trail.clone(), Trail::trpl(Replacement::new(slots)));
            }
            _ => return Ok(None),
        }
    }
}

fn norm_trail(q: Trail) -> Result<Trail, RewriteError> {
    sigmatau_normalize_trail(&q)
}

/// One machine transition.
pub fn step(c: &Config) -> Result<Step, RewriteError> {
    let Some(top) = c.stack.first() else {
        return Ok(match c.dump.as_slice() {
            [v] => Step::Final(v.clone()),
            _ => Step::Stuck(StuckReason::NoRule),
        });
    };
    let rest = || c.stack[1..].to_vec();
    let next = |rule: u8, stack: Vec<Tuple>, dump: Vec<Value>| {
        Ok(Step::Next {
            rule,
            config: Config { stack, dump },
        })
    };
    match &top.code {
        Code::Pure(m) => match m {
            Term::App(f, a) => {
                let mut stack = vec![
                    Tuple {
                        trail: Trail::Refl,
                        code: Code::Pure((**f).clone()),
                        env: top.env.clone(),
                    },
                    Tuple {
                        trail: Trail::Refl,
                        code: Code::Pure((**a).clone()),
                        env: top.env.clone(),
                    },
                    Tuple {
                        trail: top.trail.clone(),
                        code: Code::AppNode,
                        env: Vec::new(),
                    },
                ];
                stack.extend(rest());
                next(1, stack, c.dump.clone())
            }
            Term::Lam(body) => {
                let mut dump = vec![Value {
                    trail: top.trail.clone(),
                    closure: MachineClosure::Lam {
                        body: (**body).clone(),
                        env: top.env.clone(),
                    },
                }];
                dump.extend(c.dump.iter().cloned());
                next(3, rest(), dump)
            }
            Term::LetBang(d, body) => {
                let mut stack = vec![
                    Tuple {
                        trail: Trail::Refl,
                        code: Code::Pure((**d).clone()),
                        env: top.env.clone(),
                    },
                    Tuple {
                        trail: top.trail.clone(),
                        code: Code::LetNode((**body).clone()),
                        env: top.env.clone(),
                    },
                ];
                stack.extend(rest());
                next(4, stack, c.dump.clone())
            }
            Term::Bang(q_inner, body) => {
                let inner_trail = norm_trail(Trail::trans(
                    (**q_inner).clone(),
                    Trail::extract(Term::closure((**body).clone(), env_subst(&top.env))),
                ))?;
                let mut stack = vec![
                    Tuple {
                        trail: inner_trail,
                        code: Code::Pure((**body).clone()),
                        env: top.env.clone(),
                    },
                    Tuple {
                        trail: top.trail.clone(),
                        code: Code::BangNode,
                        env: Vec::new(),
                    },
                ];
                stack.extend(rest());
                next(6, stack, c.dump.clone())
            }
            Term::Inspect(theta) => {
                let mut stack: Vec<Tuple> = theta
                    .iter()
                    .map(|branch| Tuple {
                        trail: Trail::Refl,
                        code: Code::Pure(branch.clone()),
                        env: top.env.clone(),
                    })
                    .collect();
                stack.push(Tuple {
                    trail: top.trail.clone(),
                    code: Code::InspectNode,
                    env: Vec::new(),
                });
                stack.extend(rest());
                next(8, stack, c.dump.clone())
            }
            Term::Index(n) => match env_lookup(&top.env, *n) {
                Some(closure) => {
                    let mut dump = vec![Value {
                        trail: top.trail.clone(),
                        closure,
                    }];
                    dump.extend(c.dump.iter().cloned());
                    next(10, rest(), dump)
                }
                None => Ok(Step::Stuck(StuckReason::EnvUnderflow)),
            },
            Term::Annot(_, _) | Term::Closure(_, _) | Term::Erase(_) => {
                Ok(Step::Stuck(StuckReason::UnsupportedCode))
            }
        },
        Code::AppNode => {
            let [w, v, dump_rest @ ..] = c.dump.as_slice() else {
                return Ok(Step::Stuck(StuckReason::NoRule));
            };
            let MachineClosure::Lam { body, env } = &v.closure else {
                return Ok(Step::Stuck(StuckReason::NonLambdaApplication));
            };
            let trail = norm_trail(Trail::trans(
                top.trail.clone(),
                Trail::trans(
                    Trail::app_t(v.trail.clone(), w.trail.clone()),
                    Trail::Beta,
                ),
            ))?;
            let mut new_env = vec![Value {
                trail: Trail::Refl,
                closure: w.closure.clone(),
            }];
            new_env.extend(env.iter().cloned());
            let mut stack = vec![Tuple {
                trail,
                code: Code::Pure(body.clone()),
                env: new_env,
            }];
            stack.extend(rest());
            next(2, stack, dump_rest.to_vec())
        }
        Code::BangNode => {
            let [v, dump_rest @ ..] = c.dump.as_slice() else {
                return Ok(Step::Stuck(StuckReason::NoRule));
            };
            let mut dump = vec![Value {
                trail: top.trail.clone(),
                closure: MachineClosure::Bang {
                    trail: v.trail.clone(),
                    inner: Box::new(v.closure.clone()),
                },
            }];
            dump.extend(dump_rest.iter().cloned());
            next(7, rest(), dump)
        }
        Code::LetNode(body) => {
            let [v, dump_rest @ ..] = c.dump.as_slice() else {
                return Ok(Step::Stuck(StuckReason::NoRule));
            };
            let MachineClosure::Bang { trail: qv, inner } = &v.closure else {
                return Ok(Step::Stuck(StuckReason::NonBangDefiniens));
            };
            let opened = Value {
                trail: qv.clone(),
                closure: (**inner).clone(),
            };
            let q_nev = norm_trail(Trail::extract(Term::closure(
                Term::erase(Term::closure(body.clone(), lifted_env_subst(&top.env))),
                Subst::cons(value_term(&opened), Subst::Id),
            )))?;
            let trail = norm_trail(Trail::seq([
                top.trail.clone(),
                Trail::let_t(v.trail.clone(), Trail::Refl),
                Trail::BetaBang,
                q_nev,
            ]))?;
            let mut new_env = vec![opened];
            new_env.extend(top.env.iter().cloned());
            let mut stack = vec![Tuple {
                trail,
                code: Code::Pure(body.clone()),
                env: new_env,
            }];
            stack.extend(rest());
            next(5, stack, dump_rest.to_vec())
        }
        Code::InspectNode => {
            if c.dump.len() < 9 {
                return Ok(Step::Stuck(StuckReason::NoRule));
            }
            let branches = &c.dump[..9]; // index 0 = branch 9, most recently evaluated
            let dump_rest = c.dump[9..].to_vec();
            let mut slots = Vec::with_capacity(9);
            for v in branches.iter().rev() {
                slots.push(v.trail.clone());
            }
            let slots: [Trail; 9] = slots.try_into().expect("nine branch trails");
            let q_star = norm_trail(Trail::trans(
                top.trail.clone(),
                Trail::trpl(Replacement::new(slots)),
            ))?;
            let Some(materialized) =
                materialize_inspection_trail(q_star.clone(), &c.stack[1..], &dump_rest)?
            else {
                return Ok(Step::Stuck(StuckReason::InspectionLocked));
            };
            let env: Env = branches
                .iter()
                .rev()
                .map(|v| Value {
                    trail: Trail::Refl,
                    closure: v.closure.clone(),
                })
                .collect();
            let trail = norm_trail(Trail::trans(q_star, Trail::TrailInspect))?;
            let mut stack = vec![Tuple {
                trail,
                code: Code::Pure(trail_to_open_term(&materialized)),
                env,
            }];
            stack.extend(rest());
            next(9, stack, dump_rest)
        }
    }
}

/// Iterate `step`, recording each applied rule number and successor state.
pub fn run(c: &Config, fuel: u64) -> Result<(RunOutcome, Vec<(u8, Config)>), RewriteError> {
    let mut cur = c.clone();
    let mut trace = Vec::new();
    for _ in 0..fuel {
        match step(&cur)? {
            Step::Next { rule, config } => {
                trace.push((rule, config.clone()));
                cur = config;
            }
            Step::Final(v) => return Ok((RunOutcome::Final(v), trace)),
            Step::Stuck(r) => return Ok((RunOutcome::Stuck(r), trace)),
        }
    }
    Ok((RunOutcome::FuelExhausted, trace))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigClass {
    TermConfig,
    ContextConfig,
    Invalid(String),
}

fn closure_closed(c: &MachineClosure) -> bool {
    match c {
        MachineClosure::Lam { body, env } => {
            body.max_free_index() <= env.len() as u32 + 1 && env.iter().all(value_closed)
        }
        MachineClosure::Bang { trail, inner } => trail.is_pure() && closure_closed(inner),
    }
}

fn value_closed(v: &Value) -> bool {
    v.trail.is_pure() && closure_closed(&v.closure)
}

/// Parse a context configuration; returns Err(reason) on shape violations.
fn check_ctx(stack: &[Tuple], dump: &[Value]) -> Result<(), String> {
    let mut si = 0usize;
    let mut di = 0usize;
    loop {
        let run_start = si;
        while si < stack.len() && matches!(stack[si].code, Code::Pure(_)) {
            si += 1;
        }
        let run_len = si - run_start;
        let Some(node) = stack.get(si) else {
            return if run_len == 0 && di == dump.len() {
                Ok(())
            } else {
                Err("dangling tuples or values past the last node".into())
            };
        };
        si += 1;
        match &node.code {
            Code::AppNode if run_len == 1 => {}
            Code::AppNode if run_len == 0 => {
                if di >= dump.len() {
                    return Err("application node with no value on the dump".into());
                }
                di += 1;
            }
            Code::LetNode(_) | Code::BangNode if run_len == 0 => {}
            Code::InspectNode if run_len <= 8 => {
                let j = 8 - run_len;
                if di + j > dump.len() {
                    return Err("inspection node with too few values on the dump".into());
                }
                di += j;
            }
            _ => return Err("stack block matches no context clause".into()),
        }
    }
}

fn check_term(stack: &[Tuple], dump: &[Value]) -> Result<(), String> {
    match stack.first().map(|t| &t.code) {
        None => match dump {
            [_] => Ok(()),
            _ => Err("empty stack needs exactly one value".into()),
        },
        Some(Code::Pure(_)) => check_ctx(&stack[1..], dump),
        Some(Code::AppNode) => {
            if dump.len() < 2 {
                return Err("application node needs two values".into());
            }
            check_ctx(&stack[1..], &dump[2..])
        }
        Some(Code::LetNode(_)) | Some(Code::BangNode) => {
            if dump.is_empty() {
                return Err("node needs a value on the dump".into());
            }
            check_ctx(&stack[1..], &dump[1..])
        }
        Some(Code::InspectNode) => {
            if dump.len() < 9 {
                return Err("inspection node needs nine values".into());
            }
            check_ctx(&stack[1..], &dump[9..])
        }
    }
}

fn check_closedness(c: &Config) -> Result<(), String> {
    for t in &c.stack {
        if !t.trail.is_pure() {
            return Err("impure tuple trail".into());
        }
        match &t.code {
            Code::Pure(m) => {
                if m.max_free_index() > t.env.len() as u32 {
                    return Err("open code under its environment".into());
                }
                if !m.is_pure() {
                    return Err("impure code".into());
                }
            }
            Code::LetNode(n) => {
                if n.max_free_index() > t.env.len() as u32 + 1 {
                    return Err("open let body under its environment".into());
                }
                if !n.is_pure() {
                    return Err("impure let body".into());
                }
            }
            _ => {}
        }
        if !t.env.iter().all(value_closed) {
            return Err("open value in an environment".into());
        }
    }
    if !c.dump.iter().all(value_closed) {
        return Err("open value on the dump".into());
    }
    Ok(())
}

/// Classify a configuration per the well-formedness judgments, including the
/// closedness side conditions of valid states.
pub fn validate(c: &Config) -> ConfigClass {
    if let Err(reason) = check_closedness(c) {
        return ConfigClass::Invalid(reason);
    }
    if check_term(&c.stack, &c.dump).is_ok() {
        ConfigClass::TermConfig
    } else if check_ctx(&c.stack, &c.dump).is_ok() {
        ConfigClass::ContextConfig
    } else {
        match check_term(&c.stack, &c.dump) {
            Err(reason) => ConfigClass::Invalid(reason),
            Ok(()) => unreachable!(),
        }
    }
}

/// Denotation of a context configuration, applied to a hole filler.
fn denote_ctx(stack: &[Tuple], dump: &[Value], hole: Term) -> Result<Term, String> {
    let mut si = 0usize;
    let mut di = 0usize;
    let mut acc = hole;
    loop {
        let run_start = si;
        while si < stack.len() && matches!(stack[si].code, Code::Pure(_)) {
            si += 1;
        }
        let run = &stack[run_start..si];
        let Some(node) = stack.get(si) else {
            return if run.is_empty() && di == dump.len() {
                Ok(acc)
            } else {
                Err("not a context configuration".into())
            };
        };
        si += 1;
        let pure_denot = |t: &Tuple| -> Result<Term, String> {
            match &t.code {
                Code::Pure(m) => Ok(Term::annot(
                    t.trail.clone(),
                    Term::erase(Term::closure(m.clone(), env_subst(&t.env))),
                )),
                _ => Err("expected a pure tuple".into()),
            }
        };
        acc = match &node.code {
            Code::AppNode if run.len() == 1 => Term::annot(
                node.trail.clone(),
                Term::app(acc, pure_denot(&run[0])?),
            ),
            Code::AppNode if run.is_empty() => {
                let v = dump.get(di).ok_or("missing function value")?;
                di += 1;
                Term::annot(node.trail.clone(), Term::app(value_term(v), acc))
            }
            Code::LetNode(n) if run.is_empty() => Term::annot(
                node.trail.clone(),
                Term::let_bang(
                    acc,
                    Term::erase(Term::closure(n.clone(), lifted_env_subst(&node.env))),
                ),
            ),
            Code::BangNode if run.is_empty() => {
                Term::annot(node.trail.clone(), Term::bang(Trail::Refl, acc))
            }
            Code::InspectNode if run.len() <= 8 => {
                let j = 8 - run.len();
                if di + j > dump.len() {
                    return Err("missing inspection branch values".into());
                }
                let mut slots = Vec::with_capacity(9);
                for x in (0..j).rev() {
                    slots.push(value_term(&dump[di + x]));
                }
                slots.push(acc);
                for t in run {
                    slots.push(pure_denot(t)?);
                }
                di += j;
                let slots: [Term; 9] = slots.try_into().expect("nine inspection slots");
                Term::annot(node.trail.clone(), Term::inspect(Replacement::new(slots)))
            }
            _ => return Err("stack block matches no context clause".into()),
        };
    }
}

/// Denotation of a term configuration as a term of the sigma calculus.
pub fn denote_config(c: &Config) -> Result<Term, String> {
    match c.stack.first() {
        None => match c.dump.as_slice() {
            [v] => Ok(value_term(v)),
            _ => Err("empty stack needs exactly one value".into()),
        },
        Some(t) => match &t.code {
            Code::Pure(m) => denote_ctx(
                &c.stack[1..],
                &c.dump,
                Term::annot(
                    t.trail.clone(),
                    Term::erase(Term::closure(m.clone(), env_subst(&t.env))),
                ),
            ),
            Code::AppNode => {
                let [w, v, rest @ ..] = c.dump.as_slice() else {
                    return Err("application node needs two values".into());
                };
                denote_ctx(
                    &c.stack[1..],
                    rest,
                    Term::annot(t.trail.clone(), Term::app(value_term(v), value_term(w))),
                )
            }
            Code::LetNode(n) => {
                let [v, rest @ ..] = c.dump.as_slice() else {
                    return Err("let node needs a value".into());
                };
                denote_ctx(
                    &c.stack[1..],
                    rest,
                    Term::annot(
                        t.trail.clone(),
                        Term::let_bang(
                            value_term(v),
                            Term::erase(Term::closure(n.clone(), lifted_env_subst(&t.env))),
                        ),
                    ),
                )
            }
            Code::BangNode => {
                let [v, rest @ ..] = c.dump.as_slice() else {
                    return Err("bang node needs a value".into());
                };
                denote_ctx(
                    &c.stack[1..],
                    rest,
                    Term::annot(t.trail.clone(), Term::bang(Trail::Refl, value_term(v))),
                )
            }
            Code::InspectNode => {
                if c.dump.len() < 9 {
                    return Err("inspection node needs nine values".into());
                }
                let mut slots = Vec::with_capacity(9);
                for v in c.dump[..9].iter().rev() {
                    slots.push(value_term(v));
                }
                let slots: [Term; 9] = slots.try_into().expect("nine inspection slots");
                denote_ctx(
                    &c.stack[1..],
                    &c.dump[9..],
                    Term::annot(t.trail.clone(), Term::inspect(Replacement::new(slots))),
                )
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::cau_eval_cbv;
    use crate::sigma::{sigmatau_equiv, sigmatau_normalize};
    use crate::syntax::church;

    fn id() -> Term {
        Term::lam(Term::Index(1))
    }

    #[test]
    fn inject_rejects_bad_input() {
        assert_eq!(inject(&Term::Index(1)), Err(InjectError::OpenTerm));
        assert_eq!(
            inject(&Term::erase(church(2))),
            Err(InjectError::ImpureTerm)
        );
        let c = inject(&church(2)).unwrap();
        assert_eq!(c.stack.len(), 1);
        assert!(c.dump.is_empty());
    }

    #[test]
    fn inject_denotes_the_term() {
        let c = inject(&church(2)).unwrap();
        assert_eq!(
            denote_config(&c).unwrap(),
            Term::annot(
                Trail::Refl,
                Term::erase(Term::closure(church(2), Subst::Id))
            )
        );
        assert_eq!(
            sigmatau_normalize(&denote_config(&c).unwrap()).unwrap(),
            church(2)
        );
    }

    #[test]
    fn lookup_discards_trails() {
        let v = |q: Trail| Value {
            trail: q,
            closure: MachineClosure::Lam {
                body: Term::Index(1),
                env: Vec::new(),
            },
        };
        let e = vec![v(Trail::Beta), v(Trail::BetaBang)];
        assert_eq!(
            env_lookup(&e, 2),
            Some(MachineClosure::Lam {
                body: Term::Index(1),
                env: Vec::new()
            })
        );
        assert_eq!(env_lookup(&e, 3), None);
        assert_eq!(env_lookup(&Vec::new(), 1), None);
    }

    #[test]
    fn identity_application_runs_rules_1_3_3_2_10() {
        let c = inject(&Term::app(id(), id())).unwrap();
        let (outcome, trace) = run(&c, 100).unwrap();
        let rules: Vec<u8> = trace.iter().map(|(r, _)| *r).collect();
        assert_eq!(rules, vec![1, 3, 3, 2, 10]);
        let RunOutcome::Final(v) = outcome else {
            panic!("expected a final value, got {outcome:?}");
        };
        assert_eq!(v.trail, Trail::Beta);
        assert!(matches!(v.closure, MachineClosure::Lam { ref body, ref env }
            if *body == Term::Index(1) && env.is_empty()));
    }

    #[test]
    fn final_value_agrees_with_reference_evaluator() {
        let t = Term::bang(
            Trail::Refl,
            Term::let_bang(Term::bang(Trail::Refl, church(2)), Term::Index(1)),
        );
        let (outcome, trace) = run(&inject(&t).unwrap(), 100).unwrap();
        let RunOutcome::Final(v) = outcome else {
            panic!("expected a final value, got {outcome:?}");
        };
        let rules: Vec<u8> = trace.iter().map(|(r, _)| *r).collect();
        assert_eq!(rules, vec![6, 4, 6, 3, 7, 5, 10, 7]);
        let reference = cau_eval_cbv(&t, 100).unwrap();
        assert!(sigmatau_equiv(&value_term(&v), &reference).unwrap());
    }

    #[test]
    fn validity_is_preserved_along_runs() {
        let t = Term::bang(
            Trail::Refl,
            Term::let_bang(
                Term::bang(Trail::Refl, Term::app(id(), church(1))),
                Term::app(Term::Index(1), id()),
            ),
        );
        let c = inject(&t).unwrap();
        assert_eq!(validate(&c), ConfigClass::TermConfig);
        let (outcome, trace) = run(&c, 500).unwrap();
        assert!(matches!(outcome, RunOutcome::Final(_)));
        for (_, cfg) in &trace {
            assert_eq!(validate(cfg), ConfigClass::TermConfig, "in {cfg:?}");
        }
    }

    #[test]
    fn stuck_on_non_lambda_application() {
        let t = Term::app(Term::bang(Trail::Refl, id()), id());
        let (outcome, _) = run(&inject(&t).unwrap(), 100).unwrap();
        assert_eq!(outcome, RunOutcome::Stuck(StuckReason::NonLambdaApplication));
    }

    #[test]
    fn stuck_on_non_bang_definiens() {
        let t = Term::let_bang(id(), Term::Index(1));
        let (outcome, _) = run(&inject(&t).unwrap(), 100).unwrap();
        assert_eq!(outcome, RunOutcome::Stuck(StuckReason::NonBangDefiniens));
    }

    #[test]
    fn stuck_on_locked_inspection() {
        let t = Term::inspect(Replacement::uniform(id()));
        let (outcome, _) = run(&inject(&t).unwrap(), 100).unwrap();
        assert_eq!(outcome, RunOutcome::Stuck(StuckReason::InspectionLocked));
    }

    #[test]
    fn omega_exhausts_fuel() {
        let d = Term::lam(Term::app(Term::Index(1), Term::Index(1)));
        let (outcome, _) = run(&inject(&Term::app(d.clone(), d)).unwrap(), 50).unwrap();
        assert_eq!(outcome, RunOutcome::FuelExhausted);
    }

    #[test]
    fn trail_reification_examples() {
        assert_eq!(trail_to_open_term(&Trail::Refl), Term::Index(1));
        assert_eq!(
            trail_to_open_term(&Trail::app_t(Trail::Refl, Trail::Beta)),
            Term::app(Term::app(Term::Index(7), Term::Index(1)), Term::Index(3))
        );
        assert_eq!(
            trail_to_open_term(&Trail::trans(Trail::Beta, Trail::Beta)),
            Term::app(Term::app(Term::Index(2), Term::Index(3)), Term::Index(3))
        );
    }

    #[test]
    fn inspection_inside_bang_replays_history() {
        // !_b iota{...}: all branches are values; the materialized history is b
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
        let (outcome, _) = run(&inject(&t).unwrap(), 500).unwrap();
        let RunOutcome::Final(v) = outcome else {
            panic!("expected a final value, got {outcome:?}");
        };
        let reference = cau_eval_cbv(&t, 500).unwrap();
        assert!(sigmatau_equiv(&value_term(&v), &reference).unwrap());
    }

    #[test]
    fn per_step_denotations_track_the_reference_semantics() {
        let t = Term::bang(
            Trail::Refl,
            Term::let_bang(
                Term::bang(Trail::Refl, Term::app(id(), church(1))),
                Term::app(Term::Index(1), id()),
            ),
        );
        let c = inject(&t).unwrap();
        let (_, trace) = run(&c, 500).unwrap();
        let mut prev = sigmatau_normalize(&denote_config(&c).unwrap()).unwrap();
        for (rule, cfg) in &trace {
            let cur = sigmatau_normalize(&denote_config(cfg).unwrap()).unwrap();
            match rule {
                2 | 5 | 9 => {
                    let reachable = crate::naive::find_principal_redexes(&prev)
                        .into_iter()
                        .any(|(path, _)| {
                            crate::naive::principal_contract(&prev, &path)
                                .ok()
                                .and_then(|t| crate::naive::tau_normalize(&t).ok())
                                .map(|t| t == cur)
                                .unwrap_or(false)
                        });
                    assert!(reachable, "rule {rule}: {prev} does not step to {cur}");
                }
                _ => assert_eq!(prev, cur, "rule {rule} changed the denotation"),
            }
            prev = cur;
        }
    }
}
