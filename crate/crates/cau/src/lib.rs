//! Audited lambda calculus workbench: a reference rewriting semantics, an
//! explicit-substitution refinement, a call-by-value abstract machine, and a
//! differential-testing oracle, behind a common surface syntax.

pub mod corpus;
pub mod gen;
pub mod machine;
pub mod naive;
pub mod path;
pub mod rewrite;
pub mod sigma;
pub mod surface;
pub mod syntax;
pub mod trace;
