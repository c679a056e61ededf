//! Big-step call-by-value evaluation of closed terms to canonical forms.
//!
//! Evaluation is substitution-based: application and let substitute the
//! evaluated argument into the body, and `rec x . t` steps to
//! `t [rec x . t / x]`, so no closure environments are needed. A fuel
//! budget counts recursive `eval` calls and stops user-written divergence.

use std::fmt;

use crate::ast::{substitute, BinOp, Pattern, Term};

/// Evaluation-step budget. Every recursive call to `eval` consumes one
/// unit, so a run with fuel F makes at most F calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(remaining: u64) -> Fuel {
        Fuel { remaining }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.remaining == 0 {
            Err(EvalError::OutOfFuel)
        } else {
            self.remaining -= 1;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    OutOfFuel,
    MatchFailure,
    ArithmeticOverflow,
    /// A term form that has no rule for its evaluated subterms. Cannot
    /// happen for terms accepted by the typechecker.
    Stuck(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::OutOfFuel => write!(f, "out of fuel"),
            EvalError::MatchFailure => write!(f, "no pattern matched the scrutinee"),
            EvalError::ArithmeticOverflow => write!(f, "integer overflow"),
            EvalError::Stuck(what) => write!(f, "stuck: {what}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Evaluate a closed term to a canonical form within the given fuel.
///
/// Tail positions (taken branches, redex bodies, rec unfoldings) are
/// evaluated in a loop; recursion into subterms grows the native stack in
/// segments, so deeply nested evaluation contexts exhaust fuel rather than
/// the stack.
pub fn eval(t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || eval_loop(t, fuel))
}

fn eval_loop(t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    let mut current = t.clone();
    loop {
        fuel.tick()?;
        match current {
            Term::Num(_) | Term::Bool(_) | Term::Unit | Term::Leaf | Term::Lambda(_, _) => {
                return Ok(current)
            }
            Term::Var(x) => return Err(EvalError::Stuck(format!("unbound variable `{x}`"))),
            Term::If(c, t1, t2) => match eval(&c, fuel)? {
                Term::Bool(true) => current = *t1,
                Term::Bool(false) => current = *t2,
                other => return Err(EvalError::Stuck(format!("if on non-boolean `{other}`"))),
            },
            Term::BinOp(op, lhs, rhs) => {
                let a = eval(&lhs, fuel)?;
                let b = eval(&rhs, fuel)?;
                return apply_binop(op, &a, &b);
            }
            Term::Pair(a, b) => {
                let a = eval(&a, fuel)?;
                let b = eval(&b, fuel)?;
                return Ok(Term::pair(a, b));
            }
            Term::Fst(p) => match eval(&p, fuel)? {
                Term::Pair(a, _) => return Ok(*a),
                other => return Err(EvalError::Stuck(format!("fst of non-pair `{other}`"))),
            },
            Term::Snd(p) => match eval(&p, fuel)? {
                Term::Pair(_, b) => return Ok(*b),
                other => return Err(EvalError::Stuck(format!("snd of non-pair `{other}`"))),
            },
            Term::App(fun, arg) => {
                let fun = eval(&fun, fuel)?;
                let arg = eval(&arg, fuel)?;
                match fun {
                    Term::Lambda(x, body) => current = substitute(&body, &x, &arg),
                    other => {
                        return Err(EvalError::Stuck(format!(
                            "application of non-function `{other}`"
                        )))
                    }
                }
            }
            Term::Let(x, bound, body) => {
                let v = eval(&bound, fuel)?;
                current = substitute(&body, &x, &v);
            }
            Term::Rec(ref x, ref body) => {
                current = substitute(body, x, &current);
            }
            Term::Node(l, k, v, r) => {
                let l = eval(&l, fuel)?;
                let k = eval(&k, fuel)?;
                let v = eval(&v, fuel)?;
                let r = eval(&r, fuel)?;
                return Ok(Term::node(l, k, v, r));
            }
            Term::Case {
                scrutinee,
                leaf_branch,
                pattern,
                node_branch,
            } => {
                let c = eval(&scrutinee, fuel)?;
                if c == Term::Leaf {
                    current = *leaf_branch;
                    continue;
                }
                match match_pattern(&pattern, &c) {
                    Some(bindings) => {
                        let mut body = *node_branch;
                        for (name, value) in bindings {
                            body = substitute(&body, &name, &value);
                        }
                        current = body;
                    }
                    None => return Err(EvalError::MatchFailure),
                }
            }
        }
    }
}

fn apply_binop(op: BinOp, a: &Term, b: &Term) -> Result<Term, EvalError> {
    match op {
        BinOp::Plus | BinOp::Minus => {
            let (x, y) = int_operands(op, a, b)?;
            let result = if op == BinOp::Plus {
                x.checked_add(y)
            } else {
                x.checked_sub(y)
            };
            result.map(Term::Num).ok_or(EvalError::ArithmeticOverflow)
        }
        BinOp::Leq | BinOp::Lt | BinOp::Gt => {
            let (x, y) = int_operands(op, a, b)?;
            let holds = match op {
                BinOp::Leq => x <= y,
                BinOp::Lt => x < y,
                _ => x > y,
            };
            Ok(Term::Bool(holds))
        }
        BinOp::Eq => canonical_eq(a, b).map(Term::Bool),
    }
}

fn int_operands(op: BinOp, a: &Term, b: &Term) -> Result<(i64, i64), EvalError> {
    match (a, b) {
        (Term::Num(x), Term::Num(y)) => Ok((*x, *y)),
        _ => Err(EvalError::Stuck(format!(
            "`{}` on non-integers",
            op.symbol()
        ))),
    }
}

/// Structural equality of canonical forms. Functions have no decidable
/// equality, so comparing them (at any depth) is an error; the typechecker
/// rules this out for accepted terms.
fn canonical_eq(a: &Term, b: &Term) -> Result<bool, EvalError> {
    match (a, b) {
        (Term::Lambda(_, _), _) | (_, Term::Lambda(_, _)) => Err(EvalError::Stuck(
            "`==` on a function value".into(),
        )),
        (Term::Num(x), Term::Num(y)) => Ok(x == y),
        (Term::Bool(x), Term::Bool(y)) => Ok(x == y),
        (Term::Unit, Term::Unit) => Ok(true),
        (Term::Leaf, Term::Leaf) => Ok(true),
        (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
            Ok(canonical_eq(a1, a2)? && canonical_eq(b1, b2)?)
        }
        (Term::Node(l1, k1, v1, r1), Term::Node(l2, k2, v2, r2)) => Ok(canonical_eq(l1, l2)?
            && canonical_eq(k1, k2)?
            && canonical_eq(v1, v2)?
            && canonical_eq(r1, r2)?),
        (Term::Leaf, Term::Node(..)) | (Term::Node(..), Term::Leaf) => Ok(false),
        _ => Err(EvalError::Stuck("`==` on non-canonical operands".into())),
    }
}

/// Match a canonical term against a pattern, producing the variable
/// bindings on success. Constant and leaf patterns require equality;
/// node and pair patterns match component-wise.
pub fn match_pattern(
    pattern: &Pattern,
    canonical: &Term,
) -> Option<Vec<(String, Term)>> {
    let mut bindings = Vec::new();
    if match_into(pattern, canonical, &mut bindings) {
        Some(bindings)
    } else {
        None
    }
}

fn match_into(pattern: &Pattern, c: &Term, bindings: &mut Vec<(String, Term)>) -> bool {
    match pattern {
        Pattern::Var(x) => {
            bindings.push((x.clone(), c.clone()));
            true
        }
        Pattern::Leaf => *c == Term::Leaf,
        Pattern::Const(k) => k.as_ref() == c,
        Pattern::Node(pl, pk, pv, pr) => match c {
            Term::Node(l, k, v, r) => {
                match_into(pl, l, bindings)
                    && match_into(pk, k, bindings)
                    && match_into(pv, v, bindings)
                    && match_into(pr, r, bindings)
            }
            _ => false,
        },
        Pattern::Pair(pa, pb) => match c {
            Term::Pair(a, b) => match_into(pa, a, bindings) && match_into(pb, b, bindings),
            _ => false,
        },
    }
}
