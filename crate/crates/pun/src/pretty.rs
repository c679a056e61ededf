//! Display implementations for terms, types, patterns and programs.
//!
//! Printed terms re-parse to an alpha-equivalent term. Lambdas always print
//! as `(\ x -> body)` and applications always print parenthesized, so both
//! behave like atoms; parentheses elsewhere follow the expression grammar
//! (application > arithmetic > comparison > everything else).

use std::fmt;

use crate::ast::{Declaration, Pattern, Program, Term, Type};

/// Binding strength required by the surrounding context.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Term = 0,
    Cmp = 1,
    Arith = 2,
    Atom = 3,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Prec::Term)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, ctx: Prec) -> fmt::Result {
    match t {
        Term::Num(n) => write!(f, "{n}"),
        Term::Bool(b) => write!(f, "{b}"),
        Term::Unit => write!(f, "()"),
        Term::Var(x) => write!(f, "{x}"),
        Term::Leaf => write!(f, "leaf"),
        Term::Lambda(x, body) => {
            write!(f, "(\\ {x} -> ")?;
            write_term(f, body, Prec::Term)?;
            write!(f, ")")
        }
        Term::App(fun, arg) => {
            write!(f, "(")?;
            write_term(f, fun, Prec::Atom)?;
            write!(f, " ")?;
            write_term(f, arg, Prec::Atom)?;
            write!(f, ")")
        }
        Term::Pair(a, b) => {
            write!(f, "(")?;
            write_term(f, a, Prec::Term)?;
            write!(f, ", ")?;
            write_term(f, b, Prec::Term)?;
            write!(f, ")")
        }
        Term::Fst(a) => {
            write!(f, "fst(")?;
            write_term(f, a, Prec::Term)?;
            write!(f, ")")
        }
        Term::Snd(a) => {
            write!(f, "snd(")?;
            write_term(f, a, Prec::Term)?;
            write!(f, ")")
        }
        Term::Node(l, k, v, r) => {
            write!(f, "[node ")?;
            write_term(f, l, Prec::Atom)?;
            write!(f, " ")?;
            write_term(f, k, Prec::Atom)?;
            write!(f, " ")?;
            write_term(f, v, Prec::Atom)?;
            write!(f, " ")?;
            write_term(f, r, Prec::Atom)?;
            write!(f, "]")
        }
        Term::BinOp(op, lhs, rhs) => {
            let own = if op.is_arith() { Prec::Arith } else { Prec::Cmp };
            maybe_parens(f, ctx > own, |f| {
                // Arithmetic is left-associative, so the left operand may be
                // another chain; comparison operands sit at arithmetic level.
                let (lp, rp) = if op.is_arith() {
                    (Prec::Arith, Prec::Atom)
                } else {
                    (Prec::Arith, Prec::Arith)
                };
                write_term(f, lhs, lp)?;
                write!(f, " {} ", op.symbol())?;
                write_term(f, rhs, rp)
            })
        }
        Term::If(c, t1, t2) => maybe_parens(f, ctx > Prec::Term, |f| {
            write!(f, "if ")?;
            write_term(f, c, Prec::Term)?;
            write!(f, " then ")?;
            write_term(f, t1, Prec::Term)?;
            write!(f, " else ")?;
            write_term(f, t2, Prec::Term)
        }),
        Term::Let(x, bound, body) => maybe_parens(f, ctx > Prec::Term, |f| {
            write!(f, "let {x} = ")?;
            write_term(f, bound, Prec::Term)?;
            write!(f, " in ")?;
            write_term(f, body, Prec::Term)
        }),
        Term::Rec(x, body) => maybe_parens(f, ctx > Prec::Term, |f| {
            write!(f, "rec {x} . ")?;
            write_term(f, body, Prec::Term)
        }),
        Term::Case {
            scrutinee,
            leaf_branch,
            pattern,
            node_branch,
        } => maybe_parens(f, ctx > Prec::Term, |f| {
            write!(f, "case ")?;
            write_term(f, scrutinee, Prec::Term)?;
            write!(f, " of ; leaf -> ")?;
            write_term(f, leaf_branch, Prec::Term)?;
            write!(f, " ; {pattern} -> ")?;
            write_term(f, node_branch, Prec::Term)
        }),
    }
}

fn maybe_parens(
    f: &mut fmt::Formatter<'_>,
    wrap: bool,
    inner: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if wrap {
        write!(f, "(")?;
        inner(f)?;
        write!(f, ")")
    } else {
        inner(f)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Leaf => write!(f, "leaf"),
            Pattern::Var(x) => write!(f, "{x}"),
            Pattern::Const(c) => write_term(f, c, Prec::Atom),
            Pattern::Node(l, k, v, r) => write!(f, "[node {l} {k} {v} {r}]"),
            Pattern::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => write!(f, "integer"),
            Type::Bool => write!(f, "boolean"),
            Type::Unit => write!(f, "unit"),
            Type::Var(n) => write!(f, "t{n}"),
            Type::Pair(a, b) => write!(f, "({a}, {b})"),
            Type::Arrow(a, b) => {
                // Arrows associate to the right.
                if matches!(**a, Type::Arrow(_, _)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            Type::Bst(k, v) => {
                write!(f, "bst ")?;
                write_bst_arg(f, k)?;
                write!(f, " ")?;
                write_bst_arg(f, v)
            }
        }
    }
}

fn write_bst_arg(f: &mut fmt::Formatter<'_>, ty: &Type) -> fmt::Result {
    // Called with the `bst` head already to be printed by the parent; key
    // and value positions take atomic types only.
    match ty {
        Type::Arrow(_, _) | Type::Bst(_, _) => write!(f, "({ty})"),
        _ => write!(f, "{ty}"),
    }
}

impl fmt::Display for Declaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Declaration::Signature { name, ty } => write!(f, "{name} : {ty} ."),
            Declaration::Definition { name, params, body } => {
                write!(f, "{name}")?;
                for p in params {
                    write!(f, " {p}")?;
                }
                write!(f, " = {body} .")
            }
            Declaration::Property { name, args, body } => {
                write!(f, "property {name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, " . {body} .")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.declarations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Term as T;

    #[test]
    fn application_of_lambda_prints_like_a_counterexample() {
        let t = T::app(
            T::lambda("x", T::binop(BinOp::Plus, T::var("x"), T::num(2))),
            T::num(3),
        );
        assert_eq!(t.to_string(), r"((\ x -> x + 2) 3)");
        let full = T::binop(
            BinOp::Eq,
            T::binop(BinOp::Minus, t.clone(), T::num(7)),
            T::binop(BinOp::Minus, T::num(7), t),
        );
        assert_eq!(
            full.to_string(),
            r"((\ x -> x + 2) 3) - 7 == 7 - ((\ x -> x + 2) 3)"
        );
    }

    #[test]
    fn node_prints_in_bracket_syntax() {
        let t = T::node(T::Leaf, T::num(1), T::num(2), T::Leaf);
        assert_eq!(t.to_string(), "[node leaf 1 2 leaf]");
    }

    #[test]
    fn pair_prints_with_comma() {
        assert_eq!(T::pair(T::num(1), T::Bool(true)).to_string(), "(1, true)");
    }

    #[test]
    fn arithmetic_parenthesizes_only_where_needed() {
        let a = T::binop(
            BinOp::Plus,
            T::binop(BinOp::Plus, T::var("a"), T::var("b")),
            T::var("c"),
        );
        assert_eq!(a.to_string(), "a + b + c");
        let b = T::binop(
            BinOp::Plus,
            T::var("a"),
            T::binop(BinOp::Plus, T::var("b"), T::var("c")),
        );
        assert_eq!(b.to_string(), "a + (b + c)");
        let c = T::binop(
            BinOp::Leq,
            T::binop(BinOp::Plus, T::var("a"), T::var("b")),
            T::var("c"),
        );
        assert_eq!(c.to_string(), "a + b <= c");
        let d = T::binop(
            BinOp::Plus,
            T::if_(T::Bool(true), T::num(1), T::num(2)),
            T::num(3),
        );
        assert_eq!(d.to_string(), "(if true then 1 else 2) + 3");
    }

    #[test]
    fn types_print_in_surface_syntax() {
        let ty = Type::arrow(
            Type::Int,
            Type::arrow(
                Type::Int,
                Type::arrow(Type::bst(Type::Int, Type::Int), Type::bst(Type::Int, Type::Int)),
            ),
        );
        assert_eq!(
            ty.to_string(),
            "integer -> integer -> bst integer integer -> bst integer integer"
        );
        let nested = Type::arrow(Type::arrow(Type::Int, Type::Bool), Type::Unit);
        assert_eq!(nested.to_string(), "(integer -> boolean) -> unit");
        let model = Type::bst(Type::pair(Type::Int, Type::Int), Type::Unit);
        assert_eq!(model.to_string(), "bst (integer, integer) unit");
    }
}
