//! Term, type, pattern and program representations shared by the parser,
//! typechecker, evaluator and generator, plus substitution and free-variable
//! computation.

use std::collections::BTreeSet;

/// The types of pun: two base types, unit, pairs, functions and binary
/// search trees indexed by a key and a value type. `Var` only appears
/// while inference is running; a fully inferred type contains none.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Type {
    Int,
    Bool,
    Unit,
    Pair(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    Bst(Box<Type>, Box<Type>),
    Var(u32),
}

impl Type {
    pub fn pair(fst: Type, snd: Type) -> Type {
        Type::Pair(Box::new(fst), Box::new(snd))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn bst(key: Type, val: Type) -> Type {
        Type::Bst(Box::new(key), Box::new(val))
    }

    /// True if the type mentions no inference variable.
    pub fn is_ground(&self) -> bool {
        match self {
            Type::Int | Type::Bool | Type::Unit => true,
            Type::Pair(a, b) | Type::Arrow(a, b) | Type::Bst(a, b) => {
                a.is_ground() && b.is_ground()
            }
            Type::Var(_) => false,
        }
    }

    /// True if the type contains no function type anywhere. Structural
    /// equality is only defined at first-order types.
    pub fn is_first_order(&self) -> bool {
        match self {
            Type::Int | Type::Bool | Type::Unit | Type::Var(_) => true,
            Type::Pair(a, b) | Type::Bst(a, b) => a.is_first_order() && b.is_first_order(),
            Type::Arrow(_, _) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Plus,
    Minus,
    Leq,
    Lt,
    Gt,
    Eq,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Plus => "+",
            BinOp::Minus => "-",
            BinOp::Leq => "<=",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Eq => "==",
        }
    }

    /// Plus and Minus produce integers; the rest are comparisons.
    pub fn is_arith(self) -> bool {
        matches!(self, BinOp::Plus | BinOp::Minus)
    }
}

/// pun terms. Integer literals are 64-bit signed; overflow is detected at
/// evaluation time rather than wrapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Num(i64),
    Bool(bool),
    Unit,
    Var(String),
    If(Box<Term>, Box<Term>, Box<Term>),
    BinOp(BinOp, Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Lambda(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Let(String, Box<Term>, Box<Term>),
    Rec(String, Box<Term>),
    Leaf,
    Node(Box<Term>, Box<Term>, Box<Term>, Box<Term>),
    Case {
        scrutinee: Box<Term>,
        leaf_branch: Box<Term>,
        pattern: Pattern,
        node_branch: Box<Term>,
    },
}

/// Patterns for `case` over binary search trees. Variables within one
/// pattern are pairwise distinct (the parser enforces linearity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Const(Box<Term>),
    Var(String),
    Node(Box<Pattern>, Box<Pattern>, Box<Pattern>, Box<Pattern>),
    Pair(Box<Pattern>, Box<Pattern>),
    Leaf,
}

impl Pattern {
    /// Variable names bound by this pattern, left to right.
    pub fn binders(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Pattern::Const(_) | Pattern::Leaf => {}
            Pattern::Var(x) => out.push(x),
            Pattern::Node(l, k, v, r) => {
                l.collect_binders(out);
                k.collect_binders(out);
                v.collect_binders(out);
                r.collect_binders(out);
            }
            Pattern::Pair(a, b) => {
                a.collect_binders(out);
                b.collect_binders(out);
            }
        }
    }
}

impl Term {
    pub fn num(n: i64) -> Term {
        Term::Num(n)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lambda(param: impl Into<String>, body: Term) -> Term {
        Term::Lambda(param.into(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn binop(op: BinOp, lhs: Term, rhs: Term) -> Term {
        Term::BinOp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn if_(cond: Term, then: Term, els: Term) -> Term {
        Term::If(Box::new(cond), Box::new(then), Box::new(els))
    }

    pub fn pair(fst: Term, snd: Term) -> Term {
        Term::Pair(Box::new(fst), Box::new(snd))
    }

    pub fn let_(name: impl Into<String>, bound: Term, body: Term) -> Term {
        Term::Let(name.into(), Box::new(bound), Box::new(body))
    }

    pub fn rec(name: impl Into<String>, body: Term) -> Term {
        Term::Rec(name.into(), Box::new(body))
    }

    pub fn node(left: Term, key: Term, val: Term, right: Term) -> Term {
        Term::Node(Box::new(left), Box::new(key), Box::new(val), Box::new(right))
    }

    pub fn case(scrutinee: Term, leaf_branch: Term, pattern: Pattern, node_branch: Term) -> Term {
        Term::Case {
            scrutinee: Box::new(scrutinee),
            leaf_branch: Box::new(leaf_branch),
            pattern,
            node_branch: Box::new(node_branch),
        }
    }

    /// A term is canonical iff it is a literal, a pair or node of
    /// canonicals, a lambda, or a leaf. Canonical terms are their own
    /// normal forms.
    pub fn is_canonical(&self) -> bool {
        match self {
            Term::Num(_) | Term::Bool(_) | Term::Unit | Term::Leaf => true,
            Term::Pair(a, b) => a.is_canonical() && b.is_canonical(),
            Term::Node(l, k, v, r) => {
                l.is_canonical() && k.is_canonical() && v.is_canonical() && r.is_canonical()
            }
            Term::Lambda(_, _) => true,
            _ => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    /// AST depth, counting every constructor as one level.
    pub fn depth(&self) -> usize {
        match self {
            Term::Num(_) | Term::Bool(_) | Term::Unit | Term::Var(_) | Term::Leaf => 1,
            Term::Fst(t) | Term::Snd(t) | Term::Lambda(_, t) | Term::Rec(_, t) => 1 + t.depth(),
            Term::BinOp(_, a, b) | Term::Pair(a, b) | Term::App(a, b) | Term::Let(_, a, b) => {
                1 + a.depth().max(b.depth())
            }
            Term::If(a, b, c) => 1 + a.depth().max(b.depth()).max(c.depth()),
            Term::Node(a, b, c, d) => {
                1 + a.depth().max(b.depth()).max(c.depth()).max(d.depth())
            }
            Term::Case {
                scrutinee,
                leaf_branch,
                node_branch,
                ..
            } => 1 + scrutinee
                .depth()
                .max(leaf_branch.depth())
                .max(node_branch.depth()),
        }
    }
}

/// The free variables of a term under the usual binding rules: lambda,
/// let bodies, rec, and the node branch of a case (through its pattern).
pub fn free_vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Num(_) | Term::Bool(_) | Term::Unit | Term::Leaf => {}
        Term::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        Term::If(a, b, c) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
            collect_free(c, bound, out);
        }
        Term::BinOp(_, a, b) | Term::Pair(a, b) | Term::App(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Fst(a) | Term::Snd(a) => collect_free(a, bound, out),
        Term::Lambda(x, body) | Term::Rec(x, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::Let(x, bound_term, body) => {
            collect_free(bound_term, bound, out);
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::Node(a, b, c, d) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
            collect_free(c, bound, out);
            collect_free(d, bound, out);
        }
        Term::Case {
            scrutinee,
            leaf_branch,
            pattern,
            node_branch,
        } => {
            collect_free(scrutinee, bound, out);
            collect_free(leaf_branch, bound, out);
            let names: Vec<String> = pattern.binders().iter().map(|s| s.to_string()).collect();
            let n = names.len();
            bound.extend(names);
            collect_free(node_branch, bound, out);
            bound.truncate(bound.len() - n);
        }
    }
}

/// Replace every free occurrence of `name` in `body` with `replacement`.
///
/// Binders that shadow `name` leave their scope untouched. Capture is
/// impossible when the replacement is closed; if the replacement does have
/// free variables (terms that mention top-level definitions), descending
/// under a binder with one of those names would capture it, which we treat
/// as a caller bug.
pub fn substitute(body: &Term, name: &str, replacement: &Term) -> Term {
    let fv = free_vars(replacement);
    subst(body, name, replacement, &fv)
}

fn subst(t: &Term, name: &str, rep: &Term, rep_fv: &BTreeSet<String>) -> Term {
    let guard = |binder: &str| {
        assert!(
            !rep_fv.contains(binder),
            "substitution would capture `{binder}`"
        );
    };
    match t {
        Term::Num(_) | Term::Bool(_) | Term::Unit | Term::Leaf => t.clone(),
        Term::Var(x) => {
            if x == name {
                rep.clone()
            } else {
                t.clone()
            }
        }
        Term::If(a, b, c) => Term::if_(
            subst(a, name, rep, rep_fv),
            subst(b, name, rep, rep_fv),
            subst(c, name, rep, rep_fv),
        ),
        Term::BinOp(op, a, b) => Term::binop(
            *op,
            subst(a, name, rep, rep_fv),
            subst(b, name, rep, rep_fv),
        ),
        Term::Pair(a, b) => Term::pair(subst(a, name, rep, rep_fv), subst(b, name, rep, rep_fv)),
        Term::Fst(a) => Term::Fst(Box::new(subst(a, name, rep, rep_fv))),
        Term::Snd(a) => Term::Snd(Box::new(subst(a, name, rep, rep_fv))),
        Term::Lambda(x, body) => {
            if x == name {
                t.clone()
            } else {
                guard(x);
                Term::lambda(x.clone(), subst(body, name, rep, rep_fv))
            }
        }
        Term::Rec(x, body) => {
            if x == name {
                t.clone()
            } else {
                guard(x);
                Term::rec(x.clone(), subst(body, name, rep, rep_fv))
            }
        }
        Term::App(f, a) => Term::app(subst(f, name, rep, rep_fv), subst(a, name, rep, rep_fv)),
        Term::Let(x, bound, lbody) => {
            let bound = subst(bound, name, rep, rep_fv);
            if x == name {
                Term::Let(x.clone(), Box::new(bound), lbody.clone())
            } else {
                guard(x);
                Term::Let(
                    x.clone(),
                    Box::new(bound),
                    Box::new(subst(lbody, name, rep, rep_fv)),
                )
            }
        }
        Term::Node(a, b, c, d) => Term::node(
            subst(a, name, rep, rep_fv),
            subst(b, name, rep, rep_fv),
            subst(c, name, rep, rep_fv),
            subst(d, name, rep, rep_fv),
        ),
        Term::Case {
            scrutinee,
            leaf_branch,
            pattern,
            node_branch,
        } => {
            let scrutinee = subst(scrutinee, name, rep, rep_fv);
            let leaf_branch = subst(leaf_branch, name, rep, rep_fv);
            let node_branch = if pattern.binders().iter().any(|b| *b == name) {
                node_branch.as_ref().clone()
            } else {
                for b in pattern.binders() {
                    guard(b);
                }
                subst(node_branch, name, rep, rep_fv)
            };
            Term::case(scrutinee, leaf_branch, pattern.clone(), node_branch)
        }
    }
}

/// Alpha-equivalence, by pairing binders positionally during comparison.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha(a, b, &mut Vec::new())
}

fn alpha(a: &Term, b: &Term, pairs: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Term::Num(x), Term::Num(y)) => x == y,
        (Term::Bool(x), Term::Bool(y)) => x == y,
        (Term::Unit, Term::Unit) | (Term::Leaf, Term::Leaf) => true,
        (Term::Var(x), Term::Var(y)) => {
            // The innermost pairing of either name decides; free variables
            // must match by name and must not collide with a bound one.
            for (l, r) in pairs.iter().rev() {
                match (l == x, r == y) {
                    (true, true) => return true,
                    (false, false) => continue,
                    _ => return false,
                }
            }
            x == y
        }
        (Term::If(a1, b1, c1), Term::If(a2, b2, c2)) => {
            alpha(a1, a2, pairs) && alpha(b1, b2, pairs) && alpha(c1, c2, pairs)
        }
        (Term::BinOp(o1, a1, b1), Term::BinOp(o2, a2, b2)) => {
            o1 == o2 && alpha(a1, a2, pairs) && alpha(b1, b2, pairs)
        }
        (Term::Pair(a1, b1), Term::Pair(a2, b2)) | (Term::App(a1, b1), Term::App(a2, b2)) => {
            alpha(a1, a2, pairs) && alpha(b1, b2, pairs)
        }
        (Term::Fst(a1), Term::Fst(a2)) | (Term::Snd(a1), Term::Snd(a2)) => alpha(a1, a2, pairs),
        (Term::Lambda(x, t1), Term::Lambda(y, t2)) | (Term::Rec(x, t1), Term::Rec(y, t2)) => {
            pairs.push((x.clone(), y.clone()));
            let ok = alpha(t1, t2, pairs);
            pairs.pop();
            ok
        }
        (Term::Let(x, a1, b1), Term::Let(y, a2, b2)) => {
            if !alpha(a1, a2, pairs) {
                return false;
            }
            pairs.push((x.clone(), y.clone()));
            let ok = alpha(b1, b2, pairs);
            pairs.pop();
            ok
        }
        (Term::Node(a1, b1, c1, d1), Term::Node(a2, b2, c2, d2)) => {
            alpha(a1, a2, pairs)
                && alpha(b1, b2, pairs)
                && alpha(c1, c2, pairs)
                && alpha(d1, d2, pairs)
        }
        (
            Term::Case {
                scrutinee: s1,
                leaf_branch: l1,
                pattern: p1,
                node_branch: n1,
            },
            Term::Case {
                scrutinee: s2,
                leaf_branch: l2,
                pattern: p2,
                node_branch: n2,
            },
        ) => {
            if !alpha(s1, s2, pairs) || !alpha(l1, l2, pairs) {
                return false;
            }
            let mut new_pairs = Vec::new();
            if !alpha_pattern(p1, p2, pairs, &mut new_pairs) {
                return false;
            }
            let n = new_pairs.len();
            pairs.extend(new_pairs);
            let ok = alpha(n1, n2, pairs);
            pairs.truncate(pairs.len() - n);
            ok
        }
        _ => false,
    }
}

fn alpha_pattern(
    a: &Pattern,
    b: &Pattern,
    pairs: &mut Vec<(String, String)>,
    new_pairs: &mut Vec<(String, String)>,
) -> bool {
    match (a, b) {
        (Pattern::Leaf, Pattern::Leaf) => true,
        (Pattern::Const(c1), Pattern::Const(c2)) => alpha(c1, c2, pairs),
        (Pattern::Var(x), Pattern::Var(y)) => {
            new_pairs.push((x.clone(), y.clone()));
            true
        }
        (Pattern::Node(a1, b1, c1, d1), Pattern::Node(a2, b2, c2, d2)) => {
            alpha_pattern(a1, a2, pairs, new_pairs)
                && alpha_pattern(b1, b2, pairs, new_pairs)
                && alpha_pattern(c1, c2, pairs, new_pairs)
                && alpha_pattern(d1, d2, pairs, new_pairs)
        }
        (Pattern::Pair(a1, b1), Pattern::Pair(a2, b2)) => {
            alpha_pattern(a1, a2, pairs, new_pairs) && alpha_pattern(b1, b2, pairs, new_pairs)
        }
        _ => false,
    }
}

/// Top-level declarations, in source order.
#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Signature {
        name: String,
        ty: Type,
    },
    Definition {
        name: String,
        params: Vec<String>,
        body: Term,
    },
    Property {
        name: String,
        args: Vec<String>,
        body: Term,
    },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Signature { name, .. }
            | Declaration::Definition { name, .. }
            | Declaration::Property { name, .. } => name,
        }
    }
}

/// A parsed program: signatures, definitions and properties in source
/// order. Every definition is preceded by a signature of the same name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Program {
    pub declarations: Vec<Declaration>,
}

impl Program {
    pub fn properties(&self) -> impl Iterator<Item = (&str, &[String], &Term)> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::Property { name, args, body } => {
                Some((name.as_str(), args.as_slice(), body))
            }
            _ => None,
        })
    }
}
