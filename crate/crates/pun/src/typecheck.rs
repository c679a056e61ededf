//! The typing rules for pun, implemented as syntax-directed constraint
//! generation with first-order unification. Checking against an expected
//! type, inferring a term's type, and inferring property argument types all
//! route through the same inference core.
//!
//! Inference is monomorphic: there is no generalization, and property
//! arguments whose types stay unconstrained default to `integer`.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::{BinOp, Declaration, Pattern, Program, Term, Type};
use crate::ast::{free_vars, substitute};

/// The typing environment Γ. Extension is functional: `extend` returns a
/// new environment and leaves the parent untouched.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TypeEnv {
    bindings: BTreeMap<String, Type>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.bindings.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    #[must_use]
    pub fn extend(&self, name: impl Into<String>, ty: Type) -> TypeEnv {
        let mut bindings = self.bindings.clone();
        bindings.insert(name.into(), ty);
        TypeEnv { bindings }
    }

    pub fn insert(&mut self, name: impl Into<String>, ty: Type) {
        self.bindings.insert(name.into(), ty);
    }

    pub fn remove(&mut self, name: &str) {
        self.bindings.remove(name);
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Bindings in name order (deterministic).
    pub fn iter(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.bindings.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeErrorKind {
    Mismatch { expected: Type, found: Type },
    UnboundVariable(String),
    OccursCheck,
    NotAFunction(Type),
    EqOnFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    /// Where the error was noticed: a declaration name and/or the nearest
    /// enclosing construct.
    pub context: String,
}

impl TypeError {
    fn new(kind: TypeErrorKind, context: impl Into<String>) -> TypeError {
        TypeError {
            kind,
            context: context.into(),
        }
    }

    pub fn in_decl(mut self, decl: &str) -> TypeError {
        self.context = if self.context.is_empty() {
            decl.to_string()
        } else {
            format!("{decl}: {}", self.context)
        };
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error in {}: ", self.context)?;
        match &self.kind {
            TypeErrorKind::Mismatch { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            TypeErrorKind::UnboundVariable(name) => write!(f, "unbound variable `{name}`"),
            TypeErrorKind::OccursCheck => write!(f, "occurs check failed (infinite type)"),
            TypeErrorKind::NotAFunction(ty) => {
                write!(f, "expected a function, found {ty}")
            }
            TypeErrorKind::EqOnFunction => {
                write!(f, "`==` is not defined on function types")
            }
        }
    }
}

impl std::error::Error for TypeError {}

/// Unification state: a substitution from inference variables to types,
/// plus the `==` operand types still to be screened for function types
/// once solving is done.
#[derive(Debug, Default)]
pub struct Inference {
    subst: BTreeMap<u32, Type>,
    next_var: u32,
    eq_operands: Vec<(Type, String)>,
}

impl Inference {
    pub fn new() -> Inference {
        Inference::default()
    }

    pub fn fresh(&mut self) -> Type {
        let v = self.next_var;
        self.next_var += 1;
        Type::Var(v)
    }

    /// Apply the current substitution all the way down.
    pub fn resolve(&self, ty: &Type) -> Type {
        match ty {
            Type::Int | Type::Bool | Type::Unit => ty.clone(),
            Type::Var(v) => match self.subst.get(v) {
                Some(t) => self.resolve(t),
                None => ty.clone(),
            },
            Type::Pair(a, b) => Type::pair(self.resolve(a), self.resolve(b)),
            Type::Arrow(a, b) => Type::arrow(self.resolve(a), self.resolve(b)),
            Type::Bst(a, b) => Type::bst(self.resolve(a), self.resolve(b)),
        }
    }

    fn occurs(&self, var: u32, ty: &Type) -> bool {
        match ty {
            Type::Int | Type::Bool | Type::Unit => false,
            Type::Var(v) => *v == var,
            Type::Pair(a, b) | Type::Arrow(a, b) | Type::Bst(a, b) => {
                self.occurs(var, a) || self.occurs(var, b)
            }
        }
    }

    /// Unify `found` with `expected`; mismatches report in that orientation.
    pub fn unify(&mut self, found: &Type, expected: &Type, ctx: &str) -> Result<(), TypeError> {
        let a = self.resolve(found);
        let b = self.resolve(expected);
        match (&a, &b) {
            (Type::Var(v), _) if matches!(b, Type::Var(w) if *v == w) => Ok(()),
            (Type::Var(v), _) => {
                if self.occurs(*v, &b) {
                    return Err(TypeError::new(TypeErrorKind::OccursCheck, ctx));
                }
                self.subst.insert(*v, b);
                Ok(())
            }
            (_, Type::Var(w)) => {
                if self.occurs(*w, &a) {
                    return Err(TypeError::new(TypeErrorKind::OccursCheck, ctx));
                }
                self.subst.insert(*w, a);
                Ok(())
            }
            (Type::Int, Type::Int) | (Type::Bool, Type::Bool) | (Type::Unit, Type::Unit) => Ok(()),
            (Type::Pair(a1, b1), Type::Pair(a2, b2))
            | (Type::Arrow(a1, b1), Type::Arrow(a2, b2))
            | (Type::Bst(a1, b1), Type::Bst(a2, b2)) => {
                self.unify(a1, a2, ctx)?;
                self.unify(b1, b2, ctx)
            }
            _ => Err(TypeError::new(
                TypeErrorKind::Mismatch {
                    expected: b,
                    found: a,
                },
                ctx,
            )),
        }
    }

    /// Infer a type for `t` under `env`, pushing constraints into the
    /// substitution as they appear.
    pub fn infer(&mut self, env: &TypeEnv, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Num(_) => Ok(Type::Int),
            Term::Bool(_) => Ok(Type::Bool),
            Term::Unit => Ok(Type::Unit),
            Term::Leaf => Ok(Type::bst(self.fresh(), self.fresh())),
            Term::Var(x) => env
                .lookup(x)
                .cloned()
                .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable(x.clone()), "")),
            Term::If(c, t1, t2) => {
                let ct = self.infer(env, c)?;
                self.unify(&ct, &Type::Bool, "the condition of an if")?;
                let a = self.infer(env, t1)?;
                let b = self.infer(env, t2)?;
                self.unify(&b, &a, "the branches of an if")?;
                Ok(a)
            }
            Term::BinOp(op, lhs, rhs) => {
                let a = self.infer(env, lhs)?;
                let b = self.infer(env, rhs)?;
                match op {
                    BinOp::Plus | BinOp::Minus => {
                        let ctx = format!("an operand of `{}`", op.symbol());
                        self.unify(&a, &Type::Int, &ctx)?;
                        self.unify(&b, &Type::Int, &ctx)?;
                        Ok(Type::Int)
                    }
                    BinOp::Leq | BinOp::Lt | BinOp::Gt => {
                        let ctx = format!("an operand of `{}`", op.symbol());
                        self.unify(&a, &Type::Int, &ctx)?;
                        self.unify(&b, &Type::Int, &ctx)?;
                        Ok(Type::Bool)
                    }
                    BinOp::Eq => {
                        self.unify(&b, &a, "the operands of `==`")?;
                        // Function types are screened after solving, when
                        // the operand type is as concrete as it will get.
                        self.eq_operands.push((a, "the operands of `==`".into()));
                        Ok(Type::Bool)
                    }
                }
            }
            Term::Pair(a, b) => {
                let ta = self.infer(env, a)?;
                let tb = self.infer(env, b)?;
                Ok(Type::pair(ta, tb))
            }
            Term::Fst(p) => {
                let tp = self.infer(env, p)?;
                let a = self.fresh();
                let b = self.fresh();
                self.unify(&tp, &Type::pair(a.clone(), b), "the argument of fst")?;
                Ok(a)
            }
            Term::Snd(p) => {
                let tp = self.infer(env, p)?;
                let a = self.fresh();
                let b = self.fresh();
                self.unify(&tp, &Type::pair(a, b.clone()), "the argument of snd")?;
                Ok(b)
            }
            Term::Lambda(x, body) => {
                let dom = self.fresh();
                let inner = env.extend(x.clone(), dom.clone());
                let cod = self.infer(&inner, body)?;
                Ok(Type::arrow(dom, cod))
            }
            Term::App(fun, arg) => {
                let tf = self.infer(env, fun)?;
                let ta = self.infer(env, arg)?;
                let resolved = self.resolve(&tf);
                if !matches!(resolved, Type::Arrow(_, _) | Type::Var(_)) {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAFunction(resolved),
                        "an application",
                    ));
                }
                let cod = self.fresh();
                self.unify(&tf, &Type::arrow(ta, cod.clone()), "an application")?;
                Ok(cod)
            }
            Term::Let(x, bound, body) => {
                let tb = self.infer(env, bound)?;
                let inner = env.extend(x.clone(), tb);
                self.infer(&inner, body)
            }
            Term::Rec(x, body) => {
                let ty = self.fresh();
                let inner = env.extend(x.clone(), ty.clone());
                let tb = self.infer(&inner, body)?;
                self.unify(&tb, &ty, "a rec body")?;
                Ok(ty)
            }
            Term::Node(l, k, v, r) => {
                let tk = self.infer(env, k)?;
                let tv = self.infer(env, v)?;
                let tree = Type::bst(tk, tv);
                let tl = self.infer(env, l)?;
                self.unify(&tl, &tree, "the left subtree of a node")?;
                let tr = self.infer(env, r)?;
                self.unify(&tr, &tree, "the right subtree of a node")?;
                Ok(tree)
            }
            Term::Case {
                scrutinee,
                leaf_branch,
                pattern,
                node_branch,
            } => {
                let ts = self.infer(env, scrutinee)?;
                let key = self.fresh();
                let val = self.fresh();
                let tree = Type::bst(key, val);
                self.unify(&ts, &tree, "a case scrutinee")?;
                let t_leaf = self.infer(env, leaf_branch)?;
                let mut inner = env.clone();
                self.bind_pattern(pattern, &tree, &mut inner)?;
                let t_node = self.infer(&inner, node_branch)?;
                self.unify(&t_node, &t_leaf, "the branches of a case")?;
                Ok(t_leaf)
            }
        }
    }

    /// Type a pattern against the type it is matched at, adding its
    /// variables to `env`.
    fn bind_pattern(
        &mut self,
        pattern: &Pattern,
        at: &Type,
        env: &mut TypeEnv,
    ) -> Result<(), TypeError> {
        match pattern {
            Pattern::Var(x) => {
                env.insert(x.clone(), at.clone());
                Ok(())
            }
            Pattern::Leaf => {
                let tree = Type::bst(self.fresh(), self.fresh());
                self.unify(at, &tree, "a leaf pattern")
            }
            Pattern::Node(l, k, v, r) => {
                let key = self.fresh();
                let val = self.fresh();
                let tree = Type::bst(key.clone(), val.clone());
                self.unify(at, &tree, "a node pattern")?;
                self.bind_pattern(l, &tree, env)?;
                self.bind_pattern(k, &key, env)?;
                self.bind_pattern(v, &val, env)?;
                self.bind_pattern(r, &tree, env)
            }
            Pattern::Pair(a, b) => {
                let ta = self.fresh();
                let tb = self.fresh();
                self.unify(at, &Type::pair(ta.clone(), tb.clone()), "a pair pattern")?;
                self.bind_pattern(a, &ta, env)?;
                self.bind_pattern(b, &tb, env)
            }
            Pattern::Const(c) => {
                let tc = self.infer(env, c)?;
                self.unify(&tc, at, "a constant pattern")
            }
        }
    }

    /// Run the post-solve screen: `==` is only defined at first-order
    /// types, so an operand that resolved to (or contains) a function type
    /// is an error. Unresolved variables are fine; they can only default
    /// to a first-order type later.
    fn check_eq_operands(&self) -> Result<(), TypeError> {
        for (ty, ctx) in &self.eq_operands {
            if !self.resolve(ty).is_first_order() {
                return Err(TypeError::new(TypeErrorKind::EqOnFunction, ctx.as_str()));
            }
        }
        Ok(())
    }
}

/// Check that `t` has type `expected` under `env`. The expected type must
/// be fully ground.
pub fn check_term(env: &TypeEnv, t: &Term, expected: &Type) -> Result<(), TypeError> {
    debug_assert!(expected.is_ground(), "expected type must contain no variables");
    let mut inf = Inference::new();
    let found = inf.infer(env, t)?;
    inf.unify(&found, expected, "a checked term")?;
    inf.check_eq_operands()
}

/// Infer the most general monomorphic type of `t` under `env`. Leftover
/// inference variables (from e.g. a bare `leaf`) are reported as-is.
pub fn infer_term(env: &TypeEnv, t: &Term) -> Result<Type, TypeError> {
    let mut inf = Inference::new();
    let ty = inf.infer(env, t)?;
    inf.check_eq_operands()?;
    Ok(inf.resolve(&ty))
}

/// Replace any remaining inference variable with `integer`.
fn default_vars(ty: &Type) -> Type {
    match ty {
        Type::Int | Type::Bool | Type::Unit => ty.clone(),
        Type::Var(_) => Type::Int,
        Type::Pair(a, b) => Type::pair(default_vars(a), default_vars(b)),
        Type::Arrow(a, b) => Type::arrow(default_vars(a), default_vars(b)),
        Type::Bst(a, b) => Type::bst(default_vars(a), default_vars(b)),
    }
}

/// A property with inferred argument types.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedProperty {
    pub name: String,
    pub args: Vec<(String, Type)>,
    pub body: Term,
}

/// A checked program: the global signature environment, each definition
/// elaborated to a closed term (self-recursion desugared to `rec`, earlier
/// definitions inlined), and the properties with their argument types.
#[derive(Debug, Clone)]
pub struct TypedProgram {
    pub program: Program,
    pub globals: TypeEnv,
    /// Definition names in declaration order with their closed elaborations.
    pub definitions: Vec<(String, Term)>,
    pub properties: Vec<TypedProperty>,
}

impl TypedProgram {
    pub fn definition(&self, name: &str) -> Option<&Term> {
        self.definitions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    /// Substitute every top-level definition into `t`. The elaborated
    /// definitions are closed, so the result has no free occurrences of
    /// defined names.
    pub fn inline_definitions(&self, t: &Term) -> Term {
        let mut out = t.clone();
        for (name, closed) in &self.definitions {
            out = substitute(&out, name, closed);
        }
        out
    }

    /// The signatures of names that actually have definitions. Generated
    /// lookups draw from these, so every name a generated term mentions
    /// can be resolved by `inline_definitions`.
    pub fn definition_env(&self) -> TypeEnv {
        let mut env = TypeEnv::new();
        for (name, _) in &self.definitions {
            if let Some(ty) = self.globals.lookup(name) {
                env.insert(name.clone(), ty.clone());
            }
        }
        env
    }
}

/// Infer the argument types of one property: each argument starts at a
/// fresh type variable, the body must come out boolean, and anything still
/// unconstrained defaults to `integer`.
pub fn infer_property_args(
    env: &TypeEnv,
    name: &str,
    args: &[String],
    body: &Term,
) -> Result<Vec<(String, Type)>, TypeError> {
    let mut inf = Inference::new();
    let mut inner = env.clone();
    let arg_vars: Vec<Type> = args
        .iter()
        .map(|arg| {
            let v = inf.fresh();
            inner.insert(arg.clone(), v.clone());
            v
        })
        .collect();
    let ty = inf
        .infer(&inner, body)
        .map_err(|e| e.in_decl(&format!("property {name}")))?;
    inf.unify(&ty, &Type::Bool, "a property body")
        .map_err(|e| e.in_decl(&format!("property {name}")))?;
    inf.check_eq_operands()
        .map_err(|e| e.in_decl(&format!("property {name}")))?;
    Ok(args
        .iter()
        .zip(arg_vars)
        .map(|(arg, v)| (arg.clone(), default_vars(&inf.resolve(&v))))
        .collect())
}

/// Check a whole program and elaborate it for the property runner.
///
/// Each definition `f x1 .. xn = t` checks as `\x1 .. \xn . t` against its
/// signature, in an environment holding every top-level signature; if `f`
/// occurs in its own body the lambda is wrapped in `rec f`. A definition
/// may refer to itself and to previously defined names, which are inlined
/// to keep the elaboration closed.
pub fn check_program(program: &Program) -> Result<TypedProgram, TypeError> {
    let mut globals = TypeEnv::new();
    for decl in &program.declarations {
        if let Declaration::Signature { name, ty } = decl {
            globals.insert(name.clone(), ty.clone());
        }
    }

    let mut definitions: Vec<(String, Term)> = Vec::new();
    let mut properties = Vec::new();

    for decl in &program.declarations {
        match decl {
            Declaration::Signature { .. } => {}
            Declaration::Definition { name, params, body } => {
                let sig = globals.lookup(name).cloned().ok_or_else(|| {
                    TypeError::new(TypeErrorKind::UnboundVariable(name.clone()), name.as_str())
                })?;
                let mut term = body.clone();
                for param in params.iter().rev() {
                    term = Term::lambda(param.clone(), term);
                }
                if free_vars(&term).contains(name) {
                    term = Term::rec(name.clone(), term);
                }
                check_term(&globals, &term, &sig).map_err(|e| e.in_decl(name))?;
                // Inline earlier definitions so the elaboration is closed.
                let mut closed = term;
                for (earlier, def) in &definitions {
                    closed = substitute(&closed, earlier, def);
                }
                if let Some(free) = free_vars(&closed).into_iter().next() {
                    // A name with a signature but no definition yet: either
                    // a forward reference or a signature-only declaration.
                    return Err(TypeError::new(
                        TypeErrorKind::UnboundVariable(free),
                        format!("{name} (definitions may only use earlier definitions)"),
                    ));
                }
                definitions.push((name.clone(), closed));
            }
            Declaration::Property { name, args, body } => {
                let typed_args = infer_property_args(&globals, name, args, body)?;
                properties.push(TypedProperty {
                    name: name.clone(),
                    args: typed_args,
                    body: body.clone(),
                });
            }
        }
    }

    // Properties may only mention their arguments and defined names.
    let defined: Vec<&String> = definitions.iter().map(|(n, _)| n).collect();
    for prop in &properties {
        for fv in free_vars(&prop.body) {
            let is_arg = prop.args.iter().any(|(a, _)| *a == fv);
            if !is_arg && !defined.iter().any(|d| **d == fv) {
                return Err(TypeError::new(
                    TypeErrorKind::UnboundVariable(fv),
                    format!("property {}", prop.name),
                ));
            }
        }
    }

    Ok(TypedProgram {
        program: program.clone(),
        globals,
        definitions,
        properties,
    })
}
