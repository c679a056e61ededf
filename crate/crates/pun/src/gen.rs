//! Random generation of well-typed, terminating terms, derived from the
//! typing rules: to produce a term of type τ we pick among the rules whose
//! conclusion has type τ and generate their premises at strictly smaller
//! sizes, bottoming out in literals, lambdas of base bodies, and leaves.
//!
//! Two biases make the output look more like hand-written programs: when a
//! variable of the requested type is in scope it is used with probability
//! `var_bias`, and auxiliary types (for lets, applied lambdas and pair
//! projections) are drawn from the types already in scope with probability
//! `bound_type_bias`, which is what lets those lookups fire at all.
//!
//! Generated `rec` binders never occur in their own bodies. Since nothing
//! else in the language recurses, every generated term terminates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ast::{Term, Type};
use crate::typecheck::TypeEnv;

/// Knobs for the generator. The defaults match the property runner.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Probability of using an in-scope variable of the requested type
    /// when one exists.
    pub var_bias: f64,
    /// Probability that an auxiliary type is drawn from the types bound in
    /// scope rather than generated fresh.
    pub bound_type_bias: f64,
    /// Inclusive bounds for integer literals.
    pub int_min: i64,
    pub int_max: i64,
    /// Probability of stopping at a leaf when generating a tree at
    /// positive size; exhausted size always yields a leaf.
    pub leaf_bias: f64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            var_bias: 0.5,
            bound_type_bias: 0.75,
            int_min: 0,
            int_max: 100,
            leaf_bias: 0.25,
        }
    }
}

/// Depth bound for freshly generated auxiliary types.
const AUX_TYPE_DEPTH: u32 = 2;

/// Generation state: the program's top-level bindings (used both for
/// lookups and to keep fresh names from colliding with them), the names
/// bound so far during generation, a deterministic random stream, and the
/// fresh-name counter.
#[derive(Debug, Clone)]
pub struct GenContext {
    pub globals: TypeEnv,
    pub locals: TypeEnv,
    rng: ChaCha8Rng,
    fresh_counter: u64,
}

impl GenContext {
    pub fn new(globals: TypeEnv, seed: [u8; 32]) -> GenContext {
        GenContext {
            globals,
            locals: TypeEnv::new(),
            rng: ChaCha8Rng::from_seed(seed),
            fresh_counter: 0,
        }
    }

    /// Convenience constructor for tests and one-off generation.
    pub fn seeded(globals: TypeEnv, seed: u64) -> GenContext {
        GenContext {
            globals,
            locals: TypeEnv::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            fresh_counter: 0,
        }
    }

    /// Names of in-scope bindings with exactly the requested type, locals
    /// first, in deterministic order.
    fn vars_of_type(&self, ty: &Type) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (name, t) in self.locals.iter().chain(self.globals.iter()) {
            if t == ty && !out.iter().any(|n| n == name) {
                out.push(name.clone());
            }
        }
        out
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.rng.gen_range(0..items.len())]
    }
}

/// A name unused by both the globals and the current locals. Deterministic
/// given the counter; each call returns a distinct name.
pub fn fresh_name(ctx: &mut GenContext) -> String {
    loop {
        let name = format!("x{}", ctx.fresh_counter);
        ctx.fresh_counter += 1;
        if !ctx.globals.contains(&name) && !ctx.locals.contains(&name) {
            return name;
        }
    }
}

/// Split a child budget as evenly as possible into `parts` sizes. Every
/// part is at most `budget`, so recursive calls strictly shrink.
fn split(budget: u32, parts: u32) -> Vec<u32> {
    let base = budget / parts;
    let rem = budget % parts;
    (0..parts)
        .map(|i| if i < rem { base + 1 } else { base })
        .collect()
}

/// Generate a random type of bounded depth, preferring types already
/// bound in scope.
pub fn generate_type(ctx: &mut GenContext, cfg: &GenConfig, depth: u32) -> Type {
    let scope_types: Vec<Type> = ctx
        .locals
        .iter()
        .chain(ctx.globals.iter())
        .map(|(_, t)| t.clone())
        .collect();
    if !scope_types.is_empty() && ctx.rng.gen_bool(cfg.bound_type_bias) {
        return ctx.pick(&scope_types).clone();
    }
    random_type(ctx, depth)
}

fn random_type(ctx: &mut GenContext, depth: u32) -> Type {
    if depth == 0 {
        return match ctx.rng.gen_range(0..3) {
            0 => Type::Int,
            1 => Type::Bool,
            _ => Type::Unit,
        };
    }
    match ctx.rng.gen_range(0..6) {
        0 => Type::Int,
        1 => Type::Bool,
        2 => Type::Unit,
        3 => {
            let a = random_type(ctx, depth - 1);
            let b = random_type(ctx, depth - 1);
            Type::pair(a, b)
        }
        4 => {
            let a = random_type(ctx, depth - 1);
            let b = random_type(ctx, depth - 1);
            Type::arrow(a, b)
        }
        _ => {
            let a = random_type(ctx, depth - 1);
            let b = random_type(ctx, depth - 1);
            Type::bst(a, b)
        }
    }
}

/// Generate a term of type `ty`. The result typechecks at `ty` under the
/// context's globals and locals, and (given closed lookups) evaluates to a
/// canonical form.
pub fn generate_term(ctx: &mut GenContext, cfg: &GenConfig, ty: &Type, size: u32) -> Term {
    debug_assert!(ty.is_ground(), "cannot generate at a type variable");
    if size == 0 {
        return base_case(ctx, cfg, ty);
    }
    // Lookups are merged into rule choice: an in-scope binding of the
    // requested type is taken with probability var_bias.
    let candidates = ctx.vars_of_type(ty);
    if !candidates.is_empty() && ctx.rng.gen_bool(cfg.var_bias) {
        let name = ctx.pick(&candidates).clone();
        return Term::Var(name);
    }
    match ty {
        Type::Int => {
            let choices = [
                Production::Plus,
                Production::Minus,
                Production::If,
                Production::Fst,
                Production::Snd,
                Production::AppLambda,
                Production::Let,
                Production::Rec,
            ];
            let p = *ctx.pick(&choices);
            apply_production(ctx, cfg, ty, size, p)
        }
        Type::Bool => {
            let choices = [
                Production::Leq,
                Production::If,
                Production::Fst,
                Production::Snd,
                Production::AppLambda,
                Production::Let,
                Production::Rec,
            ];
            let p = *ctx.pick(&choices);
            apply_production(ctx, cfg, ty, size, p)
        }
        Type::Unit => Term::Unit,
        Type::Pair(a, b) => {
            let sizes = split(size - 1, 2);
            let fst = generate_term(ctx, cfg, a, sizes[0]);
            let snd = generate_term(ctx, cfg, b, sizes[1]);
            Term::pair(fst, snd)
        }
        Type::Arrow(dom, cod) => {
            let x = fresh_name(ctx);
            ctx.locals.insert(x.clone(), dom.as_ref().clone());
            let body = generate_term(ctx, cfg, cod, size - 1);
            ctx.locals.remove(&x);
            Term::lambda(x, body)
        }
        Type::Bst(key, val) => {
            if ctx.rng.gen_bool(cfg.leaf_bias) {
                return Term::Leaf;
            }
            let sizes = split(size - 1, 4);
            let l = generate_term(ctx, cfg, ty, sizes[0]);
            let k = generate_term(ctx, cfg, key, sizes[1]);
            let v = generate_term(ctx, cfg, val, sizes[2]);
            let r = generate_term(ctx, cfg, ty, sizes[3]);
            Term::node(l, k, v, r)
        }
        Type::Var(_) => unreachable!("generation requires a ground type"),
    }
}

/// The size-0 base cases: the unique smallest inhabitant shape per type.
fn base_case(ctx: &mut GenContext, cfg: &GenConfig, ty: &Type) -> Term {
    match ty {
        Type::Int => Term::Num(ctx.rng.gen_range(cfg.int_min..=cfg.int_max)),
        Type::Bool => Term::Bool(ctx.rng.gen_range(0..2) == 1),
        Type::Unit => Term::Unit,
        Type::Pair(a, b) => {
            let fst = base_case(ctx, cfg, a);
            let snd = base_case(ctx, cfg, b);
            Term::pair(fst, snd)
        }
        Type::Arrow(dom, cod) => {
            let x = fresh_name(ctx);
            ctx.locals.insert(x.clone(), dom.as_ref().clone());
            let body = base_case(ctx, cfg, cod);
            ctx.locals.remove(&x);
            Term::lambda(x, body)
        }
        Type::Bst(_, _) => Term::Leaf,
        Type::Var(_) => unreachable!("generation requires a ground type"),
    }
}

/// The rules usable at both integer and boolean goals.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Production {
    Plus,
    Minus,
    Leq,
    If,
    Fst,
    Snd,
    AppLambda,
    Let,
    Rec,
}

fn apply_production(
    ctx: &mut GenContext,
    cfg: &GenConfig,
    ty: &Type,
    size: u32,
    production: Production,
) -> Term {
    match production {
        Production::Plus | Production::Minus | Production::Leq => {
            let sizes = split(size - 1, 2);
            let lhs = generate_term(ctx, cfg, &Type::Int, sizes[0]);
            let rhs = generate_term(ctx, cfg, &Type::Int, sizes[1]);
            let op = match production {
                Production::Plus => crate::ast::BinOp::Plus,
                Production::Minus => crate::ast::BinOp::Minus,
                _ => crate::ast::BinOp::Leq,
            };
            Term::binop(op, lhs, rhs)
        }
        Production::If => {
            let sizes = split(size - 1, 3);
            let cond = generate_term(ctx, cfg, &Type::Bool, sizes[0]);
            let then = generate_term(ctx, cfg, ty, sizes[1]);
            let els = generate_term(ctx, cfg, ty, sizes[2]);
            Term::if_(cond, then, els)
        }
        Production::Fst => {
            let aux = generate_type(ctx, cfg, AUX_TYPE_DEPTH);
            let pair = generate_term(ctx, cfg, &Type::pair(ty.clone(), aux), size - 1);
            Term::Fst(Box::new(pair))
        }
        Production::Snd => {
            let aux = generate_type(ctx, cfg, AUX_TYPE_DEPTH);
            let pair = generate_term(ctx, cfg, &Type::pair(aux, ty.clone()), size - 1);
            Term::Snd(Box::new(pair))
        }
        Production::AppLambda => {
            let aux = generate_type(ctx, cfg, AUX_TYPE_DEPTH);
            let sizes = split(size - 1, 2);
            let arg = generate_term(ctx, cfg, &aux, sizes[1]);
            let x = fresh_name(ctx);
            ctx.locals.insert(x.clone(), aux);
            let body = generate_term(ctx, cfg, ty, sizes[0]);
            ctx.locals.remove(&x);
            Term::app(Term::lambda(x, body), arg)
        }
        Production::Let => {
            let aux = generate_type(ctx, cfg, AUX_TYPE_DEPTH);
            let sizes = split(size - 1, 2);
            let bound = generate_term(ctx, cfg, &aux, sizes[0]);
            let x = fresh_name(ctx);
            ctx.locals.insert(x.clone(), aux);
            let body = generate_term(ctx, cfg, ty, sizes[1]);
            ctx.locals.remove(&x);
            Term::let_(x, bound, body)
        }
        Production::Rec => generate_rec(ctx, cfg, ty, size),
    }
}

/// Generate `rec x . body` where `x` does not occur in `body`: the binder
/// is not added to the locals, so lookups can never choose it. The term is
/// therefore semantically equal to its body and always terminates.
pub fn generate_rec(ctx: &mut GenContext, cfg: &GenConfig, ty: &Type, size: u32) -> Term {
    debug_assert!(size > 0);
    let x = fresh_name(ctx);
    let body = generate_term(ctx, cfg, ty, size - 1);
    Term::rec(x, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::free_vars;
    use crate::eval::{eval, Fuel};
    use crate::typecheck::check_term;

    fn harness_types() -> Vec<Type> {
        vec![
            Type::Int,
            Type::Bool,
            Type::pair(Type::Int, Type::Bool),
            Type::arrow(Type::Int, Type::Int),
            Type::bst(Type::Int, Type::Int),
            Type::pair(
                Type::pair(Type::Int, Type::Int),
                Type::bst(Type::Int, Type::Unit),
            ),
        ]
    }

    #[test]
    fn size_zero_integers_stay_in_range() {
        let cfg = GenConfig::default();
        let mut ctx = GenContext::seeded(TypeEnv::new(), 1);
        for _ in 0..200 {
            match generate_term(&mut ctx, &cfg, &Type::Int, 0) {
                Term::Num(n) => assert!((cfg.int_min..=cfg.int_max).contains(&n)),
                other => panic!("expected a literal, got {other}"),
            }
        }
    }

    #[test]
    fn size_zero_tree_is_leaf() {
        let cfg = GenConfig::default();
        let mut ctx = GenContext::seeded(TypeEnv::new(), 2);
        for _ in 0..50 {
            assert_eq!(
                generate_term(&mut ctx, &cfg, &Type::bst(Type::Int, Type::Int), 0),
                Term::Leaf
            );
        }
    }

    #[test]
    fn pair_components_check_at_their_types() {
        let cfg = GenConfig::default();
        let ty = Type::pair(Type::Int, Type::Bool);
        let mut ctx = GenContext::seeded(TypeEnv::new(), 3);
        for size in 0..8 {
            let term = generate_term(&mut ctx, &cfg, &ty, size);
            check_term(&TypeEnv::new(), &term, &ty).unwrap();
        }
    }

    #[test]
    fn fresh_names_avoid_globals_and_repeat_never() {
        let globals = TypeEnv::new().extend("insert", Type::Int).extend("x0", Type::Int);
        let mut ctx = GenContext::seeded(globals, 4);
        let a = fresh_name(&mut ctx);
        let b = fresh_name(&mut ctx);
        let c = fresh_name(&mut ctx);
        assert_ne!(a, "x0", "must skip the global x0");
        assert!(a != b && b != c && a != c);
        for name in [&a, &b, &c] {
            assert!(!ctx.globals.contains(name));
        }
        // A local in scope is skipped too.
        ctx.locals.insert("x3", Type::Int);
        let d = fresh_name(&mut ctx);
        assert_ne!(d, "x3");
    }

    #[test]
    fn rec_binder_never_occurs_in_body() {
        let cfg = GenConfig::default();
        let mut ctx = GenContext::seeded(TypeEnv::new(), 5);
        for size in 1..8 {
            for ty in [Type::Int, Type::Bool] {
                let term = generate_rec(&mut ctx, &cfg, &ty, size);
                let Term::Rec(x, body) = &term else {
                    panic!("expected rec");
                };
                assert!(!free_vars(body).contains(x));
                // Unused binder: the rec equals its body.
                let a = eval(&term, &mut Fuel::new(100_000)).unwrap();
                let b = eval(body, &mut Fuel::new(100_000)).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let cfg = GenConfig::default();
        for ty in harness_types() {
            let mut a = GenContext::seeded(TypeEnv::new(), 42);
            let mut b = GenContext::seeded(TypeEnv::new(), 42);
            for size in 0..8 {
                assert_eq!(
                    generate_term(&mut a, &cfg, &ty, size),
                    generate_term(&mut b, &cfg, &ty, size)
                );
            }
        }
    }

    #[test]
    fn var_bias_makes_scope_lookups_visible() {
        fn contains_var(t: &Term, name: &str) -> bool {
            free_vars(t).contains(name)
        }
        let cfg = GenConfig::default();
        let mut ctx = GenContext::seeded(TypeEnv::new(), 6);
        ctx.locals.insert("x", Type::Int);
        let mut hits = 0;
        for _ in 0..1_000 {
            let term = generate_term(&mut ctx, &cfg, &Type::Int, 3);
            if contains_var(&term, "x") {
                hits += 1;
            }
        }
        assert!(hits >= 200, "only {hits}/1000 terms used the in-scope variable");
    }

    #[test]
    fn generate_type_depth_zero_is_base() {
        let cfg = GenConfig::default();
        let mut ctx = GenContext::seeded(TypeEnv::new(), 7);
        for _ in 0..100 {
            let ty = generate_type(&mut ctx, &cfg, 0);
            assert!(matches!(ty, Type::Int | Type::Bool | Type::Unit));
        }
    }

    #[test]
    fn bound_type_bias_one_forces_scope_type() {
        let mut cfg = GenConfig::default();
        cfg.bound_type_bias = 1.0;
        let mut ctx = GenContext::seeded(TypeEnv::new(), 8);
        ctx.locals.insert("x", Type::bst(Type::Int, Type::Int));
        for _ in 0..50 {
            assert_eq!(
                generate_type(&mut ctx, &cfg, 2),
                Type::bst(Type::Int, Type::Int)
            );
        }
    }

    #[test]
    fn random_type_distribution_is_roughly_uniform() {
        // With bias 0 and depth 2, the head constructor is uniform over the
        // six alternatives. Chi-square with 5 degrees of freedom; 20.52 is
        // the 0.999 quantile. The seed is fixed, so this cannot flake.
        let mut cfg = GenConfig::default();
        cfg.bound_type_bias = 0.0;
        let mut ctx = GenContext::seeded(TypeEnv::new(), 9);
        let mut counts = [0usize; 6];
        let draws = 10_000;
        for _ in 0..draws {
            let ty = generate_type(&mut ctx, &cfg, 2);
            let idx = match ty {
                Type::Int => 0,
                Type::Bool => 1,
                Type::Unit => 2,
                Type::Pair(_, _) => 3,
                Type::Arrow(_, _) => 4,
                Type::Bst(_, _) => 5,
                Type::Var(_) => unreachable!(),
            };
            counts[idx] += 1;
        }
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 20.52, "chi-square {chi2} over counts {counts:?}");
    }

    #[test]
    fn soundness_and_termination_smoke() {
        let cfg = GenConfig::default();
        let empty = TypeEnv::new();
        for (i, ty) in harness_types().into_iter().enumerate() {
            let mut ctx = GenContext::seeded(TypeEnv::new(), 100 + i as u64);
            for round in 0..500u32 {
                let size = round % 11;
                let term = generate_term(&mut ctx, &cfg, &ty, size);
                check_term(&empty, &term, &ty)
                    .unwrap_or_else(|e| panic!("{e} for {term} at size {size}"));
                let result = eval(&term, &mut Fuel::new(100_000))
                    .unwrap_or_else(|e| panic!("{e} for {term}"));
                assert!(result.is_canonical());
            }
        }
    }

    #[test]
    fn depth_grows_at_most_linearly_with_size() {
        // Each rule adds at most two levels (an application over its
        // lambda) per unit of size, and a base case contributes at most
        // the depth of its (bounded) type.
        let cfg = GenConfig::default();
        for ty in harness_types() {
            let mut ctx = GenContext::seeded(TypeEnv::new(), 11);
            for size in 0..12u32 {
                for _ in 0..50 {
                    let term = generate_term(&mut ctx, &cfg, &ty, size);
                    assert!(
                        term.depth() <= (2 * size + 5) as usize,
                        "depth {} at size {size}: {term}",
                        term.depth()
                    );
                }
            }
        }
    }
}
