//! Substitution laws and print/parse round trips.

use proptest::prelude::*;

use pun::ast::{alpha_eq, free_vars, substitute, BinOp, Pattern, Term, Type};
use pun::gen::{generate_term, GenConfig, GenContext};
use pun::parser::{parse_program, parse_term};
use pun::typecheck::TypeEnv;

fn var_name() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
    ]
}

/// Small arbitrary terms, not necessarily well typed; the binding laws
/// hold regardless of types.
fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0i64..100).prop_map(Term::Num),
        any::<bool>().prop_map(Term::Bool),
        Just(Term::Unit),
        Just(Term::Leaf),
        var_name().prop_map(Term::Var),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (var_name(), inner.clone()).prop_map(|(x, b)| Term::lambda(x, b)),
            (var_name(), inner.clone()).prop_map(|(x, b)| Term::rec(x, b)),
            (var_name(), inner.clone(), inner.clone())
                .prop_map(|(x, t1, t2)| Term::let_(x, t1, t2)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::binop(BinOp::Plus, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(c, t, e)| Term::if_(c, t, e)),
            inner.clone().prop_map(|t| Term::Fst(Box::new(t))),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(s, l, n)| {
                Term::case(
                    s,
                    l,
                    Pattern::Node(
                        Box::new(Pattern::Var("pl".into())),
                        Box::new(Pattern::Var("pk".into())),
                        Box::new(Pattern::Var("pv".into())),
                        Box::new(Pattern::Var("pr".into())),
                    ),
                    n,
                )
            }),
        ]
    })
}

/// Closed replacement values.
fn arb_closed() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0i64..100).prop_map(Term::Num),
        Just(Term::Bool(true)),
        Just(Term::Leaf),
        (0i64..100, any::<bool>()).prop_map(|(n, b)| Term::pair(Term::Num(n), Term::Bool(b))),
        Just(Term::lambda("w", Term::var("w"))),
    ]
}

proptest! {
    #[test]
    fn substitutions_of_distinct_names_commute(
        t in arb_term(),
        u in arb_closed(),
        v in arb_closed(),
    ) {
        let (x, y) = ("x", "y");
        let xy = substitute(&substitute(&t, x, &u), y, &v);
        let yx = substitute(&substitute(&t, y, &v), x, &u);
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn substitution_removes_exactly_the_substituted_name(
        t in arb_term(),
        u in arb_closed(),
    ) {
        let got = free_vars(&substitute(&t, "x", &u));
        let mut expected = free_vars(&t);
        expected.remove("x");
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn printed_terms_reparse(t in arb_term()) {
        // Arbitrary terms (even ill-typed ones) must round-trip through
        // the grammar.
        let printed = t.to_string();
        let reparsed = parse_term(&printed);
        prop_assert!(reparsed.is_ok(), "`{}` did not reparse: {:?}", printed, reparsed);
        prop_assert!(alpha_eq(&reparsed.unwrap(), &t), "`{}` changed meaning", printed);
    }

    #[test]
    fn parser_never_panics(source in "\\PC*") {
        let _ = parse_program(&source);
    }
}

#[test]
fn thousand_generated_terms_reparse_alpha_equal() {
    let cfg = GenConfig::default();
    let types = [
        Type::Int,
        Type::Bool,
        Type::pair(Type::Int, Type::Bool),
        Type::arrow(Type::Int, Type::Int),
        Type::bst(Type::Int, Type::Int),
    ];
    let mut count = 0;
    for (i, ty) in types.iter().enumerate() {
        let mut ctx = GenContext::seeded(TypeEnv::new(), 2_000 + i as u64);
        for round in 0..200u32 {
            let term = generate_term(&mut ctx, &cfg, ty, round % 11);
            let printed = term.to_string();
            let reparsed = parse_term(&printed)
                .unwrap_or_else(|e| panic!("{e} while reparsing `{printed}`"));
            assert!(
                alpha_eq(&reparsed, &term),
                "`{printed}` reparsed to a different term"
            );
            count += 1;
        }
    }
    assert_eq!(count, 1_000);
}

#[test]
fn corpus_programs_roundtrip_through_the_printer() {
    for file in [
        "../../corpus/bst.pun",
        "../../corpus/bst_props.pun",
        "../../corpus/arith_props.pun",
        "../../corpus/sub_is_commutative.pun",
        "../../corpus/mutants/insert_clobber.pun",
        "../../corpus/fib.pun",
    ] {
        let source = std::fs::read_to_string(file).unwrap();
        let program = parse_program(&source).unwrap();
        let printed = program.to_string();
        let reparsed = parse_program(&printed)
            .unwrap_or_else(|e| panic!("{file}: {e}\n--- printed ---\n{printed}"));
        assert_eq!(
            program.declarations.len(),
            reparsed.declarations.len(),
            "{file}"
        );
        for (a, b) in program.declarations.iter().zip(&reparsed.declarations) {
            use pun::ast::Declaration::*;
            match (a, b) {
                (Signature { name: n1, ty: t1 }, Signature { name: n2, ty: t2 }) => {
                    assert_eq!(n1, n2);
                    assert_eq!(t1, t2, "{file}: signature {n1}");
                }
                (
                    Definition { name: n1, params: p1, body: b1 },
                    Definition { name: n2, params: p2, body: b2 },
                ) => {
                    assert_eq!(n1, n2);
                    assert_eq!(p1, p2);
                    assert!(alpha_eq(b1, b2), "{file}: definition {n1}");
                }
                (
                    Property { name: n1, args: a1, body: b1 },
                    Property { name: n2, args: a2, body: b2 },
                ) => {
                    assert_eq!(n1, n2);
                    assert_eq!(a1, a2);
                    assert!(alpha_eq(b1, b2), "{file}: property {n1}");
                }
                _ => panic!("{file}: declaration kind changed"),
            }
        }
    }
}
