//! The corpus manifest: every `.pun` file under `corpus/` with its expected
//! per-property outcomes, plus spot checks of the model transform.

use pun::ast::Term;
use pun::eval::{eval, Fuel};
use pun::parser::{parse_program, parse_term};
use pun::runner::{check_all, RunConfig, TestOutcome};
use pun::typecheck::{check_program, TypedProgram};

/// What a property is expected to do over a seed sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Expected {
    Passes,
    Fails,
}

struct CorpusEntry {
    path: &'static str,
    /// (property name, expected outcome kind); empty for library files.
    expected: &'static [(&'static str, Expected)],
    /// The unmutated file this one was derived from, if any.
    mutation_of: Option<&'static str>,
}

const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        path: "bst.pun",
        expected: &[],
        mutation_of: None,
    },
    CorpusEntry {
        path: "bst_props.pun",
        expected: &[
            ("validify-valid", Expected::Passes),
            ("union-valid", Expected::Passes),
            ("model-right-spine", Expected::Passes),
            ("model-sorted", Expected::Passes),
            ("insert-valid", Expected::Passes),
            ("find-post-present", Expected::Passes),
            ("insert-insert-commutes", Expected::Passes),
            ("insert-model", Expected::Passes),
        ],
        mutation_of: None,
    },
    CorpusEntry {
        path: "arith_props.pun",
        expected: &[
            ("add-is-commutative", Expected::Passes),
            ("plus-zero-identity", Expected::Passes),
        ],
        mutation_of: None,
    },
    CorpusEntry {
        path: "sub_is_commutative.pun",
        expected: &[("sub-is-commutative", Expected::Fails)],
        mutation_of: None,
    },
    CorpusEntry {
        path: "fib.pun",
        expected: &[],
        mutation_of: None,
    },
    CorpusEntry {
        path: "mutants/insert_clobber.pun",
        // The singleton-returning insert slips past the validity and
        // post-condition properties; the model-based and metamorphic ones
        // catch it.
        expected: &[
            ("validify-valid", Expected::Passes),
            ("union-valid", Expected::Passes),
            ("model-right-spine", Expected::Passes),
            ("model-sorted", Expected::Passes),
            ("insert-valid", Expected::Passes),
            ("find-post-present", Expected::Passes),
            ("insert-insert-commutes", Expected::Fails),
            ("insert-model", Expected::Fails),
        ],
        mutation_of: Some("bst_props.pun"),
    },
];

fn load(path: &str) -> (String, TypedProgram) {
    let full = format!("{}/../../corpus/{path}", env!("CARGO_MANIFEST_DIR"));
    let source = std::fs::read_to_string(&full).unwrap_or_else(|e| panic!("{full}: {e}"));
    let program = parse_program(&source).unwrap_or_else(|e| panic!("{path}: {e}"));
    let typed = check_program(&program).unwrap_or_else(|e| panic!("{path}: {e}"));
    (source, typed)
}

#[test]
fn every_corpus_file_matches_its_expected_outcomes() {
    for entry in CORPUS {
        let (_, typed) = load(entry.path);
        let outcomes = check_all(&typed, &RunConfig::with_seed(2024));
        assert_eq!(outcomes.len(), entry.expected.len(), "{}", entry.path);
        for ((name, outcome), (expected_name, expected)) in outcomes.iter().zip(entry.expected) {
            assert_eq!(name, expected_name, "{}", entry.path);
            match expected {
                Expected::Passes => assert!(
                    outcome.passed(),
                    "{}: {name} was expected to pass: {outcome:?}",
                    entry.path
                ),
                Expected::Fails => assert!(
                    matches!(outcome, TestOutcome::Failed { .. }),
                    "{}: {name} was expected to fail: {outcome:?}",
                    entry.path
                ),
            }
        }
    }
}

#[test]
fn mutants_differ_from_their_originals_by_one_definition_body() {
    for entry in CORPUS {
        let Some(original_path) = entry.mutation_of else {
            continue;
        };
        let (_, mutant) = load(entry.path);
        let (_, original) = load(original_path);
        let mutant_defs: Vec<_> = mutant
            .program
            .declarations
            .iter()
            .filter(|d| matches!(d, pun::ast::Declaration::Definition { .. }))
            .collect();
        let original_defs: Vec<_> = original
            .program
            .declarations
            .iter()
            .filter(|d| matches!(d, pun::ast::Declaration::Definition { .. }))
            .collect();
        assert_eq!(mutant_defs.len(), original_defs.len());
        let differing: Vec<&str> = mutant_defs
            .iter()
            .zip(&original_defs)
            .filter(|(m, o)| m != o)
            .map(|(m, _)| m.name())
            .collect();
        assert_eq!(differing, vec!["insert"], "{}", entry.path);
    }
}

/// The four-node example: keys 1..4 with values 4, 8, 1, 10 arranged as a
/// search tree flatten to the right-spine tree of (key, value) pairs with
/// unit payloads, in key order.
#[test]
fn model_flattens_the_four_node_example_tree() {
    let (_, typed) = load("bst.pun");
    let tree = parse_term(
        "[node [node leaf 1 4 leaf] 2 8 [node leaf 3 1 [node leaf 4 10 leaf]]]",
    )
    .unwrap();
    let call = typed.inline_definitions(&Term::app(Term::var("model"), tree));
    let got = eval(&call, &mut Fuel::new(100_000)).unwrap();
    let expected = parse_term(
        "[node leaf (1, 4) () \
           [node leaf (2, 8) () \
             [node leaf (3, 1) () \
               [node leaf (4, 10) () leaf]]]]",
    )
    .unwrap();
    assert_eq!(got, expected);
}

#[test]
fn model_of_leaf_is_leaf() {
    let (_, typed) = load("bst.pun");
    let call = typed.inline_definitions(&Term::app(Term::var("model"), Term::Leaf));
    assert_eq!(eval(&call, &mut Fuel::new(100_000)).unwrap(), Term::Leaf);
}

/// find on a missing key returns a leaf; on a present key, a singleton
/// with the stored value.
#[test]
fn find_returns_leaf_or_singleton() {
    let (_, typed) = load("bst.pun");
    let tree = "[node [node leaf 1 4 leaf] 2 8 [node leaf 3 1 leaf]]";
    let hit = parse_term(&format!("((find 3) {tree})")).unwrap();
    let miss = parse_term(&format!("((find 9) {tree})")).unwrap();
    assert_eq!(
        eval(&typed.inline_definitions(&hit), &mut Fuel::new(100_000)).unwrap(),
        parse_term("[node leaf 3 1 leaf]").unwrap()
    );
    assert_eq!(
        eval(&typed.inline_definitions(&miss), &mut Fuel::new(100_000)).unwrap(),
        Term::Leaf
    );
}

/// validify turns an arbitrary (here: deliberately unordered) tree into a
/// valid search tree with the same keys, last-write-wins on duplicates.
#[test]
fn validify_orders_an_unordered_tree() {
    let (_, typed) = load("bst.pun");
    let scrambled = "[node [node leaf 9 1 leaf] 3 5 [node leaf 3 7 leaf]]";
    let check = parse_term(&format!("valid (validify {scrambled})")).unwrap();
    assert_eq!(
        eval(&typed.inline_definitions(&check), &mut Fuel::new(100_000)).unwrap(),
        Term::Bool(true)
    );
    let flattened = parse_term(&format!("model (validify {scrambled})")).unwrap();
    let got = eval(&typed.inline_definitions(&flattened), &mut Fuel::new(100_000)).unwrap();
    // Keys 3 and 9 survive; one of the duplicate 3-values wins.
    let Term::Node(l, k, _, r) = &got else {
        panic!("expected a node, got {got}");
    };
    assert_eq!(l.as_ref(), &Term::Leaf);
    assert_eq!(k.as_ref(), &Term::pair(Term::Num(3), Term::Num(5)));
    let Term::Node(_, k2, _, r2) = r.as_ref() else {
        panic!("expected a second node, got {r}");
    };
    assert!(matches!(k2.as_ref(), Term::Pair(a, _) if a.as_ref() == &Term::Num(9)));
    assert_eq!(r2.as_ref(), &Term::Leaf);
}
