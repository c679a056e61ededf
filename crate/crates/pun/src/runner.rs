//! The property runner: for each test it generates one closed term per
//! argument at the scheduled size, substitutes them into the property body,
//! resolves top-level definitions, evaluates, and reports.
//!
//! Report format (one block per property, byte-stable):
//!
//! ```text
//! testing <name>: .......... ok
//! testing <name>: .."failed with counter example :"
//!   <counterexample>
//! "after 3 tests"
//! testing <name>: .. aborted: out of fuel
//! ```
//!
//! One dot is printed per passed test. The counterexample line is the
//! substituted property body before definitions are inlined, so it reads
//! in terms of the program's own names and can be replayed against it.

use sha2::{Digest, Sha256};

use crate::ast::{substitute, Term};
use crate::eval::{eval, EvalError, Fuel};
use crate::gen::{generate_term, GenConfig, GenContext};
use crate::typecheck::{TypeError, TypedProgram, TypedProperty};

/// What stopped a property run before all tests passed.
#[derive(Debug, Clone, PartialEq)]
pub enum AbortReason {
    Eval(EvalError),
    Type(TypeError),
}

impl std::fmt::Display for AbortReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AbortReason::Eval(e) => write!(f, "{e}"),
            AbortReason::Type(e) => write!(f, "{e}"),
        }
    }
}

/// The result of checking one property.
#[derive(Debug, Clone, PartialEq)]
pub enum TestOutcome {
    Passed {
        tests: u32,
    },
    /// The fully substituted boolean body that evaluated to false, and the
    /// 1-based index of the test that found it.
    Failed {
        counterexample: Term,
        after_tests: u32,
    },
    /// An error (out of fuel, usually) on the given test. A timeout is not
    /// evidence that the property is false, so this is distinct from
    /// `Failed`, but it still fails the run.
    Aborted {
        reason: AbortReason,
        after_tests: u32,
    },
}

impl TestOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, TestOutcome::Passed { .. })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tests: u32,
    pub seed: u64,
    pub max_size: u32,
    pub fuel: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            tests: 50,
            seed: 0,
            max_size: 10,
            fuel: 100_000,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> RunConfig {
        RunConfig {
            seed,
            ..RunConfig::default()
        }
    }
}

/// Child stream for one (property, test index) pair. Deriving per test
/// keeps inputs stable when properties are added or reordered.
fn derive_rng_seed(seed: u64, property: &str, index: u32) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(property.as_bytes());
    hasher.update(u64::from(index).to_le_bytes());
    hasher.finalize().into()
}

/// Sizes ramp from small to `max_size` over the run.
fn scheduled_size(index: u32, cfg: &RunConfig) -> u32 {
    let numerator = u64::from(index) * u64::from(cfg.max_size);
    numerator.div_ceil(u64::from(cfg.tests)) as u32
}

/// Run one property for up to `cfg.tests` random instantiations.
pub fn check_property(
    program: &TypedProgram,
    property: &TypedProperty,
    cfg: &RunConfig,
) -> TestOutcome {
    let gen_cfg = GenConfig::default();
    let gen_env = program.definition_env();
    for index in 1..=cfg.tests {
        let size = scheduled_size(index, cfg);
        let mut ctx = GenContext::new(
            gen_env.clone(),
            derive_rng_seed(cfg.seed, &property.name, index),
        );
        let mut body = property.body.clone();
        for (arg, ty) in &property.args {
            let term = generate_term(&mut ctx, &gen_cfg, ty, size);
            body = substitute(&body, arg, &term);
        }
        let runnable = program.inline_definitions(&body);
        let mut fuel = Fuel::new(cfg.fuel);
        match eval(&runnable, &mut fuel) {
            Ok(Term::Bool(true)) => {}
            Ok(Term::Bool(false)) => {
                return TestOutcome::Failed {
                    counterexample: body,
                    after_tests: index,
                }
            }
            Ok(other) => {
                return TestOutcome::Aborted {
                    reason: AbortReason::Eval(EvalError::Stuck(format!(
                        "property evaluated to non-boolean `{other}`"
                    ))),
                    after_tests: index,
                }
            }
            Err(e) => {
                return TestOutcome::Aborted {
                    reason: AbortReason::Eval(e),
                    after_tests: index,
                }
            }
        }
    }
    TestOutcome::Passed { tests: cfg.tests }
}

/// Check every property in declaration order.
pub fn check_all(program: &TypedProgram, cfg: &RunConfig) -> Vec<(String, TestOutcome)> {
    program
        .properties
        .iter()
        .map(|p| (p.name.clone(), check_property(program, p, cfg)))
        .collect()
}

/// Render one property's outcome as its report block (no trailing newline).
pub fn render_outcome(name: &str, outcome: &TestOutcome) -> String {
    match outcome {
        TestOutcome::Passed { tests } => {
            format!("testing {name}: {} ok", ".".repeat(*tests as usize))
        }
        TestOutcome::Failed {
            counterexample,
            after_tests,
        } => format!(
            "testing {name}: {}\"failed with counter example :\"\n  {counterexample}\n\"after {after_tests} tests\"",
            ".".repeat((*after_tests - 1) as usize),
        ),
        TestOutcome::Aborted {
            reason,
            after_tests,
        } => format!(
            "testing {name}: {} aborted: {reason}",
            ".".repeat((*after_tests - 1) as usize),
        ),
    }
}
