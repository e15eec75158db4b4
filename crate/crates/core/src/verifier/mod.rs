//! Batch property checks over every invariant of the model.
//!
//! A [`TestCampaign`] fixes a seed, case bounds and a list of [`Suite`]s.
//! Each suite draws its cases from its own generator seeded from the
//! campaign seed and the suite id, so reports depend only on the campaign.

mod config;
pub mod gen;
mod negative;
pub mod shrink;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use config::ConfigError;
pub use negative::{
    find_escape, search_negative_control, search_negative_control_with, BadCover, NegativeControl,
};

macro_rules! suites {
    ($($variant:ident => $id:literal,)*) => {
        /// One checked invariant.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Suite {
            $($variant,)*
        }

        impl Suite {
            pub const ALL: &'static [Suite] = &[$(Suite::$variant,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(Suite::$variant => $id,)*
                }
            }
        }

        impl FromStr for Suite {
            type Err = UnknownSuite;

            fn from_str(s: &str) -> Result<Suite, UnknownSuite> {
                match s {
                    $($id => Ok(Suite::$variant),)*
                    _ => Err(UnknownSuite(s.to_string())),
                }
            }
        }
    };
}

suites! {
    CanonicalIdempotent => "canonical-idempotent",
    OrderTotal => "order-total",
    TreeProperty => "tree-property",
    EndpointConsistency => "endpoint-consistency",
    GroupLaws => "group-laws",
    SubgroupClosure => "subgroup-closure",
    EvenCardinality => "even-cardinality",
    ParityTransfer => "parity-transfer",
    CoverCompleteness => "cover-completeness",
    EnumerationOracle => "enumeration-oracle",
    RetractionIdentity => "retraction-identity",
    RetractMembership => "retract-membership",
    OddResidue => "odd-residue",
    RetractionOracle => "retraction-oracle",
    Maximality => "maximality",
    UnionProperty => "union-property",
    MainTheorem => "main-theorem",
    LeftmostOddStability => "leftmost-odd-stability",
    VxParity => "vx-parity",
    NoEvenLanding => "no-even-landing",
    SubspaceEmbedding => "subspace-embedding",
    NegativeControl => "negative-control",
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CampaignError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("enum_depth {enum_depth} is below max_word_length {max_word_length}, the longest cover prefix a case can produce")]
    DepthBelowCover {
        enum_depth: usize,
        max_word_length: usize,
    },
    #[error("{name} = {value} exceeds the supported maximum {max}")]
    TooLarge {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("no suites selected")]
    NoSuites,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCampaign {
    pub seed: u64,
    pub max_set_size: usize,
    pub max_word_length: usize,
    pub enum_depth: usize,
    pub enum_cap: usize,
    /// Random cases drawn per suite.
    pub cases: usize,
    pub suites: Vec<Suite>,
}

impl Default for TestCampaign {
    fn default() -> TestCampaign {
        TestCampaign {
            seed: 20_240_601,
            max_set_size: 7,
            max_word_length: 4,
            enum_depth: 6,
            enum_cap: 5_000,
            cases: 500,
            suites: Suite::ALL.to_vec(),
        }
    }
}

const MAX_WORD_LENGTH: usize = 16;
const MAX_ENUM_DEPTH: usize = 12;

impl TestCampaign {
    pub fn validate(&self) -> Result<(), CampaignError> {
        for (name, value) in [
            ("max_set_size", self.max_set_size),
            ("max_word_length", self.max_word_length),
            ("enum_depth", self.enum_depth),
            ("enum_cap", self.enum_cap),
            ("cases", self.cases),
        ] {
            if value == 0 {
                return Err(CampaignError::NotPositive(name));
            }
        }
        if self.max_word_length > MAX_WORD_LENGTH {
            return Err(CampaignError::TooLarge {
                name: "max_word_length",
                value: self.max_word_length,
                max: MAX_WORD_LENGTH,
            });
        }
        if self.enum_depth > MAX_ENUM_DEPTH {
            return Err(CampaignError::TooLarge {
                name: "enum_depth",
                value: self.enum_depth,
                max: MAX_ENUM_DEPTH,
            });
        }
        if self.enum_depth < self.max_word_length {
            return Err(CampaignError::DepthBelowCover {
                enum_depth: self.enum_depth,
                max_word_length: self.max_word_length,
            });
        }
        if self.suites.is_empty() {
            return Err(CampaignError::NoSuites);
        }
        Ok(())
    }

    pub fn from_config_str(text: &str) -> Result<TestCampaign, ConfigError> {
        config::parse(text)
    }

    /// Generator for one suite: the campaign seed mixed with the suite id.
    fn rng_for(&self, suite: Suite) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in suite.id().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

/// A failing case with its full inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub description: String,
    /// False if the second evaluation of the same case passed.
    pub reproduced: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub suites: Vec<SuiteReport>,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }

    /// One `suite-id pass-count fail-count` line per suite.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!("{} {} {}\n", s.suite, s.passed, s.failed));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .suites
            .iter()
            .map(|s| s.suite.id().len())
            .max()
            .unwrap_or(0);
        for s in &self.suites {
            let status = if s.failed == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {:<width$}  passed {:>7}  failed {:>5}  ({:.1} ms)\n",
                s.suite.id(),
                s.passed,
                s.failed,
                s.elapsed.as_secs_f64() * 1e3,
            ));
            for c in &s.counterexamples {
                let note = if c.reproduced { "" } else { " [did not reproduce]" };
                out.push_str(&format!("    counterexample{note}: {}\n", c.description));
            }
        }
        let passed: usize = self.suites.iter().map(|s| s.passed).sum();
        let failed: usize = self.suites.iter().map(|s| s.failed).sum();
        out.push_str(&format!(
            "total: {} suites, {passed} cases passed, {failed} failed\n",
            self.suites.len()
        ));
        out
    }
}

/// Runs the selected suites in identifier order. The campaign must
/// validate; failing cases are data in the report, not errors.
pub fn run_campaign(c: &TestCampaign) -> Result<CampaignReport, CampaignError> {
    c.validate()?;
    let mut selected = c.suites.clone();
    selected.sort();
    selected.dedup();
    let suites = selected
        .into_iter()
        .map(|suite| {
            let start = Instant::now();
            let mut rng = c.rng_for(suite);
            let tally = suites::run(suite, c, &mut rng);
            SuiteReport {
                suite,
                passed: tally.passed,
                failed: tally.failed,
                counterexamples: tally.counterexamples,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    Ok(CampaignReport { suites })
}
