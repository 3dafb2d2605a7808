//! Verdicts, witnesses and their JSON form.

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::manipulation::{Clause, ManipulationWitness, Observer, RuleRef, Target};
use crate::document::{alternative_distribution, ballot_json, number, profile_json};
use crate::error::Result;
use crate::hilbert::{AlternativeState, ProfileState, RankingSpace};
use crate::ranking::{Alternative, Pair};
use crate::scalar::Scalar;

/// Most witnesses a report keeps; the total is still counted.
pub const MAX_STORED_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Established by construction.
    Holds,
    /// No counterexample among the samples tried.
    HoldsOnSample,
    Falsified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsOnSample => "holds-on-sample",
            Verdict::Falsified => "falsified",
        }
    }

    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Falsified)
    }
}

/// Which half of an if-and-only-if broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// The voter's status holds, society's does not.
    VoterWithoutSociety,
    /// Society's status holds, the voter's does not.
    SocietyWithoutVoter,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::VoterWithoutSociety => "voter-without-society",
            Direction::SocietyWithoutVoter => "society-without-voter",
        }
    }
}

/// Status of a support value: certainty for sharp checks, positivity otherwise.
pub fn status<T: Scalar>(value: &T, sharp: bool, eps: &T) -> bool {
    if sharp {
        *value >= T::one() - eps.clone()
    } else {
        *value > *eps
    }
}

#[derive(Clone, Debug)]
pub struct DictatorshipWitness<T> {
    /// 0-based.
    pub voter: usize,
    pub sharp: bool,
    pub direction: Direction,
    pub target: Target,
    pub voter_value: T,
    pub society_value: T,
    pub profile: ProfileState<T>,
}

#[derive(Clone, Debug)]
pub struct UnanimityWitness<T> {
    pub sharp: bool,
    pub pair: Pair,
    pub voter_values: Vec<T>,
    pub society_value: T,
    pub profile: ProfileState<T>,
}

#[derive(Clone, Debug)]
pub struct IiaWitness<T> {
    pub sharp: bool,
    pub pair: Pair,
    pub society_value: T,
    pub twin_society_value: T,
    pub profile: ProfileState<T>,
    pub twin: ProfileState<T>,
}

#[derive(Clone, Debug)]
pub struct OntoWitness<T> {
    pub alternative: Alternative,
    pub output: AlternativeState<T>,
    pub profile: ProfileState<T>,
}

#[derive(Clone, Debug)]
pub enum Witness<T> {
    Manipulation(ManipulationWitness<T>),
    Dictatorship(DictatorshipWitness<T>),
    Unanimity(UnanimityWitness<T>),
    Iia(IiaWitness<T>),
    Onto(OntoWitness<T>),
    /// A choice manipulation on a triple where the welfare rule had none.
    Preservation(ManipulationWitness<T>),
}

fn target_json(space: &RankingSpace, target: &Target) -> Value {
    Value::String(target.label(space))
}

fn pair_label(space: &RankingSpace, (x, y): Pair) -> String {
    Target::Pair(x, y).label(space)
}

fn f<T: Scalar>(x: &T) -> Value {
    number(x.to_f64_lossy())
}

fn manipulation_json<T: Scalar>(w: &ManipulationWitness<T>) -> Map<String, Value> {
    let space = w.profile.space();
    let mut out = Map::new();
    out.insert("voter".into(), json!(w.voter + 1));
    out.insert("clause".into(), json!(w.clause.as_str()));
    out.insert("target".into(), target_json(space, &w.target));
    out.insert("voter_support".into(), f(&w.voter_support));
    out.insert("truthful_society".into(), f(&w.truthful_society));
    out.insert("dishonest_society".into(), f(&w.dishonest_society));
    out.insert("dishonest_ballot".into(), ballot_json(&w.dishonest_ballot));
    out.insert("profile".into(), profile_json(&w.profile));
    out
}

impl<T: Scalar> Witness<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Manipulation(_) => "manipulation",
            Witness::Dictatorship(_) => "dictatorship",
            Witness::Unanimity(_) => "unanimity",
            Witness::Iia(_) => "iia",
            Witness::Onto(_) => "onto",
            Witness::Preservation(_) => "preservation",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("kind".into(), json!(self.kind()));
        match self {
            Witness::Manipulation(w) | Witness::Preservation(w) => out.extend(manipulation_json(w)),
            Witness::Dictatorship(w) => {
                let space = w.profile.space();
                out.insert("voter".into(), json!(w.voter + 1));
                out.insert("sharp".into(), json!(w.sharp));
                out.insert("direction".into(), json!(w.direction.as_str()));
                out.insert("target".into(), target_json(space, &w.target));
                out.insert("voter_value".into(), f(&w.voter_value));
                out.insert("society_value".into(), f(&w.society_value));
                out.insert("profile".into(), profile_json(&w.profile));
            }
            Witness::Unanimity(w) => {
                out.insert("sharp".into(), json!(w.sharp));
                out.insert(
                    "target".into(),
                    json!(pair_label(w.profile.space(), w.pair)),
                );
                out.insert(
                    "voter_values".into(),
                    Value::Array(w.voter_values.iter().map(f).collect()),
                );
                out.insert("society_value".into(), f(&w.society_value));
                out.insert("profile".into(), profile_json(&w.profile));
            }
            Witness::Iia(w) => {
                out.insert("sharp".into(), json!(w.sharp));
                out.insert(
                    "target".into(),
                    json!(pair_label(w.profile.space(), w.pair)),
                );
                out.insert("society_value".into(), f(&w.society_value));
                out.insert("twin_society_value".into(), f(&w.twin_society_value));
                out.insert("profile".into(), profile_json(&w.profile));
                out.insert("twin".into(), profile_json(&w.twin));
            }
            Witness::Onto(w) => {
                let names = w.output.alternatives();
                out.insert("alternative".into(), json!(names.name(w.alternative)));
                out.insert(
                    "output".into(),
                    Value::Object(alternative_distribution(&w.output, &T::default_eps())),
                );
                out.insert("profile".into(), profile_json(&w.profile));
            }
        }
        Value::Object(out)
    }

    /// Recomputes the witness from scratch against `rule`.
    pub fn verify(&self, rule: RuleRef<'_, T>, eps: &T) -> Result<bool> {
        match self {
            Witness::Manipulation(w) | Witness::Preservation(w) => w.verify(rule, eps),
            Witness::Dictatorship(w) => {
                let obs = Observer::with_targets(rule, w.profile.space(), vec![w.target])?;
                let v = obs.ballot(&w.profile.partial_ballot(w.voter)?)?.remove(0);
                let s = obs.society(&w.profile)?.remove(0);
                let (vs, ss) = (status(&v, w.sharp, eps), status(&s, w.sharp, eps));
                Ok(match w.direction {
                    Direction::VoterWithoutSociety => vs && !ss,
                    Direction::SocietyWithoutVoter => ss && !vs,
                })
            }
            Witness::Unanimity(w) => {
                if rule.is_choice() {
                    return Ok(false);
                }
                let (x, y) = w.pair;
                let obs =
                    Observer::with_targets(rule, w.profile.space(), vec![Target::Pair(x, y)])?;
                for i in 0..w.profile.voters() {
                    let v = obs.ballot(&w.profile.partial_ballot(i)?)?.remove(0);
                    if !status(&v, w.sharp, eps) {
                        return Ok(false);
                    }
                }
                Ok(!status(&obs.society(&w.profile)?.remove(0), w.sharp, eps))
            }
            Witness::Iia(w) => {
                if rule.is_choice() {
                    return Ok(false);
                }
                let (x, y) = w.pair;
                let obs =
                    Observer::with_targets(rule, w.profile.space(), vec![Target::Pair(x, y)])?;
                let tol = crate::scalar::max_of(eps.clone(), T::from_f64_lossy(1e-12));
                for i in 0..w.profile.voters() {
                    let a = obs.ballot(&w.profile.partial_ballot(i)?)?.remove(0);
                    let b = obs.ballot(&w.twin.partial_ballot(i)?)?.remove(0);
                    if (a - b).abs() > tol {
                        return Ok(false);
                    }
                }
                let s = obs.society(&w.profile)?.remove(0);
                let t = obs.society(&w.twin)?.remove(0);
                Ok(status(&s, w.sharp, eps) != status(&t, w.sharp, eps))
            }
            Witness::Onto(w) => {
                let RuleRef::Choice(xi) = rule else {
                    return Ok(false);
                };
                let alpha = xi.evaluate(&w.profile)?;
                Ok(!alpha.is_point_mass_on(w.alternative, eps))
            }
        }
    }

    pub fn clause(&self) -> Option<Clause> {
        match self {
            Witness::Manipulation(w) | Witness::Preservation(w) => Some(w.clause),
            _ => None,
        }
    }
}

/// Outcome of one axiom check.
#[derive(Clone, Debug)]
pub struct AxiomReport<T> {
    pub axiom: String,
    pub rule: String,
    pub verdict: Verdict,
    pub alternatives: usize,
    pub voters: usize,
    pub trials: usize,
    pub seed: u64,
    /// Candidate family text, for checks that search dishonest ballots.
    pub family: Option<String>,
    pub detail: Map<String, Value>,
    /// First [`MAX_STORED_WITNESSES`] witnesses in sample order.
    pub witnesses: Vec<Witness<T>>,
    pub witness_count: usize,
    pub elapsed_ms: Option<u64>,
}

impl<T: Scalar> AxiomReport<T> {
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("axiom".into(), json!(self.axiom));
        out.insert("rule".into(), json!(self.rule));
        out.insert("verdict".into(), json!(self.verdict.as_str()));
        out.insert("alternatives".into(), json!(self.alternatives));
        out.insert("voters".into(), json!(self.voters));
        out.insert("trials".into(), json!(self.trials));
        out.insert("seed".into(), json!(self.seed));
        out.insert("family".into(), json!(self.family));
        out.insert("detail".into(), Value::Object(self.detail.clone()));
        out.insert("witness_count".into(), json!(self.witness_count));
        out.insert(
            "witnesses".into(),
            Value::Array(self.witnesses.iter().map(Witness::to_json).collect()),
        );
        out.insert("elapsed_ms".into(), json!(self.elapsed_ms));
        Value::Object(out)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {}: {} ({} trials, {} witnesses)",
            self.axiom,
            self.rule,
            self.verdict.as_str(),
            self.trials,
            self.witness_count
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteVerdict {
    BypassDemonstrated,
    NotBypassed,
}

impl SuiteVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteVerdict::BypassDemonstrated => "bypass-demonstrated",
            SuiteVerdict::NotBypassed => "not-bypassed",
        }
    }
}

/// A bundle of checks with the verdict each component needs.
#[derive(Clone, Debug)]
pub struct SuiteReport<T> {
    pub suite: String,
    pub rule: String,
    pub verdict: SuiteVerdict,
    /// Each report with the verdicts that count as a pass for the bundle.
    pub components: Vec<(AxiomReport<T>, Vec<Verdict>)>,
    pub elapsed_ms: Option<u64>,
}

impl<T: Scalar> SuiteReport<T> {
    pub fn component(&self, axiom: &str) -> Option<&AxiomReport<T>> {
        self.components
            .iter()
            .map(|(r, _)| r)
            .find(|r| r.axiom == axiom)
    }

    pub fn to_json(&self) -> Value {
        let components = self
            .components
            .iter()
            .map(|(report, needed)| {
                let mut v = report.to_json();
                if let Value::Object(map) = &mut v {
                    map.insert(
                        "required".into(),
                        Value::Array(needed.iter().map(|n| json!(n.as_str())).collect()),
                    );
                    map.insert("passed".into(), json!(needed.contains(&report.verdict)));
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite,
            "rule": self.rule,
            "verdict": self.verdict.as_str(),
            "components": Value::Array(components),
            "elapsed_ms": self.elapsed_ms,
        })
    }
}
