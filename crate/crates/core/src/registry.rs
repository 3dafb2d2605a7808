//! Rules by name, and the verdicts each rule is expected to earn.
//!
//! Names: `qcv`, `qcvne`, `dictator:i`, `anti:i`, `veto:a>b>c`, `borda`,
//! `constant:a`. Voter indices are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::axioms::{SuiteVerdict, Verdict};
use crate::choice::{compose, qcvne_rule, ChoiceRule, ConstantChoice, NaturalExtension};
use crate::error::{Error, Result};
use crate::ranking::AlternativeSet;
use crate::scalar::Scalar;
use crate::welfare::{
    dictator_rule, veto_rule, Borda, Qcv, QcvParams, ReverseDictator, WelfareRule,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Qcv,
    Qcvne,
    /// 1-based.
    Dictator(usize),
    /// 1-based.
    Anti(usize),
    Veto(String),
    Borda,
    Constant(String),
}

fn voter_index(text: &str, rule: &str) -> Result<usize> {
    match text.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(Error::InvalidConfig(format!(
            "{rule} needs a voter number from 1, got {text:?}"
        ))),
    }
}

impl FromStr for RuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.trim())),
            None => (s, None),
        };
        match (head, arg) {
            ("qcv", None) => Ok(RuleSpec::Qcv),
            ("qcvne", None) => Ok(RuleSpec::Qcvne),
            ("borda", None) => Ok(RuleSpec::Borda),
            ("dictator", Some(i)) => Ok(RuleSpec::Dictator(voter_index(i, "dictator")?)),
            ("anti", Some(i)) => Ok(RuleSpec::Anti(voter_index(i, "anti")?)),
            ("veto", Some(r)) if !r.is_empty() => Ok(RuleSpec::Veto(r.to_string())),
            ("constant", Some(a)) if !a.is_empty() => Ok(RuleSpec::Constant(a.to_string())),
            _ => Err(Error::InvalidConfig(format!("unknown rule {s:?}"))),
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Qcv => f.write_str("qcv"),
            RuleSpec::Qcvne => f.write_str("qcvne"),
            RuleSpec::Dictator(i) => write!(f, "dictator:{i}"),
            RuleSpec::Anti(i) => write!(f, "anti:{i}"),
            RuleSpec::Veto(r) => write!(f, "veto:{r}"),
            RuleSpec::Borda => f.write_str("borda"),
            RuleSpec::Constant(a) => write!(f, "constant:{a}"),
        }
    }
}

pub enum BuiltRule<T: Scalar> {
    Welfare(Box<dyn WelfareRule<T>>),
    Choice(Box<dyn ChoiceRule<T>>),
}

impl<T: Scalar> BuiltRule<T> {
    pub fn name(&self) -> String {
        match self {
            BuiltRule::Welfare(r) => r.name(),
            BuiltRule::Choice(r) => r.name(),
        }
    }

    pub fn welfare(&self) -> Option<&dyn WelfareRule<T>> {
        match self {
            BuiltRule::Welfare(r) => Some(r.as_ref()),
            BuiltRule::Choice(_) => None,
        }
    }
}

impl RuleSpec {
    /// Whether the rule outputs ranking densities.
    pub fn is_welfare(&self) -> bool {
        !matches!(self, RuleSpec::Qcvne | RuleSpec::Constant(_))
    }

    pub fn uses_delta(&self) -> bool {
        matches!(self, RuleSpec::Qcv | RuleSpec::Qcvne)
    }

    fn check_voter(i: usize, voters: usize) -> Result<usize> {
        if i > voters {
            return Err(Error::InvalidConfig(format!(
                "voter {i} out of range for {voters} voters"
            )));
        }
        Ok(i - 1)
    }

    pub fn build<T: Scalar>(
        &self,
        alternatives: &AlternativeSet,
        voters: usize,
        params: &QcvParams<T>,
    ) -> Result<BuiltRule<T>> {
        if self.uses_delta() {
            params.check_alternatives(alternatives.len())?;
        }
        Ok(match self {
            RuleSpec::Qcv => BuiltRule::Welfare(Box::new(Qcv::new(params.clone()))),
            RuleSpec::Qcvne => BuiltRule::Choice(Box::new(qcvne_rule(params.clone()))),
            RuleSpec::Dictator(i) => {
                BuiltRule::Welfare(Box::new(dictator_rule(Self::check_voter(*i, voters)?)))
            }
            RuleSpec::Anti(i) => BuiltRule::Welfare(Box::new(ReverseDictator {
                voter: Self::check_voter(*i, voters)?,
            })),
            RuleSpec::Veto(r) => {
                let r_star = alternatives.parse_ranking(r)?;
                BuiltRule::Welfare(Box::new(veto_rule(alternatives, r_star)?))
            }
            RuleSpec::Borda => BuiltRule::Welfare(Box::new(Borda {
                eps: params.eps.clone(),
                ..Borda::default()
            })),
            RuleSpec::Constant(a) => {
                let winner = alternatives
                    .index_of(a)
                    .map_err(|_| Error::InvalidConfig(format!("unknown alternative {a:?}")))?;
                BuiltRule::Choice(Box::new(ConstantChoice::new(alternatives.clone(), winner)?))
            }
        })
    }

    /// The rule as a choice rule, composing welfare rules with the natural
    /// extension.
    pub fn build_choice<T: Scalar>(
        &self,
        alternatives: &AlternativeSet,
        voters: usize,
        params: &QcvParams<T>,
    ) -> Result<Box<dyn ChoiceRule<T>>> {
        if *self == RuleSpec::Qcv {
            return RuleSpec::Qcvne.build_choice(alternatives, voters, params);
        }
        Ok(match self.build(alternatives, voters, params)? {
            BuiltRule::Choice(rule) => rule,
            BuiltRule::Welfare(rule) => Box::new(compose(NaturalExtension, rule)),
        })
    }

    /// The verdict this rule should earn on `axiom`; `None` when either is fine.
    pub fn expected(&self, axiom: &str) -> Option<Verdict> {
        use Verdict::{Falsified, Holds, HoldsOnSample};
        let sample = Some(HoldsOnSample);
        match self {
            RuleSpec::Qcv | RuleSpec::Qcvne => match axiom {
                "onto" => Some(Holds),
                "dictatorship" | "dictatorship-sharp" | "dictatorship-unsharp" => Some(Falsified),
                "qic" | "unanimity-sharp" | "unanimity-unsharp" | "iia-sharp" | "iia-unsharp" => {
                    sample
                }
                "qic-preservation" | "sharp-dictatorship-preservation" => sample,
                _ => None,
            },
            RuleSpec::Dictator(_) => match axiom {
                "onto" => Some(Holds),
                _ => sample,
            },
            RuleSpec::Anti(_) => match axiom {
                "qic" | "unanimity-sharp" | "unanimity-unsharp" => Some(Falsified),
                "dictatorship" | "dictatorship-sharp" | "dictatorship-unsharp" => Some(Falsified),
                "iia-sharp" | "iia-unsharp" => sample,
                _ => None,
            },
            RuleSpec::Veto(_) => match axiom {
                "qic" => Some(Falsified),
                "unanimity-sharp" | "unanimity-unsharp" => sample,
                _ => None,
            },
            RuleSpec::Borda => match axiom {
                "iia-sharp" => Some(Falsified),
                "unanimity-sharp" => sample,
                _ => None,
            },
            RuleSpec::Constant(_) => match axiom {
                "onto" | "dictatorship" | "dictatorship-sharp" | "dictatorship-unsharp" => {
                    Some(Falsified)
                }
                "qic" => sample,
                _ => None,
            },
        }
    }

    pub fn expected_suite(&self, suite: &str) -> Option<SuiteVerdict> {
        match (self, suite) {
            (RuleSpec::Qcv, _) => Some(SuiteVerdict::BypassDemonstrated),
            (RuleSpec::Qcvne, "gs-suite") => Some(SuiteVerdict::BypassDemonstrated),
            (RuleSpec::Veto(_), "arrow-suite") => None,
            _ => Some(SuiteVerdict::NotBypassed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in [
            "qcv",
            "qcvne",
            "dictator:2",
            "anti:1",
            "veto:a>b>c",
            "borda",
            "constant:b",
        ] {
            assert_eq!(name.parse::<RuleSpec>().unwrap().to_string(), name);
        }
        for bad in ["dictator:0", "dictator", "qcv:1", "majority", "veto:"] {
            assert_eq!(
                bad.parse::<RuleSpec>().unwrap_err().kind(),
                "invalid-config",
                "{bad}"
            );
        }
    }

    #[test]
    fn built_names() {
        let alts = AlternativeSet::letters(3).unwrap();
        let params = QcvParams::<f64>::for_alternatives(3);
        let build = |s: &str| {
            s.parse::<RuleSpec>()
                .unwrap()
                .build(&alts, 3, &params)
                .unwrap()
                .name()
        };
        assert_eq!(build("dictator:1"), "dictator:1");
        assert_eq!(build("veto:b>a>c"), "veto:b>a>c");
        assert_eq!(build("qcvne"), "qcvne");
        let choice = RuleSpec::Qcv.build_choice(&alts, 3, &params).unwrap();
        assert_eq!(choice.name(), "qcvne");
        let composed = RuleSpec::Dictator(1)
            .build_choice(&alts, 3, &params)
            .unwrap();
        assert_eq!(composed.name(), "natural∘dictator:1");
    }

    #[test]
    fn bad_builds() {
        let alts = AlternativeSet::letters(3).unwrap();
        let params = QcvParams::<f64>::for_alternatives(3);
        assert!(RuleSpec::Dictator(4).build(&alts, 3, &params).is_err());
        assert!(RuleSpec::Constant("z".into())
            .build(&alts, 3, &params)
            .is_err());
        let wide = QcvParams::new(0.2, 1e-9).unwrap();
        assert_eq!(
            RuleSpec::Qcv.build(&alts, 3, &wide).err().unwrap().kind(),
            "invalid-params"
        );
    }
}
