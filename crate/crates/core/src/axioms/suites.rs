//! Bundles of checks against the quantum Arrow and Gibbard-Satterthwaite
//! statements.

use super::checks::{
    check_dictatorship, check_iia, check_non_dictatorship, check_onto, check_qic, check_unanimity,
    CheckConfig, Clock,
};
use super::manipulation::RuleRef;
use super::report::{AxiomReport, SuiteReport, SuiteVerdict, Verdict};
use crate::choice::ChoiceRule;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::welfare::WelfareRule;

const PASSES: [Verdict; 2] = [Verdict::Holds, Verdict::HoldsOnSample];

fn require_three<T: Scalar>(cfg: &CheckConfig<T>) -> Result<()> {
    if cfg.alternatives < 3 {
        return Err(Error::InvalidConfig(format!(
            "suites need at least 3 alternatives, got {}",
            cfg.alternatives
        )));
    }
    cfg.validate()
}

fn bundle<T: Scalar>(
    suite: &str,
    rule: String,
    components: Vec<(AxiomReport<T>, Vec<Verdict>)>,
    clock: &Clock,
) -> SuiteReport<T> {
    let verdict = if components
        .iter()
        .all(|(r, needed)| needed.contains(&r.verdict))
    {
        SuiteVerdict::BypassDemonstrated
    } else {
        SuiteVerdict::NotBypassed
    };
    SuiteReport {
        suite: suite.into(),
        rule,
        verdict,
        components,
        elapsed_ms: clock.stop(),
    }
}

/// Sharp and unsharp unanimity, sharp and unsharp IIA, and non-dictatorship.
pub fn run_arrow_suite<T: Scalar>(
    rule: &dyn WelfareRule<T>,
    cfg: &CheckConfig<T>,
) -> Result<SuiteReport<T>> {
    require_three(cfg)?;
    let clock = Clock::start(cfg.timing);
    let components = vec![
        (check_unanimity(rule, cfg, true)?, PASSES.to_vec()),
        (check_unanimity(rule, cfg, false)?, PASSES.to_vec()),
        (check_iia(rule, cfg, true)?, PASSES.to_vec()),
        (check_iia(rule, cfg, false)?, PASSES.to_vec()),
        (
            check_non_dictatorship(RuleRef::Welfare(rule), cfg)?,
            vec![Verdict::Falsified],
        ),
    ];
    Ok(bundle("arrow-suite", rule.name(), components, &clock))
}

/// Incentive compatibility, onto, and neither sharp nor unsharp dictatorship.
pub fn run_gs_suite<T: Scalar>(
    rule: &dyn ChoiceRule<T>,
    cfg: &CheckConfig<T>,
) -> Result<SuiteReport<T>> {
    require_three(cfg)?;
    let clock = Clock::start(cfg.timing);
    let r = RuleRef::Choice(rule);
    let components = vec![
        (check_qic(r, cfg)?, PASSES.to_vec()),
        (check_onto(rule, cfg)?, vec![Verdict::Holds]),
        (check_dictatorship(r, cfg, true)?, vec![Verdict::Falsified]),
        (check_dictatorship(r, cfg, false)?, vec![Verdict::Falsified]),
    ];
    Ok(bundle("gs-suite", rule.name(), components, &clock))
}
