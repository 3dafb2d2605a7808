//! Sample-based checks of individual axioms.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::family::{CandidateFamily, FamilySpec};
use super::manipulation::{find_manipulations, Clause, Observer, RuleRef, Target};
use super::report::{
    status, AxiomReport, DictatorshipWitness, Direction, IiaWitness, OntoWitness, UnanimityWitness,
    Verdict, Witness, MAX_STORED_WITNESSES,
};
use super::sampler::ProfileSampler;
use crate::choice::ChoiceRule;
use crate::error::{Error, Result};
use crate::hilbert::{DensityOperator, ProfileState, RankingSpace, DEFAULT_MAX_ALTERNATIVES};
use crate::ranking::{AlternativeSet, Ranking};
use crate::scalar::Scalar;
use crate::welfare::WelfareRule;

/// Sampling and search settings shared by every check.
#[derive(Clone, Debug)]
pub struct CheckConfig<T> {
    pub alternatives: usize,
    pub voters: usize,
    pub trials: usize,
    pub seed: u64,
    pub family: FamilySpec,
    pub eps: T,
    /// Record wall-clock time in reports. Off keeps reports byte-stable.
    pub timing: bool,
    pub max_alternatives: usize,
}

impl<T: Scalar> CheckConfig<T> {
    pub fn new(alternatives: usize, voters: usize) -> Self {
        Self {
            alternatives,
            voters,
            trials: 200,
            seed: 0,
            family: FamilySpec::auto(),
            eps: T::default_eps(),
            timing: false,
            max_alternatives: DEFAULT_MAX_ALTERNATIVES,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_family(mut self, family: FamilySpec) -> Self {
        self.family = family;
        self
    }

    pub fn with_eps(mut self, eps: T) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn with_max_alternatives(mut self, cap: usize) -> Self {
        self.max_alternatives = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.voters == 0 {
            return Err(Error::InvalidConfig(
                "at least one voter is required".into(),
            ));
        }
        if self.alternatives < 2 {
            return Err(Error::InvalidConfig(
                "at least two alternatives are required".into(),
            ));
        }
        if self.eps < T::zero() {
            return Err(Error::InvalidConfig("eps must be non-negative".into()));
        }
        Ok(())
    }

    pub fn space(&self) -> Result<Arc<RankingSpace>> {
        self.validate()?;
        RankingSpace::with_max_alternatives(
            AlternativeSet::letters(self.alternatives)?,
            self.max_alternatives,
        )
    }

    pub fn sampler(&self) -> Result<ProfileSampler> {
        Ok(ProfileSampler::new(self.space()?, self.voters, self.seed))
    }

    fn family_text(&self) -> String {
        self.family.resolve(self.alternatives).to_string()
    }

    pub(crate) fn report(&self, axiom: &str, rule: String, trials: usize) -> AxiomReport<T> {
        AxiomReport {
            axiom: axiom.into(),
            rule,
            verdict: Verdict::HoldsOnSample,
            alternatives: self.alternatives,
            voters: self.voters,
            trials,
            seed: self.seed,
            family: None,
            detail: Map::new(),
            witnesses: Vec::new(),
            witness_count: 0,
            elapsed_ms: None,
        }
    }
}

pub(crate) struct Clock(Option<Instant>);

impl Clock {
    pub(crate) fn start(timing: bool) -> Self {
        Clock(timing.then(Instant::now))
    }

    pub(crate) fn stop(&self) -> Option<u64> {
        self.0.map(|t| t.elapsed().as_millis() as u64)
    }
}

/// Runs `f` on every trial in parallel; results and the first error come
/// back in trial order.
fn per_trial<R: Send>(
    trials: usize,
    f: impl Fn(usize) -> Result<R> + Sync + Send,
) -> Result<Vec<R>> {
    let out: Vec<Result<R>> = (0..trials).into_par_iter().map(f).collect();
    out.into_iter().collect()
}

fn store<T: Scalar>(report: &mut AxiomReport<T>, witnesses: impl IntoIterator<Item = Witness<T>>) {
    for w in witnesses {
        report.witness_count += 1;
        if report.witnesses.len() < MAX_STORED_WITNESSES {
            report.witnesses.push(w);
        }
    }
}

fn sample_verdict(count: usize) -> Verdict {
    if count == 0 {
        Verdict::HoldsOnSample
    } else {
        Verdict::Falsified
    }
}

fn variant(sharp: bool) -> &'static str {
    if sharp {
        "sharp"
    } else {
        "unsharp"
    }
}

/// Hunts for strategic manipulations over sampled profiles, every voter and
/// every target.
pub fn check_qic<T: Scalar>(rule: RuleRef<'_, T>, cfg: &CheckConfig<T>) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let space = cfg.space()?;
    let family = CandidateFamily::build(&space, &cfg.family, cfg.seed)?;
    let sampler = ProfileSampler::new(space.clone(), cfg.voters, cfg.seed);
    let found = per_trial(cfg.trials, |t| {
        let p = sampler.profile::<T>(t)?;
        let obs = Observer::new(rule, &space)?;
        let mut out = Vec::new();
        for voter in 0..cfg.voters {
            out.extend(find_manipulations(
                &obs,
                &p,
                voter,
                &family.ballots,
                &cfg.eps,
            )?);
        }
        Ok(out)
    })?;
    let mut report = cfg.report("qic", rule.name(), cfg.trials);
    report.family = Some(cfg.family_text());
    let mut by_clause = Map::new();
    for clause in Clause::ALL {
        let n = found
            .iter()
            .flatten()
            .filter(|w| w.clause == clause)
            .count();
        by_clause.insert(clause.as_str().into(), json!(n));
    }
    store(
        &mut report,
        found.into_iter().flatten().map(Witness::Manipulation),
    );
    report.verdict = sample_verdict(report.witness_count);
    report
        .detail
        .insert("family_size".into(), json!(family.len()));
    report
        .detail
        .insert("searches".into(), json!(cfg.trials * cfg.voters));
    report
        .detail
        .insert("by_clause".into(), Value::Object(by_clause));
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// First violation of each direction of the dictatorship equivalence for
/// `voter` on one profile.
fn dictatorship_violations<T: Scalar>(
    obs: &Observer<'_, T>,
    p: &ProfileState<T>,
    society: &[T],
    voter: usize,
    sharp: bool,
    eps: &T,
) -> Result<Vec<DictatorshipWitness<T>>> {
    let ballot = obs.ballot(&p.partial_ballot(voter)?)?;
    let mut out: Vec<DictatorshipWitness<T>> = Vec::new();
    for (j, (v, s)) in ballot.iter().zip(society).enumerate() {
        let (vs, ss) = (status(v, sharp, eps), status(s, sharp, eps));
        let direction = match (vs, ss) {
            (true, false) => Direction::VoterWithoutSociety,
            (false, true) => Direction::SocietyWithoutVoter,
            _ => continue,
        };
        if out.iter().any(|w| w.direction == direction) {
            continue;
        }
        out.push(DictatorshipWitness {
            voter,
            sharp,
            direction,
            target: obs.targets()[j],
            voter_value: v.clone(),
            society_value: s.clone(),
            profile: p.clone(),
        });
    }
    Ok(out)
}

/// Per trial, per voter: the dictatorship violations found.
fn dictatorship_sample<T: Scalar>(
    rule: RuleRef<'_, T>,
    cfg: &CheckConfig<T>,
    sharp: bool,
) -> Result<Vec<Vec<Vec<DictatorshipWitness<T>>>>> {
    let sampler = cfg.sampler()?;
    let space = sampler.space().clone();
    per_trial(cfg.trials, |t| {
        let p = sampler.profile::<T>(t)?;
        let obs = Observer::new(rule, &space)?;
        let society = obs.society(&p)?;
        (0..cfg.voters)
            .map(|i| dictatorship_violations(&obs, &p, &society, i, sharp, &cfg.eps))
            .collect()
    })
}

/// Tries to eliminate every voter as a sharp or unsharp dictator, searching
/// both directions of the equivalence.
pub fn check_dictatorship<T: Scalar>(
    rule: RuleRef<'_, T>,
    cfg: &CheckConfig<T>,
    sharp: bool,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let sample = dictatorship_sample(rule, cfg, sharp)?;
    let mut report = cfg.report(
        &format!("dictatorship-{}", variant(sharp)),
        rule.name(),
        cfg.trials,
    );
    let mut eliminated = Vec::new();
    let mut surviving = Vec::new();
    let mut directions = Map::new();
    let mut witnesses = Vec::new();
    for voter in 0..cfg.voters {
        let mut first: Vec<DictatorshipWitness<T>> = Vec::new();
        for w in sample.iter().flat_map(|trial| &trial[voter]) {
            if !first.iter().any(|f| f.direction == w.direction) {
                first.push(w.clone());
            }
        }
        if first.is_empty() {
            surviving.push(voter + 1);
            continue;
        }
        eliminated.push(voter + 1);
        let broke: Vec<Value> = first.iter().map(|w| json!(w.direction.as_str())).collect();
        directions.insert((voter + 1).to_string(), Value::Array(broke));
        witnesses.extend(first.into_iter().map(Witness::Dictatorship));
    }
    report.verdict = if surviving.is_empty() {
        Verdict::Falsified
    } else {
        Verdict::HoldsOnSample
    };
    report.detail.insert("eliminated".into(), json!(eliminated));
    report.detail.insert("surviving".into(), json!(surviving));
    report
        .detail
        .insert("directions".into(), Value::Object(directions));
    store(&mut report, witnesses);
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// Sharp and unsharp dictatorship together: falsified only when both are.
pub fn check_non_dictatorship<T: Scalar>(
    rule: RuleRef<'_, T>,
    cfg: &CheckConfig<T>,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let sharp = check_dictatorship(rule, cfg, true)?;
    let unsharp = check_dictatorship(rule, cfg, false)?;
    let mut report = cfg.report("dictatorship", rule.name(), cfg.trials);
    report.verdict = if sharp.verdict == Verdict::Falsified && unsharp.verdict == Verdict::Falsified
    {
        Verdict::Falsified
    } else {
        Verdict::HoldsOnSample
    };
    report.detail.insert("sharp".into(), sub_detail(&sharp));
    report.detail.insert("unsharp".into(), sub_detail(&unsharp));
    store(
        &mut report,
        sharp.witnesses.into_iter().chain(unsharp.witnesses),
    );
    report.elapsed_ms = clock.stop();
    Ok(report)
}

fn sub_detail<T: Scalar>(r: &AxiomReport<T>) -> Value {
    let mut out = r.detail.clone();
    out.insert("verdict".into(), json!(r.verdict.as_str()));
    Value::Object(out)
}

/// The unanimous basis profile whose shared ranking puts `a` first.
pub fn unanimous_topped_by<T: Scalar>(
    space: &Arc<RankingSpace>,
    voters: usize,
    a: usize,
) -> Result<ProfileState<T>> {
    let order: Vec<usize> = std::iter::once(a)
        .chain((0..space.m()).filter(|&b| b != a))
        .collect();
    let ranking = Ranking::new(order)?;
    let ballot = DensityOperator::point_mass(space.clone(), &ranking)?;
    ProfileState::product(vec![ballot; voters])
}

/// Every alternative must be the sure outcome of the unanimous profile
/// topped by it.
pub fn check_onto<T: Scalar>(
    rule: &dyn ChoiceRule<T>,
    cfg: &CheckConfig<T>,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let space = cfg.space()?;
    let m = space.m();
    let mut report = cfg.report("onto", rule.name(), m);
    let mut missing = Vec::new();
    let mut witnesses = Vec::new();
    for a in 0..m {
        let p = unanimous_topped_by::<T>(&space, cfg.voters, a)?;
        let output = rule.evaluate(&p)?;
        if !output.is_point_mass_on(a, &cfg.eps) {
            missing.push(space.alternatives().name(a).to_string());
            witnesses.push(Witness::Onto(OntoWitness {
                alternative: a,
                output,
                profile: p,
            }));
        }
    }
    report.verdict = if missing.is_empty() {
        Verdict::Holds
    } else {
        Verdict::Falsified
    };
    report
        .detail
        .insert("achieved".into(), json!(m - missing.len()));
    report.detail.insert("of".into(), json!(m));
    report.detail.insert("missing".into(), json!(missing));
    store(&mut report, witnesses);
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// Wherever every voter holds a pair with certainty (sharp) or some support
/// (unsharp), society must do the same.
pub fn check_unanimity<T: Scalar>(
    rule: &dyn WelfareRule<T>,
    cfg: &CheckConfig<T>,
    sharp: bool,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let sampler = cfg.sampler()?;
    let space = sampler.space().clone();
    let found = per_trial(cfg.trials, |t| {
        let p = sampler.profile::<T>(t)?;
        let obs = Observer::new(RuleRef::Welfare(rule), &space)?;
        let ballots = (0..cfg.voters)
            .map(|i| obs.ballot(&p.partial_ballot(i)?))
            .collect::<Result<Vec<_>>>()?;
        let mut society: Option<Vec<T>> = None;
        let mut applicable = 0usize;
        let mut out = Vec::new();
        for (j, target) in obs.targets().iter().enumerate() {
            if !ballots.iter().all(|b| status(&b[j], sharp, &cfg.eps)) {
                continue;
            }
            applicable += 1;
            if society.is_none() {
                society = Some(obs.society(&p)?);
            }
            let s = &society.as_ref().expect("society computed")[j];
            if !status(s, sharp, &cfg.eps) {
                let Target::Pair(x, y) = *target else {
                    continue;
                };
                out.push(Witness::Unanimity(UnanimityWitness {
                    sharp,
                    pair: (x, y),
                    voter_values: ballots.iter().map(|b| b[j].clone()).collect(),
                    society_value: s.clone(),
                    profile: p.clone(),
                }));
            }
        }
        Ok((applicable, out))
    })?;
    let mut report = cfg.report(
        &format!("unanimity-{}", variant(sharp)),
        rule.name(),
        cfg.trials,
    );
    let applicable: usize = found.iter().map(|(n, _)| n).sum();
    store(&mut report, found.into_iter().flat_map(|(_, w)| w));
    report.verdict = sample_verdict(report.witness_count);
    report.detail.insert("applicable".into(), json!(applicable));
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// Society's status on a pair must transfer between two profiles whose
/// voters agree ballot by ballot on that pair.
pub fn check_iia<T: Scalar>(
    rule: &dyn WelfareRule<T>,
    cfg: &CheckConfig<T>,
    sharp: bool,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let sampler = cfg.sampler()?;
    let space = sampler.space().clone();
    let found = per_trial(cfg.trials, |t| {
        let (p, twin, (x, y)) = sampler.iia_pair::<T>(t)?;
        let obs = Observer::with_targets(RuleRef::Welfare(rule), &space, vec![Target::Pair(x, y)])?;
        let s = obs.society(&p)?.remove(0);
        let u = obs.society(&twin)?.remove(0);
        if status(&s, sharp, &cfg.eps) == status(&u, sharp, &cfg.eps) {
            return Ok(None);
        }
        Ok(Some(Witness::Iia(IiaWitness {
            sharp,
            pair: (x, y),
            society_value: s,
            twin_society_value: u,
            profile: p,
            twin,
        })))
    })?;
    let mut report = cfg.report(&format!("iia-{}", variant(sharp)), rule.name(), cfg.trials);
    store(&mut report, found.into_iter().flatten());
    report.verdict = sample_verdict(report.witness_count);
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// Wherever the welfare rule admits no manipulation by a voter on any pair,
/// the composed choice rule must admit none on any alternative.
pub fn check_qic_preservation<T: Scalar>(
    welfare: &dyn WelfareRule<T>,
    choice: &dyn ChoiceRule<T>,
    cfg: &CheckConfig<T>,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let space = cfg.space()?;
    let family = CandidateFamily::build(&space, &cfg.family, cfg.seed)?;
    let sampler = ProfileSampler::new(space.clone(), cfg.voters, cfg.seed);
    let found = per_trial(cfg.trials, |t| {
        let p = sampler.profile::<T>(t)?;
        let wobs = Observer::new(RuleRef::Welfare(welfare), &space)?;
        let cobs = Observer::new(RuleRef::Choice(choice), &space)?;
        let mut clean = 0usize;
        let mut out = Vec::new();
        for voter in 0..cfg.voters {
            if !find_manipulations(&wobs, &p, voter, &family.ballots, &cfg.eps)?.is_empty() {
                continue;
            }
            clean += 1;
            let lies = find_manipulations(&cobs, &p, voter, &family.ballots, &cfg.eps)?;
            out.extend(lies.into_iter().map(Witness::Preservation));
        }
        Ok((clean, out))
    })?;
    let mut report = cfg.report("qic-preservation", choice.name(), cfg.trials);
    report.family = Some(cfg.family_text());
    let clean: usize = found.iter().map(|(n, _)| n).sum();
    store(&mut report, found.into_iter().flat_map(|(_, w)| w));
    report.verdict = sample_verdict(report.witness_count);
    report
        .detail
        .insert("welfare".into(), json!(welfare.name()));
    report
        .detail
        .insert("triples".into(), json!(cfg.trials * cfg.voters));
    report.detail.insert("welfare_clean".into(), json!(clean));
    report.elapsed_ms = clock.stop();
    Ok(report)
}

/// Every voter ruled out as a sharp dictator of the welfare rule must also be
/// ruled out for the composed choice rule, preferably on the same profile.
pub fn check_sharp_dictatorship_preservation<T: Scalar>(
    welfare: &dyn WelfareRule<T>,
    choice: &dyn ChoiceRule<T>,
    cfg: &CheckConfig<T>,
) -> Result<AxiomReport<T>> {
    let clock = Clock::start(cfg.timing);
    let wsample = dictatorship_sample(RuleRef::Welfare(welfare), cfg, true)?;
    let csample = dictatorship_sample(RuleRef::Choice(choice), cfg, true)?;
    let mut report = cfg.report("sharp-dictatorship-preservation", choice.name(), cfg.trials);
    let (mut carried, mut flagged) = (0usize, 0usize);
    let mut unresolved = Vec::new();
    let mut witnesses = Vec::new();
    for voter in 0..cfg.voters {
        let mut eliminated = false;
        for (w, c) in wsample.iter().zip(&csample) {
            if w[voter].is_empty() {
                continue;
            }
            eliminated = true;
            if c[voter].is_empty() {
                flagged += 1;
            } else {
                carried += 1;
            }
        }
        let choice_eliminated = csample.iter().any(|c| !c[voter].is_empty());
        if eliminated && !choice_eliminated {
            unresolved.push(voter + 1);
            if let Some(w) = wsample.iter().find_map(|w| w[voter].first()) {
                witnesses.push(Witness::Dictatorship(w.clone()));
            }
        }
    }
    report.verdict = if unresolved.is_empty() {
        Verdict::HoldsOnSample
    } else {
        Verdict::Falsified
    };
    report
        .detail
        .insert("welfare".into(), json!(welfare.name()));
    report.detail.insert("carried".into(), json!(carried));
    report.detail.insert("flagged".into(), json!(flagged));
    report
        .detail
        .insert("unresolved_voters".into(), json!(unresolved));
    store(&mut report, witnesses);
    report.elapsed_ms = clock.stop();
    Ok(report)
}
