//! Strategic-manipulation witness search.

use serde::Serialize;

use super::preference::{Preference, PreferenceKind};
use crate::choice::ChoiceRule;
use crate::error::Result;
use crate::hilbert::{DensityOperator, ProfileState, Projector, RankingSpace};
use crate::ranking::Alternative;
use crate::scalar::Scalar;
use crate::welfare::WelfareRule;

/// What a preference or a society value is measured on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// `S^{x≻y}`.
    Pair(Alternative, Alternative),
    /// `S^a`, or `|a⟩` for a choice outcome.
    Alternative(Alternative),
}

impl Target {
    pub fn label(&self, space: &RankingSpace) -> String {
        let names = space.alternatives();
        match *self {
            Target::Pair(x, y) => format!("{}>{}", names.name(x), names.name(y)),
            Target::Alternative(a) => names.name(a).to_string(),
        }
    }
}

/// A rule under test, welfare or choice.
pub enum RuleRef<'a, T> {
    Welfare(&'a dyn WelfareRule<T>),
    Choice(&'a dyn ChoiceRule<T>),
}

impl<T> Clone for RuleRef<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for RuleRef<'_, T> {}

impl<T: Scalar> RuleRef<'_, T> {
    pub fn name(&self) -> String {
        match self {
            RuleRef::Welfare(r) => r.name(),
            RuleRef::Choice(r) => r.name(),
        }
    }

    pub fn is_choice(&self) -> bool {
        matches!(self, RuleRef::Choice(_))
    }
}

/// Reads a rule's output and a voter's ballot on a fixed list of targets.
pub struct Observer<'a, T> {
    rule: RuleRef<'a, T>,
    targets: Vec<Target>,
    projectors: Vec<Projector>,
}

impl<'a, T: Scalar> Observer<'a, T> {
    /// Every ordered pair for welfare rules, every alternative for choice rules.
    pub fn new(rule: RuleRef<'a, T>, space: &RankingSpace) -> Result<Self> {
        let targets = if rule.is_choice() {
            (0..space.m()).map(Target::Alternative).collect()
        } else {
            space
                .ordered_pairs()
                .into_iter()
                .map(|(x, y)| Target::Pair(x, y))
                .collect()
        };
        Self::with_targets(rule, space, targets)
    }

    pub fn with_targets(
        rule: RuleRef<'a, T>,
        space: &RankingSpace,
        targets: Vec<Target>,
    ) -> Result<Self> {
        let projectors = targets
            .iter()
            .map(|t| match *t {
                Target::Pair(x, y) => space.pair_projector(x, y),
                Target::Alternative(a) => space.winner_projector(a),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rule,
            targets,
            projectors,
        })
    }

    pub fn rule(&self) -> RuleRef<'a, T> {
        self.rule
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    /// Society's value on each target.
    pub fn society(&self, p: &ProfileState<T>) -> Result<Vec<T>> {
        match self.rule {
            RuleRef::Welfare(rule) => self.ballot(&rule.evaluate(p)?),
            RuleRef::Choice(rule) => {
                let alpha = rule.evaluate(p)?;
                Ok(self
                    .targets
                    .iter()
                    .map(|t| match *t {
                        Target::Alternative(a) => alpha.probability(a).clone(),
                        Target::Pair(..) => T::zero(),
                    })
                    .collect())
            }
        }
    }

    /// A ranking density's support on each target.
    pub fn ballot(&self, rho: &DensityOperator<T>) -> Result<Vec<T>> {
        self.projectors
            .iter()
            .map(|p| rho.support_probability(p))
            .collect()
    }
}

/// Which manipulation pattern fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// Society's support `< 1` truthfully, `= 1` after the lie.
    StrongPositive,
    /// Society's support `> 0` truthfully, `= 0` after the lie.
    StrongNegative,
    /// Society's support `= 0` truthfully, `> 0` after the lie.
    Weak,
}

impl Clause {
    pub const ALL: [Clause; 3] = [Clause::StrongPositive, Clause::StrongNegative, Clause::Weak];

    pub fn as_str(&self) -> &'static str {
        match self {
            Clause::StrongPositive => "strong-positive",
            Clause::StrongNegative => "strong-negative",
            Clause::Weak => "weak",
        }
    }

    /// Clauses open to a voter with this preference.
    pub fn available<T: Scalar>(pref: &Preference<T>) -> Vec<Clause> {
        let mut out = Vec::new();
        match pref.kind {
            PreferenceKind::StrongPositive => out.push(Clause::StrongPositive),
            PreferenceKind::StrongNegative => out.push(Clause::StrongNegative),
            PreferenceKind::Weak | PreferenceKind::None => {}
        }
        if pref.is_weak() {
            out.push(Clause::Weak);
        }
        out
    }

    pub fn before<T: Scalar>(&self, society: &T, eps: &T) -> bool {
        match self {
            Clause::StrongPositive => *society < T::one() - eps.clone(),
            Clause::StrongNegative => *society > *eps,
            Clause::Weak => *society <= *eps,
        }
    }

    pub fn after<T: Scalar>(&self, society: &T, eps: &T) -> bool {
        match self {
            Clause::StrongPositive => *society >= T::one() - eps.clone(),
            Clause::StrongNegative => *society <= *eps,
            Clause::Weak => *society > *eps,
        }
    }
}

/// A dishonest ballot that flips society's support status the voter's way.
#[derive(Clone, Debug)]
pub struct ManipulationWitness<T> {
    /// 0-based.
    pub voter: usize,
    pub clause: Clause,
    pub target: Target,
    pub voter_support: T,
    pub dishonest_ballot: DensityOperator<T>,
    pub truthful_society: T,
    pub dishonest_society: T,
    pub profile: ProfileState<T>,
}

fn agrees<T: Scalar>(a: &T, b: &T, eps: &T) -> bool {
    let tol = crate::scalar::max_of(eps.clone(), T::from_f64_lossy(1e-12));
    (a.clone() - b.clone()).abs() <= tol
}

impl<T: Scalar> ManipulationWitness<T> {
    /// Replays both evaluations from scratch and checks the clause pattern.
    pub fn verify(&self, rule: RuleRef<'_, T>, eps: &T) -> Result<bool> {
        let space = self.profile.space().clone();
        let obs = Observer::with_targets(rule, &space, vec![self.target])?;
        let truthful_ballot = self.profile.partial_ballot(self.voter)?;
        let support = obs.ballot(&truthful_ballot)?.remove(0);
        let pref = Preference::from_support(support.clone(), eps);
        if !Clause::available(&pref).contains(&self.clause) {
            return Ok(false);
        }
        let before = obs.society(&self.profile)?.remove(0);
        let lie = self
            .profile
            .with_ballot(self.voter, self.dishonest_ballot.clone())?;
        let after = obs.society(&lie)?.remove(0);
        Ok(agrees(&support, &self.voter_support, eps)
            && agrees(&before, &self.truthful_society, eps)
            && agrees(&after, &self.dishonest_society, eps)
            && self.clause.before(&before, eps)
            && self.clause.after(&after, eps))
    }
}

/// Searches `family` for lies by `voter`, at most one witness per
/// (target, clause), in target then clause order.
pub fn find_manipulations<T: Scalar>(
    obs: &Observer<'_, T>,
    p: &ProfileState<T>,
    voter: usize,
    family: &[DensityOperator<T>],
    eps: &T,
) -> Result<Vec<ManipulationWitness<T>>> {
    let truthful = p.partial_ballot(voter)?;
    let supports = obs.ballot(&truthful)?;
    let society = obs.society(p)?;
    let mut open: Vec<(usize, Clause)> = Vec::new();
    for (j, t) in supports.iter().enumerate() {
        let pref = Preference::from_support(t.clone(), eps);
        for clause in Clause::available(&pref) {
            if clause.before(&society[j], eps) {
                open.push((j, clause));
            }
        }
    }
    let mut found: Vec<Option<ManipulationWitness<T>>> = vec![None; open.len()];
    let mut remaining = open.len();
    for lie in family {
        if remaining == 0 {
            break;
        }
        let altered = p.with_ballot(voter, lie.clone())?;
        let after = obs.society(&altered)?;
        for (slot, &(j, clause)) in found.iter_mut().zip(&open) {
            if slot.is_none() && clause.after(&after[j], eps) {
                *slot = Some(ManipulationWitness {
                    voter,
                    clause,
                    target: obs.targets()[j],
                    voter_support: supports[j].clone(),
                    dishonest_ballot: lie.clone(),
                    truthful_society: society[j].clone(),
                    dishonest_society: after[j].clone(),
                    profile: p.clone(),
                });
                remaining -= 1;
            }
        }
    }
    Ok(found.into_iter().flatten().collect())
}

/// First lie in `family` letting voter `i` manipulate `E` on `x ≻ y`.
pub fn welfare_manipulation_witness<T: Scalar>(
    rule: &dyn WelfareRule<T>,
    p: &ProfileState<T>,
    voter: usize,
    x: Alternative,
    y: Alternative,
    family: &[DensityOperator<T>],
    eps: &T,
) -> Result<Option<ManipulationWitness<T>>> {
    let obs = Observer::with_targets(RuleRef::Welfare(rule), p.space(), vec![Target::Pair(x, y)])?;
    Ok(find_manipulations(&obs, p, voter, family, eps)?
        .into_iter()
        .next())
}

/// First lie in `family` letting voter `i` manipulate `ξ` on alternative `a`.
pub fn choice_manipulation_witness<T: Scalar>(
    rule: &dyn ChoiceRule<T>,
    p: &ProfileState<T>,
    voter: usize,
    a: Alternative,
    family: &[DensityOperator<T>],
    eps: &T,
) -> Result<Option<ManipulationWitness<T>>> {
    let obs = Observer::with_targets(
        RuleRef::Choice(rule),
        p.space(),
        vec![Target::Alternative(a)],
    )?;
    Ok(find_manipulations(&obs, p, voter, family, eps)?
        .into_iter()
        .next())
}
