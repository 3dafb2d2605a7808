//! Quantum social welfare functions: ballot profiles in, a density over
//! rankings out.
//!
//! [`Qcv`] is Quantum Condorcet Voting. It is defined on basis profiles
//! ([`qcv_basis`]) and extended to general profiles by mixing the per-tuple
//! outputs over the profile's diagonal support ([`convex_extension`]).

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{DensityOperator, ProfileState, RankingSpace};
use crate::ranking::{
    condorcet_scores_from_tally, AlternativeSet, ClassicalProfile, Pair, Ranking, WeakOrder,
};
use crate::scalar::Scalar;

/// Default cap on basis tuples enumerated by the convex extension.
pub const DEFAULT_SUPPORT_CAP: usize = 20_000;

/// A map `D(ℜ^{⊗n}) → D(ℜ)`.
pub trait WelfareRule<T: Scalar>: Send + Sync {
    fn name(&self) -> String;
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<DensityOperator<T>>;
}

impl<T: Scalar, R: WelfareRule<T> + ?Sized> WelfareRule<T> for Box<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<DensityOperator<T>> {
        (**self).evaluate(profile)
    }
}

impl<T: Scalar, R: WelfareRule<T> + ?Sized> WelfareRule<T> for Arc<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<DensityOperator<T>> {
        (**self).evaluate(profile)
    }
}

impl<T: Scalar, R: WelfareRule<T> + ?Sized> WelfareRule<T> for &R {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<DensityOperator<T>> {
        (**self).evaluate(profile)
    }
}

/// Spreading weight `δ` and support tolerance `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct QcvParams<T> {
    pub delta: T,
    pub eps: T,
}

impl<T: Scalar> QcvParams<T> {
    /// Requires `δ > 0` and `ε ≥ 0`; the `δ < 1/m²` bound is checked per profile.
    pub fn new(delta: T, eps: T) -> Result<Self> {
        if delta <= T::zero() {
            return Err(Error::InvalidParams(format!(
                "delta {delta:?} must be positive"
            )));
        }
        if eps < T::zero() {
            return Err(Error::InvalidParams(format!(
                "eps {eps:?} must be non-negative"
            )));
        }
        Ok(Self { delta, eps })
    }

    /// `δ = 1/20` for three alternatives, `1/(2m²)` otherwise.
    pub fn for_alternatives(m: usize) -> Self {
        let delta = if m == 3 {
            T::from_count(20).recip()
        } else {
            T::from_count(2 * m * m).recip()
        };
        Self {
            delta,
            eps: T::default_eps(),
        }
    }

    pub fn check_alternatives(&self, m: usize) -> Result<()> {
        let bound = T::from_count(m * m).recip();
        if self.delta >= bound {
            return Err(Error::InvalidParams(format!(
                "delta {:?} must be below 1/m² = 1/{} for m = {m}",
                self.delta,
                m * m
            )));
        }
        Ok(())
    }
}

/// Every intermediate of a basis-profile QCV run.
#[derive(Clone, Debug, PartialEq)]
pub struct QcvStages<T> {
    pub scores: Vec<usize>,
    pub weak_order: WeakOrder,
    pub encoded_any: Vec<Pair>,
    pub encoded_all: Vec<Pair>,
    pub sigma1: DensityOperator<T>,
    pub sigma2: DensityOperator<T>,
    pub sigma3: DensityOperator<T>,
}

fn encoded_pairs<T: Scalar>(p: &ProfileState<T>, keep: impl Fn(&[T]) -> bool) -> Result<Vec<Pair>> {
    let space = p.space();
    let ballots = (0..p.voters())
        .map(|i| p.partial_ballot(i))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (x, y) in space.ordered_pairs() {
        let proj = space.pair_projector(x, y)?;
        let supports = ballots
            .iter()
            .map(|b| b.support_probability(&proj))
            .collect::<Result<Vec<_>>>()?;
        if keep(&supports) {
            out.push((x, y));
        }
    }
    Ok(out)
}

/// Ordered pairs some voter supports with weight above `eps`.
pub fn encoded_pairs_any<T: Scalar>(p: &ProfileState<T>, eps: &T) -> Result<Vec<Pair>> {
    encoded_pairs(p, |t| t.iter().any(|t| *t > *eps))
}

/// Ordered pairs every voter holds with certainty, support at least `1 − eps`.
/// On basis profiles these are exactly the pairs all voters rank alike.
pub fn encoded_pairs_all<T: Scalar>(p: &ProfileState<T>, eps: &T) -> Result<Vec<Pair>> {
    let sure = T::one() - eps.clone();
    encoded_pairs(p, |t| t.iter().all(|t| *t >= sure))
}

/// `(1 − kδ)σ¹ + δ Σ Ω^{x≻y}` over the `k` given pairs.
pub fn minority_spread<T: Scalar>(
    sigma1: &DensityOperator<T>,
    pairs: &[Pair],
    delta: &T,
) -> Result<DensityOperator<T>> {
    let k = T::from_count(pairs.len());
    let keep = T::one() - k * delta.clone();
    if keep <= T::zero() {
        return Err(Error::InvalidParams(format!(
            "{} spread pairs with delta {delta:?} leave no weight for the Condorcet state",
            pairs.len()
        )));
    }
    let omegas = pairs
        .iter()
        .map(|&(x, y)| DensityOperator::uniform_subspace_state(sigma1.space().clone(), x, y))
        .collect::<Result<Vec<_>>>()?;
    let mut terms = vec![(keep, sigma1)];
    terms.extend(omegas.iter().map(|o| (delta.clone(), o)));
    DensityOperator::combination(&terms)
}

/// Projects onto every listed pair subspace in lexicographic pair order.
pub fn enforce_unanimity<T: Scalar>(
    sigma2: &DensityOperator<T>,
    pairs: &[Pair],
    eps: &T,
) -> Result<DensityOperator<T>> {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    let space = sigma2.space().clone();
    sorted.iter().try_fold(sigma2.clone(), |rho, &(x, y)| {
        rho.project_and_renormalize(&space.pair_projector(x, y)?, eps)
    })
}

/// QCV steps on a classical (basis) profile, with every stage recorded.
pub fn qcv_basis<T: Scalar>(
    space: &Arc<RankingSpace>,
    profile: &ClassicalProfile,
    params: &QcvParams<T>,
) -> Result<QcvStages<T>> {
    if profile.alternatives() != space.m() {
        return Err(Error::InvalidProfile(format!(
            "profile ranks {} alternatives, space has {}",
            profile.alternatives(),
            space.m()
        )));
    }
    params.check_alternatives(space.m())?;
    let n = profile.voters();
    let tally = profile.pairwise_tally();
    let scores = condorcet_scores_from_tally(&tally);
    let weak_order = WeakOrder::from_score_vec(&scores);
    let extensions: Vec<(T, Ranking)> = weak_order
        .linear_extensions()
        .into_iter()
        .map(|r| (T::one(), r))
        .collect();
    let sigma1 = DensityOperator::mixed_state(space.clone(), &extensions)?;
    let pairs = space.ordered_pairs();
    let encoded_any: Vec<Pair> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| tally[x][y] > 0)
        .collect();
    let encoded_all: Vec<Pair> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| tally[x][y] == n)
        .collect();
    let sigma2 = minority_spread(&sigma1, &encoded_any, &params.delta)?;
    let sigma3 = enforce_unanimity(&sigma2, &encoded_all, &params.eps)?;
    Ok(QcvStages {
        scores,
        weak_order,
        encoded_any,
        encoded_all,
        sigma1,
        sigma2,
        sigma3,
    })
}

/// Diagonal of QCV's σ³ for one basis tuple, without building matrices.
pub(crate) fn qcv_tuple_diagonal<T: Scalar>(
    space: &RankingSpace,
    tuple: &[usize],
    delta: &T,
) -> Vec<T> {
    let m = space.m();
    let dim = space.dim();
    let n = tuple.len();
    let mut tally = vec![vec![0usize; m]; m];
    for &k in tuple {
        let order = space.ranking(k).order();
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                tally[x][y] += 1;
            }
        }
    }
    let scores = condorcet_scores_from_tally(&tally);
    let pairs = space.ordered_pairs();
    let any: Vec<Pair> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| tally[x][y] > 0)
        .collect();
    let all: Vec<Pair> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| tally[x][y] == n)
        .collect();

    let extends = |k: usize| {
        pairs
            .iter()
            .all(|&(x, y)| scores[x] <= scores[y] || space.ranks_above(k, x, y))
    };
    let ext_count = (0..dim).filter(|&k| extends(k)).count();
    let base = (T::one() - T::from_count(any.len()) * delta.clone()) / T::from_count(ext_count);
    let spread = delta.clone() * T::from_count(2) / T::from_count(dim);

    let mut diag = vec![T::zero(); dim];
    let mut mass = T::zero();
    for (k, slot) in diag.iter_mut().enumerate() {
        if !all.iter().all(|&(x, y)| space.ranks_above(k, x, y)) {
            continue;
        }
        let hits = any
            .iter()
            .filter(|&&(x, y)| space.ranks_above(k, x, y))
            .count();
        let mut w = spread.clone() * T::from_count(hits);
        if extends(k) {
            w = w + base.clone();
        }
        mass = mass + w.clone();
        *slot = w;
    }
    for w in &mut diag {
        *w = w.clone() / mass.clone();
    }
    diag
}

/// Mixes `per_tuple` outputs over the profile's diagonal support.
///
/// Fails with a resource-limit error when the support exceeds `cap` tuples.
pub fn convex_extension<T, F>(
    profile: &ProfileState<T>,
    eps: &T,
    cap: usize,
    per_tuple: F,
) -> Result<DensityOperator<T>>
where
    T: Scalar,
    F: Fn(&[usize]) -> Result<Vec<T>> + Sync,
{
    let size = profile.support_size(eps);
    if size > cap {
        return Err(Error::ResourceLimit(format!(
            "profile support spans {size} basis tuples, cap is {cap}"
        )));
    }
    let support = profile.diagonal_support(eps);
    let parts: Vec<Vec<T>> = if support.len() > 32 {
        support
            .par_iter()
            .map(|(_, t)| per_tuple(t))
            .collect::<Result<_>>()?
    } else {
        support
            .iter()
            .map(|(_, t)| per_tuple(t))
            .collect::<Result<_>>()?
    };
    let dim = profile.space().dim();
    let mut diag = vec![T::zero(); dim];
    for ((w, _), part) in support.iter().zip(parts) {
        for (acc, v) in diag.iter_mut().zip(part) {
            *acc = acc.clone() + w.clone() * v;
        }
    }
    Ok(DensityOperator::from_diagonal_unchecked(
        profile.space().clone(),
        diag,
    ))
}

/// QCV on an arbitrary profile via the convex extension.
pub fn qcv<T: Scalar>(p: &ProfileState<T>, params: &QcvParams<T>) -> Result<DensityOperator<T>> {
    Qcv::new(params.clone()).evaluate(p)
}

/// Quantum Condorcet Voting.
#[derive(Clone, Debug)]
pub struct Qcv<T> {
    pub params: QcvParams<T>,
    pub support_cap: usize,
}

impl<T: Scalar> Qcv<T> {
    pub fn new(params: QcvParams<T>) -> Self {
        Self {
            params,
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

impl<T: Scalar> WelfareRule<T> for Qcv<T> {
    fn name(&self) -> String {
        "qcv".into()
    }

    fn evaluate(&self, p: &ProfileState<T>) -> Result<DensityOperator<T>> {
        let space = p.space().clone();
        self.params.check_alternatives(space.m())?;
        convex_extension(p, &self.params.eps, self.support_cap, |tuple| {
            Ok(qcv_tuple_diagonal(&space, tuple, &self.params.delta))
        })
    }
}

/// Society adopts one voter's ballot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dictator {
    /// 0-based.
    pub voter: usize,
}

impl<T: Scalar> WelfareRule<T> for Dictator {
    fn name(&self) -> String {
        format!("dictator:{}", self.voter + 1)
    }

    fn evaluate(&self, p: &ProfileState<T>) -> Result<DensityOperator<T>> {
        p.partial_ballot(self.voter)
    }
}

pub fn dictator_rule(voter: usize) -> Dictator {
    Dictator { voter }
}

/// Voter 1 can force `r_star` by voting it as a basis ballot; otherwise voter 2 decides.
#[derive(Clone, Debug, PartialEq)]
pub struct Veto {
    r_star: Ranking,
    label: String,
}

impl Veto {
    pub fn new(alternatives: &AlternativeSet, r_star: Ranking) -> Result<Self> {
        if r_star.len() != alternatives.len() {
            return Err(Error::InvalidArgument(format!(
                "veto ranking has {} alternatives, expected {}",
                r_star.len(),
                alternatives.len()
            )));
        }
        let label = alternatives.format_ranking(&r_star);
        Ok(Self { r_star, label })
    }

    pub fn r_star(&self) -> &Ranking {
        &self.r_star
    }
}

impl<T: Scalar> WelfareRule<T> for Veto {
    fn name(&self) -> String {
        format!("veto:{}", self.label)
    }

    fn evaluate(&self, p: &ProfileState<T>) -> Result<DensityOperator<T>> {
        if p.voters() < 2 {
            return Err(Error::InvalidProfile(
                "veto rule needs at least two voters".into(),
            ));
        }
        let k = p.space().index_of(&self.r_star)?;
        let first = p.partial_ballot(0)?;
        if first.diagonal_entry(k) >= T::one() - T::default_eps() {
            DensityOperator::point_mass(p.space().clone(), &self.r_star)
        } else {
            p.partial_ballot(1)
        }
    }
}

pub fn veto_rule(alternatives: &AlternativeSet, r_star: Ranking) -> Result<Veto> {
    Veto::new(alternatives, r_star)
}

/// Society adopts the reverse of one voter's ballot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReverseDictator {
    /// 0-based.
    pub voter: usize,
}

impl<T: Scalar> WelfareRule<T> for ReverseDictator {
    fn name(&self) -> String {
        format!("anti:{}", self.voter + 1)
    }

    fn evaluate(&self, p: &ProfileState<T>) -> Result<DensityOperator<T>> {
        Ok(p.partial_ballot(self.voter)?.reversed())
    }
}

/// Uniform over the rankings consistent with the Borda-score weak order.
#[derive(Clone, Debug)]
pub struct Borda<T> {
    pub eps: T,
    pub support_cap: usize,
}

impl<T: Scalar> Default for Borda<T> {
    fn default() -> Self {
        Self {
            eps: T::default_eps(),
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

fn borda_tuple_diagonal<T: Scalar>(space: &RankingSpace, tuple: &[usize]) -> Vec<T> {
    let m = space.m();
    let mut scores = vec![0usize; m];
    for &k in tuple {
        for (pos, &a) in space.ranking(k).order().iter().enumerate() {
            scores[a] += m - 1 - pos;
        }
    }
    let order = WeakOrder::from_score_vec(&scores);
    let w = T::from_count(order.extension_count()).recip();
    (0..space.dim())
        .map(|k| {
            if order.is_extended_by(space.ranking(k)) {
                w.clone()
            } else {
                T::zero()
            }
        })
        .collect()
}

impl<T: Scalar> WelfareRule<T> for Borda<T> {
    fn name(&self) -> String {
        "borda".into()
    }

    fn evaluate(&self, p: &ProfileState<T>) -> Result<DensityOperator<T>> {
        let space = p.space().clone();
        convex_extension(p, &self.eps, self.support_cap, |tuple| {
            Ok(borda_tuple_diagonal(&space, tuple))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_rational::BigRational;

    fn space3() -> Arc<RankingSpace> {
        RankingSpace::letters(3).unwrap()
    }

    fn classical(s: &Arc<RankingSpace>, rankings: &[&str]) -> ClassicalProfile {
        ClassicalProfile::parse(s.alternatives(), rankings).unwrap()
    }

    fn diag_of(s: &Arc<RankingSpace>, rho: &DensityOperator<f64>, ranking: &str) -> f64 {
        rho.diagonal_entry(s.index_of(&s.parse_ranking(ranking).unwrap()).unwrap())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const CYCLE: [&str; 3] = ["a>b>c", "b>c>a", "c>a>b"];
    const UNANIMOUS: [&str; 3] = ["a>b>c", "a>b>c", "a>b>c"];

    #[test]
    fn params_validation() {
        assert!(QcvParams::new(0.0, 1e-9).is_err());
        assert!(QcvParams::new(0.05, -1.0).is_err());
        let p = QcvParams::new(1.0 / 9.0, 1e-9).unwrap();
        assert!(matches!(
            p.check_alternatives(3),
            Err(Error::InvalidParams(_))
        ));
        assert!(QcvParams::<f64>::for_alternatives(3)
            .check_alternatives(3)
            .is_ok());
        assert_eq!(
            QcvParams::<BigRational>::for_alternatives(4).delta,
            rat(1, 32)
        );
    }

    #[test]
    fn encoded_pair_examples() {
        let s = space3();
        let cycle = ProfileState::<f64>::basis(s.clone(), &classical(&s, &CYCLE)).unwrap();
        assert_eq!(encoded_pairs_any(&cycle, &1e-9).unwrap().len(), 6);
        assert!(encoded_pairs_all(&cycle, &1e-9).unwrap().is_empty());

        let unan = ProfileState::<f64>::basis(s.clone(), &classical(&s, &UNANIMOUS)).unwrap();
        let want = vec![(0, 1), (0, 2), (1, 2)];
        assert_eq!(encoded_pairs_any(&unan, &1e-9).unwrap(), want);
        assert_eq!(encoded_pairs_all(&unan, &1e-9).unwrap(), want);

        let two =
            ProfileState::<f64>::basis(s.clone(), &classical(&s, &["a>b>c", "a>c>b"])).unwrap();
        assert_eq!(
            encoded_pairs_any(&two, &1e-9).unwrap(),
            vec![(0, 1), (0, 2), (1, 2), (2, 1)]
        );
        assert_eq!(
            encoded_pairs_all(&two, &1e-9).unwrap(),
            vec![(0, 1), (0, 2)]
        );

        // partial support from every voter is not unanimity
        let r = |t: &str| s.parse_ranking(t).unwrap();
        let split =
            DensityOperator::mixed_state(s.clone(), &[(0.4, r("a>b>c")), (0.6, r("c>b>a"))])
                .unwrap();
        let sure = DensityOperator::point_mass(s.clone(), &r("a>b>c")).unwrap();
        let mixed = ProfileState::product(vec![split, sure]).unwrap();
        assert_eq!(
            encoded_pairs_all(&mixed, &1e-9).unwrap(),
            Vec::<Pair>::new()
        );
        assert_eq!(encoded_pairs_any(&mixed, &1e-9).unwrap().len(), 6);
        let soc = qcv(&mixed, &QcvParams::for_alternatives(3)).unwrap();
        let ab = soc
            .support_probability(&s.pair_projector(0, 1).unwrap())
            .unwrap();
        assert!(ab < 1.0 && ab > 0.0);
    }

    #[test]
    fn qcv_basis_cycle_is_uniform() {
        let s = space3();
        for delta in [rat(1, 50), rat(1, 20), rat(1, 10)] {
            let params = QcvParams::new(delta, BigRational::from_integer(0.into())).unwrap();
            let stages = qcv_basis(&s, &classical(&s, &CYCLE), &params).unwrap();
            assert_eq!(stages.scores, vec![1, 1, 1]);
            assert_eq!(stages.sigma3.diagonal(), vec![rat(1, 6); 6]);
        }
    }

    #[test]
    fn qcv_basis_unanimous_is_point_mass() {
        let s = space3();
        let stages = qcv_basis(
            &s,
            &classical(&s, &UNANIMOUS),
            &QcvParams::<f64>::for_alternatives(3),
        )
        .unwrap();
        assert_eq!(stages.weak_order.tiers(), &[vec![0], vec![1], vec![2]]);
        assert!((diag_of(&s, &stages.sigma3, "a>b>c") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qcv_basis_two_voters_splits_evenly() {
        let s = space3();
        let params = QcvParams::new(rat(1, 20), BigRational::from_integer(0.into())).unwrap();
        let stages = qcv_basis(&s, &classical(&s, &["a>b>c", "a>c>b"]), &params).unwrap();
        let want: Vec<BigRational> = vec![
            rat(1, 2),
            rat(1, 2),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ];
        assert_eq!(stages.sigma3.diagonal(), want);
        for stage in [&stages.sigma1, &stages.sigma2, &stages.sigma3] {
            stage
                .validate(&BigRational::from_integer(0.into()))
                .unwrap();
        }
    }

    #[test]
    fn minority_spread_point_mass() {
        let s = space3();
        let sigma1 = DensityOperator::<BigRational>::point_mass(
            s.clone(),
            &s.parse_ranking("a>b>c").unwrap(),
        )
        .unwrap();
        let spread = minority_spread(&sigma1, &[(0, 1), (0, 2), (1, 2)], &rat(1, 20)).unwrap();
        // abc, acb, bac, bca, cab, cba
        let want = vec![
            rat(9, 10),
            rat(1, 30),
            rat(1, 30),
            rat(1, 60),
            rat(1, 60),
            rat(0, 1),
        ];
        assert_eq!(spread.diagonal(), want);
        assert_eq!(minority_spread(&sigma1, &[], &rat(1, 20)).unwrap(), sigma1);
        let too_much = minority_spread(&sigma1, &s.ordered_pairs(), &rat(1, 5));
        assert!(matches!(too_much, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn enforce_unanimity_confines_support() {
        let s = space3();
        let mixed = DensityOperator::<f64>::maximally_mixed(s.clone());
        assert_eq!(enforce_unanimity(&mixed, &[], &1e-9).unwrap(), mixed);
        let out = enforce_unanimity(&mixed, &[(0, 1), (0, 2), (1, 2)], &1e-9).unwrap();
        assert!((diag_of(&s, &out, "a>b>c") - 1.0).abs() < 1e-12);
        let point =
            DensityOperator::<f64>::point_mass(s.clone(), &s.parse_ranking("a>b>c").unwrap())
                .unwrap();
        assert!(matches!(
            enforce_unanimity(&point, &[(1, 0)], &1e-9),
            Err(Error::ZeroMassProjection(_))
        ));
    }

    #[test]
    fn fast_route_matches_staged_route() {
        for m in [3, 4] {
            let s = RankingSpace::letters(m).unwrap();
            let params =
                QcvParams::<BigRational>::new(rat(1, 2 * (m * m) as i64), rat(0, 1)).unwrap();
            let dim = s.dim();
            for seed in 0..40usize {
                let n = 2 + seed % 3;
                let tuple: Vec<usize> = (0..n)
                    .map(|i| (seed * 7 + i * 13 + i * i * 5) % dim)
                    .collect();
                let profile =
                    ClassicalProfile::new(tuple.iter().map(|&k| s.ranking(k).clone()).collect())
                        .unwrap();
                let staged = qcv_basis(&s, &profile, &params).unwrap().sigma3.diagonal();
                assert_eq!(
                    qcv_tuple_diagonal(&s, &tuple, &params.delta),
                    staged,
                    "tuple {tuple:?}"
                );
            }
        }
    }

    #[test]
    fn qcv_extension_examples() {
        let s = space3();
        let params = QcvParams::<f64>::for_alternatives(3);
        let r = |t: &str| s.parse_ranking(t).unwrap();

        let basis = ProfileState::basis(s.clone(), &classical(&s, &CYCLE)).unwrap();
        let staged = qcv_basis(&s, &classical(&s, &CYCLE), &params)
            .unwrap()
            .sigma3;
        assert!(qcv(&basis, &params).unwrap().max_abs_diff(&staged) < 1e-12);

        let corr = ProfileState::correlated(
            s.clone(),
            vec![
                (0.5, CYCLE.iter().map(|t| r(t)).collect()),
                (0.5, UNANIMOUS.iter().map(|t| r(t)).collect()),
            ],
            &1e-9,
        )
        .unwrap();
        let out = qcv(&corr, &params).unwrap();
        assert!((diag_of(&s, &out, "a>b>c") - (0.5 / 6.0 + 0.5)).abs() < 1e-12);
        assert!((diag_of(&s, &out, "c>b>a") - 0.5 / 6.0).abs() < 1e-12);

        let v1 = DensityOperator::mixed_state(s.clone(), &[(0.5, r("a>b>c")), (0.5, r("b>a>c"))])
            .unwrap();
        let v2 = DensityOperator::point_mass(s.clone(), &r("a>b>c")).unwrap();
        let mixed = ProfileState::product(vec![v1, v2]).unwrap();
        let left = qcv_basis(&s, &classical(&s, &["a>b>c", "a>b>c"]), &params)
            .unwrap()
            .sigma3;
        let right = qcv_basis(&s, &classical(&s, &["b>a>c", "a>b>c"]), &params)
            .unwrap()
            .sigma3;
        let want = DensityOperator::combination(&[(0.5, &left), (0.5, &right)]).unwrap();
        assert!(qcv(&mixed, &params).unwrap().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn qcv_support_cap() {
        let s = RankingSpace::letters(4).unwrap();
        let mixed = DensityOperator::<f64>::maximally_mixed(s.clone());
        let p = ProfileState::product(vec![mixed; 4]).unwrap();
        let mut rule = Qcv::new(QcvParams::for_alternatives(4));
        assert!(matches!(rule.evaluate(&p), Err(Error::ResourceLimit(_))));
        rule.support_cap = 400_000;
        let out = rule
            .evaluate(&ProfileState::product(p.factors().unwrap()[..2].to_vec()).unwrap())
            .unwrap();
        out.validate(&1e-9).unwrap();
    }

    fn superposed_profile() -> (Arc<RankingSpace>, ProfileState<f64>) {
        let s = RankingSpace::new(AlternativeSet::new(["x", "y", "z"]).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho1 = DensityOperator::pure_state(
            s.clone(),
            &[
                (Complex::new(h, 0.0), s.parse_ranking("x>y>z").unwrap()),
                (Complex::new(h, 0.0), s.parse_ranking("y>x>z").unwrap()),
            ],
        )
        .unwrap();
        let rho2 =
            DensityOperator::point_mass(s.clone(), &s.parse_ranking("z>x>y").unwrap()).unwrap();
        let p = ProfileState::product(vec![rho1, rho2]).unwrap();
        (s, p)
    }

    #[test]
    fn dictator_examples() {
        let (s, p) = superposed_profile();
        assert_eq!(
            dictator_rule(0).evaluate(&p).unwrap(),
            p.partial_ballot(0).unwrap()
        );
        let second = dictator_rule(1).evaluate(&p).unwrap();
        assert_eq!(diag_of(&s, &second, "z>x>y"), 1.0);
        assert_eq!(WelfareRule::<f64>::name(&dictator_rule(0)), "dictator:1");
    }

    #[test]
    fn veto_examples() {
        let s = space3();
        let r = |t: &str| s.parse_ranking(t).unwrap();
        let veto = veto_rule(s.alternatives(), r("a>b>c")).unwrap();
        assert_eq!(WelfareRule::<f64>::name(&veto), "veto:a>b>c");

        let forced =
            ProfileState::<f64>::basis(s.clone(), &classical(&s, &["a>b>c", "c>b>a"])).unwrap();
        assert_eq!(diag_of(&s, &veto.evaluate(&forced).unwrap(), "a>b>c"), 1.0);

        let truthful =
            DensityOperator::mixed_state(s.clone(), &[(0.5, r("a>b>c")), (0.5, r("a>c>b"))])
                .unwrap();
        let other = DensityOperator::point_mass(s.clone(), &r("b>a>c")).unwrap();
        let p = ProfileState::product(vec![truthful, other]).unwrap();
        let society = veto.evaluate(&p).unwrap();
        assert_eq!(diag_of(&s, &society, "b>a>c"), 1.0);
        let ab = s.pair_projector(0, 1).unwrap();
        assert_eq!(society.support_probability(&ab).unwrap(), 0.0);
        let lie = p
            .with_ballot(
                0,
                DensityOperator::point_mass(s.clone(), &r("a>b>c")).unwrap(),
            )
            .unwrap();
        assert_eq!(
            veto.evaluate(&lie)
                .unwrap()
                .support_probability(&ab)
                .unwrap(),
            1.0
        );

        let single = ProfileState::<f64>::basis(s.clone(), &classical(&s, &["a>b>c"])).unwrap();
        assert!(matches!(
            veto.evaluate(&single),
            Err(Error::InvalidProfile(_))
        ));
    }

    #[test]
    fn reverse_dictator_breaks_unanimity() {
        let s = space3();
        let p = ProfileState::<f64>::basis(s.clone(), &classical(&s, &UNANIMOUS)).unwrap();
        let out = ReverseDictator { voter: 0 }.evaluate(&p).unwrap();
        assert_eq!(diag_of(&s, &out, "c>b>a"), 1.0);
    }

    #[test]
    fn borda_scores_positions() {
        let s = space3();
        let p = ProfileState::<f64>::basis(s.clone(), &classical(&s, &["a>b>c", "b>a>c", "a>c>b"]))
            .unwrap();
        let out = Borda::default().evaluate(&p).unwrap();
        assert_eq!(diag_of(&s, &out, "a>b>c"), 1.0);
    }
}
