//! Ranking-space states: densities over the `m!` basis rankings, the pair and
//! winner projectors, ballot profiles and distributions over alternatives.
//!
//! Densities are stored dense (row-major `dim × dim`). Profiles never build
//! the joint `(m!)^n` matrix: product profiles stay factored and correlated
//! profiles keep a sparse list of weighted ranking tuples.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ranking::{factorial, Alternative, AlternativeSet, ClassicalProfile, Ranking};
use crate::scalar::Scalar;

/// Largest alternative count accepted unless the caller raises the cap.
pub const DEFAULT_MAX_ALTERNATIVES: usize = 6;

/// `ℂ^{m!}` with one basis vector per ranking.
pub struct RankingSpace {
    alternatives: AlternativeSet,
    rankings: Vec<Ranking>,
    positions: Vec<Vec<usize>>,
}

impl fmt::Debug for RankingSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankingSpace")
            .field("alternatives", &self.alternatives.names())
            .field("dim", &self.dim())
            .finish()
    }
}

impl PartialEq for RankingSpace {
    fn eq(&self, other: &Self) -> bool {
        self.alternatives == other.alternatives
    }
}

impl Eq for RankingSpace {}

impl RankingSpace {
    pub fn new(alternatives: AlternativeSet) -> Result<Arc<Self>> {
        Self::with_max_alternatives(alternatives, DEFAULT_MAX_ALTERNATIVES)
    }

    pub fn with_max_alternatives(alternatives: AlternativeSet, cap: usize) -> Result<Arc<Self>> {
        let m = alternatives.len();
        if m > cap {
            return Err(Error::ResourceLimit(format!(
                "{m} alternatives exceed the cap of {cap} (dimension {m}! grows too fast)"
            )));
        }
        let rankings: Vec<Ranking> = (0..factorial(m))
            .map(|k| Ranking::from_index(k, m))
            .collect::<Result<_>>()?;
        let positions = rankings.iter().map(Ranking::positions).collect();
        Ok(Arc::new(Self {
            alternatives,
            rankings,
            positions,
        }))
    }

    /// Space over `a`, `b`, `c`, ...
    pub fn letters(m: usize) -> Result<Arc<Self>> {
        Self::new(AlternativeSet::letters(m)?)
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alternatives
    }

    pub fn m(&self) -> usize {
        self.alternatives.len()
    }

    pub fn dim(&self) -> usize {
        self.rankings.len()
    }

    pub fn ranking(&self, k: usize) -> &Ranking {
        &self.rankings[k]
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn index_of(&self, r: &Ranking) -> Result<usize> {
        if r.len() != self.m() {
            return Err(Error::InvalidArgument(format!(
                "ranking over {} alternatives used in a space over {}",
                r.len(),
                self.m()
            )));
        }
        Ok(r.index())
    }

    pub fn parse_ranking(&self, text: &str) -> Result<Ranking> {
        self.alternatives.parse_ranking(text)
    }

    pub fn format_ranking(&self, k: usize) -> String {
        self.alternatives.format_ranking(&self.rankings[k])
    }

    /// Whether basis ranking `k` places `x` above `y`.
    #[inline]
    pub fn ranks_above(&self, k: usize, x: Alternative, y: Alternative) -> bool {
        let pos = &self.positions[k];
        pos[x] < pos[y]
    }

    #[inline]
    pub fn top_of(&self, k: usize) -> Alternative {
        self.rankings[k].top()
    }

    fn check_pair(&self, x: Alternative, y: Alternative) -> Result<()> {
        self.alternatives.check(x)?;
        self.alternatives.check(y)?;
        if x == y {
            return Err(Error::InvalidArgument(format!(
                "pair ({x}, {x}) compares an alternative with itself"
            )));
        }
        Ok(())
    }

    /// Projector onto the span of rankings with `x ≻ y`.
    pub fn pair_projector(&self, x: Alternative, y: Alternative) -> Result<Projector> {
        self.check_pair(x, y)?;
        let mask = (0..self.dim()).map(|k| self.ranks_above(k, x, y)).collect();
        Ok(Projector::from_mask(Subspace::Pair(x, y), mask))
    }

    /// Projector onto the span of rankings topped by `a`.
    pub fn winner_projector(&self, a: Alternative) -> Result<Projector> {
        self.alternatives.check(a)?;
        let mask = (0..self.dim()).map(|k| self.top_of(k) == a).collect();
        Ok(Projector::from_mask(Subspace::Winner(a), mask))
    }

    /// Ordered pairs `(x, y)`, `x ≠ y`, in lexicographic order.
    pub fn ordered_pairs(&self) -> Vec<(Alternative, Alternative)> {
        let m = self.m();
        (0..m)
            .flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect()
    }

    /// Basis permutation induced by renaming alternative `a` to `perm[a]`.
    pub fn relabel_basis(&self, perm: &[Alternative]) -> Vec<usize> {
        self.rankings
            .iter()
            .map(|r| r.relabeled(perm).index())
            .collect()
    }
}

/// Which subspace a [`Projector`] targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subspace {
    Pair(Alternative, Alternative),
    Winner(Alternative),
}

/// A diagonal 0/1 projector in the ranking basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    subspace: Subspace,
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl Projector {
    fn from_mask(subspace: Subspace, mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(k, &inside)| inside.then_some(k))
            .collect();
        Self {
            subspace,
            mask,
            members,
        }
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, k: usize) -> bool {
        self.mask[k]
    }

    pub fn rank(&self) -> usize {
        self.members.len()
    }

    /// Basis indices shared with `other`; the product of commuting diagonal projectors.
    pub fn intersection(&self, other: &Projector) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&k| other.contains(k))
            .collect()
    }
}

/// Hermitian, PSD, unit-trace operator on a [`RankingSpace`].
#[derive(Clone)]
pub struct DensityOperator<T> {
    space: Arc<RankingSpace>,
    data: Vec<Complex<T>>,
}

impl<T: PartialEq> PartialEq for DensityOperator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.data == other.data
    }
}

impl<T: fmt::Debug> fmt::Debug for DensityOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.space.dim();
        let diag: Vec<String> = (0..dim)
            .map(|k| {
                format!(
                    "{}: {:?}",
                    self.space.format_ranking(k),
                    self.data[k * dim + k].re
                )
            })
            .collect();
        write!(f, "DensityOperator {{ diag: [{}] }}", diag.join(", "))
    }
}

impl<T: Scalar> DensityOperator<T> {
    /// Validating constructor from a row-major matrix.
    pub fn from_matrix(space: Arc<RankingSpace>, data: Vec<Complex<T>>, eps: &T) -> Result<Self> {
        let dim = space.dim();
        if data.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "matrix has {} entries, expected {dim}x{dim}",
                data.len()
            )));
        }
        let rho = Self { space, data };
        rho.validate(eps)?;
        Ok(rho)
    }

    pub(crate) fn from_diagonal_unchecked(space: Arc<RankingSpace>, diag: Vec<T>) -> Self {
        let dim = space.dim();
        debug_assert_eq!(diag.len(), dim);
        let mut data = vec![Complex::zero(); dim * dim];
        for (k, w) in diag.into_iter().enumerate() {
            data[k * dim + k] = Complex::new(w, T::zero());
        }
        Self { space, data }
    }

    /// Diagonal density with the given basis weights.
    pub fn from_diagonal(space: Arc<RankingSpace>, diag: Vec<T>, eps: &T) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::InvalidArgument(format!(
                "diagonal has {} entries, expected {}",
                diag.len(),
                space.dim()
            )));
        }
        let rho = Self::from_diagonal_unchecked(space, diag);
        rho.validate(eps)?;
        Ok(rho)
    }

    pub fn point_mass(space: Arc<RankingSpace>, r: &Ranking) -> Result<Self> {
        let k = space.index_of(r)?;
        let mut diag = vec![T::zero(); space.dim()];
        diag[k] = T::one();
        Ok(Self::from_diagonal_unchecked(space, diag))
    }

    pub fn maximally_mixed(space: Arc<RankingSpace>) -> Self {
        let w = T::from_count(space.dim()).recip();
        let diag = vec![w; space.dim()];
        Self::from_diagonal_unchecked(space, diag)
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩` for `ψ = Σ amplitude·|ranking⟩`.
    pub fn pure_state(space: Arc<RankingSpace>, terms: &[(Complex<T>, Ranking)]) -> Result<Self> {
        let dim = space.dim();
        let mut psi = vec![Complex::<T>::zero(); dim];
        for (amp, r) in terms {
            let k = space.index_of(r)?;
            psi[k] = psi[k].clone() + amp.clone();
        }
        let norm = psi.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if norm <= T::zero() {
            return Err(Error::InvalidArgument(
                "pure state needs a non-zero amplitude".into(),
            ));
        }
        let support: Vec<usize> = (0..dim).filter(|&k| !psi[k].is_zero()).collect();
        let mut data = vec![Complex::zero(); dim * dim];
        for &j in &support {
            for &k in &support {
                data[j * dim + k] = psi[j].clone() * psi[k].conj() / norm.clone();
            }
        }
        Ok(Self { space, data })
    }

    /// Diagonal mixture with weights normalized to sum to one.
    pub fn mixed_state(space: Arc<RankingSpace>, terms: &[(T, Ranking)]) -> Result<Self> {
        let mut diag = vec![T::zero(); space.dim()];
        let mut total = T::zero();
        for (w, r) in terms {
            if *w < T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "mixture weight {w:?} is negative"
                )));
            }
            let k = space.index_of(r)?;
            diag[k] = diag[k].clone() + w.clone();
            total = total + w.clone();
        }
        if total <= T::zero() {
            return Err(Error::InvalidArgument(
                "mixture weights must have a positive sum".into(),
            ));
        }
        for w in &mut diag {
            *w = w.clone() / total.clone();
        }
        Ok(Self::from_diagonal_unchecked(space, diag))
    }

    /// Maximally mixed state on the `x ≻ y` subspace.
    pub fn uniform_subspace_state(
        space: Arc<RankingSpace>,
        x: Alternative,
        y: Alternative,
    ) -> Result<Self> {
        let p = space.pair_projector(x, y)?;
        let w = T::from_count(p.rank()).recip();
        let diag = (0..space.dim())
            .map(|k| if p.contains(k) { w.clone() } else { T::zero() })
            .collect();
        Ok(Self::from_diagonal_unchecked(space, diag))
    }

    pub fn space(&self) -> &Arc<RankingSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Complex<T> {
        &self.data[row * self.dim() + col]
    }

    pub fn matrix(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Real parts of the diagonal: basis-measurement probabilities.
    pub fn diagonal(&self) -> Vec<T> {
        let dim = self.dim();
        (0..dim)
            .map(|k| self.data[k * dim + k].re.clone())
            .collect()
    }

    pub fn diagonal_entry(&self, k: usize) -> T {
        self.data[k * self.dim() + k].re.clone()
    }

    pub fn trace(&self) -> Complex<T> {
        let dim = self.dim();
        (0..dim).fold(Complex::zero(), |acc, k| {
            acc + self.data[k * dim + k].clone()
        })
    }

    pub fn is_diagonal(&self, eps: &T) -> bool {
        let dim = self.dim();
        let tol = eps.clone() * eps.clone();
        (0..dim).all(|j| (0..dim).all(|k| j == k || self.data[j * dim + k].norm_sqr() <= tol))
    }

    fn check_projector(&self, p: &Projector) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "projector of dimension {} applied to a density of dimension {}",
                p.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `Tr(Pρ)`, snapped into `[0, 1]` when float dust pushes it just outside.
    pub fn support_probability(&self, p: &Projector) -> Result<T> {
        self.check_projector(p)?;
        let dim = self.dim();
        let t = p
            .members()
            .iter()
            .fold(T::zero(), |acc, &k| acc + self.data[k * dim + k].re.clone());
        let eps = T::default_eps();
        Ok(if t < T::zero() && t >= -eps.clone() {
            T::zero()
        } else if t > T::one() && t <= T::one() + eps {
            T::one()
        } else {
            t
        })
    }

    /// `PρP / Tr(Pρ)`.
    pub fn project_and_renormalize(&self, p: &Projector, eps: &T) -> Result<Self> {
        let mass = self.support_probability(p)?;
        if mass <= *eps {
            return Err(Error::ZeroMassProjection(format!(
                "{:?} carries mass {:?}",
                p.subspace(),
                mass
            )));
        }
        let dim = self.dim();
        let mut data = vec![Complex::zero(); dim * dim];
        for &j in p.members() {
            for &k in p.members() {
                data[j * dim + k] = self.data[j * dim + k].clone() / mass.clone();
            }
        }
        Ok(Self {
            space: self.space.clone(),
            data,
        })
    }

    /// Checks Hermiticity, positive semidefiniteness and unit trace within `eps`.
    pub fn validate(&self, eps: &T) -> Result<()> {
        let dim = self.dim();
        let tol2 = eps.clone() * eps.clone();
        for j in 0..dim {
            for k in j..dim {
                let diff = self.data[j * dim + k].clone() - self.data[k * dim + j].conj();
                if diff.norm_sqr() > tol2 {
                    return Err(Error::InvalidDensity(format!(
                        "not Hermitian at ({j}, {k})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re.clone() - T::one()).abs() > *eps || tr.im.abs() > *eps {
            return Err(Error::InvalidDensity(format!(
                "trace is {tr:?}, expected 1"
            )));
        }
        if !is_positive_semidefinite(&self.data, dim, eps) {
            return Err(Error::InvalidDensity("not positive semidefinite".into()));
        }
        Ok(())
    }

    /// `Σ wᵢ ρᵢ`; the weights are used as given.
    pub fn combination(terms: &[(T, &DensityOperator<T>)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let space = first.space.clone();
        let mut data = vec![Complex::<T>::zero(); space.dim() * space.dim()];
        for (w, rho) in terms {
            if rho.space != space {
                return Err(Error::InvalidArgument(
                    "combined densities live on different spaces".into(),
                ));
            }
            for (acc, v) in data.iter_mut().zip(&rho.data) {
                *acc = acc.clone() + v.clone() * w.clone();
            }
        }
        Ok(Self { space, data })
    }

    /// Applies the basis permutation `k ↦ map[k]`.
    pub fn permuted_basis(&self, map: &[usize]) -> Self {
        let dim = self.dim();
        let mut data = vec![Complex::zero(); dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                data[map[j] * dim + map[k]] = self.data[j * dim + k].clone();
            }
        }
        Self {
            space: self.space.clone(),
            data,
        }
    }

    /// Same state with alternative `a` renamed to `perm[a]` in every basis ranking.
    pub fn relabeled(&self, perm: &[Alternative]) -> Self {
        self.permuted_basis(&self.space.relabel_basis(perm))
    }

    /// Every basis ranking replaced by its reverse.
    pub fn reversed(&self) -> Self {
        let map: Vec<usize> = self
            .space
            .rankings()
            .iter()
            .map(|r| r.reversed().index())
            .collect();
        self.permuted_basis(&map)
    }

    /// Largest entrywise modulus of the difference, as `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).norm_sqr().to_f64_lossy().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Diagonal-pivoted LDL† elimination; a Hermitian matrix is PSD iff no pivot
/// goes negative and every zero pivot has a zero row.
fn is_positive_semidefinite<T: Scalar>(data: &[Complex<T>], dim: usize, eps: &T) -> bool {
    let mut a = data.to_vec();
    let mut active: Vec<usize> = (0..dim).collect();
    while !active.is_empty() {
        let (slot, &p) = active
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| {
                a[i * dim + i]
                    .re
                    .partial_cmp(&a[j * dim + j].re)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("active set is non-empty");
        let pivot = a[p * dim + p].re.clone();
        if pivot < -eps.clone() {
            return false;
        }
        if pivot <= *eps {
            // every remaining diagonal is ≤ eps; off-diagonals must vanish with them
            let tol = max_of_eps(eps);
            return active.iter().all(|&i| {
                a[i * dim + i].re >= -eps.clone()
                    && active
                        .iter()
                        .all(|&j| i == j || a[i * dim + j].norm_sqr() <= tol)
            });
        }
        active.swap_remove(slot);
        for &i in &active {
            let factor = a[i * dim + p].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &active {
                let update = factor.clone() * a[p * dim + j].clone();
                a[i * dim + j] = a[i * dim + j].clone() - update;
            }
        }
    }
    true
}

fn max_of_eps<T: Scalar>(eps: &T) -> T {
    crate::scalar::max_of(eps.clone(), eps.clone() * eps.clone())
}

pub fn pure_state<T: Scalar>(
    space: Arc<RankingSpace>,
    terms: &[(Complex<T>, Ranking)],
) -> Result<DensityOperator<T>> {
    DensityOperator::pure_state(space, terms)
}

pub fn mixed_state<T: Scalar>(
    space: Arc<RankingSpace>,
    terms: &[(T, Ranking)],
) -> Result<DensityOperator<T>> {
    DensityOperator::mixed_state(space, terms)
}

pub fn support_probability<T: Scalar>(rho: &DensityOperator<T>, p: &Projector) -> Result<T> {
    rho.support_probability(p)
}

pub fn uniform_subspace_state<T: Scalar>(
    space: Arc<RankingSpace>,
    x: Alternative,
    y: Alternative,
) -> Result<DensityOperator<T>> {
    DensityOperator::uniform_subspace_state(space, x, y)
}

pub fn project_and_renormalize<T: Scalar>(
    rho: &DensityOperator<T>,
    p: &Projector,
    eps: &T,
) -> Result<DensityOperator<T>> {
    rho.project_and_renormalize(p, eps)
}

#[derive(Clone, PartialEq)]
enum Form<T> {
    Product(Vec<DensityOperator<T>>),
    /// Weighted ranking-index tuples, one index per voter.
    Correlated(Vec<(T, Vec<usize>)>),
}

/// Joint ballot of all voters.
///
/// Cross-voter coherences are not representable: a correlated profile is its
/// diagonal in the product ranking basis.
#[derive(Clone, PartialEq)]
pub struct ProfileState<T> {
    space: Arc<RankingSpace>,
    voters: usize,
    form: Form<T>,
}

impl<T: fmt::Debug> fmt::Debug for ProfileState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            Form::Product(factors) => f.debug_tuple("Product").field(factors).finish(),
            Form::Correlated(terms) => f.debug_tuple("Correlated").field(terms).finish(),
        }
    }
}

impl<T: Scalar> ProfileState<T> {
    pub fn product(factors: Vec<DensityOperator<T>>) -> Result<Self> {
        let space = factors
            .first()
            .ok_or_else(|| Error::InvalidProfile("profile needs at least one voter".into()))?
            .space
            .clone();
        if factors.iter().any(|f| f.space != space) {
            return Err(Error::InvalidProfile(
                "ballots live on different ranking spaces".into(),
            ));
        }
        Ok(Self {
            space,
            voters: factors.len(),
            form: Form::Product(factors),
        })
    }

    /// Classically correlated joint distribution over ranking tuples.
    pub fn correlated(
        space: Arc<RankingSpace>,
        terms: Vec<(T, Vec<Ranking>)>,
        eps: &T,
    ) -> Result<Self> {
        let voters = terms
            .first()
            .ok_or_else(|| Error::InvalidProfile("correlated profile has no terms".into()))?
            .1
            .len();
        if voters == 0 {
            return Err(Error::InvalidProfile(
                "profile needs at least one voter".into(),
            ));
        }
        let mut total = T::zero();
        let mut indexed = Vec::with_capacity(terms.len());
        for (w, tuple) in terms {
            if w <= T::zero() {
                return Err(Error::InvalidProfile(format!(
                    "correlated weight {w:?} is not positive"
                )));
            }
            if tuple.len() != voters {
                return Err(Error::InvalidProfile(format!(
                    "correlated term lists {} ballots, expected {voters}",
                    tuple.len()
                )));
            }
            let idx = tuple
                .iter()
                .map(|r| space.index_of(r))
                .collect::<Result<Vec<_>>>()?;
            total = total + w.clone();
            indexed.push((w, idx));
        }
        if (total.clone() - T::one()).abs() > *eps {
            return Err(Error::InvalidProfile(format!(
                "correlated weights sum to {total:?}, expected 1"
            )));
        }
        Ok(Self {
            space,
            voters,
            form: Form::Correlated(indexed),
        })
    }

    /// Product of point masses.
    pub fn basis(space: Arc<RankingSpace>, profile: &ClassicalProfile) -> Result<Self> {
        let factors = profile
            .rankings()
            .iter()
            .map(|r| DensityOperator::point_mass(space.clone(), r))
            .collect::<Result<Vec<_>>>()?;
        Self::product(factors)
    }

    pub fn space(&self) -> &Arc<RankingSpace> {
        &self.space
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn factors(&self) -> Option<&[DensityOperator<T>]> {
        match &self.form {
            Form::Product(f) => Some(f),
            Form::Correlated(_) => None,
        }
    }

    pub fn joint_terms(&self) -> Option<&[(T, Vec<usize>)]> {
        match &self.form {
            Form::Product(_) => None,
            Form::Correlated(t) => Some(t),
        }
    }

    fn check_voter(&self, voter: usize) -> Result<()> {
        if voter < self.voters {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "voter {voter} out of range for {} voters",
                self.voters
            )))
        }
    }

    /// `Tr_{≠i}(ρ)` for 0-based voter `i`.
    pub fn partial_ballot(&self, voter: usize) -> Result<DensityOperator<T>> {
        self.check_voter(voter)?;
        match &self.form {
            Form::Product(f) => Ok(f[voter].clone()),
            Form::Correlated(terms) => {
                let mut diag = vec![T::zero(); self.space.dim()];
                for (w, tuple) in terms {
                    diag[tuple[voter]] = diag[tuple[voter]].clone() + w.clone();
                }
                Ok(DensityOperator::from_diagonal_unchecked(
                    self.space.clone(),
                    diag,
                ))
            }
        }
    }

    /// Same profile with voter `i`'s ballot replaced.
    ///
    /// For a correlated profile the new ballot enters through its diagonal,
    /// independent of the remaining voters' joint distribution.
    pub fn with_ballot(&self, voter: usize, ballot: DensityOperator<T>) -> Result<Self> {
        self.check_voter(voter)?;
        if ballot.space != self.space {
            return Err(Error::InvalidProfile(
                "replacement ballot lives on a different ranking space".into(),
            ));
        }
        match &self.form {
            Form::Product(f) => {
                let mut f = f.clone();
                f[voter] = ballot;
                Ok(Self {
                    space: self.space.clone(),
                    voters: self.voters,
                    form: Form::Product(f),
                })
            }
            Form::Correlated(terms) => {
                let mut others: Vec<(T, Vec<usize>)> = Vec::new();
                for (w, tuple) in terms {
                    let mut rest = tuple.clone();
                    rest.remove(voter);
                    match others.iter_mut().find(|(_, t)| *t == rest) {
                        Some((acc, _)) => *acc = acc.clone() + w.clone(),
                        None => others.push((w.clone(), rest)),
                    }
                }
                let diag = ballot.diagonal();
                let mut joint = Vec::new();
                for (w, rest) in &others {
                    for (k, p) in diag.iter().enumerate() {
                        if *p > T::zero() {
                            let mut tuple = rest.clone();
                            tuple.insert(voter, k);
                            joint.push((w.clone() * p.clone(), tuple));
                        }
                    }
                }
                Ok(Self {
                    space: self.space.clone(),
                    voters: self.voters,
                    form: Form::Correlated(joint),
                })
            }
        }
    }

    /// Per-voter basis weights above `eps`, renormalized.
    fn voter_supports(&self, eps: &T) -> Vec<Vec<(usize, T)>> {
        match &self.form {
            Form::Product(factors) => factors
                .iter()
                .map(|f| {
                    let kept: Vec<(usize, T)> = f
                        .diagonal()
                        .into_iter()
                        .enumerate()
                        .filter(|(_, w)| *w > *eps)
                        .collect();
                    let total = kept.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
                    kept.into_iter()
                        .map(|(k, w)| (k, w / total.clone()))
                        .collect()
                })
                .collect(),
            Form::Correlated(_) => Vec::new(),
        }
    }

    /// Number of basis tuples carrying weight above `eps`.
    pub fn support_size(&self, eps: &T) -> usize {
        match &self.form {
            Form::Product(_) => self
                .voter_supports(eps)
                .iter()
                .map(Vec::len)
                .fold(1usize, usize::saturating_mul),
            Form::Correlated(terms) => terms.iter().filter(|(w, _)| *w > *eps).count(),
        }
    }

    /// The profile's diagonal as weighted basis tuples (weights sum to one).
    pub fn diagonal_support(&self, eps: &T) -> Vec<(T, Vec<usize>)> {
        match &self.form {
            Form::Product(_) => {
                let mut out: Vec<(T, Vec<usize>)> =
                    vec![(T::one(), Vec::with_capacity(self.voters))];
                for support in self.voter_supports(eps) {
                    let mut next = Vec::with_capacity(out.len() * support.len());
                    for (w, tuple) in &out {
                        for (k, p) in &support {
                            let mut t = tuple.clone();
                            t.push(*k);
                            next.push((w.clone() * p.clone(), t));
                        }
                    }
                    out = next;
                }
                out
            }
            Form::Correlated(terms) => {
                let kept: Vec<(T, Vec<usize>)> =
                    terms.iter().filter(|(w, _)| *w > *eps).cloned().collect();
                let total = kept.iter().fold(T::zero(), |acc, (w, _)| acc + w.clone());
                kept.into_iter()
                    .map(|(w, t)| (w / total.clone(), t))
                    .collect()
            }
        }
    }

    /// The classical profile when the state is (up to `eps`) a single basis tuple.
    pub fn as_classical(&self, eps: &T) -> Option<ClassicalProfile> {
        let support = self.diagonal_support(eps);
        if support.len() != 1 {
            return None;
        }
        if let Form::Product(factors) = &self.form {
            let exact = factors
                .iter()
                .zip(&support[0].1)
                .all(|(f, &k)| f.diagonal_entry(k) >= T::one() - eps.clone());
            if !exact {
                return None;
            }
        }
        let rankings = support[0]
            .1
            .iter()
            .map(|&k| self.space.ranking(k).clone())
            .collect();
        ClassicalProfile::new(rankings).ok()
    }

    /// Renames alternatives in every ballot.
    pub fn relabeled(&self, perm: &[Alternative]) -> Self {
        let map = self.space.relabel_basis(perm);
        let form = match &self.form {
            Form::Product(f) => Form::Product(f.iter().map(|d| d.permuted_basis(&map)).collect()),
            Form::Correlated(terms) => Form::Correlated(
                terms
                    .iter()
                    .map(|(w, t)| (w.clone(), t.iter().map(|&k| map[k]).collect()))
                    .collect(),
            ),
        };
        Self {
            space: self.space.clone(),
            voters: self.voters,
            form,
        }
    }
}

/// Probability distribution over alternatives: the diagonal of a density on `ℂ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlternativeState<T> {
    alternatives: AlternativeSet,
    probabilities: Vec<T>,
}

impl<T: Scalar> AlternativeState<T> {
    pub fn new(alternatives: AlternativeSet, probabilities: Vec<T>, eps: &T) -> Result<Self> {
        if probabilities.len() != alternatives.len() {
            return Err(Error::InvalidArgument(format!(
                "{} probabilities for {} alternatives",
                probabilities.len(),
                alternatives.len()
            )));
        }
        if probabilities.iter().any(|p| *p < -eps.clone()) {
            return Err(Error::InvalidDensity("negative probability".into()));
        }
        let total = probabilities
            .iter()
            .fold(T::zero(), |acc, p| acc + p.clone());
        if (total.clone() - T::one()).abs() > *eps {
            return Err(Error::InvalidDensity(format!(
                "probabilities sum to {total:?}, expected 1"
            )));
        }
        Ok(Self {
            alternatives,
            probabilities,
        })
    }

    pub(crate) fn new_unchecked(alternatives: AlternativeSet, probabilities: Vec<T>) -> Self {
        Self {
            alternatives,
            probabilities,
        }
    }

    pub fn point(alternatives: AlternativeSet, a: Alternative) -> Result<Self> {
        alternatives.check(a)?;
        let probabilities = (0..alternatives.len())
            .map(|b| if a == b { T::one() } else { T::zero() })
            .collect();
        Ok(Self {
            alternatives,
            probabilities,
        })
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alternatives
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// `Tr(Π^a α)`.
    pub fn probability(&self, a: Alternative) -> &T {
        &self.probabilities[a]
    }

    pub fn is_point_mass_on(&self, a: Alternative, eps: &T) -> bool {
        self.probabilities[a] >= T::one() - eps.clone()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64_lossy())
            .fold(0.0, f64::max)
    }
}
