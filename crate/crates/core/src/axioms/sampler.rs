//! Seeded profile generators for sample-based axiom checks.
//!
//! Trial `t` always draws from ChaCha8 stream `t` of the run seed, so any
//! single trial can be replayed without the ones before it.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::random_pure_state;
use crate::error::Result;
use crate::hilbert::{DensityOperator, ProfileState, RankingSpace};
use crate::ranking::{Pair, Ranking};
use crate::scalar::Scalar;

const IIA_STREAM_OFFSET: u64 = 1 << 40;

#[derive(Clone, Debug)]
pub struct ProfileSampler {
    space: Arc<RankingSpace>,
    voters: usize,
    seed: u64,
    probes: bool,
}

impl ProfileSampler {
    pub fn new(space: Arc<RankingSpace>, voters: usize, seed: u64) -> Self {
        Self {
            space,
            voters,
            seed,
            probes: true,
        }
    }

    /// Drops the fixed probe profiles from the front of the trial sequence.
    pub fn without_probes(mut self) -> Self {
        self.probes = false;
        self
    }

    pub fn space(&self) -> &Arc<RankingSpace> {
        &self.space
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Unanimous identity, then voter `i` alone on the identity against the reverse.
    fn probe_count(&self) -> usize {
        if self.probes {
            1 + self.voters
        } else {
            0
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn probe<T: Scalar>(&self, index: usize) -> Result<ProfileState<T>> {
        let m = self.space.m();
        let identity = Ranking::identity(m);
        let reverse = identity.reversed();
        let ballots = (0..self.voters)
            .map(|i| {
                let r = if index == 0 || index == i + 1 {
                    &identity
                } else {
                    &reverse
                };
                DensityOperator::point_mass(self.space.clone(), r)
            })
            .collect::<Result<Vec<_>>>()?;
        ProfileState::product(ballots)
    }

    pub fn profile<T: Scalar>(&self, trial: usize) -> Result<ProfileState<T>> {
        if trial < self.probe_count() {
            return self.probe(trial);
        }
        let mut rng = self.rng(trial as u64);
        self.draw(&mut rng)
    }

    fn random_ranking(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(0..self.space.dim())
    }

    fn draw<T: Scalar>(&self, rng: &mut ChaCha8Rng) -> Result<ProfileState<T>> {
        let space = &self.space;
        match rng.random_range(0..4) {
            0 => {
                let ballots = (0..self.voters)
                    .map(|_| {
                        let k = self.random_ranking(rng);
                        DensityOperator::point_mass(space.clone(), space.ranking(k))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProfileState::product(ballots)
            }
            1 => {
                let ballots = (0..self.voters)
                    .map(|_| {
                        if rng.random_bool(0.5) {
                            random_pure_state(space, rng, 2)
                        } else {
                            let k = self.random_ranking(rng);
                            DensityOperator::point_mass(space.clone(), space.ranking(k))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProfileState::product(ballots)
            }
            2 => {
                let ballots = (0..self.voters)
                    .map(|_| {
                        let j = self.random_ranking(rng);
                        let k = self.random_ranking(rng);
                        let w: f64 = rng.random_range(0.2..=0.8);
                        let terms = [
                            (T::from_f64_lossy(w), space.ranking(j).clone()),
                            (T::from_f64_lossy(1.0 - w), space.ranking(k).clone()),
                        ];
                        DensityOperator::mixed_state(space.clone(), &terms)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProfileState::product(ballots)
            }
            _ => {
                // party lines: most voters follow the term's ranking
                let count = rng.random_range(2..=3);
                let raw: Vec<T> = (0..count)
                    .map(|_| T::from_f64_lossy(rng.random_range(0.2..=1.0)))
                    .collect();
                let total = raw.iter().fold(T::zero(), |acc, w| acc + w.clone());
                let terms = raw
                    .into_iter()
                    .map(|w| {
                        let party = self.random_ranking(rng);
                        let tuple = (0..self.voters)
                            .map(|_| {
                                let k = if rng.random_bool(0.75) {
                                    party
                                } else {
                                    self.random_ranking(rng)
                                };
                                space.ranking(k).clone()
                            })
                            .collect();
                        (w / total.clone(), tuple)
                    })
                    .collect();
                ProfileState::correlated(space.clone(), terms, &T::default_eps())
            }
        }
    }

    /// Two profiles whose voters agree ballot-by-ballot on the returned pair's
    /// support, differing elsewhere.
    pub fn iia_pair<T: Scalar>(
        &self,
        trial: usize,
    ) -> Result<(ProfileState<T>, ProfileState<T>, Pair)> {
        let base = self.profile::<T>(trial)?;
        let mut rng = self.rng(IIA_STREAM_OFFSET + trial as u64);
        let pairs = self.space.ordered_pairs();
        let (x, y) = pairs[rng.random_range(0..pairs.len())];
        let space = &self.space;
        let (above, below): (Vec<usize>, Vec<usize>) =
            (0..space.dim()).partition(|&k| space.ranks_above(k, x, y));
        let pick = |side: &[usize], rng: &mut ChaCha8Rng| side[rng.random_range(0..side.len())];
        let same_side = |k: usize, rng: &mut ChaCha8Rng| {
            if space.ranks_above(k, x, y) {
                pick(&above, rng)
            } else {
                pick(&below, rng)
            }
        };
        let twin = if let Some(factors) = base.factors() {
            let proj = space.pair_projector(x, y)?;
            let ballots = factors
                .iter()
                .map(|ballot| {
                    if space.m() > 3 && rng.random_bool(0.5) {
                        let mut others: Vec<usize> =
                            (0..space.m()).filter(|&a| a != x && a != y).collect();
                        let slots = others.clone();
                        others.shuffle(&mut rng);
                        let mut perm: Vec<usize> = (0..space.m()).collect();
                        for (from, to) in slots.into_iter().zip(others) {
                            perm[from] = to;
                        }
                        Ok(ballot.relabeled(&perm))
                    } else {
                        let t = ballot.support_probability(&proj)?;
                        let up = space.ranking(pick(&above, &mut rng)).clone();
                        let down = space.ranking(pick(&below, &mut rng)).clone();
                        DensityOperator::mixed_state(
                            space.clone(),
                            &[(t.clone(), up), (T::one() - t, down)],
                        )
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            ProfileState::product(ballots)?
        } else {
            let terms = base
                .joint_terms()
                .unwrap_or_default()
                .iter()
                .map(|(w, tuple)| {
                    let mapped = tuple
                        .iter()
                        .map(|&k| space.ranking(same_side(k, &mut rng)).clone())
                        .collect();
                    (w.clone(), mapped)
                })
                .collect();
            ProfileState::correlated(space.clone(), terms, &T::default_eps())?
        };
        Ok((base, twin, (x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_replay() {
        let s = RankingSpace::letters(3).unwrap();
        let sampler = ProfileSampler::new(s, 3, 42);
        for t in [0, 3, 4, 17, 99] {
            let a = sampler.profile::<f64>(t).unwrap();
            let b = sampler.profile::<f64>(t).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn probes_come_first() {
        let s = RankingSpace::letters(3).unwrap();
        let sampler = ProfileSampler::new(s.clone(), 2, 0);
        let unanimous = sampler.profile::<f64>(0).unwrap();
        assert_eq!(
            unanimous.as_classical(&1e-9).unwrap().rankings()[1],
            Ranking::identity(3)
        );
        let second = sampler
            .profile::<f64>(2)
            .unwrap()
            .as_classical(&1e-9)
            .unwrap();
        assert_eq!(second.rankings()[0], Ranking::identity(3).reversed());
        assert_eq!(second.rankings()[1], Ranking::identity(3));
    }

    #[test]
    fn iia_twins_agree_on_the_pair() {
        for m in [3, 4] {
            let s = RankingSpace::letters(m).unwrap();
            let sampler = ProfileSampler::new(s.clone(), 3, 5);
            for t in 0..60 {
                let (p, q, (x, y)) = sampler.iia_pair::<f64>(t).unwrap();
                let proj = s.pair_projector(x, y).unwrap();
                for i in 0..3 {
                    let a = p
                        .partial_ballot(i)
                        .unwrap()
                        .support_probability(&proj)
                        .unwrap();
                    let b = q
                        .partial_ballot(i)
                        .unwrap()
                        .support_probability(&proj)
                        .unwrap();
                    assert!((a - b).abs() < 1e-12, "trial {t} voter {i}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn samples_are_valid() {
        let s = RankingSpace::letters(4).unwrap();
        let sampler = ProfileSampler::new(s, 4, 11);
        for t in 0..80 {
            let p = sampler.profile::<f64>(t).unwrap();
            for i in 0..4 {
                p.partial_ballot(i).unwrap().validate(&1e-9).unwrap();
            }
            assert!(p.support_size(&1e-9) <= 256);
        }
    }
}
