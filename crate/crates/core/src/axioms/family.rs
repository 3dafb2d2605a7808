//! Candidate dishonest ballots searched by the manipulation engine.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{DensityOperator, RankingSpace};
use crate::scalar::Scalar;

const GRID_WEIGHTS: [(usize, usize); 3] = [(1, 3), (1, 1), (3, 1)];

/// Which generators make up a candidate family.
///
/// Text form joins generators with `+`: `basis`, `sup2`, `sup3`, `grid`,
/// `random:N`. The word `default` picks a size-appropriate mix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub basis: bool,
    pub sup2: bool,
    pub sup3: bool,
    pub grid: bool,
    pub random: usize,
    auto: bool,
}

impl FamilySpec {
    pub fn empty() -> Self {
        Self {
            basis: false,
            sup2: false,
            sup3: false,
            grid: false,
            random: 0,
            auto: false,
        }
    }

    pub fn basis_only() -> Self {
        Self {
            basis: true,
            ..Self::empty()
        }
    }

    pub fn full() -> Self {
        Self {
            basis: true,
            sup2: true,
            sup3: true,
            grid: true,
            random: 8,
            auto: false,
        }
    }

    /// Unresolved `default`.
    pub fn auto() -> Self {
        Self {
            auto: true,
            ..Self::empty()
        }
    }

    /// Fixes `default` for `m` alternatives: the full family up to three,
    /// basis plus pairwise superpositions at four, basis beyond.
    pub fn resolve(&self, m: usize) -> Self {
        if !self.auto {
            return self.clone();
        }
        match m {
            0..=3 => Self::full(),
            4 => Self {
                basis: true,
                sup2: true,
                random: 8,
                ..Self::empty()
            },
            _ => Self::basis_only(),
        }
    }

    pub fn is_auto(&self) -> bool {
        self.auto
    }
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self::auto()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.auto {
            return f.write_str("default");
        }
        let mut parts: Vec<String> = Vec::new();
        for (on, name) in [
            (self.basis, "basis"),
            (self.sup2, "sup2"),
            (self.sup3, "sup3"),
            (self.grid, "grid"),
        ] {
            if on {
                parts.push(name.into());
            }
        }
        if self.random > 0 {
            parts.push(format!("random:{}", self.random));
        }
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "default" {
            return Ok(Self::auto());
        }
        let mut spec = Self::empty();
        for part in s.split('+').map(str::trim) {
            match part {
                "basis" => spec.basis = true,
                "sup2" => spec.sup2 = true,
                "sup3" => spec.sup3 = true,
                "grid" => spec.grid = true,
                _ => {
                    let count = part
                        .strip_prefix("random:")
                        .and_then(|n| n.parse::<usize>().ok())
                        .ok_or_else(|| {
                            Error::InvalidConfig(format!("unknown family generator {part:?}"))
                        })?;
                    spec.random = count;
                }
            }
        }
        if spec == Self::empty() {
            return Err(Error::InvalidConfig("family selects no generators".into()));
        }
        Ok(spec)
    }
}

/// The ballots a family expands to over a given space.
#[derive(Clone, Debug)]
pub struct CandidateFamily<T> {
    pub spec: FamilySpec,
    pub seed: u64,
    pub ballots: Vec<DensityOperator<T>>,
}

fn superposition<T: Scalar>(
    space: &Arc<RankingSpace>,
    members: &[usize],
) -> Result<DensityOperator<T>> {
    let terms: Vec<(Complex<T>, _)> = members
        .iter()
        .map(|&k| (Complex::new(T::one(), T::zero()), space.ranking(k).clone()))
        .collect();
    DensityOperator::pure_state(space.clone(), &terms)
}

impl<T: Scalar> CandidateFamily<T> {
    pub fn build(space: &Arc<RankingSpace>, spec: &FamilySpec, seed: u64) -> Result<Self> {
        let spec = spec.resolve(space.m());
        let dim = space.dim();
        let mut ballots = Vec::new();
        if spec.basis {
            for r in space.rankings() {
                ballots.push(DensityOperator::point_mass(space.clone(), r)?);
            }
        }
        if spec.sup2 {
            for j in 0..dim {
                for k in j + 1..dim {
                    ballots.push(superposition(space, &[j, k])?);
                }
            }
        }
        if spec.sup3 {
            for j in 0..dim {
                for k in j + 1..dim {
                    for l in k + 1..dim {
                        ballots.push(superposition(space, &[j, k, l])?);
                    }
                }
            }
        }
        if spec.grid {
            for j in 0..dim {
                for k in j + 1..dim {
                    for (wj, wk) in GRID_WEIGHTS {
                        let terms = [
                            (T::from_count(wj), space.ranking(j).clone()),
                            (T::from_count(wk), space.ranking(k).clone()),
                        ];
                        ballots.push(DensityOperator::mixed_state(space.clone(), &terms)?);
                    }
                }
            }
        }
        if spec.random > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(u64::MAX);
            for _ in 0..spec.random {
                ballots.push(random_pure_state(space, &mut rng, 4)?);
            }
        }
        Ok(Self {
            spec,
            seed,
            ballots,
        })
    }

    pub fn len(&self) -> usize {
        self.ballots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballots.is_empty()
    }
}

/// Pure state on 2..=`max_support` random rankings; magnitudes in `[0.2, 1]`
/// keep every branch well above the support tolerance.
pub(crate) fn random_pure_state<T: Scalar>(
    space: &Arc<RankingSpace>,
    rng: &mut ChaCha8Rng,
    max_support: usize,
) -> Result<DensityOperator<T>> {
    let dim = space.dim();
    let size = rng.random_range(2..=max_support.min(dim));
    let members = rand::seq::index::sample(rng, dim, size).into_vec();
    let terms: Vec<(Complex<T>, _)> = members
        .into_iter()
        .map(|k| {
            let magnitude: f64 = rng.random_range(0.2..=1.0);
            let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let amp = Complex::new(
                T::from_f64_lossy(magnitude * phase.cos()),
                T::from_f64_lossy(magnitude * phase.sin()),
            );
            (amp, space.ranking(k).clone())
        })
        .collect();
    DensityOperator::pure_state(space.clone(), &terms)
}
