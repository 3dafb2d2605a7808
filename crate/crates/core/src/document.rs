//! JSON profile documents.
//!
//! ```json
//! {"alternatives": ["a", "b", "c"],
//!  "voters": [{"pure": [[0.7071, 0, "a>b>c"], [0.7071, 0, "b>a>c"]]},
//!             {"mixed": [[0.5, "a>b>c"], [0.5, "c>b>a"]]}]}
//! ```
//!
//! A `"correlated": [[w, ["a>b>c", "b>a>c"]], ...]` block replaces
//! `"voters"` for classically correlated profiles. Rankings use the compact
//! `a>b>c` form throughout.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hilbert::{
    AlternativeState, DensityOperator, ProfileState, RankingSpace, DEFAULT_MAX_ALTERNATIVES,
};
use crate::ranking::AlternativeSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallotSpec {
    /// `[re, im, ranking]` amplitude terms.
    Pure(Vec<(f64, f64, String)>),
    /// `[weight, ranking]` terms.
    Mixed(Vec<(f64, String)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub alternatives: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voters: Option<Vec<BallotSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlated: Option<Vec<(f64, Vec<String>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

fn located(locus: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => {
            let message = other.to_string();
            Error::parse(locus.clone(), message)
        }
    }
}

impl ProfileDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn space(&self, max_alternatives: usize) -> Result<Arc<RankingSpace>> {
        let alternatives = AlternativeSet::new(self.alternatives.iter().cloned())
            .map_err(located("alternatives".into()))?;
        RankingSpace::with_max_alternatives(alternatives, max_alternatives)
            .map_err(located("alternatives".into()))
    }

    /// Builds and validates the profile on a fresh space.
    pub fn to_profile<T: Scalar>(&self, max_alternatives: usize) -> Result<ProfileState<T>> {
        let space = self.space(max_alternatives)?;
        let eps = T::default_eps();
        if let Some(delta) = self.delta {
            let m = space.m() as f64;
            if !(delta > 0.0 && delta < 1.0 / (m * m)) {
                return Err(Error::parse(
                    "delta",
                    format!("delta {delta} must lie in (0, 1/m²) for m = {m}"),
                ));
            }
        }
        match (&self.voters, &self.correlated) {
            (Some(_), Some(_)) => Err(Error::parse(
                "document",
                "give either \"voters\" or \"correlated\", not both",
            )),
            (None, None) => Err(Error::parse(
                "document",
                "missing \"voters\" or \"correlated\"",
            )),
            (Some(voters), None) => {
                if voters.is_empty() {
                    return Err(Error::parse("voters", "profile needs at least one voter"));
                }
                let ballots = voters
                    .iter()
                    .enumerate()
                    .map(|(i, b)| ballot_from_spec(&space, b, &format!("voters[{i}]"), &eps))
                    .collect::<Result<Vec<_>>>()?;
                ProfileState::product(ballots).map_err(located("voters".into()))
            }
            (None, Some(terms)) => {
                let mut parsed = Vec::with_capacity(terms.len());
                for (t, (w, tuple)) in terms.iter().enumerate() {
                    let rankings = tuple
                        .iter()
                        .enumerate()
                        .map(|(i, r)| {
                            space
                                .parse_ranking(r)
                                .map_err(located(format!("correlated[{t}][1][{i}]")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    parsed.push((T::from_f64_lossy(*w), rankings));
                }
                let tol = crate::scalar::max_of(eps, T::from_f64_lossy(1e-9));
                ProfileState::correlated(space, parsed, &tol).map_err(located("correlated".into()))
            }
        }
    }

    /// Serializes a profile; ballots must be diagonal or rank one.
    pub fn from_profile<T: Scalar>(p: &ProfileState<T>) -> Result<Self> {
        let space = p.space();
        let alternatives = space.alternatives().names().to_vec();
        if let Some(factors) = p.factors() {
            let voters = factors
                .iter()
                .map(ballot_to_spec)
                .collect::<Result<Vec<_>>>()?;
            Ok(Self {
                alternatives,
                voters: Some(voters),
                correlated: None,
                delta: None,
            })
        } else {
            let terms = p
                .joint_terms()
                .unwrap_or_default()
                .iter()
                .map(|(w, tuple)| {
                    (
                        w.to_f64_lossy(),
                        tuple.iter().map(|&k| space.format_ranking(k)).collect(),
                    )
                })
                .collect();
            Ok(Self {
                alternatives,
                voters: None,
                correlated: Some(terms),
                delta: None,
            })
        }
    }
}

pub fn parse_profile<T: Scalar>(text: &str) -> Result<ProfileState<T>> {
    ProfileDocument::from_json(text)?.to_profile(DEFAULT_MAX_ALTERNATIVES)
}

fn ballot_from_spec<T: Scalar>(
    space: &Arc<RankingSpace>,
    spec: &BallotSpec,
    locus: &str,
    eps: &T,
) -> Result<DensityOperator<T>> {
    match spec {
        BallotSpec::Pure(terms) => {
            let parsed = terms
                .iter()
                .enumerate()
                .map(|(j, (re, im, r))| {
                    let ranking = space
                        .parse_ranking(r)
                        .map_err(located(format!("{locus}.pure[{j}]")))?;
                    Ok((
                        Complex::new(T::from_f64_lossy(*re), T::from_f64_lossy(*im)),
                        ranking,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            DensityOperator::pure_state(space.clone(), &parsed)
                .map_err(located(format!("{locus}.pure")))
        }
        BallotSpec::Mixed(terms) => {
            let parsed = terms
                .iter()
                .enumerate()
                .map(|(j, (w, r))| {
                    let ranking = space
                        .parse_ranking(r)
                        .map_err(located(format!("{locus}.mixed[{j}]")))?;
                    Ok((T::from_f64_lossy(*w), ranking))
                })
                .collect::<Result<Vec<_>>>()?;
            let rho = DensityOperator::mixed_state(space.clone(), &parsed)
                .map_err(located(format!("{locus}.mixed")))?;
            rho.validate(eps)
                .map_err(located(format!("{locus}.mixed")))?;
            Ok(rho)
        }
    }
}

/// Term-list form of one ballot.
pub fn ballot_to_spec<T: Scalar>(rho: &DensityOperator<T>) -> Result<BallotSpec> {
    let space = rho.space();
    let diag: Vec<f64> = rho.diagonal().iter().map(Scalar::to_f64_lossy).collect();
    let eps = T::default_eps();
    if rho.is_diagonal(&eps) {
        let terms = diag
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(k, w)| (*w, space.format_ranking(k)))
            .collect();
        return Ok(BallotSpec::Mixed(terms));
    }
    // rank one: ψ_k = ρ_kp / √ρ_pp for the heaviest diagonal entry p
    let pivot = (0..diag.len())
        .max_by(|&a, &b| diag[a].total_cmp(&diag[b]))
        .unwrap_or(0);
    let scale = diag[pivot].sqrt();
    let amp = |k: usize| {
        let e = rho.entry(k, pivot);
        (e.re.to_f64_lossy() / scale, e.im.to_f64_lossy() / scale)
    };
    let tol = 1e-9;
    for j in 0..diag.len() {
        for k in 0..diag.len() {
            let (aj, bj) = amp(j);
            let (ak, bk) = amp(k);
            let e = rho.entry(j, k);
            let re = aj * ak + bj * bk;
            let im = bj * ak - aj * bk;
            if (e.re.to_f64_lossy() - re).abs() > tol || (e.im.to_f64_lossy() - im).abs() > tol {
                return Err(Error::InvalidArgument(
                    "ballot is neither diagonal nor pure and has no term-list form".into(),
                ));
            }
        }
    }
    let terms = (0..diag.len())
        .filter(|&k| diag[k] > 0.0)
        .map(|k| {
            let (re, im) = amp(k);
            (re, im, space.format_ranking(k))
        })
        .collect();
    Ok(BallotSpec::Pure(terms))
}

/// Rounds to 12 significant digits for reporting.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// `{ranking: probability}` over basis rankings with weight above `eps`.
pub fn ranking_distribution<T: Scalar>(rho: &DensityOperator<T>, eps: &T) -> Map<String, Value> {
    let space = rho.space();
    rho.diagonal()
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w > *eps)
        .map(|(k, w)| (space.format_ranking(k), number(w.to_f64_lossy())))
        .collect()
}

/// `{alternative: probability}` over alternatives with weight above `eps`.
pub fn alternative_distribution<T: Scalar>(
    alpha: &AlternativeState<T>,
    eps: &T,
) -> Map<String, Value> {
    let names = alpha.alternatives().names();
    alpha
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > *eps)
        .map(|(a, p)| (names[a].clone(), number(p.to_f64_lossy())))
        .collect()
}

pub fn ballot_json<T: Scalar>(rho: &DensityOperator<T>) -> Value {
    match ballot_to_spec(rho) {
        Ok(spec) => serde_json::to_value(spec).expect("ballot specs serialize"),
        Err(_) => Value::Object(ranking_distribution(rho, &T::default_eps())),
    }
}

pub fn profile_json<T: Scalar>(p: &ProfileState<T>) -> Value {
    match ProfileDocument::from_profile(p) {
        Ok(doc) => serde_json::to_value(doc).expect("documents serialize"),
        Err(e) => Value::String(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::natural_extension;

    const SUPERPOSED: &str = r#"{"alternatives":["x","y","z"],"voters":[{"pure":[[0.7071,0,"x>y>z"],[0.7071,0,"y>x>z"]]},{"pure":[[1,0,"z>x>y"]]}]}"#;

    #[test]
    fn parses_superposed_profile() {
        let p = parse_profile::<f64>(SUPERPOSED).unwrap();
        assert_eq!(p.voters(), 2);
        let alpha = natural_extension(&p.partial_ballot(0).unwrap());
        assert!((alpha.probabilities()[0] - 0.5).abs() < 1e-12);
        let second = p.partial_ballot(1).unwrap();
        assert_eq!(
            second.diagonal_entry(
                p.space()
                    .index_of(&p.space().parse_ranking("z>x>y").unwrap())
                    .unwrap()
            ),
            1.0
        );
    }

    #[test]
    fn parses_mixed_and_correlated() {
        let mixed =
            r#"{"alternatives":["a","b","c"],"voters":[{"mixed":[[0.5,"a>b>c"],[0.5,"b>a>c"]]}]}"#;
        let p = parse_profile::<f64>(mixed).unwrap();
        assert_eq!(
            p.partial_ballot(0).unwrap().diagonal(),
            vec![0.5, 0.0, 0.5, 0.0, 0.0, 0.0]
        );

        let corr = r#"{"alternatives":["a","b","c"],"correlated":[[0.5,["a>b>c","a>b>c"]],[0.5,["b>a>c","b>a>c"]]]}"#;
        let p = parse_profile::<f64>(corr).unwrap();
        assert_eq!(p.partial_ballot(0).unwrap(), p.partial_ballot(1).unwrap());
    }

    fn locus_of(text: &str) -> String {
        match parse_profile::<f64>(text) {
            Err(Error::Parse { locus, .. }) => locus,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_loci() {
        assert!(
            locus_of(r#"{"alternatives":["a","b"],"voters":[{"pure":[[1,0,"a>b"]]}"#)
                .starts_with("line 1")
        );
        assert_eq!(
            locus_of(
                r#"{"alternatives":["a","b","c"],"voters":[{"mixed":[[1,"a>b>c"]]},{"pure":[[1,0,"a>q>c"]]}]}"#
            ),
            "voters[1].pure[0]"
        );
        assert_eq!(
            locus_of(r#"{"alternatives":["a","b","c"],"voters":[{"pure":[[0,0,"a>b>c"]]}]}"#),
            "voters[0].pure"
        );
        assert_eq!(
            locus_of(
                r#"{"alternatives":["a","b","c"],"voters":[{"mixed":[[1,"a>b>c"]]}],"correlated":[[1,["a>b>c"]]]}"#
            ),
            "document"
        );
        assert_eq!(
            locus_of(
                r#"{"alternatives":["a","b","c"],"voters":[{"mixed":[[1,"a>b>c"]]}],"delta":0.2}"#
            ),
            "delta"
        );
        assert_eq!(
            locus_of(r#"{"alternatives":["a","b","c"],"correlated":[[0.3,["a>b>c"]]]}"#),
            "correlated"
        );
    }

    #[test]
    fn round_trip_preserves_ballots() {
        let p = parse_profile::<f64>(SUPERPOSED).unwrap();
        let doc = ProfileDocument::from_profile(&p).unwrap();
        let q: ProfileState<f64> = ProfileDocument::from_json(&doc.to_json())
            .unwrap()
            .to_profile(6)
            .unwrap();
        for i in 0..2 {
            assert!(
                p.partial_ballot(i)
                    .unwrap()
                    .max_abs_diff(&q.partial_ballot(i).unwrap())
                    < 1e-12
            );
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 6.0), 0.166666666667);
        assert_eq!(number(0.5).to_string(), "0.5");
        assert_eq!(round12(0.0), 0.0);
    }
}
