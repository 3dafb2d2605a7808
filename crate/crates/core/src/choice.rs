//! Quantum social choice functions: profiles in, a distribution over
//! alternatives out. Built by composing a welfare rule with an extension.

use crate::error::Result;
use crate::hilbert::{AlternativeState, DensityOperator, ProfileState};
use crate::ranking::{Alternative, AlternativeSet};
use crate::scalar::Scalar;
use crate::welfare::{Qcv, QcvParams, WelfareRule};

/// A map `D(ℜ) → D(𝒜)`.
pub trait ChoiceExtension<T: Scalar>: Send + Sync {
    fn name(&self) -> String;
    fn apply(&self, rho: &DensityOperator<T>) -> Result<AlternativeState<T>>;
}

/// A map `D(ℜ^{⊗n}) → D(𝒜)`.
pub trait ChoiceRule<T: Scalar>: Send + Sync {
    fn name(&self) -> String;
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>>;
}

impl<T: Scalar, R: ChoiceRule<T> + ?Sized> ChoiceRule<T> for Box<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>> {
        (**self).evaluate(profile)
    }
}

impl<T: Scalar, R: ChoiceRule<T> + ?Sized> ChoiceRule<T> for std::sync::Arc<R> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>> {
        (**self).evaluate(profile)
    }
}

impl<T: Scalar, R: ChoiceRule<T> + ?Sized> ChoiceRule<T> for &R {
    fn name(&self) -> String {
        (**self).name()
    }
    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>> {
        (**self).evaluate(profile)
    }
}

/// `Λ(ρ)[a] = Tr(Π^a ρ)`: each ranking's weight goes to its top alternative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NaturalExtension;

impl<T: Scalar> ChoiceExtension<T> for NaturalExtension {
    fn name(&self) -> String {
        "natural".into()
    }

    fn apply(&self, rho: &DensityOperator<T>) -> Result<AlternativeState<T>> {
        Ok(natural_extension(rho))
    }
}

pub fn natural_extension<T: Scalar>(rho: &DensityOperator<T>) -> AlternativeState<T> {
    let space = rho.space();
    let mut probabilities = vec![T::zero(); space.m()];
    for (k, w) in rho.diagonal().into_iter().enumerate() {
        let top = space.top_of(k);
        probabilities[top] = probabilities[top].clone() + w;
    }
    AlternativeState::new_unchecked(space.alternatives().clone(), probabilities)
}

/// `h ∘ E`.
#[derive(Clone, Debug)]
pub struct Composed<H, E> {
    pub extension: H,
    pub welfare: E,
    label: Option<String>,
}

impl<H, E> Composed<H, E> {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.label = Some(name.into());
        self
    }
}

impl<T, H, E> ChoiceRule<T> for Composed<H, E>
where
    T: Scalar,
    H: ChoiceExtension<T>,
    E: WelfareRule<T>,
{
    fn name(&self) -> String {
        match &self.label {
            Some(label) => label.clone(),
            None => format!("{}∘{}", self.extension.name(), self.welfare.name()),
        }
    }

    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>> {
        self.extension.apply(&self.welfare.evaluate(profile)?)
    }
}

pub fn compose<H, E>(extension: H, welfare: E) -> Composed<H, E> {
    Composed {
        extension,
        welfare,
        label: None,
    }
}

pub type Qcvne<T> = Composed<NaturalExtension, Qcv<T>>;

pub fn qcvne_rule<T: Scalar>(params: QcvParams<T>) -> Qcvne<T> {
    compose(NaturalExtension, Qcv::new(params)).with_name("qcvne")
}

pub fn qcvne<T: Scalar>(p: &ProfileState<T>, params: &QcvParams<T>) -> Result<AlternativeState<T>> {
    qcvne_rule(params.clone()).evaluate(p)
}

/// Always elects the same alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantChoice {
    alternatives: AlternativeSet,
    winner: Alternative,
}

impl ConstantChoice {
    pub fn new(alternatives: AlternativeSet, winner: Alternative) -> Result<Self> {
        alternatives.check(winner)?;
        Ok(Self {
            alternatives,
            winner,
        })
    }
}

impl<T: Scalar> ChoiceRule<T> for ConstantChoice {
    fn name(&self) -> String {
        format!("constant:{}", self.alternatives.name(self.winner))
    }

    fn evaluate(&self, profile: &ProfileState<T>) -> Result<AlternativeState<T>> {
        AlternativeState::point(profile.space().alternatives().clone(), self.winner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::RankingSpace;
    use crate::ranking::ClassicalProfile;
    use crate::welfare::dictator_rule;
    use num_complex::Complex;
    use std::sync::Arc;

    fn close(a: &AlternativeState<f64>, want: &[f64]) -> bool {
        a.probabilities()
            .iter()
            .zip(want)
            .all(|(p, w)| (p - w).abs() < 1e-12)
    }

    fn basis(s: &Arc<RankingSpace>, rankings: &[&str]) -> ProfileState<f64> {
        ProfileState::basis(
            s.clone(),
            &ClassicalProfile::parse(s.alternatives(), rankings).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn natural_extension_examples() {
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
        assert!(close(&natural_extension(&rho1), &[0.5, 0.5, 0.0]));

        let rho2 =
            DensityOperator::point_mass(s.clone(), &s.parse_ranking("z>x>y").unwrap()).unwrap();
        let profile = ProfileState::product(vec![rho1, rho2]).unwrap();
        let xi = compose(NaturalExtension, dictator_rule(0));
        assert_eq!(ChoiceRule::<f64>::name(&xi), "natural∘dictator:1");
        assert!(close(&xi.evaluate(&profile).unwrap(), &[0.5, 0.5, 0.0]));

        let t = RankingSpace::letters(3).unwrap();
        let point =
            DensityOperator::<f64>::point_mass(t.clone(), &t.parse_ranking("a>b>c").unwrap())
                .unwrap();
        assert!(close(&natural_extension(&point), &[1.0, 0.0, 0.0]));
        let uniform = DensityOperator::<f64>::maximally_mixed(t);
        assert!(close(&natural_extension(&uniform), &[1.0 / 3.0; 3]));
    }

    #[test]
    fn qcvne_examples() {
        let s = RankingSpace::letters(3).unwrap();
        let params = QcvParams::for_alternatives(3);
        let unanimous = basis(&s, &["a>b>c", "a>b>c", "a>b>c"]);
        assert!(close(
            &qcvne(&unanimous, &params).unwrap(),
            &[1.0, 0.0, 0.0]
        ));
        let cycle = basis(&s, &["a>b>c", "b>c>a", "c>a>b"]);
        assert!(close(&qcvne(&cycle, &params).unwrap(), &[1.0 / 3.0; 3]));
        let two = basis(&s, &["a>b>c", "a>c>b"]);
        assert!(close(&qcvne(&two, &params).unwrap(), &[1.0, 0.0, 0.0]));
        assert_eq!(ChoiceRule::<f64>::name(&qcvne_rule(params)), "qcvne");
    }

    #[test]
    fn constant_rule() {
        let s = RankingSpace::letters(3).unwrap();
        let rule = ConstantChoice::new(s.alternatives().clone(), 0).unwrap();
        let out = ChoiceRule::<f64>::evaluate(&rule, &basis(&s, &["c>b>a", "b>a>c"])).unwrap();
        assert!(close(&out, &[1.0, 0.0, 0.0]));
        assert_eq!(ChoiceRule::<f64>::name(&rule), "constant:a");
    }
}
