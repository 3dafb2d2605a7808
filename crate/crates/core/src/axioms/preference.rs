use serde::Serialize;

use crate::error::Result;
use crate::hilbert::DensityOperator;
use crate::ranking::Alternative;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreferenceKind {
    StrongPositive,
    StrongNegative,
    Weak,
    /// Only for a support value that is not comparable (NaN).
    None,
}

/// A voter's stance on one subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Preference<T> {
    pub kind: PreferenceKind,
    /// Set alongside `StrongPositive`: full support is also positive support.
    pub also_weak: bool,
    pub support: T,
}

impl<T: Scalar> Preference<T> {
    pub fn from_support(support: T, eps: &T) -> Self {
        let kind = if support.partial_cmp(&support).is_none() {
            PreferenceKind::None
        } else if support <= *eps {
            PreferenceKind::StrongNegative
        } else if support >= T::one() - eps.clone() {
            PreferenceKind::StrongPositive
        } else {
            PreferenceKind::Weak
        };
        Self {
            kind,
            also_weak: kind == PreferenceKind::StrongPositive,
            support,
        }
    }

    /// Whether the voter holds a weak preference, reported kind aside.
    pub fn is_weak(&self) -> bool {
        self.kind == PreferenceKind::Weak || self.also_weak
    }
}

/// Classifies `Tr(Π^{x≻y} ρ)`.
pub fn classify_preference<T: Scalar>(
    rho: &DensityOperator<T>,
    x: Alternative,
    y: Alternative,
    eps: &T,
) -> Result<Preference<T>> {
    let p = rho.space().pair_projector(x, y)?;
    Ok(Preference::from_support(rho.support_probability(&p)?, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::RankingSpace;
    use crate::ranking::AlternativeSet;
    use num_complex::Complex;

    #[test]
    fn superposed_example_kinds() {
        let s = RankingSpace::new(AlternativeSet::new(["x", "y", "z"]).unwrap()).unwrap();
        let rho = DensityOperator::<f64>::pure_state(
            s.clone(),
            &[
                (Complex::new(1.0, 0.0), s.parse_ranking("x>y>z").unwrap()),
                (Complex::new(1.0, 0.0), s.parse_ranking("y>x>z").unwrap()),
            ],
        )
        .unwrap();
        let eps = 1e-9;
        let xz = classify_preference(&rho, 0, 2, &eps).unwrap();
        assert_eq!(xz.kind, PreferenceKind::StrongPositive);
        assert!(xz.is_weak());
        assert_eq!(
            classify_preference(&rho, 2, 0, &eps).unwrap().kind,
            PreferenceKind::StrongNegative
        );
        let xy = classify_preference(&rho, 0, 1, &eps).unwrap();
        assert_eq!(xy.kind, PreferenceKind::Weak);
        assert!((xy.support - 0.5).abs() < 1e-12);
        assert!(classify_preference(&rho, 1, 1, &eps).is_err());
    }

    #[test]
    fn boundaries() {
        let eps = 1e-9;
        assert_eq!(
            Preference::from_support(1e-9, &eps).kind,
            PreferenceKind::StrongNegative
        );
        assert_eq!(
            Preference::from_support(1.0 - 1e-9, &eps).kind,
            PreferenceKind::StrongPositive
        );
        assert_eq!(
            Preference::from_support(f64::NAN, &eps).kind,
            PreferenceKind::None
        );
        assert!(!Preference::from_support(0.0, &eps).is_weak());
    }
}
