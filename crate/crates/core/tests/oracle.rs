//! Exact-rational recomputation of QCV on basis profiles, written without
//! the library's tally, weak-order or projector code.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qsc::ranking::factorial;
use qsc::welfare::qcv_basis;
use qsc::{
    qcv, BigRational, ClassicalProfile, ExactParams, ExactProfile, ProfileState, QcvParams,
    Ranking, RankingSpace,
};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn orders(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in 0..m {
        for tail in orders(m - 1) {
            let mut o = vec![head];
            o.extend(tail.into_iter().map(|a| if a >= head { a + 1 } else { a }));
            out.push(o);
        }
    }
    out
}

fn above(order: &[usize], x: usize, y: usize) -> bool {
    order.iter().position(|&a| a == x) < order.iter().position(|&a| a == y)
}

/// σ³ keyed by ranking order.
fn oracle(m: usize, ballots: &[Vec<usize>], delta: &Q) -> Vec<(Vec<usize>, Q)> {
    let n = ballots.len();
    let all_orders = orders(m);
    let half = Q::from_integer(BigInt::from(factorial(m) / 2));
    let count = |x: usize, y: usize| ballots.iter().filter(|b| above(b, x, y)).count();

    let score: Vec<usize> = (0..m)
        .map(|x| {
            (0..m)
                .filter(|&y| y != x && count(x, y) >= count(y, x))
                .count()
        })
        .collect();
    let extends = |o: &Vec<usize>| o.windows(2).all(|w| score[w[0]] >= score[w[1]]);
    let ext = Q::from_integer(BigInt::from(
        all_orders.iter().filter(|o| extends(o)).count(),
    ));

    let mut any = Vec::new();
    let mut all = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if x != y && count(x, y) > 0 {
                any.push((x, y));
            }
            if x != y && count(x, y) == n {
                all.push((x, y));
            }
        }
    }
    let keep = Q::one() - Q::from_integer(BigInt::from(any.len())) * delta;

    let mut sigma: Vec<(Vec<usize>, Q)> = all_orders
        .into_iter()
        .map(|o| {
            let mut w = if extends(&o) { &keep / &ext } else { Q::zero() };
            for &(x, y) in &any {
                if above(&o, x, y) {
                    w += delta / &half;
                }
            }
            if !all.iter().all(|&(x, y)| above(&o, x, y)) {
                w = Q::zero();
            }
            (o, w)
        })
        .collect();
    let mass: Q = sigma.iter().map(|(_, w)| w.clone()).sum();
    for (_, w) in &mut sigma {
        *w = &*w / &mass;
    }
    sigma
}

fn check(m: usize, ballots: &[Vec<usize>], delta: &Q) {
    let sp = RankingSpace::letters(m).unwrap();
    let profile = ClassicalProfile::new(
        ballots
            .iter()
            .map(|o| Ranking::new(o.clone()).unwrap())
            .collect(),
    )
    .unwrap();
    let params: ExactParams = QcvParams::new(delta.clone(), Q::zero()).unwrap();
    let stages = qcv_basis(&sp, &profile, &params).unwrap();
    let state: ExactProfile = ProfileState::basis(sp.clone(), &profile).unwrap();
    let general = qcv(&state, &params).unwrap();
    for (order, w) in oracle(m, ballots, delta) {
        let k = sp.index_of(&Ranking::new(order.clone()).unwrap()).unwrap();
        assert_eq!(
            stages.sigma3.diagonal_entry(k),
            w,
            "{order:?} in {ballots:?}"
        );
        assert_eq!(general.diagonal_entry(k), w, "{order:?} in {ballots:?}");
    }
}

#[test]
fn every_two_voter_profile_on_three() {
    let all = orders(3);
    for delta in [q(1, 16), q(1, 20)] {
        for a in &all {
            for b in &all {
                check(3, &[a.clone(), b.clone()], &delta);
            }
        }
    }
}

#[test]
fn cycle_is_uniform() {
    let cycle = [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    for (_, w) in oracle(3, &cycle, &q(1, 20)) {
        assert_eq!(w, q(1, 6));
    }
    check(3, &cycle, &q(1, 20));
}

fn admissible(m: usize) -> Vec<Q> {
    let bound = q(1, (m * m) as i64);
    [q(1, 16), q(1, 20)]
        .into_iter()
        .filter(|d| *d < bound)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_profiles_match(
        (m, ballots, pick) in (2usize..=4).prop_flat_map(|m| (
            Just(m),
            prop::collection::vec(Just((0..m).collect::<Vec<_>>()).prop_shuffle(), 1..=4),
            any::<bool>(),
        ))
    ) {
        let deltas = admissible(m);
        let delta = &deltas[usize::from(pick) % deltas.len()];
        check(m, &ballots, delta);
    }
}
