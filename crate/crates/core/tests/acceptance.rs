//! Acceptance criteria 1-10. Each test prints one PASS/FAIL line.

use std::sync::{Arc, OnceLock};

use num_complex::Complex;
use qsc::axioms::{
    check_qic, check_qic_preservation, run_arrow_suite, run_gs_suite, AxiomReport, CheckConfig,
    FamilySpec, ProfileSampler, RuleRef, SuiteReport, SuiteVerdict, Verdict,
};
use qsc::choice::{compose, qcvne_rule, ChoiceRule, NaturalExtension};
use qsc::welfare::{
    dictator_rule, encoded_pairs_all, encoded_pairs_any, qcv, veto_rule, Qcv, QcvParams,
};
use qsc::{BigRational, ClassicalProfile, DensityOperator, ProfileState, RankingSpace};

/// Numerical tolerance for every floating-point comparison below.
const TOL: f64 = 1e-9;
const SUITE_TRIALS: usize = 500;
const SUITE_SEED: u64 = 42;
const SAMPLE_PER_SHAPE: usize = 90;

fn report(n: u32, pass: bool, what: &str) {
    println!(
        "criterion {n:>2}: {} {what}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn suite_config() -> CheckConfig<f64> {
    CheckConfig::new(3, 3)
        .with_trials(SUITE_TRIALS)
        .with_seed(SUITE_SEED)
}

fn qcv3() -> Qcv<f64> {
    Qcv::new(QcvParams::for_alternatives(3))
}

fn gs_report() -> &'static SuiteReport<f64> {
    static GS: OnceLock<SuiteReport<f64>> = OnceLock::new();
    GS.get_or_init(|| {
        run_gs_suite(&qcvne_rule(QcvParams::for_alternatives(3)), &suite_config()).unwrap()
    })
}

fn qcv_qic_report() -> &'static AxiomReport<f64> {
    static QIC: OnceLock<AxiomReport<f64>> = OnceLock::new();
    QIC.get_or_init(|| check_qic(RuleRef::Welfare(&qcv3()), &suite_config()).unwrap())
}

fn first_witness(r: &AxiomReport<f64>) -> String {
    r.witnesses
        .first()
        .map(|w| w.to_json().to_string())
        .unwrap_or_default()
}

#[test]
fn criterion_01_superposed_dictator() {
    let s = RankingSpace::new(qsc::AlternativeSet::new(["x", "y", "z"]).unwrap()).unwrap();
    let one = Complex::new(1.0, 0.0);
    let rho1 = DensityOperator::pure_state(
        s.clone(),
        &[
            (one, s.parse_ranking("x>y>z").unwrap()),
            (one, s.parse_ranking("y>x>z").unwrap()),
        ],
    )
    .unwrap();
    let rho2 = DensityOperator::point_mass(s.clone(), &s.parse_ranking("z>x>y").unwrap()).unwrap();
    let p = ProfileState::product(vec![rho1, rho2]).unwrap();
    let xi = compose(NaturalExtension, dictator_rule(0));
    let alpha = xi.evaluate(&p).unwrap();
    let expected: [f64; 3] = [0.5, 0.5, 0.0];
    let dev = alpha
        .probabilities()
        .iter()
        .zip(expected)
        .map(|(a, e): (&f64, f64)| (a - e).abs())
        .fold(0.0, f64::max);
    let pass = dev <= TOL;
    report(
        1,
        pass,
        &format!("superposed profile, max deviation {dev:.3e}"),
    );
    assert!(pass);
}

/// Seeded profiles over m in {3, 4} and n in {2, 3, 4}.
fn unanimity_sample() -> Vec<ProfileState<f64>> {
    let mut out = Vec::new();
    for m in [3, 4] {
        let s = RankingSpace::letters(m).unwrap();
        for n in [2, 3, 4] {
            let sampler = ProfileSampler::new(s.clone(), n, 1000 + (10 * m + n) as u64);
            for t in 0..SAMPLE_PER_SHAPE {
                out.push(sampler.profile(t).unwrap());
            }
        }
    }
    out
}

fn pair_support(rho: &DensityOperator<f64>, (x, y): (usize, usize)) -> f64 {
    rho.support_probability(&rho.space().pair_projector(x, y).unwrap())
        .unwrap()
}

#[test]
fn criterion_02_unanimity_enforced() {
    let sample = unanimity_sample();
    let mut checked = 0;
    let mut worst: f64 = 1.0;
    for p in &sample {
        let soc = qcv(p, &QcvParams::for_alternatives(p.space().m())).unwrap();
        for pair in encoded_pairs_all(p, &TOL).unwrap() {
            checked += 1;
            worst = worst.min(pair_support(&soc, pair));
        }
    }
    let pass = sample.len() >= 500 && worst >= 1.0 - TOL;
    report(
        2,
        pass,
        &format!(
            "{} profiles, {checked} unanimous pairs, least society support {worst:.12}",
            sample.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_minority_shot() {
    let sample = unanimity_sample();
    let mut checked = 0;
    let mut least = f64::INFINITY;
    for p in &sample {
        let soc = qcv(p, &QcvParams::for_alternatives(p.space().m())).unwrap();
        for pair in encoded_pairs_any(p, &TOL).unwrap() {
            checked += 1;
            least = least.min(pair_support(&soc, pair));
        }
    }
    let pass = sample.len() >= 500 && least > TOL;
    report(
        3,
        pass,
        &format!(
            "{} profiles, {checked} voiced pairs, least society support {least:.3e}",
            sample.len()
        ),
    );
    assert!(pass);
}

fn basis_profile(s: &Arc<RankingSpace>, rankings: &[&str]) -> ProfileState<f64> {
    ProfileState::basis(
        s.clone(),
        &ClassicalProfile::parse(s.alternatives(), rankings).unwrap(),
    )
    .unwrap()
}

#[test]
fn criterion_04_condorcet_cycle() {
    let s = RankingSpace::letters(3).unwrap();
    let p = basis_profile(&s, &["a>b>c", "b>c>a", "c>a>b"]);
    let mut dev: f64 = 0.0;
    for delta in [0.02, 0.05, 0.1] {
        let soc = qcv(&p, &QcvParams::new(delta, TOL).unwrap()).unwrap();
        for w in soc.diagonal() {
            dev = dev.max((w - 1.0 / 6.0).abs());
        }
    }
    let exact_space = RankingSpace::letters(3).unwrap();
    let classical =
        ClassicalProfile::parse(exact_space.alternatives(), &["a>b>c", "b>c>a", "c>a>b"]).unwrap();
    let exact = ProfileState::<BigRational>::basis(exact_space, &classical).unwrap();
    let sixth = BigRational::new(1.into(), 6.into());
    let mut exact_ok = true;
    for delta in [(1, 50), (1, 20), (1, 10)] {
        let params = QcvParams::new(
            BigRational::new(delta.0.into(), delta.1.into()),
            BigRational::from_integer(0.into()),
        )
        .unwrap();
        let soc = qcv(&exact, &params).unwrap();
        exact_ok &= soc.diagonal().iter().all(|w| *w == sixth);
    }
    let pass = dev <= TOL && exact_ok;
    report(
        4,
        pass,
        &format!("cycle is uniform, max deviation {dev:.3e}, exact rational agrees: {exact_ok}"),
    );
    assert!(pass);
}

#[test]
fn criterion_05_two_voter() {
    let s = RankingSpace::letters(3).unwrap();
    let p = basis_profile(&s, &["a>b>c", "a>c>b"]);
    let abc = s.index_of(&s.parse_ranking("a>b>c").unwrap()).unwrap();
    let acb = s.index_of(&s.parse_ranking("a>c>b").unwrap()).unwrap();
    let mut dev: f64 = 0.0;
    for delta in [0.001, 0.02, 0.05, 0.1, 0.111] {
        let soc = qcv(&p, &QcvParams::new(delta, TOL).unwrap()).unwrap();
        for (k, w) in soc.diagonal().into_iter().enumerate() {
            let want = if k == abc || k == acb { 0.5 } else { 0.0 };
            dev = dev.max((w - want).abs());
        }
    }
    let pass = dev <= TOL;
    report(
        5,
        pass,
        &format!("two-voter split, max deviation {dev:.3e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_qic_hunt() {
    let cfg = suite_config();
    let qcv_report = qcv_qic_report();
    let qcvne_report = gs_report().component("qic").unwrap();

    let s = RankingSpace::letters(3).unwrap();
    let veto = veto_rule(s.alternatives(), s.parse_ranking("a>b>c").unwrap()).unwrap();
    let veto_choice = compose(NaturalExtension, veto);
    let control = check_qic(RuleRef::Choice(&veto_choice), &cfg).unwrap();
    let control_ok = control.witness_count >= 1
        && control
            .witnesses
            .iter()
            .all(|w| w.verify(RuleRef::Choice(&veto_choice), &cfg.eps).unwrap());

    let qcv_ok = qcv_report.witness_count == 0;
    let qcvne_ok = qcvne_report.witness_count == 0;
    let pass = qcv_ok && qcvne_ok && control_ok && cfg.trials >= 500;
    report(
        6,
        pass,
        &format!(
            "qic hunt over {} profiles, family {}: qcv {} witnesses, qcvne {} witnesses, veto control {} witnesses (verified: {control_ok})",
            cfg.trials,
            qcv_report.family.as_deref().unwrap_or("?"),
            qcv_report.witness_count,
            qcvne_report.witness_count,
            control.witness_count,
        ),
    );
    if !qcvne_ok {
        println!(
            "    qcvne witnesses by clause: {}",
            qcvne_report.detail["by_clause"]
        );
        println!("    first qcvne witness: {}", first_witness(qcvne_report));
    }
    assert!(pass);
}

#[test]
fn criterion_07_gs_bundle() {
    let gs = gs_report();
    let line = gs
        .components
        .iter()
        .map(|(r, _)| format!("{} {}", r.axiom, r.verdict.as_str()))
        .collect::<Vec<_>>()
        .join(", ");
    let onto = gs.component("onto").unwrap();
    let every_voter = |axiom: &str| {
        let r = gs.component(axiom).unwrap();
        r.verdict == Verdict::Falsified && r.detail["eliminated"] == serde_json::json!([1, 2, 3])
    };
    let pass = gs.verdict == SuiteVerdict::BypassDemonstrated
        && gs.component("qic").unwrap().verdict == Verdict::HoldsOnSample
        && onto.detail["achieved"] == 3
        && every_voter("dictatorship-sharp")
        && every_voter("dictatorship-unsharp");
    report(
        7,
        pass,
        &format!("gs-suite qcvne: {} ({line})", gs.verdict.as_str()),
    );
    assert!(pass);
}

#[test]
fn criterion_08_arrow_bundle() {
    let arrow = run_arrow_suite(&qcv3(), &suite_config()).unwrap();
    let line = arrow
        .components
        .iter()
        .map(|(r, _)| format!("{} {}", r.axiom, r.verdict.as_str()))
        .collect::<Vec<_>>()
        .join(", ");
    let all_pass = arrow
        .components
        .iter()
        .all(|(r, needed)| needed.contains(&r.verdict));
    let pass = arrow.verdict == SuiteVerdict::BypassDemonstrated
        && arrow.components.len() == 5
        && all_pass;
    report(
        8,
        pass,
        &format!("arrow-suite qcv: {} ({line})", arrow.verdict.as_str()),
    );
    assert!(pass);
}

#[test]
fn criterion_09_preservation() {
    let cfg = suite_config();
    let xi = qcvne_rule(QcvParams::for_alternatives(3));
    let r = check_qic_preservation(&qcv3(), &xi, &cfg).unwrap();
    let pass = r.witness_count == 0;
    report(
        9,
        pass,
        &format!(
            "{} triples, {} with no welfare witness, {} choice witnesses among those",
            r.detail["triples"], r.detail["welfare_clean"], r.witness_count
        ),
    );
    if !pass {
        println!("    first violation: {}", first_witness(&r));
    }
    assert!(pass);
}

#[test]
fn criterion_10_determinism() {
    let cfg = CheckConfig::<f64>::new(3, 3)
        .with_trials(60)
        .with_seed(SUITE_SEED)
        .with_family(FamilySpec::full());
    let xi = qcvne_rule(QcvParams::for_alternatives(3));
    let run = || {
        let a = run_gs_suite(&xi, &cfg).unwrap().to_json().to_string();
        let b = run_arrow_suite(&qcv3(), &cfg)
            .unwrap()
            .to_json()
            .to_string();
        a + &b
    };
    let first = run();
    let second = run();
    let pass = first == second && first.len() > 100;
    report(
        10,
        pass,
        &format!(
            "two runs, {} bytes each, identical: {}",
            first.len(),
            first == second
        ),
    );
    assert!(pass);
}
