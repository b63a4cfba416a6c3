mod common;

use std::collections::BTreeMap;

use common::*;
use ncgauss::lab::{self, LukacsInput, Verdict};
use ncgauss::scalar::ratio;
use ncgauss::{enumerate, CumulantSpec, LatticeFamily, Matrix, PairWeight, Rational};
use proptest::prelude::*;

fn spec(family: LatticeFamily, ks: &[Rational]) -> CumulantSpec<Rational> {
    CumulantSpec::univariate(family, "X", ks).unwrap()
}

fn gaussian(family: LatticeFamily, var: i64) -> CumulantSpec<Rational> {
    spec(family, &[r(0), r(var)])
}

fn pythagorean() -> Vec<Vec<Rational>> {
    vec![
        vec![ratio(3, 5), ratio(4, 5)],
        vec![ratio(-5, 13), ratio(12, 13)],
        vec![ratio(1, 3), ratio(2, 3), ratio(2, 3)],
        vec![ratio(2, 7), ratio(-3, 7), ratio(6, 7)],
        vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(-1, 2)],
    ]
}

#[test]
fn skitovic_counterexample_across_eps() {
    for eps in [r(1), r(-1), ratio(1, 2), ratio(-1, 2), ratio(1, 10), ratio(-1, 10)] {
        let rep = lab::check_skitovic_failure(&eps, 8).unwrap();
        assert!(rep.passed(), "eps = {eps}");
        assert!(rep.flags["mixed_vanish"] && rep.flags["non_semicircular"]);
        assert_eq!(rep.find("K3(X1)"), Some(&(&eps / r(4))));
        assert_eq!(rep.find("K3(X2)"), Some(&eps));
        // per-column contributions scale with eps and cancel
        assert_eq!(rep.find("K3(Y1,Y1,Y2)[X3]"), Some(&(r(-4) * &eps)));
        assert_eq!(rep.find("K3(Y1,Y2,Y2)"), Some(&r(0)));
    }
    assert!(lab::check_skitovic_failure(&r(0), 8).is_err());
}

/// With `K3(X1) = eps` instead of `eps/4` the third-order columns no
/// longer cancel.
#[test]
fn skitovic_cancellation_needs_the_quarter() {
    let (c, mut specs) = lab::skitovic_data(&r(1)).unwrap();
    specs[0] = spec(LatticeFamily::NonCrossing, &[r(0), r(1), r(1)]);
    let k = ncgauss::cumulant::linear_form_cumulants(&c, &specs, &[0, 0, 1]).unwrap();
    assert_eq!(k, r(6));
}

#[test]
fn maxwell_forward_on_orthogonal_matrices() {
    let weights = [PairWeight::Classical, PairWeight::Free, PairWeight::Boolean, PairWeight::QDeformed(ratio(-1, 3))];
    for u in orthogonal_matrices() {
        assert!(u.is_orthogonal());
        for w in &weights {
            let rep = lab::check_maxwell_forward(w, &u, 4).unwrap();
            assert!(rep.passed(), "{} {:?}", w.name(), u.to_rows());
            assert!(rep.flags["spherically_symmetric"]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Rotation invariance holds for an arbitrary pair weight.
    #[test]
    fn maxwell_forward_for_custom_weights(seed in any::<u64>(), which in 0usize..5) {
        let mut g = rng(seed);
        let mut table = BTreeMap::new();
        for n in [2, 4] {
            for p in enumerate(LatticeFamily::Pair, n) {
                table.insert(p, rand_rational(&mut g));
            }
        }
        let u = orthogonal_matrices().swap_remove(which);
        prop_assert!(lab::check_maxwell_forward(&PairWeight::Custom(table), &u, 4).unwrap().passed());
    }

    #[test]
    fn stability_fixed_points(which in 0usize..5, k3 in -3i64..=3, k4 in -3i64..=3,
                              family in prop::sample::select(vec![LatticeFamily::All, LatticeFamily::NonCrossing])) {
        let a = &pythagorean()[which];
        let s = spec(family, &[r(0), r(1), r(k3), r(k4)]);
        let rep = lab::check_stability(a, &s, 6).unwrap();
        prop_assert_eq!(rep.passed(), k3 == 0 && k4 == 0);
        // the last tuple has sum a_i = 1, which leaves the mean free
        prop_assert_eq!(rep.flags["gaussian_forced"], which != 4);
    }
}

#[test]
fn stability_rejects_bad_coefficients() {
    let g = gaussian(LatticeFamily::All, 1);
    assert!(lab::check_stability(&[r(1), r(1)], &g, 4).is_err());
    assert!(lab::check_stability(&[r(1), r(0)], &g, 4).is_err());
    assert!(lab::check_stability(&[], &g, 4).is_err());
    assert_eq!(lab::check_stability(&[ratio(3, 5), ratio(4, 5)], &g, 4).unwrap().find("sum a^3"), Some(&ratio(91, 125)));
}

#[test]
fn maxwell_rejects_non_orthogonal() {
    let scaled = Matrix::<Rational>::identity(2).scale(&r(2));
    assert!(lab::check_maxwell_forward(&PairWeight::Classical, &scaled, 3).is_err());
    let f = lab::maxwell_contraction_factors(&orthogonal_matrices()[3], 4);
    assert_eq!(f[0], vec![r(1), ratio(17, 27), ratio(33, 81)]);
}

#[test]
fn lukacs_branches() {
    for n in [2usize, 3] {
        for w in [PairWeight::Classical, PairWeight::Free] {
            let rep = lab::check_lukacs(n, &LukacsInput::Gaussian(w), 4).unwrap();
            assert!(rep.passed());
            assert!(rep.flags["gaussian"] && rep.flags["independent"]);
        }
        for family in [LatticeFamily::All, LatticeFamily::NonCrossing] {
            let input = LukacsInput::Cumulants { family, cumulants: vec![r(0), r(1), r(0), r(2)] };
            let rep = lab::check_lukacs(n, &input, 4).unwrap();
            assert!(rep.passed(), "n={n} {family}");
            assert!(!rep.flags["gaussian"] && !rep.flags["independent"]);
            assert_eq!(rep.find("K3(S1,S1,T)"), Some(&r(2 * (n as i64 - 1))));
            assert_eq!(rep.find("(n-1)K4(X)"), Some(&r(2 * (n as i64 - 1))));
        }
    }
    assert!(lab::check_lukacs(1, &LukacsInput::Gaussian(PairWeight::Classical), 4).is_err());
    assert!(lab::check_lukacs(2, &LukacsInput::Gaussian(PairWeight::Classical), 2).is_err());
}

#[test]
fn bernstein_verdicts() {
    let coeffs = [r(1), r(1), r(1), r(-1)];
    let g = gaussian(LatticeFamily::All, 1);
    let rep = lab::check_bernstein(coeffs.clone(), &[g.clone(), g.clone()], 6).unwrap();
    assert!(rep.passed() && rep.flags["equal_variance"] && rep.flags["system_invertible"]);
    let rep = lab::check_bernstein(coeffs.clone(), &[g.clone(), gaussian(LatticeFamily::All, 3)], 6).unwrap();
    assert!(!rep.passed() && !rep.flags["equal_variance"]);
    let k4 = spec(LatticeFamily::All, &[r(0), r(1), r(0), r(1)]);
    let rep = lab::check_bernstein(coeffs.clone(), &[k4.clone(), k4], 6).unwrap();
    assert!(!rep.passed() && !rep.flags["mixed_vanish"]);
    let fg = gaussian(LatticeFamily::NonCrossing, 2);
    assert!(lab::check_bernstein([r(2), r(1), r(1), r(-2)], &[fg.clone(), fg.clone()], 6).unwrap().passed());
    assert!(lab::check_bernstein(coeffs, &[g, fg], 4).is_err());
}

#[test]
fn sd_identity_verdicts() {
    let b = [r(1), r(2), r(-1)];
    for family in [LatticeFamily::All, LatticeFamily::NonCrossing] {
        let g = gaussian(family, 1);
        let rep = lab::check_sd_identity(&b, &vec![g; 3], &r(1), &r(1), 5).unwrap();
        assert!(rep.passed());
        assert!(rep.flags["b_distinct"] && rep.flags["vandermonde_regular"]);
        assert_eq!(rep.find("det V"), Some(&r(6)));
    }
    let g = gaussian(LatticeFamily::All, 1);
    let mixed = vec![g.clone(), spec(LatticeFamily::NonCrossing, &[r(0), r(1)]), g.clone()];
    assert!(lab::check_sd_identity(&b, &mixed, &r(1), &r(1), 4).is_err());
    assert!(lab::check_sd_identity(&b[..2], &vec![g; 3], &r(1), &r(1), 4).is_err());
}

#[test]
fn cramer_minors_match_oracle() {
    let rep = lab::check_cramer_failure(&r(1), 5).unwrap();
    let minors: Vec<Rational> = (1..=6).map(|i| rep.find(&format!("minor{i}")).unwrap().clone()).collect();
    assert_eq!(minors, vec![r(1), r(1), r(0), r(-4), r(-19), r(-126)]);
    assert!(!rep.passed());
    for (eps, m3) in [(2, -3), (5, -24), (10, -99)] {
        let rep = lab::check_cramer_failure(&r(eps), 5).unwrap();
        assert_eq!(rep.find("minor3"), Some(&r(m3)));
        assert_eq!(rep.verdict, Verdict::Fail);
    }
    // minor3 = 1 - eps^2 for the first few moments 1, 0, 1, eps
    for eps in [ratio(1, 2), ratio(-1, 3)] {
        let rep = lab::check_cramer_failure(&eps, 3).unwrap();
        assert_eq!(rep.find("minor3"), Some(&(r(1) - &eps * &eps)));
    }
    let grid: Vec<Rational> = [1, 2, 5, 10].iter().map(|&e| r(e)).collect();
    let (reports, first) = lab::cramer_grid(&grid, 5).unwrap();
    assert_eq!(reports.len(), 4);
    assert_eq!(first, Some(r(1)));
    let (_, first) = lab::cramer_grid(&[r(0)], 5).unwrap();
    assert_eq!(first, None);
    assert!(lab::check_cramer_failure(&r(1), 0).is_err());
}

#[test]
fn free_moments_of_the_deformation() {
    // m3 = eps, m4 = 2, m5 = 5 eps, m6 = 5 + 3 eps^2
    let eps = ratio(1, 2);
    let m = lab::free_moments(&eps, 6).unwrap();
    assert_eq!(m, vec![r(1), r(0), r(1), eps.clone(), r(2), r(5) * &eps, r(5) + r(3) * &eps * &eps]);
}

#[test]
fn report_json_shape() {
    let rep = lab::check_skitovic_failure(&r(1), 4).unwrap();
    let v = rep.to_json();
    let obj = v.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    assert_eq!(keys, vec!["check", "flags", "max_order", "params", "verdict", "witnesses"]);
    assert_eq!(v["check"], "skitovic");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["params"]["eps"], "1/1");
    assert_eq!(v["max_order"], 4);
    let w = &v["witnesses"][0];
    assert!(w["desc"].is_string() && w["value"].is_string());
    assert_eq!(v["flags"]["mixed_vanish"], true);
}
