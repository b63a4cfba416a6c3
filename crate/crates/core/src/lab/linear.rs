use num_traits::Zero;
use serde_json::json;

use super::report::{matrix_value, vector_value};
use super::{describe, mixed_words, zero, CheckReport, Verdict};
use crate::cumulant::{linear_form_cumulants, CumulantSpec};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{self, MomentFunctional, NCPolynomial};
use crate::scalar::{is_one, Scalar};
use crate::wick::{PairWeight, WickState};
use crate::Rational;

fn require_univariate(spec: &CumulantSpec<Rational>, what: &str) -> Result<()> {
    if spec.labels().len() == 1 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} needs a spec with a single repeated label")))
    }
}

fn cumulant_list(spec: &CumulantSpec<Rational>, max_order: usize) -> Vec<Rational> {
    (1..=max_order).map(|m| spec.diagonal(0, m)).collect()
}

/// Fixed-point test `K_m(sum a_i X_i) = (sum a_i^m) K_m(X) = K_m(X)` for
/// `m <= max_order`, with `sum a_i^2 = 1` and every `a_i != 0`.
pub fn check_stability(a: &[Rational], spec: &CumulantSpec<Rational>, max_order: usize) -> Result<CheckReport> {
    require_univariate(spec, "stability check")?;
    if a.is_empty() || a.iter().any(|x| x.is_zero()) {
        return Err(Error::Precondition("coefficients must be nonzero".into()));
    }
    let norm = a.iter().fold(zero(), |acc, x| acc + x * x);
    if !is_one(&norm) {
        return Err(Error::Precondition(format!("sum of squared coefficients is {norm}, not 1")));
    }
    let mut rep = CheckReport::new("stability", max_order);
    rep.param("a", vector_value(a)).param("cumulants", vector_value(&cumulant_list(spec, max_order)));
    let mut fixed = true;
    let mut forced = true;
    for m in 1..=max_order {
        let power_sum = a.iter().fold(zero(), |acc, x| acc + x.powu(m as u32));
        let k = spec.diagonal(0, m);
        let ks = &power_sum * &k;
        rep.witness(format!("sum a^{m}"), power_sum.clone());
        rep.witness(format!("K{m}(S)"), ks.clone());
        if ks != k {
            fixed = false;
            rep.witness(format!("K{m}(S)-K{m}(X)"), &ks - &k);
        }
        if m != 2 && is_one(&power_sum) {
            forced = false;
        }
    }
    rep.flag("fixed_point", fixed).flag("gaussian_forced", forced);
    rep.verdict = Verdict::from_bool(fixed);
    Ok(rep)
}

/// `sum_k U[j,k]^p` for every row `j` and `p = 2..=max_power`; the factors
/// by which a partitioned cumulant with a block of size `p` rescales.
pub fn maxwell_contraction_factors(u: &Matrix<Rational>, max_power: usize) -> Vec<Vec<Rational>> {
    (0..u.rows())
        .map(|j| (2..=max_power).map(|p| u.row(j).iter().fold(zero(), |acc, x| acc + x.powu(p as u32))).collect())
        .collect()
}

/// `phi(Y_g) = phi(X_g)` for `Y = U X` and every word `g` of length
/// `<= degree` over the `Y` labels.
pub fn check_maxwell_forward(w: &PairWeight<Rational>, u: &Matrix<Rational>, degree: usize) -> Result<CheckReport> {
    if !u.is_orthogonal() {
        return Err(Error::Matrix("Maxwell check needs an exactly orthogonal matrix".into()));
    }
    let n = u.rows();
    let state = WickState::new(w.clone());
    let ys: Vec<NCPolynomial<Rational>> = (0..n).map(|j| NCPolynomial::linear(u.row(j))).collect();
    let mut rep = CheckReport::new("maxwell", degree);
    rep.param("weight", json!(w.name())).param("matrix", matrix_value(u));
    let mut compared = 0u64;
    let mut mismatches = Vec::new();
    // depth-first over words, extending the prefix product one letter at a time
    let mut stack: Vec<(Vec<usize>, NCPolynomial<Rational>)> = vec![(Vec::new(), NCPolynomial::one())];
    while let Some((word, prefix)) = stack.pop() {
        if word.len() == degree {
            continue;
        }
        for j in (0..n).rev() {
            let mut g = word.clone();
            g.push(j);
            let prod = &prefix * &ys[j];
            let lhs = poly::phi(&state, &prod)?;
            let rhs = state.moment(&g)?;
            compared += 1;
            if lhs != rhs {
                mismatches.push((g.clone(), lhs - rhs));
            }
            stack.push((g, prod));
        }
    }
    mismatches.sort();
    rep.witness("words compared", Rational::from_integer(compared.into()));
    for (g, diff) in &mismatches {
        let labels: Vec<String> = g.iter().map(|j| format!("Y{}", j + 1)).collect();
        rep.witness(format!("phi({})-phi(X)", labels.join("")), diff.clone());
    }
    for (j, row) in maxwell_contraction_factors(u, degree).into_iter().enumerate() {
        for (i, f) in row.into_iter().enumerate() {
            rep.witness(format!("sum_k U[{},k]^{}", j + 1, i + 2), f);
        }
    }
    rep.flag("spherically_symmetric", mismatches.is_empty());
    rep.verdict = Verdict::from_bool(mismatches.is_empty());
    Ok(rep)
}

/// Bernstein data for `Y1 = alpha X1 + beta X2`, `Y2 = gamma X1 + delta X2`
/// with `alpha gamma + beta delta = 0`. Passes when every mixed cumulant of
/// `(Y1, Y2)` up to `max_order` vanishes and each order-`m` linear system of
/// the proof is invertible, which forces `K_m(X1) = K_m(X2) = 0` for `m >= 3`.
pub fn check_bernstein(coeffs: [Rational; 4], specs: &[CumulantSpec<Rational>; 2], max_order: usize) -> Result<CheckReport> {
    let [alpha, beta, gamma, delta] = coeffs.clone();
    if coeffs.iter().any(|c| c.is_zero()) {
        return Err(Error::Precondition("alpha, beta, gamma, delta must be nonzero".into()));
    }
    if !(&alpha * &gamma + &beta * &delta).is_zero() {
        return Err(Error::Precondition("alpha*gamma + beta*delta must vanish".into()));
    }
    for s in specs {
        require_univariate(s, "Bernstein check")?;
    }
    if specs[0].family() != specs[1].family() {
        return Err(Error::CalculusMismatch("both variables must use one calculus".into()));
    }
    let c = Matrix::from_rows(vec![vec![alpha.clone(), beta.clone()], vec![gamma.clone(), delta.clone()]])?;
    let mut rep = CheckReport::new("bernstein", max_order);
    rep.param("coefficients", vector_value(&coeffs))
        .param("family", json!(specs[0].family().name()))
        .param("cumulants_x1", vector_value(&cumulant_list(&specs[0], max_order)))
        .param("cumulants_x2", vector_value(&cumulant_list(&specs[1], max_order)));
    let names = ["Y1", "Y2"];
    let k2y = linear_form_cumulants(&c, specs, &[0, 1])?;
    rep.witness("K2(Y1,Y2)", k2y);
    let mut mixed_zero = true;
    let mut nonzero = Vec::new();
    for args in mixed_words(max_order) {
        let v = linear_form_cumulants(&c, specs, &args)?;
        if !v.is_zero() {
            mixed_zero = false;
            if args != [0, 1] {
                nonzero.push((describe(&names, &args), v));
            }
        }
    }
    let mut invertible = true;
    for m in 3..=max_order {
        let e = m as u32;
        let system = Matrix::from_rows(vec![
            vec![alpha.powu(e - 1) * &gamma, beta.powu(e - 1) * &delta],
            vec![alpha.powu(e - 2) * gamma.powu(2), beta.powu(e - 2) * delta.powu(2)],
        ])?;
        let det = system.determinant()?;
        if det.is_zero() {
            invertible = false;
        }
        rep.witness(format!("det{m}"), det);
    }
    for (d, v) in nonzero {
        rep.witness(d, v);
    }
    rep.flag("equal_variance", specs[0].diagonal(0, 2) == specs[1].diagonal(0, 2))
        .flag("mixed_vanish", mixed_zero)
        .flag("system_invertible", invertible);
    rep.verdict = Verdict::from_bool(mixed_zero && invertible);
    Ok(rep)
}
