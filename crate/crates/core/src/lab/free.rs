use num_traits::Zero;
use serde_json::json;

use super::report::{rational_value, vector_value};
use super::{describe, mixed_words, one, zero, CheckReport, Verdict};
use crate::cumulant::{linear_form_cumulants, linear_form_terms, moments_from_cumulants, CumulantSpec};
use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::matrix::Matrix;
use crate::scalar::{sign, Scalar};
use crate::Rational;

fn r(p: i64) -> Rational {
    Rational::from_integer(p.into())
}

fn free_spec(k3: Rational) -> Result<CumulantSpec<Rational>> {
    CumulantSpec::univariate(LatticeFamily::NonCrossing, "X", &[zero(), one(), k3])
}

/// Coefficient matrix (rows `Y1`, `Y2`) and free specs of the three
/// variables: `K2 = 1` throughout, `K3(X1) = eps/4`, `K3(X2) = K3(X3) = eps`.
pub fn skitovic_data(eps: &Rational) -> Result<(Matrix<Rational>, Vec<CumulantSpec<Rational>>)> {
    let c = Matrix::from_rows(vec![vec![r(2), r(-1), r(2)], vec![r(2), r(2), r(-1)]])?;
    let specs = vec![free_spec(eps / r(4))?, free_spec(eps.clone())?, free_spec(eps.clone())?];
    Ok((c, specs))
}

/// Free counterexample to Skitovich-Darmois: every mixed free cumulant of
/// `Y1 = 2X1 - X2 + 2X3`, `Y2 = 2X1 + 2X2 - X3` vanishes through
/// `max_order`, while no `X_i` is semicircular.
pub fn check_skitovic_failure(eps: &Rational, max_order: usize) -> Result<CheckReport> {
    if eps.is_zero() {
        return Err(Error::Precondition("eps = 0 makes every X_i semicircular".into()));
    }
    let (c, specs) = skitovic_data(eps)?;
    let names = ["Y1", "Y2"];
    let mut rep = CheckReport::new("skitovic", max_order);
    rep.param("eps", rational_value(eps));
    for args in [vec![0, 1], vec![0, 0, 1], vec![0, 1, 1]] {
        if args.len() > max_order {
            continue;
        }
        let d = describe(&names, &args);
        for t in linear_form_terms(&c, &specs, &args)? {
            rep.witness(format!("{d}[X{}]", t.column + 1), t.value);
        }
        rep.witness(d, linear_form_cumulants(&c, &specs, &args)?);
    }
    let mut mixed_zero = true;
    for args in mixed_words(max_order) {
        let v = linear_form_cumulants(&c, &specs, &args)?;
        if !v.is_zero() {
            mixed_zero = false;
            rep.witness(describe(&names, &args), v);
        }
    }
    let mut non_semicircular = true;
    for (i, s) in specs.iter().enumerate() {
        let k3 = s.diagonal(0, 3);
        non_semicircular &= !k3.is_zero();
        rep.witness(format!("K3(X{})", i + 1), k3);
    }
    rep.flag("mixed_vanish", mixed_zero).flag("non_semicircular", non_semicircular);
    rep.verdict = Verdict::from_bool(mixed_zero && non_semicircular);
    Ok(rep)
}

/// Skitovich-Darmois cumulant identities for `Y1 = sum X_j`,
/// `Y2 = sum b_j X_j`: at each order `m`, when all mixed cumulants of order
/// `m` vanish, `sum_j (alpha^m + beta^m b_j^m) K_m(X_j)` must equal
/// `sum_j (alpha + beta b_j)^m K_m(X_j)`.
pub fn check_sd_identity(
    b: &[Rational],
    specs: &[CumulantSpec<Rational>],
    alpha: &Rational,
    beta: &Rational,
    max_order: usize,
) -> Result<CheckReport> {
    if b.len() != specs.len() || b.is_empty() {
        return Err(Error::SizeMismatch(format!("{} coefficients for {} variables", b.len(), specs.len())));
    }
    if specs.iter().any(|s| s.labels().len() != 1) {
        return Err(Error::InvalidSpec("each variable needs a single-label spec".into()));
    }
    if specs.iter().any(|s| s.family() != specs[0].family()) {
        return Err(Error::CalculusMismatch("all variables must use one calculus".into()));
    }
    let n = b.len();
    let c = Matrix::from_rows(vec![vec![one(); n], b.to_vec()])?;
    let mut rep = CheckReport::new("sd-identity", max_order);
    rep.param("b", vector_value(b))
        .param("alpha", rational_value(alpha))
        .param("beta", rational_value(beta))
        .param("family", json!(specs[0].family().name()));
    let names = ["Y1", "Y2"];
    let words = mixed_words(max_order);
    let mut consistent = true;
    let mut all_mixed_zero = true;
    for m in 1..=max_order {
        let e = m as u32;
        let mut mixed_zero = true;
        for args in words.iter().filter(|w| w.len() == m) {
            let v = linear_form_cumulants(&c, specs, args)?;
            if !v.is_zero() {
                mixed_zero = false;
                rep.witness(describe(&names, args), v);
            }
        }
        all_mixed_zero &= mixed_zero;
        let (mut lhs, mut rhs) = (zero(), zero());
        for (bj, s) in b.iter().zip(specs) {
            let k = s.diagonal(0, m);
            lhs += (alpha.powu(e) + beta.powu(e) * bj.powu(e)) * &k;
            rhs += (alpha + beta * bj).powu(e) * &k;
        }
        rep.witness(format!("LHS{m}"), lhs.clone());
        rep.witness(format!("RHS{m}"), rhs.clone());
        if mixed_zero && lhs != rhs {
            consistent = false;
            rep.witness(format!("LHS{m}-RHS{m}"), lhs - rhs);
        }
    }
    let vandermonde = Matrix::from_rows(b.iter().map(|bj| (0..n as u32).map(|k| bj.powu(k)).collect()).collect())?;
    let det = vandermonde.determinant()?;
    let distinct = (0..n).all(|i| (0..i).all(|j| b[i] != b[j]));
    rep.witness("det V", det.clone());
    rep.flag("b_distinct", distinct)
        .flag("vandermonde_regular", !det.is_zero())
        .flag("mixed_vanish", all_mixed_zero);
    rep.verdict = Verdict::from_bool(consistent);
    Ok(rep)
}

/// Free moments `m_0, ..., m_max_degree` of the variable with free
/// cumulants `K2 = 1`, `K3 = eps`, all others zero.
pub fn free_moments(eps: &Rational, max_degree: usize) -> Result<Vec<Rational>> {
    let spec = free_spec(eps.clone())?;
    let mut out = vec![one()];
    for n in 1..=max_degree {
        out.push(moments_from_cumulants(&spec, &vec!["X"; n])?);
    }
    Ok(out)
}

/// Leading principal minors of the Hankel matrix `[m_{i+j}]_{0 <= i,j <= k}`
/// of the eps-deformed free moment sequence; "measure plausible at depth k"
/// iff all are positive.
pub fn check_cramer_failure(eps: &Rational, hankel_size: usize) -> Result<CheckReport> {
    if hankel_size == 0 {
        return Err(Error::Precondition("Hankel depth must be at least 1".into()));
    }
    let moments = free_moments(eps, 2 * hankel_size)?;
    let minors = Matrix::hankel(&moments, hankel_size + 1)?.leading_principal_minors()?;
    let mut rep = CheckReport::new("cramer", 2 * hankel_size);
    rep.param("eps", rational_value(eps)).param("hankel_size", json!(hankel_size));
    for (i, m) in moments.iter().enumerate() {
        rep.witness(format!("m{i}"), m.clone());
    }
    let mut positive = true;
    for (i, d) in minors.iter().enumerate() {
        positive &= sign(d) > 0;
        rep.witness(format!("minor{}", i + 1), d.clone());
    }
    rep.flag("measure_plausible", positive);
    rep.verdict = Verdict::from_bool(positive);
    Ok(rep)
}

/// Runs [`check_cramer_failure`] over `grid` and returns the reports with
/// the first `eps` whose Hankel minors are not all positive.
pub fn cramer_grid(grid: &[Rational], hankel_size: usize) -> Result<(Vec<CheckReport>, Option<Rational>)> {
    let reports: Vec<CheckReport> = grid.iter().map(|e| check_cramer_failure(e, hankel_size)).collect::<Result<_>>()?;
    let first = grid.iter().zip(&reports).find(|(_, rep)| !rep.passed()).map(|(e, _)| e.clone());
    Ok((reports, first))
}
