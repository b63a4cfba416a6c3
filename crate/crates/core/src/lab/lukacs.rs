use serde_json::json;

use super::report::vector_value;
use super::{describe, mixed_words, CheckReport, Verdict};
use crate::cumulant::DegreeCaps;
use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::poly::{self, IidState, MomentFunctional, NCPolynomial};
use num_traits::Zero;
use crate::wick::{PairWeight, WickState};
use crate::Rational;

/// Distribution of the i.i.d. variables in a Lukacs check.
#[derive(Debug, Clone, PartialEq)]
pub enum LukacsInput {
    /// Gaussian with the given pair weight, in its matching calculus.
    Gaussian(PairWeight<Rational>),
    /// Univariate cumulants `K_1, K_2, ...` in a calculus.
    Cumulants { family: LatticeFamily, cumulants: Vec<Rational> },
}

/// Sample mean `S1 = sum X_k` against sample variation
/// `T = sum X_k^2 - S1^2 / n`. Gaussian input must give vanishing mixed
/// cumulants over all tuples of length `2..=max_order`; otherwise the
/// witness `K_{m-1}(S1, ..., S1, T) = (n - 1) K_m(X)` must appear for
/// `3 <= m <= max_order`.
pub fn check_lukacs(n_vars: usize, input: &LukacsInput, max_order: usize) -> Result<CheckReport> {
    if n_vars < 2 {
        return Err(Error::Precondition("Lukacs check needs at least two variables".into()));
    }
    if max_order < 3 {
        return Err(Error::Precondition("Lukacs check needs max order at least 3".into()));
    }
    let mut rep = CheckReport::new("lukacs", max_order);
    rep.param("n_vars", json!(n_vars));
    let (state, family): (Box<dyn MomentFunctional<Rational>>, LatticeFamily) = match input {
        LukacsInput::Gaussian(w) => {
            rep.param("weight", json!(w.name()));
            (Box::new(WickState::new(w.clone())), w.matching_family().unwrap_or(LatticeFamily::All))
        }
        LukacsInput::Cumulants { family, cumulants } => {
            rep.param("family", json!(family.name())).param("cumulants", vector_value(cumulants));
            (Box::new(IidState::new(*family, cumulants)?), *family)
        }
    };
    let caps = DegreeCaps::default();
    let n = Rational::from_integer((n_vars as i64).into());
    let s1 = NCPolynomial::linear(&vec![Rational::from_integer(1.into()); n_vars]);
    let squares = (0..n_vars).fold(NCPolynomial::zero(), |acc, k| &acc + &NCPolynomial::generator(k).pow(2));
    let t = &squares - &s1.pow(2).scale(&(Rational::from_integer(1.into()) / &n));
    let args_of = |w: &[usize]| -> Vec<NCPolynomial<Rational>> { w.iter().map(|&i| if i == 0 { s1.clone() } else { t.clone() }).collect() };
    let names = ["S1", "T"];

    let x = NCPolynomial::generator(0);
    let mut gaussian = true;
    let mut witness_ok = true;
    for m in 3..=max_order {
        let km = poly::joint_cumulant(state.as_ref(), family, &vec![x.clone(); m], &caps)?;
        gaussian &= km.is_zero();
        let expected = (&n - Rational::from_integer(1.into())) * &km;
        let mut slots = vec![0; m - 2];
        slots.push(1);
        let got = poly::joint_cumulant(state.as_ref(), family, &args_of(&slots), &caps)?;
        rep.witness(format!("K{m}(X)"), km);
        rep.witness(format!("(n-1)K{m}(X)"), expected.clone());
        rep.witness(describe(&names, &slots), got.clone());
        witness_ok &= got == expected;
    }
    let mut mixed_zero = true;
    for w in mixed_words(max_order) {
        let v = poly::joint_cumulant(state.as_ref(), family, &args_of(&w), &caps)?;
        if !v.is_zero() {
            mixed_zero = false;
            if rep.find(&describe(&names, &w)).is_none() {
                rep.witness(describe(&names, &w), v);
            }
        }
    }
    rep.flag("gaussian", gaussian).flag("independent", mixed_zero).flag("witness_identity", witness_ok);
    rep.verdict = Verdict::from_bool(if gaussian { mixed_zero } else { witness_ok && !mixed_zero });
    Ok(rep)
}
