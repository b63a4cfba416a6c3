//! Noncommutative polynomials in indexed generators and states on them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use crate::cumulant::{self, CumulantSpec, DegreeCaps};
use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::scalar::Scalar;

/// Word in the generators `X_0, X_1, ...`; the empty word is the unit.
pub type Word = Vec<usize>;

/// Finite linear combination of words. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Default)]
pub struct NCPolynomial<T> {
    terms: BTreeMap<Word, T>,
}

impl<T: Scalar> NCPolynomial<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn generator(i: usize) -> Self {
        Self::monomial(T::one(), vec![i])
    }

    pub fn monomial(c: T, word: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (T, Word)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, w) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// `sum_i coeffs[i] X_i`.
    pub fn linear(coeffs: &[T]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, c)| (c.clone(), vec![i])))
    }

    fn add_term(&mut self, word: Word, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest generator index plus one.
    pub fn generator_count(&self) -> usize {
        self.terms.keys().flatten().map(|&g| g + 1).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (c.clone() * s.clone(), w.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Replaces each generator `X_i` by `images[i]`.
    pub fn substitute(&self, images: &[NCPolynomial<T>]) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut prod = Self::constant(c.clone());
            for &g in w {
                let img = images
                    .get(g)
                    .ok_or_else(|| Error::SizeMismatch(format!("no image for generator {}", g + 1)))?;
                prod = &prod * img;
            }
            out = &out + &prod;
        }
        Ok(out)
    }
}

impl<T: Scalar> Add for &NCPolynomial<T> {
    type Output = NCPolynomial<T>;

    fn add(self, rhs: &NCPolynomial<T>) -> NCPolynomial<T> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &NCPolynomial<T> {
    type Output = NCPolynomial<T>;

    fn sub(self, rhs: &NCPolynomial<T>) -> NCPolynomial<T> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &NCPolynomial<T> {
    type Output = NCPolynomial<T>;

    fn neg(self) -> NCPolynomial<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Mul for &NCPolynomial<T> {
    type Output = NCPolynomial<T>;

    /// Concatenation of words, extended bilinearly.
    fn mul(self, rhs: &NCPolynomial<T>) -> NCPolynomial<T> {
        let mut out = NCPolynomial::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for NCPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for g in w {
                write!(f, "*X{}", g + 1)?;
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for NCPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// A state: a linear functional on words in the generators.
pub trait MomentFunctional<T: Scalar>: Sync {
    /// `phi(X_{w_1} ... X_{w_k})`; the empty word has moment 1.
    fn moment(&self, word: &[usize]) -> Result<T>;

    /// The calculus whose cumulants are natural for this state, if any.
    fn natural_family(&self) -> Option<LatticeFamily> {
        None
    }
}

/// Linear extension of a state to polynomials.
pub fn phi<T: Scalar, S: MomentFunctional<T> + ?Sized>(state: &S, p: &NCPolynomial<T>) -> Result<T> {
    let mut total = T::zero();
    for (w, c) in p.terms() {
        let m = state.moment(w)?;
        if !m.is_zero() {
            total = total + c.clone() * m;
        }
    }
    Ok(total)
}

/// Top joint cumulant `K_m(p_1, ..., p_m)` in the calculus `family`, built
/// from the state's moments of ordered products of the arguments.
pub fn joint_cumulant<T: Scalar, S: MomentFunctional<T> + ?Sized>(
    state: &S,
    family: LatticeFamily,
    ps: &[NCPolynomial<T>],
    caps: &DegreeCaps,
) -> Result<T> {
    let k = ps.len();
    if k > 63 {
        return Err(Error::DegreeCap { degree: k, cap: 63 });
    }
    // products of sub-selections, built from the selection without its last element
    let mut products: HashMap<u64, NCPolynomial<T>> = HashMap::new();
    cumulant::top_cumulant_by_subsets(k, family, caps, |mask| {
        let last = 63 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << last);
        let prod = if rest == 0 {
            ps[last].clone()
        } else {
            let base = products.get(&rest).expect("smaller selections are visited first");
            base * &ps[last]
        };
        let value = phi(state, &prod)?;
        products.insert(mask, prod);
        Ok(value)
    })
}

/// Moments of words in independent variables described by a cumulant spec.
/// Generator `i` is the spec label at index `i`.
pub struct SpecState<T> {
    spec: CumulantSpec<T>,
    caps: DegreeCaps,
    memo: Mutex<HashMap<Word, T>>,
}

impl<T: Scalar> SpecState<T> {
    pub fn new(spec: CumulantSpec<T>) -> Self {
        Self { spec, caps: DegreeCaps::default(), memo: Mutex::new(HashMap::new()) }
    }

    pub fn with_caps(mut self, caps: DegreeCaps) -> Self {
        self.caps = caps;
        self
    }

    pub fn spec(&self) -> &CumulantSpec<T> {
        &self.spec
    }
}

impl<T: Scalar> MomentFunctional<T> for SpecState<T> {
    fn moment(&self, word: &[usize]) -> Result<T> {
        if word.is_empty() {
            return Ok(T::one());
        }
        if let Some(&g) = word.iter().find(|&&g| g >= self.spec.labels().len()) {
            return Err(Error::MissingLabel(format!("generator X{}", g + 1)));
        }
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(word) {
            return Ok(v.clone());
        }
        let v = cumulant::moment_of_ids(&self.spec, word, &self.caps)?;
        self.memo.lock().expect("memo poisoned").insert(word.to_vec(), v.clone());
        Ok(v)
    }

    fn natural_family(&self) -> Option<LatticeFamily> {
        Some(self.spec.family())
    }
}

/// State of an i.i.d. sequence `X_0, X_1, ...` with the given univariate
/// cumulants `cumulants[k - 1] = K_k(X)`. Moments depend only on the kernel
/// of the word and are memoized by it.
pub struct IidState<T> {
    spec: CumulantSpec<T>,
    caps: DegreeCaps,
    memo: Mutex<HashMap<Vec<usize>, T>>,
}

impl<T: Scalar> IidState<T> {
    pub fn new(family: LatticeFamily, cumulants: &[T]) -> Result<Self> {
        let caps = DegreeCaps::default();
        let labels = caps.sublattice.max(caps.all);
        Ok(Self { spec: CumulantSpec::iid(family, labels, cumulants)?, caps, memo: Mutex::new(HashMap::new()) })
    }

    pub fn family(&self) -> LatticeFamily {
        self.spec.family()
    }
}

impl<T: Scalar> MomentFunctional<T> for IidState<T> {
    fn moment(&self, word: &[usize]) -> Result<T> {
        if word.is_empty() {
            return Ok(T::one());
        }
        let ker = crate::partition::kernel(word);
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(ker.rgs()) {
            return Ok(v.clone());
        }
        let v = cumulant::moment_of_ids(&self.spec, ker.rgs(), &self.caps)?;
        self.memo.lock().expect("memo poisoned").insert(ker.rgs().to_vec(), v.clone());
        Ok(v)
    }

    fn natural_family(&self) -> Option<LatticeFamily> {
        Some(self.spec.family())
    }
}
