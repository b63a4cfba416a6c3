//! Generalized Gaussian states: moments of words are sums of a pair-partition
//! weight over the pairings that only match equal labels,
//!
//! `phi(X_{h(1)} ... X_{h(n)}) = sum_{pi in Pi_n^(2), pi <= ker h} nu(pi)`.
//!
//! Words are evaluated literally by running over all pairings of the word
//! length and filtering by the kernel; nothing is shortcut.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::cumulant::DegreeCaps;
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeFamily};
use crate::partition::{kernel, Partition};
use crate::poly::{self, MomentFunctional, NCPolynomial};
use crate::scalar::{falling_factorial, Scalar};

/// Longest word the Wick evaluator accepts (`Pi_14^(2)` has 135135 pairings).
pub const MAX_WORD_LEN: usize = 14;

/// The weight `nu` on pair partitions.
#[derive(Clone, PartialEq)]
pub enum PairWeight<T> {
    /// `nu = 1`.
    Classical,
    /// Indicator of noncrossing pairings.
    Free,
    /// Indicator of interval pairings.
    Boolean,
    /// `nu(pi) = q^{cr(pi)}`.
    QDeformed(T),
    /// Explicit table; must cover every pairing of every length used.
    Custom(BTreeMap<Partition, T>),
}

impl<T: Scalar> PairWeight<T> {
    pub fn weight(&self, p: &Partition) -> Result<T> {
        if !p.is_pair() {
            return Err(Error::NotPairPartition(p.to_string()));
        }
        Ok(match self {
            PairWeight::Classical => T::one(),
            PairWeight::Free => indicator(p.is_noncrossing()),
            PairWeight::Boolean => indicator(p.is_interval()),
            PairWeight::QDeformed(q) => q.powu(p.crossing_number()? as u32),
            PairWeight::Custom(table) => table.get(p).cloned().ok_or_else(|| Error::MissingWeight(p.to_string()))?,
        })
    }

    /// The calculus in which joint cumulants of polynomials are meaningful.
    pub fn matching_family(&self) -> Option<LatticeFamily> {
        match self {
            PairWeight::Classical | PairWeight::QDeformed(_) => Some(LatticeFamily::All),
            PairWeight::Free => Some(LatticeFamily::NonCrossing),
            PairWeight::Boolean => Some(LatticeFamily::Interval),
            PairWeight::Custom(_) => None,
        }
    }

    pub fn name(&self) -> String
    where
        T: fmt::Debug,
    {
        match self {
            PairWeight::Classical => "classical".into(),
            PairWeight::Free => "free".into(),
            PairWeight::Boolean => "boolean".into(),
            PairWeight::QDeformed(q) => format!("q:{q:?}"),
            PairWeight::Custom(t) => format!("custom({} entries)", t.len()),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for PairWeight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairWeight::Classical => f.write_str("Classical"),
            PairWeight::Free => f.write_str("Free"),
            PairWeight::Boolean => f.write_str("Boolean"),
            PairWeight::QDeformed(q) => write!(f, "QDeformed({q:?})"),
            PairWeight::Custom(t) => write!(f, "Custom({} entries)", t.len()),
        }
    }
}

fn indicator<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

type WeightedPairings<T> = Vec<(Vec<(usize, usize)>, T)>;

/// Gaussian state for a fixed weight. Pairing tables are built once per word
/// length and moments are memoized by the kernel of the word, which is all
/// the formula depends on.
pub struct WickState<T> {
    weight: PairWeight<T>,
    tables: Vec<OnceLock<Result<WeightedPairings<T>>>>,
    memo: Mutex<HashMap<Vec<usize>, T>>,
}

impl<T: Scalar> WickState<T> {
    pub fn new(weight: PairWeight<T>) -> Self {
        Self {
            weight,
            tables: (0..=MAX_WORD_LEN / 2).map(|_| OnceLock::new()).collect(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn weight(&self) -> &PairWeight<T> {
        &self.weight
    }

    fn pairings(&self, len: usize) -> Result<&WeightedPairings<T>> {
        let slot = &self.tables[len / 2];
        let built = slot.get_or_init(|| {
            lattice::enumerate(LatticeFamily::Pair, len)
                .into_iter()
                .map(|p| {
                    let w = self.weight.weight(&p)?;
                    let pairs = p.blocks().iter().map(|b| (b[0], b[1])).collect();
                    Ok((pairs, w))
                })
                .filter(|r| r.as_ref().map_or(true, |(_, w)| !w.is_zero()))
                .collect()
        });
        built.as_ref().map_err(Clone::clone)
    }

    /// Moment of a word given by arbitrary comparable labels.
    pub fn moment_of_labels<L: PartialEq>(&self, word: &[L]) -> Result<T> {
        self.moment_of_kernel(&kernel(word))
    }

    fn moment_of_kernel(&self, ker: &Partition) -> Result<T> {
        let n = ker.n();
        if n % 2 == 1 {
            return Ok(T::zero());
        }
        if n > MAX_WORD_LEN {
            return Err(Error::DegreeCap { degree: n, cap: MAX_WORD_LEN });
        }
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(ker.rgs()) {
            return Ok(v.clone());
        }
        let labels = ker.rgs();
        let mut total = T::zero();
        for (pairs, w) in self.pairings(n)? {
            if pairs.iter().all(|&(a, b)| labels[a] == labels[b]) {
                total = total + w.clone();
            }
        }
        self.memo.lock().expect("memo poisoned").insert(labels.to_vec(), total.clone());
        Ok(total)
    }
}

impl<T: Scalar> MomentFunctional<T> for WickState<T> {
    fn moment(&self, word: &[usize]) -> Result<T> {
        self.moment_of_labels(word)
    }

    fn natural_family(&self) -> Option<LatticeFamily> {
        self.weight.matching_family()
    }
}

/// `phi(X_{h(1)} ... X_{h(n)})` for a Gaussian family with weight `w`.
pub fn wick_moment<T: Scalar, L: PartialEq>(w: &PairWeight<T>, word: &[L]) -> Result<T> {
    WickState::new(w.clone()).moment_of_labels(word)
}

/// Linear extension of the Gaussian state to a polynomial.
pub fn phi<T: Scalar>(w: &PairWeight<T>, p: &NCPolynomial<T>) -> Result<T> {
    poly::phi(&WickState::new(w.clone()), p)
}

/// Checks that `family` is the calculus matched with the weight.
pub fn check_family<T: Scalar>(w: &PairWeight<T>, family: LatticeFamily) -> Result<()> {
    match w.matching_family() {
        Some(f) if f != family => Err(Error::CalculusMismatch(format!(
            "weight {:?} pairs with the '{f}' calculus, not '{family}'",
            w
        ))),
        _ => Ok(()),
    }
}

/// Whether the weight/calculus pairing is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    #[default]
    Enforce,
    Override,
}

/// `K_m(p_1, ..., p_m)` of compound variables in a Gaussian family, in the
/// calculus matching the weight.
pub fn joint_cumulant_of_polynomials<T: Scalar>(
    state: &WickState<T>,
    family: LatticeFamily,
    ps: &[NCPolynomial<T>],
) -> Result<T> {
    joint_cumulant_of_polynomials_with(state, family, ps, Pairing::Enforce)
}

pub fn joint_cumulant_of_polynomials_with<T: Scalar>(
    state: &WickState<T>,
    family: LatticeFamily,
    ps: &[NCPolynomial<T>],
    pairing: Pairing,
) -> Result<T> {
    if pairing == Pairing::Enforce {
        check_family(state.weight(), family)?;
    }
    poly::joint_cumulant(state, family, ps, &DegreeCaps::default())
}

/// Exact moment of `S_N = N^{-1/2} (X_1 + ... + X_N)` for an exchangeable
/// sequence, kept as `weighted_sum * N^{-n/2}` so odd degrees stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct CltMoment<T> {
    pub samples: u64,
    pub degree: usize,
    /// `sum_{p in Pi_n} #{h : ker h = p} phi(p)`.
    pub weighted_sum: T,
}

impl<T: Scalar> CltMoment<T> {
    /// The power of `N` multiplying `weighted_sum`, as a numerator over 2.
    pub fn exponent_times_two(&self) -> i64 {
        -(self.degree as i64)
    }

    /// `phi(S_N^n)` when `n` is even.
    pub fn value(&self) -> Option<T> {
        if self.degree % 2 == 1 {
            return None;
        }
        let n = T::from_u64(self.samples).expect("sample count representable");
        Some(self.weighted_sum.clone() / n.powu((self.degree / 2) as u32))
    }
}

/// Exact finite-`N` CLT moment from a table of `phi(p)` over `Pi_n`.
pub fn clt_moment<T, F>(samples: u64, degree: usize, table: F) -> Result<CltMoment<T>>
where
    T: Scalar,
    F: Fn(&Partition) -> Result<T>,
{
    if samples == 0 {
        return Err(Error::Precondition("sample count N must be positive".into()));
    }
    DegreeCaps::default().check(LatticeFamily::All, degree)?;
    let mut total = T::zero();
    for p in lattice::enumerate(LatticeFamily::All, degree) {
        let phi = table(&p)?;
        let count = falling_factorial::<T>(samples, p.num_blocks());
        total = total + count * phi;
    }
    Ok(CltMoment { samples, degree, weighted_sum: total })
}

/// `lim_N phi(S_N^n) = sum_{p in Pi_n^(2)} phi(p)`; zero for odd `n`.
pub fn clt_limit<T, F>(degree: usize, table: F) -> Result<T>
where
    T: Scalar,
    F: Fn(&Partition) -> Result<T>,
{
    lattice::enumerate(LatticeFamily::Pair, degree).iter().try_fold(T::zero(), |acc, p| Ok(acc + table(p)?))
}

/// `phi(p) = prod_B m_{|B|}`: the table of an i.i.d. sequence with
/// univariate moments `moments[k - 1] = phi(X^k)` and classical
/// independence between distinct labels.
pub fn factorized_table<T: Scalar>(moments: Vec<T>) -> impl Fn(&Partition) -> Result<T> {
    move |p: &Partition| {
        p.blocks().iter().try_fold(T::one(), |acc, b| {
            let m = moments
                .get(b.len() - 1)
                .ok_or_else(|| Error::MissingEntry(format!("moment of order {}", b.len())))?;
            Ok(acc * m.clone())
        })
    }
}

/// Singleton condition: `phi(p) = 0` whenever `p` has a singleton block.
pub fn satisfies_singleton_condition<T, F>(degree: usize, table: F) -> Result<bool>
where
    T: Scalar,
    F: Fn(&Partition) -> Result<T>,
{
    for p in lattice::enumerate(LatticeFamily::All, degree) {
        if p.blocks().iter().any(|b| b.len() == 1) && !table(&p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
