//! Linear and quadratic forms in i.i.d. Gaussian variables.
//!
//! A quadratic form `Q = sum a_ij X_i X_j` has joint cumulants given by a sum
//! over the pair partitions `rho` of `[2m]` that connect the grouping
//! `rho_0 = 12|34|...`, each contributing the index contraction
//! `sum_{ker h >= rho} a_{h(1)h(2)}(1) ... a_{h(2m-1)h(2m)}(m)` times `K_rho(X)`.

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeFamily};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::poly::NCPolynomial;
use crate::scalar::Scalar;
use crate::wick::{self, PairWeight, WickState};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm<T> {
    matrix: Matrix<T>,
    symmetric: bool,
}

impl<T: Scalar> QuadraticForm<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Matrix(format!("quadratic form needs a square matrix, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let symmetric = matrix.is_symmetric();
        Ok(Self { matrix, symmetric })
    }

    pub fn symmetric(matrix: Matrix<T>) -> Result<Self> {
        let q = Self::new(matrix)?;
        require_symmetric(&q.matrix, "quadratic form")?;
        Ok(q)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `sum_ij a_ij X_i X_j` over generators `0..size`.
    pub fn to_polynomial(&self) -> NCPolynomial<T> {
        let n = self.size();
        NCPolynomial::from_terms(
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (self.matrix.get(i, j).clone(), vec![i, j])),
        )
    }
}

fn require_symmetric<T: Scalar>(a: &Matrix<T>, what: &str) -> Result<()> {
    if a.is_symmetric() {
        Ok(())
    } else {
        Err(Error::Matrix(format!("{what} requires a symmetric matrix")))
    }
}

/// `K_n(X^2, ..., X^2)` for `n = 1..=max_order`, in the calculus of `family`.
pub fn square_cumulants<T: Scalar>(w: &PairWeight<T>, family: LatticeFamily, max_order: usize) -> Result<Vec<T>> {
    let state = WickState::new(w.clone());
    let sq = NCPolynomial::generator(0).pow(2);
    (1..=max_order)
        .map(|n| wick::joint_cumulant_of_polynomials(&state, family, &vec![sq.clone(); n]))
        .collect()
}

/// `K_n(Q) = tr(A^n) K_n(X^2)`, with `ksq[n - 1] = K_n(X^2)`.
pub fn qform_cumulant<T: Scalar>(a: &Matrix<T>, ksq: &[T], n: usize) -> Result<T> {
    require_symmetric(a, "single quadratic form cumulant")?;
    if n == 0 {
        return Err(Error::Precondition("cumulant order must be at least 1".into()));
    }
    let k = ksq.get(n - 1).ok_or_else(|| Error::MissingEntry(format!("K_{n}(X^2)")))?;
    Ok(a.pow(n as u32)?.trace() * k.clone())
}

/// Index contraction of the forms `as_` along the pair partition `rho` of
/// `[2m]`: one summation index per block of `rho`.
pub fn contraction<T: Scalar>(as_: &[Matrix<T>], rho: &Partition) -> Result<T> {
    let m = as_.len();
    if rho.n() != 2 * m {
        return Err(Error::SizeMismatch(format!("pairing on {} points for {m} forms", rho.n())));
    }
    if !rho.is_pair() {
        return Err(Error::NotPairPartition(rho.to_string()));
    }
    let size = common_size(as_)?;
    if m == 0 {
        return Ok(T::one());
    }
    let blocks = rho.num_blocks();
    let mut idx = vec![0usize; blocks];
    let mut total = T::zero();
    'outer: loop {
        let mut prod = T::one();
        for (k, a) in as_.iter().enumerate() {
            let e = a.get(idx[rho.block_of(2 * k)], idx[rho.block_of(2 * k + 1)]);
            if e.is_zero() {
                prod = T::zero();
                break;
            }
            prod = prod * e.clone();
        }
        total = total + prod;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < size {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(total)
}

fn common_size<T: Scalar>(as_: &[Matrix<T>]) -> Result<usize> {
    let size = as_.first().map_or(0, Matrix::rows);
    for a in as_ {
        if !a.is_square() || a.rows() != size {
            return Err(Error::SizeMismatch(format!(
                "forms must share one square size {size}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
    }
    Ok(size)
}

/// Pairings of `[2m]` connecting `12|34|...|(2m-1)(2m)`, with their weight.
pub fn connecting_pairings<T: Scalar>(m: usize, w: &PairWeight<T>) -> Result<Vec<(Partition, T)>> {
    let grouping = Partition::consecutive_pairs(m);
    let mut out = Vec::new();
    for rho in lattice::connecting_partitions(&grouping, LatticeFamily::Pair) {
        let nu = w.weight(&rho)?;
        if !nu.is_zero() {
            out.push((rho, nu));
        }
    }
    Ok(out)
}

/// `K_m(Q_1, ..., Q_m) = sum_rho contraction(As, rho) K_rho(X)` with
/// `K_rho(X) = nu(rho) K_2(X)^m`. Matrices need not be symmetric.
pub fn qform_joint_cumulants<T: Scalar>(as_: &[Matrix<T>], w: &PairWeight<T>, variance: &T) -> Result<T> {
    if as_.is_empty() {
        return Err(Error::Precondition("at least one form is required".into()));
    }
    common_size(as_)?;
    let scale = variance.powu(as_.len() as u32);
    let mut total = T::zero();
    for (rho, nu) in connecting_pairings(as_.len(), w)? {
        total = total + contraction(as_, &rho)? * nu;
    }
    Ok(total * scale)
}

/// Mixed joint cumulant indexed by which variable occupies each slot.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedCumulant<T> {
    pub args: Vec<usize>,
    pub value: T,
}

impl<T> MixedCumulant<T> {
    /// `K3(Q,Q,Q')`-style label.
    pub fn describe(&self, names: &[&str]) -> String {
        let args: Vec<&str> = self.args.iter().map(|&i| names[i]).collect();
        format!("K{}({})", self.args.len(), args.join(","))
    }
}

/// Words of length `2..=max_order` over two symbols that use both.
pub fn mixed_words(max_order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 2..=max_order {
        for bits in 1..(1u64 << len) - 1 {
            out.push((0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as usize).collect());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct QformIndependence<T> {
    pub product: Matrix<T>,
    pub product_is_zero: bool,
    /// `tr((AB + BA)^2) + 2 tr(B A^2 B)`.
    pub trace_identity: T,
    /// `tr((AB)^T AB)`.
    pub product_norm: T,
    pub mixed: Vec<MixedCumulant<T>>,
}

impl<T: Scalar> QformIndependence<T> {
    pub fn mixed_all_zero(&self) -> bool {
        self.mixed.iter().all(|c| c.value.is_zero())
    }

    /// `AB = 0` implies every reported mixed cumulant vanishes.
    pub fn consistent(&self) -> bool {
        !self.product_is_zero || self.mixed_all_zero()
    }
}

/// `tr((AB + BA)^2) + 2 tr(B A^2 B)`.
pub fn trace_identity<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let s = ab.try_add(&ba)?;
    let bab = b.try_mul(&a.pow(2)?)?.try_mul(b)?;
    Ok(s.pow(2)?.trace() + T::from_int(2) * bab.trace())
}

/// Data for deciding independence of `Q = X^T A X` and `Q' = X^T B X`.
pub fn qform_independence_check<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    w: &PairWeight<T>,
    max_order: usize,
) -> Result<QformIndependence<T>> {
    require_symmetric(a, "independence check")?;
    require_symmetric(b, "independence check")?;
    if max_order < 2 {
        return Err(Error::Precondition("max order must be at least 2".into()));
    }
    let product = a.try_mul(b)?;
    let pair = [a.clone(), b.clone()];
    let mixed = mixed_words(max_order)
        .into_iter()
        .map(|args| {
            let forms: Vec<Matrix<T>> = args.iter().map(|&i| pair[i].clone()).collect();
            Ok(MixedCumulant { value: qform_joint_cumulants(&forms, w, &T::one())?, args })
        })
        .collect::<Result<_>>()?;
    Ok(QformIndependence {
        product_is_zero: product.is_zero(),
        product_norm: product.transpose().try_mul(&product)?.trace(),
        trace_identity: trace_identity(a, b)?,
        product,
        mixed,
    })
}

fn natural_family<T: Scalar>(w: &PairWeight<T>) -> LatticeFamily {
    w.matching_family().unwrap_or(LatticeFamily::All)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LqIndependence<T> {
    pub ab: Vec<T>,
    pub bta: Vec<T>,
    /// `sum_i b_i^m a_ii` for `m = 1..=max_order`.
    pub diagnostics: Vec<T>,
    /// `K(L, ..., L, Q)` with `k` copies of `L`, `k = 1..max_order`.
    pub mixed: Vec<MixedCumulant<T>>,
}

impl<T: Scalar> LqIndependence<T> {
    pub fn annihilates(&self) -> bool {
        self.ab.iter().chain(&self.bta).all(T::is_zero)
    }

    pub fn mixed_all_zero(&self) -> bool {
        self.mixed.iter().all(|c| c.value.is_zero())
    }
}

/// Data for the independence of `L = sum b_i X_i` and `Q = X^T A X`.
/// Mixed cumulants are taken in the calculus matching the weight.
pub fn lq_independence_data<T: Scalar>(a: &Matrix<T>, b: &[T], w: &PairWeight<T>, max_order: usize) -> Result<LqIndependence<T>> {
    let q = QuadraticForm::new(a.clone())?;
    if b.len() != q.size() {
        return Err(Error::SizeMismatch(format!("vector of length {} for a {}x{} matrix", b.len(), a.rows(), a.cols())));
    }
    let bcol = Matrix::column(b);
    let ab = a.try_mul(&bcol)?.to_rows().into_iter().flatten().collect();
    let bta = bcol.transpose().try_mul(a)?.to_rows().into_iter().flatten().collect();
    let diagnostics = (1..=max_order as u32)
        .map(|m| b.iter().enumerate().fold(T::zero(), |acc, (i, bi)| acc + bi.powu(m) * a.get(i, i).clone()))
        .collect();
    let state = WickState::new(w.clone());
    let family = natural_family(w);
    let l = NCPolynomial::linear(b);
    let qp = q.to_polynomial();
    let mut mixed = Vec::new();
    for k in 1..max_order {
        let mut args = vec![l.clone(); k];
        args.push(qp.clone());
        let value = crate::poly::joint_cumulant(&state, family, &args, &Default::default())?;
        let mut slots = vec![0; k];
        slots.push(1);
        mixed.push(MixedCumulant { args: slots, value });
    }
    Ok(LqIndependence { ab, bta, diagnostics, mixed })
}

/// `Y = sum_i (X_i + a_i)^2` as a polynomial.
pub fn shifted_squares<T: Scalar>(a: &[T]) -> NCPolynomial<T> {
    let mut y = NCPolynomial::zero();
    for (i, ai) in a.iter().enumerate() {
        let shifted = &NCPolynomial::generator(i) + &NCPolynomial::constant(ai.clone());
        y = &y + &shifted.pow(2);
    }
    y
}

/// `K_m(Y)` for `Y = sum (X_i + a_i)^2` by direct polynomial expansion.
pub fn shifted_squares_cumulant<T: Scalar>(a: &[T], w: &PairWeight<T>, family: LatticeFamily, m: usize) -> Result<T> {
    if m == 0 {
        return Err(Error::Precondition("cumulant order must be at least 1".into()));
    }
    let y = shifted_squares(a);
    let state = WickState::new(w.clone());
    wick::joint_cumulant_of_polynomials(&state, family, &vec![y; m])
}

/// Partitions of `[2m]` in `family` with blocks of size at most two, exactly
/// two singletons, and connecting `12|34|...`.
pub fn two_singleton_connectors(m: usize, family: LatticeFamily) -> Vec<Partition> {
    let grouping = Partition::consecutive_pairs(m);
    lattice::connecting_partitions(&grouping, family)
        .into_iter()
        .filter(|p| {
            p.blocks().iter().all(|b| b.len() <= 2) && p.blocks().iter().filter(|b| b.len() == 1).count() == 2
        })
        .collect()
}

/// Second route to `K_m(Y)` for a unit-variance Gaussian of the calculus:
/// `n K_m(X^2) + (sum a_i^2) #{connecting pi with two singletons}`, each
/// `K_{pi~}(X)` of the remaining pairing being 1.
pub fn shifted_squares_decomposition<T: Scalar>(a: &[T], family: LatticeFamily, ksq_m: &T, m: usize) -> Result<T> {
    crate::cumulant::check_calculus(family)?;
    let norm = a.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone());
    let count = T::from_usize(two_singleton_connectors(m, family).len()).expect("count representable");
    let n = T::from_usize(a.len()).expect("length representable");
    Ok(n * ksq_m.clone() + norm * count)
}
