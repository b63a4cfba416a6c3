//! Moment-cumulant transforms over a chosen partition calculus.
//!
//! Moments are sums of partitioned cumulants over the calculus family
//! (all partitions for classical, noncrossing for free, interval for
//! boolean). Cumulants are recovered by the triangular recursion
//! `K(t) = m(t) - sum_{p != 1} K_p(t)`, which works for all three families
//! with one code path.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeFamily};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Degree limits for the transforms. Enumerating all of `Pi_n` gets
/// expensive well before the sublattices do, hence two caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCaps {
    /// Cap for the noncrossing and interval calculi.
    pub sublattice: usize,
    /// Cap for the classical calculus over all of `Pi_n`.
    pub all: usize,
}

impl Default for DegreeCaps {
    fn default() -> Self {
        Self { sublattice: 14, all: 9 }
    }
}

impl DegreeCaps {
    pub fn check(&self, family: LatticeFamily, degree: usize) -> Result<()> {
        let cap = if family == LatticeFamily::All { self.all } else { self.sublattice };
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        Ok(())
    }
}

pub(crate) fn check_calculus(family: LatticeFamily) -> Result<()> {
    if !family.is_calculus() {
        return Err(Error::CalculusMismatch(format!(
            "family '{family}' cannot carry a moment-cumulant calculus (use all, noncrossing or interval)"
        )));
    }
    Ok(())
}

/// Sorted set of variable labels; tuples are stored as label indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labels {
    names: Vec<String>,
}

impl Labels {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        Self { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).map_err(|_| Error::MissingLabel(name.to_string()))
    }

    pub fn ids<S: AsRef<str>>(&self, args: &[S]) -> Result<Vec<usize>> {
        args.iter().map(|a| self.id(a.as_ref())).collect()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }
}

/// Cumulants `K_n(X_{i_1}, ..., X_{i_n})` keyed by ordered label tuples.
/// Tuples that are absent are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSpec<T> {
    family: LatticeFamily,
    labels: Labels,
    entries: BTreeMap<Vec<usize>, T>,
    independent: bool,
    nondegenerate: bool,
}

impl<T: Scalar> CumulantSpec<T> {
    pub fn new(family: LatticeFamily, labels: Labels) -> Result<Self> {
        check_calculus(family)?;
        Ok(Self { family, labels, entries: BTreeMap::new(), independent: false, nondegenerate: false })
    }

    /// Single-label spec with `K_n(X, ..., X) = cumulants[n - 1]`.
    pub fn univariate(family: LatticeFamily, label: &str, cumulants: &[T]) -> Result<Self> {
        let mut spec = Self::new(family, Labels::new([label]))?;
        for (i, k) in cumulants.iter().enumerate() {
            spec.set_ids(vec![0; i + 1], k.clone());
        }
        Ok(spec)
    }

    /// `count` independent copies `X1, ..., Xcount` of a univariate law.
    pub fn iid(family: LatticeFamily, count: usize, cumulants: &[T]) -> Result<Self> {
        let names: Vec<String> = (1..=count).map(|i| format!("X{i}")).collect();
        let mut spec = Self::new(family, Labels::new(names))?;
        for i in 0..count {
            let id = spec.labels.id(&format!("X{}", i + 1))?;
            for (n, k) in cumulants.iter().enumerate() {
                spec.set_ids(vec![id; n + 1], k.clone());
            }
        }
        spec.independent = true;
        Ok(spec)
    }

    pub fn family(&self) -> LatticeFamily {
        self.family
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn set<S: AsRef<str>>(&mut self, args: &[S], value: T) -> Result<()> {
        if args.is_empty() {
            return Err(Error::InvalidSpec("cumulant entries need arity >= 1".into()));
        }
        let ids = self.labels.ids(args)?;
        if self.independent && is_mixed(&ids) && !value.is_zero() {
            return Err(Error::InvalidSpec(format!("mixed entry {:?} in an independent family", names(&self.labels, &ids))));
        }
        self.set_ids(ids, value);
        Ok(())
    }

    pub(crate) fn set_ids(&mut self, ids: Vec<usize>, value: T) {
        if value.is_zero() {
            self.entries.remove(&ids);
        } else {
            self.entries.insert(ids, value);
        }
    }

    pub fn with<S: AsRef<str>>(mut self, args: &[S], value: T) -> Result<Self> {
        self.set(args, value)?;
        Ok(self)
    }

    pub fn get<S: AsRef<str>>(&self, args: &[S]) -> Result<T> {
        let ids = self.labels.ids(args)?;
        Ok(self.get_ids(&ids))
    }

    pub fn get_ids(&self, ids: &[usize]) -> T {
        self.entries.get(ids).cloned().unwrap_or_else(T::zero)
    }

    /// `K_n(X, ..., X)` for a single label.
    pub fn diagonal(&self, label: usize, n: usize) -> T {
        self.get_ids(&vec![label; n])
    }

    /// Nonzero entries as `(label names, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<&str>, &T)> + '_ {
        self.entries.iter().map(|(k, v)| (names(&self.labels, k), v))
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Declares mixed cumulants to vanish; fails if a mixed entry is nonzero.
    pub fn declare_independent(mut self) -> Result<Self> {
        if let Some(k) = self.entries.keys().find(|k| is_mixed(k)) {
            return Err(Error::InvalidSpec(format!(
                "independent family has nonzero mixed cumulant {:?}",
                names(&self.labels, k)
            )));
        }
        self.independent = true;
        Ok(self)
    }

    /// Declares every label to have positive variance `K_2(X, X) > 0`.
    pub fn declare_nondegenerate(mut self) -> Result<Self> {
        for id in 0..self.labels.len() {
            if self.diagonal(id, 2) <= T::zero() {
                return Err(Error::InvalidSpec(format!(
                    "label '{}' has non-positive variance K2",
                    self.labels.name(id)
                )));
            }
        }
        self.nondegenerate = true;
        Ok(self)
    }

    /// The univariate spec of one label.
    pub fn marginal(&self, label: &str) -> Result<CumulantSpec<T>> {
        let id = self.labels.id(label)?;
        let mut out = CumulantSpec::new(self.family, Labels::new([label]))?;
        for (k, v) in &self.entries {
            if k.iter().all(|&i| i == id) {
                out.set_ids(vec![0; k.len()], v.clone());
            }
        }
        Ok(out)
    }
}

fn is_mixed(ids: &[usize]) -> bool {
    ids.windows(2).any(|w| w[0] != w[1])
}

fn names<'a>(labels: &'a Labels, ids: &[usize]) -> Vec<&'a str> {
    ids.iter().map(|&i| labels.name(i)).collect()
}

/// Joint moments `phi(X_{h(1)} ... X_{h(n)})` for all tuples up to `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentFunction<T> {
    labels: Labels,
    max_degree: usize,
    values: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> MomentFunction<T> {
    /// Tabulates `f` on every tuple of length `1..=max_degree`.
    pub fn from_fn<F>(labels: Labels, max_degree: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Result<T>,
    {
        let mut values = BTreeMap::new();
        for t in tuples(labels.len(), max_degree) {
            let v = f(&t)?;
            values.insert(t, v);
        }
        Ok(Self { labels, max_degree, values })
    }

    /// No values yet; fill with [`MomentFunction::set`] and check with
    /// [`MomentFunction::validate`].
    pub fn empty(labels: Labels, max_degree: usize) -> Self {
        Self { labels, max_degree, values: BTreeMap::new() }
    }

    /// Univariate moments `m_1, m_2, ...` of a single label.
    pub fn univariate(label: &str, moments: &[T]) -> Self {
        let values = moments.iter().enumerate().map(|(i, m)| (vec![0; i + 1], m.clone())).collect();
        Self { labels: Labels::new([label]), max_degree: moments.len(), values }
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get<S: AsRef<str>>(&self, args: &[S]) -> Result<T> {
        let ids = self.labels.ids(args)?;
        self.get_ids(&ids)
    }

    pub fn get_ids(&self, ids: &[usize]) -> Result<T> {
        self.values.get(ids).cloned().ok_or_else(|| {
            Error::MissingEntry(format!("moment of {:?} (max degree {})", names(&self.labels, ids), self.max_degree))
        })
    }

    pub fn set<S: AsRef<str>>(&mut self, args: &[S], value: T) -> Result<()> {
        let ids = self.labels.ids(args)?;
        if ids.is_empty() || ids.len() > self.max_degree {
            return Err(Error::Precondition(format!("tuple length must be in 1..={}", self.max_degree)));
        }
        self.values.insert(ids, value);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<&str>, &T)> + '_ {
        self.values.iter().map(|(k, v)| (names(&self.labels, k), v))
    }

    /// Checks that every tuple up to the max degree has a value.
    pub fn validate(&self) -> Result<()> {
        for t in tuples(self.labels.len(), self.max_degree) {
            self.get_ids(&t)?;
        }
        Ok(())
    }
}

/// All label tuples of length `1..=max_len` over `k` labels, shortest first.
pub fn tuples(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|t| {
                (0..k).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `sum_{p in table, p != 1?} prod_B values[mask(B)]`.
fn block_product_sum<T: Scalar>(table: &lattice::PartitionTable, values: &[T], skip_top: bool) -> T {
    let mut total = T::zero();
    for masks in &table.masks {
        if skip_top && masks.len() == 1 {
            continue;
        }
        let mut prod = T::one();
        for &m in masks {
            let v = &values[m as usize];
            if v.is_zero() {
                prod = T::zero();
                break;
            }
            prod = prod * v.clone();
        }
        if !prod.is_zero() {
            total = total + prod;
        }
    }
    total
}

/// `values[mask] = lookup(t restricted to mask)` for every nonempty mask.
fn subtuple_values<T: Scalar, F>(t: &[usize], mut lookup: F) -> Vec<T>
where
    F: FnMut(&[usize]) -> T,
{
    let k = t.len();
    let mut values = vec![T::zero(); 1 << k];
    let mut sub = Vec::with_capacity(k);
    for (mask, slot) in values.iter_mut().enumerate().skip(1) {
        sub.clear();
        sub.extend((0..k).filter(|i| mask & (1 << i) != 0).map(|i| t[i]));
        *slot = lookup(&sub);
    }
    values
}

/// `K_p(args)`: product over the blocks of `p` of the cumulant of the
/// arguments in that block, taken in increasing position order.
pub fn partitioned_cumulant<T: Scalar, S: AsRef<str>>(spec: &CumulantSpec<T>, p: &Partition, args: &[S]) -> Result<T> {
    if args.len() != p.n() {
        return Err(Error::SizeMismatch(format!("partition of {} elements, {} arguments", p.n(), args.len())));
    }
    let ids = spec.labels.ids(args)?;
    Ok(p.blocks().iter().fold(T::one(), |acc, b| {
        let sub: Vec<usize> = b.iter().map(|&i| ids[i]).collect();
        acc * spec.get_ids(&sub)
    }))
}

/// `m(args) = sum_{p in family} K_p(args)`.
pub fn moments_from_cumulants<T: Scalar, S: AsRef<str>>(spec: &CumulantSpec<T>, args: &[S]) -> Result<T> {
    if args.is_empty() {
        return Err(Error::Precondition("moment of an empty tuple".into()));
    }
    let ids = spec.labels.ids(args)?;
    moment_of_ids(spec, &ids, &DegreeCaps::default())
}

pub(crate) fn moment_of_ids<T: Scalar>(spec: &CumulantSpec<T>, ids: &[usize], caps: &DegreeCaps) -> Result<T> {
    caps.check(spec.family, ids.len())?;
    let table = lattice::table(spec.family, ids.len());
    let values = subtuple_values(ids, |sub| spec.get_ids(sub));
    Ok(block_product_sum(&table, &values, false))
}

/// First-block decomposition of the partitions of `[n]` in a calculus: each
/// entry is the block `S` containing element 0 together with the maximal
/// runs of the remaining elements that the other blocks cannot cross.
/// Then `m(t) = sum_(S, gaps) K(t_S) prod_g m(t_g)`.
fn first_block_terms(family: LatticeFamily, n: usize) -> Vec<(u64, Vec<u64>)> {
    let full = (1u64 << n) - 1;
    match family {
        LatticeFamily::Interval => (1..=n).map(|k| {
            let s = (1u64 << k) - 1;
            (s, if s == full { vec![] } else { vec![full & !s] })
        }).collect(),
        LatticeFamily::NonCrossing => (0..1u64 << (n - 1))
            .map(|rest| {
                let s = (rest << 1) | 1;
                let mut gaps = Vec::new();
                let mut run = 0u64;
                for i in 0..n {
                    if s & (1 << i) != 0 {
                        if run != 0 {
                            gaps.push(run);
                        }
                        run = 0;
                    } else {
                        run |= 1 << i;
                    }
                }
                if run != 0 {
                    gaps.push(run);
                }
                (s, gaps)
            })
            .collect(),
        _ => (0..1u64 << (n - 1))
            .map(|rest| {
                let s = (rest << 1) | 1;
                (s, if s == full { vec![] } else { vec![full & !s] })
            })
            .collect(),
    }
}

/// Dense numbering of the tuples of length `1..=max_len` over `k` labels.
struct TupleIndex {
    k: usize,
    offsets: Vec<usize>,
}

impl TupleIndex {
    fn new(k: usize, max_len: usize) -> Self {
        let mut offsets = vec![0; max_len + 2];
        for len in 1..=max_len {
            offsets[len + 1] = offsets[len] + k.pow(len as u32);
        }
        Self { k, offsets }
    }

    fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Code of the subtuple of `t` selected by `mask`.
    fn code(&self, t: &[usize], mask: u64) -> usize {
        let mut c = 0;
        let mut len = 0;
        for (i, &x) in t.iter().enumerate().rev() {
            if mask & (1 << i) != 0 {
                c = c * self.k + x;
                len += 1;
            }
        }
        self.offsets[len] + c
    }
}

/// `sum K(t_S) prod_g m(t_g)` over the first-block terms, leaving out the
/// term `S = everything` when `skip_top`. `cum` and `mom` are indexed by
/// [`TupleIndex`] codes.
fn first_block_sum<T: Scalar>(t: &[usize], terms: &[(u64, Vec<u64>)], skip_top: bool, index: &TupleIndex, cum: &[T], mom: &[T]) -> T {
    let full = (1u64 << t.len()) - 1;
    let mut total = T::zero();
    for (s, gaps) in terms {
        if skip_top && *s == full {
            continue;
        }
        let k = &cum[index.code(t, *s)];
        if k.is_zero() {
            continue;
        }
        let mut prod = k.clone();
        for &g in gaps {
            let m = &mom[index.code(t, g)];
            if m.is_zero() {
                prod = T::zero();
                break;
            }
            prod = prod * m.clone();
        }
        total = total + prod;
    }
    total
}

fn calculus_terms(family: LatticeFamily, max_degree: usize) -> Vec<Vec<(u64, Vec<u64>)>> {
    (0..=max_degree).map(|n| if n == 0 { vec![] } else { first_block_terms(family, n) }).collect()
}

/// Tabulates all moments of `spec` up to `max_degree`, shortest tuples
/// first, by the first-block recursion.
pub fn moment_function<T: Scalar>(spec: &CumulantSpec<T>, max_degree: usize) -> Result<MomentFunction<T>> {
    let caps = DegreeCaps::default();
    caps.check(spec.family, max_degree)?;
    let terms = calculus_terms(spec.family, max_degree);
    let all = tuples(spec.labels.len(), max_degree);
    let index = TupleIndex::new(spec.labels.len(), max_degree);
    let mut cum = vec![T::zero(); index.len()];
    let mut mom = vec![T::zero(); index.len()];
    for t in &all {
        cum[index.code(t, u64::MAX)] = spec.get_ids(t);
    }
    for t in &all {
        let v = first_block_sum(t, &terms[t.len()], false, &index, &cum, &mom);
        mom[index.code(t, u64::MAX)] = v;
    }
    let values = all.into_iter().map(|t| {
        let v = mom[index.code(&t, u64::MAX)].clone();
        (t, v)
    });
    Ok(MomentFunction { labels: spec.labels.clone(), max_degree, values: values.collect() })
}

/// Inverts the moment-cumulant relation in the calculus `family`, with default caps.
pub fn cumulants_from_moments<T: Scalar>(m: &MomentFunction<T>, family: LatticeFamily) -> Result<CumulantSpec<T>> {
    cumulants_from_moments_capped(m, family, &DegreeCaps::default())
}

pub fn cumulants_from_moments_capped<T: Scalar>(
    m: &MomentFunction<T>,
    family: LatticeFamily,
    caps: &DegreeCaps,
) -> Result<CumulantSpec<T>> {
    check_calculus(family)?;
    caps.check(family, m.max_degree)?;
    let mut spec = CumulantSpec::new(family, m.labels.clone())?;
    let terms = calculus_terms(family, m.max_degree);
    let index = TupleIndex::new(m.labels.len(), m.max_degree);
    let all = tuples(m.labels.len(), m.max_degree);
    let mut cum = vec![T::zero(); index.len()];
    let mut mom = vec![T::zero(); index.len()];
    for t in &all {
        mom[index.code(t, u64::MAX)] = m.get_ids(t)?;
    }
    // tuples() yields shorter tuples first, so every proper subtuple is already known
    for t in all {
        let c = index.code(&t, u64::MAX);
        let k = mom[c].clone() - first_block_sum(&t, &terms[t.len()], true, &index, &cum, &mom);
        cum[c] = k.clone();
        spec.set_ids(t, k);
    }
    Ok(spec)
}

/// Top cumulant `K_k(Z_1, ..., Z_k)` of `k` compound arguments, given the
/// moment of every ordered sub-selection of arguments. `moment(mask)`
/// returns `phi` of the product of the selected arguments in position order.
pub fn top_cumulant_by_subsets<T: Scalar, F>(k: usize, family: LatticeFamily, caps: &DegreeCaps, mut moment: F) -> Result<T>
where
    F: FnMut(u64) -> Result<T>,
{
    check_calculus(family)?;
    caps.check(family, k)?;
    if k == 0 {
        return Err(Error::Precondition("cumulant of no arguments".into()));
    }
    let mut cum: Vec<T> = vec![T::zero(); 1 << k];
    let mut order: Vec<u64> = (1..(1u64 << k)).collect();
    order.sort_by_key(|m| m.count_ones());
    for mask in order {
        let positions: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let j = positions.len();
        let table = lattice::table(family, j);
        // re-index the cumulants of proper sub-selections onto 0..j
        let mut local = vec![T::zero(); 1 << j];
        for (lm, slot) in local.iter_mut().enumerate().take((1 << j) - 1).skip(1) {
            let global = (0..j).filter(|b| lm & (1 << b) != 0).fold(0u64, |g, b| g | (1 << positions[b]));
            *slot = cum[global as usize].clone();
        }
        let lower = block_product_sum(&table, &local, true);
        cum[mask as usize] = moment(mask)? - lower;
    }
    Ok(cum[(1usize << k) - 1].clone())
}

/// One column's contribution `prod_k C[args(k), i] * K_n(X_i)` to a linear-form cumulant.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormTerm<T> {
    pub column: usize,
    pub coefficient: T,
    pub cumulant: T,
    pub value: T,
}

/// Per-column terms of `K_n(Y_{args(1)}, ..., Y_{args(n)})` where
/// `Y_j = sum_i C[j, i] X_i` and the `X_i` are independent with univariate
/// specs `xspecs[i]`.
pub fn linear_form_terms<T: Scalar>(c: &Matrix<T>, xspecs: &[CumulantSpec<T>], args: &[usize]) -> Result<Vec<LinearFormTerm<T>>> {
    if c.cols() != xspecs.len() {
        return Err(Error::SizeMismatch(format!("{} columns but {} variable specs", c.cols(), xspecs.len())));
    }
    if args.is_empty() {
        return Err(Error::Precondition("cumulant of no arguments".into()));
    }
    if let Some(&bad) = args.iter().find(|&&a| a >= c.rows()) {
        return Err(Error::SizeMismatch(format!("row index {bad} outside {} rows", c.rows())));
    }
    xspecs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            if spec.labels.len() != 1 {
                return Err(Error::InvalidSpec(format!("column {i} spec must have exactly one label")));
            }
            let coefficient = args.iter().fold(T::one(), |acc, &a| acc * c.get(a, i).clone());
            let cumulant = spec.diagonal(0, args.len());
            let value = coefficient.clone() * cumulant.clone();
            Ok(LinearFormTerm { column: i, coefficient, cumulant, value })
        })
        .collect()
}

/// `K_n(Y_{args(1)}, ..., Y_{args(n)}) = sum_i (prod_k C[args(k), i]) K_n(X_i)`.
pub fn linear_form_cumulants<T: Scalar>(c: &Matrix<T>, xspecs: &[CumulantSpec<T>], args: &[usize]) -> Result<T> {
    Ok(linear_form_terms(c, xspecs, args)?.into_iter().fold(T::zero(), |acc, t| acc + t.value))
}
