#![allow(dead_code)]

use ncgauss::scalar::ratio;
use ncgauss::{CumulantSpec, LatticeFamily, Matrix, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(p: i64) -> Rational {
    ratio(p, 1)
}

pub fn rand_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn rand_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<Rational> {
    Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rand_rational(rng)).collect()).collect()).unwrap()
}

pub fn rand_symmetric(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rand_rational(rng);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// Every tuple over `labels` of length `1..=max_degree` gets an independent
/// random cumulant.
pub fn rand_spec(rng: &mut impl Rng, family: LatticeFamily, labels: &[&str], max_degree: usize) -> CumulantSpec<Rational> {
    let mut spec = CumulantSpec::new(family, ncgauss::cumulant::Labels::new(labels.iter().copied())).unwrap();
    for t in ncgauss::cumulant::tuples(labels.len(), max_degree) {
        let args: Vec<&str> = t.iter().map(|&i| labels[i]).collect();
        spec.set(&args, rand_rational(rng)).unwrap();
    }
    spec
}

pub fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

pub fn double_factorial_odd(k: usize) -> u64 {
    (1..=k as u64).map(|i| 2 * i - 1).product()
}

pub fn catalan(n: usize) -> u64 {
    let mut c = 1u64;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All pair partitions of `0..n` as lists of pairs, built independently of
/// the library enumerators.
pub fn oracle_pairings(n: usize, noncrossing: bool) -> Vec<Vec<(usize, usize)>> {
    fn crosses(p: &[(usize, usize)]) -> bool {
        p.iter().any(|&(a, b)| p.iter().any(|&(c, d)| a < c && c < b && b < d))
    }
    fn go(rest: Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest[0];
        for k in 1..rest.len() {
            let mut left = rest.clone();
            let second = left.remove(k);
            left.remove(0);
            acc.push((first, second));
            go(left, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        go((0..n).collect(), &mut Vec::new(), &mut out);
    }
    if noncrossing {
        out.retain(|p| !crosses(p));
    }
    out
}

/// `phi(Q_1 ... Q_k)` for `Q_j = X^T A_j X` and a unit-variance Gaussian
/// with pair weights 1 on the given pairings: sum over pairings and over
/// index assignments to pairs.
pub fn oracle_qform_moment(mats: &[Matrix<Rational>], noncrossing: bool) -> Rational {
    let k = mats.len();
    let d = mats.first().map_or(0, |m| m.rows());
    let mut total = r(0);
    for pairing in oracle_pairings(2 * k, noncrossing) {
        let mut owner = vec![0usize; 2 * k];
        for (p, &(a, b)) in pairing.iter().enumerate() {
            owner[a] = p;
            owner[b] = p;
        }
        let npairs = pairing.len();
        let mut idx = vec![0usize; npairs];
        loop {
            let mut term = r(1);
            for (j, a) in mats.iter().enumerate() {
                term *= a.get(idx[owner[2 * j]], idx[owner[2 * j + 1]]);
            }
            total += term;
            // odometer over assignments pairs -> 0..d
            let mut pos = 0;
            while pos < npairs {
                idx[pos] += 1;
                if idx[pos] < d {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == npairs {
                break;
            }
        }
    }
    total
}

/// Univariate classical cumulants from moments `m[0] = 1, m[1], ...`.
pub fn classical_cumulants(m: &[Rational]) -> Vec<Rational> {
    let n = m.len() - 1;
    let mut k = vec![r(0); n + 1];
    for j in 1..=n {
        let mut s = m[j].clone();
        for i in 1..j {
            s -= r(binomial(j as u64 - 1, i as u64 - 1) as i64) * &k[i] * &m[j - i];
        }
        k[j] = s;
    }
    k
}

/// Univariate free cumulants from moments via
/// `m_n = sum_s k_s sum_{i_1 + ... + i_s = n - s} m_{i_1} ... m_{i_s}`.
pub fn free_cumulants(m: &[Rational]) -> Vec<Rational> {
    let n = m.len() - 1;
    // conv[s][t] = sum over compositions of t into s nonnegative parts of the product of moments
    let mut conv = vec![vec![r(0); n + 1]; n + 1];
    conv[0][0] = r(1);
    for s in 1..=n {
        for t in 0..=n {
            let mut acc = r(0);
            for i in 0..=t {
                acc += &m[i] * &conv[s - 1][t - i];
            }
            conv[s][t] = acc;
        }
    }
    let mut k = vec![r(0); n + 1];
    for j in 1..=n {
        let mut s = m[j].clone();
        for i in 1..j {
            s -= &k[i] * &conv[i][j - i];
        }
        k[j] = s;
    }
    k
}

/// `2^{m-1} sum over orderings of 2..m of tr(A_1 A_s2 ... A_sm)`: the
/// classical joint cumulant of symmetric quadratic forms by cycle walks.
pub fn classical_cycle_walk(mats: &[Matrix<Rational>]) -> Rational {
    let m = mats.len();
    let mut rest: Vec<usize> = (1..m).collect();
    let mut total = r(0);
    permute(&mut rest, 0, &mut |perm| {
        let mut p = mats[0].clone();
        for &i in perm {
            p = p.try_mul(&mats[i]).unwrap();
        }
        total += p.trace();
    });
    total * r(1 << (m - 1))
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Rational orthogonal matrices of sizes 2 and 3.
pub fn orthogonal_matrices() -> Vec<Matrix<Rational>> {
    let q = |p: i64, d: i64| ratio(p, d);
    vec![
        Matrix::from_rows(vec![vec![q(3, 5), q(4, 5)], vec![q(-4, 5), q(3, 5)]]).unwrap(),
        Matrix::from_rows(vec![vec![q(5, 13), q(12, 13)], vec![q(12, 13), q(-5, 13)]]).unwrap(),
        Matrix::from_rows(vec![vec![q(8, 17), q(-15, 17)], vec![q(15, 17), q(8, 17)]]).unwrap(),
        Matrix::from_rows(vec![
            vec![q(1, 3), q(2, 3), q(2, 3)],
            vec![q(2, 3), q(1, 3), q(-2, 3)],
            vec![q(2, 3), q(-2, 3), q(1, 3)],
        ])
        .unwrap(),
        Matrix::from_rows(vec![
            vec![q(2, 7), q(3, 7), q(6, 7)],
            vec![q(3, 7), q(-6, 7), q(2, 7)],
            vec![q(6, 7), q(2, 7), q(-3, 7)],
        ])
        .unwrap(),
    ]
}

/// Random nonzero symmetric `A`, `B` of size `n` with `AB = 0`, built from
/// mutually orthogonal rank-one pieces.
pub fn rand_annihilating_pair(rng: &mut impl Rng, n: usize) -> (Matrix<Rational>, Matrix<Rational>) {
    let rand_int_vec = |rng: &mut dyn rand::RngCore| -> Vec<Rational> {
        loop {
            let v: Vec<Rational> = (0..n).map(|_| r(rng.gen_range(-3..=3))).collect();
            if v.iter().any(|x| *x != r(0)) {
                return v;
            }
        }
    };
    let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(r(0), |acc, (x, y)| acc + x * y);
    loop {
        let u = rand_int_vec(rng);
        let w = rand_int_vec(rng);
        let c = dot(&w, &u) / dot(&u, &u);
        let v: Vec<Rational> = w.iter().zip(&u).map(|(wi, ui)| wi - &c * ui).collect();
        if v.iter().all(|x| *x == r(0)) {
            continue;
        }
        let outer = |x: &[Rational], s: Rational| {
            let col = Matrix::column(x);
            col.try_mul(&col.transpose()).unwrap().scale(&s)
        };
        let mut s = rand_rational(rng);
        while s == r(0) {
            s = rand_rational(rng);
        }
        let mut t = rand_rational(rng);
        while t == r(0) {
            t = rand_rational(rng);
        }
        return (outer(&u, s), outer(&v, t));
    }
}

/// Random integer vector of length `n` and a different one with the same
/// squared norm, not a signed permutation of the first.
pub fn rand_norm_matched(rng: &mut impl Rng, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let canon = |v: &[i64]| {
        let mut a: Vec<i64> = v.iter().map(|x| x.abs()).collect();
        a.sort();
        a
    };
    loop {
        let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let norm: i64 = u.iter().map(|x| x * x).sum();
        if norm == 0 {
            continue;
        }
        let mut found = Vec::new();
        let mut v = vec![-6i64; n];
        loop {
            if v.iter().map(|x| x * x).sum::<i64>() == norm && canon(&v) != canon(&u) {
                found.push(v.clone());
            }
            let mut pos = 0;
            while pos < n {
                v[pos] += 1;
                if v[pos] <= 6 {
                    break;
                }
                v[pos] = -6;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        if found.is_empty() {
            continue;
        }
        let v = found[rng.gen_range(0..found.len())].clone();
        let to_q = |x: &[i64]| x.iter().map(|&e| r(e)).collect();
        return (to_q(&u), to_q(&v));
    }
}
