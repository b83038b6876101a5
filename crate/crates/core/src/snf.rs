//! Integer matrices and Smith normal form with transforms.
//!
//! Everything is exact over `Z` (arbitrary precision); the mod-`m` kernel,
//! cokernel and solver are read off a single decomposition `D = U·A·V`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse integer matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    m.entries.insert((i, j), x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &BigInt) {
        let cur = self.get(i, j);
        self.set(i, j, cur + value);
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), x)| (i, j, x))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), x) in &self.entries {
            d[i][j] = x.clone();
        }
        d
    }

    /// Entries grouped by column: `columns()[j]` lists `(row, value)`.
    pub fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(i, j), x) in &self.entries {
            cols[j].push((i, x.clone()));
        }
        cols
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), x)| ((j, i), x.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(k, j), x) in &other.entries {
            by_row[k].push((j, x));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                *acc.entry((i, j)).or_default() += a * b;
            }
        }
        acc.retain(|_, x| !x.is_zero());
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            out[i] += a * &x[j];
        }
        out
    }

    /// `A·x mod m` for a residue vector.
    pub fn mul_vec_mod(&self, x: &[u64], m: u64) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0u64; self.rows];
        for (&(i, j), a) in &self.entries {
            if x[j] != 0 {
                let prod = (mod_u64(a, m) as u128 * x[j] as u128 % m as u128) as u64;
                out[i] = (out[i] + prod) % m;
            }
        }
        out
    }
}

pub(crate) fn mod_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1` required).
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

type Dense = Vec<Vec<BigInt>>;

fn identity_dense(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// `D = U·A·V` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | … | d_r`, all nonnegative, zeros trailing.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    rows: usize,
    cols: usize,
    diagonal: Vec<BigInt>,
    u: Dense,
    u_inv: Dense,
    v: Dense,
    v_inv: Dense,
}

struct Elimination {
    a: Dense,
    u: Dense,
    u_inv: Dense,
    v: Dense,
    v_inv: Dense,
}

impl Elimination {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += q · row_t
    fn add_row_multiple(&mut self, i: usize, t: usize, q: &BigInt) {
        add_scaled_row(&mut self.a, i, t, q);
        add_scaled_row(&mut self.u, i, t, q);
        let neg = -q;
        add_scaled_col(&mut self.u_inv, t, i, &neg);
    }

    /// col_j += q · col_t
    fn add_col_multiple(&mut self, j: usize, t: usize, q: &BigInt) {
        add_scaled_col(&mut self.a, j, t, q);
        add_scaled_col(&mut self.v, j, t, q);
        let neg = -q;
        add_scaled_row(&mut self.v_inv, t, j, &neg);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
        for row in &mut self.u_inv {
            row[i] = -std::mem::take(&mut row[i]);
        }
    }
}

fn add_scaled_row(m: &mut Dense, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

fn add_scaled_col(m: &mut Dense, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[target] += delta;
        }
    }
}

/// Smallest nonzero |entry| in the trailing block; ties go to the lowest
/// row, then the lowest column.
fn min_pivot(a: &Dense, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.magnitude() < a[bi][bj].magnitude(),
            };
            if better {
                best = Some((i, j));
                if x.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut w = Elimination {
        a: a.to_dense(),
        u: identity_dense(rows),
        u_inv: identity_dense(rows),
        v: identity_dense(cols),
        v_inv: identity_dense(cols),
    };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_pivot(&w.a, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = -(&w.a[i][t] / &w.a[t][t]);
                w.add_row_multiple(i, t, &q);
                dirty |= !w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = -(&w.a[t][j] / &w.a[t][t]);
                w.add_col_multiple(j, t, &q);
                dirty |= !w.a[t][j].is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot survived; promote it
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = &w.a[i][t];
                    if !x.is_zero() && x.magnitude() < w.a[best.0][best.1].magnitude() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &w.a[t][j];
                    if !x.is_zero() && x.magnitude() < w.a[best.0][best.1].magnitude() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| {
                w.a[i][t + 1..]
                    .iter()
                    .any(|x| !x.is_zero() && !(x % &pivot).is_zero())
            });
            match offender {
                Some(i) => w.add_row_multiple(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..n).map(|i| w.a[i][i].clone()).collect();
    SnfDecomposition {
        rows,
        cols,
        diagonal,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Generators of `{x : A x ≡ 0 mod m}` with their cyclic orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelMod {
    pub generators: Vec<Vec<u64>>,
    pub orders: Vec<u64>,
}

impl KernelMod {
    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }
}

/// Structure of `(Z_m)^rows / im(A mod m)` plus the coordinate projection.
#[derive(Clone, Debug)]
pub struct CokernelMod {
    pub modulus: u64,
    pub orders: Vec<u64>,
    projection: Vec<Vec<u64>>,
}

impl CokernelMod {
    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    /// Coordinates of the class of `x` in `⊕ Z_{orders[i]}`.
    pub fn project(&self, x: &[u64]) -> Vec<u64> {
        self.projection
            .iter()
            .zip(&self.orders)
            .map(|(row, &o)| {
                let s = row.iter().zip(x).fold(0u128, |acc, (&r, &xi)| {
                    (acc + r as u128 * xi as u128) % self.modulus as u128
                });
                (s % o as u128) as u64
            })
            .collect()
    }
}

impl SnfDecomposition {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Nonzero invariant factors different from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    pub fn d(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn u(&self) -> IntMatrix {
        IntMatrix::from_dense(self.rows, self.rows, &self.u)
    }

    pub fn u_inv(&self) -> IntMatrix {
        IntMatrix::from_dense(self.rows, self.rows, &self.u_inv)
    }

    pub fn v(&self) -> IntMatrix {
        IntMatrix::from_dense(self.cols, self.cols, &self.v)
    }

    pub fn v_inv(&self) -> IntMatrix {
        IntMatrix::from_dense(self.cols, self.cols, &self.v_inv)
    }

    pub(crate) fn u_dense(&self) -> &Dense {
        &self.u
    }

    pub(crate) fn u_inv_dense(&self) -> &Dense {
        &self.u_inv
    }

    pub(crate) fn v_dense(&self) -> &Dense {
        &self.v
    }

    pub(crate) fn v_inv_dense(&self) -> &Dense {
        &self.v_inv
    }

    fn diag_mod(&self, j: usize, m: u64) -> u64 {
        self.diagonal.get(j).map_or(0, |d| mod_u64(d, m))
    }

    /// `x = V·x'` with `x'_j` ranging over multiples of `m / gcd(d_j, m)`.
    pub fn kernel_mod(&self, m: u64) -> KernelMod {
        assert!(m >= 2, "modulus must be at least 2");
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for j in 0..self.cols {
            let g = gcd_u64(self.diag_mod(j, m), m);
            if g == 1 {
                continue;
            }
            let scale = m / g;
            let gen: Vec<u64> = (0..self.cols)
                .map(|i| (mod_u64(&self.v[i][j], m) as u128 * scale as u128 % m as u128) as u64)
                .collect();
            generators.push(gen);
            orders.push(g);
        }
        KernelMod { generators, orders }
    }

    pub fn cokernel_mod(&self, m: u64) -> CokernelMod {
        assert!(m >= 2, "modulus must be at least 2");
        let mut orders = Vec::new();
        let mut projection = Vec::new();
        for i in 0..self.rows {
            let g = gcd_u64(self.diag_mod(i, m), m);
            if g == 1 {
                continue;
            }
            orders.push(g);
            projection.push(self.u[i].iter().map(|x| mod_u64(x, m)).collect());
        }
        CokernelMod {
            modulus: m,
            orders,
            projection,
        }
    }

    /// A witness `x` with `A x ≡ b (mod m)`, if one exists.
    pub fn solve_in_image(&self, b: &[u64], m: u64) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mm = m as u128;
        let c: Vec<u64> = self
            .u
            .iter()
            .map(|row| {
                row.iter().zip(b).fold(0u128, |acc, (x, &bi)| {
                    if bi == 0 || x.is_zero() {
                        acc
                    } else {
                        (acc + mod_u64(x, m) as u128 * bi as u128) % mm
                    }
                }) as u64
            })
            .collect();
        let mut y = vec![0u64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            let d = self.diag_mod(i, m);
            if i >= self.cols || self.diagonal.get(i).is_none_or(|x| x.is_zero()) {
                if ci % m != 0 {
                    return None;
                }
                continue;
            }
            let g = gcd_u64(d, m);
            if ci % g != 0 {
                return None;
            }
            let reduced = m / g;
            let inv = inv_mod((d / g) % reduced, reduced)?;
            y[i] = ((ci / g) as u128 * inv as u128 % reduced as u128) as u64;
        }
        let x = (0..self.cols)
            .map(|r| {
                self.v[r].iter().zip(&y).fold(0u128, |acc, (v, &yj)| {
                    if yj == 0 || v.is_zero() {
                        acc
                    } else {
                        (acc + mod_u64(v, m) as u128 * yj as u128) % mm
                    }
                }) as u64
            })
            .collect();
        Some(x)
    }
}

pub fn kernel_mod(a: &IntMatrix, m: u64) -> KernelMod {
    smith_normal_form(a).kernel_mod(m)
}

pub fn cokernel_mod(a: &IntMatrix, m: u64) -> CokernelMod {
    smith_normal_form(a).cokernel_mod(m)
}

pub fn solve_in_image(a: &IntMatrix, b: &[u64], m: u64) -> Option<Vec<u64>> {
    smith_normal_form(a).solve_in_image(b, m)
}
