use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{FiniteAbelianGroup, GammaCochain};
use crate::error::{Error, Result};
use crate::simplicial::{coboundary_matrix, Pair, Triangulation};
use crate::snf::{gcd_u64, mod_u64, smith_normal_form, IntMatrix, SnfDecomposition};

/// Cochains of a pair with the coboundary matrices and their Smith forms,
/// computed lazily and shared by every coefficient modulus.
#[derive(Debug)]
pub struct CochainComplex {
    pair: Pair,
    d: Vec<IntMatrix>,
    snf: Vec<OnceLock<SnfDecomposition>>,
}

impl CochainComplex {
    pub fn new(pair: Pair) -> Arc<Self> {
        let d: Vec<IntMatrix> = (0..=pair.dim()).map(|k| coboundary_matrix(&pair, k)).collect();
        let snf = d.iter().map(|_| OnceLock::new()).collect();
        Arc::new(CochainComplex { pair, d, snf })
    }

    pub fn absolute(tri: Arc<Triangulation>) -> Arc<Self> {
        Self::new(Pair::absolute(tri))
    }

    /// Cochains relative to the boundary.
    pub fn rel_boundary(tri: Arc<Triangulation>) -> Arc<Self> {
        Self::new(Pair::rel_boundary(tri))
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn space(&self) -> &Arc<Triangulation> {
        self.pair.space()
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.pair.rank(k)
    }

    /// `d_k: C^k → C^{k+1}` (zero rows at the top degree).
    pub fn d(&self, k: usize) -> &IntMatrix {
        &self.d[k]
    }

    pub fn snf(&self, k: usize) -> &SnfDecomposition {
        self.snf[k].get_or_init(|| smith_normal_form(&self.d[k]))
    }

    fn check_moduli(&self, c: &GammaCochain, group: &FiniteAbelianGroup) -> Result<()> {
        if c.moduli() != group.invariant_factors() {
            return Err(Error::ModulusMismatch(format!(
                "cochain over {:?}, group {}",
                c.moduli(),
                group
            )));
        }
        if c.len() != self.space().count(c.degree()) {
            return Err(Error::DimensionMismatch(format!(
                "cochain has {} values, complex has {} {}-simplices",
                c.len(),
                self.space().count(c.degree()),
                c.degree()
            )));
        }
        Ok(())
    }

    /// Relative cocycle test: vanishes on the subspace and `dc = 0`.
    pub fn is_cocycle(&self, c: &GammaCochain) -> bool {
        c.vanishes_on_subspace(&self.pair) && c.is_cocycle(self.space())
    }

    /// A `(k-1)`-cochain `φ`, zero on the subspace, with `dφ = c2 - c1`.
    /// In degree 0 no nonzero coboundaries exist; the witness for equal
    /// cochains is reported as the zero 0-cochain.
    pub fn is_cohomologous(
        &self,
        c1: &GammaCochain,
        c2: &GammaCochain,
        group: &FiniteAbelianGroup,
    ) -> Result<Option<GammaCochain>> {
        self.check_moduli(c1, group)?;
        self.check_moduli(c2, group)?;
        let diff = c2.sub(c1)?;
        let k = diff.degree();
        if !diff.vanishes_on_subspace(&self.pair) {
            return Ok(None);
        }
        if k == 0 {
            return Ok(diff.is_zero().then(|| GammaCochain::zero(self.space(), 0, group)));
        }
        let moduli = group.invariant_factors();
        let mut free = Vec::with_capacity(moduli.len());
        for (j, &m) in moduli.iter().enumerate() {
            let b = diff.free_component(&self.pair, j);
            match self.snf(k - 1).solve_in_image(&b, m) {
                Some(x) => free.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(GammaCochain::from_free(&self.pair, k - 1, moduli, &free)))
    }

    /// `|H^i ⊗ Z_m| · |Tor(H^{i+1}, Z_m)|` from the integral Smith forms.
    pub fn universal_coefficient_order(&self, i: usize, m: u64) -> BigUint {
        if i > self.dim() {
            return BigUint::one();
        }
        let rank_out = self.snf(i).rank();
        let rank_in = if i == 0 { 0 } else { self.snf(i - 1).rank() };
        let free_rank = self.rank(i) - rank_out - rank_in;
        let mut order = BigUint::from(m).pow(free_rank as u32);
        let torsion_gcd = |t: &BigInt| BigUint::from(gcd_u64(mod_u64(t, m), m));
        if i > 0 {
            for t in self.snf(i - 1).torsion() {
                order *= torsion_gcd(&t);
            }
        }
        for t in self.snf(i).torsion() {
            order *= torsion_gcd(&t);
        }
        order
    }
}

/// `H^i(X; Z_m)` for one invariant factor.
#[derive(Clone, Debug)]
struct FactorBlock {
    modulus: u64,
    /// rows of `V⁻¹` (mod m) selecting kernel coordinates, with the scale
    /// `m / g_j` and order `g_j` of each
    kernel_rows: Vec<Vec<u64>>,
    kernel_scale: Vec<u64>,
    /// class projection from kernel coordinates
    projection: Vec<Vec<u64>>,
    orders: Vec<u64>,
    /// one free-coordinate cocycle per cyclic factor
    reps: Vec<Vec<u64>>,
}

fn dense_mod(row: &[BigInt], m: u64) -> Vec<u64> {
    row.iter().map(|x| mod_u64(x, m)).collect()
}

impl FactorBlock {
    fn build(complex: &CochainComplex, i: usize, m: u64) -> FactorBlock {
        let n = complex.rank(i);
        let snf = complex.snf(i);
        let v = snf.v_dense();
        let v_inv = snf.v_inv_dense();
        let diag = snf.diagonal();
        let mut kernel_rows = Vec::new();
        let mut kernel_scale = Vec::new();
        let mut kernel_orders = Vec::new();
        let mut kernel_gens: Vec<Vec<u64>> = Vec::new();
        for j in 0..n {
            let dj = diag.get(j).map_or(0, |d| mod_u64(d, m));
            let g = gcd_u64(dj, m);
            if g == 1 {
                continue;
            }
            let scale = m / g;
            kernel_rows.push(dense_mod(&v_inv[j], m));
            kernel_scale.push(scale);
            kernel_orders.push(g);
            kernel_gens.push(
                (0..n)
                    .map(|r| (mod_u64(&v[r][j], m) as u128 * scale as u128 % m as u128) as u64)
                    .collect(),
            );
        }
        let t = kernel_orders.len();

        // images of d_{i-1} in kernel coordinates, then the relation matrix
        // [C | diag(g)]
        let prev_cols = if i == 0 { 0 } else { complex.rank(i - 1) };
        let mut c = vec![vec![0u64; prev_cols]; t];
        if i > 0 {
            for (col, entries) in complex.d(i - 1).columns().into_iter().enumerate() {
                let mut y = vec![0u128; t];
                for (r, val) in entries {
                    let x = mod_u64(&val, m) as u128;
                    for (j, row) in kernel_rows.iter().enumerate() {
                        y[j] = (y[j] + row[r] as u128 * x) % m as u128;
                    }
                }
                for j in 0..t {
                    let yj = y[j] as u64;
                    debug_assert_eq!(yj % kernel_scale[j], 0, "coboundary outside kernel");
                    c[j][col] = yj / kernel_scale[j] % kernel_orders[j];
                }
            }
        }
        let mut rel = IntMatrix::zeros(t, prev_cols + t);
        for j in 0..t {
            for col in 0..prev_cols {
                if c[j][col] != 0 {
                    rel.set(j, col, BigInt::from(c[j][col]));
                }
            }
            rel.set(j, prev_cols + j, BigInt::from(kernel_orders[j]));
        }
        let rel_snf = smith_normal_form(&rel);
        let u = rel_snf.u_dense();
        let u_inv = rel_snf.u_inv_dense();
        let mut projection = Vec::new();
        let mut orders = Vec::new();
        let mut reps = Vec::new();
        for l in 0..t {
            let e = rel_snf.diagonal()[l].clone();
            if e.is_one() {
                continue;
            }
            debug_assert!(!e.is_zero());
            let e = u64::try_from(&e).expect("invariant factors divide the modulus");
            orders.push(e);
            projection.push(dense_mod(&u[l], m));
            let mut rep = vec![0u128; n];
            for (j, gen) in kernel_gens.iter().enumerate() {
                let coef = mod_u64(&u_inv[j][l], m) as u128;
                if coef == 0 {
                    continue;
                }
                for (r, &g) in gen.iter().enumerate() {
                    rep[r] = (rep[r] + coef * g as u128) % m as u128;
                }
            }
            reps.push(rep.into_iter().map(|x| x as u64).collect());
        }
        FactorBlock {
            modulus: m,
            kernel_rows,
            kernel_scale,
            projection,
            orders,
            reps,
        }
    }

    fn coordinates(&self, x: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        let kc: Vec<u64> = self
            .kernel_rows
            .iter()
            .zip(&self.kernel_scale)
            .map(|(row, &s)| {
                let y = row.iter().zip(x).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % m);
                (y as u64) / s
            })
            .collect();
        self.projection
            .iter()
            .zip(&self.orders)
            .map(|(row, &e)| {
                let y = row.iter().zip(&kc).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % m);
                (y % e as u128) as u64
            })
            .collect()
    }
}

/// `H^i(X; Γ)` with one representative cocycle per cyclic factor and a
/// coordinate solver. Factors are listed invariant factor by invariant
/// factor of `Γ`.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    complex: Arc<CochainComplex>,
    degree: usize,
    coefficients: FiniteAbelianGroup,
    blocks: Vec<FactorBlock>,
}

/// The JSON report for a cohomology group.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub coefficients: Vec<u64>,
    pub cyclic_orders: Vec<u64>,
    pub order: u128,
}

pub fn cohomology(complex: &Arc<CochainComplex>, degree: usize, coefficients: &FiniteAbelianGroup) -> CohomologyGroup {
    let blocks = if degree > complex.dim() {
        Vec::new()
    } else {
        coefficients
            .invariant_factors()
            .iter()
            .map(|&m| FactorBlock::build(complex, degree, m))
            .collect()
    };
    CohomologyGroup {
        complex: Arc::clone(complex),
        degree,
        coefficients: coefficients.clone(),
        blocks,
    }
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn complex(&self) -> &Arc<CochainComplex> {
        &self.complex
    }

    pub fn coefficients(&self) -> &FiniteAbelianGroup {
        &self.coefficients
    }

    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.blocks.iter().flat_map(|b| b.orders.iter().copied()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.cyclic_orders()
            .into_iter()
            .fold(BigUint::one(), |acc, o| acc * o)
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|b| b.orders.is_empty())
    }

    fn moduli(&self) -> &[u64] {
        self.coefficients.invariant_factors()
    }

    fn zero_free(&self) -> Vec<Vec<u64>> {
        let n = self.complex.rank(self.degree);
        self.moduli().iter().map(|_| vec![0u64; n]).collect()
    }

    pub fn zero(&self) -> GammaCochain {
        GammaCochain::zero(self.complex.space(), self.degree, &self.coefficients)
    }

    /// Representative cocycles, one per cyclic factor.
    pub fn representatives(&self) -> Vec<GammaCochain> {
        let mut out = Vec::new();
        for (f, block) in self.blocks.iter().enumerate() {
            for rep in &block.reps {
                let mut free = self.zero_free();
                free[f] = rep.clone();
                out.push(GammaCochain::from_free(self.complex.pair(), self.degree, self.moduli(), &free));
            }
        }
        out
    }

    /// Class coordinates of a relative cocycle.
    pub fn coordinates(&self, c: &GammaCochain) -> Result<Vec<u64>> {
        if c.degree() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "degree {} cochain in H^{}",
                c.degree(),
                self.degree
            )));
        }
        self.complex.check_moduli(c, &self.coefficients)?;
        if !self.complex.is_cocycle(c) {
            return Err(Error::NotACocycle);
        }
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(f, b)| b.coordinates(&c.free_component(self.complex.pair(), f)))
            .collect())
    }

    /// `Σ coords_l · rep_l`.
    pub fn cocycle_from_coordinates(&self, coords: &[u64]) -> GammaCochain {
        let mut free = self.zero_free();
        let mut it = coords.iter();
        for (f, block) in self.blocks.iter().enumerate() {
            let m = block.modulus as u128;
            for rep in &block.reps {
                let a = *it.next().expect("one coordinate per cyclic factor") as u128;
                if a == 0 {
                    continue;
                }
                for (x, &r) in free[f].iter_mut().zip(rep) {
                    *x = ((*x as u128 + a * r as u128) % m) as u64;
                }
            }
        }
        GammaCochain::from_free(self.complex.pair(), self.degree, self.moduli(), &free)
    }

    fn check_limit(&self, limit: u64) -> Result<()> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::EnumerationLimitExceeded { order, limit });
        }
        Ok(())
    }

    /// All coordinate tuples in lexicographic order.
    pub fn coordinate_tuples(&self, limit: u64) -> Result<Vec<Vec<u64>>> {
        self.check_limit(limit)?;
        let orders = self.cyclic_orders();
        let mut out = Vec::new();
        let mut cur = vec![0u64; orders.len()];
        loop {
            out.push(cur.clone());
            let mut pos = orders.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < orders[pos] {
                    break;
                }
                cur[pos] = 0;
            }
        }
    }

    /// One representative per class, in lexicographic coordinate order.
    pub fn enumerate_classes(&self, limit: u64) -> Result<Vec<GammaCochain>> {
        Ok(self
            .coordinate_tuples(limit)?
            .iter()
            .map(|c| self.cocycle_from_coordinates(c))
            .collect())
    }

    pub fn report(&self) -> CohomologyReport {
        CohomologyReport {
            degree: self.degree,
            coefficients: self.moduli().to_vec(),
            cyclic_orders: self.cyclic_orders(),
            order: num_traits::ToPrimitive::to_u128(&self.order()).unwrap_or(u128::MAX),
        }
    }
}
