//! Points and subspaces of PG(n,q).
//!
//! Points are normalized coordinate vectors (first nonzero entry 1) and are
//! numbered by the lexicographic order of those vectors, which is also the
//! column order of every incidence matrix in the crate. A subspace is stored
//! by its reduced row-echelon basis, the unique canonical representative.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::galois::ExtensionField;

/// Number of points of PG(m,q); `theta(-1, q) = 0`.
pub fn theta(m: i64, q: u64) -> u64 {
    if m < 0 {
        return 0;
    }
    (0..=m as u32).map(|i| q.pow(i)).sum()
}

/// Gaussian binomial coefficient [m choose r]_q, `None` on overflow.
pub fn gaussian_binomial(m: u32, r: u32, q: u64) -> Option<u128> {
    if r > m {
        return Some(0);
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        let num = q.checked_pow(m - i)? - 1;
        let den = q.checked_pow(i + 1)? - 1;
        // partial products are themselves Gaussian binomials, hence integral
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

/// Number of projective d-spaces of PG(n,q).
pub fn count_subspaces(n: usize, d: usize, q: u64) -> Option<u128> {
    gaussian_binomial(n as u32 + 1, d as u32 + 1, q)
}

/// Brings `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub(crate) fn rref(field: &ExtensionField, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(sel) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = field.inv(rows[rank][c]).unwrap();
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Basis of the annihilator {v : (v, r) = 0 for every row r}. `rows` must
/// be in RREF with the given pivots.
fn annihilator(field: &ExtensionField, rows: &[Vec<u32>], pivots: &[usize], cols: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for f in 0..cols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![0u32; cols];
        v[f] = 1;
        for (row, &pc) in rows.iter().zip(pivots) {
            v[pc] = field.neg(row[f]);
        }
        out.push(v);
    }
    out
}

/// A projective subspace in canonical (RREF) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    dim: usize,
    cols: usize,
    basis: Vec<u32>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of the coordinate vectors (n+1).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.basis[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.basis.chunks(self.cols)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> Vec<Vec<u32>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    fn from_rref(rows: Vec<Vec<u32>>, pivots: Vec<usize>, cols: usize) -> Subspace {
        Subspace { dim: rows.len() - 1, cols, basis: rows.concat(), pivots }
    }
}

/// The point set of PG(n,q) in canonical order.
#[derive(Clone, Debug)]
pub struct Geometry {
    n: usize,
    field: ExtensionField,
    theta: usize,
    coords: Vec<u32>,
}

impl Geometry {
    pub fn new(n: usize, field: ExtensionField, budget: &Budget) -> Result<Geometry> {
        let q = field.order() as u64;
        let count = theta(n as i64, q);
        budget.check_cells("point table", count as u128 * (n as u128 + 1))?;
        let theta = count as usize;
        let mut coords = Vec::with_capacity(theta * (n + 1));
        for lead in (0..=n).rev() {
            let mut tail = vec![0u32; n - lead];
            loop {
                coords.extend(std::iter::repeat_n(0, lead));
                coords.push(1);
                coords.extend_from_slice(&tail);
                if !advance(&mut tail, q as u32) {
                    break;
                }
            }
        }
        debug_assert_eq!(coords.len(), theta * (n + 1));
        Ok(Geometry { n, field, theta, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    /// Number of points θ_n.
    pub fn num_points(&self) -> usize {
        self.theta
    }

    pub fn point(&self, i: usize) -> &[u32] {
        let w = self.n + 1;
        &self.coords[i * w..(i + 1) * w]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u32]> {
        self.coords.chunks(self.n + 1)
    }

    /// Scales `v` so its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &[u32]) -> Result<Vec<u32>> {
        let lead = v.iter().position(|&a| a != 0).ok_or(Error::ZeroVector)?;
        let inv = self.field.inv(v[lead]).unwrap();
        Ok(v.iter().map(|&a| self.field.mul(a, inv)).collect())
    }

    /// Index of an already normalized vector.
    pub fn index_of_normalized(&self, v: &[u32]) -> usize {
        let q = self.q() as usize;
        let lead = v.iter().position(|&a| a != 0).expect("nonzero vector");
        let tail = v[lead + 1..].iter().fold(0usize, |acc, &a| acc * q + a as usize);
        theta(self.n as i64 - lead as i64 - 1, q as u64) as usize + tail
    }

    pub fn index_of(&self, v: &[u32]) -> Result<usize> {
        self.check_len(v.len())?;
        if v.iter().any(|&a| a >= self.field.order()) {
            return Err(Error::MixedField { p: self.field.p(), h: self.field.h() });
        }
        let v = self.normalize(v)?;
        Ok(self.index_of_normalized(&v))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {len} in PG({}, {})",
                self.n,
                self.q()
            )));
        }
        Ok(())
    }

    fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.cols != self.n + 1 || s.basis.iter().any(|&a| a >= self.field.order()) {
            return Err(Error::DimensionMismatch(format!(
                "subspace with {} coordinates in PG({}, {})",
                s.cols,
                self.n,
                self.q()
            )));
        }
        Ok(())
    }

    /// Canonical subspace spanned by `rows`; `None` when they span nothing.
    pub fn subspace_from_rows(&self, rows: &[Vec<u32>]) -> Result<Option<Subspace>> {
        for r in rows {
            self.check_len(r.len())?;
            if r.iter().any(|&a| a >= self.field.order()) {
                return Err(Error::MixedField { p: self.field.p(), h: self.field.h() });
            }
        }
        let mut m = rows.to_vec();
        let pivots = rref(&self.field, &mut m);
        if m.is_empty() {
            return Ok(None);
        }
        Ok(Some(Subspace::from_rref(m, pivots, self.n + 1)))
    }

    pub fn whole_space(&self) -> Subspace {
        let w = self.n + 1;
        let rows: Vec<Vec<u32>> = (0..w)
            .map(|i| (0..w).map(|j| u32::from(i == j)).collect())
            .collect();
        Subspace::from_rref(rows, (0..w).collect(), w)
    }

    pub fn point_subspace(&self, i: usize) -> Subspace {
        let v = self.point(i).to_vec();
        let lead = v.iter().position(|&a| a != 0).unwrap();
        Subspace::from_rref(vec![v], vec![lead], self.n + 1)
    }

    /// Number of d-spaces (Gaussian binomial).
    pub fn count_subspaces(&self, d: usize) -> Option<u128> {
        count_subspaces(self.n, d, self.q())
    }

    /// All projective d-spaces in canonical order, generated directly from
    /// pivot-column patterns.
    pub fn subspaces(&self, d: usize, budget: &Budget) -> Result<Vec<Subspace>> {
        if d > self.n {
            return Err(Error::DimensionMismatch(format!("{d}-spaces of PG({}, {})", self.n, self.q())));
        }
        let count = self.count_subspaces(d).ok_or(Error::BudgetExceeded {
            what: "subspace enumeration",
            needed: u128::MAX,
            cap: budget.cells as u128,
        })?;
        budget.check_cells("subspace enumeration", count * ((d + 1) * (self.n + 1)) as u128)?;

        let w = self.n + 1;
        let patterns = combinations(w, d + 1);
        let q = self.field.order();
        let mut all: Vec<Subspace> = patterns
            .par_iter()
            .flat_map_iter(|pivots| {
                let free: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(r, &pc)| {
                        (pc + 1..w).filter(|c| !pivots.contains(c)).map(move |c| (r, c))
                    })
                    .collect();
                let mut values = vec![0u32; free.len()];
                let mut out = Vec::new();
                loop {
                    let mut basis = vec![0u32; (d + 1) * w];
                    for (r, &pc) in pivots.iter().enumerate() {
                        basis[r * w + pc] = 1;
                    }
                    for (&(r, c), &v) in free.iter().zip(&values) {
                        basis[r * w + c] = v;
                    }
                    out.push(Subspace { dim: d, cols: w, basis, pivots: pivots.clone() });
                    if !advance(&mut values, q) {
                        break;
                    }
                }
                out
            })
            .collect();
        all.sort_unstable_by(|a, b| a.basis.cmp(&b.basis));
        debug_assert_eq!(all.len() as u128, count);
        Ok(all)
    }

    /// Indices of the points of `s`, ascending.
    pub fn subspace_points(&self, s: &Subspace) -> Vec<usize> {
        let w = self.n + 1;
        let q = self.field.order();
        let rows: Vec<&[u32]> = s.rows().collect();
        let mut out = Vec::with_capacity(theta(s.dim as i64, q as u64) as usize);
        let mut v = vec![0u32; w];
        for lead in 0..rows.len() {
            let rest = rows.len() - lead - 1;
            let mut coef = vec![0u32; rest];
            loop {
                v.copy_from_slice(rows[lead]);
                for (a, row) in coef.iter().zip(&rows[lead + 1..]) {
                    if *a == 0 {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(row.iter()) {
                        if y != 0 {
                            *x = self.field.add(*x, self.field.mul(*a, y));
                        }
                    }
                }
                out.push(self.index_of_normalized(&v));
                if !advance(&mut coef, q) {
                    break;
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether the point with coordinates `v` lies in `s`.
    pub fn incident(&self, v: &[u32], s: &Subspace) -> Result<bool> {
        self.check_len(v.len())?;
        self.check_subspace(s)?;
        let mut r = v.to_vec();
        for (row, &pc) in s.rows().zip(&s.pivots) {
            let f = r[pc];
            if f == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                *x = self.field.sub(*x, self.field.mul(f, y));
            }
        }
        Ok(r.iter().all(|&a| a == 0))
    }

    pub fn incident_index(&self, i: usize, s: &Subspace) -> Result<bool> {
        self.incident(self.point(i), s)
    }

    pub fn contains(&self, outer: &Subspace, inner: &Subspace) -> Result<bool> {
        for r in inner.rows() {
            if !self.incident(r, outer)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn span(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check_subspace(a)?;
        self.check_subspace(b)?;
        let mut rows = a.basis_rows();
        rows.extend(b.basis_rows());
        Ok(self.subspace_from_rows(&rows)?.expect("span of nonempty subspaces"))
    }

    /// Intersection of two subspaces; `None` when they are skew.
    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Result<Option<Subspace>> {
        self.check_subspace(a)?;
        self.check_subspace(b)?;
        let w = self.n + 1;
        let mut ann = annihilator(&self.field, &a.basis_rows(), &a.pivots, w);
        ann.extend(annihilator(&self.field, &b.basis_rows(), &b.pivots, w));
        if ann.is_empty() {
            return Ok(Some(self.whole_space()));
        }
        let pivots = rref(&self.field, &mut ann);
        let meet = annihilator(&self.field, &ann, &pivots, w);
        self.subspace_from_rows(&meet)
    }

    /// CSV table `index,x0,...,xn` of the points.
    pub fn points_csv(&self) -> String {
        let mut s = String::from("index");
        for i in 0..=self.n {
            let _ = write!(s, ",x{i}");
        }
        s.push('\n');
        for (i, p) in self.points().enumerate() {
            let _ = write!(s, "{i}");
            for a in p {
                let _ = write!(s, ",{a}");
            }
            s.push('\n');
        }
        s
    }

    /// CSV table `index,dim,basis` with the basis rows separated by `;`.
    pub fn subspaces_csv(&self, spaces: &[Subspace]) -> String {
        let mut s = String::from("index,dim,basis\n");
        for (i, sp) in spaces.iter().enumerate() {
            let rows: Vec<String> = sp
                .rows()
                .map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(s, "{i},{},{}", sp.dim, rows.join(";"));
        }
        s
    }
}

/// Next vector in the base-`q` odometer (last digit fastest); false on wrap.
pub(crate) fn advance(values: &mut [u32], q: u32) -> bool {
    for x in values.iter_mut().rev() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

/// All r-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..r).rev().find(|&i| c[i] < n - r + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}
