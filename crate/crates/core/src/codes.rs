//! The p-ary codes spanned by point/k-space incidence matrices.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::galois::PrimeField;
use crate::geometry::{Geometry, Subspace};

/// Byte-sized arithmetic tables for F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    p: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Alphabet {
    pub fn new(p: u32) -> Result<Arc<Alphabet>> {
        let fp = PrimeField::new(p)?;
        if p > 251 {
            return Err(Error::AlphabetTooLarge(p));
        }
        let n = p as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..p {
            for b in 0..p {
                add[(a * p + b) as usize] = fp.add(a, b) as u8;
                mul[(a * p + b) as usize] = fp.mul(a, b) as u8;
            }
        }
        let neg = (0..p).map(|a| fp.neg(a) as u8).collect();
        let inv = (0..p).map(|a| fp.inv(a).unwrap_or(0) as u8).collect();
        Ok(Arc::new(Alphabet { p: p as u8, add, mul, neg, inv }))
    }

    #[inline]
    pub fn p(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.p as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.p as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero symbol.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// `dst += f * src`, entrywise.
    pub fn axpy(&self, dst: &mut [u8], f: u8, src: &[u8]) {
        if f == 0 {
            return;
        }
        let row = &self.mul[f as usize * self.p as usize..(f as usize + 1) * self.p as usize];
        for (x, &y) in dst.iter_mut().zip(src) {
            if y != 0 {
                *x = self.add(*x, row[y as usize]);
            }
        }
    }

    pub fn dot(&self, a: &[u8], b: &[u8]) -> u8 {
        a.iter().zip(b).fold(0u8, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// Reduced row-echelon form over F_p, dropping zero rows; returns pivots.
pub fn rref_fp(alpha: &Alphabet, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    rref_fp_ordered(alpha, rows, &(0..cols).collect::<Vec<_>>())
}

/// RREF with pivots searched in the given column order. Pivot columns come
/// back in the order they were found.
pub fn rref_fp_ordered(alpha: &Alphabet, rows: &mut Vec<Vec<u8>>, order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &c in order {
        if rank == rows.len() {
            break;
        }
        let Some(sel) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = alpha.inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = alpha.mul(*x, inv);
        }
        let pivot_row = std::mem::take(&mut rows[rank]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = alpha.neg(row[c]);
            alpha.axpy(row, f, &pivot_row);
        }
        rows[rank] = pivot_row;
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// A vector over F_p with cached weight and support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Codeword {
    p: u8,
    entries: Vec<u8>,
    #[serde(skip)]
    weight: usize,
    #[serde(skip)]
    support: Vec<usize>,
}

impl Codeword {
    pub fn new(p: u8, entries: Vec<u8>) -> Result<Codeword> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= p) {
            return Err(Error::InvalidParameter(format!("symbol {bad} outside F_{p}")));
        }
        Ok(Self::from_entries(p, entries))
    }

    pub(crate) fn from_entries(p: u8, entries: Vec<u8>) -> Codeword {
        let support: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect();
        Codeword { p, weight: support.len(), entries, support }
    }

    pub fn zero(p: u8, len: usize) -> Codeword {
        Self::from_entries(p, vec![0; len])
    }

    /// The 0/1 incidence vector of a point set.
    pub fn incidence(p: u8, len: usize, points: &[usize]) -> Codeword {
        let mut e = vec![0u8; len];
        for &i in points {
            e[i] = 1;
        }
        Self::from_entries(p, e)
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0
    }

    pub fn scale(&self, alpha: &Alphabet, f: u8) -> Codeword {
        Self::from_entries(self.p, self.entries.iter().map(|&x| alpha.mul(f, x)).collect())
    }

    pub fn add(&self, alpha: &Alphabet, other: &Codeword) -> Codeword {
        let mut e = self.entries.clone();
        alpha.axpy(&mut e, 1, &other.entries);
        Self::from_entries(self.p, e)
    }

    pub fn sub(&self, alpha: &Alphabet, other: &Codeword) -> Codeword {
        let mut e = self.entries.clone();
        alpha.axpy(&mut e, alpha.neg(1), &other.entries);
        Self::from_entries(self.p, e)
    }

    /// Scalar multiple whose first nonzero entry is 1.
    pub fn canonical(&self, alpha: &Alphabet) -> Codeword {
        match self.support.first() {
            Some(&i) => self.scale(alpha, alpha.inv(self.entries[i])),
            None => self.clone(),
        }
    }

    /// Entries as sparse `index:value` pairs.
    pub fn sparse(&self) -> String {
        self.support
            .iter()
            .map(|&i| format!("{i}:{}", self.entries[i]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Scalar product (c, T) with T given as a point set.
pub fn scalar_product_set(alpha: &Alphabet, c: &Codeword, points: &[usize]) -> Result<u8> {
    if let Some(&bad) = points.iter().find(|&&i| i >= c.len()) {
        return Err(Error::DimensionMismatch(format!("point {bad} outside length {}", c.len())));
    }
    Ok(points.iter().fold(0u8, |acc, &i| alpha.add(acc, c.entries[i])))
}

/// Scalar product (c1, c2) in F_p.
pub fn scalar_product(alpha: &Alphabet, a: &Codeword, b: &Codeword) -> Result<u8> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    Ok(alpha.dot(&a.entries, &b.entries))
}

/// The k-spaces of PG(n,q) with their point sets, in canonical order.
#[derive(Clone, Debug)]
pub struct Incidence {
    k: usize,
    len: usize,
    spaces: Vec<Subspace>,
    blocks: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(geom: &Geometry, k: usize, budget: &Budget) -> Result<Incidence> {
        let count = geom.count_subspaces(k).unwrap_or(u128::MAX);
        budget.check_cells("incidence matrix", count.saturating_mul(geom.num_points() as u128))?;
        let spaces = geom.subspaces(k, budget)?;
        let blocks = spaces.par_iter().map(|s| geom.subspace_points(s)).collect();
        Ok(Incidence { k, len: geom.num_points(), spaces, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points (code length).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Dense 0/1 incidence matrix: rows k-spaces, columns points.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut row = vec![0u8; self.len];
                for &i in b {
                    row[i] = 1;
                }
                row
            })
            .collect()
    }
}

/// Incidence matrix of points and k-spaces of the given geometry.
pub fn incidence_matrix(geom: &Geometry, k: usize, budget: &Budget) -> Result<Vec<Vec<u8>>> {
    Ok(Incidence::new(geom, k, budget)?.matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    /// Row space of an incidence matrix.
    Incidence,
    Dual,
    Hull,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub p: u32,
    pub h: u32,
}

impl CodeParams {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.h)
    }
}

/// A linear code over F_p stored by its RREF generator matrix.
#[derive(Clone, Debug)]
pub struct Code {
    params: CodeParams,
    kind: CodeKind,
    alpha: Arc<Alphabet>,
    length: usize,
    gen: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.alpha.p() == other.alpha.p() && self.length == other.length && self.gen == other.gen
    }
}

/// C_k(n,q): the F_p row space of the point/k-space incidence matrix.
pub fn build_code(geom: &Geometry, k: usize, budget: &Budget) -> Result<Code> {
    let inc = Incidence::new(geom, k, budget)?;
    Code::from_incidence(geom, &inc)
}

impl Code {
    pub fn from_incidence(geom: &Geometry, inc: &Incidence) -> Result<Code> {
        let f = geom.field();
        let params = CodeParams { n: geom.n(), k: inc.k(), p: f.p(), h: f.h() };
        let alpha = Alphabet::new(f.p())?;
        Ok(Self::from_rows(params, CodeKind::Incidence, alpha, inc.len(), inc.matrix()))
    }

    /// Code spanned by arbitrary rows (canonicalized to RREF).
    pub fn from_rows(params: CodeParams, kind: CodeKind, alpha: Arc<Alphabet>, length: usize, mut rows: Vec<Vec<u8>>) -> Code {
        let pivots = rref_fp(&alpha, &mut rows);
        Code { params, kind, alpha, length, gen: rows, pivots }
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn p(&self) -> u8 {
        self.alpha.p()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.gen.len()
    }

    /// RREF generator rows.
    pub fn generator(&self) -> &[Vec<u8>] {
        &self.gen
    }

    /// Pivot columns of the generator: an information set.
    pub fn information_set(&self) -> &[usize] {
        &self.pivots
    }

    /// Null space of the generator.
    pub fn dual(&self) -> Code {
        let rows = null_space(&self.alpha, &self.gen, &self.pivots, self.length);
        Self::from_rows(self.params, CodeKind::Dual, self.alpha.clone(), self.length, rows)
    }

    /// C ∩ C^⊥, computed as the dual of C + C^⊥.
    pub fn hull(&self) -> Code {
        let mut rows = self.gen.clone();
        rows.extend(self.dual().gen);
        let sum = Self::from_rows(self.params, CodeKind::Custom, self.alpha.clone(), self.length, rows);
        let mut hull = sum.dual();
        hull.kind = CodeKind::Hull;
        hull
    }

    /// Codeword for message coefficients on the generator rows.
    pub fn encode(&self, msg: &[u8]) -> Result<Codeword> {
        if msg.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("message of length {} for dimension {}", msg.len(), self.dim())));
        }
        let mut e = vec![0u8; self.length];
        for (&m, row) in msg.iter().zip(&self.gen) {
            self.alpha.axpy(&mut e, m % self.p(), row);
        }
        Ok(Codeword::from_entries(self.p(), e))
    }

    /// Row-space membership by reduction against the RREF generator.
    pub fn contains(&self, c: &Codeword) -> bool {
        if c.len() != self.length || c.p() != self.p() {
            return false;
        }
        let mut r = c.entries.clone();
        for (row, &pc) in self.gen.iter().zip(&self.pivots) {
            let f = r[pc];
            if f != 0 {
                self.alpha.axpy(&mut r, self.alpha.neg(f), row);
            }
        }
        r.iter().all(|&x| x == 0)
    }

    /// Message coordinates of a codeword (its entries on the information set).
    pub fn message_of(&self, c: &Codeword) -> Result<Vec<u8>> {
        if !self.contains(c) {
            return Err(Error::NotInCode);
        }
        Ok(self.pivots.iter().map(|&i| c.entries[i]).collect())
    }

    pub fn random_codeword<R: Rng>(&self, rng: &mut R) -> Codeword {
        let msg: Vec<u8> = (0..self.dim()).map(|_| rng.gen_range(0..self.p())).collect();
        self.encode(&msg).expect("message length matches dimension")
    }
}

/// Basis of {v : G v^T = 0} for an RREF generator G.
fn null_space(alpha: &Alphabet, gen: &[Vec<u8>], pivots: &[usize], len: usize) -> Vec<Vec<u8>> {
    let mut is_pivot = vec![false; len];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..len)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u8; len];
            v[f] = 1;
            for (row, &pc) in gen.iter().zip(pivots) {
                v[pc] = alpha.neg(row[f]);
            }
            v
        })
        .collect()
}

/// Whether (c, K) = 0 for every block K of the incidence structure.
pub fn dual_membership(alpha: &Alphabet, c: &Codeword, inc: &Incidence) -> Result<bool> {
    if c.len() != inc.len() {
        return Err(Error::DimensionMismatch(format!("codeword length {} vs {} points", c.len(), inc.len())));
    }
    for b in inc.blocks() {
        if scalar_product_set(alpha, c, b)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates (c, U) over all subspaces U of dimension at least `min_dim`.
pub struct FunctionalChecker {
    alpha: Arc<Alphabet>,
    len: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalValue {
    /// Whether (c, U) takes one value on every tested subspace.
    pub constant: bool,
    /// The value on the first tested subspace.
    pub value: u8,
    pub subspaces_tested: usize,
}

impl FunctionalChecker {
    pub fn new(geom: &Geometry, min_dim: usize, budget: &Budget) -> Result<FunctionalChecker> {
        let alpha = Alphabet::new(geom.field().p())?;
        let mut blocks = Vec::new();
        for d in min_dim..=geom.n() {
            blocks.extend(Incidence::new(geom, d, budget)?.blocks);
        }
        Ok(FunctionalChecker { alpha, len: geom.num_points(), blocks })
    }

    pub fn evaluate(&self, c: &Codeword) -> Result<FunctionalValue> {
        if c.len() != self.len {
            return Err(Error::DimensionMismatch(format!("codeword length {} vs {} points", c.len(), self.len)));
        }
        let mut values = self.blocks.iter().map(|b| scalar_product_set(&self.alpha, c, b).unwrap());
        let first = values.next().unwrap_or(0);
        let constant = values.all(|v| v == first);
        Ok(FunctionalValue { constant, value: first, subspaces_tested: self.blocks.len() })
    }
}

/// For c in C_k(n,q): whether (c, U) is constant over all subspaces of
/// dimension at least n-k, and that constant.
pub fn constant_functional_check(geom: &Geometry, code: &Code, c: &Codeword, budget: &Budget) -> Result<(bool, u8)> {
    if !code.contains(c) {
        return Err(Error::NotInCode);
    }
    let p = code.params();
    let checker = FunctionalChecker::new(geom, p.n - p.k, budget)?;
    let v = checker.evaluate(c)?;
    Ok((v.constant, v.value))
}
