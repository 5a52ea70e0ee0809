//! Blocking sets, tangent spaces, certification, Desarguesian spreads and
//! the linear blocking sets B(U) obtained by field reduction.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::codes::{scalar_product_set, Alphabet, Code, Codeword, Incidence};
use crate::error::{Error, Result};
use crate::galois::make_field;
use crate::geometry::{theta, Geometry, Subspace};

/// A set of point indices, sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<usize>,
}

impl PointSet {
    /// Sorts and deduplicates; every index must be below `num_points`.
    pub fn new(mut points: Vec<usize>, num_points: usize) -> Result<PointSet> {
        points.sort_unstable();
        points.dedup();
        if let Some(&bad) = points.iter().find(|&&i| i >= num_points) {
            return Err(Error::InvalidParameter(format!("point index {bad} out of range 0..{num_points}")));
        }
        Ok(PointSet { points })
    }

    pub fn of_subspace(geom: &Geometry, s: &Subspace) -> PointSet {
        PointSet { points: geom.subspace_points(s) }
    }

    pub fn all(num_points: usize) -> PointSet {
        PointSet { points: (0..num_points).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn contains(&self, i: usize) -> bool {
        self.points.binary_search(&i).is_ok()
    }

    pub fn mask(&self, num_points: usize) -> Vec<bool> {
        let mut m = vec![false; num_points];
        for &i in &self.points {
            m[i] = true;
        }
        m
    }

    /// Number of common points.
    pub fn meet_count(&self, other: &[usize]) -> usize {
        other.iter().filter(|&&i| self.contains(i)).count()
    }

    pub fn incidence_vector(&self, p: u8, len: usize) -> Codeword {
        Codeword::incidence(p, len, &self.points)
    }
}

fn check_set(geom: &Geometry, set: &PointSet) -> Result<()> {
    match set.points.last() {
        Some(&i) if i >= geom.num_points() => Err(Error::DimensionMismatch(format!(
            "point index {i} outside PG({}, {})",
            geom.n(),
            geom.q()
        ))),
        _ => Ok(()),
    }
}

fn blocking_dim(geom: &Geometry, k: usize) -> Result<usize> {
    geom.n()
        .checked_sub(k)
        .ok_or_else(|| Error::InvalidParameter(format!("k = {k} exceeds n = {}", geom.n())))
}

fn intersection_counts(mask: &[bool], blocks: &[Vec<usize>]) -> Vec<usize> {
    blocks.par_iter().map(|b| b.iter().filter(|&&i| mask[i]).count()).collect()
}

/// Whether every (n-k)-space meets `set`.
pub fn is_k_blocking(geom: &Geometry, set: &PointSet, k: usize, budget: &Budget) -> Result<bool> {
    check_set(geom, set)?;
    let inc = Incidence::new(geom, blocking_dim(geom, k)?, budget)?;
    let mask = set.mask(geom.num_points());
    Ok(inc.blocks().par_iter().all(|b| b.iter().any(|&i| mask[i])))
}

/// All (n-k)-spaces meeting `set` exactly in the point `point`.
pub fn tangent_spaces(geom: &Geometry, set: &PointSet, point: usize, k: usize, budget: &Budget) -> Result<Vec<Subspace>> {
    check_set(geom, set)?;
    if !set.contains(point) {
        return Err(Error::InvalidParameter(format!("point {point} is not in the set")));
    }
    let inc = Incidence::new(geom, blocking_dim(geom, k)?, budget)?;
    let mask = set.mask(geom.num_points());
    Ok(inc
        .spaces()
        .iter()
        .zip(inc.blocks())
        .filter(|(_, b)| b.binary_search(&point).is_ok() && b.iter().filter(|&&i| mask[i]).count() == 1)
        .map(|(s, _)| s.clone())
        .collect())
}

/// Largest integers strictly below the smallness bound 3(q^k+1)/2 and the
/// bound 3(q^k - q^k/p)/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallnessBound {
    pub small: String,
    pub small_max: u64,
    pub lemma: String,
    pub lemma_max: u64,
}

fn max_below(r: Ratio<u64>) -> u64 {
    r.ceil().to_integer().saturating_sub(1)
}

pub fn smallness_bound(k: u32, p: u64, h: u32) -> SmallnessBound {
    let qk = p.pow(h * k);
    let small = Ratio::new(3 * (qk + 1), 2);
    // 3(q^k - q^k/p)/2 = 3 q^k (p-1) / (2p)
    let lemma = Ratio::new(3 * qk * (p - 1), 2 * p);
    SmallnessBound { small: small.to_string(), small_max: max_below(small), lemma: lemma.to_string(), lemma_max: max_below(lemma) }
}

/// Intersection sizes of a point set with every d-space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueHistogram {
    pub dim: usize,
    pub subspaces: u64,
    /// Subspaces disjoint from the set.
    pub skew: u64,
    /// Nonempty intersection size mod p -> number of subspaces.
    pub residues: BTreeMap<u64, u64>,
}

impl ResidueHistogram {
    /// Every nonempty intersection has size 1 mod p.
    pub fn one_mod_p(&self) -> bool {
        self.residues.keys().all(|&r| r == 1)
    }

    /// The residue classes seen, with 0 for skew subspaces.
    pub fn support(&self) -> Vec<u64> {
        let mut s: Vec<u64> = self.residues.keys().copied().collect();
        if self.skew > 0 && !s.contains(&0) {
            s.insert(0, 0);
        }
        s
    }
}

pub fn residue_histogram(geom: &Geometry, set: &PointSet, dim: usize, budget: &Budget) -> Result<ResidueHistogram> {
    check_set(geom, set)?;
    let inc = Incidence::new(geom, dim, budget)?;
    let p = geom.field().p() as u64;
    let counts = intersection_counts(&set.mask(geom.num_points()), inc.blocks());
    let mut residues = BTreeMap::new();
    let mut skew = 0;
    for c in counts {
        if c == 0 {
            skew += 1;
        } else {
            *residues.entry(c as u64 % p).or_insert(0) += 1;
        }
    }
    Ok(ResidueHistogram { dim, subspaces: inc.spaces().len() as u64, skew, residues })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingSetReport {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub size: usize,
    pub is_blocking: bool,
    pub is_minimal: bool,
    pub is_small: bool,
    pub bounds: SmallnessBound,
    /// Essential point -> first tangent (n-k)-space in canonical order.
    pub tangent_witnesses: BTreeMap<usize, Subspace>,
    /// Points without a tangent (n-k)-space.
    pub inessential: Vec<usize>,
    pub residue_histograms: Vec<ResidueHistogram>,
    /// Every nonempty intersection with a tested subspace has 1 mod p points.
    pub residues_one_mod_p: bool,
    /// k outside 1..=n-1.
    pub degenerate_k: bool,
}

/// Full certification of `set` as a k-blocking set; residues are taken
/// over subspaces of every dimension in `dims` (default 0..=n-k).
pub fn certify(
    geom: &Geometry,
    set: &PointSet,
    k: usize,
    dims: Option<RangeInclusive<usize>>,
    budget: &Budget,
) -> Result<BlockingSetReport> {
    check_set(geom, set)?;
    let d = blocking_dim(geom, k)?;
    let inc = Incidence::new(geom, d, budget)?;
    let mask = set.mask(geom.num_points());
    let counts = intersection_counts(&mask, inc.blocks());
    let is_blocking = counts.iter().all(|&c| c > 0);

    let mut tangent_witnesses = BTreeMap::new();
    for ((s, b), &c) in inc.spaces().iter().zip(inc.blocks()).zip(&counts) {
        if c == 1 {
            let pt = *b.iter().find(|&&i| mask[i]).expect("one point in common");
            tangent_witnesses.entry(pt).or_insert_with(|| s.clone());
        }
    }
    let inessential: Vec<usize> = set.points().iter().copied().filter(|i| !tangent_witnesses.contains_key(i)).collect();

    let dims = dims.unwrap_or(0..=d);
    if *dims.end() > geom.n() {
        return Err(Error::InvalidParameter(format!("residue dimension {} exceeds n = {}", dims.end(), geom.n())));
    }
    let mut hists = Vec::new();
    for dim in dims {
        hists.push(residue_histogram(geom, set, dim, budget)?);
    }
    let p = geom.field().p() as u64;
    let h = geom.field().h();
    let bounds = smallness_bound(k as u32, p, h);
    let size = set.len();
    Ok(BlockingSetReport {
        n: geom.n(),
        k,
        q: geom.q(),
        size,
        is_blocking,
        is_minimal: is_blocking && inessential.is_empty(),
        is_small: size as u64 <= bounds.small_max,
        bounds,
        tangent_witnesses,
        inessential,
        residues_one_mod_p: hists.iter().all(|h| h.one_mod_p()),
        residue_histograms: hists,
        degenerate_k: k == 0 || k >= geom.n(),
    })
}

/// Desarguesian spread of PG((n+1)h-1, p) by (h-1)-spaces, one element per
/// point of PG(n, p^h), indexed by the canonical point order.
#[derive(Clone, Debug)]
pub struct Spread {
    base: Geometry,
    ambient: Geometry,
    elements: Vec<Subspace>,
    element_points: Vec<Vec<usize>>,
    assign: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpreadSummary {
    pub n: usize,
    pub p: u32,
    pub h: u32,
    pub ambient_dim: usize,
    pub ambient_points: usize,
    pub elements: usize,
    pub element_dim: usize,
    pub points_per_element: usize,
    pub partition_verified: bool,
}

pub fn desarguesian_spread(base: &Geometry, budget: &Budget) -> Result<Spread> {
    let f = base.field();
    let h = f.h() as usize;
    let ambient_n = (base.n() + 1) * h - 1;
    let ambient = Geometry::new(ambient_n, make_field(f.p(), 1)?, budget)?;
    budget.check_cells("spread table", ambient.num_points() as u128 * (ambient_n as u128 + 1))?;
    let elements: Vec<Subspace> = (0..base.num_points())
        .into_par_iter()
        .map(|i| {
            let orbit = f.scalar_orbit(base.point(i)).expect("points are nonzero");
            ambient.subspace_from_rows(&orbit).expect("orbit in ambient").expect("orbit is nonzero")
        })
        .collect();
    let element_points: Vec<Vec<usize>> = elements.par_iter().map(|e| ambient.subspace_points(e)).collect();
    let mut assign = vec![usize::MAX; ambient.num_points()];
    for (e, pts) in element_points.iter().enumerate() {
        for &x in pts {
            if assign[x] != usize::MAX {
                return Err(Error::Precondition(format!("spread elements {} and {e} meet", assign[x])));
            }
            assign[x] = e;
        }
    }
    if let Some(x) = assign.iter().position(|&e| e == usize::MAX) {
        return Err(Error::Precondition(format!("ambient point {x} lies in no spread element")));
    }
    Ok(Spread { base: base.clone(), ambient, elements, element_points, assign })
}

impl Spread {
    pub fn base(&self) -> &Geometry {
        &self.base
    }

    pub fn ambient(&self) -> &Geometry {
        &self.ambient
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element_points(&self, e: usize) -> &[usize] {
        &self.element_points[e]
    }

    /// Spread element (= base point index) of an ambient point.
    pub fn assign(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Recounts the partition from the element point sets.
    pub fn summary(&self) -> SpreadSummary {
        let f = self.base.field();
        let mut seen = vec![0u32; self.ambient.num_points()];
        for pts in &self.element_points {
            for &x in pts {
                seen[x] += 1;
            }
        }
        let h = f.h() as usize;
        SpreadSummary {
            n: self.base.n(),
            p: f.p(),
            h: f.h(),
            ambient_dim: self.ambient.n(),
            ambient_points: self.ambient.num_points(),
            elements: self.elements.len(),
            element_dim: h - 1,
            points_per_element: theta(h as i64 - 1, f.p() as u64) as usize,
            partition_verified: seen.iter().all(|&c| c == 1)
                && self.elements.len() == self.base.num_points()
                && self.elements.iter().all(|e| e.dim() == h - 1),
        }
    }

    /// Whether span(R_a, R_b) is a union of spread elements.
    pub fn span_is_partitioned(&self, a: usize, b: usize) -> Result<bool> {
        let s = self.ambient.span(&self.elements[a], &self.elements[b])?;
        let pts = self.ambient.subspace_points(&s);
        let mut hit: Vec<usize> = pts.iter().map(|&x| self.assign[x]).collect();
        hit.sort_unstable();
        hit.dedup();
        let covered: usize = hit.iter().map(|&e| self.element_points[e].len()).sum();
        Ok(covered == pts.len())
    }

    /// Reduced image of a subspace of the base geometry: the ambient
    /// subspace spanned by its spread elements.
    pub fn reduce_subspace(&self, s: &Subspace) -> Result<Subspace> {
        if s.cols() != self.base.n() + 1 {
            return Err(Error::DimensionMismatch(format!("subspace with {} coordinates, base has {}", s.cols(), self.base.n() + 1)));
        }
        let f = self.base.field();
        let mut rows = Vec::new();
        for r in s.rows() {
            let mut mult = 1;
            for _ in 0..f.h() {
                let scaled: Vec<u32> = r.iter().map(|&a| f.mul(mult, a)).collect();
                rows.push(f.reduce_encoded(&scaled));
                mult = f.mul(mult, f.generator());
            }
        }
        Ok(self.ambient.subspace_from_rows(&rows)?.expect("nonzero subspace"))
    }

    /// B(U): the base points whose spread elements meet `u`.
    pub fn b_of(&self, u: &Subspace) -> Result<PointSet> {
        if u.cols() != self.ambient.n() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "subspace with {} coordinates, ambient PG({}, {}) has {}",
                u.cols(),
                self.ambient.n(),
                self.ambient.q(),
                self.ambient.n() + 1
            )));
        }
        let pts = self.ambient.subspace_points(u);
        PointSet::new(pts.iter().map(|&x| self.assign[x]).collect(), self.base.num_points())
    }

    /// Ambient points covered by the given spread elements.
    pub fn lift_point_set(&self, elements: &PointSet) -> Result<PointSet> {
        if let Some(&e) = elements.points().iter().find(|&&e| e >= self.elements.len()) {
            return Err(Error::InvalidParameter(format!("{e} is not a spread element")));
        }
        let pts = elements.points().iter().flat_map(|&e| self.element_points[e].iter().copied()).collect();
        PointSet::new(pts, self.ambient.num_points())
    }
}

/// B(U) for an hk-dimensional U, certified as a k-blocking set of the base.
pub fn linear_blocking_set(
    spread: &Spread,
    u: &Subspace,
    k: usize,
    dims: Option<RangeInclusive<usize>>,
    budget: &Budget,
) -> Result<(PointSet, BlockingSetReport)> {
    let h = spread.base.field().h() as usize;
    if u.dim() != h * k {
        return Err(Error::InvalidParameter(format!("U has dimension {}, expected hk = {}", u.dim(), h * k)));
    }
    let set = spread.b_of(u)?;
    let report = certify(&spread.base, &set, k, dims, budget)?;
    Ok((set, report))
}

/// Uniformly random d-space, by rejection on random spanning vectors.
pub fn random_subspace<R: Rng>(geom: &Geometry, d: usize, rng: &mut R) -> Result<Subspace> {
    if d > geom.n() {
        return Err(Error::DimensionMismatch(format!("{d}-space in PG({}, {})", geom.n(), geom.q())));
    }
    let q = geom.field().order();
    loop {
        let rows: Vec<Vec<u32>> = (0..=d).map(|_| (0..=geom.n()).map(|_| rng.gen_range(0..q)).collect()).collect();
        if let Some(s) = geom.subspace_from_rows(&rows)? {
            if s.dim() == d {
                return Ok(s);
            }
        }
    }
}

/// [`random_subspace`] driven by a seeded ChaCha8 generator.
pub fn seeded_subspace(geom: &Geometry, d: usize, seed: u64) -> Result<Subspace> {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    random_subspace(geom, d, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCheck {
    pub weight: usize,
    pub blocking_set_size: usize,
    pub common_points: usize,
    /// |supp(c) ∩ B| mod p; predicted to be 1.
    pub residue: u64,
}

/// |supp(c) ∩ B| mod p for c in C_k(n,q) of weight below 2q^k with
/// (c,S) != 0 for some (n-k)-space S, and B a small minimal
/// (n-k)-blocking set. Every precondition is checked first.
pub fn residue_cross_check(
    geom: &Geometry,
    code: &Code,
    c: &Codeword,
    b: &PointSet,
    budget: &Budget,
) -> Result<ResidueCheck> {
    let k = code.params().k;
    let d = blocking_dim(geom, k)?;
    let limit = 2 * geom.q().pow(k as u32) as usize;
    if c.weight() >= limit {
        return Err(Error::Precondition(format!("weight {} is not below 2q^k = {limit}", c.weight())));
    }
    if !code.contains(c) {
        return Err(Error::NotInCode);
    }
    let alpha = Alphabet::new(geom.field().p())?;
    let inc = Incidence::new(geom, d, budget)?;
    let mut nonzero = false;
    for blk in inc.blocks() {
        if scalar_product_set(&alpha, c, blk)? != 0 {
            nonzero = true;
            break;
        }
    }
    if !nonzero {
        return Err(Error::Precondition("(c,S) = 0 for every (n-k)-space S".into()));
    }
    let report = certify(geom, b, d, Some(0..=0), budget)?;
    if !(report.is_blocking && report.is_minimal && report.is_small) {
        return Err(Error::Precondition(format!("B is not a small minimal {d}-blocking set")));
    }
    let common = b.meet_count(c.support());
    Ok(ResidueCheck {
        weight: c.weight(),
        blocking_set_size: b.len(),
        common_points: common,
        residue: common as u64 % geom.field().p() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(n: usize, p: u32, h: u32) -> Geometry {
        Geometry::new(n, make_field(p, h).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn bounds() {
        let b = smallness_bound(1, 3, 2);
        assert_eq!((b.small_max, b.lemma.as_str(), b.lemma_max), (14, "9", 8));
        assert_eq!(smallness_bound(1, 7, 1).lemma, "9");
        assert_eq!(smallness_bound(0, 5, 1).small_max, 2);
    }

    #[test]
    fn line_is_minimal_small_blocking() {
        let g = pg(2, 3, 1);
        let b = Budget::default();
        let line = &g.subspaces(1, &b).unwrap()[0];
        let set = PointSet::of_subspace(&g, line);
        let r = certify(&g, &set, 1, None, &b).unwrap();
        assert!(r.is_blocking && r.is_minimal && r.is_small && r.residues_one_mod_p);
        let p0 = set.points()[0];
        assert_eq!(tangent_spaces(&g, &set, p0, 1, &b).unwrap().len(), 3);

        let mut more = set.points().to_vec();
        more.push((0..13).find(|i| !set.contains(*i)).unwrap());
        let r = certify(&g, &PointSet::new(more, 13).unwrap(), 1, None, &b).unwrap();
        assert!(r.is_blocking && !r.is_minimal);

        let fewer = PointSet::new(set.points()[1..].to_vec(), 13).unwrap();
        assert!(!is_k_blocking(&g, &fewer, 1, &b).unwrap());
    }

    #[test]
    fn spreads() {
        let b = Budget::default();
        let s = desarguesian_spread(&pg(1, 3, 2), &b).unwrap().summary();
        assert_eq!((s.elements, s.ambient_points, s.partition_verified), (10, 40, true));
        let s = desarguesian_spread(&pg(2, 2, 2), &b).unwrap().summary();
        assert_eq!((s.elements, s.ambient_points, s.partition_verified), (21, 63, true));
        let s = desarguesian_spread(&pg(2, 3, 1), &b).unwrap().summary();
        assert_eq!((s.elements, s.points_per_element), (13, 1));
    }
}
