//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use pgcode_core::blocking::{certify, desarguesian_spread, PointSet};
use pgcode_core::codes::{build_code, Alphabet, Codeword, FunctionalChecker};
use pgcode_core::geometry::{count_subspaces, theta, Geometry};
use pgcode_core::spectrum::theorems::{construct_weight_2qk, sample_codewords, verify, CheckDetail, Instance, Verdict};
use pgcode_core::spectrum::{collect_canonical, full_spectrum, min_weight};
use pgcode_core::{make_field, Budget};

const SEED: u64 = 20_240_601;

/// Wall-clock limits per criterion.
const LIMITS: [(u32, Duration); 11] = [
    (1, Duration::from_secs(1)),
    (2, Duration::from_secs(1)),
    (3, Duration::from_secs(1)),
    (4, Duration::from_secs(1)),
    (5, Duration::from_secs(1)),
    (6, Duration::from_secs(10)),
    (7, Duration::from_secs(10)),
    (8, Duration::from_secs(5)),
    (9, Duration::from_secs(60)),
    (10, Duration::from_secs(300)),
    (11, Duration::from_secs(300)),
];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pg(n: usize, p: u32, h: u32) -> Geometry {
    Geometry::new(n, make_field(p, h).unwrap(), &Budget::default()).unwrap()
}

/// Independent Gaussian binomial: product formula in u128.
fn gauss_oracle(m: u32, r: u32, q: u128) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num *= q.pow(m - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

fn c1_geometry_counts() -> Outcome {
    let b = Budget::default();
    let g23 = pg(2, 3, 1);
    let lines23 = g23.subspaces(1, &b).unwrap().len();
    let lines32 = pg(3, 2, 1).subspaces(1, &b).unwrap().len();
    ensure(theta(2, 3) == 13 && g23.num_points() == 13, "PG(2,3) point count")?;
    ensure(lines23 == 13, format!("PG(2,3) has {lines23} lines"))?;
    ensure(lines32 == 35 && gauss_oracle(4, 2, 2) == 35, format!("PG(3,2) has {lines32} lines"))?;
    ensure(count_subspaces(3, 1, 2) == Some(35), "Gaussian binomial")?;
    Ok(format!("PG(2,3): {} points, {lines23} lines; PG(3,2): {lines32} lines", g23.num_points()))
}

fn c2_fano() -> Outcome {
    let b = Budget::default();
    let code = build_code(&pg(2, 2, 1), 1, &b).unwrap();
    let dist = full_spectrum(&code, &b).unwrap();
    let want: BTreeMap<usize, u128> = [(0, 1), (3, 7), (4, 7), (7, 1)].into_iter().collect();
    // brute-force oracle: all 16 messages re-encoded
    let mut brute: BTreeMap<usize, u128> = BTreeMap::new();
    for m in 0..16u32 {
        let msg: Vec<u8> = (0..4).map(|i| ((m >> i) & 1) as u8).collect();
        *brute.entry(code.encode(&msg).unwrap().weight()).or_default() += 1;
    }
    ensure(code.dim() == 4, format!("dimension {}", code.dim()))?;
    ensure(dist.counts == want && brute == want, format!("distribution {:?}", dist.counts))?;
    Ok(format!("dim 4, distribution {:?}", dist.counts))
}

fn c3_plane_p3() -> Outcome {
    let b = Budget::default();
    let g = pg(2, 3, 1);
    let code = build_code(&g, 1, &b).unwrap();
    let dist = full_spectrum(&code, &b).unwrap();
    ensure(dist.total() == 2187, "total")?;
    ensure(dist.count(5) == 0, format!("{} words of weight 5", dist.count(5)))?;
    ensure(dist.min_weight() == Some(4), "minimum weight")?;
    let lines: Vec<Vec<usize>> = g.subspaces(1, &b).unwrap().iter().map(|s| g.subspace_points(s)).collect();
    let min_words = collect_canonical(&code, &b, |w| w == 4, 1000).unwrap();
    for c in &min_words {
        ensure(lines.contains(&c.support().to_vec()), "weight-4 word not supported on a line")?;
        ensure(c.entries().iter().all(|&x| x <= 1), "weight-4 word not a multiple of a line")?;
    }
    ensure(min_words.len() == 13 && dist.count(4) == 26, "weight-4 count")?;
    let diff = construct_weight_2qk(&g, 1).unwrap();
    ensure(dist.count(6) > 0 && diff.weight() == 6 && code.contains(&diff), "weight 6")?;
    Ok(format!("2187 words, A_5 = 0, A_4 = 26 (line multiples), A_6 = {}", dist.count(6)))
}

fn c4_dual_prime() -> Outcome {
    let mut inst = Instance::new(2, 3, 1, 1, Budget::default(), SEED).unwrap();
    let dual = inst.code(1).unwrap().dual();
    ensure(dual.dim() == 6, format!("dual dimension {}", dual.dim()))?;
    let dist = full_spectrum(&dual, inst.budget()).unwrap();
    ensure(dist.total() == 729 && dist.min_weight() == Some(6), "dual minimum weight")?;
    let r = verify("res-dual-prime", &mut inst).unwrap();
    ensure(r.verdict == Verdict::ProvedByExhaustion, format!("verdict {:?}", r.verdict))?;
    let words = r
        .checks
        .iter()
        .find_map(|c| match c.detail {
            CheckDetail::MinimumWords { words, structured, classes, .. } if structured == classes => Some(words),
            _ => None,
        })
        .ok_or("structure check missing")?;
    ensure(words as u128 == dist.count(6), "structure count vs spectrum")?;
    Ok(format!("dim 6, 729 words, min weight 6, all {words} minimum words are multiples of L1 - L2"))
}

fn c5_hull() -> Outcome {
    let b = Budget::default();
    let code = build_code(&pg(2, 3, 1), 1, &b).unwrap();
    let hull = code.hull();
    let dist = full_spectrum(&hull, &b).unwrap();
    ensure(dist.min_weight() == Some(6), format!("hull minimum {:?}", dist.min_weight()))?;
    let mw = min_weight(&hull, &b).unwrap();
    ensure(mw.exact && mw.weight == 6 && mw.witness.in_code, "min_weight")?;
    Ok(format!("hull dim {}, minimum weight 6 (exhaustive)", hull.dim()))
}

fn functional_samples(n: usize, p: u32, k: usize) -> Result<(usize, usize), String> {
    let b = Budget::default();
    let g = pg(n, p, 1);
    let code = build_code(&g, k, &b).unwrap();
    let checker = FunctionalChecker::new(&g, n - k, &b).unwrap();
    let bad = sample_codewords(&code, 1000, SEED)
        .iter()
        .filter(|c| !checker.evaluate(c).unwrap().constant)
        .count();
    Ok((1000, bad))
}

fn c6_constant_functional() -> Outcome {
    let (s1, v1) = functional_samples(2, 3, 1)?;
    let (s2, v2) = functional_samples(3, 2, 2)?;
    ensure(v1 == 0 && v2 == 0, format!("violations {v1} and {v2}"))?;
    Ok(format!("{s1} words of C_1(2,3), {s2} of C_2(3,2): 0 violations"))
}

fn c7_hull_identification() -> Outcome {
    let b = Budget::default();
    let g = pg(2, 3, 1);
    let code = build_code(&g, 1, &b).unwrap();
    let hull = code.hull();
    let checker = FunctionalChecker::new(&g, 1, &b).unwrap();
    let mut in_hull = 0;
    let mut bad = 0;
    for c in sample_codewords(&code, 1000, SEED) {
        let v = checker.evaluate(&c).unwrap();
        let vanish = v.constant && v.value == 0;
        in_hull += usize::from(hull.contains(&c));
        bad += usize::from(hull.contains(&c) != vanish);
    }
    ensure(bad == 0, format!("{bad} violations"))?;
    ensure(in_hull > 0 && in_hull < 1000, "sample never separates the two cases")?;
    Ok(format!("1000 words ({in_hull} in the hull): 0 violations"))
}

fn c8_spread() -> Outcome {
    let b = Budget::default();
    let spread = desarguesian_spread(&pg(1, 3, 2), &b).unwrap();
    let s = spread.summary();
    ensure(s.elements == 10 && s.ambient_points == 40 && s.partition_verified, "PG(3,3) spread")?;
    let mut pairs = 0;
    for a in 0..10 {
        for c in a + 1..10 {
            ensure(spread.span_is_partitioned(a, c).unwrap(), format!("span of {a},{c}"))?;
            pairs += 1;
        }
    }
    let u = spread.ambient().span(&spread.elements()[0], &spread.elements()[1]).unwrap();
    let line = spread.b_of(&u).unwrap();
    ensure(line.len() == 10, format!("B(span) has {} points", line.len()))?;

    let base = pg(2, 3, 1);
    let flat = desarguesian_spread(&base, &b).unwrap();
    for l in base.subspaces(1, &b).unwrap() {
        let img = flat.reduce_subspace(&l).unwrap();
        ensure(flat.b_of(&img).unwrap() == PointSet::of_subspace(&base, &l), "B(reduced line) != line")?;
    }
    Ok(format!("10 disjoint lines cover 40 points; {pairs} spans closed; B(span) = PG(1,9) (10 points); 13 lines recovered"))
}

fn c9_residues() -> Outcome {
    let b = Budget::default();
    let mut certified = 0;
    let g = pg(2, 3, 1);
    for l in g.subspaces(1, &b).unwrap() {
        let r = certify(&g, &PointSet::of_subspace(&g, &l), 1, None, &b).unwrap();
        ensure(r.is_blocking && r.is_minimal && r.is_small && r.residues_one_mod_p, "line of PG(2,3)")?;
        certified += 1;
    }
    let g = pg(3, 2, 1);
    for pl in g.subspaces(2, &b).unwrap() {
        let r = certify(&g, &PointSet::of_subspace(&g, &pl), 2, None, &b).unwrap();
        ensure(r.is_blocking && r.is_minimal && r.is_small && r.residues_one_mod_p, "plane of PG(3,2)")?;
        certified += 1;
    }
    // Baer subplane: the F_3-span of the three reduced unit vectors
    let base = pg(2, 3, 2);
    let spread = desarguesian_spread(&base, &b).unwrap();
    let f = base.field();
    let rows: Vec<Vec<u32>> = (0..3).map(|i| f.reduce_encoded(&(0..3).map(|j| u32::from(i == j)).collect::<Vec<_>>())).collect();
    let u = spread.ambient().subspace_from_rows(&rows).unwrap().unwrap();
    let (set, r) = pgcode_core::blocking::linear_blocking_set(&spread, &u, 1, None, &b).unwrap();
    let lines = r.residue_histograms.iter().find(|h| h.dim == 1).ok_or("no line histogram")?;
    ensure(lines.subspaces == 91, "line count")?;
    ensure(r.is_blocking && r.is_minimal && r.is_small && r.residues_one_mod_p, format!("B(U) report {r:?}"))?;
    ensure(set.len() == 13 && base.subspaces(1, &b).unwrap().iter().all(|l| set.meet_count(&base.subspace_points(l)) < 10), "B(U) contains a line")?;
    certified += 1;
    Ok(format!("{certified} small minimal blocking sets; B(U) in PG(2,9) has {} points, residues {:?} on 91 lines", set.len(), lines.support()))
}

fn plane_p7_report() -> Result<String, String> {
    let budget = Budget { steps: 10_000_000, ..Budget::default() };
    let mut inst = Instance::new(2, 7, 1, 1, budget, SEED).unwrap();
    let r = verify("cor-plane", &mut inst).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

fn c10_budgeted_plane_p7() -> Outcome {
    let budget = Budget { steps: 10_000_000, ..Budget::default() };
    let mut inst = Instance::new(2, 7, 1, 1, budget, SEED).unwrap();
    ensure(inst.code(1).unwrap().dim() == 29, "dimension of C_1(2,7)")?;
    let r = verify("cor-plane", &mut inst).unwrap();
    ensure(r.verdict == Verdict::SearchedNoCounterexample, format!("verdict {:?}", r.verdict))?;
    ensure(r.summary == "searched, no counterexample", "summary text")?;
    let mut steps = 0;
    let mut endpoints = Vec::new();
    for c in &r.checks {
        ensure(c.passed, format!("check failed: {}", c.name))?;
        match &c.detail {
            CheckDetail::Gap { report, .. } => {
                ensure(report.interval.to_string() == "]8,14[", "interval")?;
                steps = report.steps;
            }
            CheckDetail::Construction { witness, .. } => endpoints.push(witness.weight),
            _ => {}
        }
    }
    ensure(endpoints == vec![8, 14], format!("endpoint witnesses {endpoints:?}"))?;
    let alpha = Alphabet::new(7).unwrap();
    let g = inst.geometry();
    let line = Codeword::incidence(7, g.num_points(), &g.subspace_points(&g.subspaces(1, inst.budget()).unwrap()[0]));
    ensure(pgcode_core::codes::scalar_product(&alpha, &line, &line).unwrap() == 1, "(L,L) = 1")?;
    Ok(format!("]8,14[ searched in {steps} steps: no codeword; endpoints 8 and 14 verified; verdict \"{}\"", r.summary))
}

fn c11_determinism() -> Outcome {
    let a = plane_p7_report()?;
    let b = plane_p7_report()?;
    ensure(a == b, "reports differ")?;
    Ok(format!("two runs, {} identical bytes", a.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "geometry counts", c1_geometry_counts),
        (2, "Fano baseline", c2_fano),
        (3, "plane code over F_3", c3_plane_p3),
        (4, "dual minimum words, prime field", c4_dual_prime),
        (5, "hull minimum weight", c5_hull),
        (6, "constant functional", c6_constant_functional),
        (7, "hull identification", c7_hull_identification),
        (8, "spread and field reduction", c8_spread),
        (9, "blocking-set residues", c9_residues),
        (10, "budgeted gap search, p = 7", c10_budgeted_plane_p7),
        (11, "determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let limit = LIMITS.iter().find(|(i, _)| *i == id).unwrap().1;
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let res = match res {
            Ok(msg) if dt > limit => Err(format!("{msg}; took {dt:.2?}, limit {limit:?}")),
            other => other,
        };
        match res {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{dt:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg} [{dt:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
