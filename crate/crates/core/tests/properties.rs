use std::sync::{Arc, OnceLock};

use pgcode_core::blocking::{certify, desarguesian_spread, residue_cross_check, seeded_subspace, PointSet, Spread};
use pgcode_core::codes::{build_code, Alphabet, Code, CodeKind, CodeParams, Codeword, Incidence};
use pgcode_core::geometry::theta;
use pgcode_core::spectrum::theorems::{verify, Instance, Verdict};
use pgcode_core::{make_field, Budget, ExtensionField, Geometry};
use proptest::prelude::*;

const FIELDS: &[(u32, u32)] = &[(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4), (5, 2)];

fn field_and_elements() -> impl Strategy<Value = (ExtensionField, u32, u32, u32)> {
    prop::sample::select(FIELDS).prop_flat_map(|(p, h)| {
        let f = make_field(p, h).unwrap();
        let q = f.order();
        (Just(f), 0..q, 0..q, 0..q)
    })
}

fn geom(n: usize, p: u32, h: u32) -> Geometry {
    Geometry::new(n, make_field(p, h).unwrap(), &Budget::default()).unwrap()
}

fn pg2_9_spread() -> &'static Spread {
    static S: OnceLock<Spread> = OnceLock::new();
    S.get_or_init(|| desarguesian_spread(&geom(2, 3, 2), &Budget::default()).unwrap())
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn field_axioms((f, a, b, c) in field_and_elements()) {
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert!(f.inv(a).is_none());
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn reduction_is_fp_linear((f, a, b, _) in field_and_elements(), (c, d) in (0u32..7, 0u32..7)) {
        let p = f.p();
        let (c, d) = (c % p, d % p);
        let lhs = f.reduce_encoded(&[f.add(f.mul(c, a), f.mul(d, b))]);
        let (ra, rb) = (f.reduce_encoded(&[a]), f.reduce_encoded(&[b]));
        let rhs: Vec<u32> = ra.iter().zip(&rb).map(|(x, y)| (c * x + d * y) % p).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rref_form_depends_only_on_the_span(
        (p, h) in prop::sample::select(&[(2u32, 1u32), (3, 1), (2, 2), (5, 1)][..]),
        seed in any::<u64>(),
        d in 0usize..3,
        mix in prop::collection::vec(any::<u32>(), 9),
    ) {
        let g = geom(3, p, h);
        let s = seeded_subspace(&g, d, seed).unwrap();
        let f = g.field();
        let q = f.order();
        let rows = s.basis_rows();
        // unit upper-triangular mixing, then scaling: an invertible change
        // of basis
        let mut mixed = rows.clone();
        for (i, r) in mixed.iter_mut().enumerate() {
            for (j, o) in rows.iter().enumerate() {
                if j > i {
                    let m = mix[(3 * i + j) % mix.len()] % q;
                    for (x, y) in r.iter_mut().zip(o) {
                        *x = f.add(*x, f.mul(m, *y));
                    }
                }
            }
            let scale = 1 + mix[i] % (q - 1);
            for x in r.iter_mut() {
                *x = f.mul(scale, *x);
            }
        }
        mixed.reverse();
        prop_assert_eq!(g.subspace_from_rows(&mixed).unwrap().unwrap(), s);
    }

    #[test]
    fn duality_counts(seed in any::<u64>(), rows in 1usize..7, len in 6usize..14, p in prop::sample::select(&[2u32, 3, 5, 7][..])) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let alpha = Alphabet::new(p).unwrap();
        let m: Vec<Vec<u8>> = (0..rows).map(|_| (0..len).map(|_| rng.gen_range(0..p as u8)).collect()).collect();
        let params = CodeParams { n: 0, k: 0, p, h: 1 };
        let c = Code::from_rows(params, CodeKind::Custom, Arc::clone(&alpha), len, m);
        let dual = c.dual();
        prop_assert_eq!(c.dim() + dual.dim(), len);
        prop_assert_eq!(dual.dual(), c.clone());
        for a in c.generator() {
            for b in dual.generator() {
                prop_assert_eq!(alpha.dot(a, b), 0);
            }
        }
        let hull = c.hull();
        prop_assert!(hull.dim() <= c.dim().min(dual.dim()));
        for r in hull.generator() {
            let w = Codeword::new(p as u8, r.clone()).unwrap();
            prop_assert!(c.contains(&w) && dual.contains(&w));
        }
    }
}

proptest! {
    #![proptest_config(cases(12))]

    /// Each point lies on the same number of k-spaces, and summing block
    /// sizes counts the incident pairs from both sides.
    #[test]
    fn incidence_double_counting(
        (n, p, h) in prop::sample::select(&[(2usize, 2u32, 1u32), (2, 3, 1), (3, 2, 1), (2, 2, 2), (3, 3, 1), (4, 2, 1)][..]),
        k in 0usize..4,
    ) {
        let k = k % n;
        let g = geom(n, p, h);
        let inc = Incidence::new(&g, k, &Budget::default()).unwrap();
        let q = g.q();
        let mut deg = vec![0u64; g.num_points()];
        for b in inc.blocks() {
            prop_assert_eq!(b.len() as u64, theta(k as i64, q));
            for &i in b {
                deg[i] += 1;
            }
        }
        // k-spaces through a point = (k-1)-spaces of the quotient PG(n-1,q)
        let through = g.count_subspaces(0).unwrap();
        let r = if k == 0 { 1 } else { pgcode_core::geometry::count_subspaces(n - 1, k - 1, q).unwrap() as u64 };
        prop_assert!(deg.iter().all(|&d| d == r));
        prop_assert_eq!(inc.spaces().len() as u64 * theta(k as i64, q), through as u64 * r);
    }

    /// S1 - S2 for (n-k)-spaces meeting in an (n-k-1)-space is orthogonal
    /// to every k-space.
    #[test]
    fn difference_of_meeting_spaces_is_in_dual(
        (n, p, k) in prop::sample::select(&[(2usize, 3u32, 1usize), (2, 5, 1), (3, 2, 1), (3, 2, 2), (3, 3, 2), (3, 3, 1)][..]),
        seed in any::<u64>(),
    ) {
        let b = Budget::default();
        let g = geom(n, p, 1);
        let d = n - k;
        let s1 = seeded_subspace(&g, d, seed).unwrap();
        let s2 = seeded_subspace(&g, d, seed.wrapping_add(1)).unwrap();
        let meets = g.meet(&s1, &s2).unwrap().map(|m| m.dim() + 1).unwrap_or(0) == d;
        prop_assume!(meets);
        let mut e = vec![0u8; g.num_points()];
        for i in g.subspace_points(&s1) {
            e[i] = 1;
        }
        for i in g.subspace_points(&s2) {
            e[i] = (e[i] + p as u8 - 1) % p as u8;
        }
        let w = Codeword::new(p as u8, e).unwrap();
        prop_assert_eq!(w.weight() as u64, 2 * (p as u64).pow(d as u32));
        let code = build_code(&g, k, &b).unwrap();
        prop_assert!(code.dual().contains(&w));
    }

    /// Spans of two spread elements are unions of elements, and B undoes
    /// field reduction.
    #[test]
    fn spread_invariants(a in 0usize..91, b in 0usize..91, seed in any::<u64>(), d in 0usize..3) {
        let s = pg2_9_spread();
        prop_assume!(a != b);
        prop_assert!(s.span_is_partitioned(a, b).unwrap());
        let base = s.base();
        let t = seeded_subspace(base, d, seed).unwrap();
        let lifted = s.reduce_subspace(&t).unwrap();
        prop_assert_eq!(lifted.dim(), 2 * (d + 1) - 1);
        prop_assert_eq!(s.b_of(&lifted).unwrap(), PointSet::of_subspace(base, &t));
    }

    #[test]
    fn lift_cardinality(pts in prop::collection::btree_set(0usize..91, 0..20)) {
        let s = pg2_9_spread();
        let set = PointSet::new(pts.into_iter().collect(), 91).unwrap();
        let lift = s.lift_point_set(&set).unwrap();
        prop_assert_eq!(lift.len(), set.len() * 4);
        for &x in lift.points() {
            prop_assert!(set.contains(s.assign(x)));
        }
    }

    /// For minimal B(U), the reduced tangent line at P meets U only inside
    /// the spread element of P.
    #[test]
    fn tangent_lines_lift_into_one_element(seed in any::<u64>()) {
        let s = pg2_9_spread();
        let b = Budget::default();
        let u = seeded_subspace(s.ambient(), 2, seed).unwrap();
        let set = s.b_of(&u).unwrap();
        let report = certify(s.base(), &set, 1, Some(1..=1), &b).unwrap();
        prop_assert!(report.is_blocking);
        prop_assert!(report.residues_one_mod_p);
        for (&pt, tangent) in &report.tangent_witnesses {
            let lifted = s.reduce_subspace(tangent).unwrap();
            let meet = s.ambient().meet(&lifted, &u).unwrap().expect("tangent meets U");
            for x in s.ambient().subspace_points(&meet) {
                prop_assert_eq!(s.assign(x), pt);
            }
        }
    }

    /// A line meets a small minimal 1-blocking set of PG(2,q) in 1 mod p
    /// points, checked through the residue cross-check.
    #[test]
    fn residue_of_line_words(seed in any::<u64>(), lambda in 1u8..3, baer in any::<bool>()) {
        let b = Budget::default();
        let (g, blocking) = if baer {
            let s = pg2_9_spread();
            let set = s.b_of(&seeded_subspace(s.ambient(), 2, seed).unwrap()).unwrap();
            let r = certify(s.base(), &set, 1, Some(0..=0), &b).unwrap();
            prop_assume!(r.is_minimal && r.is_small);
            (s.base().clone(), set)
        } else {
            let g = geom(2, 3, 1);
            let l = seeded_subspace(&g, 1, seed).unwrap();
            let set = PointSet::of_subspace(&g, &l);
            (g, set)
        };
        let code = build_code(&g, 1, &b).unwrap();
        let line = seeded_subspace(&g, 1, seed ^ 0x5555).unwrap();
        let alpha = Alphabet::new(g.field().p()).unwrap();
        let w = Codeword::incidence(alpha.p(), g.num_points(), &g.subspace_points(&line)).scale(&alpha, lambda);
        let check = residue_cross_check(&g, &code, &w, &blocking, &b).unwrap();
        prop_assert_eq!(check.residue, 1);
    }

    /// Exact statements on small instances never report a counterexample.
    #[test]
    fn exact_statements_hold(
        (n, p, h, k) in prop::sample::select(&[(2usize, 3u32, 1u32, 1usize), (3, 2, 1, 2), (3, 2, 1, 1), (2, 2, 2, 1), (2, 5, 1, 1)][..]),
        id in prop::sample::select(&["lem-constant", "cor-dual-identify"][..]),
        seed in any::<u64>(),
    ) {
        let mut inst = Instance::new(n, p, h, k, Budget::default(), seed).unwrap();
        let r = verify(id, &mut inst).unwrap();
        prop_assert_ne!(r.verdict, Verdict::Counterexample);
        if r.unmet.is_empty() {
            prop_assert!(r.checks.iter().all(|c| c.passed));
        } else {
            prop_assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        }
    }
}
