//! Randomised invariants, each checked against a brute-force oracle.

use std::collections::HashSet;

use cornerforge::avoiders::{
    build_corner_avoider, f_quad, lift_avoider, norm_below_exact, phi_projection, AvoiderConfig, DEFAULT_C,
};
use cornerforge::behrend::{qc_coefficients, verify_relation_free};
use cornerforge::contfrac::{approximants, build_alpha_hard, quotients_from_pair, AlphaSequence};
use cornerforge::diamond::{diamond_free_from_ap_free, verify_diamond_free, EdgeKind, TripartiteGraph};
use cornerforge::hypergraph::{
    edge_density, hom_count, prune_sparse_pairs, prune_sparse_pairs_with, triforce_weighted, Hypergraph, Motif,
    StepKernel,
};
use cornerforge::mandache::{counter_u64, mandache_report, sample_mandache, unit_cell, ROLE_X, ROLE_Y, ROLE_Z};
use cornerforge::patterns::{corner_count_group, count_pattern, grid_spectrum, GridSet, Group, GroupSet, Pattern};
use cornerforge::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

// patterns ------------------------------------------------------------------

fn grid_strategy() -> impl Strategy<Value = (usize, usize, Vec<bool>)> {
    (1usize..=3, 2usize..=7).prop_flat_map(|(dim, side)| {
        (Just(dim), Just(side), proptest::collection::vec(any::<bool>(), side.pow(dim as u32)))
    })
}

fn grid_from_bits(dim: usize, side: usize, bits: &[bool]) -> GridSet {
    GridSet::from_predicate(dim, side, |x| {
        let k = x.iter().rev().fold(0usize, |acc, &c| acc * side + (c - 1) as usize);
        bits[k]
    })
    .unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn reflection_symmetry((dim, side, bits) in grid_strategy(), axis_seed in 0usize..3, d in 1i64..7) {
        let a = grid_from_bits(dim, side, &bits);
        let axis = axis_seed % dim;
        let t = match dim {
            1 => Pattern::from_offsets(&[0, 1, 3]).unwrap(),
            _ => Pattern::corner(dim),
        };
        for d in [d, -d] {
            prop_assert_eq!(count_pattern(&a, &t, d).unwrap(), count_pattern(&a.reflect(axis), &t.reflect(axis), d).unwrap());
        }
    }

    #[test]
    fn spectrum_total_matches_anchor_count((dim, side, bits) in grid_strategy()) {
        let a = grid_from_bits(dim, side, &bits);
        let t = Pattern::progression(2);
        let t = if dim == 1 { t } else { Pattern::corner(dim) };
        let spec = grid_spectrum(&a, &t).unwrap();
        // every pair (anchor, d) with the scaled pattern inside A
        let members: Vec<Vec<i64>> = a.points().collect();
        let mut total = 0u128;
        for x in &members {
            for d in (1 - side as i64..side as i64).filter(|&d| d != 0) {
                total += t.points().iter().all(|p| {
                    let y: Vec<i64> = x.iter().zip(p).map(|(a, b)| a + d * b).collect();
                    a.contains(&y)
                }) as u128;
            }
        }
        // the origin is a pattern point, so the anchor itself lies in A
        prop_assert_eq!(spec.total(), total);
    }

    #[test]
    fn group_corners_translation_invariant(seed in any::<u64>(), kind in 0usize..3, u in 0usize..81, v in 0usize..81) {
        let group = [Group::cyclic(12), Group::elementary(3, 2), Group::elementary(2, 3)].into_iter().nth(kind).unwrap().unwrap();
        let n = group.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(0.6)).collect()).collect();
        let a = GroupSet::from_rows(group, |x, y| rows[x][y]);
        let b = a.translate(u % n, v % n);
        for d in 1..n {
            prop_assert_eq!(corner_count_group(&a, d).unwrap(), corner_count_group(&b, d).unwrap());
        }
    }
}

// hypergraph ----------------------------------------------------------------

fn triples(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn kernel_triforce_at_least_mean_to_the_fourth(g in 1usize..=3, raw in proptest::collection::vec(0i64..=10, 27)) {
        let vals: Vec<Rational> = raw[..g * g * g].iter().map(|&v| q(v, 10)).collect();
        let w = StepKernel::new(g, vals).unwrap();
        prop_assert!(triforce_weighted(&w) >= w.mean().pow(4));
    }

    #[test]
    fn edge_density_is_single_edge_hom_density(n in 3usize..=8, keep in proptest::collection::vec(any::<bool>(), 56)) {
        let edges: Vec<[u32; 3]> = triples(n as u32).into_iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e).collect();
        let h = Hypergraph::from_edges(3, n, &edges).unwrap();
        let homs = hom_count(&Motif::single_edge(3), &h).unwrap();
        let expect = Rational::new(BigInt::from(homs), BigInt::from(n).pow(3));
        prop_assert_eq!(edge_density(&h).unwrap(), expect);
    }

    #[test]
    fn pruning_fixpoint_is_order_independent(
        n in 4usize..=10,
        keep in proptest::collection::vec(any::<bool>(), 120),
        delta_num in 1i64..10,
        seed in any::<u64>(),
    ) {
        let edges: Vec<[u32; 3]> = triples(n as u32).into_iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e).collect();
        let h = Hypergraph::from_edges(3, n, &edges).unwrap();
        let delta = q(delta_num, 10);
        let canonical = prune_sparse_pairs(&h, &delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled = prune_sparse_pairs_with(&h, &delta, |m| rng.gen_range(0..m)).unwrap();
        prop_assert_eq!(&canonical.kept, &shuffled.kept);
        prop_assert_eq!(canonical.deleted, shuffled.deleted);
    }
}

// behrend -------------------------------------------------------------------

fn naive_relation(set: &[i64], c: &[i64]) -> bool {
    let k = c.len();
    let mut idx = vec![0usize; k];
    loop {
        let y: Vec<i64> = idx.iter().map(|&i| set[i]).collect();
        let sum: i64 = y.iter().zip(c).map(|(a, b)| a * b).sum();
        if sum == 0 && y.iter().any(|&v| v != y[0]) {
            return true;
        }
        let mut i = 0;
        while i < k && idx[i] == set.len() - 1 {
            idx[i] = 0;
            i += 1;
        }
        if i == k {
            return false;
        }
        idx[i] += 1;
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn relation_verifier_matches_naive(
        set in proptest::collection::btree_set(0i64..40, 1..12),
        head in proptest::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 2..4),
    ) {
        let last = -head.iter().sum::<i64>();
        prop_assume!(last != 0);
        let mut c = head.clone();
        c.push(last);
        let set: Vec<i64> = set.into_iter().collect();
        let found = verify_relation_free(&set, &c).unwrap();
        prop_assert_eq!(found.is_some(), naive_relation(&set, &c));
        if let Some(y) = found {
            prop_assert_eq!(y.iter().zip(&c).map(|(a, b)| a * b).sum::<i64>(), 0);
            prop_assert!(y.iter().all(|v| set.contains(v)));
            prop_assert!(y.iter().any(|&v| v != y[0]));
        }
    }

    #[test]
    fn qc_rows_annihilate_quadratics(a in proptest::collection::btree_set(-30i64..30, 5)) {
        let a: Vec<i64> = a.into_iter().collect();
        let sys = qc_coefficients(&a).unwrap();
        for (i, row) in sys.gamma.iter().enumerate() {
            prop_assert!(row.iter().all(|&g| g != 0));
            for p in 0..3u32 {
                let basis: i128 = (0..4).map(|j| row[j] as i128 * (a[i + j] as i128).pow(p)).sum();
                prop_assert_eq!(basis, 0);
            }
        }
    }
}

// diamond -------------------------------------------------------------------

fn naive_edge_triangles(g: &TripartiteGraph, kind: EdgeKind, u: u32, v: u32) -> usize {
    let n = g.part_size();
    let (xy, yz, xz) = (g.edges(EdgeKind::XY), g.edges(EdgeKind::YZ), g.edges(EdgeKind::XZ));
    (0..n)
        .filter(|&w| match kind {
            EdgeKind::XY => yz.contains(&(v, w)) && xz.contains(&(u, w)),
            EdgeKind::YZ => xy.contains(&(w, u)) && xz.contains(&(w, v)),
            EdgeKind::XZ => xy.contains(&(u, w)) && yz.contains(&(w, v)),
        })
        .count()
}

fn ap_free(n: u32, order: &[u64]) -> Vec<u64> {
    let mut a: Vec<u64> = Vec::new();
    for &c in order {
        let c = c % n as u64;
        if a.contains(&c) {
            continue;
        }
        a.push(c);
        if cornerforge::behrend::cyclic_3ap_witness(&a, n as u64).is_some() {
            a.pop();
        }
    }
    a
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn diamond_free_edges_are_three_per_triangle(n in 3u32..40, order in proptest::collection::vec(any::<u64>(), 1..20)) {
        let a = ap_free(n, &order);
        let g = diamond_free_from_ap_free(&a, n).unwrap();
        prop_assert!(verify_diamond_free(&g).is_none());
        prop_assert_eq!(g.edge_count(), 3 * g.triangles().len());
    }

    #[test]
    fn extra_edges_break_diamond_freeness(
        n in 3u32..20,
        order in proptest::collection::vec(any::<u64>(), 1..10),
        kind in 0usize..3,
        u in any::<u32>(),
        v in any::<u32>(),
    ) {
        let a = ap_free(n, &order);
        let mut g = diamond_free_from_ap_free(&a, n).unwrap();
        let kind = [EdgeKind::XY, EdgeKind::YZ, EdgeKind::XZ][kind];
        prop_assume!(g.add_edge(kind, u % n, v % n).unwrap());
        let bad = [EdgeKind::XY, EdgeKind::YZ, EdgeKind::XZ].into_iter().any(|k| {
            g.edges(k).iter().any(|&(x, y)| naive_edge_triangles(&g, k, x, y) != 1)
        });
        let w = verify_diamond_free(&g);
        prop_assert_eq!(w.is_some(), bad);
        if let Some(w) = w {
            prop_assert_eq!(w.triangles as usize, naive_edge_triangles(&g, w.kind, w.u, w.v));
            prop_assert!(w.triangles != 1);
        }
    }
}

// contfrac ------------------------------------------------------------------

fn check_alpha_invariants(seq: &AlphaSequence, depth: usize) -> Result<(), TestCaseError> {
    let convs: Vec<(BigInt, BigInt)> = seq.convergents().take(depth).collect();
    let (a, t) = (seq.a(), seq.t());
    for n in 1..depth - 1 {
        prop_assert!(convs[n].1 < convs[n + 1].1 || n == 1 && convs[n].1 == convs[n + 1].1);
    }
    for (n, (p, qn)) in convs.iter().enumerate() {
        prop_assert!(p.gcd(qn).is_one(), "gcd at {}", n);
        if n >= t + 2 {
            prop_assert_eq!(qn, &(a * &convs[n - 1].1 + &convs[n - 2].1));
        }
        if n >= t {
            let r = qn.mod_floor(a);
            prop_assert!(r == seq.x().mod_floor(a) || r == seq.y().mod_floor(a));
        }
        if n + 2 < depth {
            // α sits strictly between consecutive convergents
            let e = seq.enclosure(n + 1);
            let here = Rational::new(p.clone(), qn.clone());
            let gap = (&here - &e.lo).abs().max((&here - &e.hi).abs());
            let bound = Rational::new(BigInt::one(), qn * &convs[n + 1].1);
            prop_assert!(gap <= bound);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn alpha_sequence_invariants(m in 2u64..=12, r_num in 1i64..=8, r_den in 1i64..=3) {
        let seq = build_alpha_hard(m, q(r_num, r_den)).unwrap();
        check_alpha_invariants(&seq, seq.t() + 8)?;
    }

    #[test]
    fn quotients_from_pair_round_trip(x in 1u64..1_000_000, y in 2u64..1_000_000) {
        prop_assume!(x < y && x.gcd(&y) == 1);
        let c = quotients_from_pair(&x.into(), &y.into()).unwrap();
        let convs = approximants(&c).unwrap();
        let n = convs.len();
        prop_assert_eq!(&convs[n - 2].1, &BigInt::from(x));
        prop_assert_eq!(&convs[n - 1].1, &BigInt::from(y));
        // the pair determines the quotients: a second expansion agrees
        let again = quotients_from_pair(&x.into(), &y.into()).unwrap();
        prop_assert_eq!(c, again);
    }

    #[test]
    fn f_identity(x in -1_000_000_000i128..1_000_000_000, y in -1_000_000_000i128..1_000_000_000,
                  z in -1_000_000_000i128..1_000_000_000, d in -1_000_000_000i128..1_000_000_000) {
        prop_assert_eq!(f_quad(x + d, y, z) + f_quad(x, y + d, z) + f_quad(x, y, z + d), 3 * f_quad(x, y, z));
    }
}

// avoiders ------------------------------------------------------------------

#[test]
fn fast_membership_agrees_with_exact() {
    let cfg = AvoiderConfig { delta: None, c: DEFAULT_C, l: Some(8), n: 200 };
    let av = build_corner_avoider(&cfg).unwrap();
    let oracle = av.oracle();
    let grid = oracle.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let v: i128 = rng.gen_range(-(1i128 << 40)..(1i128 << 40));
        let exact = oracle.cell_exact(&BigInt::from(v));
        assert_eq!(oracle.cell(v), exact, "v = {v}");
        if let Some(fast) = oracle.cell_fast(v) {
            assert_eq!(fast, exact, "v = {v}");
        }
        // cell < m or cell ≥ G - m  ⇔  ‖αv‖ < m/G
        let m = rng.gen_range(1..grid / 2);
        let tau = Rational::new(BigInt::from(m), BigInt::from(grid));
        assert_eq!(oracle.norm_below(v, m), norm_below_exact(oracle.alpha(), &BigInt::from(v), &tau), "v = {v}");
    }
}

#[test]
fn phi_lift_occurrences_bounded_by_fibres() {
    let t = Pattern::corner(4);
    let phi = phi_projection(&t).unwrap();
    let total: i64 = phi.weights.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..8 {
        let side = (3 * total) as usize;
        let keep: Vec<bool> = (0..side).map(|_| rng.gen_bool(0.7)).collect();
        let base = GridSet::from_predicate(1, side, |x| keep[(x[0] - 1) as usize]).unwrap();
        let lifted = lift_avoider(&t, &base).unwrap();
        let n = lifted.side() as i64;
        let mut fibres = std::collections::HashMap::new();
        let mut x = vec![1i64; 4];
        loop {
            *fibres.entry(phi.apply(&x)).or_insert(0u64) += 1;
            let mut i = 0;
            while i < 4 && x[i] == n {
                x[i] = 1;
                i += 1;
            }
            if i == 4 {
                break;
            }
            x[i] += 1;
        }
        let max_fibre = *fibres.values().max().unwrap();
        let images = Pattern::from_offsets(&phi.images).unwrap();
        for d in (1 - n..n).filter(|&d| d != 0) {
            let up = count_pattern(&lifted, &t, d).unwrap();
            let down = count_pattern(&base, &images, d).unwrap();
            assert!(up <= max_fibre * down, "d = {d}: {up} > {max_fibre}·{down}");
        }
    }
}

// mandache ------------------------------------------------------------------

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), raw in proptest::collection::vec(0i64..=4, 8)) {
        let w = StepKernel::new(2, raw.iter().map(|&v| q(v, 4)).collect()).unwrap();
        let g = Group::elementary(3, 2).unwrap();
        prop_assert_eq!(sample_mandache(&w, g, seed), sample_mandache(&w, g, seed));
    }
}

#[test]
fn inclusion_marginals_match_cells() {
    let w = StepKernel::new(2, [1, 3, 0, 4, 2, 1, 3, 2].iter().map(|&v| q(v, 4)).collect()).unwrap();
    let group = Group::elementary(3, 4).unwrap();
    let n = group.order();
    for seed in 0..4u64 {
        let a = sample_mandache(&w, group, seed);
        let cell = |role, i: usize| unit_cell(counter_u64(seed, role, i as u64), 2);
        let mut hits = [0u64; 8];
        let mut tries = [0u64; 8];
        for x in 0..n {
            for y in 0..n {
                let z = group.neg(group.add(x, y));
                let c = cell(ROLE_X, x) + 2 * (cell(ROLE_Y, y) + 2 * cell(ROLE_Z, z));
                tries[c] += 1;
                hits[c] += a.contains(x, y) as u64;
            }
        }
        for c in 0..8 {
            let p = w.values()[c].to_f64().unwrap();
            if tries[c] == 0 {
                continue;
            }
            let emp = hits[c] as f64 / tries[c] as f64;
            if p == 0.0 || p == 1.0 {
                assert_eq!(emp, p, "seed {seed} cell {c}");
                continue;
            }
            let se = (p * (1.0 - p) / tries[c] as f64).sqrt();
            assert!((emp - p).abs() < 3.0 * se, "seed {seed} cell {c}: {emp} vs {p}");
        }
    }
}

#[test]
fn expectation_law_on_five_kernels() {
    let group = Group::elementary(3, 4).unwrap();
    let seeds: Vec<u64> = (1000..1200).collect();
    let kernels = [
        StepKernel::constant(1, q(1, 2)).unwrap(),
        StepKernel::constant(1, q(1, 3)).unwrap(),
        StepKernel::indicator(2, (1, 0, 1)).unwrap(),
        StepKernel::new(2, [4, 0, 1, 3, 2, 2, 0, 4].iter().map(|&v| q(v, 4)).collect()).unwrap(),
        StepKernel::new(3, (0..27).map(|i| q((i * 7) % 10, 9)).collect()).unwrap(),
    ];
    for w in &kernels {
        let rep = mandache_report(w, group, &seeds).unwrap();
        let dev = rep.deviation_in_std_errors().unwrap();
        assert!(dev < 4.0, "kernel {}: {dev} standard errors", w.hash());
    }
}

#[test]
fn behrend_sum_free_all_small_l() {
    for l in 1..=4096u64 {
        let s = cornerforge::behrend::behrend_sum_free(l).unwrap();
        let set: HashSet<i64> = s.elements.iter().map(|&v| v as i64).collect();
        assert!(set.iter().all(|&v| (v as u64) < l));
        let v: Vec<i64> = set.into_iter().collect();
        assert!(verify_relation_free(&v, &[1, 1, 1, -3]).unwrap().is_none(), "L = {l}");
    }
}

