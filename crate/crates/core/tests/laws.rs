//! Cross-module laws: restriction and quotient connections on finite
//! topologies, exhaustive subgroup-lattice properties, window-space axiom
//! suites, and property-based oracle comparisons.

mod common;

use common::*;
use entrospace::alg::{
    adjoint_space, backward_weiss_map, enumerate_subgroups, weiss_map, weiss_space, Endomorphism,
    FinAbGroup,
};
use entrospace::construct::{
    classify_connection, compare_entropy, f_product_map, f_product_space, log_sum_exp, pair_map,
    product_map, Connection, ConnectionClass, VerdictRelation,
};
use entrospace::fixtures;
use entrospace::symbolic::{
    canonical_windows, sft_space, shift_preimage_map, window, Sft, Sidedness, WindowNorm,
};
use entrospace::topo::{
    cover_n, is_extension_closed, preimage_map, restriction_map, topo_entropy_space,
    FiniteTopology, PointMap, TopoNorm,
};
use entrospace::{
    check_cover_axioms, check_norm_axioms, classify_map, entropy_relative, CoverMap,
    EntropyParams, ExtReal, MapClass, Payload,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn params(horizon: u32) -> EntropyParams {
    EntropyParams::with_horizon(horizon)
}

// ---------------------------------------------------------------------
// Topological laws
// ---------------------------------------------------------------------

/// The four-point space split into two open halves.
fn split_topology() -> (FiniteTopology, u64, u64) {
    // Points {0,1} ∪ {2,3}; opens are unions of {0}, {0,1}, {2}, {2,3}.
    let gens: [u64; 4] = [0b0001, 0b0011, 0b0100, 0b1100];
    let mut opens = vec![0u64];
    for bits in 1u64..16 {
        let u = (0..4).filter(|&i| bits & (1 << i) != 0).fold(0u64, |a, i| a | gens[i]);
        opens.push(u);
    }
    opens.sort_unstable();
    opens.dedup();
    (FiniteTopology::new(4, opens).unwrap(), 0b0011, 0b1100)
}

#[test]
fn restriction_connections_are_cofinal_lower_connections() {
    let (t, x1, x2) = split_topology();
    let sp = topo_entropy_space(&t, TopoNorm::H, 100_000);
    // The point map fixing each half: swap inside the first half.
    let pm = PointMap::new(&t, vec![0, 0, 2, 2]).unwrap();
    assert!(pm.continuous);
    let lam = preimage_map(&sp, &pm).unwrap();

    for (subset, name) in [(x1, "left"), (x2, "right")] {
        let (sub, order) = t.subspace(subset).unwrap();
        assert!(is_extension_closed(&t, &sub, subset, &order), "{name}");
        let sub_sp = topo_entropy_space(&sub, TopoNorm::H, 100_000);
        let mu = restriction_map(&sp, &sub_sp, subset, &order);
        // Restricted dynamics: the point map restricted to the half.
        let sub_table: Vec<usize> = order
            .iter()
            .map(|&p| order.iter().position(|&q| q == pm.table[p]).unwrap())
            .collect();
        let sub_pm = PointMap::new(&sub, sub_table).unwrap();
        let sub_lam = preimage_map(&sub_sp, &sub_pm).unwrap();

        let conn =
            Connection::new(mu, lam.clone(), sub_lam, ConnectionClass::Lower).unwrap();
        let sample = sp.enumeration().unwrap();
        let report = classify_connection(&conn, &sample, TOL).unwrap();
        assert!(report.is_lower_connection(), "{name}");
        assert!(report.cofinal.is_certified(), "{name}");
        let verdict = compare_entropy(&conn, &sample, TOL).unwrap();
        assert!(
            matches!(
                verdict.relation,
                VerdictRelation::SourceGeqTarget | VerdictRelation::Equal
            ),
            "{name}: {}",
            verdict.relation
        );
    }
}

#[test]
fn union_law_upper_connection_into_f_product() {
    let (t, x1, x2) = split_topology();
    let sp = topo_entropy_space(&t, TopoNorm::H, 100_000);
    let pm = PointMap::new(&t, vec![0, 0, 2, 2]).unwrap();
    let lam = preimage_map(&sp, &pm).unwrap();

    let (sub1, order1) = t.subspace(x1).unwrap();
    let (sub2, order2) = t.subspace(x2).unwrap();
    let sp1 = topo_entropy_space(&sub1, TopoNorm::H, 100_000);
    let sp2 = topo_entropy_space(&sub2, TopoNorm::H, 100_000);
    let mu1 = restriction_map(&sp, &sp1, x1, &order1);
    let mu2 = restriction_map(&sp, &sp2, x2, &order2);

    let fp = f_product_space(&sp1, &sp2, &log_sum_exp()).unwrap();
    let mu = pair_map(&fp, &mu1, &mu2, MapClass::UpperMap).unwrap();

    let table1: Vec<usize> = order1
        .iter()
        .map(|&p| order1.iter().position(|&q| q == pm.table[p]).unwrap())
        .collect();
    let table2: Vec<usize> = order2
        .iter()
        .map(|&p| order2.iter().position(|&q| q == pm.table[p]).unwrap())
        .collect();
    let lam1 = preimage_map(&sp1, &PointMap::new(&sub1, table1).unwrap()).unwrap();
    let lam2 = preimage_map(&sp2, &PointMap::new(&sub2, table2).unwrap()).unwrap();
    let lam_f = f_product_map(&fp, &lam1, &lam2).unwrap();

    let conn = Connection::new(mu, lam, lam_f, ConnectionClass::Upper).unwrap();
    let sample = sp.enumeration().unwrap();
    let report = classify_connection(&conn, &sample, TOL).unwrap();
    assert!(report.is_upper_connection());
    let verdict = compare_entropy(&conn, &sample, TOL).unwrap();
    assert!(matches!(
        verdict.relation,
        VerdictRelation::SourceLeqTarget | VerdictRelation::Equal
    ));
}

#[test]
fn subcover_counts_split_superadditively_across_open_halves() {
    // N(α∧X₁) + N(α∧X₂) ≥ N(α) on every irredundant cover of the split
    // four-point space.
    let (t, x1, x2) = split_topology();
    let (sub1, order1) = t.subspace(x1).unwrap();
    let (sub2, order2) = t.subspace(x2).unwrap();
    let compress = |order: &[usize], set: u64| -> u64 {
        order
            .iter()
            .enumerate()
            .filter(|(_, &p)| set & (1 << p) != 0)
            .fold(0u64, |acc, (q, _)| acc | (1 << q))
    };
    for alpha in entrospace::topo::enumerate_irredundant_covers(&t) {
        let n = cover_n(&t, &alpha, 100_000).unwrap();
        let a1: Vec<u64> =
            alpha.iter().map(|&s| compress(&order1, s & x1)).filter(|&s| s != 0).collect();
        let a2: Vec<u64> =
            alpha.iter().map(|&s| compress(&order2, s & x2)).filter(|&s| s != 0).collect();
        let n1 = cover_n(&sub1, &a1, 100_000).unwrap();
        let n2 = cover_n(&sub2, &a2, 100_000).unwrap();
        assert!(n1 + n2 >= n, "cover {alpha:?}: {n1} + {n2} < {n}");
    }
}

#[test]
fn quotient_dynamics_connect_upward() {
    // π: X → Y continuous onto with π∘T = S∘π gives a connection
    // μ(α) = π⁻¹α from (Y, S) into (X, T), hence h(S) ≤ h(T).
    // X: discrete 4 points with a 4-cycle; Y: discrete 2 points with the
    // swap; π: p ↦ p mod 2.
    let tx = FiniteTopology::discrete(4);
    let ty = FiniteTopology::discrete(2);
    let spx = topo_entropy_space(&tx, TopoNorm::H, 100_000);
    let spy = topo_entropy_space(&ty, TopoNorm::H, 100_000);
    let t_map = PointMap::new(&tx, vec![1, 2, 3, 0]).unwrap();
    let s_map = PointMap::new(&ty, vec![1, 0]).unwrap();
    let lam_t = preimage_map(&spx, &t_map).unwrap();
    let lam_s = preimage_map(&spy, &s_map).unwrap();

    // μ: covers of Y pulled back through π.
    let mu = CoverMap::builder("pull back along the projection", &spy, &spx, MapClass::Homomorphism)
        .apply(move |p| match p {
            Payload::Sets(sets) => Payload::Sets(
                sets.iter()
                    .map(|&s| {
                        (0..4u64)
                            .filter(|&q| s & (1 << (q % 2)) != 0)
                            .fold(0u64, |acc, q| acc | (1 << q))
                    })
                    .collect(),
            ),
            other => other.clone(),
        })
        .build();

    let conn = Connection::new(mu, lam_s, lam_t, ConnectionClass::Upper).unwrap();
    let sample = spy.enumeration().unwrap();
    let report = classify_connection(&conn, &sample, TOL).unwrap();
    // A pulled-back cover preserves counts, so μ is a full connection —
    // in particular an upper one, giving h(S) ≤ h(T).
    assert!(report.is_upper_connection());
    let verdict = compare_entropy(&conn, &sample, TOL).unwrap();
    assert!(matches!(
        verdict.relation,
        VerdictRelation::SourceLeqTarget | VerdictRelation::Equal
    ));
}

#[test]
fn preimage_dynamics_on_discrete_cycle_has_zero_entropy() {
    let t = FiniteTopology::discrete(4);
    let sp = topo_entropy_space(&t, TopoNorm::H, 100_000);
    let pm = PointMap::new(&t, vec![1, 2, 3, 0]).unwrap();
    let lam = preimage_map(&sp, &pm).unwrap();
    assert!(lam.has_inverse());
    let report = classify_map(&lam, &sp.enumeration().unwrap(), TOL).unwrap();
    assert!(report.satisfies(MapClass::Isomorphism));
    let alpha = sp
        .enumeration()
        .unwrap()
        .into_iter()
        .max_by_key(|c| match c.payload() {
            Payload::Sets(sets) => sets.len(),
            _ => 0,
        })
        .unwrap();
    let est = entropy_relative(&sp, &lam, &alpha, &params(12)).unwrap();
    assert_eq!(est.exact.unwrap().value, ExtReal::ZERO);
}

// ---------------------------------------------------------------------
// Subgroup-lattice laws
// ---------------------------------------------------------------------

fn fixture_groups() -> Vec<FinAbGroup> {
    vec![
        FinAbGroup::cyclic(2).unwrap(),
        FinAbGroup::cyclic(3).unwrap(),
        FinAbGroup::cyclic(4).unwrap(),
        FinAbGroup::cyclic(5).unwrap(),
        FinAbGroup::new(vec![2, 2]).unwrap(),
        FinAbGroup::cyclic(8).unwrap(),
        FinAbGroup::new(vec![2, 4]).unwrap(),
        FinAbGroup::new(vec![3, 3]).unwrap(),
        FinAbGroup::cyclic(12).unwrap(),
        FinAbGroup::new(vec![2, 2, 2]).unwrap(),
        FinAbGroup::cyclic(64).unwrap(),
    ]
}

#[test]
fn subgroup_spaces_pass_axioms_for_every_fixture_group() {
    for g in fixture_groups() {
        for space in [weiss_space(&g), adjoint_space(&g)] {
            let all = space.enumeration().unwrap();
            let cover_report = check_cover_axioms(&space, &all).unwrap();
            assert!(cover_report.all_pass(), "{g}: {}", space.name());
            let norm_report = check_norm_axioms(&space, &all, TOL).unwrap();
            assert!(norm_report.all_pass(), "{g}: {}", space.name());
        }
    }
}

#[test]
fn subgroup_sum_cardinality_is_submultiplicative() {
    for g in [FinAbGroup::new(vec![2, 4]).unwrap(), FinAbGroup::new(vec![2, 2, 2]).unwrap()] {
        let subs = enumerate_subgroups(&g);
        for e in &subs {
            for f in &subs {
                let sum = e.sum(f, &g);
                assert!(sum.card() <= e.card() * f.card());
                // Exact lattice identity: |E+F|·|E∩F| = |E|·|F|.
                assert_eq!(
                    sum.card() * e.intersection(f).card(),
                    e.card() * f.card()
                );
            }
        }
    }
}

#[test]
fn image_map_preserves_sums_exhaustively() {
    let g = FinAbGroup::new(vec![2, 4]).unwrap();
    let subs = enumerate_subgroups(&g);
    for phi in [
        Endomorphism::scalar(&g, 2).unwrap(),
        Endomorphism::scalar(&g, 3).unwrap(),
        Endomorphism::new(&g, vec![vec![1, 0], vec![2, 1]]).unwrap(),
    ] {
        for e in &subs {
            for f in &subs {
                let lhs = phi.image_of(&e.sum(f, &g));
                let rhs = phi.image_of(e).sum(&phi.image_of(f), &g);
                assert_eq!(lhs, rhs);
            }
            assert!(phi.image_of(e).card() <= e.card());
        }
    }
}

#[test]
fn backward_image_dynamics_examples() {
    let g = FinAbGroup::cyclic(4).unwrap();
    let ws = weiss_space(&g);

    // Identity endomorphism gives the identity map.
    let ident = backward_weiss_map(&ws, &Endomorphism::identity(&g)).unwrap();
    for c in ws.enumeration().unwrap() {
        assert_eq!(ident.apply(&c).unwrap().payload(), c.payload());
    }

    // ×3 is bijective on Z4 and fixes {0,2}.
    let phi = Endomorphism::scalar(&g, 3).unwrap();
    let back = backward_weiss_map(&ws, &phi).unwrap();
    let two = ws
        .enumeration()
        .unwrap()
        .into_iter()
        .find(|c| ws.norm(c).unwrap().approx_eq(ExtReal::Finite(2f64.ln()), TOL))
        .unwrap();
    assert_eq!(back.apply(&two).unwrap().payload(), two.payload());

    // Non-injective endomorphisms are rejected.
    assert!(backward_weiss_map(&ws, &Endomorphism::scalar(&g, 2).unwrap()).is_err());

    // Swap automorphism on Z2⊕Z2: the declared lower-map axioms pass, and
    // the classifier discovers the full isomorphism.
    let g22 = FinAbGroup::new(vec![2, 2]).unwrap();
    let ws22 = weiss_space(&g22);
    let swap = Endomorphism::new(&g22, vec![vec![0, 1], vec![1, 0]]).unwrap();
    let back = backward_weiss_map(&ws22, &swap).unwrap();
    let report = classify_map(&back, &ws22.enumeration().unwrap(), TOL).unwrap();
    assert!(report.l1.holds && report.l2.holds);
    assert!(report.satisfies(MapClass::LowerMap));
    assert!(report.satisfies(MapClass::Isomorphism));
}

#[test]
fn adjoint_preimage_classifies_as_lower_morphism() {
    let g = FinAbGroup::new(vec![2, 4]).unwrap();
    let adj = adjoint_space(&g);
    let phi = Endomorphism::scalar(&g, 2).unwrap();
    let lam = entrospace::alg::adjoint_map(&adj, &phi);
    let report = classify_map(&lam, &adj.enumeration().unwrap(), TOL).unwrap();
    assert!(report.satisfies(MapClass::LowerMorphism));
    // Whole group has index 1, hence norm 0; the trivial subgroup has
    // norm log 8.
    let full = adj.unit().unwrap();
    assert_eq!(adj.norm(&full).unwrap(), ExtReal::ZERO);
    let trivial = adj
        .enumeration()
        .unwrap()
        .into_iter()
        .find(|c| {
            adj.norm(c).unwrap().approx_eq(ExtReal::Finite(8f64.ln()), TOL)
        })
        .expect("trivial subgroup has norm log 8");
    let _ = trivial;
}

#[test]
fn weiss_image_dynamics_examples() {
    let g = FinAbGroup::cyclic(4).unwrap();
    let ws = weiss_space(&g);
    let unit = ws.unit().unwrap();
    assert_eq!(ws.norm(&unit).unwrap(), ExtReal::ZERO);

    // {0,2} ∧ Z4 = Z4 with norm log 4.
    let subs = ws.enumeration().unwrap();
    let two = subs
        .iter()
        .find(|c| ws.norm(c).unwrap().approx_eq(ExtReal::Finite(2f64.ln()), TOL))
        .unwrap();
    let full = subs
        .iter()
        .find(|c| ws.norm(c).unwrap().approx_eq(ExtReal::Finite(4f64.ln()), TOL))
        .unwrap();
    let m = ws.meet(two, full).unwrap();
    assert!(ws.norm(&m).unwrap().approx_eq(ExtReal::Finite(4f64.ln()), 1e-12));

    // ×2 sends Z4 to {0,2}.
    let lam = weiss_map(&ws, &Endomorphism::scalar(&g, 2).unwrap());
    let img = lam.apply(full).unwrap();
    assert!(ws.equivalent(&img, two).unwrap());
}

// ---------------------------------------------------------------------
// Window-space suites
// ---------------------------------------------------------------------

#[test]
fn window_space_axioms_on_bounded_subposet() {
    for sft in [Sft::full_shift(2, Sidedness::TwoSided).unwrap(), Sft::golden_mean(Sidedness::TwoSided)] {
        let sp = sft_space(&sft, WindowNorm::H);
        let mut small: Vec<_> = Vec::new();
        for i in -3i64..=3 {
            for j in i..=3 {
                small.push(window(&sp, &sft, i, j).unwrap());
            }
        }
        small.push(sp.cover(Payload::Windows(vec![])));
        let report = check_cover_axioms(&sp, &small).unwrap();
        assert!(report.all_pass());

        // Norm axioms over the wider family, including gapped systems.
        let mut wide = small.clone();
        wide.push(sp.cover(Payload::Windows(vec![(-6, -4), (0, 1)])));
        wide.push(sp.cover(Payload::Windows(vec![(-2, -1), (3, 6)])));
        wide.push(sp.cover(Payload::Windows(vec![(-6, -6), (0, 0), (5, 6)])));
        let report = check_norm_axioms(&sp, &wide, TOL).unwrap();
        assert!(report.all_pass());
    }
}

#[test]
fn product_trajectory_norms_add_exactly() {
    let gm = Sft::golden_mean(Sidedness::TwoSided);
    let fs = Sft::full_shift(2, Sidedness::TwoSided).unwrap();
    let sp1 = sft_space(&gm, WindowNorm::H);
    let sp2 = sft_space(&fs, WindowNorm::H);
    let prod = entrospace::construct::product_space(&[sp1.clone(), sp2.clone()]).unwrap();
    let map = product_map(
        &prod,
        &[shift_preimage_map(&gm, &sp1), shift_preimage_map(&fs, &sp2)],
    )
    .unwrap();
    let alpha = prod.cover(Payload::Tuple(vec![
        Payload::Windows(vec![(0, 0)]),
        Payload::Windows(vec![(0, 1)]),
    ]));
    let e = entropy_relative(&prod, &map, &alpha, &params(10)).unwrap();
    let e1 = entropy_relative(&sp1, &shift_preimage_map(&gm, &sp1), &window(&sp1, &gm, 0, 0).unwrap(), &params(10)).unwrap();
    let e2 = entropy_relative(&sp2, &shift_preimage_map(&fs, &sp2), &window(&sp2, &fs, 0, 1).unwrap(), &params(10)).unwrap();
    for n in 0..10 {
        let sum = e1.a_seq[n] + e2.a_seq[n];
        assert!(e.a_seq[n].approx_eq(sum, 1e-9), "n = {}", n + 1);
    }
}

#[test]
fn mean_dimension_norm_of_shifts_is_zero() {
    let sft = Sft::full_shift(3, Sidedness::TwoSided).unwrap();
    let sp = sft_space(&sft, WindowNorm::D);
    let pre = shift_preimage_map(&sft, &sp);
    let w = window(&sp, &sft, -2, 2).unwrap();
    assert_eq!(sp.norm(&w).unwrap(), ExtReal::ZERO);
    let est = entropy_relative(&sp, &pre, &w, &params(8)).unwrap();
    assert_eq!(est.running_inf, ExtReal::ZERO);
}

// ---------------------------------------------------------------------
// Property-based oracle comparisons
// ---------------------------------------------------------------------

fn arb_segments() -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-6i64..=6, 0i64..=3), 0..3)
        .prop_map(|raw| canonical_windows(raw.into_iter().map(|(i, len)| (i, i + len)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn window_counts_match_enumeration_oracle(segs in arb_segments()) {
        for sft in [Sft::full_shift(2, Sidedness::TwoSided).unwrap(), Sft::golden_mean(Sidedness::TwoSided)] {
            let ours = sft.count_assignments(&segs);
            let oracle = big(oracle_joint_assignments(sft.matrix(), &segs));
            prop_assert_eq!(&ours, &oracle, "segments {:?}", segs);
        }
    }

    #[test]
    fn window_norm_subadditive_and_antitone(a in arb_segments(), b in arb_segments()) {
        let sft = Sft::golden_mean(Sidedness::TwoSided);
        let sp = sft_space(&sft, WindowNorm::H);
        let ca = sp.cover(Payload::Windows(a));
        let cb = sp.cover(Payload::Windows(b));
        let m = sp.meet(&ca, &cb).unwrap();
        let (ha, hb, hm) = (
            sp.norm(&ca).unwrap(),
            sp.norm(&cb).unwrap(),
            sp.norm(&m).unwrap(),
        );
        prop_assert!(hm.le_approx(ha + hb, 1e-9));
        // The meet refines both factors and the norm is antitone.
        prop_assert!(sp.refines(&m, &ca).unwrap());
        prop_assert!(ha.le_approx(hm, 1e-9));
    }

    #[test]
    fn window_meet_associative_and_commutative(
        a in arb_segments(),
        b in arb_segments(),
        c in arb_segments(),
    ) {
        let sft = Sft::full_shift(2, Sidedness::TwoSided).unwrap();
        let sp = sft_space(&sft, WindowNorm::H);
        let (ca, cb, cc) = (
            sp.cover(Payload::Windows(a)),
            sp.cover(Payload::Windows(b)),
            sp.cover(Payload::Windows(c)),
        );
        let left = sp.meet(&sp.meet(&ca, &cb).unwrap(), &cc).unwrap();
        let right = sp.meet(&ca, &sp.meet(&cb, &cc).unwrap()).unwrap();
        prop_assert_eq!(left.payload(), right.payload());
        let ab = sp.meet(&ca, &cb).unwrap();
        let ba = sp.meet(&cb, &ca).unwrap();
        prop_assert_eq!(ab.payload(), ba.payload());
    }

    #[test]
    fn random_meet_spaces_pass_all_checkers(seed in 0u64..500) {
        let spec = fixtures::random_meet_space(seed, 6);
        let space = spec.build().unwrap();
        let all = space.enumeration().unwrap();
        prop_assert!(check_cover_axioms(&space, &all).unwrap().all_pass());
        prop_assert!(check_norm_axioms(&space, &all, TOL).unwrap().all_pass());
    }

    #[test]
    fn min_subcover_matches_exhaustive_oracle(seed in 0u64..200) {
        // Random covers of random 4-point topologies.
        let mut rng = fixtures::SplitMix64(seed);
        let topologies = entrospace::topo::enumerate_topologies(3);
        let t = &topologies[rng.below(topologies.len() as u64) as usize];
        let nonempty: Vec<u64> = t.opens().iter().copied().filter(|&o| o != 0).collect();
        let mut family: Vec<u64> = Vec::new();
        for _ in 0..(1 + rng.below(4)) {
            family.push(nonempty[rng.below(nonempty.len() as u64) as usize]);
        }
        let full = t.full();
        family.push(full);
        family.sort_unstable();
        family.dedup();
        let ours = cover_n(t, &family, 100_000).unwrap();
        let oracle = oracle_min_subcover(full, &family).unwrap();
        prop_assert_eq!(ours, oracle);
    }
}
