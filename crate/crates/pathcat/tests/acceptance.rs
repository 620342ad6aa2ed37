//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact (integer/boolean); no tolerances.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pathcat::amalgam::{
    amalgamate, ball_non_isotropic, sum_degree, Amalgam, BallVerdict, Component, ComponentDegree,
    FreeArrow, Presentation, Word,
};
use pathcat::analysis;
use pathcat::boolring::{
    self, extend_homomorphism, general_conditions_hold, Assignment, Carrier, ExtendOutcome,
    FiniteRing,
};
use pathcat::boundary::{
    self, boundary as boundary_points, exhaustive_coverage, finite_exhaustive_sets, is_boundary,
    is_exhaustive, is_maximal, is_ultrafilter, lambda_star, ultrafilter_of, HereditaryDirectedSet,
};
use pathcat::cat::{
    check_finitely_aligned, initial_segments, is_initial_segment, min_common_extensions, tail_set,
    PathCategory, PathId,
};
use pathcat::degree::{
    self, compute_h, factor_through_theta, is_non_isotropic, DegreeFunctor, IsotropyVerdict,
};
use pathcat::groupoid::{build_groupoid, GroupoidElement};
use pathcat::io::load_category;
use pathcat::repemit::{build_matrix_rep, emit_relations, verify_relations, Flavor, Relation};
use pathcat::zigzag::{domain, eval as zigzag_eval, reduce_to_shift_pairs, Zigzag};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn corpus_cat(name: &str) -> PathCategory {
    load_category(&corpus(name)).expect(name)
}

/// Every finite corpus category, including the materialized amalgamation.
fn corpus_categories() -> Vec<(String, PathCategory)> {
    let mut out: Vec<(String, PathCategory)> = [
        "point.cat",
        "single_arrow.cat",
        "sq1.cat",
        "sq2.cat",
        "dbl.cat",
        "fig1_n3.cat",
        "fig2_n6.cat",
        "fig3_n2.cat",
    ]
    .iter()
    .map(|n| (n.to_string(), corpus_cat(n)))
    .collect();
    let loaded = pathcat::io::load_presentation(&corpus("two_sq1_chain.pres")).unwrap();
    let chained = amalgamate(&loaded.presentation, None).unwrap().exact.unwrap();
    out.push(("two_sq1_chain.pres".into(), chained));
    out
}

/// The smaller corpus categories, for the heavier exhaustive scans.
fn small_corpus() -> Vec<(String, PathCategory)> {
    corpus_categories().into_iter().filter(|(n, _)| n != "fig2_n6.cat").collect()
}

/// The 2-graph degree on the square categories: horizontal (1,0), vertical (0,1).
fn two_graph_degree(cat: &PathCategory) -> Option<DegreeFunctor> {
    let mut values = vec![vec![0i64, 0]; cat.len()];
    for p in cat.morphisms() {
        if cat.is_vertex(p) {
            continue;
        }
        let name = cat.name(p);
        let v = if name.starts_with("alpha") || name.starts_with("beta") {
            vec![1, 0]
        } else if name.starts_with("gamma") || name.starts_with("delta") {
            vec![0, 1]
        } else if name.starts_with("eps") {
            vec![1, 1]
        } else {
            return None;
        };
        values[p.index()] = v;
    }
    DegreeFunctor::new(cat, 2, vec![], values).ok()
}

fn rebuild_with_entry(
    cat: &PathCategory,
    target: (PathId, PathId),
    replacement: PathId,
) -> PathCategory {
    let mut entries = Vec::new();
    for a in cat.morphisms() {
        for b in cat.morphisms() {
            if let Some(ab) = cat.compose(a, b) {
                let ab = if (a, b) == target { replacement } else { ab };
                entries.push((a, b, ab));
            }
        }
    }
    let names: Vec<String> = cat.morphisms().map(|m| cat.name(m).to_string()).collect();
    let src: Vec<PathId> = cat.morphisms().map(|m| cat.src(m)).collect();
    let rng: Vec<PathId> = cat.morphisms().map(|m| cat.rng(m)).collect();
    PathCategory::from_table(names, cat.vertex_count() as u32, src, rng, &entries).unwrap()
}

#[test]
fn criterion_01_axiom_suite() {
    for (name, cat) in corpus_categories() {
        let report = cat.validate();
        assert!(report.is_valid(), "{name} must validate:\n{}", report.render(&cat));
    }

    // Single-entry mutations with the expected axiom named.
    let mut mutations: Vec<(&str, PathCategory, (PathId, PathId), PathId, &str)> = Vec::new();
    let sq2 = corpus_cat("sq2.cat");
    let id = |cat: &PathCategory, n: &str| cat.by_name(n).unwrap();
    for (a, b, c, kind) in [
        ("alpha", "gamma0", "eps1", "left-cancellation"),
        ("alpha", "gamma1", "eps0", "left-cancellation"),
        ("beta", "delta0", "eps1", "left-cancellation"),
        ("beta", "delta1", "eps0", "left-cancellation"),
        ("alpha", "gamma0", "beta", "endpoint-mismatch"),
        ("alpha", "gamma0", "t", "endpoint-mismatch"),
        ("alpha", "gamma1", "gamma0", "endpoint-mismatch"),
        ("beta", "delta0", "alpha", "endpoint-mismatch"),
        ("beta", "delta1", "delta0", "endpoint-mismatch"),
        ("alpha", "gamma0", "v0", "endpoint-mismatch"),
        ("t", "eps0", "eps1", "endpoint-mismatch"),
        ("t", "alpha", "beta", "endpoint-mismatch"),
    ] {
        mutations.push((
            "sq2.cat",
            sq2.clone(),
            (id(&sq2, a), id(&sq2, b)),
            id(&sq2, c),
            kind,
        ));
    }
    let dbl = corpus_cat("dbl.cat");
    for (a, b, c, kind) in [
        // gamma.rho = gamma2.rho2 and gamma.rho2 = gamma2.rho in the clean table.
        ("gamma2", "rho", "gamma.rho", "right-cancellation"),
        ("gamma2", "rho2", "gamma.rho2", "right-cancellation"),
        ("delta2", "rho", "delta.rho", "right-cancellation"),
        ("delta2", "rho2", "delta.rho2", "right-cancellation"),
        ("gamma", "rho", "gamma.rho2", "left-cancellation"),
        ("delta", "rho2", "delta.rho", "left-cancellation"),
        ("alpha", "gamma", "alpha.gamma2", "left-cancellation"),
        ("u", "alpha.gamma.rho", "alpha.gamma.rho2", "identity-law"),
        ("u", "alpha", "beta", "endpoint-mismatch"),
        ("alpha", "gamma", "alpha.gamma.rho", "endpoint-mismatch"),
    ] {
        mutations.push((
            "dbl.cat",
            dbl.clone(),
            (id(&dbl, a), id(&dbl, b)),
            id(&dbl, c),
            kind,
        ));
    }
    assert!(mutations.len() >= 20);
    let mut count = mutations.len();
    for (name, cat, target, replacement, expected) in mutations {
        let mutated = rebuild_with_entry(&cat, target, replacement);
        let report = mutated.validate();
        assert!(!report.is_valid(), "{name} mutation must be rejected");
        assert!(
            report.has_kind(expected),
            "{name} mutation at ({}, {}) must name {expected}; got:\n{}",
            cat.name(target.0),
            cat.name(target.1),
            report.render(&mutated)
        );
    }

    // A non-identity loop breaks no-inverses/acyclicity.
    let mut b = pathcat::cat::CategoryBuilder::new();
    let v = b.vertex("v");
    let a = b.arrow("a", v, v);
    b.compose(a, a, v);
    let looped = b.build().unwrap();
    let report = looped.validate();
    assert!(report.has_kind("no-inverses") && report.has_kind("acyclicity"));
    count += 1;

    let mut b = pathcat::cat::CategoryBuilder::new();
    let v = b.vertex("v");
    let a = b.arrow("a", v, v);
    b.compose(a, a, a);
    let report = b.build().unwrap().validate();
    assert!(report.has_kind("acyclicity"));
    count += 1;

    println!("criterion 1 PASS: axiom suite ({count} mutations rejected with named axioms)");
}

#[test]
fn criterion_02_alignment_suite() {
    let mut pairs_checked = 0usize;
    for (name, cat) in corpus_categories() {
        let report = check_finitely_aligned(&cat);
        assert!(report.finitely_aligned, "{name}");
        for a in cat.morphisms() {
            for b in cat.morphisms() {
                if a > b || cat.rng(a) != cat.rng(b) {
                    continue;
                }
                let inter =
                    tail_set(&cat, a).unwrap().intersect(&tail_set(&cat, b).unwrap());
                let vee = min_common_extensions(&cat, &[a, b]).unwrap();
                let mut union = pathcat::cat::PathSet::empty(cat.rng(a));
                for &e in &vee {
                    union = union.union(&tail_set(&cat, e).unwrap());
                }
                assert_eq!(inter, union, "{name}: union identity at ({}, {})", cat.name(a), cat.name(b));
                for &e in &vee {
                    for &f in &vee {
                        if e != f {
                            assert!(
                                !is_initial_segment(&cat, e, f),
                                "{name}: ∨ must be an antichain"
                            );
                        }
                    }
                }
                pairs_checked += 1;
            }
        }
    }
    let sq2 = corpus_cat("sq2.cat");
    let mut vee = min_common_extensions(
        &sq2,
        &[sq2.by_name("alpha").unwrap(), sq2.by_name("beta").unwrap()],
    )
    .unwrap();
    vee.sort_unstable();
    assert_eq!(vee, vec![sq2.by_name("eps0").unwrap(), sq2.by_name("eps1").unwrap()]);
    println!("criterion 2 PASS: alignment suite ({pairs_checked} pairs)");
}

#[test]
fn criterion_03_zigzag_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for (name, cat) in corpus_categories() {
        let by_rng: BTreeMap<PathId, Vec<PathId>> = cat
            .vertices()
            .map(|v| (v, cat.paths_at(v).members().to_vec()))
            .collect();
        let by_src: BTreeMap<PathId, Vec<PathId>> = cat
            .vertices()
            .map(|v| (v, cat.paths_from(v)))
            .collect();
        let mut built = 0usize;
        let mut attempts = 0usize;
        while built < 1000 && attempts < 100_000 {
            attempts += 1;
            let len = rng.random_range(1..=3usize);
            let mut pairs: Vec<(PathId, PathId)> = Vec::new();
            let mut ok = true;
            for i in 0..len {
                let a = if i == 0 {
                    let idx = rng.random_range(0..cat.len());
                    PathId(idx as u32)
                } else {
                    // src(a_{i+1}) = src(b_i).
                    let prev_src = cat.src(pairs[i - 1].1);
                    let pool = &by_src[&prev_src];
                    if pool.is_empty() {
                        ok = false;
                        break;
                    }
                    pool[rng.random_range(0..pool.len())]
                };
                let pool = &by_rng[&cat.rng(a)];
                let b = pool[rng.random_range(0..pool.len())];
                pairs.push((a, b));
            }
            if !ok {
                continue;
            }
            let z = match Zigzag::new(&cat, pairs) {
                Ok(z) => z,
                Err(_) => continue,
            };
            built += 1;
            let union = reduce_to_shift_pairs(&cat, &z);
            assert!(union.check_consistent(&cat), "{name}: inconsistent reduction");
            let back = z.reverse();
            for &m in cat.paths_at(z.source(&cat)).members() {
                let direct = zigzag_eval(&cat, &z, m).unwrap();
                assert_eq!(direct, union.eval(&cat, m), "{name}: reduction must equal eval");
                if let Some(image) = direct {
                    assert_eq!(
                        zigzag_eval(&cat, &back, image).unwrap(),
                        Some(m),
                        "{name}: reverse must invert eval"
                    );
                }
            }
            // Range of the map is the domain of the reverse.
            let image: Vec<PathId> = domain(&cat, &z)
                .members()
                .iter()
                .map(|&m| zigzag_eval(&cat, &z, m).unwrap().unwrap())
                .collect();
            assert_eq!(
                pathcat::cat::PathSet::new(z.range(&cat), image),
                domain(&cat, &back)
            );
        }
        assert_eq!(built, 1000, "{name}: could not build 1000 zigzags");
    }
    println!("criterion 3 PASS: zigzag suite (1000 random zigzags per corpus category)");
}

/// Independent statement of condition (3) for the oracle side.
fn condition3_oracle(cat: &PathCategory, v: PathId, assign: &Assignment) -> bool {
    let paths = cat.paths_at(v);
    for &a in paths.members() {
        for &b in paths.members() {
            let lhs = assign.values[&a] & assign.values[&b];
            let mut rhs = 0u64;
            for e in min_common_extensions(cat, &[a, b]).unwrap() {
                rhs |= assign.values[&e];
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_04_boolean_ring_suite() {
    for (name, cat) in corpus_categories() {
        let failures = boolring::check_shift_invariance(&cat).unwrap();
        assert!(failures.is_empty(), "{name}: shift invariance");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = 0usize;
    let mut accepted = 0usize;
    for (name, cat, vname) in [
        ("sq2.cat", corpus_cat("sq2.cat"), "t"),
        ("fig1_n3.cat", corpus_cat("fig1_n3.cat"), "u"),
        ("dbl.cat", corpus_cat("dbl.cat"), "u"),
    ] {
        let v = cat.by_name(vname).unwrap();
        let carrier = Carrier::new(&cat, v).unwrap();
        let target_size = 3usize;
        let mut assignments: Vec<Assignment> = Vec::new();
        // Random raw assignments.
        for _ in 0..25 {
            let values: BTreeMap<PathId, u64> = carrier
                .paths
                .iter()
                .map(|&a| (a, rng.random_range(0u64..(1 << target_size))))
                .collect();
            assignments.push(Assignment { vertex: v, values });
        }
        // Valid by construction: pull back along a random partial point map.
        for _ in 0..15 {
            let points: Vec<Option<PathId>> = (0..target_size)
                .map(|_| {
                    let k = rng.random_range(0..=carrier.paths.len());
                    carrier.paths.get(k).copied()
                })
                .collect();
            let values: BTreeMap<PathId, u64> = carrier
                .paths
                .iter()
                .map(|&a| {
                    let tail = tail_set(&cat, a).unwrap();
                    let mut mask = 0u64;
                    for (i, pt) in points.iter().enumerate() {
                        if let Some(p) = pt {
                            if tail.contains(*p) {
                                mask |= 1 << i;
                            }
                        }
                    }
                    (a, mask)
                })
                .collect();
            assignments.push(Assignment { vertex: v, values });
        }
        for assign in assignments {
            total += 1;
            let target = FiniteRing::power_set(target_size).unwrap();
            let outcome = extend_homomorphism(&cat, v, target, assign.clone()).unwrap();
            let expected = condition3_oracle(&cat, v, &assign);
            let general = general_conditions_hold(&cat, v, &assign).unwrap();
            match outcome {
                ExtendOutcome::Extended(hom) => {
                    assert!(expected, "{name}: accepted but condition (3) fails");
                    assert!(general, "{name}: general-form conditions must agree");
                    accepted += 1;
                    // Hom laws over all pairs of 𝒜_v.
                    let masks = boolring::ring_masks(&cat, v).unwrap();
                    for &ma in &masks {
                        for &mb in &masks {
                            let (sa, sb) = (carrier.set_of(ma), carrier.set_of(mb));
                            let ha = hom.eval_paths(&cat, &sa).unwrap();
                            let hb = hom.eval_paths(&cat, &sb).unwrap();
                            assert_eq!(hom.eval_paths(&cat, &sa.intersect(&sb)).unwrap(), ha & hb);
                            assert_eq!(hom.eval_paths(&cat, &sa.union(&sb)).unwrap(), ha | hb);
                            assert_eq!(
                                hom.eval_paths(&cat, &sa.difference(&sb)).unwrap(),
                                ha & !hb
                            );
                        }
                    }
                }
                ExtendOutcome::Rejected { .. } => {
                    assert!(!expected, "{name}: rejected but condition (3) holds");
                    assert!(!general, "{name}: general-form conditions must agree");
                }
            }
        }
    }
    assert!(total >= 100, "need at least 100 assignments, got {total}");
    assert!(accepted >= 30, "need accepted extensions to make the check non-vacuous");
    println!(
        "criterion 4 PASS: boolean-ring suite ({total} assignments, {accepted} extended)"
    );
}

#[test]
fn criterion_05_ultrafilter_classification() {
    let mut counted = BTreeMap::new();
    for (name, cat) in corpus_categories() {
        for v in cat.vertices() {
            let ring = boolring::ring_masks(&cat, v).unwrap();
            // Brute force: principal filters that pass the ultrafilter test.
            let mut brute: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
            for &e in &ring {
                if e == 0 {
                    continue;
                }
                let up: BTreeSet<u64> = ring.iter().copied().filter(|&f| f & e == e).collect();
                if is_ultrafilter(&cat, v, &up).unwrap() {
                    brute.insert(up);
                }
            }
            let stars = lambda_star(&cat, v).unwrap();
            let mapped: BTreeSet<BTreeSet<u64>> =
                stars.iter().map(|c| ultrafilter_of(&cat, c).unwrap().0).collect();
            assert_eq!(mapped.len(), stars.len(), "{name}/{}: injectivity", cat.name(v));
            assert_eq!(mapped, brute, "{name}/{}: bijectivity", cat.name(v));
            // All fixed: each 𝒰_C is the fixed ultrafilter at some path.
            let carrier = Carrier::new(&cat, v).unwrap();
            for c in &stars {
                let (uc, _) = ultrafilter_of(&cat, c).unwrap();
                let fixed = carrier.paths.iter().any(|&p| {
                    let bit = 1u64 << carrier.index_of(p).unwrap();
                    ring.iter().all(|&e| uc.contains(&e) == (e & bit != 0))
                });
                assert!(fixed, "{name}/{}: every ultrafilter must be fixed", cat.name(v));
            }
            counted.insert((name.clone(), cat.name(v).to_string()), stars.len());
        }
    }
    assert_eq!(counted[&("sq2.cat".to_string(), "t".to_string())], 5);
    println!("criterion 5 PASS: ultrafilter classification (bijective and fixed everywhere)");
}

#[test]
fn criterion_06_boundary_suite() {
    for (name, cat) in corpus_categories() {
        for c in pathcat::boundary::lambda_star_all(&cat).unwrap() {
            assert_eq!(
                is_boundary(&cat, &c).unwrap(),
                is_maximal(&cat, &c),
                "{name}: closure criterion vs maximality at {}",
                c.display(&cat)
            );
        }
        for v in cat.vertices() {
            let paths = cat.paths_at(v);
            let n = paths.len();
            // All Δ ⊆ vΛ with |Δ| ≤ 4.
            for mask in 0u64..(1 << n) {
                if mask.count_ones() > 4 {
                    continue;
                }
                let delta: Vec<PathId> = paths
                    .members()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &p)| p)
                    .collect();
                // exhaustive_coverage asserts the lemma internally.
                let covered = exhaustive_coverage(&cat, v, &delta).unwrap();
                assert_eq!(covered, is_exhaustive(&cat, v, &delta).unwrap());
            }
        }
    }
    println!("criterion 6 PASS: boundary suite (closure criterion and coverage lemma)");
}

#[test]
fn criterion_07_groupoid_suite() {
    for (name, cat) in small_corpus() {
        for restrict in [false, true] {
            let g = build_groupoid(&cat, restrict).unwrap();
            // Laws, exhaustively.
            for a in &g.elements {
                let inv = g.inverse(a);
                assert!(g.find(&inv).is_some());
                assert_eq!(g.inverse(&inv), *a);
                let unit_r = g.unit_at(&cat, &g.range(&cat, a));
                assert_eq!(g.compose(&cat, a, &inv).unwrap().unwrap(), unit_r);
            }
            let n = g.elements.len();
            // Composability matches s/r over all pairs.
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (&g.elements[i], &g.elements[j]);
                    let ab = g.compose(&cat, a, b).unwrap();
                    assert_eq!(ab.is_some(), g.source(&cat, a) == g.range(&cat, b));
                    if let Some(ab) = &ab {
                        assert!(g.find(ab).is_some());
                    }
                }
            }
            // Associativity over every composable triple, bucketed by the
            // chaining condition on canonical representatives.
            let mut by_alpha: BTreeMap<PathId, Vec<usize>> = BTreeMap::new();
            for (i, e) in g.elements.iter().enumerate() {
                by_alpha.entry(e.alpha).or_default().push(i);
            }
            let empty = Vec::new();
            for a in &g.elements {
                for &j in by_alpha.get(&a.beta).unwrap_or(&empty) {
                    let b = &g.elements[j];
                    let ab = g.compose(&cat, a, b).unwrap().unwrap();
                    for &k in by_alpha.get(&b.beta).unwrap_or(&empty) {
                        let c = &g.elements[k];
                        let bc = g.compose(&cat, b, c).unwrap().unwrap();
                        let l = g.compose(&cat, &ab, c).unwrap();
                        let r = g.compose(&cat, a, &bc).unwrap();
                        assert_eq!(l, r, "{name}: associativity");
                    }
                }
            }
        }
        // Isotropy triviality ⟺ point aperiodicity at every boundary unit.
        let g = build_groupoid(&cat, true).unwrap();
        for x in g.units.clone() {
            assert_eq!(
                g.has_trivial_isotropy_at(&cat, &x),
                analysis::is_aperiodic_point(&cat, &x).unwrap(),
                "{name}: isotropy vs aperiodicity at {}",
                x.display(&cat)
            );
        }
        // Cocycle additivity and the kernel equivalence for corpus functors.
        let h = compute_h(&cat).unwrap();
        let mut functors = vec![h.theta.clone(), DegreeFunctor::zero(&cat)];
        if let Some(psi) = two_graph_degree(&cat) {
            functors.push(psi);
        }
        for psi in functors {
            for a in &g.elements {
                for b in &g.elements {
                    if let Some(ab) = g.compose(&cat, a, b).unwrap() {
                        let sum = psi
                            .add(&g.cocycle(&psi, a).unwrap(), &g.cocycle(&psi, b).unwrap())
                            .unwrap();
                        assert_eq!(g.cocycle(&psi, &ab).unwrap(), sum, "{name}: additivity");
                    }
                }
            }
            let ker = g.kernel_subgroupoid(&psi).unwrap();
            let principal = ker.units.iter().all(|x| ker.has_trivial_isotropy_at(&cat, x));
            let non_isotropic = matches!(is_non_isotropic(&cat, &psi), IsotropyVerdict::NonIsotropic);
            assert_eq!(non_isotropic, principal, "{name}: non-isotropy vs principal kernel");
        }
    }
    println!("criterion 7 PASS: groupoid suite (laws, isotropy, cocycles, kernels)");
}

#[test]
fn criterion_08_structure_suite() {
    for (name, cat) in corpus_categories() {
        let report = analysis::structure_report(&cat).unwrap();
        assert!(report.cross_checks_ok, "{name}: structural cross-checks");
        // Aperiodicity ⟺ every boundary unit has trivial isotropy.
        let g = build_groupoid(&cat, true).unwrap();
        let all_trivial = g.units.iter().all(|x| g.has_trivial_isotropy_at(&cat, x));
        assert_eq!(report.aperiodic, all_trivial, "{name}");
        // Minimality ⟺ single orbit of G|∂Λ.
        assert_eq!(report.minimal, g.orbits(&cat).len() == 1, "{name}");
        // Generalized-cycle triple equivalence over all eligible pairs.
        for mu in cat.morphisms() {
            for nu in cat.morphisms() {
                if mu == nu || cat.src(mu) != cat.src(nu) || cat.rng(mu) != cat.rng(nu) {
                    continue;
                }
                let checks = analysis::generalized_cycle_checks(&cat, mu, nu).unwrap();
                assert_eq!(checks.by_definition, checks.shifted_vee_exhaustive, "{name}");
                assert_eq!(checks.by_definition, checks.boundary_inclusion, "{name}");
                if checks.by_definition {
                    // Entrance ⟺ strict boundary inclusion.
                    let (entrance, _) = analysis::has_entrance(&cat, mu, nu).unwrap();
                    let mu_side: BTreeSet<String> = boundary_points(&cat)
                        .unwrap()
                        .into_iter()
                        .filter(|x| x.vertex() == cat.src(mu))
                        .map(|x| {
                            pathcat::groupoid::concat_point(&cat, mu, &x)
                                .unwrap()
                                .display(&cat)
                        })
                        .collect();
                    let nu_side: BTreeSet<String> = boundary_points(&cat)
                        .unwrap()
                        .into_iter()
                        .filter(|x| x.vertex() == cat.src(nu))
                        .map(|x| {
                            pathcat::groupoid::concat_point(&cat, nu, &x)
                                .unwrap()
                                .display(&cat)
                        })
                        .collect();
                    assert!(mu_side.is_subset(&nu_side));
                    assert_eq!(entrance, mu_side != nu_side, "{name}: entrance iff strict");
                }
            }
        }
    }
    // DBL carries entrance-free generalized cycles; they must be detected.
    let dbl = corpus_cat("dbl.cat");
    let cycles = analysis::generalized_cycles(&dbl).unwrap();
    assert_eq!(cycles.len(), 6);
    for (mu, nu) in cycles {
        assert!(!analysis::has_entrance(&dbl, mu, nu).unwrap().0);
    }
    println!("criterion 8 PASS: structure suite (freeness, minimality, generalized cycles)");
}

#[test]
fn criterion_09_representation_suite() {
    let cat = corpus_cat("sq2.cat");
    let alpha = cat.by_name("alpha").unwrap();
    let t = cat.by_name("t").unwrap();

    let doc = emit_relations(&cat, Flavor::Toeplitz).unwrap();
    let rep = build_matrix_rep(&cat, Flavor::Toeplitz).unwrap();
    // The Λ* basis is pinned by the ultrafilter classification: 13 points.
    let ultra_count: usize = cat
        .vertices()
        .map(|v| lambda_star(&cat, v).unwrap().len())
        .sum();
    assert_eq!(rep.dim(), ultra_count);
    assert_eq!(rep.dim(), 13);
    let report = verify_relations(&cat, &rep, &doc).unwrap();
    assert!(report.all_hold(), "(T1)-(T3) must hold in the Toeplitz representation");
    assert!(report.wick_ok, "Wick expansion must hold entrywise for all pairs");
    let f_alpha = report.ck_in_toeplitz.iter().find(|c| {
        matches!(&c.relation, Relation::Ck4 { vertex, family } if *vertex == t && family == &vec![alpha])
    });
    assert!(!f_alpha.expect("F = {α} emitted").holds, "(CK4) with F = {{α}} must fail");

    let doc = emit_relations(&cat, Flavor::Ck).unwrap();
    let rep = build_matrix_rep(&cat, Flavor::Ck).unwrap();
    assert_eq!(rep.dim(), 8);
    let report = verify_relations(&cat, &rep, &doc).unwrap();
    assert!(report.all_hold(), "(T1)-(CK4) must hold in the CK representation");
    assert!(report.wick_ok);

    // The non-disjoint minimal-common-extension corpus case goes through the
    // same exact identities.
    let dbl = corpus_cat("dbl.cat");
    for flavor in [Flavor::Toeplitz, Flavor::Ck] {
        let doc = emit_relations(&dbl, flavor).unwrap();
        let rep = build_matrix_rep(&dbl, flavor).unwrap();
        assert!(verify_relations(&dbl, &rep, &doc).unwrap().all_hold());
    }
    println!(
        "criterion 9 PASS: representation suite (Toeplitz dim 13 = |Λ*|, CK dim 8; see ledger \
         on the criterion's stated 11)"
    );
}

#[test]
fn criterion_10_amalgamation_suite() {
    // Normal-form uniqueness under 1000 randomized reduction orders per word.
    let loaded = pathcat::io::load_presentation(&corpus("two_sq1_chain.pres")).unwrap();
    let am = Amalgam::new(&loaded.presentation).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let corpus_words: Vec<Vec<&str>> = vec![
        vec!["t", "alpha", "p", "gamma0", "v0"],
        vec!["alpha", "gamma0", "t2", "alpha2", "gamma2"],
        vec!["eps0", "alpha2", "p2", "gamma2", "w2"],
        vec!["gamma0", "v0", "t2", "beta2", "delta2"],
        vec!["t", "eps0", "eps2", "w2"],
    ];
    for names in &corpus_words {
        let w = am.parse_word(names).unwrap();
        let reference = am.normal_form(&w).unwrap();
        for _ in 0..1000 {
            assert_eq!(am.normal_form_random(&w, &mut rng).unwrap(), reference);
        }
        // Congruence with composition: split at every position.
        for cut in 1..names.len() {
            let left = am.parse_word(&names[..cut]).unwrap();
            let right = am.parse_word(&names[cut..]).unwrap();
            let staged = am
                .compose_nf(&am.normal_form(&left).unwrap(), &am.normal_form(&right).unwrap())
                .unwrap();
            assert_eq!(staged, reference);
        }
    }

    // Exact finite amalgamations pass the axiom suite.
    let chained = amalgamate(&loaded.presentation, None).unwrap().exact.unwrap();
    assert!(chained.validate().is_valid());
    assert!(check_finitely_aligned(&chained).finitely_aligned);

    // meets_amalgam vs brute-force common-extension search within ball(6).
    let free2 = Presentation::single(
        vec!["v".into()],
        vec![
            FreeArrow { name: "a".into(), src: "v".into(), rng: "v".into() },
            FreeArrow { name: "b".into(), src: "v".into(), rng: "v".into() },
        ],
        vec![],
    );
    let am2 = Amalgam::new(&free2).unwrap();
    let ball = amalgamate(&free2, Some(6)).unwrap().ball;
    let mut compared = 0usize;
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            if ball.elements[i].rep.len() > 3 || ball.elements[j].rep.len() > 3 {
                continue;
            }
            let to_nf = |idx: usize| {
                let e = &ball.elements[idx];
                if e.rep.is_empty() {
                    return pathcat::amalgam::NormalForm {
                        rng_class: e.rng_class,
                        src_class: e.src_class,
                        letters: vec![],
                    };
                }
                let names: Vec<String> =
                    e.rep.iter().map(|&g| am2.glued.generators[g].name.clone()).collect();
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                am2.normal_form(&am2.parse_word(&refs).unwrap()).unwrap()
            };
            let (got, witness) = am2.meets_nf(&to_nf(i), &to_nf(j)).unwrap();
            let brute = ball.meets_bounded(i, j);
            assert_eq!(got, brute.is_some(), "meets within ball(6)");
            if let Some(w) = witness {
                // The witness extends both.
                let disp = am2.display_nf(&w);
                let k = (0..ball.len()).find(|&k| ball.display(k) == disp).unwrap();
                assert!(ball.extends(k, i) && ball.extends(k, j));
            }
            compared += 1;
        }
    }
    assert!(compared > 100);

    // Also compare on the glued explicit presentation, against the exact
    // category's own meets.
    let am3 = Amalgam::new(&loaded.presentation).unwrap();
    for a in chained.morphisms() {
        for b in chained.morphisms() {
            let parse = |m: PathId| {
                let name = chained.name(m).to_string();
                let parts: Vec<&str> = name.split('.').collect();
                am3.normal_form(&am3.parse_word(&parts).unwrap()).unwrap()
            };
            let (got, _) = am3.meets_nf(&parse(a), &parse(b)).unwrap();
            let expected = pathcat::cat::meets(&chained, a, b).unwrap();
            assert_eq!(got, expected, "meets_amalgam vs exact meets");
        }
    }

    // sum_degree output passes functoriality, nondegeneracy, and bounded
    // non-isotropy.
    let sq = corpus_cat("sq1.cat");
    let psi_sq = two_graph_degree(&sq).unwrap();
    let pres = Presentation {
        components: vec![
            Component::Explicit(sq),
            Component::Free {
                vertices: vec!["u".into()],
                arrows: vec![
                    FreeArrow { name: "a".into(), src: "u".into(), rng: "u".into() },
                    FreeArrow { name: "b".into(), src: "u".into(), rng: "u".into() },
                ],
            },
        ],
        glue: vec![("u".into(), "v0".into())],
        extra_relations: vec![],
    };
    let ball = amalgamate(&pres, Some(4)).unwrap().ball;
    let degrees = vec![
        ComponentDegree::Explicit(psi_sq),
        ComponentDegree::Free { width: 1, arrow_values: vec![vec![1], vec![1]] },
    ];
    let sum = sum_degree(&pres, &degrees, &ball).unwrap();
    assert!(sum.check_functorial(&ball));
    assert!(sum.check_nondegenerate(&ball));
    assert_eq!(ball_non_isotropic(&ball, &sum.values), BallVerdict::HoldsWithinBound(4));

    println!("criterion 10 PASS: amalgamation suite (normal forms, meets, degree sums)");
}

#[test]
fn criterion_11_h_suite() {
    // SQ1: H ≅ ℤ³ with the stated θ-table.
    let cat = corpus_cat("sq1.cat");
    let h = compute_h(&cat).unwrap();
    assert_eq!(h.rank, 3);
    assert!(h.torsion.is_empty());
    let th = |n: &str| h.theta.value(cat.by_name(n).unwrap()).to_vec();
    let (a, b, g, d, e) = (th("alpha"), th("beta"), th("gamma0"), th("delta0"), th("eps0"));
    let sum: Vec<i64> = (0..3).map(|i| a[i] + g[i]).collect();
    assert_eq!(e, sum, "θ(ε0) = θ(α) + θ(γ0)");
    let dd: Vec<i64> = (0..3).map(|i| a[i] + g[i] - b[i]).collect();
    assert_eq!(d, dd, "θ(δ0) = θ(α) + θ(γ0) − θ(β)");

    // Single arrow: H ≅ ℤ.
    let arrow = corpus_cat("single_arrow.cat");
    let h_arrow = compute_h(&arrow).unwrap();
    assert_eq!((h_arrow.rank, h_arrow.torsion.len()), (1, 0));
    assert_eq!(h_arrow.theta.value(arrow.by_name("a").unwrap()), &[1][..]);

    // Every corpus ψ factors through θ, uniquely (θ-values generate H).
    for (name, cat) in corpus_categories() {
        let h = compute_h(&cat).unwrap();
        let mut functors = vec![h.theta.clone(), DegreeFunctor::zero(&cat)];
        if let Some(psi) = two_graph_degree(&cat) {
            functors.push(psi);
        }
        for psi in functors {
            let hmap = factor_through_theta(&cat, &h, &psi)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            // Verified inside; shape sanity here.
            assert_eq!(hmap.len(), h.theta.width());
        }
        // Non-isotropy agrees with the groupoid oracle (finite categories
        // always pass both).
        assert!(matches!(is_non_isotropic(&cat, &h.theta), IsotropyVerdict::NonIsotropic));
    }
    println!("criterion 11 PASS: H(Λ) suite (ℤ³ for SQ1, ℤ for the arrow, factorizations)");
}

#[test]
fn ball_verdicts_on_presentation_corpus() {
    // FREE2: (a, v) is a generalized cycle with entrance b, within bound.
    let free2 = pathcat::io::load_presentation(&corpus("free2.pres")).unwrap();
    let ball = amalgamate(&free2.presentation, free2.bound).unwrap().ball;
    let a = (0..ball.len()).find(|&i| ball.display(i) == "a").unwrap();
    let b = (0..ball.len()).find(|&i| ball.display(i) == "b").unwrap();
    let unit = (0..ball.len()).find(|&i| ball.elements[i].rep.is_empty()).unwrap();
    // Extensions of a within the bound all meet the unit, and b witnesses the
    // entrance: a ⊥ b.
    assert!(ball.meets_bounded(a, unit).is_some());
    assert!(ball.meets_bounded(a, b).is_none());

    // FREE1: (a, v) has no entrance within bound: every extension meets a.
    let free1 = pathcat::io::load_presentation(&corpus("free1.pres")).unwrap();
    let ball1 = amalgamate(&free1.presentation, free1.bound).unwrap().ball;
    let a1 = (0..ball1.len()).find(|&i| ball1.display(i) == "a").unwrap();
    for i in 0..ball1.len() {
        if ball1.elements[i].rep.len() < ball1.bound as usize {
            assert!(
                ball1.meets_bounded(a1, i).is_some(),
                "every short element of FREE1 meets a"
            );
        }
    }

    // kgraph22 with equal weights is isotropic (commuting square pair cycle);
    // with the 2-graph weights it is non-isotropic within bound.
    let kg = pathcat::io::load_presentation(&corpus("kgraph22.pres")).unwrap();
    let ball = amalgamate(&kg.presentation, kg.bound).unwrap().ball;
    let glued = kg.presentation.glued().unwrap();
    let equal: Vec<Vec<i64>> =
        ball.elements.iter().map(|e| vec![e.rep.len() as i64]).collect();
    match ball_non_isotropic(&ball, &equal) {
        BallVerdict::FailsWith(_) => {}
        other => panic!("equal weights on the commuting square must be isotropic: {other:?}"),
    }
    let graded: Vec<Vec<i64>> = ball
        .elements
        .iter()
        .map(|e| {
            let mut v = vec![0i64, 0];
            for &g in &e.rep {
                match glued.generators[g].name.as_str() {
                    "a" => v[0] += 1,
                    _ => v[1] += 1,
                }
            }
            v
        })
        .collect();
    assert_eq!(ball_non_isotropic(&ball, &graded), BallVerdict::HoldsWithinBound(4));
    println!("ball verdicts PASS: free and k-graph presentation checks within bounds");
}
