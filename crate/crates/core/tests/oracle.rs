use noisy_cluster::decoder::{decode, extract_syndrome, plane_parities, ErrorChain};
use noisy_cluster::lattice::{classify_site, LatticeSpec, Sector, SectorGraph, Site};
use noisy_cluster::stabilizer::{
    apply_z_error, check_constraints, default_order, init_cluster_state, lambda_p_formula,
    lambda_s_formula, lambda_xx_formula, lambda_zz_formula, logical_xx, logical_zz, replay_pattern,
    run_pattern, run_pattern_ordered, PatternRun,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Split {
    to: ErrorChain,
    te: ErrorChain,
    face_te: Vec<Site>,
}

fn split(errors: &[Site], to: &SectorGraph, te: &SectorGraph) -> Split {
    let mut out = Split {
        to: ErrorChain::empty(to.num_edges()),
        te: ErrorChain::empty(te.num_edges()),
        face_te: Vec::new(),
    };
    for &u in errors {
        if let Some(e) = to.edge_of(u) {
            out.to.toggle(e);
        } else if let Some(e) = te.edge_of(u) {
            if te.edge(e).excluded {
                out.face_te.push(u);
            } else {
                out.te.toggle(e);
            }
        }
    }
    out
}

fn random_errors(spec: &LatticeSpec, rng: &mut ChaCha8Rng) -> Vec<Site> {
    let rate = rng.random_range(0.02..0.3);
    spec.sites().filter(|_| rng.random_bool(rate)).collect()
}

fn noisy_run(spec: &LatticeSpec, errors: &[Site], seed: u64) -> PatternRun {
    let mut t = init_cluster_state(spec).unwrap();
    for &u in errors {
        apply_z_error(&mut t, spec, u).unwrap();
    }
    run_pattern(t, spec, seed).unwrap()
}

fn check_specs() -> Vec<LatticeSpec> {
    vec![
        LatticeSpec::planar(3, 3).unwrap(),
        LatticeSpec::planar(5, 3).unwrap(),
        LatticeSpec::planar(3, 5).unwrap(),
    ]
}

#[test]
fn error_free_branches_satisfy_everything() {
    for spec in check_specs() {
        for seed in 0..40 {
            let run = noisy_run(&spec, &[], seed);
            let rec = &run.record;
            assert!(check_constraints(rec).all_satisfied(), "{spec} seed {seed}");
            for &(u, v) in &rec.lambda_p {
                assert_eq!(v, lambda_p_formula(rec, u));
            }
            for &(u, v) in &rec.lambda_s {
                assert_eq!(v, lambda_s_formula(rec, u));
            }
            for u2 in (0..spec.l() as i32).step_by(2) {
                let xx = run.eigenvalue(&logical_xx(&spec, u2).unwrap());
                assert_eq!(xx, Some(lambda_xx_formula(rec, u2)));
            }
            for u1 in (1..=spec.l() as i32).step_by(2) {
                let zz = run.eigenvalue(&logical_zz(&spec, u1).unwrap());
                assert_eq!(zz, Some(lambda_zz_formula(rec, u1)));
            }
        }
    }
}

#[test]
fn injected_errors_match_chain_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in check_specs() {
        let to = SectorGraph::build(&spec, Sector::To);
        let te = SectorGraph::build(&spec, Sector::Te);
        for trial in 0..200 {
            let errors = random_errors(&spec, &mut rng);
            let run = noisy_run(&spec, &errors, trial);
            let report = check_constraints(&run.record);
            let parts = split(&errors, &to, &te);
            assert_eq!(report.to, extract_syndrome(&parts.to, &to));
            assert_eq!(report.te, extract_syndrome(&parts.te, &te));
            for (u, bit) in &report.sy5 {
                assert_eq!(*bit, parts.face_te.contains(u), "Sy5 at {u}");
            }

            let rec = &run.record;
            let xx = run.eigenvalue(&logical_xx(&spec, 0).unwrap()).unwrap();
            let zz = run.eigenvalue(&logical_zz(&spec, 1).unwrap()).unwrap();
            let xx_flip = plane_parities(&parts.to, &to)[0];
            let zz_flip = plane_parities(&parts.te, &te)[0];
            assert_eq!(xx != lambda_xx_formula(rec, 0), xx_flip);
            assert_eq!(zz != lambda_zz_formula(rec, 1), zz_flip);

            // after decoding, the corrected correlator is wrong iff the
            // residual cycle is nontrivial
            for (chain, graph, value, formula) in [
                (&parts.to, &to, xx, lambda_xx_formula(rec, 0)),
                (&parts.te, &te, zz, lambda_zz_formula(rec, 1)),
            ] {
                let out = decode(chain, graph).unwrap();
                let c_flip = plane_parities(&out.correction.chain, graph)[0];
                let corrected = if c_flip { -formula } else { formula };
                assert_eq!(corrected != value, out.residual_nontrivial);
            }
        }
    }
}

#[test]
fn single_error_examples() {
    let spec = LatticeSpec::planar(3, 3).unwrap();
    let te = SectorGraph::build(&spec, Sector::Te);

    let run = noisy_run(&spec, &[Site::new(1, 2, 2)], 5);
    let report = check_constraints(&run.record);
    assert!(report.to.is_trivial());
    let v = te.vertex_of(Site::new(2, 2, 2)).unwrap();
    assert_eq!(report.te.defects(), vec![v]);
    assert!(report.sy5.iter().all(|(_, b)| !b));

    let run = noisy_run(&spec, &[Site::new(2, 2, 1)], 5);
    let report = check_constraints(&run.record);
    assert!(report.to.is_trivial() && report.te.is_trivial());
    let flagged: Vec<Site> = report
        .sy5
        .iter()
        .filter(|(_, b)| *b)
        .map(|(u, _)| *u)
        .collect();
    assert_eq!(flagged, vec![Site::new(2, 2, 1)]);
}

#[test]
fn measurement_order_does_not_matter() {
    let spec = LatticeSpec::planar(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for seed in 0..30 {
        let errors = random_errors(&spec, &mut rng);
        let mut t = init_cluster_state(&spec).unwrap();
        for &u in &errors {
            apply_z_error(&mut t, &spec, u).unwrap();
        }
        let first = run_pattern(t.clone(), &spec, seed).unwrap();
        let mut order = default_order(&spec);
        order.shuffle(&mut rng);
        let again = replay_pattern(t.clone(), &spec, &order, &first.record).unwrap();
        assert_eq!(again.record, first.record);
        assert_eq!(
            check_constraints(&again.record),
            check_constraints(&first.record)
        );
        // syndromes depend on the errors only, not on the branch
        let other = run_pattern_ordered(t, &spec, seed + 1000, &order).unwrap();
        assert_eq!(
            check_constraints(&other.record),
            check_constraints(&first.record)
        );
    }
}

#[test]
fn outcome_frequencies_are_order_independent() {
    // the marginal of every random outcome is uniform under both orders
    let spec = LatticeSpec::planar(3, 3).unwrap();
    let mut order = default_order(&spec);
    order.reverse();
    let runs = 400;
    let mut minus = [
        vec![0usize; spec.num_sites()],
        vec![0usize; spec.num_sites()],
    ];
    for seed in 0..runs {
        let t = init_cluster_state(&spec).unwrap();
        let a = run_pattern(t.clone(), &spec, seed).unwrap();
        let b = run_pattern_ordered(t, &spec, seed, &order).unwrap();
        for (k, run) in [a, b].iter().enumerate() {
            for (q, o) in run.record.outcomes.iter().enumerate() {
                if *o == Some(-1) {
                    minus[k][q] += 1;
                }
            }
        }
    }
    for q in 0..spec.num_sites() {
        if classify_site(spec.site_at(q), &spec).unwrap().basis
            == noisy_cluster::lattice::Basis::Unmeasured
        {
            continue;
        }
        for counts in &minus {
            let f = counts[q] as f64 / runs as f64;
            // every single outcome of the pattern is uniformly random
            assert!((f - 0.5).abs() < 0.1, "site {q}: {f}");
        }
    }
}
