use localcut::generators;
use localcut::oracles::{
    brute_min_phi_r, brute_min_subset_ratio, dense_eig_smallest, dense_l1pr, dense_pinv_solve,
    DenseMatrix,
};
use localcut::spectral::{l1_pagerank, mov_correlate, mov_solve, spectral_mqi, Mov};
use localcut::{
    flow_improve, l1pr_cluster, local_flow_improve, mqi, Error, Graph, NodeSet, SeedVector,
};

fn set(ids: &[usize]) -> NodeSet {
    NodeSet::new(ids.to_vec())
}

#[test]
fn flow_methods_on_the_dumbbell() {
    let g = generators::dumbbell();
    let r = set(&[0, 1, 2, 3]);
    for out in [
        mqi(&g, &r).unwrap(),
        flow_improve(&g, &r).unwrap(),
        local_flow_improve(&g, &r, 0.0).unwrap(),
        local_flow_improve(&g, &r, 1e9).unwrap(),
    ] {
        assert_eq!(out.set, set(&[0, 1, 2]));
        assert!((out.conductance - 1.0 / 7.0).abs() < 1e-12);
    }
}

#[test]
fn planted_clique_is_a_fixed_point() {
    let g = generators::clique_ring(20, 10);
    let r = generators::ring_clique(3, 10);
    let m = mqi(&g, &r).unwrap();
    assert_eq!(m.set, r);
    assert_eq!(m.iterations, 1);
    assert_eq!(flow_improve(&g, &r).unwrap().set, r);
    let lfi = local_flow_improve(&g, &r, 0.5).unwrap();
    let bound = localcut::flow::lfi_volume_bound(&g, &r, 0.5).unwrap();
    assert!(lfi.volume <= bound);
}

#[test]
fn singleton_seed() {
    let g = generators::dumbbell();
    let out = mqi(&g, &set(&[4])).unwrap();
    assert_eq!(out.set, set(&[4]));
    assert_eq!(out.objective, 1.0);
}

#[test]
fn flow_methods_agree_with_oracles_on_random_graphs() {
    for seed in 0..25 {
        let g = generators::random_connected(10, 0.3, seed);
        let r = generators::random_seed_set(&g, seed + 100);
        let m = mqi(&g, &r).unwrap();
        let (_, best) = brute_min_subset_ratio(&g, &r).unwrap();
        assert!((m.objective - best).abs() <= 1e-9 * best, "seed {seed}");
        assert!(m.set.is_subset(&r));
        let f = flow_improve(&g, &r).unwrap();
        let (_, best) = brute_min_phi_r(&g, &r).unwrap();
        assert!((f.objective - best).abs() <= 1e-9 * best, "seed {seed}");
    }
}

#[test]
fn dirichlet_eigenpair_on_dumbbell_half() {
    let g = generators::dumbbell();
    let r = set(&[0, 1, 2]);
    let (lambda, _) = spectral_mqi(&g, &r, 1e-12).unwrap();
    let sub = DenseMatrix::normalized_laplacian(&g).unwrap().principal_submatrix(r.as_slice());
    let (dense, _) = dense_eig_smallest(&sub, None).unwrap();
    assert!((lambda - dense).abs() < 1e-10);
}

fn eight_node_graph() -> Graph {
    generators::random_connected(8, 0.35, 42)
}

#[test]
fn mov_matches_dense_pseudo_inverse() {
    let g = eight_node_graph();
    let z = SeedVector::single(2);
    let mov = Mov::new(&g, &z).unwrap();
    let dz: Vec<f64> = mov.seed().iter().zip(g.degrees()).map(|(a, d)| a * d).collect();
    for rho in [0.3, 0.0] {
        let x = mov_solve(&g, &z, rho, 1e-12).unwrap().to_dense();
        let m = DenseMatrix::shifted_laplacian(&g, rho).unwrap();
        let mut reference = dense_pinv_solve(&m, &dz).unwrap();
        // the pseudo-inverse answer is orthogonal to 1, ours to D1
        let shift = reference.iter().zip(g.degrees()).map(|(a, d)| a * d).sum::<f64>() / g.total_volume();
        reference.iter_mut().for_each(|v| *v -= shift);
        let nrm = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
        for i in 0..8 {
            assert!((x[i] - reference[i] / nrm).abs() < 1e-8, "rho {rho}");
        }
    }
}

#[test]
fn mov_correlation_targets() {
    let g = eight_node_graph();
    let z = SeedVector::single(5);
    let (x, rho) = mov_correlate(&g, &z, 1.0, 1e-4).unwrap();
    assert!(rho > 10.0);
    let mov = Mov::new(&g, &z).unwrap();
    assert!(mov.correlation(&x.to_dense()) >= 1.0 - 1e-4);

    let mut mov = Mov::new(&g, &z).unwrap();
    let l2 = mov.lambda2().unwrap();
    let low = mov.solve(-l2 * (1.0 - 1e-6)).unwrap().correlation;
    if low < 0.5 {
        let sol = mov.correlate(0.5, 1e-4).unwrap();
        assert!((sol.correlation - 0.5).abs() <= 1e-4);
    }
    let sol = mov.correlate(low + 1e-3, 1e-4).unwrap();
    assert!(sol.rho < 0.0);
    assert!(matches!(
        mov.correlate(low * 0.5, 1e-4),
        Err(Error::UnattainableCorrelation { .. })
    ));
}

#[test]
fn l1pr_matches_dense_oracle() {
    let g = generators::random_connected(30, 0.1, 9);
    let h = SeedVector::single(11);
    let sol = l1_pagerank(&g, &h, 0.15, 1e-4, 1e-12).unwrap();
    let dense = dense_l1pr(&g, &h, 0.15, 1e-4).unwrap();
    for (i, v) in dense.iter().enumerate() {
        assert!((sol.x.get(i) - v).abs() < 1e-6);
    }
}

#[test]
fn l1pr_cluster_recovers_planted_clique() {
    let g = generators::clique_ring(20, 10);
    let clique = generators::ring_clique(12, 10);
    let out = l1pr_cluster(&g, &SeedVector::single(clique.as_slice()[3]), 0.15, 1e-4).unwrap();
    assert_eq!(out.set, clique);
    assert!((out.conductance - 2.0 / 92.0).abs() < 1e-12);
    assert_eq!(out.conductance, g.conductance(&out.set).unwrap());
    assert!(out.touched_nodes < 60);
}
