//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use localcut::flow::{lfi_volume_bound, run_meta, FlowImprove, LocalFlowImprove, MetaInstantiation, Mqi};
use localcut::generators;
use localcut::oracles::{
    brute_min_conductance, brute_min_cut, brute_min_phi_r, brute_min_subset_ratio, dense_fiedler,
    dense_l1pr, dense_solve, DenseMatrix,
};
use localcut::refcut::{materialize, AugmentedGraphSpec};
use localcut::spectral::{fiedler, l1_pagerank_with, l1pr_cluster, Mov, UpdateOrder};
use localcut::{
    flow_improve, local_flow_improve, mqi, solve_maxflow, sweep_cut, Graph, NodeSet, SeedVector,
    SweepObjective,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 200;
const CORPUS_SEED: u64 = 20_240_601;
const ORACLE_REL_TOL: f64 = 1e-9;
const DUALITY_REL_TOL: f64 = 1e-9;
const CHEEGER_SLACK: f64 = 1e-9;
const MQI_FI_TIME_LIMIT: Duration = Duration::from_secs(60);
const LIMIT_INSTANCES: usize = 50;
const LFI_MQI_DELTA: f64 = 1e9;
const KKT_TOL: f64 = 1e-6;
const L1PR_ORACLE_TOL: f64 = 1e-6;
const L1PR_ORDER_TOL: f64 = 1e-8;
const L1PR_SOLVER_TOL: f64 = 1e-12;
const RING_CLIQUES: usize = 10_000;
const RING_CLIQUE_SIZE: usize = 10;
const LOCALITY_FRACTION: f64 = 0.05;
const LOCALITY_TIME_LIMIT: Duration = Duration::from_secs(5);
const LFI_RING_DELTA: f64 = 1.0;
const META_MAX_ITERS: usize = 50;
const MOV_RESIDUAL_TOL: f64 = 1e-10;
const MOV_ORACLE_TOL: f64 = 1e-8;
const MOV_CORRELATION_TOL: f64 = 1e-4;
const MOV_FIEDLER_COSINE: f64 = 0.999;

type Outcome = Result<String, String>;

struct Case {
    g: Graph,
    r: NodeSet,
}

fn corpus() -> Vec<Case> {
    generators::small_corpus(CORPUS_SIZE, 6, 12, CORPUS_SEED)
        .into_iter()
        .enumerate()
        .map(|(k, g)| {
            let r = generators::random_seed_set(&g, CORPUS_SEED + k as u64);
            Case { g, r }
        })
        .collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn err<E: std::fmt::Debug>(k: usize) -> impl Fn(E) -> String {
    move |e| format!("instance {k}: {e:?}")
}

fn mqi_optimality(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    for (k, c) in cases.iter().enumerate() {
        let out = mqi(&c.g, &c.r).map_err(err(k))?;
        let (_, best) = brute_min_subset_ratio(&c.g, &c.r).map_err(err(k))?;
        let stats = c.g.stats(&out.set).map_err(err(k))?;
        let ratio = stats.cut / stats.volume;
        if !out.set.is_subset(&c.r) || !rel_close(ratio, best, ORACLE_REL_TOL) {
            return Err(format!("instance {k}: mqi ratio {ratio} vs oracle {best}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > MQI_FI_TIME_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} instances match the oracle in {elapsed:.2?}", cases.len()))
}

fn flow_improve_optimality(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    for (k, c) in cases.iter().enumerate() {
        let out = flow_improve(&c.g, &c.r).map_err(err(k))?;
        let (_, best) = brute_min_phi_r(&c.g, &c.r).map_err(err(k))?;
        let value = c.g.phi_r(&out.set, &c.r).map_err(err(k))?;
        if !rel_close(value, best, ORACLE_REL_TOL) {
            return Err(format!("instance {k}: phi_R {value} vs oracle {best}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > MQI_FI_TIME_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} instances match the oracle in {elapsed:.2?}", cases.len()))
}

fn maxflow_duality(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 3);
    for (k, c) in cases.iter().enumerate() {
        let alpha = rng.random_range(0.05..3.0);
        let beta = if k % 5 == 0 { f64::INFINITY } else { rng.random_range(0.05..3.0) };
        let gamma = rng.random_range(0.2..2.0);
        let spec = AugmentedGraphSpec::from_seed(&c.g, &c.r, alpha, beta, gamma).map_err(err(k))?;
        let net = materialize(&spec, &c.g);
        // solve_maxflow itself rejects any solve whose flow and cut disagree
        let sol = solve_maxflow(&net).map_err(err(k))?;
        let cut = net.cut_capacity(&sol.s_side);
        let (_, brute) = brute_min_cut(&net).map_err(err(k))?;
        if !rel_close(sol.flow_value, cut, DUALITY_REL_TOL) || !rel_close(sol.flow_value, brute, DUALITY_REL_TOL) {
            return Err(format!(
                "instance {k}: flow {} cut {cut} brute {brute}",
                sol.flow_value
            ));
        }
    }
    Ok(format!("{} networks: flow = cut = brute-force minimum", cases.len()))
}

fn cheeger(cases: &[Case]) -> Outcome {
    let mut tightest = f64::INFINITY;
    for (k, c) in cases.iter().enumerate() {
        let (lambda2, x) = fiedler(&c.g, true, 1e-10).map_err(err(k))?;
        let (dense, _) = dense_fiedler(&c.g, true).map_err(err(k))?;
        if (lambda2 - dense).abs() > 1e-8 {
            return Err(format!("instance {k}: lambda2 {lambda2} vs dense {dense}"));
        }
        let (_, phi) = brute_min_conductance(&c.g).map_err(err(k))?;
        let upper = (2.0 * lambda2).sqrt();
        let sweep = sweep_cut(&c.g, &x, SweepObjective::Conductance, false).map_err(err(k))?;
        if lambda2 / 2.0 > phi + CHEEGER_SLACK || phi > upper + CHEEGER_SLACK || sweep.value > upper + CHEEGER_SLACK {
            return Err(format!(
                "instance {k}: lambda2 {lambda2}, phi {phi}, sweep {}",
                sweep.value
            ));
        }
        tightest = tightest.min(upper - sweep.value);
    }
    Ok(format!("0 violations on {} graphs (smallest sweep slack {tightest:.3e})", cases.len()))
}

fn lfi_volume(cases: &[Case], ring: &Graph) -> Outcome {
    let mut runs = 0;
    for (k, c) in cases.iter().enumerate() {
        for delta in [0.0, 0.1, 1.0, 10.0] {
            let out = local_flow_improve(&c.g, &c.r, delta).map_err(err(k))?;
            let bound = lfi_volume_bound(&c.g, &c.r, delta).map_err(err(k))?;
            if out.volume > bound {
                return Err(format!("instance {k}, delta {delta}: vol {} > {bound}", out.volume));
            }
            runs += 1;
        }
    }
    let r = ring_seed(ring);
    for delta in [0.1, LFI_RING_DELTA, 10.0] {
        let out = local_flow_improve(ring, &r, delta).map_err(err(usize::MAX))?;
        let bound = lfi_volume_bound(ring, &r, delta).map_err(err(usize::MAX))?;
        if out.volume > bound {
            return Err(format!("clique ring, delta {delta}: vol {} > {bound}", out.volume));
        }
        runs += 1;
    }
    Ok(format!("0 violations in {runs} runs"))
}

fn lfi_limits(cases: &[Case]) -> Outcome {
    for (k, c) in cases.iter().take(LIMIT_INSTANCES).enumerate() {
        let fi = flow_improve(&c.g, &c.r).map_err(err(k))?;
        let lfi0 = local_flow_improve(&c.g, &c.r, 0.0).map_err(err(k))?;
        if fi.set != lfi0.set {
            return Err(format!("instance {k}: delta=0 gives {:?}, flow-improve {:?}", lfi0.set, fi.set));
        }
        let m = mqi(&c.g, &c.r).map_err(err(k))?;
        let lfi_inf = local_flow_improve(&c.g, &c.r, LFI_MQI_DELTA).map_err(err(k))?;
        if m.set != lfi_inf.set {
            return Err(format!("instance {k}: delta=1e9 gives {:?}, mqi {:?}", lfi_inf.set, m.set));
        }
    }
    Ok(format!("both limits agree on {LIMIT_INSTANCES} instances"))
}

fn l1pr_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 7);
    let mut worst_kkt = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut worst_order = 0.0f64;
    let runs = 40;
    for k in 0..runs {
        let n = rng.random_range(10..=50);
        let g = generators::random_connected(n, rng.random_range(0.05..0.3), rng.random());
        let h = if k % 2 == 0 {
            SeedVector::single(rng.random_range(0..n))
        } else {
            let r = generators::random_seed_set(&g, rng.random());
            SeedVector::degree_weighted(&g, &r).map_err(err(k))?
        };
        let alpha = [0.05, 0.15, 0.5][k % 3];
        let epsilon = [1e-4, 1e-3, 1e-2][(k / 3) % 3];
        let fifo = l1_pagerank_with(&g, &h, alpha, epsilon, L1PR_SOLVER_TOL, UpdateOrder::Fifo).map_err(err(k))?;
        let jacobi =
            l1_pagerank_with(&g, &h, alpha, epsilon, L1PR_SOLVER_TOL, UpdateOrder::Jacobi).map_err(err(k))?;
        let dense = dense_l1pr(&g, &h, alpha, epsilon).map_err(err(k))?;
        worst_kkt = worst_kkt.max(fifo.kkt_residual).max(jacobi.kkt_residual);
        for i in 0..n {
            worst_oracle = worst_oracle.max((fifo.x.get(i) - dense[i]).abs());
            worst_order = worst_order.max((fifo.x.get(i) - jacobi.x.get(i)).abs());
        }
        if fifo.x.entries().iter().any(|&(_, v)| v < 0.0) {
            return Err(format!("instance {k}: negative entry"));
        }
    }
    let detail = format!(
        "{runs} runs: max KKT {worst_kkt:.1e}, max oracle gap {worst_oracle:.1e}, max order gap {worst_order:.1e}"
    );
    if worst_kkt <= KKT_TOL && worst_oracle <= L1PR_ORACLE_TOL && worst_order <= L1PR_ORDER_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ring_seed(ring: &Graph) -> NodeSet {
    // one clique plus the bridge endpoints of its two neighbors
    let k = RING_CLIQUES / 2;
    let clique = generators::ring_clique(k, RING_CLIQUE_SIZE);
    let extra: NodeSet = clique
        .iter()
        .flat_map(|v| ring.neighbor_ids(v).to_vec())
        .collect();
    clique.union(&extra)
}

fn strong_locality(ring: &Graph) -> Outcome {
    let n = ring.num_nodes();
    let k = RING_CLIQUES / 2;
    let clique = generators::ring_clique(k, RING_CLIQUE_SIZE);
    let seed = clique.as_slice()[RING_CLIQUE_SIZE / 2];

    let start = Instant::now();
    let l1 = l1pr_cluster(ring, &SeedVector::single(seed), 0.15, 1e-4).map_err(err(0))?;
    let l1_time = start.elapsed();
    let expected = 2.0 / 92.0;
    if l1.set != clique || (l1.conductance - expected).abs() > 1e-12 {
        return Err(format!("l1pr found {:?} with conductance {}", l1.set, l1.conductance));
    }
    if l1.touched_nodes as f64 >= LOCALITY_FRACTION * n as f64 || l1_time > LOCALITY_TIME_LIMIT {
        return Err(format!("l1pr touched {} in {l1_time:?}", l1.touched_nodes));
    }

    let r = ring_seed(ring);
    let start = Instant::now();
    let lfi = local_flow_improve(ring, &r, LFI_RING_DELTA).map_err(err(0))?;
    let lfi_time = start.elapsed();
    if lfi.touched_nodes as f64 >= LOCALITY_FRACTION * n as f64 || lfi_time > LOCALITY_TIME_LIMIT {
        return Err(format!("local-flow-improve touched {} in {lfi_time:?}", lfi.touched_nodes));
    }
    Ok(format!(
        "n = {n}: l1pr touched {} in {l1_time:.2?} (conductance {:.6}), local-flow-improve touched {} in {lfi_time:.2?}",
        l1.touched_nodes, l1.conductance, lfi.touched_nodes
    ))
}

fn meta_behavior(cases: &[Case]) -> Outcome {
    let lfi = LocalFlowImprove::with_delta(0.5).map_err(err(0))?;
    let insts: [&dyn MetaInstantiation; 3] = [&Mqi, &FlowImprove, &lfi];
    let mut most = 0;
    for (k, c) in cases.iter().enumerate() {
        for inst in insts {
            let run = run_meta(&c.g, &c.r, inst, 1_000).map_err(err(k))?;
            if !run.converged {
                return Err(format!("instance {k}: {} did not terminate", inst.name()));
            }
            if run.trace.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(format!("instance {k}: {} trace {:?}", inst.name(), run.trace));
            }
            if run.result.iterations > META_MAX_ITERS {
                return Err(format!("instance {k}: {} used {} iterations", inst.name(), run.result.iterations));
            }
            most = most.max(run.result.iterations);
        }
    }
    Ok(format!("{} runs strictly decreasing and terminated; most iterations {most}", 3 * cases.len()))
}

fn mov_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 11);
    let mut worst_residual = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut worst_corr = 0.0f64;
    let mut worst_cos = 1.0f64;
    let runs = 20;
    for k in 0..runs {
        let n = rng.random_range(8..=64);
        let g = generators::random_connected(n, rng.random_range(0.05..0.3), rng.random());
        let z = SeedVector::single(rng.random_range(0..n));
        let mut mov = Mov::new(&g, &z).map_err(err(k))?;
        let lambda2 = mov.lambda2().map_err(err(k))?;
        let dz: Vec<f64> = mov.seed().iter().zip(g.degrees()).map(|(a, d)| a * d).collect();

        for rho in [0.3, 1.0, -0.5 * lambda2] {
            let sol = mov.solve(rho).map_err(err(k))?;
            worst_residual = worst_residual.max(sol.residual);
            let m = DenseMatrix::shifted_laplacian(&g, rho).map_err(err(k))?;
            let mut reference = dense_solve(&m, &dz).map_err(err(k))?;
            let nrm = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
            reference.iter_mut().for_each(|v| *v /= nrm);
            let x = sol.x.to_dense();
            for i in 0..n {
                worst_oracle = worst_oracle.max((x[i] - reference[i]).abs());
            }
        }

        let low = mov.solve(-lambda2 * (1.0 - 1e-6)).map_err(err(k))?.correlation;
        for fraction in [0.25, 0.5, 0.75] {
            let kappa = low + fraction * (1.0 - low);
            let sol = mov.correlate(kappa, MOV_CORRELATION_TOL).map_err(err(k))?;
            worst_corr = worst_corr.max((sol.correlation - kappa).abs());
        }

        let near = mov.solve(-lambda2 + 1e-6).map_err(err(k))?.x.to_dense();
        let (_, f) = fiedler(&g, true, 1e-10).map_err(err(k))?;
        let cos: f64 = near.iter().zip(f.to_dense()).map(|(a, b)| a * b).sum::<f64>().abs();
        worst_cos = worst_cos.min(cos);
    }
    let detail = format!(
        "{runs} graphs: max residual {worst_residual:.1e}, max oracle gap {worst_oracle:.1e}, \
         max correlation gap {worst_corr:.1e}, min Fiedler cosine {worst_cos:.6}"
    );
    if worst_residual <= MOV_RESIDUAL_TOL
        && worst_oracle <= MOV_ORACLE_TOL
        && worst_corr <= MOV_CORRELATION_TOL
        && worst_cos >= MOV_FIEDLER_COSINE
    {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let cases = corpus();
    let ring = generators::clique_ring(RING_CLIQUES, RING_CLIQUE_SIZE);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("MQI matches exhaustive subset search", Box::new(|| mqi_optimality(&cases))),
        ("Flow-Improve matches exhaustive phi_R search", Box::new(|| flow_improve_optimality(&cases))),
        ("max-flow duality and brute-force min cut", Box::new(|| maxflow_duality(&cases))),
        ("Cheeger inequality and Fiedler sweep", Box::new(|| cheeger(&cases))),
        ("Local-Flow-Improve volume bound", Box::new(|| lfi_volume(&cases, &ring))),
        ("Local-Flow-Improve limits", Box::new(|| lfi_limits(&cases))),
        ("l1-regularized PageRank correctness", Box::new(l1pr_correctness)),
        ("strong locality on a 10^5-node clique ring", Box::new(|| strong_locality(&ring))),
        ("meta-algorithm monotonicity and termination", Box::new(|| meta_behavior(&cases))),
        ("MOV solves, bisection and Fiedler limit", Box::new(mov_checks)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
