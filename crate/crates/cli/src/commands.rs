use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use localcut::flow::{local_flow_meta, FlowImprove, LocalFlowImprove, Mqi};
use localcut::io::{load_edge_list, load_seed_set, read_vector_csv, write_result, write_vector_csv};
use localcut::oracles::{brute_min_conductance, brute_min_expansion, brute_min_phi_r};
use localcut::spectral::{fiedler_solve, l1_pagerank, spectral_mqi_solve, Mov};
use localcut::{
    sweep_cut, ClusterResult, EmbeddingVector, Error, Graph, LabelMap, NodeSet, ReferenceSet,
    SeedVector, SweepObjective,
};

use crate::{Cli, Command, ObjectiveArg, Options};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_DELTA: f64 = 1.0;
const MOV_CORRELATION_TOL: f64 = 1e-4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Convergence { .. } => EXIT_CONVERGENCE,
            Error::Degenerate(_)
            | Error::SeedTooLarge { .. }
            | Error::RhoOutOfRange { .. }
            | Error::UnattainableCorrelation { .. }
            | Error::UnboundedFlow
            | Error::Duality { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

type Outcome<T> = Result<T, Failure>;

fn objective(opts: &Options) -> SweepObjective {
    match opts.objective {
        ObjectiveArg::Conductance => SweepObjective::Conductance,
        ObjectiveArg::Expansion => SweepObjective::Expansion,
    }
}

fn tol(opts: &Options) -> f64 {
    opts.tol.unwrap_or(DEFAULT_TOL)
}

fn needs_seed(cmd: Command) -> bool {
    matches!(
        cmd,
        Command::Mqi
            | Command::FlowImprove
            | Command::LocalFlowImprove
            | Command::SpectralMqi
            | Command::Mov
            | Command::L1pr
    )
}

/// Checks flag combinations and parameter ranges without touching any file.
fn validate(cmd: Command, opts: &Options) -> Outcome<()> {
    if opts.graph.is_none() {
        return Err(usage("--graph is required"));
    }
    if opts.seed_set.is_some() && opts.seed_node.is_some() {
        return Err(usage("give either --seed-set or --seed-node, not both"));
    }
    if needs_seed(cmd) && opts.seed_set.is_none() && opts.seed_node.is_none() {
        return Err(usage("this command needs --seed-set or --seed-node"));
    }
    if let Some(t) = opts.tol {
        if !(t > 0.0) {
            return Err(usage(format!("--tol must be > 0, got {t}")));
        }
    }
    if opts.max_iters == 0 {
        return Err(usage("--max-iters must be positive"));
    }
    match cmd {
        Command::Sweep if opts.vector.is_none() => return Err(usage("sweep needs --vector")),
        Command::Eval if opts.set.is_none() => return Err(usage("eval needs --set")),
        Command::L1pr => {
            if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
                return Err(usage(format!("--alpha must lie in (0, 1), got {}", opts.alpha)));
            }
            if !(opts.epsilon > 0.0) || !opts.epsilon.is_finite() {
                return Err(usage(format!("--epsilon must be > 0, got {}", opts.epsilon)));
            }
        }
        Command::LocalFlowImprove => match (opts.delta, opts.kappa) {
            (Some(_), Some(_)) => return Err(usage("give either --delta or --kappa, not both")),
            (Some(d), None) if d.is_nan() || d < 0.0 => {
                return Err(usage(format!("--delta must be >= 0, got {d}")))
            }
            (None, Some(k)) if k.is_nan() || k < 1.0 => {
                return Err(usage(format!("--kappa must be >= 1, got {k}")))
            }
            _ => {}
        },
        Command::Mov => match (opts.rho, opts.corr) {
            (None, None) => return Err(usage("mov needs --rho or --corr")),
            (Some(_), Some(_)) => return Err(usage("give either --rho or --corr, not both")),
            (Some(r), None) if !r.is_finite() => return Err(usage(format!("--rho must be finite, got {r}"))),
            (None, Some(c)) if !(c > 0.0 && c <= 1.0) => {
                return Err(usage(format!("--corr must lie in (0, 1], got {c}")))
            }
            _ => {}
        },
        _ => {}
    }
    Ok(())
}

struct Job<'a> {
    opts: &'a Options,
    g: Graph,
    lm: LabelMap,
}

impl Job<'_> {
    fn seed_set(&self) -> Outcome<Option<NodeSet>> {
        if let Some(path) = &self.opts.seed_set {
            return Ok(Some(load_seed_set(path, &self.lm)?));
        }
        if let Some(label) = &self.opts.seed_node {
            return Ok(Some(NodeSet::new(vec![self.lm.resolve(label)?])));
        }
        Ok(None)
    }

    fn required_seed(&self) -> Outcome<NodeSet> {
        self.seed_set()?.ok_or_else(|| usage("missing seed"))
    }

    /// Either sweeps `x` or reports the solver value on an empty set.
    fn vector_result(
        &self,
        x: EmbeddingVector,
        value_name: &str,
        value: f64,
        restrict: bool,
    ) -> Outcome<ClusterResult> {
        let result = if self.opts.sweep {
            let obj = objective(self.opts);
            let sweep = sweep_cut(&self.g, &x, obj, restrict)?;
            ClusterResult::new(&self.g, sweep.set, obj.name(), sweep.value)?
        } else {
            ClusterResult::new(&self.g, NodeSet::empty(), value_name, value)?
        };
        Ok(result.with_extra(value_name, value).with_vector(x))
    }

    fn run(&self, cmd: Command) -> Outcome<ClusterResult> {
        let g = &self.g;
        let opts = self.opts;
        let n = g.num_nodes();
        let start = Instant::now();
        let result = match cmd {
            Command::Spectral => {
                let sol = fiedler_solve(g, !opts.unnormalized, tol(opts))?;
                self.vector_result(sol.vector, "lambda2", sol.value, false)?
                    .with_iterations(sol.matvecs)
                    .with_touched(n)
            }
            Command::Sweep => {
                let path = opts.vector.as_ref().expect("validated");
                let x = read_vector_csv(File::open(path)?, &self.lm)?;
                let dense = x.entries().len() == n;
                let obj = objective(opts);
                let sweep = sweep_cut(g, &x, obj, !dense)?;
                ClusterResult::new(g, sweep.set, obj.name(), sweep.value)?
                    .with_touched(sweep.profile.order.len())
            }
            Command::Mqi => {
                let r = self.required_seed()?;
                local_flow_meta(g, &r, &Mqi, opts.max_iters)?
            }
            Command::FlowImprove => {
                let r = self.required_seed()?;
                local_flow_meta(g, &r, &FlowImprove, opts.max_iters)?
            }
            Command::LocalFlowImprove => {
                let r = self.required_seed()?;
                let inst = match opts.kappa {
                    Some(k) => LocalFlowImprove::with_kappa(k)?,
                    None => LocalFlowImprove::with_delta(opts.delta.unwrap_or(DEFAULT_DELTA))?,
                };
                let seed = ReferenceSet::new(g, &r)?;
                let epsilon = inst.epsilon(&seed);
                local_flow_meta(g, &r, &inst, opts.max_iters)?
                    .with_extra("epsilon", epsilon)
                    .with_extra("kappa", epsilon / seed.theta)
            }
            Command::SpectralMqi => {
                let r = self.required_seed()?;
                let sol = spectral_mqi_solve(g, &r, tol(opts))?;
                self.vector_result(sol.vector, "lambda_r", sol.value, true)?
                    .with_iterations(sol.matvecs)
                    .with_touched(r.len())
            }
            Command::Mov => {
                let r = self.required_seed()?;
                let mut mov = Mov::new(g, &SeedVector::indicator(&r))?.with_solve_tol(tol(opts))?;
                let sol = match (opts.rho, opts.corr) {
                    (Some(rho), _) => mov.solve(rho)?,
                    (None, Some(kappa)) => mov.correlate(kappa, MOV_CORRELATION_TOL)?,
                    (None, None) => unreachable!("validated"),
                };
                self.vector_result(sol.x, "correlation", sol.correlation, false)?
                    .with_extra("rho", sol.rho)
                    .with_extra("residual", sol.residual)
                    .with_iterations(sol.matvecs)
                    .with_touched(n)
            }
            Command::L1pr => {
                let r = self.required_seed()?;
                let h = SeedVector::degree_weighted(g, &r)?;
                let sol = l1_pagerank(g, &h, opts.alpha, opts.epsilon, tol(opts))?;
                if opts.sweep && sol.x.support().is_empty() {
                    return Err(Error::Degenerate(format!(
                        "the l1-regularized PageRank solution is zero (epsilon = {} too large for the seed)",
                        opts.epsilon
                    ))
                    .into());
                }
                let objective_value = localcut::spectral::l1pr_objective(g, &h, opts.alpha, opts.epsilon, &sol.x);
                let support = sol.x.support().len() as f64;
                self.vector_result(sol.x, "l1pr_objective", objective_value, true)?
                    .with_extra("kkt_residual", sol.kkt_residual)
                    .with_extra("support_size", support)
                    .with_iterations(sol.updates)
                    .with_touched(sol.touched)
            }
            Command::Brute => {
                let (set, value, name) = match self.seed_set()? {
                    Some(r) => {
                        let (s, v) = brute_min_phi_r(g, &r)?;
                        (s, v, "phi_r")
                    }
                    None => match objective(opts) {
                        SweepObjective::Conductance => {
                            let (s, v) = brute_min_conductance(g)?;
                            (s, v, "conductance")
                        }
                        SweepObjective::Expansion => {
                            let (s, v) = brute_min_expansion(g)?;
                            (s, v, "expansion")
                        }
                    },
                };
                ClusterResult::new(g, set, name, value)?.with_touched(n)
            }
            Command::Eval => {
                let path = opts.set.as_ref().expect("validated");
                let s = load_seed_set(path, &self.lm)?;
                let obj = objective(opts);
                let stats = g.stats(&s)?;
                let value = obj.evaluate(&stats, g.total_volume());
                let mut result = ClusterResult::new(g, s.clone(), obj.name(), value)?
                    .with_extra("expansion", stats.expansion(g.total_volume()))
                    .with_touched(s.len());
                if let Some(r) = self.seed_set()? {
                    result = result.with_extra("phi_r", g.phi_r(&s, &r)?);
                }
                result
            }
        };
        Ok(result.with_runtime(start.elapsed()))
    }
}

fn create(path: &std::path::Path) -> Outcome<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn run(cli: &Cli) -> Outcome<()> {
    let opts = &cli.opts;
    validate(cli.command, opts)?;
    let path = opts.graph.as_ref().expect("validated");
    let (g, lm) = load_edge_list(path)?;
    log::info!("loaded {} nodes and {} edges", g.num_nodes(), g.num_edges());
    let job = Job { opts, g, lm };
    let result = job.run(cli.command)?;

    if let Some(path) = &opts.vector_out {
        match &result.vector {
            Some(x) => {
                let mut w = create(path)?;
                write_vector_csv(x, &job.lm, &mut w)?;
                w.flush()?;
            }
            None => log::warn!("this command produces no vector; --vector-out ignored"),
        }
    }
    match &opts.out {
        Some(path) => {
            let mut w = create(path)?;
            write_result(&result, &job.lm, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_result(&result, &job.lm, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
