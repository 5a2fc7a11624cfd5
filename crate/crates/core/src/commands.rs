//! The six CLI commands as library calls producing a [`Report`].
//!
//! Rows are computed in parallel where independent and always assembled in
//! `(delta, n)` order.

use std::time::Instant;

use rayon::prelude::*;

use crate::analysis::{critical_delta, dlambda_identity_check, lebesgue_quantity, lebesgue_sup, convergence_experiment};
use crate::config::{Resolved, RunConfig};
use crate::cylinder::CylinderKernel;
use crate::error::Result;
use crate::orthopoly::CesaroPlan;
use crate::report::{Report, Row, FLAG_FAIL, FLAG_PASS};
use crate::verify::run_checks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Bound,
    Verify,
    Kernel,
    Lebesgue,
    Converge,
    Dlambda,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Verify => "verify",
            Command::Kernel => "kernel",
            Command::Lebesgue => "lebesgue",
            Command::Converge => "converge",
            Command::Dlambda => "dlambda",
        }
    }
}

/// Validates the config, then runs `command`.
pub fn run(command: Command, config: &RunConfig) -> Result<Report> {
    let resolved = config.resolve()?;
    let rows = match command {
        Command::Bound => bound_rows(&resolved),
        Command::Verify => verify_rows(config, &resolved)?,
        Command::Kernel => kernel_rows(config, &resolved)?,
        Command::Lebesgue => lebesgue_rows(config, &resolved)?,
        Command::Converge => converge_rows(config, &resolved)?,
        Command::Dlambda => dlambda_rows(config, &resolved)?,
    };
    Ok(Report::new(command.name(), config, rows))
}

pub fn cmd_bound(config: &RunConfig) -> Result<Report> {
    run(Command::Bound, config)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Report> {
    run(Command::Verify, config)
}

pub fn cmd_kernel(config: &RunConfig) -> Result<Report> {
    run(Command::Kernel, config)
}

pub fn cmd_lebesgue(config: &RunConfig) -> Result<Report> {
    run(Command::Lebesgue, config)
}

pub fn cmd_converge(config: &RunConfig) -> Result<Report> {
    run(Command::Converge, config)
}

pub fn cmd_dlambda(config: &RunConfig) -> Result<Report> {
    run(Command::Dlambda, config)
}

/// All `(delta, n)` pairs, `delta` outer, both ascending.
fn grid_pairs(config: &RunConfig) -> Vec<(f64, usize)> {
    let mut deltas = config.delta_list.clone();
    deltas.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));
    deltas.dedup();
    let mut ns = config.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    deltas.iter().flat_map(|&d| ns.iter().map(move |&n| (d, n))).collect()
}

fn bound_rows(r: &Resolved) -> Vec<Row> {
    let start = Instant::now();
    let rep = critical_delta(&r.space);
    let secs = start.elapsed().as_secs_f64();
    let warn = rep.warnings.join("; ");
    vec![
        Row::new("bound", &r.space, "first_term", rep.first_term).timed(secs),
        Row::new("bound", &r.space, "second_term", rep.second_term).timed(secs),
        Row::new("bound", &r.space, "bound", rep.bound).flagged(warn).timed(secs),
    ]
}

fn verify_rows(config: &RunConfig, r: &Resolved) -> Result<Vec<Row>> {
    let results = run_checks(&config.checks, config.perturb_basis)?;
    Ok(results
        .into_iter()
        .map(|c| {
            let flag = if c.passed() { FLAG_PASS } else { FLAG_FAIL };
            Row::new("verify", &r.space, c.check.name(), c.max_deviation).flagged(flag).timed(c.seconds)
        })
        .collect())
}

fn kernel_rows(config: &RunConfig, r: &Resolved) -> Result<Vec<Row>> {
    let pairs = grid_pairs(config);
    let chunks: Vec<Vec<Row>> = pairs
        .par_iter()
        .map(|&(delta, n)| -> Result<Vec<Row>> {
            let start = Instant::now();
            let kern = CylinderKernel::new(&r.space, n)?;
            let plan = CesaroPlan::new(n, delta)?;
            let k = kern.kernel(&r.x, &r.x_prime, &r.y, r.y_prime.as_deref().unwrap_or(&r.y));
            let kd = kern.cesaro(&plan, &r.x, &r.x_prime, &r.y, r.y_prime.as_deref().unwrap_or(&r.y));
            let secs = start.elapsed().as_secs_f64();
            Ok(vec![
                Row::new("kernel", &r.space, "kernel", k).at(n, delta).timed(secs),
                Row::new("kernel", &r.space, "cesaro_kernel", kd).at(n, delta).timed(secs),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn lebesgue_rows(config: &RunConfig, r: &Resolved) -> Result<Vec<Row>> {
    let pairs = grid_pairs(config);
    pairs
        .par_iter()
        .map(|&(delta, n)| {
            let start = Instant::now();
            let (quantity, est) = match &r.y_prime {
                Some(yp) => ("lebesgue", lebesgue_quantity(&r.space, n, delta, &r.x_prime, yp, config.refinement_level)?),
                None => ("lebesgue_sup", lebesgue_sup(&r.space, n, delta, &r.grid, config.refinement_level)?),
            };
            Ok(Row::new("lebesgue", &r.space, quantity, est.value)
                .at(n, delta)
                .refined(est.refinement)
                .timed(start.elapsed().as_secs_f64()))
        })
        .collect()
}

fn converge_rows(config: &RunConfig, r: &Resolved) -> Result<Vec<Row>> {
    let start = Instant::now();
    let opts = config.convergence_options(r);
    let f = &r.function;
    let rows = convergence_experiment(&r.space, |x, y| f.eval(x, y), &config.n_list, &config.delta_list, &opts)?;
    let secs = start.elapsed().as_secs_f64() / rows.len().max(1) as f64;
    let mut out = Vec::new();
    for row in rows {
        let mk = |q: &str, v: f64| {
            Row::new("converge", &r.space, q, v).at(row.n, row.delta).refined(row.refinement).timed(secs)
        };
        out.push(mk("error_l1", row.l1));
        out.push(mk("error_l2", row.l2));
        out.push(mk("error_sup", row.sup));
        if let Some(l) = &row.lebesgue {
            out.push(
                Row::new("converge", &r.space, "lebesgue_sup", l.value)
                    .at(row.n, row.delta)
                    .refined(l.refinement)
                    .timed(secs),
            );
        }
    }
    Ok(out)
}

fn dlambda_rows(config: &RunConfig, r: &Resolved) -> Result<Vec<Row>> {
    let (v, u, nodes) = (config.dlambda_v, config.dlambda_u, config.dlambda_nodes);
    config
        .lambda_list
        .par_iter()
        .map(|&lambda| -> Result<Vec<Row>> {
            let start = Instant::now();
            let (coarse, exact) = dlambda_identity_check(lambda, v, u, nodes)?;
            let (fine, _) = dlambda_identity_check(lambda, v, u, 2 * nodes)?;
            let refinement = if fine == coarse { 0.0 } else { (fine - coarse).abs() / fine.abs() };
            let secs = start.elapsed().as_secs_f64();
            let tag = format!("lambda={lambda}");
            Ok(vec![
                Row::new("dlambda", &r.space, format!("estimate[{tag}]"), fine).refined(refinement).timed(secs),
                Row::new("dlambda", &r.space, format!("exact[{tag}]"), exact).timed(secs),
            ])
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}
