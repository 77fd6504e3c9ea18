//! Accuracy sweep over update ranks: the secular update, the first-order
//! perturbation estimate and a direct Jacobi solve on the same instances.

use std::time::Instant;

use rkeig_core::{
    apply_update, eigenvalue_error, jacobi_evd, orthonormality_error, perturbation_update,
    random_instance, reconstruction_error, updated_pairs, JacobiConfig, SpectralDecomposition,
    UpdateOptions,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Proposed,
    Perturbation,
    Direct,
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub n: usize,
    pub ranks: Vec<usize>,
    pub norm: f64,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            n: 100,
            ranks: (1..=10).collect(),
            norm: 0.01,
            seed: 0,
            parallel: false,
        }
    }
}

/// One arm at one rank. The direct solve is the oracle, so its eigenvalue
/// error is zero by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub rank: usize,
    pub method: Arm,
    pub n: usize,
    pub norm: f64,
    pub parallel: bool,
    pub eig_err_2norm: f64,
    pub residual_fro: f64,
    pub ortho_err: f64,
    pub wall_time: f64,
}

/// Parses `a..b` (inclusive), `a..=b`, or a comma list.
pub fn parse_ranks(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad rank list `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let ranks: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ranks.is_empty() {
        return Err(bad());
    }
    Ok(ranks)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

pub fn run_compare(cfg: &CompareConfig) -> Result<Vec<CompareRecord>, CliError> {
    if cfg.n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    if let Some(&k) = cfg.ranks.iter().find(|&&k| k == 0 || k > cfg.n) {
        return Err(CliError::Usage(format!("rank {k} outside 1..={}", cfg.n)));
    }
    if !(cfg.norm.is_finite() && cfg.norm > 0.0) {
        return Err(CliError::Usage(format!("bad norm {}", cfg.norm)));
    }
    let opts = UpdateOptions {
        parallel: cfg.parallel,
        ..Default::default()
    };
    let mut out = Vec::with_capacity(3 * cfg.ranks.len());
    for &k in &cfg.ranks {
        let (d, u) = random_instance(cfg.n, k, cfg.norm, cfg.seed.wrapping_add(k as u64))?;
        let target = apply_update(&d.reconstruct(), &u)?;
        let (direct, t_direct) = timed(|| jacobi_evd(&target, JacobiConfig::default()));
        let direct = direct?;
        let (proposed, t_proposed) = timed(|| updated_pairs(&d, &u, &opts));
        let proposed = proposed?.0;
        let (perturbed, t_perturbed) = timed(|| perturbation_update(&d, &u));
        let perturbed = perturbed?;

        let oracle = direct.eigenvalues();
        let row = |method: Arm, r: &SpectralDecomposition, wall_time: f64| CompareRecord {
            rank: k,
            method,
            n: cfg.n,
            norm: cfg.norm,
            parallel: cfg.parallel,
            eig_err_2norm: eigenvalue_error(r.eigenvalues(), oracle),
            residual_fro: reconstruction_error(r, &target),
            ortho_err: orthonormality_error(r.q()),
            wall_time,
        };
        out.push(row(Arm::Proposed, &proposed, t_proposed));
        out.push(row(Arm::Perturbation, &perturbed, t_perturbed));
        out.push(row(Arm::Direct, &direct, t_direct));
    }
    Ok(out)
}
