//! Scaling benchmarks: every method runs on the same seeded instances, the
//! median wall time over trials is recorded, and a power law is fitted per
//! method.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use clap::ValueEnum;
use rkeig_core::{
    apply_update, eigenvalue_error, jacobi_evd, orthonormality_error, perturbation_update,
    random_instance, reconstruction_error, update_eigenvalues_with, updated_pairs, JacobiConfig,
    Locator, LowRankUpdate, SpectralDecomposition, SymmetricDense, UpdateOptions,
};
use serde::{Deserialize, Serialize};

use crate::fit::{fit_exponent, ExponentFit};
use crate::CliError;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    /// A rank-2 update done as two sequential rank-1 updates.
    Rank1Twice,
    /// Rank-2 update with location by coefficient signs.
    Rank2,
    /// Rank-k update located by the Sturm census.
    RankKSturm,
    /// Jacobi eigendecomposition of the updated matrix.
    DirectEvd,
    /// First-order perturbation estimate.
    Perturbation,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Rank1Twice,
        Method::Rank2,
        Method::RankKSturm,
        Method::DirectEvd,
        Method::Perturbation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rank1Twice => "rank1_twice",
            Method::Rank2 => "rank2",
            Method::RankKSturm => "rank_k_sturm",
            Method::DirectEvd => "direct_evd",
            Method::Perturbation => "perturbation",
        }
    }

    /// Update rank the method runs at; the two rank-2 arms ignore `requested`.
    pub fn rank(self, requested: usize) -> usize {
        match self {
            Method::Rank1Twice | Method::Rank2 => 2,
            _ => requested,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the timed region covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    /// New eigenvalues only. A sequential arm still builds every
    /// intermediate decomposition in full, since the next step needs it.
    #[default]
    Eigenvalues,
    /// New eigenvalues and eigenvectors.
    Full,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub rank: usize,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Frobenius norm of the generated `K`.
    pub norm: f64,
    pub parallel: bool,
    pub timing: Timing,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![50, 100, 200, 400],
            rank: 2,
            trials: 3,
            methods: vec![Method::Rank1Twice, Method::Rank2, Method::DirectEvd],
            seed: 0,
            norm: 1.0,
            parallel: false,
            timing: Timing::Eigenvalues,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(CliError::Usage("sizes must be positive".into()));
        }
        if self.rank == 0 {
            return Err(CliError::Usage("rank must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Usage("no methods given".into()));
        }
        if !(self.norm.is_finite() && self.norm > 0.0) {
            return Err(CliError::Usage(format!("bad norm {}", self.norm)));
        }
        for &m in &self.methods {
            let k = m.rank(self.rank);
            if let Some(&n) = self.sizes.iter().find(|&&n| n < k) {
                return Err(CliError::Usage(format!("{m} needs n >= {k}, got {n}")));
            }
        }
        Ok(())
    }
}

/// One method at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub parallel: bool,
    pub timing: Timing,
    /// Median seconds over the timed trials.
    pub wall_time: f64,
    pub residual_fro: f64,
    pub ortho_err: f64,
    pub eig_err_2norm: f64,
}

/// Exponent fit of one method, as written to the fit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub method: Method,
    pub k: usize,
    pub p: f64,
    pub r2: f64,
    /// Sizes joined with `;`.
    pub sizes: String,
}

impl FitRow {
    pub fn new(method: Method, k: usize, fit: &ExponentFit) -> Self {
        let sizes = fit
            .sizes
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(";");
        FitRow {
            method,
            k,
            p: fit.p,
            r2: fit.r2,
            sizes,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// `None` where the fit was refused.
    pub fits: Vec<(Method, Option<ExponentFit>)>,
}

impl BenchReport {
    pub fn fit(&self, m: Method) -> Option<&ExponentFit> {
        self.fits
            .iter()
            .find(|f| f.0 == m)
            .and_then(|f| f.1.as_ref())
    }

    pub fn fit_rows(&self, rank: usize) -> Vec<FitRow> {
        self.fits
            .iter()
            .filter_map(|(m, f)| f.as_ref().map(|f| FitRow::new(*m, m.rank(rank), f)))
            .collect()
    }
}

/// Seed of the instance at size `n`; shared by every method.
pub fn instance_seed(seed: u64, n: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(n as u64)
}

struct Instance {
    d: SpectralDecomposition,
    u: LowRankUpdate,
    a: SymmetricDense,
    target: SymmetricDense,
    oracle: Option<Vec<f64>>,
}

impl Instance {
    fn new(n: usize, k: usize, norm: f64, seed: u64) -> Result<Self, CliError> {
        let (d, u) = random_instance(n, k, norm, seed)?;
        let a = d.reconstruct();
        let target = apply_update(&a, &u)?;
        Ok(Instance {
            d,
            u,
            a,
            target,
            oracle: None,
        })
    }

    fn oracle(&mut self) -> Result<&[f64], CliError> {
        if self.oracle.is_none() {
            let o = jacobi_evd(&self.target, JacobiConfig::default())?;
            self.oracle = Some(o.into_parts().1);
        }
        Ok(self.oracle.as_deref().expect("oracle computed above"))
    }
}

/// Runs `method` once on the instance.
pub fn run_method(
    method: Method,
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    a: &SymmetricDense,
    parallel: bool,
) -> rkeig_core::Result<SpectralDecomposition> {
    let opts = UpdateOptions {
        parallel,
        ..Default::default()
    };
    match method {
        Method::Rank2 => updated_pairs(d, u, &opts).map(|r| r.0),
        Method::RankKSturm => {
            let opts = UpdateOptions {
                locator: Locator::Sturm,
                ..opts
            };
            updated_pairs(d, u, &opts).map(|r| r.0)
        }
        Method::Rank1Twice => {
            let mut cur = d.clone();
            for j in 0..u.rank() {
                cur = updated_pairs(&cur, &u.column(j), &opts)?.0;
            }
            Ok(cur)
        }
        Method::DirectEvd => jacobi_evd(&apply_update(a, u)?, JacobiConfig::default()),
        Method::Perturbation => perturbation_update(d, u),
    }
}

/// New eigenvalues from `method`, doing only the work that requires.
pub fn run_method_eigenvalues(
    method: Method,
    d: &SpectralDecomposition,
    u: &LowRankUpdate,
    a: &SymmetricDense,
    parallel: bool,
) -> rkeig_core::Result<Vec<f64>> {
    let opts = UpdateOptions {
        parallel,
        ..Default::default()
    };
    match method {
        Method::Rank2 => update_eigenvalues_with(d, u, &opts),
        Method::RankKSturm => {
            let opts = UpdateOptions {
                locator: Locator::Sturm,
                ..opts
            };
            update_eigenvalues_with(d, u, &opts)
        }
        Method::Rank1Twice => {
            let last = u.rank() - 1;
            let mut cur = d.clone();
            for j in 0..last {
                cur = updated_pairs(&cur, &u.column(j), &opts)?.0;
            }
            update_eigenvalues_with(&cur, &u.column(last), &opts)
        }
        Method::DirectEvd | Method::Perturbation => {
            run_method(method, d, u, a, parallel).map(|r| r.into_parts().1)
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, CliError> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &n in &cfg.sizes {
        let mut instances: HashMap<usize, Instance> = HashMap::new();
        for &m in &cfg.methods {
            let k = m.rank(cfg.rank);
            if let std::collections::hash_map::Entry::Vacant(e) = instances.entry(k) {
                e.insert(Instance::new(n, k, cfg.norm, instance_seed(cfg.seed, n))?);
            }
            let inst = instances.get_mut(&k).expect("instance was just inserted");

            // The warm-up run is discarded from the timings; being a full
            // run, it supplies the accuracy metrics.
            let out = run_method(m, &inst.d, &inst.u, &inst.a, cfg.parallel)?;
            if m == Method::DirectEvd && inst.oracle.is_none() {
                inst.oracle = Some(out.eigenvalues().to_vec());
            }
            let mut times = Vec::with_capacity(cfg.trials);
            for _ in 0..cfg.trials {
                let t = Instant::now();
                match cfg.timing {
                    Timing::Full => drop(run_method(m, &inst.d, &inst.u, &inst.a, cfg.parallel)?),
                    Timing::Eigenvalues => drop(run_method_eigenvalues(
                        m,
                        &inst.d,
                        &inst.u,
                        &inst.a,
                        cfg.parallel,
                    )?),
                }
                times.push(t.elapsed().as_secs_f64().max(1e-9));
            }
            let residual_fro = reconstruction_error(&out, &inst.target);
            let ortho_err = orthonormality_error(out.q());
            let eig_err_2norm = eigenvalue_error(out.eigenvalues(), inst.oracle()?);
            records.push(BenchRecord {
                method: m,
                n,
                k,
                parallel: cfg.parallel,
                timing: cfg.timing,
                wall_time: median(times),
                residual_fro,
                ortho_err,
                eig_err_2norm,
            });
        }
    }
    let fits = cfg
        .methods
        .iter()
        .map(|&m| {
            let pts: Vec<(usize, f64)> = records
                .iter()
                .filter(|r| r.method == m)
                .map(|r| (r.n, r.wall_time))
                .collect();
            (m, fit_exponent(&pts))
        })
        .collect();
    Ok(BenchReport { records, fits })
}
