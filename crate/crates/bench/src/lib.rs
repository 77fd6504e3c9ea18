//! Seeded fixtures shared by the criterion benchmarks.

use rkeig_core::{
    random_instance, secular_coefficients, transform_update, LowRankUpdate, SecularCoefficients,
    SpectralDecomposition, SymmetricDense,
};

/// Sizes swept by the scaling benchmarks.
pub const SIZES: [usize; 4] = [50, 100, 200, 400];

/// A random decomposition, a positive rank-`k` update of unit norm, the
/// updated matrix and its secular coefficients.
pub struct Fixture {
    pub d: SpectralDecomposition,
    pub u: LowRankUpdate,
    pub target: SymmetricDense,
    pub coeffs: SecularCoefficients,
}

impl Fixture {
    pub fn new(n: usize, k: usize, seed: u64) -> Fixture {
        let (d, u) = random_instance(n, k, 1.0, seed).expect("valid instance parameters");
        let target = rkeig_core::apply_update(&d.reconstruct(), &u).expect("sizes match");
        let tu = transform_update(&d, &u).expect("sizes match");
        let coeffs = secular_coefficients(d.eigenvalues(), &tu).expect("finite weights");
        Fixture {
            d,
            u,
            target,
            coeffs,
        }
    }
}
