//! Schur's test for discretized integral operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::report::CheckReport;

/// Integral operator `(Tω)_i = Σ_j K_ij ω_j w_j` on a space with cell measures `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteKernel {
    pub k: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl DiscreteKernel {
    pub fn new(k: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, KernelError> {
        let n = weights.len();
        if n == 0 || k.len() != n || k.iter().any(|row| row.len() != n) {
            return Err(KernelError::InvalidParameter("kernel must be square and match the weights".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(KernelError::InvalidParameter("cell measures must be positive".into()));
        }
        Ok(Self { k, weights })
    }

    pub fn apply(&self, omega: &[f64]) -> Vec<f64> {
        self.k
            .iter()
            .map(|row| row.iter().zip(omega).zip(&self.weights).map(|((k, o), w)| k * o * w).sum())
            .collect()
    }

    pub fn norm(&self, v: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return v.iter().fold(0.0, |m, x| m.max(x.abs()));
        }
        v.iter().zip(&self.weights).map(|(x, w)| x.abs().powf(p) * w).sum::<f64>().powf(1.0 / p)
    }

    /// `max(sup_i ‖K(i,·)‖_{r*}, sup_j ‖K(·,j)‖_{r*})`
    pub fn schur_constant(&self, r_star: f64) -> f64 {
        let n = self.weights.len();
        let mut c: f64 = 0.0;
        for i in 0..n {
            let row: Vec<f64> = (0..n).map(|j| self.k[i][j]).collect();
            let col: Vec<f64> = (0..n).map(|j| self.k[j][i]).collect();
            c = c.max(self.norm(&row, r_star)).max(self.norm(&col, r_star));
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurResult {
    pub constant: f64,
    /// Largest `‖Tω‖_q / ‖ω‖_p` over the test vectors.
    pub max_ratio: f64,
}

/// Checks `1 + 1/q = 1/p + 1/r*` and `q >= p`.
pub fn schur_exponents(p: f64, q: f64, r_star: f64) -> Result<(), KernelError> {
    if !(p >= 1.0 && q >= p && r_star >= 1.0) || (1.0 + 1.0 / q - 1.0 / p - 1.0 / r_star).abs() > 1e-12 {
        return Err(KernelError::InvalidParameter(format!(
            "exponents must satisfy 1 + 1/q = 1/p + 1/r*, q >= p >= 1: p={p} q={q} r*={r_star}"
        )));
    }
    Ok(())
}

/// Largest observed `‖Tω‖_q / ‖ω‖_p` over `vectors`.
pub fn schur_ratio(kernel: &DiscreteKernel, p: f64, q: f64, r_star: f64, vectors: &[Vec<f64>]) -> Result<SchurResult, KernelError> {
    schur_exponents(p, q, r_star)?;
    let max_ratio = vectors
        .iter()
        .filter(|v| kernel.norm(v, p) > 0.0)
        .map(|v| kernel.norm(&kernel.apply(v), q) / kernel.norm(v, p))
        .fold(0.0, f64::max);
    Ok(SchurResult { constant: kernel.schur_constant(r_star), max_ratio })
}

/// Random nonnegative kernels with random cell measures; random signed test vectors
/// plus the point masses. Returns the number of kernels with `ratio > C (1 + 1e-12)`.
pub fn schur_bound_check(trials: usize, size: usize, p: f64, q: f64, r_star: f64, seed: u64) -> Result<CheckReport, KernelError> {
    let start = std::time::Instant::now();
    schur_exponents(p, q, r_star)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let weights: Vec<f64> = (0..size).map(|_| rng.gen_range(0.1..2.0)).collect();
        let k: Vec<Vec<f64>> = (0..size)
            .map(|_| (0..size).map(|_| rng.gen::<f64>().powi(3) * 3.0).collect())
            .collect();
        let kernel = DiscreteKernel::new(k, weights)?;
        let mut vectors: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        vectors.extend((0..size).map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
        let res = schur_ratio(&kernel, p, q, r_star, &vectors)?;
        worst = worst.max(res.max_ratio / res.constant);
        if res.max_ratio > res.constant * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    Ok(CheckReport::at_most(
        &format!("Schur test p={p} q={q} r*={r_star}: violations in {trials} kernels"),
        "Schur test / Young inequality for integral operators",
        violations as f64,
        0.0,
    )
    .with_note(format!("largest ratio / C = {worst:.6}"))
    .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_kernel_ratio_is_max_diagonal_mass() {
        let w = vec![0.5, 1.0, 2.0];
        let k = vec![vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.25]];
        let kernel = DiscreteKernel::new(k, w).unwrap();
        let deltas: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let r = schur_ratio(&kernel, 1.5, 1.5, 1.0, &deltas).unwrap();
        // masses K_ii w_i = 1.5, 1, 0.5
        assert!((r.constant - 1.5).abs() < 1e-15);
        assert!((r.max_ratio - 1.5).abs() < 1e-14);
    }

    #[test]
    fn exponent_relation_enforced() {
        assert!(schur_exponents(2.0, 2.0, 1.0).is_ok());
        assert!(schur_exponents(1.0, 2.0, 2.0).is_ok());
        assert!(schur_exponents(2.0, 3.0, 1.0).is_err());
        assert!(schur_exponents(2.0, 1.5, 1.0 / (1.0 + 1.0 / 1.5 - 0.5)).is_err());
    }

    #[test]
    fn random_kernels_never_violate() {
        for (p, q, r) in [(1.0, 1.0, 1.0), (2.0, 2.0, 1.0), (1.5, 3.0, 1.5), (1.0, f64::INFINITY, f64::INFINITY)] {
            let rep = schur_bound_check(25, 12, p, q, r, 7).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }
}
