//! Symmetric eigendecomposition of the Laplacian and modal projection.
//!
//! The Laplacian of a connected undirected network is symmetric positive
//! semidefinite with a single zero eigenvalue whose eigenvector is the
//! constant (rigid-body) direction. Projecting the phase-deviation vector
//! onto the orthonormal eigenbasis turns the coupled second-order network
//! dynamics into independent single-mode oscillators, one per eigenvalue.
//!
//! Conventions: eigenvalues ascend (λ₁ ≤ … ≤ λ_N), eigenvectors are the
//! columns of an orthonormal `V`, and each column is sign-fixed so its first
//! non-negligible component is positive. Mode indices everywhere in this
//! crate are 0-based: index 0 is the rigid-body mode, indices 1.. are the
//! elastic modes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::netgen::LaplacianMatrix;

/// Entries below this magnitude are ignored when picking the sign-defining
/// component of an eigenvector.
const SIGN_TOL: f64 = 1e-8;

/// Full ascending spectrum of a Laplacian with its orthonormal eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    lambda_max: f64,
}

impl Spectrum {
    /// Ascending eigenvalues λ₁ ≤ λ₂ ≤ … ≤ λ_N.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvector matrix; column k is v_k.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Modal projection η = Vᵀ·δθ.
    pub fn project(&self, delta_theta: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(delta_theta)?;
        Ok(self.eigenvectors.transpose() * delta_theta)
    }

    /// Inverse projection δθ = V·η.
    pub fn reconstruct(&self, eta: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(eta)?;
        Ok(&self.eigenvectors * eta)
    }

    /// Per-mode excitation coefficients γ_k = v_kᵀ·δω₀ of a disturbance
    /// direction. Index 0 (rigid-body) is retained but unused downstream.
    pub fn disturbance_projection(&self, delta_omega0: &DVector<f64>) -> Result<DVector<f64>> {
        self.project(delta_omega0)
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// CSV export with columns `k,lambda_k` (k is 1-based in the file to
    /// match the usual spectral-index convention).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lambda_k\n");
        for (i, lambda) in self.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, lambda));
        }
        out
    }

    /// Full eigenvector export (n×n payload), column k under header `v_k`.
    pub fn eigenvectors_csv(&self) -> String {
        let n = self.n();
        let mut out = String::from("node");
        for k in 1..=n {
            out.push_str(&format!(",v_{k}"));
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&i.to_string());
            for k in 0..n {
                out.push_str(&format!(",{}", self.eigenvectors[(i, k)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Modal state (projection of phase deviation and its rate).
#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoordinates {
    pub eta: DVector<f64>,
    pub eta_dot: DVector<f64>,
}

impl ModalCoordinates {
    pub fn project(
        spectrum: &Spectrum,
        delta_theta: &DVector<f64>,
        delta_theta_dot: &DVector<f64>,
    ) -> Result<Self> {
        Ok(ModalCoordinates {
            eta: spectrum.project(delta_theta)?,
            eta_dot: spectrum.project(delta_theta_dot)?,
        })
    }
}

/// Full symmetric eigendecomposition, sorted ascending and sign-fixed.
pub fn decompose(l: &LaplacianMatrix) -> Result<Spectrum> {
    decompose_symmetric(l.values())
}

/// Decomposition of any symmetric matrix under the same conventions.
pub fn decompose_symmetric(matrix: &DMatrix<f64>) -> Result<Spectrum> {
    let n = matrix.nrows();
    let mut max_asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    if max_asym > 1e-10 {
        return Err(Error::NotSymmetric { max_asym });
    }

    let eigen = matrix.clone().symmetric_eigen();
    if eigen.eigenvalues.iter().any(|v| !v.is_finite())
        || eigen.eigenvectors.iter().any(|v| !v.is_finite())
    {
        return Err(Error::EigenFailure);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .expect("finite eigenvalues")
    });

    let eigenvalues = DVector::from_fn(n, |i, _| eigen.eigenvalues[order[i]]);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eigen.eigenvectors.column(src).into_owned();
        // Unit columns always have an entry of magnitude >= 1/sqrt(n), so
        // the sign pivot exists at any realistic size.
        let pivot = col.iter().find(|x| x.abs() > SIGN_TOL).copied().unwrap_or(1.0);
        if pivot < 0.0 {
            col.neg_mut();
        }
        eigenvectors.set_column(dst, &col);
    }

    let lambda_max = eigenvalues[n - 1];
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        lambda_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{gen_erdos_renyi, gen_ring_regular, gen_spider_web, laplacian};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn star_spectrum(n: usize) -> Spectrum {
        let net = gen_spider_web(n).unwrap();
        decompose(&laplacian(&net, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn star_eigenvalues_are_zero_ones_and_n() {
        let spec = star_spectrum(100);
        assert!(spec.eigenvalue(0).abs() < 1e-9);
        for k in 1..99 {
            assert!((spec.eigenvalue(k) - 1.0).abs() < 1e-8, "lambda_{k}");
        }
        assert!((spec.eigenvalue(99) - 100.0).abs() < 1e-8);
        assert!((spec.lambda_max() - 100.0).abs() < 1e-8);
    }

    #[test]
    fn cycle_matches_circulant_closed_form() {
        let net = gen_ring_regular(8, 2, 0).unwrap();
        let spec = decompose(&laplacian(&net, 1.0).unwrap()).unwrap();
        let mut expected: Vec<f64> = (0..8)
            .map(|j| 2.0 * (1.0 - (2.0 * std::f64::consts::PI * j as f64 / 8.0).cos()))
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, e) in expected.iter().enumerate() {
            assert!((spec.eigenvalue(k) - e).abs() < 1e-10, "lambda_{k}");
        }
    }

    #[test]
    fn rigid_body_mode_is_the_constant_vector() {
        let spec = star_spectrum(25);
        let v1 = spec.eigenvector(0);
        let expected = 1.0 / (25.0f64).sqrt();
        for x in v1.iter() {
            assert!((x - expected).abs() < 1e-8);
        }
    }

    #[test]
    fn basis_is_orthonormal_and_diagonalizes() {
        let net = gen_erdos_renyi(50, 0.2, 4).unwrap();
        let l = laplacian(&net, 1.0).unwrap();
        let spec = decompose(&l).unwrap();
        let v = spec.eigenvectors();
        let gram = v.transpose() * v;
        for i in 0..50 {
            for j in 0..50 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - expected).abs() < 1e-10, "gram[{i},{j}]");
            }
        }
        let diag = v.transpose() * l.values() * v;
        for i in 0..50 {
            for j in 0..50 {
                if i != j {
                    assert!(diag[(i, j)].abs() < 1e-8, "VtLV[{i},{j}] = {}", diag[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn decomposition_is_deterministic() {
        let net = gen_erdos_renyi(40, 0.15, 8).unwrap();
        let l = laplacian(&net, 1.0).unwrap();
        let a = decompose(&l).unwrap();
        let b = decompose(&l).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let mut m = DMatrix::<f64>::zeros(3, 3);
        m[(0, 1)] = 1.0;
        assert!(matches!(
            decompose_symmetric(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn basis_vector_projects_to_unit_coordinate() {
        let spec = star_spectrum(12);
        let eta = spec.project(&spec.eigenvector(3)).unwrap();
        for (k, x) in eta.iter().enumerate() {
            let expected = if k == 3 { 1.0 } else { 0.0 };
            assert!((x - expected).abs() < 1e-10);
        }
        let zero = spec.project(&DVector::zeros(12)).unwrap();
        assert!(zero.amax() < 1e-15);
    }

    #[test]
    fn reconstruct_of_first_coordinate_is_constant_vector() {
        let spec = star_spectrum(9);
        let mut eta = DVector::zeros(9);
        eta[0] = 1.0;
        let theta = spec.reconstruct(&eta).unwrap();
        let expected = 1.0 / 3.0;
        for x in theta.iter() {
            assert!((x - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn disturbance_projection_selects_principal_mode() {
        let spec = star_spectrum(100);
        let gamma = spec.disturbance_projection(&spec.eigenvector(99)).unwrap();
        assert!((gamma[99] - 1.0).abs() < 1e-10);
        for k in 0..99 {
            assert!(gamma[k].abs() < 1e-9);
        }
        // Uniform disturbance is orthogonal to every elastic mode.
        let uniform = DVector::from_element(100, 1.0);
        let gamma_u = spec.disturbance_projection(&uniform).unwrap();
        for k in 1..100 {
            assert!(gamma_u[k].abs() < 1e-8, "gamma_{k} = {}", gamma_u[k]);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let spec = star_spectrum(5);
        let wrong = DVector::zeros(4);
        assert!(matches!(
            spec.project(&wrong),
            Err(Error::DimensionMismatch { expected: 5, got: 4 })
        ));
    }

    #[test]
    fn round_trip_and_parseval_on_random_vectors() {
        let net = gen_erdos_renyi(20, 0.3, 2).unwrap();
        let spec = decompose(&laplacian(&net, 1.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let x = DVector::from_fn(20, |_, _| rng.gen_range(-1.0..1.0));
            let eta = spec.project(&x).unwrap();
            let back = spec.reconstruct(&eta).unwrap();
            assert!((&back - &x).amax() < 1e-10);
            assert!((eta.norm() - x.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn modal_coordinates_carry_both_projections() {
        let spec = star_spectrum(6);
        let theta = spec.eigenvector(3) * 0.5;
        let theta_dot = spec.eigenvector(5) * 2.0;
        let mc = ModalCoordinates::project(&spec, &theta, &theta_dot).unwrap();
        assert!((mc.eta[3] - 0.5).abs() < 1e-12);
        assert!((mc.eta_dot[5] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_csv_has_one_row_per_mode() {
        let spec = star_spectrum(4);
        let csv = spec.to_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines[0], "k,lambda_k");
        assert_eq!(lines.len(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        // Round trip and Parseval over random sizes/seeds.
        #[test]
        fn projection_round_trip(seed in 0u64..500, n in 4usize..24) {
            let net = gen_erdos_renyi(n, 0.4, seed).unwrap();
            let spec = decompose(&laplacian(&net, 1.0).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let x = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
            let eta = spec.project(&x).unwrap();
            let back = spec.reconstruct(&eta).unwrap();
            prop_assert!((&back - &x).amax() < 1e-10);
            prop_assert!((eta.norm() - x.norm()).abs() < 1e-10);
            // Connected graph: exactly one (near-)zero eigenvalue, and the
            // Laplacian stays numerically positive semidefinite.
            let zeros = spec.eigenvalues().iter().filter(|l| l.abs() < 1e-9).count();
            prop_assert_eq!(zeros, 1);
            prop_assert!(spec.eigenvalue(0) >= -1e-9);
        }
    }
}
