//! Spectral regularization: the generalized inverse, Picard diagnostics,
//! and the filter family `R_alpha f = sum_i r_alpha(sigma_i) <f, v_i> u_i`
//! that damps the `1/sigma` blow-up of the pseudo-inverse.

mod morozov;
mod tikhonov;

pub use morozov::{morozov_select_alpha, MorozovConfig, MorozovResult};
pub use tikhonov::tikhonov_solve_cg;

use crate::error::{Error, Result};
use crate::linop::{dot, solve_dense, DenseMatrix, Kahan, SvdFactorization};

/// A rule mapping each singular value (and its index) to a reconstruction
/// coefficient replacing `1/sigma`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralFilter {
    /// `1/sigma`: no damping, the Moore-Penrose expansion itself.
    PseudoInverse,
    /// `sigma / (sigma^2 + alpha)`, `alpha > 0`.
    Tikhonov { alpha: f64 },
    /// `1/sigma` above the cut, 0 below (truncated SVD).
    Tsvd { cut: f64 },
    /// One trained coefficient per stored singular value; repeated singular
    /// values may carry distinct coefficients.
    Learned(Vec<f64>),
}

impl SpectralFilter {
    pub fn tikhonov(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::invalid(format!(
                "tikhonov filter needs alpha > 0, got {alpha}"
            )));
        }
        Ok(SpectralFilter::Tikhonov { alpha })
    }

    pub fn learned(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("learned filter has non-finite coefficient"));
        }
        Ok(SpectralFilter::Learned(theta))
    }

    pub fn coefficient(&self, sigma: f64, index: usize) -> f64 {
        match self {
            SpectralFilter::PseudoInverse => 1.0 / sigma,
            SpectralFilter::Tikhonov { alpha } => sigma / (sigma * sigma + alpha),
            SpectralFilter::Tsvd { cut } => {
                if sigma >= *cut {
                    1.0 / sigma
                } else {
                    0.0
                }
            }
            SpectralFilter::Learned(theta) => theta[index],
        }
    }
}

/// Per-mode second moments of noise and signal: `delta[i]` is the expected
/// squared noise coefficient along `v_i`, `pi[i]` the expected squared
/// signal coefficient along `u_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStatistics {
    pub delta: Vec<f64>,
    pub pi: Vec<f64>,
}

impl SpectralStatistics {
    pub fn new(delta: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        if delta.len() != pi.len() {
            return Err(Error::dim("SpectralStatistics", delta.len(), pi.len()));
        }
        if delta.iter().chain(&pi).any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::invalid(
                "SpectralStatistics: energies must be >= 0 and finite",
            ));
        }
        Ok(SpectralStatistics { delta, pi })
    }
}

/// Apply a spectral filter: `sum_i r(sigma_i) <f, v_i> u_i`, accumulated with
/// compensated summation so the result is independent of expansion order.
pub fn filter_apply(
    svd: &SvdFactorization,
    filter: &SpectralFilter,
    f: &[f64],
) -> Result<Vec<f64>> {
    if f.len() != svd.rows() {
        return Err(Error::dim("filter_apply: data length", svd.rows(), f.len()));
    }
    if let SpectralFilter::Learned(theta) = filter {
        if theta.len() != svd.rank() {
            return Err(Error::dim(
                "filter_apply: learned filter length",
                svd.rank(),
                theta.len(),
            ));
        }
    }
    let mut acc = vec![Kahan::default(); svd.cols()];
    for i in 0..svd.rank() {
        let coeff = filter.coefficient(svd.singular_values()[i], i) * dot(f, svd.left_vector(i));
        if coeff == 0.0 {
            continue;
        }
        for (a, &u) in acc.iter_mut().zip(svd.right_vector(i)) {
            a.add(coeff * u);
        }
    }
    Ok(acc.into_iter().map(|a| a.value()).collect())
}

/// The minimal-norm least-squares solution
/// `A^dagger f = sum_i (1/sigma_i) <f, v_i> u_i`. Components of `f` outside
/// the closure of the range are annihilated by construction.
pub fn pseudo_inverse_apply(svd: &SvdFactorization, f: &[f64]) -> Result<Vec<f64>> {
    filter_apply(svd, &SpectralFilter::PseudoInverse, f)
}

/// One row of the Picard diagnostic: the spectral coefficient of the data
/// against the decay of the singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardRow {
    pub sigma: f64,
    /// `|<f, v_i>|`
    pub coefficient: f64,
    /// `|<f, v_i>| / sigma_i`
    pub ratio: f64,
    /// Running sum of squared ratios up to this index; divergence of this
    /// sum flags data outside the operator's range.
    pub partial_sum_sq: f64,
}

pub fn picard_diagnostic(svd: &SvdFactorization, f: &[f64]) -> Result<Vec<PicardRow>> {
    if f.len() != svd.rows() {
        return Err(Error::dim("picard_diagnostic: data length", svd.rows(), f.len()));
    }
    let mut partial = 0.0;
    Ok((0..svd.rank())
        .map(|i| {
            let sigma = svd.singular_values()[i];
            let coefficient = dot(f, svd.left_vector(i)).abs();
            let ratio = coefficient / sigma;
            partial += ratio * ratio;
            PicardRow {
                sigma,
                coefficient,
                ratio,
                partial_sum_sq: partial,
            }
        })
        .collect())
}

/// Deviations from the four Moore-Penrose equations, each measured in the
/// entrywise max norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoorePenroseReport {
    /// `A A^d A = A`
    pub product_a: f64,
    /// `A^d A A^d = A^d`
    pub product_adag: f64,
    /// symmetry of `A^d A`
    pub symmetry_adag_a: f64,
    /// symmetry of `A A^d`
    pub symmetry_a_adag: f64,
    pub tol: f64,
}

impl MoorePenroseReport {
    pub fn max_deviation(&self) -> f64 {
        self.product_a
            .max(self.product_adag)
            .max(self.symmetry_adag_a)
            .max(self.symmetry_a_adag)
    }

    pub fn passes(&self) -> bool {
        self.max_deviation() <= self.tol
    }
}

/// Verify a claimed pseudo-inverse against the Moore-Penrose equations.
pub fn moore_penrose_check(
    a: &DenseMatrix,
    adag: &DenseMatrix,
    tol: f64,
) -> Result<MoorePenroseReport> {
    if adag.rows() != a.cols() || adag.cols() != a.rows() {
        return Err(Error::dim(
            "moore_penrose_check: A^dagger shape",
            a.cols() * a.rows(),
            adag.rows() * adag.cols(),
        ));
    }
    let a_adag = a.matmul(adag)?;
    let adag_a = adag.matmul(a)?;
    let product_a = a_adag.matmul(a)?.sub(a)?.max_abs();
    let product_adag = adag_a.matmul(adag)?.sub(adag)?.max_abs();
    let symmetry_adag_a = adag_a.sub(&adag_a.transpose())?.max_abs();
    let symmetry_a_adag = a_adag.sub(&a_adag.transpose())?.max_abs();
    Ok(MoorePenroseReport {
        product_a,
        product_adag,
        symmetry_adag_a,
        symmetry_a_adag,
        tol,
    })
}

/// The mean-squared-error-optimal per-mode filter
/// `theta_i = sigma_i / (sigma_i^2 + delta_i / pi_i)`. A mode with zero
/// prior energy carries no signal and gets `theta_i = 0`.
pub fn mse_optimal_filter(
    svd: &SvdFactorization,
    stats: &SpectralStatistics,
) -> Result<SpectralFilter> {
    if stats.delta.len() != svd.rank() {
        return Err(Error::dim(
            "mse_optimal_filter: statistics length",
            svd.rank(),
            stats.delta.len(),
        ));
    }
    let theta = svd
        .singular_values()
        .iter()
        .zip(stats.delta.iter().zip(&stats.pi))
        .map(|(&sigma, (&delta, &pi))| {
            if pi == 0.0 {
                0.0
            } else {
                sigma / (sigma * sigma + delta / pi)
            }
        })
        .collect();
    SpectralFilter::learned(theta)
}

/// Closed-form Gaussian-prior MAP estimate
/// `(A'A + ratio I)^{-1} (A'f + ratio mu)`, where `ratio` is the noise-to-
/// prior variance quotient. At `mu = 0` this is Tikhonov regularization with
/// `alpha = ratio`; at `ratio = 0` it reduces to the least-squares solution.
pub fn map_gaussian_closed_form(
    a: &DenseMatrix,
    f: &[f64],
    ratio: f64,
    mu_prior: &[f64],
) -> Result<Vec<f64>> {
    if ratio < 0.0 {
        return Err(Error::invalid("map_gaussian_closed_form: ratio must be >= 0"));
    }
    if f.len() != a.rows() {
        return Err(Error::dim(
            "map_gaussian_closed_form: data length",
            a.rows(),
            f.len(),
        ));
    }
    if mu_prior.len() != a.cols() {
        return Err(Error::dim(
            "map_gaussian_closed_form: prior length",
            a.cols(),
            mu_prior.len(),
        ));
    }
    let mut normal = a.transpose().matmul(a)?;
    for i in 0..a.cols() {
        normal[(i, i)] += ratio;
    }
    let rhs: Vec<f64> = a
        .matvec_transpose(f)
        .iter()
        .zip(mu_prior)
        .map(|(atf, m)| atf + ratio * m)
        .collect();
    solve_dense(&normal, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{norm2, svd_default, LinearMap};
    use crate::rng::CounterRng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        let mut rng = CounterRng::new(seed);
        DenseMatrix::from_vec(rows, cols, rng.uniform_vec(rows * cols, -1.0, 1.0)).unwrap()
    }

    #[test]
    fn pseudo_inverse_of_identity() {
        let f = svd_default(&DenseMatrix::identity(3)).unwrap();
        let data = [1.0, -2.0, 0.5];
        let u = pseudo_inverse_apply(&f, &data).unwrap();
        for (ui, di) in u.iter().zip(&data) {
            assert!((ui - di).abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_components_annihilated() {
        let f = svd_default(&DenseMatrix::diagonal(&[1.0, 0.0])).unwrap();
        let u = pseudo_inverse_apply(&f, &[2.0, 5.0]).unwrap();
        assert!((u[0] - 2.0).abs() < 1e-12);
        assert!(u[1].abs() < 1e-12);
    }

    #[test]
    fn matches_normal_equation_elimination() {
        let a = random_matrix(4, 3, 81);
        let svd = svd_default(&a).unwrap();
        let mut rng = CounterRng::new(82);
        let f = rng.uniform_vec(4, -1.0, 1.0);
        let direct =
            solve_dense(&a.transpose().matmul(&a).unwrap(), &a.matvec_transpose(&f)).unwrap();
        let via_svd = pseudo_inverse_apply(&svd, &f).unwrap();
        for (x, y) in via_svd.iter().zip(&direct) {
            assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn residual_orthogonal_to_range() {
        let a = random_matrix(5, 3, 83);
        let op = LinearMap::from_dense(a.clone());
        let svd = svd_default(&a).unwrap();
        let mut rng = CounterRng::new(84);
        let f = rng.uniform_vec(5, -1.0, 1.0);
        let u = pseudo_inverse_apply(&svd, &f).unwrap();
        let residual = crate::linop::sub(&op.apply(&u).unwrap(), &f);
        for _ in 0..20 {
            let x = rng.uniform_vec(3, -1.0, 1.0);
            let ax = op.apply(&x).unwrap();
            assert!(dot(&residual, &ax).abs() <= 1e-8 * (1.0 + norm2(&ax)));
        }
    }

    #[test]
    fn moore_penrose_identity_and_diagonal() {
        let id = DenseMatrix::identity(2);
        let report = moore_penrose_check(&id, &id, 1e-12).unwrap();
        assert_eq!(report.max_deviation(), 0.0);

        let a = DenseMatrix::diagonal(&[2.0, 0.0]);
        let adag = DenseMatrix::diagonal(&[0.5, 0.0]);
        assert!(moore_penrose_check(&a, &adag, 1e-12).unwrap().passes());
    }

    #[test]
    fn moore_penrose_svd_built() {
        let a = random_matrix(5, 3, 85);
        let adag = svd_default(&a).unwrap().pseudo_inverse_matrix();
        let report = moore_penrose_check(&a, &adag, 1e-9).unwrap();
        assert!(report.passes(), "max deviation {}", report.max_deviation());
    }

    #[test]
    fn moore_penrose_shape_mismatch() {
        let a = DenseMatrix::zeros(3, 2);
        assert!(moore_penrose_check(&a, &DenseMatrix::zeros(3, 2), 1e-9).is_err());
    }

    #[test]
    fn picard_single_mode() {
        let a = DenseMatrix::diagonal(&[3.0, 1.0]);
        let svd = svd_default(&a).unwrap();
        // f = sigma_1 v_1.
        let f: Vec<f64> = svd.left_vector(0).iter().map(|v| 3.0 * v).collect();
        let rows = picard_diagnostic(&svd, &f).unwrap();
        assert!((rows[0].ratio - 1.0).abs() < 1e-12);
        assert!(rows[1].ratio.abs() < 1e-12);
        assert!((rows[1].partial_sum_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn picard_of_forward_data_reads_off_u_coefficients() {
        let a = random_matrix(5, 3, 86);
        let op = LinearMap::from_dense(a.clone());
        let svd = svd_default(&a).unwrap();
        let mut rng = CounterRng::new(87);
        let u = rng.uniform_vec(3, -1.0, 1.0);
        let f = op.apply(&u).unwrap();
        let rows = picard_diagnostic(&svd, &f).unwrap();
        for (i, row) in rows.iter().enumerate() {
            let want = dot(&u, svd.right_vector(i)).abs();
            assert!((row.ratio - want).abs() <= 1e-10, "mode {i}");
        }
    }

    #[test]
    fn picard_of_out_of_range_data_is_zero() {
        // diag(1, 0): the range is the first axis, so data on the second
        // axis lies in range(A)^perp.
        let svd = svd_default(&DenseMatrix::diagonal(&[1.0, 0.0])).unwrap();
        let rows = picard_diagnostic(&svd, &[0.0, 7.0]).unwrap();
        assert!(rows.iter().all(|r| r.ratio.abs() < 1e-12));
    }

    #[test]
    fn tikhonov_filter_limits_to_pseudo_inverse() {
        let svd = svd_default(&DenseMatrix::identity(2)).unwrap();
        let f = [0.3, -0.9];
        let tik = filter_apply(&svd, &SpectralFilter::tikhonov(1e-12).unwrap(), &f).unwrap();
        let dag = pseudo_inverse_apply(&svd, &f).unwrap();
        for (t, d) in tik.iter().zip(&dag) {
            assert!((t - d).abs() <= 1e-6);
        }
    }

    #[test]
    fn tikhonov_norm_bound() {
        // |R_alpha f| <= |f| / (2 sqrt(alpha)).
        let a = random_matrix(6, 6, 88);
        let svd = svd_default(&a).unwrap();
        let mut rng = CounterRng::new(89);
        for &alpha in &[1e-3, 1e-1, 1.0] {
            let filter = SpectralFilter::tikhonov(alpha).unwrap();
            for _ in 0..50 {
                let f = rng.uniform_vec(6, -1.0, 1.0);
                let out = filter_apply(&svd, &filter, &f).unwrap();
                assert!(norm2(&out) <= norm2(&f) / (2.0 * alpha.sqrt()) + 1e-12);
            }
        }
    }

    #[test]
    fn tsvd_cut_keeps_leading_component() {
        let svd = svd_default(&DenseMatrix::diagonal(&[3.0, 1.0])).unwrap();
        let filter = SpectralFilter::Tsvd { cut: 2.0 };
        // f = 3 v_1 + v_2: only the first term survives, giving exactly u_1.
        let f: Vec<f64> = svd
            .left_vector(0)
            .iter()
            .zip(svd.left_vector(1))
            .map(|(v1, v2)| 3.0 * v1 + v2)
            .collect();
        let out = filter_apply(&svd, &filter, &f).unwrap();
        for (o, e) in out.iter().zip(svd.right_vector(0)) {
            assert!((o - e).abs() <= 1e-12);
        }
    }

    #[test]
    fn filter_is_linear_in_data() {
        let a = random_matrix(5, 4, 90);
        let svd = svd_default(&a).unwrap();
        let filter = SpectralFilter::tikhonov(0.2).unwrap();
        let mut rng = CounterRng::new(91);
        let f = rng.uniform_vec(5, -1.0, 1.0);
        let g = rng.uniform_vec(5, -1.0, 1.0);
        let mixed: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let lhs = filter_apply(&svd, &filter, &mixed).unwrap();
        let rf = filter_apply(&svd, &filter, &f).unwrap();
        let rg = filter_apply(&svd, &filter, &g).unwrap();
        for ((l, a), b) in lhs.iter().zip(&rf).zip(&rg) {
            assert!((l - (2.0 * a - 0.5 * b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn learned_filter_length_checked() {
        let svd = svd_default(&DenseMatrix::identity(3)).unwrap();
        let filter = SpectralFilter::learned(vec![1.0, 2.0]).unwrap();
        assert!(filter_apply(&svd, &filter, &[0.0; 3]).is_err());
    }

    #[test]
    fn mse_filter_noiseless_limit() {
        let svd = svd_default(&DenseMatrix::diagonal(&[2.0, 0.5])).unwrap();
        let stats = SpectralStatistics::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let filter = mse_optimal_filter(&svd, &stats).unwrap();
        let SpectralFilter::Learned(theta) = &filter else { panic!() };
        assert!((theta[0] - 0.5).abs() < 1e-12);
        assert!((theta[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mse_filter_reduces_to_tikhonov_for_flat_stats() {
        let svd = svd_default(&DenseMatrix::diagonal(&[2.0, 1.0, 0.3])).unwrap();
        let delta_sq = 0.04;
        let stats = SpectralStatistics::new(vec![delta_sq; 3], vec![1.0; 3]).unwrap();
        let filter = mse_optimal_filter(&svd, &stats).unwrap();
        let tik = SpectralFilter::tikhonov(delta_sq).unwrap();
        for (i, &sigma) in svd.singular_values().iter().enumerate() {
            assert!((filter.coefficient(sigma, i) - tik.coefficient(sigma, i)).abs() < 1e-12);
        }
    }

    #[test]
    fn mse_filter_hand_value_and_scalar_brute_force() {
        let svd = svd_default(&DenseMatrix::diagonal(&[2.0, 1.0])).unwrap();
        let stats = SpectralStatistics::new(vec![1.0, 4.0], vec![1.0, 1.0]).unwrap();
        let filter = mse_optimal_filter(&svd, &stats).unwrap();
        let SpectralFilter::Learned(theta) = &filter else { panic!() };
        assert!((theta[0] - 0.4).abs() < 1e-12);
        assert!((theta[1] - 0.2).abs() < 1e-12);

        // Scalar MSE(t) = t^2 (sigma^2 pi + delta) - 2 t sigma pi + pi,
        // minimized by brute-force grid search.
        for (i, (&sigma, (&delta, &pi))) in svd
            .singular_values()
            .iter()
            .zip(stats.delta.iter().zip(&stats.pi))
            .enumerate()
        {
            let mse = |t: f64| t * t * (sigma * sigma * pi + delta) - 2.0 * t * sigma * pi + pi;
            let mut best = (f64::INFINITY, 0.0);
            let mut t = -2.0;
            while t <= 2.0 {
                if mse(t) < best.0 {
                    best = (mse(t), t);
                }
                t += 1e-5;
            }
            assert!((theta[i] - best.1).abs() <= 1e-4, "mode {i}");
        }
    }

    #[test]
    fn mse_filter_zero_prior_energy_gives_zero() {
        let svd = svd_default(&DenseMatrix::diagonal(&[1.0, 1.0])).unwrap();
        let stats = SpectralStatistics::new(vec![0.5, 0.5], vec![1.0, 0.0]).unwrap();
        let filter = mse_optimal_filter(&svd, &stats).unwrap();
        let SpectralFilter::Learned(theta) = &filter else { panic!() };
        assert_eq!(theta[1], 0.0);
    }

    #[test]
    fn mse_filter_monotone_and_below_pseudo_inverse() {
        let svd = svd_default(&DenseMatrix::diagonal(&[2.0, 1.0, 0.5])).unwrap();
        let mut prev = vec![f64::INFINITY; 3];
        for &noise in &[0.0, 0.01, 0.1, 1.0, 10.0] {
            let stats = SpectralStatistics::new(vec![noise; 3], vec![1.0; 3]).unwrap();
            let filter = mse_optimal_filter(&svd, &stats).unwrap();
            let SpectralFilter::Learned(theta) = &filter else { panic!() };
            for (i, (&t, &sigma)) in theta.iter().zip(svd.singular_values()).enumerate() {
                assert!(t <= 1.0 / sigma + 1e-15);
                assert!(t <= prev[i] + 1e-15, "not monotone in noise at mode {i}");
            }
            prev = theta.clone();
        }
    }

    #[test]
    fn negative_statistics_rejected() {
        assert!(SpectralStatistics::new(vec![-1.0], vec![1.0]).is_err());
        assert!(SpectralStatistics::new(vec![1.0], vec![-0.1]).is_err());
    }

    #[test]
    fn map_estimate_mle_limit() {
        let a = random_matrix(3, 3, 92);
        let mut rng = CounterRng::new(93);
        let f = rng.uniform_vec(3, -1.0, 1.0);
        let u = map_gaussian_closed_form(&a, &f, 0.0, &[0.0; 3]).unwrap();
        let direct = solve_dense(&a, &f).unwrap();
        for (x, y) in u.iter().zip(&direct) {
            assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn map_estimate_scalar_case() {
        let a = DenseMatrix::diagonal(&[1.0]);
        let u = map_gaussian_closed_form(&a, &[2.0], 1.0, &[0.0]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_estimate_pulls_toward_prior_mean() {
        // Diagonal case: distance to the prior mean shrinks ~10x when the
        // ratio grows 10x.
        let a = DenseMatrix::diagonal(&[1.0, 2.0]);
        let f = [3.0, -1.0];
        let mu = [0.5, 0.5];
        let mut prev_dist = f64::INFINITY;
        for &ratio in &[1e2, 1e3, 1e4] {
            let u = map_gaussian_closed_form(&a, &f, ratio, &mu).unwrap();
            let dist = norm2(&crate::linop::sub(&u, &mu));
            assert!(dist <= prev_dist / 9.0, "ratio {ratio}: {dist} vs {prev_dist}");
            prev_dist = dist;
        }
    }

    #[test]
    fn map_estimate_rejects_singular() {
        let a = DenseMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            map_gaussian_closed_form(&a, &[1.0, 1.0], 0.0, &[0.0, 0.0]),
            Err(Error::SingularSystem(_))
        ));
    }
}
