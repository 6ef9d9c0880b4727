//! The characteristic function `Θ_P(z) = [−P + z D_{P*}(I − zP*)^{-1} D_P]|_{D_P}`
//! in defect-basis coordinates, its Taylor coefficients and the truncated
//! multiplication operator.

use crate::error::{GammaError, Result};
use crate::fundamental::{defect, DefectData, DefectSide};
use crate::matcore::{fro, identity, op_norm, sigma_min};
use crate::scalar::{cis, re, tol, CMatrix, Real, C};

#[derive(Debug, Clone)]
pub struct CharFn<T: Real> {
    pub p: CMatrix<T>,
    pub defect_p: DefectData<T>,
    pub defect_p_star: DefectData<T>,
    /// `Θ₀ … Θ_{N−1}`, each `r* × r`.
    pub coeffs: Vec<CMatrix<T>>,
}

impl<T: Real> CharFn<T> {
    /// Defects of `P` and the first `n_coeffs` Taylor coefficients.
    pub fn new(p: &CMatrix<T>, n_coeffs: usize) -> Result<Self> {
        let defect_p = defect(p, DefectSide::P)?;
        let defect_p_star = defect(p, DefectSide::PStar)?;
        Ok(Self::from_defects(p, defect_p, defect_p_star, n_coeffs))
    }

    pub fn from_defects(
        p: &CMatrix<T>,
        defect_p: DefectData<T>,
        defect_p_star: DefectData<T>,
        n_coeffs: usize,
    ) -> Self {
        let q = defect_p.q();
        let qs = defect_p_star.q();
        let mut coeffs = Vec::with_capacity(n_coeffs);
        if n_coeffs > 0 {
            coeffs.push(-(qs.adjoint() * p * q));
        }
        // right factor P*^{k−1} D_P Q, advanced one power per coefficient
        let left = qs.adjoint() * &defect_p_star.d;
        let mut right = &defect_p.d * q;
        for _ in 1..n_coeffs {
            coeffs.push(&left * &right);
            right = p.adjoint() * right;
        }
        Self {
            p: p.clone(),
            defect_p,
            defect_p_star,
            coeffs,
        }
    }

    /// `r`, the dimension of `D_P`.
    pub fn rank(&self) -> usize {
        self.defect_p.rank()
    }

    /// `r*`, the dimension of `D_{P*}`.
    pub fn rank_star(&self) -> usize {
        self.defect_p_star.rank()
    }

    /// `Θ_P(z)` by a direct resolvent solve.
    pub fn theta_at(&self, z: C<T>) -> Result<CMatrix<T>> {
        let n = self.p.nrows();
        let resolvent = identity::<T>(n) - self.p.adjoint() * z;
        let smin = if n == 0 { T::one() } else { sigma_min(&resolvent) };
        if smin <= T::tol(tol::RESOLVENT) {
            return Err(GammaError::OutsideLambdaP {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                sigma_min: smin.as_f64(),
            });
        }
        let q = self.defect_p.q();
        let qs = self.defect_p_star.q();
        let rhs = &self.defect_p.d * q;
        let solved = resolvent
            .lu()
            .solve(&rhs)
            .ok_or(GammaError::OutsideLambdaP {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                sigma_min: 0.0,
            })?;
        let inner = -(&self.p * q) + &self.defect_p_star.d * solved * z;
        Ok(qs.adjoint() * inner)
    }

    /// `Σ_{k<N} z^k Θ_k`.
    pub fn theta_series(&self, z: C<T>) -> CMatrix<T> {
        let mut acc = CMatrix::zeros(self.rank_star(), self.rank());
        let mut zk = re(T::one());
        for c in &self.coeffs {
            acc += c * zk;
            zk *= z;
        }
        acc
    }

    /// `(I − Θ(w)Θ(z)*) − (1 − wz̄) D_{P*}(I − wP*)^{-1}(I − z̄P)^{-1}D_{P*}`
    /// on `D_{P*}`, in Frobenius norm.
    pub fn kernel_identity_residual(&self, z: C<T>, w: C<T>) -> Result<T> {
        let n = self.p.nrows();
        let rs = self.rank_star();
        let tw = self.theta_at(w)?;
        let tz = self.theta_at(z)?;
        let lhs = identity::<T>(rs) - &tw * tz.adjoint();
        let qs = self.defect_p_star.q();
        let dq = &self.defect_p_star.d * qs;
        let id = identity::<T>(n);
        let rz = (&id - &self.p * z.conj())
            .lu()
            .solve(&dq)
            .ok_or_else(|| outside(z))?;
        let inner = (&id - self.p.adjoint() * w)
            .lu()
            .solve(&rz)
            .ok_or_else(|| outside(w))?;
        let rhs = dq.adjoint() * inner * (re(T::one()) - w * z.conj());
        Ok(fro(&(lhs - rhs)))
    }
}

fn outside<T: Real>(z: C<T>) -> GammaError {
    GammaError::OutsideLambdaP {
        re: z.re.as_f64(),
        im: z.im.as_f64(),
        sigma_min: 0.0,
    }
}

/// Lower block-Toeplitz compression of `M_Θ` to polynomials of degree
/// `< n_blocks`: block `(i, j)` is `Θ_{i−j}` for `i ≥ j`.
pub fn toeplitz_mult<T: Real>(cf: &CharFn<T>, n_blocks: usize) -> CMatrix<T> {
    let (rs, r) = (cf.rank_star(), cf.rank());
    let mut m = CMatrix::zeros(n_blocks * rs, n_blocks * r);
    for j in 0..n_blocks {
        for i in j..n_blocks {
            if let Some(c) = cf.coeffs.get(i - j) {
                m.view_mut((i * rs, j * r), (rs, r)).copy_from(c);
            }
        }
    }
    m
}

/// Radii `{0, 0.3, 0.6, 0.9}` times 16 equispaced angles.
pub fn default_grid<T: Real>() -> Vec<C<T>> {
    let mut g = Vec::with_capacity(64);
    for &r in &[0.0, 0.3, 0.6, 0.9] {
        for k in 0..16 {
            let th = std::f64::consts::TAU * k as f64 / 16.0;
            g.push(cis(T::lit(th)) * re(T::lit(r)));
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidence<T: Real> {
    /// `max_z ‖σ* Θ_A(z) − Θ_B(z) σ‖_F`, infinite when ranks differ.
    pub max_residual: T,
    pub rank_mismatch: bool,
}

impl<T: Real> Coincidence<T> {
    pub fn coincide(&self) -> bool {
        !self.rank_mismatch && self.max_residual <= T::tol(tol::COINCIDE)
    }
}

/// Tests `σ* ∘ Θ_A(z) = Θ_B(z) ∘ σ` over `grid`, with `σ: D_{P_A} → D_{P_B}`
/// and `σ*: D_{P_A*} → D_{P_B*}` in defect coordinates.
pub fn coincide_check<T: Real>(
    a: &CharFn<T>,
    b: &CharFn<T>,
    sigma: &CMatrix<T>,
    sigma_star: &CMatrix<T>,
    grid: &[C<T>],
) -> Result<Coincidence<T>> {
    let mismatch = Coincidence {
        max_residual: T::max_value().unwrap_or_else(T::one),
        rank_mismatch: true,
    };
    if a.rank() != b.rank() || a.rank_star() != b.rank_star() {
        return Ok(mismatch);
    }
    if sigma.shape() != (b.rank(), a.rank()) || sigma_star.shape() != (b.rank_star(), a.rank_star()) {
        return Err(GammaError::DimensionMismatch(format!(
            "σ is {}×{}, σ* is {}×{}; defect ranks are {} and {}",
            sigma.nrows(),
            sigma.ncols(),
            sigma_star.nrows(),
            sigma_star.ncols(),
            a.rank(),
            a.rank_star()
        )));
    }
    let mut worst = T::zero();
    for &z in grid {
        let ta = a.theta_at(z)?;
        let tb = b.theta_at(z)?;
        let res = fro(&(sigma_star * ta - tb * sigma));
        if res > worst {
            worst = res;
        }
    }
    Ok(Coincidence {
        max_residual: worst,
        rank_mismatch: false,
    })
}

/// `‖P^N‖_op`.
pub fn power_tail<T: Real>(p: &CMatrix<T>, n: usize) -> T {
    let mut pk = identity::<T>(p.nrows());
    for _ in 0..n {
        pk = &pk * p;
    }
    op_norm(&pk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_disc_point, random_unitary};
    use crate::pair::random_pure_gamma;
    use crate::scalar::{c, cabs};
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_cf(p: f64, n: usize) -> CharFn<f64> {
        CharFn::new(&DMatrix::from_element(1, 1, c(p, 0.0)), n).unwrap()
    }

    #[test]
    fn theta_examples() {
        let cf = CharFn::new(&CMatrix::<f64>::zeros(3, 3), 4).unwrap();
        let z = c(0.3, -0.2);
        assert!(fro(&(cf.theta_at(z).unwrap() - identity::<f64>(3) * z)) < 1e-15);
        assert!(fro(&(&cf.coeffs[1] - identity::<f64>(3))) < 1e-15);
        assert!(fro(&cf.coeffs[2]) < 1e-15 && fro(&cf.coeffs[0]) < 1e-15);

        let cf = scalar_cf(0.25, 8);
        assert!(cabs(cf.theta_at(c(0.5, 0.0)).unwrap()[(0, 0)] - c(2.0 / 7.0, 0.0)) < 1e-15);
        assert!(cabs(cf.coeffs[1][(0, 0)] - c(15.0 / 16.0, 0.0)) < 1e-15);

        let pair = random_pure_gamma::<f64>(5, 4);
        let cf = CharFn::new(pair.p(), 2).unwrap();
        assert!(fro(&(cf.theta_at(c(0.0, 0.0)).unwrap() - &cf.coeffs[0])) < 1e-15);
    }

    #[test]
    fn scalar_is_a_mobius_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let p: C<f64> = random_disc_point(&mut rng, 0.95);
            let z: C<f64> = random_disc_point(&mut rng, 0.99);
            let cf = CharFn::new(&DMatrix::from_element(1, 1, p), 1).unwrap();
            let th = cf.theta_at(z).unwrap()[(0, 0)];
            let oracle = (z - p) / (c::<f64>(1.0, 0.0) - p.conj() * z);
            assert!(cabs(th - oracle) < 1e-13);
        }
    }

    #[test]
    fn series_resums_to_theta() {
        for seed in 0..10 {
            let pair = random_pure_gamma::<f64>(4, seed);
            if crate::matcore::spectral_radius(pair.p()) > 0.8 {
                continue;
            }
            let cf = CharFn::new(pair.p(), 60).unwrap();
            let z = c(0.3, 0.0);
            assert!(fro(&(cf.theta_series(z) - cf.theta_at(z).unwrap())) <= 1e-10);
        }
    }

    #[test]
    fn toeplitz_examples() {
        let cf = CharFn::new(&CMatrix::<f64>::zeros(2, 2), 2).unwrap();
        let m = toeplitz_mult(&cf, 2);
        let mut shift = CMatrix::<f64>::zeros(4, 4);
        shift.view_mut((2, 0), (2, 2)).copy_from(&identity::<f64>(2));
        assert!(fro(&(m - shift)) < 1e-15);

        let p = 0.4;
        let m = toeplitz_mult(&scalar_cf(p, 3), 3);
        let sym = [-p, 1.0 - p * p, p * (1.0 - p * p)];
        for i in 0..3 {
            for j in 0..3 {
                let want = if i >= j { sym[i - j] } else { 0.0 };
                assert!((m[(i, j)].re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn leading_block_columns_are_isometric() {
        for seed in 0..5 {
            let pair = random_pure_gamma::<f64>(3, seed);
            let n = 160;
            let cf = CharFn::new(pair.p(), n).unwrap();
            let m = toeplitz_mult(&cf, n);
            let r = cf.rank();
            let lead = m.columns(0, (n / 2) * r).into_owned();
            let defect = fro(&(lead.adjoint() * &lead - identity::<f64>((n / 2) * r)));
            let tail = power_tail(pair.p(), n / 2);
            assert!(defect <= 1e-10 + 10.0 * tail, "seed {seed}: {defect} vs tail {tail}");
        }
    }

    #[test]
    fn coincidence_examples() {
        let pair = random_pure_gamma::<f64>(4, 2);
        let cf = CharFn::new(pair.p(), 1).unwrap();
        let grid = default_grid::<f64>();
        assert_eq!(grid.len(), 64);
        let id = identity::<f64>(cf.rank());
        let ids = identity::<f64>(cf.rank_star());
        let res = coincide_check(&cf, &cf, &id, &ids, &grid).unwrap();
        assert!(res.max_residual < 1e-15 && res.coincide());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_unitary::<f64, _>(4, &mut rng);
        let pb = &v * pair.p() * v.adjoint();
        let cfb = CharFn::new(&pb, 1).unwrap();
        let sigma = cfb.defect_p.q().adjoint() * &v * cf.defect_p.q();
        let sigma_star = cfb.defect_p_star.q().adjoint() * &v * cf.defect_p_star.q();
        let res = coincide_check(&cf, &cfb, &sigma, &sigma_star, &grid).unwrap();
        assert!(res.max_residual <= 1e-10, "{}", res.max_residual);

        let a = scalar_cf(0.25, 1);
        let b = scalar_cf(0.5, 1);
        for k in 0..8 {
            let s1 = DMatrix::from_element(1, 1, cis(k as f64));
            let s2 = DMatrix::from_element(1, 1, cis(0.7 * k as f64));
            let res = coincide_check(&a, &b, &s1, &s2, &grid).unwrap();
            assert!(res.max_residual >= 0.25 - 1e-12 && !res.coincide());
        }

        let small = CharFn::new(&CMatrix::<f64>::zeros(2, 2), 1).unwrap();
        let res = coincide_check(&cf, &small, &id, &ids, &grid).unwrap();
        assert!(res.rank_mismatch && !res.coincide());
    }

    #[test]
    fn kernel_identity_and_contractivity() {
        let grid: Vec<C<f64>> = default_grid();
        for seed in 0..4 {
            let pair = random_pure_gamma::<f64>(5, seed);
            let cf = CharFn::new(pair.p(), 1).unwrap();
            for &z in grid.iter().step_by(7) {
                for &w in grid.iter().step_by(5) {
                    assert!(cf.kernel_identity_residual(z, w).unwrap() <= 1e-9);
                }
            }
            for k in 0..32 {
                let z = cis(k as f64 * 0.196) * 0.99;
                assert!(op_norm(&cf.theta_at(z).unwrap()) <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn outside_lambda_p_is_rejected() {
        let cf = scalar_cf(0.5, 1);
        assert!(matches!(
            cf.theta_at(c(2.0, 0.0)),
            Err(GammaError::OutsideLambdaP { .. })
        ));
        assert!(cf.theta_at(c(1.5, 0.0)).is_ok());
    }
}
