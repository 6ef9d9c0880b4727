//! Functional model of a pure pair on a truncation of `H²(𝔻) ⊗ D_{P*}`.
//!
//! Vectors of the truncated space are stacked blocks `x_0, …, x_{N−1}`, each
//! in `D_{P*}` coordinates. The embedding is `W h = (D_{P*}P*^k h)_k` and the
//! dilation pair is `T = I ⊗ F_*^* + Z ⊗ F_*`, `V = Z ⊗ I` with `Z` the
//! truncated shift.

use std::collections::BTreeMap;

use crate::charfn::{power_tail, CharFn};
use crate::error::{GammaError, Result};
use crate::fundamental::{solve_fundamental, FundamentalPair};
use crate::matcore::{fro, identity, op_norm, svd_sorted, RangeBasis};
use crate::pair::{is_pure, GammaPair};
use crate::scalar::{tol, CMatrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Fixed(usize),
    /// Smallest `N` with `‖P^N‖ ≤ 1e-12`, at most 4096.
    Auto,
}

/// `T` and `V` on `N` blocks of size `r*`, applied blockwise.
#[derive(Debug, Clone)]
pub struct TruncatedDilation<T: Real> {
    pub f_star: CMatrix<T>,
    pub n_blocks: usize,
}

impl<T: Real> TruncatedDilation<T> {
    pub fn block(&self) -> usize {
        self.f_star.nrows()
    }

    pub fn dim(&self) -> usize {
        self.block() * self.n_blocks
    }

    fn map_blocks(&self, x: &CMatrix<T>, f: impl Fn(usize, &mut CMatrix<T>)) -> CMatrix<T> {
        assert_eq!(x.nrows(), self.dim(), "vector does not live on the truncated space");
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for k in 0..self.n_blocks {
            let mut blk = CMatrix::zeros(self.block(), x.ncols());
            f(k, &mut blk);
            out.view_mut((k * self.block(), 0), (self.block(), x.ncols())).copy_from(&blk);
        }
        out
    }

    fn blk(&self, x: &CMatrix<T>, k: usize) -> CMatrix<T> {
        x.rows(k * self.block(), self.block()).into_owned()
    }

    /// `(Tx)_k = F_*^* x_k + F_* x_{k−1}`.
    pub fn apply_t(&self, x: &CMatrix<T>) -> CMatrix<T> {
        let fa = self.f_star.adjoint();
        self.map_blocks(x, |k, out| {
            *out = &fa * self.blk(x, k);
            if k > 0 {
                *out += &self.f_star * self.blk(x, k - 1);
            }
        })
    }

    /// `(T*x)_k = F_* x_k + F_*^* x_{k+1}`.
    pub fn apply_t_adjoint(&self, x: &CMatrix<T>) -> CMatrix<T> {
        let fa = self.f_star.adjoint();
        self.map_blocks(x, |k, out| {
            *out = &self.f_star * self.blk(x, k);
            if k + 1 < self.n_blocks {
                *out += &fa * self.blk(x, k + 1);
            }
        })
    }

    /// `(Vx)_k = x_{k−1}`.
    pub fn apply_v(&self, x: &CMatrix<T>) -> CMatrix<T> {
        self.map_blocks(x, |k, out| {
            if k > 0 {
                *out = self.blk(x, k - 1);
            }
        })
    }

    /// `(V*x)_k = x_{k+1}`.
    pub fn apply_v_adjoint(&self, x: &CMatrix<T>) -> CMatrix<T> {
        self.map_blocks(x, |k, out| {
            if k + 1 < self.n_blocks {
                *out = self.blk(x, k + 1);
            }
        })
    }

    pub fn t_dense(&self) -> CMatrix<T> {
        self.apply_t(&identity::<T>(self.dim()))
    }

    pub fn v_dense(&self) -> CMatrix<T> {
        self.apply_v(&identity::<T>(self.dim()))
    }
}

#[derive(Debug, Clone)]
pub struct ModelData<T: Real> {
    pub n_trunc: usize,
    /// `(N·r*) × n`.
    pub w: CMatrix<T>,
    /// Polar factor of `W`: orthonormal basis of `Ran W`.
    pub model_basis: RangeBasis<T>,
    /// Compressions `B*TB`, `B*VB`.
    pub s1: CMatrix<T>,
    pub p1: CMatrix<T>,
    pub dilation: TruncatedDilation<T>,
    pub residuals: BTreeMap<&'static str, T>,
    /// `‖P^N‖_op`.
    pub tail: T,
}

impl<T: Real> ModelData<T> {
    pub fn residual(&self, key: &str) -> T {
        self.residuals.get(key).copied().unwrap_or_else(T::zero)
    }

    pub fn max_residual(&self) -> T {
        self.residuals
            .values()
            .copied()
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}

/// Resolves the truncation degree.
pub fn truncation_degree<T: Real>(p: &CMatrix<T>, trunc: Truncation) -> Result<usize> {
    if !is_pure(p) {
        return Err(GammaError::NotPure {
            spectral_radius: crate::matcore::spectral_radius(p).as_f64(),
        });
    }
    match trunc {
        Truncation::Fixed(n) => Ok(n.max(1)),
        Truncation::Auto => {
            let target = T::tol(tol::AUTO_TAIL);
            let n = p.nrows();
            let sqrt_n = T::lit((n.max(1) as f64).sqrt());
            let mut pk = identity::<T>(n);
            let mut last = T::one();
            for k in 1..=tol::N_MAX {
                pk = &pk * p;
                let f = fro(&pk);
                // ‖·‖_op ≤ ‖·‖_F ≤ √n ‖·‖_op
                if f <= target {
                    return Ok(k);
                }
                if f <= target * sqrt_n {
                    last = op_norm(&pk);
                    if last <= target {
                        return Ok(k);
                    }
                } else {
                    last = f;
                }
            }
            Err(GammaError::TruncationCapExceeded {
                cap: tol::N_MAX,
                tail: last.as_f64(),
            })
        }
    }
}

/// `W` with block `k` equal to `Q_*^* D_{P*} P*^k`.
pub fn embed_w<T: Real>(pair: &GammaPair<T>, fp: &FundamentalPair<T>, n_trunc: usize) -> CMatrix<T> {
    let n = pair.dim();
    let dps = &fp.defect_p_star;
    let rs = dps.rank();
    let mut w = CMatrix::zeros(n_trunc * rs, n);
    let mut blk = dps.rep();
    let ps = pair.p().adjoint();
    for k in 0..n_trunc {
        w.view_mut((k * rs, 0), (rs, n)).copy_from(&blk);
        blk *= &ps;
    }
    w
}

/// Frobenius norm of `Π_W + M_Θ M_Θ^* − I` on the truncated space, computed
/// blockwise without forming either operator.
pub fn toeplitz_residual<T: Real>(basis: &CMatrix<T>, cf: &CharFn<T>, n_trunc: usize) -> T {
    let rs = cf.rank_star();
    if rs == 0 {
        return T::zero();
    }
    let b = |k: usize| basis.rows(k * rs, rs).into_owned();
    let id = identity::<T>(rs);
    let zero_coeff = CMatrix::zeros(rs, cf.rank());
    let theta = |k: usize| cf.coeffs.get(k).unwrap_or(&zero_coeff).clone();
    let mut sum = T::zero();
    for d in 0..n_trunc {
        // G_{j, j+d} = Σ_{l ≤ j} Θ_{j−l} Θ_{j+d−l}^*, advanced along the diagonal
        let mut g = CMatrix::<T>::zeros(rs, rs);
        for j in 0..(n_trunc - d) {
            let k = j + d;
            g += theta(j) * theta(k).adjoint();
            let mut e = b(j) * b(k).adjoint() + &g;
            if d == 0 {
                e -= &id;
            }
            let f2 = e.norm_squared();
            sum += if d == 0 { f2 } else { f2 + f2 };
        }
    }
    sum.sqrt()
}

pub fn model_space<T: Real>(
    pair: &GammaPair<T>,
    fp: &FundamentalPair<T>,
    trunc: Truncation,
) -> Result<(usize, CMatrix<T>, RangeBasis<T>, T)> {
    let n_trunc = truncation_degree(pair.p(), trunc)?;
    let w = embed_w(pair, fp, n_trunc);
    let basis = polar_basis(&w);
    let tail = power_tail(pair.p(), n_trunc);
    Ok((n_trunc, w, basis, tail))
}

fn polar_basis<T: Real>(w: &CMatrix<T>) -> RangeBasis<T> {
    let svd = svd_sorted(w);
    let rank = svd.s.len();
    RangeBasis {
        q: &svd.u * svd.v.adjoint(),
        rank,
        sigma_min_kept: svd.s.last().copied().unwrap_or_else(T::zero),
        sigma_max_dropped: T::zero(),
    }
}

/// Builds the full model with its residual ledger:
///
/// - `isometry_defect`: `‖W*W − I‖_F`
/// - `toeplitz_residual`: `‖Π_W + M_Θ M_Θ^* − I‖_F`
/// - `intertwine_S`, `intertwine_P`: `‖WS* − T*W‖_F`, `‖WP* − V*W‖_F`
/// - `key_identity_H`: `‖D_{P*}F_*^* + P D_{P*}F_* − S D_{P*}‖_F`
/// - `coinvariance_T`, `coinvariance_V`: `‖(I − Π_W) T* Π_W‖_F` and the same for `V`
/// - `model_S_mismatch`, `model_P_mismatch`: `‖B*TB − S‖_F`, `‖B*VB − P‖_F`
pub fn build_model<T: Real>(pair: &GammaPair<T>, trunc: Truncation) -> Result<ModelData<T>> {
    let fp = solve_fundamental(pair)?;
    model_operators(pair, &fp, trunc)
}

pub fn model_operators<T: Real>(
    pair: &GammaPair<T>,
    fp: &FundamentalPair<T>,
    trunc: Truncation,
) -> Result<ModelData<T>> {
    let (n_trunc, w, basis, tail) = model_space(pair, fp, trunc)?;
    let n = pair.dim();
    let dilation = TruncatedDilation {
        f_star: fp.f_star.clone(),
        n_blocks: n_trunc,
    };
    let b = &basis.q;
    let s1 = b.adjoint() * dilation.apply_t(b);
    let p1 = b.adjoint() * dilation.apply_v(b);

    let mut residuals = BTreeMap::new();
    residuals.insert("isometry_defect", fro(&(w.adjoint() * &w - identity::<T>(n))));
    let cf = CharFn::from_defects(
        pair.p(),
        fp.defect_p.clone(),
        fp.defect_p_star.clone(),
        n_trunc,
    );
    residuals.insert("toeplitz_residual", toeplitz_residual(b, &cf, n_trunc));
    residuals.insert(
        "intertwine_S",
        fro(&(&w * pair.s().adjoint() - dilation.apply_t_adjoint(&w))),
    );
    residuals.insert(
        "intertwine_P",
        fro(&(&w * pair.p().adjoint() - dilation.apply_v_adjoint(&w))),
    );
    residuals.insert("key_identity_H", key_identity(pair, fp));
    let coinv = |img: CMatrix<T>| fro(&(&img - b * (b.adjoint() * &img)));
    residuals.insert("coinvariance_T", coinv(dilation.apply_t_adjoint(b)));
    residuals.insert("coinvariance_V", coinv(dilation.apply_v_adjoint(b)));
    residuals.insert("model_S_mismatch", fro(&(&s1 - pair.s())));
    residuals.insert("model_P_mismatch", fro(&(&p1 - pair.p())));

    Ok(ModelData {
        n_trunc,
        w,
        model_basis: basis,
        s1,
        p1,
        dilation,
        residuals,
        tail,
    })
}

/// `‖D_{P*}F_*^* + P D_{P*}F_* − S D_{P*}‖_F` on `D_{P*}`, ambient coordinates.
pub fn key_identity<T: Real>(pair: &GammaPair<T>, fp: &FundamentalPair<T>) -> T {
    let dps = &fp.defect_p_star;
    let dq = &dps.d * dps.q();
    let h = &dq * fp.f_star.adjoint() + pair.p() * &dq * &fp.f_star - pair.s() * &dq;
    fro(&h)
}

/// The residual ledger of [`build_model`].
pub fn verify_model<T: Real>(pair: &GammaPair<T>, trunc: Truncation) -> Result<BTreeMap<&'static str, T>> {
    build_model(pair, trunc).map(|md| md.residuals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::{random_pure_gamma, vn_probe};
    use crate::scalar::{c, cabs};
    use nalgebra::DMatrix;

    fn scalar(s: f64, p: f64) -> GammaPair<f64> {
        GammaPair::validate(
            DMatrix::from_element(1, 1, c(s, 0.0)),
            DMatrix::from_element(1, 1, c(p, 0.0)),
        )
        .unwrap()
    }

    #[test]
    fn zero_pair_model() {
        let z = GammaPair::validate(CMatrix::<f64>::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(truncation_degree(z.p(), Truncation::Auto).unwrap(), 1);
        let md = build_model(&z, Truncation::Auto).unwrap();
        assert!(md.max_residual() < 1e-15, "{:?}", md.residuals);
        assert!(fro(&(&md.w - identity::<f64>(2))) < 1e-15);
        assert!(fro(&md.p1) < 1e-15);
        let md = build_model(&z, Truncation::Fixed(3)).unwrap();
        assert!(md.max_residual() < 1e-15);
        assert!(fro(&md.w.rows(2, 4).into_owned()) == 0.0);
    }

    #[test]
    fn scalar_model() {
        let pair = scalar(1.0, 0.25);
        let md = build_model(&pair, Truncation::Fixed(80)).unwrap();
        assert!(md.residual("toeplitz_residual") <= 1e-9);
        assert!(cabs(md.s1[(0, 0)] - c(1.0, 0.0)) < 1e-9);
        assert!(cabs(md.p1[(0, 0)] - c(0.25, 0.0)) < 1e-9);
        assert!(md.residual("key_identity_H") < 1e-15);
        // ‖Wh‖² = (1 − p²) Σ_{k<N} p^{2k}
        let md = build_model(&pair, Truncation::Fixed(5)).unwrap();
        let want = 1.0 - 0.25f64.powi(10);
        assert!(((md.w.adjoint() * &md.w)[(0, 0)].re - want).abs() < 1e-15);
    }

    #[test]
    fn not_pure_is_rejected() {
        let pair = scalar(2.0, 1.0);
        assert!(matches!(
            build_model(&pair, Truncation::Auto),
            Err(GammaError::NotPure { .. })
        ));
        let slow = scalar(2.0 * 0.999_999_9, 0.999_999_9 * 0.999_999_9);
        assert!(matches!(
            truncation_degree(slow.p(), Truncation::Auto),
            Err(GammaError::TruncationCapExceeded { .. })
        ));
    }

    #[test]
    fn random_pure_pairs_reproduce() {
        for seed in 0..12u64 {
            let n = 1 + seed as usize % 10;
            let pair = random_pure_gamma::<f64>(n, 500 + seed);
            let md = build_model(&pair, Truncation::Auto).unwrap();
            let bound = 1e-8 * (1.0 + pair.norm_s);
            for (k, v) in &md.residuals {
                assert!(*v <= bound, "seed {seed} {k}: {v}");
            }
            assert!(md.tail <= 1e-12);
            assert_eq!(md.model_basis.rank, n);
        }
    }

    #[test]
    fn model_pair_is_pure_and_passes_probe() {
        let pair = random_pure_gamma::<f64>(4, 9);
        let md = build_model(&pair, Truncation::Auto).unwrap();
        let model = GammaPair::validate(md.s1.clone(), md.p1.clone()).unwrap();
        assert!(is_pure(model.p()));
        assert!(vn_probe(&model, 30, 3, 4).worst_ratio <= 1.0 + 1e-6);
    }

    #[test]
    fn residuals_shrink_with_truncation() {
        let pair = random_pure_gamma::<f64>(5, 31);
        let mut prev = f64::INFINITY;
        for n in [4usize, 8, 16, 32] {
            let md = build_model(&pair, Truncation::Fixed(n)).unwrap();
            let r = md.residual("intertwine_S") + md.residual("isometry_defect");
            assert!(r <= prev * 1.1, "N = {n}: {r} after {prev}");
            prev = r;
        }
    }

    #[test]
    fn l_action_on_monomials() {
        let pair = random_pure_gamma::<f64>(4, 13);
        let fp = solve_fundamental(&pair).unwrap();
        let n_trunc = 12;
        let w = embed_w(&pair, &fp, n_trunc);
        let rs = fp.defect_p_star.rank();
        let dq = &fp.defect_p_star.d * fp.defect_p_star.q();
        let mut pk = identity::<f64>(4);
        for k in 0..n_trunc {
            let wk_adj = w.rows(k * rs, rs).adjoint();
            assert!(fro(&(wk_adj - &pk * &dq)) < 1e-13);
            pk = &pk * pair.p();
        }
    }

    #[test]
    fn structured_dilation_matches_dense() {
        let pair = random_pure_gamma::<f64>(3, 2);
        let fp = solve_fundamental(&pair).unwrap();
        let dil = TruncatedDilation {
            f_star: fp.f_star.clone(),
            n_blocks: 4,
        };
        let t = dil.t_dense();
        let v = dil.v_dense();
        let x = crate::matcore::random_gaussian::<f64, _>(
            dil.dim(),
            2,
            &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1),
        );
        assert!(fro(&(dil.apply_t_adjoint(&x) - t.adjoint() * &x)) < 1e-14);
        assert!(fro(&(dil.apply_v_adjoint(&x) - v.adjoint() * &x)) < 1e-14);
        // V is the nilpotent shift ⊗ I
        let mut vn = identity::<f64>(dil.dim());
        for _ in 0..4 {
            vn = &v * vn;
        }
        assert!(fro(&vn) == 0.0);
    }
}
