//! Transport of a pair by an automorphism `τ_m` of the symmetrized bidisc,
//! and the closed form of the transported fundamental operator.

use crate::domain::DiscAutomorphism;
use crate::error::{GammaError, Result};
use crate::fundamental::{defect, solve_fundamental, DefectSide};
use crate::matcore::{
    fro, herm_power_pd, identity, inverse, pinv, singular_values, unitarity_defect,
};
use crate::pair::GammaPair;
use crate::scalar::{re, tol, CMatrix, Real, C};

/// `I − āS + ā²P`.
fn resolvent_base<T: Real>(pair: &GammaPair<T>, a: C<T>) -> CMatrix<T> {
    let ab = a.conj();
    identity::<T>(pair.dim()) - pair.s() * ab + pair.p() * (ab * ab)
}

/// `(S_τ, P_τ)` together with the condition number of `I − āS + ā²P`.
pub fn transport_pair_cond<T: Real>(
    pair: &GammaPair<T>,
    m: &DiscAutomorphism<T>,
) -> Result<(GammaPair<T>, T)> {
    let n = pair.dim();
    let (a, beta) = (m.a(), m.beta());
    let r = resolvent_base(pair, a);
    let sv = singular_values(&r);
    let (smax, smin) = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) => (hi, lo),
        _ => (T::one(), T::one()),
    };
    if smin < T::tol(tol::RESOLVENT) {
        return Err(GammaError::SingularResolvent {
            sigma_min: smin.as_f64(),
        });
    }
    let r_inv = inverse(&r).ok_or(GammaError::SingularResolvent {
        sigma_min: smin.as_f64(),
    })?;
    let id = identity::<T>(n);
    let a2 = a.norm_sqr();
    let s_num = pair.s() * re(T::one() + a2) - pair.p() * (a.conj() * re(T::lit(2.0))) - &id * (a * re(T::lit(2.0)));
    let p_num = pair.p() - pair.s() * a + &id * (a * a);
    let s_tau = s_num * &r_inv * beta;
    let p_tau = p_num * &r_inv * (beta * beta);
    let out = GammaPair::validate(s_tau, p_tau)?;
    Ok((out, smax / smin))
}

pub fn transport_pair<T: Real>(pair: &GammaPair<T>, m: &DiscAutomorphism<T>) -> Result<GammaPair<T>> {
    transport_pair_cond(pair, m).map(|(p, _)| p)
}

/// `G = (1 + |a|²) − āF − aF*`, Hermitian.
fn g_matrix<T: Real>(f: &CMatrix<T>, a: C<T>) -> CMatrix<T> {
    let r = f.nrows();
    let g = identity::<T>(r) * re(T::one() + a.norm_sqr()) - f * a.conj() - f.adjoint() * a;
    (&g + g.adjoint()) * re(T::lit(0.5))
}

fn g_powers<T: Real>(f: &CMatrix<T>, a: C<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let g = g_matrix(f, a);
    let floor = T::tol(tol::RESOLVENT);
    Ok((herm_power_pd(&g, false, floor)?, herm_power_pd(&g, true, floor)?))
}

/// `U* G^{-1/2} β(F + a²F* − 2a) G^{-1/2} U`. `U` maps coordinates of the
/// transported defect space into those of `D_P`.
pub fn ftau_closed<T: Real>(f: &CMatrix<T>, m: &DiscAutomorphism<T>, u: &CMatrix<T>) -> Result<CMatrix<T>> {
    let r = f.nrows();
    if u.nrows() != r {
        return Err(GammaError::DimensionMismatch(format!(
            "U has {} rows, F is {r}×{r}",
            u.nrows()
        )));
    }
    if r == 0 {
        return Ok(CMatrix::zeros(u.ncols(), u.ncols()));
    }
    let (a, beta) = (m.a(), m.beta());
    let (_, g_inv_half) = g_powers(f, a)?;
    let middle = (f + f.adjoint() * (a * a) - identity::<T>(r) * (a * re(T::lit(2.0)))) * beta;
    Ok(u.adjoint() * &g_inv_half * middle * &g_inv_half * u)
}

#[derive(Debug, Clone)]
pub struct TransportResult<T: Real> {
    pub pair_tau: GammaPair<T>,
    /// `r × r_τ`: `U D_{P_τ} h = X h` in defect-basis coordinates.
    pub u: CMatrix<T>,
    pub f_tau_closed: CMatrix<T>,
    pub f_tau_direct: CMatrix<T>,
    pub crosscheck_residual: T,
    pub cond_resolvent: T,
    /// `‖X*X − D_{P_τ}²‖_F`.
    pub gram_residual: T,
    pub unitarity_defect: T,
}

/// Computes `F_τ` both by solving the fundamental equation for the
/// transported pair and through the closed formula with the unitary built
/// from `X = (1 − |a|²)^{1/2} G^{1/2} D_P (I − āS + ā²P)^{-1}`.
pub fn transport_crosscheck<T: Real>(
    pair: &GammaPair<T>,
    m: &DiscAutomorphism<T>,
) -> Result<TransportResult<T>> {
    let (pair_tau, cond_resolvent) = transport_pair_cond(pair, m)?;
    let fp = solve_fundamental(pair)?;
    let fp_tau = solve_fundamental(&pair_tau)?;
    let dp = &fp.defect_p;
    let dpt = defect(pair_tau.p(), DefectSide::P)?;
    if dp.rank() != dpt.rank() {
        return Err(GammaError::DefectRankMismatch {
            left: dp.rank(),
            right: dpt.rank(),
        });
    }
    let a = m.a();
    let r_inv = inverse(&resolvent_base(pair, a)).ok_or(GammaError::SingularResolvent {
        sigma_min: 0.0,
    })?;
    let (g_half, _) = g_powers(&fp.f, a)?;
    let x = &g_half * dp.rep() * r_inv * re((T::one() - a.norm_sqr()).sqrt());
    let gram_residual = fro(&(x.adjoint() * &x - &dpt.d * &dpt.d));
    let u = &x * pinv(&dpt.rep());
    let f_tau_closed = ftau_closed(&fp.f, m, &u)?;
    let crosscheck_residual = fro(&(&f_tau_closed - &fp_tau.f));
    Ok(TransportResult {
        pair_tau,
        unitarity_defect: unitarity_defect(&u),
        u,
        f_tau_closed,
        f_tau_direct: fp_tau.f,
        crosscheck_residual,
        cond_resolvent,
        gram_residual,
    })
}
