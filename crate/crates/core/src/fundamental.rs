//! Defect operators and the fundamental operator equations
//! `S − S*P = D_P F D_P` and `S* − SP* = D_{P*} F_* D_{P*}`.

use crate::error::{GammaError, Result};
use crate::matcore::{
    fro, herm_sqrt_psd_with, identity, numerical_radius, op_norm, pinv, range_onb, sigma_min,
    RangeBasis,
};
use crate::pair::GammaPair;
use crate::scalar::{tol, CMatrix, Real};

/// Which defect: `D_P = (I − P*P)^{1/2}` or `D_{P*} = (I − PP*)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectSide {
    P,
    PStar,
}

#[derive(Debug, Clone)]
pub struct DefectData<T: Real> {
    /// Ambient `n × n` defect operator.
    pub d: CMatrix<T>,
    pub basis: RangeBasis<T>,
    pub side: DefectSide,
}

impl<T: Real> DefectData<T> {
    pub fn rank(&self) -> usize {
        self.basis.rank
    }

    pub fn q(&self) -> &CMatrix<T> {
        &self.basis.q
    }

    /// `Q* D`, the `r × n` map `h ↦ D h` in defect-basis coordinates.
    pub fn rep(&self) -> CMatrix<T> {
        self.basis.q.adjoint() * &self.d
    }

    /// `Q* D Q`, positive definite on the defect space.
    pub fn compressed(&self) -> CMatrix<T> {
        self.basis.q.adjoint() * &self.d * &self.basis.q
    }

    /// Lifts an `r × r` defect-space operator to `Q X Q*`.
    pub fn lift(&self, x: &CMatrix<T>) -> CMatrix<T> {
        &self.basis.q * x * self.basis.q.adjoint()
    }
}

// Gramian eigenvalues this close to zero are treated as exact zeros. Without
// the band, rounding noise of 1e-16 would surface as singular values of 1e-8
// in the square root and be kept by the rank cut.
const DEFECT_ZERO_BAND: f64 = 1e-12;
// ‖P‖ ≤ 1 + 1e-10 lets I − P*P dip to about −2e-10.
const DEFECT_NEG: f64 = 3e-10;

pub fn defect<T: Real>(p: &CMatrix<T>, side: DefectSide) -> Result<DefectData<T>> {
    let norm = op_norm(p);
    if norm > T::one() + T::tol(tol::CONTRACTION) {
        return Err(GammaError::NotContraction {
            norm: norm.as_f64(),
        });
    }
    let n = p.nrows();
    let gram = match side {
        DefectSide::P => identity::<T>(n) - p.adjoint() * p,
        DefectSide::PStar => identity::<T>(n) - p * p.adjoint(),
    };
    let d = herm_sqrt_psd_with(
        &gram,
        T::tol(tol::HERM),
        T::tol(DEFECT_NEG),
        T::tol(DEFECT_ZERO_BAND),
    )?;
    let basis = range_onb(&d, T::tol(tol::RANK_REL));
    Ok(DefectData { d, basis, side })
}

/// Fundamental operators of `(S, P)` and `(S*, P*)`, each stored in the
/// orthonormal basis of its own defect space.
#[derive(Debug, Clone)]
pub struct FundamentalPair<T: Real> {
    /// `r × r`, in the `D_P` basis.
    pub f: CMatrix<T>,
    /// `r* × r*`, in the `D_{P*}` basis.
    pub f_star: CMatrix<T>,
    pub residual_f: T,
    pub residual_f_star: T,
    pub w_f: T,
    pub w_f_star: T,
    pub defect_p: DefectData<T>,
    pub defect_p_star: DefectData<T>,
    /// `σ_min(D_P Q)`, zero when the defect space is trivial.
    pub sigma_min_a: T,
    pub sigma_min_a_star: T,
    /// `‖P D_P − D_{P*} P‖_F`.
    pub intertwining: T,
}

impl<T: Real> FundamentalPair<T> {
    pub fn f_ambient(&self) -> CMatrix<T> {
        self.defect_p.lift(&self.f)
    }

    pub fn f_star_ambient(&self) -> CMatrix<T> {
        self.defect_p_star.lift(&self.f_star)
    }

    /// Residual threshold `scale · (1 + ‖S‖)`.
    pub fn within(&self, pair: &GammaPair<T>, scale: f64) -> bool {
        let bound = T::tol(scale) * (T::one() + pair.norm_s);
        self.residual_f <= bound && self.residual_f_star <= bound
    }
}

struct Solved<T: Real> {
    x: CMatrix<T>,
    residual: T,
    w: T,
    sigma_min: T,
}

// Solves `rhs = A X A*` for `A = D Q` of full column rank.
fn solve_side<T: Real>(def: &DefectData<T>, rhs: &CMatrix<T>) -> Solved<T> {
    if def.rank() == 0 {
        return Solved {
            x: CMatrix::zeros(0, 0),
            residual: fro(rhs),
            w: T::zero(),
            sigma_min: T::zero(),
        };
    }
    let a = &def.d * def.q();
    let a_pinv = pinv(&a);
    let x = &a_pinv * rhs * a_pinv.adjoint();
    let residual = fro(&(&a * &x * a.adjoint() - rhs));
    Solved {
        w: numerical_radius(&x),
        sigma_min: sigma_min(&a),
        x,
        residual,
    }
}

pub fn solve_fundamental<T: Real>(pair: &GammaPair<T>) -> Result<FundamentalPair<T>> {
    let (s, p) = (pair.s(), pair.p());
    let defect_p = defect(p, DefectSide::P)?;
    let defect_p_star = defect(p, DefectSide::PStar)?;
    let lhs = s - s.adjoint() * p;
    let lhs_star = s.adjoint() - s * p.adjoint();
    let one = solve_side(&defect_p, &lhs);
    let two = solve_side(&defect_p_star, &lhs_star);
    let intertwining = fro(&(p * &defect_p.d - &defect_p_star.d * p));
    Ok(FundamentalPair {
        f: one.x,
        f_star: two.x,
        residual_f: one.residual,
        residual_f_star: two.residual,
        w_f: one.w,
        w_f_star: two.w,
        sigma_min_a: one.sigma_min,
        sigma_min_a_star: two.sigma_min,
        defect_p,
        defect_p_star,
        intertwining,
    })
}

/// `‖P F Π_P − F_*^* P Π_P‖_F` with both operators lifted to the ambient
/// space and `Π_P` the projector onto the `D_P` range.
pub fn check_pf_intertwining<T: Real>(pair: &GammaPair<T>, fp: &FundamentalPair<T>) -> T {
    let pi = fp.defect_p.basis.projector();
    let p = pair.p();
    let lhs = p * fp.f_ambient() * &pi;
    let rhs = fp.f_star_ambient().adjoint() * p * &pi;
    fro(&(lhs - rhs))
}
