//! Scalar abstraction and the shared tolerance table.
//!
//! Every numerical routine in the crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances are written once, in double
//! precision units, and mapped onto the working precision by [`Real::tol`].

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the dense algorithms run over.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Converts a double-precision tolerance into one with the same number
    /// of "digits below machine precision" for this type.
    fn tol(t: f64) -> Self;

    /// Lossy literal conversion.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn tol(t: f64) -> f64 {
        t
    }
}

impl Real for f32 {
    // log-scale remap: a tolerance k decades above f64 epsilon lands the same
    // fraction of the way up from f32 epsilon
    #[inline]
    fn tol(t: f64) -> f32 {
        let ratio = (f32::EPSILON as f64).ln() / f64::EPSILON.ln();
        t.powf(ratio) as f32
    }
}

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn cabs<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}

/// Tolerances shared by all modules, in f64 units.
pub mod tol {
    /// Relative singular-value cut for range bases.
    pub const RANK_REL: f64 = 1e-10;
    /// Eigenvalues of Gramians within this band of zero are set to zero.
    pub const CLAMP_EIG: f64 = 1e-12;
    /// Relative Hermitian-ness and normality tolerance.
    pub const HERM: f64 = 1e-10;
    /// Commutation tolerance, scaled by `1 + ‖S‖‖P‖`.
    pub const COMM: f64 = 1e-10;
    /// Slack on `‖P‖ ≤ 1` and `‖S‖ ≤ 2`.
    pub const CONTRACTION: f64 = 1e-10;
    /// Pure iff spectral radius is below `1 - PURITY`.
    pub const PURITY: f64 = 1e-10;
    /// Absolute accuracy target of the numerical radius.
    pub const NUMRAD: f64 = 1e-10;
    /// Root-modulus band for point classification.
    pub const CLASSIFY: f64 = 1e-9;
    /// Minimal singular value of resolvents before they are declared singular.
    pub const RESOLVENT: f64 = 1e-12;
    /// Ratio above `1 + PROBE_CERT` certifies a pair is not a Γ-contraction.
    pub const PROBE_CERT: f64 = 1e-6;
    /// Target tail `‖P^N‖` for automatic truncation.
    pub const AUTO_TAIL: f64 = 1e-12;
    /// Hard cap on the automatic truncation degree.
    pub const N_MAX: usize = 4096;
    /// Coincidence of characteristic functions.
    pub const COINCIDE: f64 = 1e-8;
    /// Unitarity of witnesses.
    pub const UNITARY: f64 = 1e-10;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_map_identically_in_double() {
        assert_eq!(<f64 as Real>::tol(1e-10), 1e-10);
    }

    #[test]
    fn tolerances_stay_above_single_epsilon() {
        let t = <f32 as Real>::tol(1e-12);
        assert!(t > f32::EPSILON && t < 1e-3, "{t}");
        let t16 = <f32 as Real>::tol(f64::EPSILON);
        assert!((t16 / f32::EPSILON - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cis_is_unimodular() {
        let z = cis(0.7f64);
        assert!((cabs(z) - 1.0).abs() < 1e-15);
    }
}
