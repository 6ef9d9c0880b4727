//! Candidate Γ-contractions as matrix pairs: validation against necessary
//! conditions, purity, the von Neumann probe, the unitary/c.n.u. split and
//! deterministic generators.
//!
//! Nothing here certifies that a pair is a Γ-contraction. `validate` checks
//! necessary conditions and the probe can only certify the negative;
//! `symmetrized` pairs are Γ-contractions by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{classify_point, sup_norm_refined, BiPoly, Region, SymPoint};
use crate::error::{GammaError, Result};
use crate::matcore::{
    commutation_check, common_triangularization, eigenvalues, fro, identity, is_normal,
    kernel_split, op_norm, random_disc_point, random_gaussian, random_unitary,
};
use crate::scalar::{cabs, cis, re, tol, CMatrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PairFlags {
    pub commuting: bool,
    pub contraction: bool,
    /// `‖S‖ ≤ 2`.
    pub s_bounded: bool,
    pub spectrum_in_gamma: bool,
    pub pure: bool,
    /// `None` until a probe has been run.
    pub vn_probe_passed: Option<bool>,
}

/// A validated commuting pair `(S, P)` of square matrices.
#[derive(Debug, Clone)]
pub struct GammaPair<T: Real> {
    s: CMatrix<T>,
    p: CMatrix<T>,
    pub norm_s: T,
    pub norm_p: T,
    pub commutator: T,
    /// Joint eigenvalues read off a common triangularization.
    pub joint_spectrum: Vec<SymPoint<T>>,
    pub spectral_radius_p: T,
    pub flags: PairFlags,
}

impl<T: Real> GammaPair<T> {
    pub fn validate(s: CMatrix<T>, p: CMatrix<T>) -> Result<Self> {
        if !s.is_square() || s.shape() != p.shape() {
            return Err(GammaError::DimensionMismatch(format!(
                "S is {}×{}, P is {}×{}",
                s.nrows(),
                s.ncols(),
                p.nrows(),
                p.ncols()
            )));
        }
        let (commutator, tau) = commutation_check(&s, &p);
        if commutator > tau {
            return Err(GammaError::NotCommuting {
                defect: commutator.as_f64(),
                tol: tau.as_f64(),
            });
        }
        let norm_s = op_norm(&s);
        let norm_p = op_norm(&p);
        let slack = T::tol(tol::CONTRACTION);
        let (_, tuples) = common_triangularization(&[&s, &p]);
        let joint_spectrum: Vec<SymPoint<T>> =
            tuples.iter().map(|t| SymPoint::new(t[0], t[1])).collect();
        let spectral_radius_p = joint_spectrum
            .iter()
            .map(|pt| cabs(pt.p))
            .fold(T::zero(), |m, x| if x > m { x } else { m });
        let classify_tol = T::tol(tol::CLASSIFY);
        let flags = PairFlags {
            commuting: true,
            contraction: norm_p <= T::one() + slack,
            s_bounded: norm_s <= T::lit(2.0) + slack,
            spectrum_in_gamma: joint_spectrum
                .iter()
                .all(|pt| classify_point(*pt, classify_tol).in_gamma()),
            pure: spectral_radius_p < T::one() - T::tol(tol::PURITY),
            vn_probe_passed: None,
        };
        Ok(Self {
            s,
            p,
            norm_s,
            norm_p,
            commutator,
            joint_spectrum,
            spectral_radius_p,
            flags,
        })
    }

    /// `(T₁ + T₂, T₁T₂)` for commuting contractions, a Γ-contraction by
    /// Ando's dilation theorem.
    pub fn symmetrized(t1: &CMatrix<T>, t2: &CMatrix<T>) -> Result<Self> {
        if !t1.is_square() || t1.shape() != t2.shape() {
            return Err(GammaError::DimensionMismatch(format!(
                "T1 is {}×{}, T2 is {}×{}",
                t1.nrows(),
                t1.ncols(),
                t2.nrows(),
                t2.ncols()
            )));
        }
        let slack = T::tol(tol::CONTRACTION);
        for t in [t1, t2] {
            let norm = op_norm(t);
            if norm > T::one() + slack {
                return Err(GammaError::NotContraction {
                    norm: norm.as_f64(),
                });
            }
        }
        let (defect, tau) = commutation_check(t1, t2);
        if defect > tau {
            return Err(GammaError::NotCommuting {
                defect: defect.as_f64(),
                tol: tau.as_f64(),
            });
        }
        Self::validate(t1 + t2, t1 * t2)
    }

    pub fn s(&self) -> &CMatrix<T> {
        &self.s
    }

    pub fn p(&self) -> &CMatrix<T> {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    /// Commutation, `‖P‖ ≤ 1`, `‖S‖ ≤ 2` and joint spectrum in Γ.
    pub fn passes_necessary(&self) -> bool {
        let f = &self.flags;
        f.commuting && f.contraction && f.s_bounded && f.spectrum_in_gamma
    }

    /// The pair `(S*, P*)`.
    pub fn adjoint(&self) -> Result<Self> {
        Self::validate(self.s.adjoint(), self.p.adjoint())
    }

    /// Simultaneous conjugation `(USU*, UPU*)`.
    pub fn conjugate(&self, u: &CMatrix<T>) -> Result<Self> {
        Self::validate(u * &self.s * u.adjoint(), u * &self.p * u.adjoint())
    }

    pub fn with_probe(mut self, report: &ProbeReport<T>) -> Self {
        self.flags.vn_probe_passed = Some(!report.certified_non_gamma);
        self
    }
}

/// Pure iff the spectral radius is below `1 − 1e-10`.
pub fn is_pure<T: Real>(p: &CMatrix<T>) -> bool {
    eigenvalues(p)
        .into_iter()
        .all(|z| cabs(z) < T::one() - T::tol(tol::PURITY))
}

pub fn is_gamma_unitary<T: Real>(pair: &GammaPair<T>, tol: T) -> bool {
    pair.flags.commuting
        && is_normal(pair.s())
        && is_normal(pair.p())
        && pair
            .joint_spectrum
            .iter()
            .all(|pt| classify_point(*pt, tol) == Region::DistinguishedBGamma)
}

#[derive(Debug, Clone)]
pub struct ProbeReport<T: Real> {
    pub trials: usize,
    /// Largest `‖p(S,P)‖ / ‖p‖_{∞,Γ}` seen.
    pub worst_ratio: T,
    pub worst_poly: BiPoly<T>,
    /// `worst_ratio > 1 + 1e-6`; `worst_poly` is then the certificate.
    pub certified_non_gamma: bool,
}

const PROBE_GRID: usize = 64;
const PROBE_SEEDS: usize = 6;

/// Evaluates the von Neumann ratio for each polynomial.
pub fn vn_probe_polys<T: Real>(pair: &GammaPair<T>, polys: &[BiPoly<T>]) -> ProbeReport<T> {
    let mut worst = T::zero();
    let mut worst_poly = BiPoly::constant(re(T::one()));
    for poly in polys {
        let sup = sup_norm_refined(poly, PROBE_GRID, PROBE_SEEDS);
        let lhs = op_norm(&poly.eval_matrix(pair.s(), pair.p()));
        let ratio = if sup > T::zero() {
            lhs / sup
        } else if lhs > T::zero() {
            T::max_value().unwrap_or_else(T::one)
        } else {
            T::one()
        };
        if ratio > worst {
            worst = ratio;
            worst_poly = poly.clone();
        }
    }
    ProbeReport {
        trials: polys.len(),
        worst_ratio: worst,
        worst_poly,
        certified_non_gamma: worst > T::one() + T::tol(tol::PROBE_CERT),
    }
}

/// Random polynomial of total degree `1..=max_deg` with coefficients drawn
/// uniformly from the unit disc.
pub fn random_poly<T: Real, R: Rng + ?Sized>(max_deg: usize, rng: &mut R) -> BiPoly<T> {
    let deg = rng.random_range(1..=max_deg.max(1));
    let mut terms = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            terms.push((i, j, random_disc_point(rng, 1.0)));
        }
    }
    BiPoly::new(terms)
}

/// The coordinate polynomials `s`, `p` followed by `trials` random ones.
pub fn vn_probe<T: Real>(pair: &GammaPair<T>, trials: usize, max_deg: usize, seed: u64) -> ProbeReport<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = vec![BiPoly::s(), BiPoly::p()];
    polys.extend((0..trials).map(|_| random_poly(max_deg, &mut rng)));
    vn_probe_polys(pair, &polys)
}

/// Decomposition into the part where `P` is unitary and the completely
/// non-unitary remainder.
#[derive(Debug, Clone)]
pub struct CnuSplit<T: Real> {
    pub unitary_part: GammaPair<T>,
    pub cnu_part: GammaPair<T>,
    /// Unitary `[B₁ B₂]`, `B₁` spanning the unitary subspace.
    pub basis: CMatrix<T>,
    pub unitary_dim: usize,
}

/// `H₁ = {h : ‖P^k h‖ = ‖h‖ = ‖P*^k h‖, k = 1..n}`, computed as the common
/// kernel of `I − P*^kP^k` and `I − P^kP*^k`.
pub fn cnu_split<T: Real>(pair: &GammaPair<T>) -> Result<CnuSplit<T>> {
    let n = pair.dim();
    if !pair.flags.contraction {
        return Err(GammaError::NotContraction {
            norm: pair.norm_p.as_f64(),
        });
    }
    let id = identity::<T>(n);
    let mut stacked = CMatrix::zeros(2 * n * n, n);
    let mut pk = id.clone();
    for k in 0..n {
        pk = &pk * pair.p();
        let a = &id - pk.adjoint() * &pk;
        let b = &id - &pk * pk.adjoint();
        stacked.view_mut((2 * k * n, 0), (n, n)).copy_from(&a);
        stacked.view_mut(((2 * k + 1) * n, 0), (n, n)).copy_from(&b);
    }
    let (b1, b2) = kernel_split(&stacked, T::tol(1e-9));
    let leak = |m: &CMatrix<T>| fro(&(b2.adjoint() * m * &b1)) + fro(&(b1.adjoint() * m * &b2));
    let leakage = leak(pair.s()).max(leak(pair.p()));
    if leakage > T::tol(1e-8) * (T::one() + pair.norm_s) {
        return Err(GammaError::ReductionFailure {
            leakage: leakage.as_f64(),
        });
    }
    let restrict = |b: &CMatrix<T>| {
        GammaPair::validate(b.adjoint() * pair.s() * b, b.adjoint() * pair.p() * b)
    };
    let unitary_part = restrict(&b1)?;
    let cnu_part = restrict(&b2)?;
    let unitary_dim = b1.ncols();
    let mut basis = CMatrix::zeros(n, n);
    basis.view_mut((0, 0), (n, unitary_dim)).copy_from(&b1);
    basis
        .view_mut((0, unitary_dim), (n, n - unitary_dim))
        .copy_from(&b2);
    Ok(CnuSplit {
        unitary_part,
        cnu_part,
        basis,
        unitary_dim,
    })
}

/// Commuting contractions `T₁ = U(D + N)U*`, `T₂ = q(T₁)` for a random
/// quadratic `q`, both scaled to norm at most `cap`.
pub fn random_commuting_contractions<T: Real, R: Rng + ?Sized>(
    n: usize,
    cap: f64,
    rng: &mut R,
) -> (CMatrix<T>, CMatrix<T>) {
    let u = random_unitary::<T, R>(n, rng);
    let mut tri = random_gaussian::<T, R>(n, n, rng) * re(T::lit(0.4));
    for i in 0..n {
        for j in 0..i {
            tri[(i, j)] = re(T::zero());
        }
        tri[(i, i)] = random_disc_point(rng, 0.9);
    }
    let t1 = &u * tri * u.adjoint();
    let c0 = random_disc_point::<T, R>(rng, 0.5);
    let c1 = random_disc_point::<T, R>(rng, 1.0);
    let c2 = random_disc_point::<T, R>(rng, 0.5);
    let t2 = identity::<T>(n) * c0 + &t1 * c1 + &t1 * &t1 * c2;
    let scale = |t: CMatrix<T>| {
        let norm = op_norm(&t);
        let cap = T::lit(cap);
        if norm > cap {
            t * re(cap / norm)
        } else {
            t
        }
    };
    (scale(t1), scale(t2))
}

/// Deterministic pure Γ-contraction of dimension `n`.
pub fn random_pure_gamma<T: Real>(n: usize, seed: u64) -> GammaPair<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t1, t2) = random_commuting_contractions::<T, _>(n, 0.95, &mut rng);
    GammaPair::symmetrized(&t1, &t2).expect("generator produces commuting contractions")
}

/// Deterministic Γ-unitary: commuting normals with joint spectrum on bΓ.
pub fn random_gamma_unitary<T: Real>(n: usize, seed: u64) -> GammaPair<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary::<T, _>(n, &mut rng);
    let mut ds = CMatrix::zeros(n, n);
    let mut dp = CMatrix::zeros(n, n);
    for k in 0..n {
        let z1 = cis(T::lit(std::f64::consts::TAU * rng.random::<f64>()));
        let z2 = cis(T::lit(std::f64::consts::TAU * rng.random::<f64>()));
        ds[(k, k)] = z1 + z2;
        dp[(k, k)] = z1 * z2;
    }
    GammaPair::validate(&u * ds * u.adjoint(), &u * dp * u.adjoint())
        .expect("conjugated diagonal pair commutes")
}
