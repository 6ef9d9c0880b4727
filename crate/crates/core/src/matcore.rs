//! Dense complex primitives: PSD square roots, range bases, numerical radius
//! and joint spectra of commuting matrices.
//!
//! Factorizations (SVD, Hermitian eigendecomposition, complex Schur) come
//! from nalgebra; everything built on top of them lives here.

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GammaError, Result};
use crate::scalar::{cabs, cis, re, tol, CMatrix, Real, C};

/// Orthonormal basis of the dominant range of a matrix, with the rank
/// decision that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBasis<T: Real> {
    /// `n × r` with orthonormal columns.
    pub q: CMatrix<T>,
    pub rank: usize,
    pub sigma_min_kept: T,
    pub sigma_max_dropped: T,
}

impl<T: Real> RangeBasis<T> {
    pub fn ambient_dim(&self) -> usize {
        self.q.nrows()
    }

    /// Orthogonal projector `QQ*` onto the range.
    pub fn projector(&self) -> CMatrix<T> {
        &self.q * self.q.adjoint()
    }
}

/// Singular value decomposition with singular values sorted descending.
/// `a = u · diag(s) · v*`; thin when `a` is rectangular.
pub struct SortedSvd<T: Real> {
    pub u: CMatrix<T>,
    pub s: Vec<T>,
    pub v: CMatrix<T>,
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

pub fn fro<T: Real>(a: &CMatrix<T>) -> T {
    if a.is_empty() {
        T::zero()
    } else {
        a.norm()
    }
}

pub fn svd_sorted<T: Real>(a: &CMatrix<T>) -> SortedSvd<T> {
    let (m, n) = a.shape();
    if m.min(n) == 0 {
        return SortedSvd {
            u: CMatrix::zeros(m, 0),
            s: Vec::new(),
            v: CMatrix::zeros(n, 0),
        };
    }
    if m < n {
        let t = svd_tall(&a.adjoint());
        return SortedSvd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    svd_tall(a)
}

// Tall case: QR first, then one-sided Jacobi on the square triangular factor.
// nalgebra's complex bidiagonal SVD loses about half the digits when
// singular values cluster, which the defect solves cannot tolerate.
fn svd_tall<T: Real>(a: &CMatrix<T>) -> SortedSvd<T> {
    let (m, n) = a.shape();
    let (q, r) = if m > n {
        let qr = a.clone().qr();
        (Some(qr.q()), qr.r())
    } else {
        (None, a.clone())
    };
    let (w, mut v) = jacobi_columns(r);
    let norms: Vec<T> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let smax = norms[order[0]];
    let tiny = smax * T::default_epsilon() * T::lit(n as f64);
    let mut u_small = CMatrix::zeros(n, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let mut live = 0;
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        if sigma > tiny && sigma > T::zero() {
            u_small.set_column(dst, &w.column(src).unscale(sigma));
            live += 1;
        }
        vs.set_column(dst, &v.column(src));
        s.push(sigma);
    }
    // re-orthonormalize in descending order and fill the numerically null part
    let live_cols = u_small.columns(0, live).into_owned();
    let mut u_full = if live > 0 {
        let qr = live_cols.clone().qr();
        let mut qq = qr.q();
        let rr = qr.r();
        for k in 0..live {
            let d = rr[(k, k)];
            let ad = cabs(d);
            if ad > T::zero() {
                let ph = d.unscale(ad);
                for i in 0..n {
                    qq[(i, k)] *= ph;
                }
            }
        }
        qq
    } else {
        CMatrix::zeros(n, 0)
    };
    if live < n {
        u_full = complete_basis(&u_full);
    }
    v = vs;
    let u = match q {
        Some(q) => q * u_full,
        None => u_full,
    };
    SortedSvd { u, s, v }
}

const JACOBI_SWEEPS: usize = 80;

// Hestenes one-sided Jacobi: returns `W = A V` with mutually orthogonal
// columns and the accumulated unitary `V`.
fn jacobi_columns<T: Real>(mut w: CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let n = w.ncols();
    let mut v = identity::<T>(n);
    let eps = T::default_epsilon();
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dotc(&w.column(j));
                let g = cabs(gamma);
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g).conj();
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let xi = mat[(r, i)];
                        let xj = mat[(r, j)] * phase;
                        mat[(r, i)] = xi.scale(cs) - xj.scale(sn);
                        mat[(r, j)] = xi.scale(sn) + xj.scale(cs);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    if a.is_empty() {
        return Vec::new();
    }
    svd_sorted(a).s
}

/// Spectral (operator 2-) norm.
pub fn op_norm<T: Real>(a: &CMatrix<T>) -> T {
    singular_values(a).first().copied().unwrap_or_else(T::zero)
}

/// Smallest singular value of a square matrix (zero for the empty matrix).
pub fn sigma_min<T: Real>(a: &CMatrix<T>) -> T {
    singular_values(a).last().copied().unwrap_or_else(T::zero)
}

/// Eigendecomposition of the Hermitian part, eigenvalues ascending.
pub fn herm_eig<T: Real>(a: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (a + a.adjoint()) * re(T::lit(0.5));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut vecs = CMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
        vals.push(eig.eigenvalues[src]);
    }
    (vals, vecs)
}

fn lambda_max_herm<T: Real>(h: &CMatrix<T>) -> T {
    if h.nrows() == 1 {
        return h[(0, 0)].re;
    }
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .copied()
        .reduce(|m, x| if x > m { x } else { m })
        .unwrap_or_else(T::zero)
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V*`.
pub fn herm_apply<T: Real>(vals: &[T], vecs: &CMatrix<T>, f: impl Fn(T) -> T) -> CMatrix<T> {
    let n = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let fj = re(f(vals[j]));
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vecs.adjoint()
}

fn check_hermitian<T: Real>(a: &CMatrix<T>, herm_tol: T) -> Result<()> {
    if !a.is_square() {
        return Err(GammaError::DimensionMismatch(format!(
            "expected a square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = fro(&(a - a.adjoint()));
    if defect > herm_tol * fro(a) {
        return Err(GammaError::NotHermitian {
            defect: defect.as_f64(),
        });
    }
    Ok(())
}

/// Square root of a Hermitian positive semidefinite matrix. Eigenvalues in
/// `[-τ_eig·max(1, ‖A‖_F), 0)` are treated as rounding noise and clamped.
pub fn herm_sqrt_psd<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    herm_sqrt_psd_with(a, T::tol(tol::HERM), T::tol(tol::CLAMP_EIG), T::zero())
}

/// Square root with explicit control over the clamping rules: eigenvalues in
/// `[-neg_tol, zero_band]` map to zero, anything below `-neg_tol` is an error.
/// `neg_tol` is scaled by `max(1, ‖A‖_F)`.
pub fn herm_sqrt_psd_with<T: Real>(
    a: &CMatrix<T>,
    herm_tol: T,
    neg_tol: T,
    zero_band: T,
) -> Result<CMatrix<T>> {
    check_hermitian(a, herm_tol)?;
    let scale = fro(a).max(T::one());
    let (vals, vecs) = herm_eig(a);
    if let Some(&lo) = vals.first() {
        if lo < -neg_tol * scale {
            return Err(GammaError::NotPsd {
                eigenvalue: lo.as_f64(),
            });
        }
    }
    Ok(herm_apply(&vals, &vecs, |x| {
        if x <= zero_band {
            T::zero()
        } else {
            x.sqrt()
        }
    }))
}

/// `A^{p}` for a Hermitian positive definite `A`, `p = ±1/2`. Fails when the
/// smallest eigenvalue is at or below `min_eig`.
pub fn herm_power_pd<T: Real>(a: &CMatrix<T>, inverse: bool, min_eig: T) -> Result<CMatrix<T>> {
    check_hermitian(a, T::tol(tol::HERM))?;
    let (vals, vecs) = herm_eig(a);
    if let Some(&lo) = vals.first() {
        if lo <= min_eig {
            return Err(GammaError::NotInvertible {
                sigma_min: lo.as_f64(),
            });
        }
    }
    Ok(herm_apply(&vals, &vecs, |x| {
        if inverse {
            T::one() / x.sqrt()
        } else {
            x.sqrt()
        }
    }))
}

/// Orthonormal basis for the singular directions of `d` above
/// `rel_tol · σ_max`. The zero matrix (or one whose largest singular value
/// is at rounding level) gives an empty basis.
pub fn range_onb<T: Real>(d: &CMatrix<T>, rel_tol: T) -> RangeBasis<T> {
    let n = d.nrows();
    let svd = svd_sorted(d);
    let smax = svd.s.first().copied().unwrap_or_else(T::zero);
    let floor = T::default_epsilon() * T::lit(16.0 * (n.max(1) as f64));
    let cut = (rel_tol * smax).max(floor);
    let rank = svd.s.iter().take_while(|&&x| x > cut).count();
    let q = svd.u.columns(0, rank).into_owned();
    RangeBasis {
        q,
        rank,
        sigma_min_kept: if rank > 0 { svd.s[rank - 1] } else { T::zero() },
        sigma_max_dropped: svd.s.get(rank).copied().unwrap_or_else(T::zero),
    }
}

fn golden_max<T: Real>(f: &impl Fn(T) -> T, mut lo: T, mut hi: T, iters: usize) -> (T, T) {
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

const NUMRAD_SAMPLES: usize = 256;
const NUMRAD_REFINE: usize = 3;

/// Numerical radius `w(A) = max_θ λ_max((e^{iθ}A + e^{-iθ}A*)/2)`, by a
/// 256-point angular grid followed by golden-section refinement of the best
/// few local maxima.
pub fn numerical_radius<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.nrows();
    if n == 0 {
        return T::zero();
    }
    if n == 1 {
        return cabs(a[(0, 0)]);
    }
    let ad = a.adjoint();
    let half = re(T::lit(0.5));
    let f = |theta: T| {
        let e = cis(theta);
        let h = (a * e + &ad * e.conj()) * half;
        lambda_max_herm(&h)
    };
    let step = T::two_pi() / T::lit(NUMRAD_SAMPLES as f64);
    let vals: Vec<T> = (0..NUMRAD_SAMPLES)
        .map(|k| f(step * T::lit(k as f64)))
        .collect();
    let mut peaks: Vec<usize> = (0..NUMRAD_SAMPLES)
        .filter(|&k| {
            let prev = vals[(k + NUMRAD_SAMPLES - 1) % NUMRAD_SAMPLES];
            let next = vals[(k + 1) % NUMRAD_SAMPLES];
            vals[k] >= prev && vals[k] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = vals.iter().copied().fold(vals[0], |m, x| if x > m { x } else { m });
    // bracket width 2·step shrinks below 1e-9 after ~40 golden steps
    let iters = 48;
    for &k in peaks.iter().take(NUMRAD_REFINE) {
        let centre = step * T::lit(k as f64);
        let (_, fx) = golden_max(&f, centre - step, centre + step, iters);
        if fx > best {
            best = fx;
        }
    }
    best
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Vec<C<T>> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let (_, t) = Schur::new(a.clone()).unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Eigenvalues and unit eigenvectors (as columns) of a square matrix, by
/// back-substitution on the complex Schur form. Defective eigenvalues get
/// (nearly) parallel vectors.
pub fn eigenvectors<T: Real>(a: &CMatrix<T>) -> (Vec<C<T>>, CMatrix<T>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let (z, t) = Schur::new(a.clone()).unpack();
    let small = T::default_epsilon() * fro(&t).max(T::one());
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = re(T::one());
        for i in (0..k).rev() {
            let mut acc = re(T::zero());
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if cabs(d) < small {
                d = re(small);
            }
            y[(i, k)] = -acc / d;
        }
    }
    let mut x = z * y;
    for k in 0..n {
        let nk = x.column(k).norm();
        x.column_mut(k).unscale_mut(nk);
    }
    ((0..n).map(|i| t[(i, i)]).collect(), x)
}

pub fn spectral_radius<T: Real>(a: &CMatrix<T>) -> T {
    eigenvalues(a)
        .into_iter()
        .map(cabs)
        .fold(T::zero(), |m, x| if x > m { x } else { m })
}

/// Columns spanning the numerical null space of a square matrix; always at
/// least one column (the least singular direction).
fn null_space<T: Real>(m: &CMatrix<T>, rel: T) -> CMatrix<T> {
    let svd = svd_sorted(m);
    let k = m.ncols();
    let scale = svd.s.first().copied().unwrap_or_else(T::zero).max(T::one());
    let cut = rel * scale;
    let dim = svd.s.iter().filter(|&&x| x <= cut).count().max(1);
    svd.v.columns(k - dim, dim).into_owned()
}

/// Right singular vectors of `m` with singular value at most `cut`, and the
/// complementary ones; together they form a unitary.
pub fn kernel_split<T: Real>(m: &CMatrix<T>, cut: T) -> (CMatrix<T>, CMatrix<T>) {
    let n = m.ncols();
    if m.nrows() == 0 {
        return (identity::<T>(n), CMatrix::zeros(n, 0));
    }
    let svd = svd_sorted(m);
    let kept = svd.s.iter().filter(|&&x| x > cut).count();
    let mut full = svd.v.clone();
    if full.ncols() < n {
        // wide input: complete the right singular basis
        let comp = complete_basis(&full);
        full = comp;
    }
    let range = full.columns(0, kept).into_owned();
    let kernel = full.columns(kept, n - kept).into_owned();
    (kernel, range)
}

fn complete_basis<T: Real>(q: &CMatrix<T>) -> CMatrix<T> {
    let n = q.nrows();
    let k = q.ncols();
    let mut stacked = CMatrix::zeros(n, k + n);
    stacked.view_mut((0, 0), (n, k)).copy_from(q);
    stacked.view_mut((0, k), (n, n)).copy_from(&identity::<T>(n));
    let qr = stacked.qr();
    let mut full = qr.q();
    full.view_mut((0, 0), (n, k)).copy_from(q);
    full
}

fn common_eigenvector<T: Real>(mats: &[CMatrix<T>]) -> CMatrix<T> {
    let n = mats[0].nrows();
    let mut basis = identity::<T>(n);
    for m in mats {
        let restricted = basis.adjoint() * m * &basis;
        let k = restricted.nrows();
        let lambda = eigenvalues(&restricted)[0];
        let shifted = &restricted - identity::<T>(k) * lambda;
        let ns = null_space(&shifted, T::tol(1e-8));
        basis = &basis * ns;
    }
    let v = basis.column(0).into_owned();
    let nv = v.norm();
    CMatrix::from_columns(&[v.unscale(nv)])
}

/// Unitary whose first column is the unit vector `v`.
fn complete_to_unitary<T: Real>(v: &CMatrix<T>) -> CMatrix<T> {
    let k = v.nrows();
    let mut stacked = CMatrix::zeros(k, k + 1);
    stacked.set_column(0, &v.column(0));
    for i in 0..k {
        stacked[(i, i + 1)] = Complex::new(T::one(), T::zero());
    }
    stacked.qr().q()
}

/// Simultaneous upper-triangularization of commuting square matrices by
/// repeated deflation of a common eigenvector. Returns the unitary `U` with
/// every `U* M U` upper triangular (numerically) and the diagonal tuples.
pub fn common_triangularization<T: Real>(mats: &[&CMatrix<T>]) -> (CMatrix<T>, Vec<Vec<C<T>>>) {
    let n = mats.first().map(|m| m.nrows()).unwrap_or(0);
    let mut u_acc = identity::<T>(n);
    let mut work: Vec<CMatrix<T>> = mats.iter().map(|m| (*m).clone()).collect();
    let mut tuples = Vec::with_capacity(n);
    for step in 0..n {
        let k = n - step;
        let v = common_eigenvector(&work);
        tuples.push(
            work.iter()
                .map(|m| (v.adjoint() * m * &v)[(0, 0)])
                .collect::<Vec<_>>(),
        );
        let q = complete_to_unitary(&v);
        let mut block = identity::<T>(n);
        block.view_mut((step, step), (k, k)).copy_from(&q);
        u_acc *= block;
        work = work
            .iter()
            .map(|m| {
                let conj = q.adjoint() * m * &q;
                conj.view((1, 1), (k - 1, k - 1)).into_owned()
            })
            .collect();
    }
    (u_acc, tuples)
}

/// `‖SP − PS‖_F` against `τ_comm = 1e-10·(1 + ‖S‖‖P‖)`.
pub fn commutation_check<T: Real>(s: &CMatrix<T>, p: &CMatrix<T>) -> (T, T) {
    let defect = fro(&(s * p - p * s));
    let tau = T::tol(tol::COMM) * (T::one() + op_norm(s) * op_norm(p));
    (defect, tau)
}

pub fn normality_defect<T: Real>(a: &CMatrix<T>) -> T {
    let ad = a.adjoint();
    fro(&(a * &ad - &ad * a))
}

pub fn is_normal<T: Real>(a: &CMatrix<T>) -> bool {
    let n = op_norm(a);
    normality_defect(a) <= T::tol(tol::HERM) * (T::one() + n * n)
}

/// Joint eigenvalues of a commuting pair of normal matrices, read off a
/// common unitary diagonalizer.
pub fn joint_eigs_commuting_normals<T: Real>(
    s: &CMatrix<T>,
    p: &CMatrix<T>,
) -> Result<Vec<(C<T>, C<T>)>> {
    if !s.is_square() || s.shape() != p.shape() {
        return Err(GammaError::DimensionMismatch(format!(
            "S is {}×{}, P is {}×{}",
            s.nrows(),
            s.ncols(),
            p.nrows(),
            p.ncols()
        )));
    }
    let (defect, tau) = commutation_check(s, p);
    if defect > tau {
        return Err(GammaError::NotCommuting {
            defect: defect.as_f64(),
            tol: tau.as_f64(),
        });
    }
    for m in [s, p] {
        if !is_normal(m) {
            return Err(GammaError::NotNormal {
                defect: normality_defect(m).as_f64(),
            });
        }
    }
    let (_, tuples) = common_triangularization(&[s, p]);
    Ok(tuples.into_iter().map(|t| (t[0], t[1])).collect())
}

/// Unitary polar factor `UV*` of a square matrix `A = UΣV*`.
pub fn polar_unitary<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let svd = svd_sorted(a);
    svd.u * svd.v.adjoint()
}

/// Moore–Penrose inverse for a matrix of full column (or row) rank.
pub fn pinv<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let svd = svd_sorted(a);
    let mut v = svd.v;
    for (j, &s) in svd.s.iter().enumerate() {
        let inv = re(T::one() / s);
        for i in 0..v.nrows() {
            v[(i, j)] *= inv;
        }
    }
    v * svd.u.adjoint()
}

pub fn inverse<T: Real>(a: &CMatrix<T>) -> Option<CMatrix<T>> {
    if a.nrows() == 0 {
        return Some(a.clone());
    }
    a.clone().lu().try_inverse()
}

pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    fro(&(u.adjoint() * u - identity::<T>(u.ncols())))
}

pub fn random_gaussian<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(a * scale), T::lit(b * scale))
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = random_gaussian::<T, R>(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let m = cabs(d);
        if m > T::zero() {
            let phase = d.unscale(m);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Uniform sample from the closed unit disc.
pub fn random_disc_point<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C<T> {
    let r = radius * rng.random::<f64>().sqrt();
    let t = std::f64::consts::TAU * rng.random::<f64>();
    Complex::new(T::lit(r * t.cos()), T::lit(r * t.sin()))
}
