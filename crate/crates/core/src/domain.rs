//! Points of the symmetrized bidisc, disc automorphisms acting on them, and
//! bivariate polynomials with their sup-norm over Γ.

use nalgebra::ComplexField;

use crate::error::{GammaError, Result};
use crate::matcore::identity;
use crate::scalar::{cabs, cis, CMatrix, Real, C};

/// A point `(s, p) = (z₁ + z₂, z₁z₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymPoint<T: Real> {
    pub s: C<T>,
    pub p: C<T>,
}

impl<T: Real> SymPoint<T> {
    pub fn new(s: C<T>, p: C<T>) -> Self {
        Self { s, p }
    }

    pub fn from_roots(z1: C<T>, z2: C<T>) -> Self {
        Self {
            s: z1 + z2,
            p: z1 * z2,
        }
    }

    /// Roots of `z² − s z + p`, larger modulus first.
    pub fn roots(&self) -> (C<T>, C<T>) {
        quadratic_roots(self.s, self.p)
    }
}

/// Roots of `z² − s z + p`. The sign of the discriminant is matched to `s` so
/// the large root carries no cancellation; the small one comes from `p / z₁`.
pub fn quadratic_roots<T: Real>(s: C<T>, p: C<T>) -> (C<T>, C<T>) {
    let four = C::new(T::lit(4.0), T::zero());
    let half = T::lit(0.5);
    let d = ComplexField::sqrt(s * s - four * p);
    let plus = s + d;
    let minus = s - d;
    let q = if cabs(plus) >= cabs(minus) { plus } else { minus } * half;
    if cabs(q) == T::zero() {
        return (q, q);
    }
    (q, p / q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Outside,
    InteriorG,
    BoundaryGamma,
    DistinguishedBGamma,
}

impl Region {
    /// True for every region contained in the closed set Γ.
    pub fn in_gamma(self) -> bool {
        !matches!(self, Region::Outside)
    }
}

pub fn classify_point<T: Real>(pt: SymPoint<T>, tol: T) -> Region {
    let (z1, z2) = pt.roots();
    let (a, b) = (cabs(z1), cabs(z2));
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let one = T::one();
    if hi > one + tol {
        Region::Outside
    } else if hi < one - tol {
        Region::InteriorG
    } else if lo >= one - tol {
        Region::DistinguishedBGamma
    } else {
        Region::BoundaryGamma
    }
}

/// `m(z) = β (z − a)/(1 − āz)` with `|a| < 1`, `|β| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAutomorphism<T: Real> {
    a: C<T>,
    beta: C<T>,
}

impl<T: Real> DiscAutomorphism<T> {
    pub fn new(a: C<T>, beta: C<T>) -> Result<Self> {
        let eps = T::tol(1e-12);
        let (aa, bb) = (cabs(a), cabs(beta));
        if aa >= T::one() - eps || (bb - T::one()).abs() > eps {
            return Err(GammaError::InvalidAutomorphism {
                a_abs: aa.as_f64(),
                beta_abs: bb.as_f64(),
            });
        }
        Ok(Self { a, beta })
    }

    pub fn identity() -> Self {
        Self {
            a: C::new(T::zero(), T::zero()),
            beta: C::new(T::one(), T::zero()),
        }
    }

    pub fn a(&self) -> C<T> {
        self.a
    }

    pub fn beta(&self) -> C<T> {
        self.beta
    }

    pub fn apply(&self, z: C<T>) -> C<T> {
        let one = C::new(T::one(), T::zero());
        self.beta * (z - self.a) / (one - self.a.conj() * z)
    }

    /// Solving `w = β(z − a)/(1 − āz)` for `z` gives
    /// `z = β̄(w + βa)/(1 + β̄āw)`, i.e. parameters `(−βa, β̄)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: -(self.beta * self.a),
            beta: self.beta.conj(),
        }
    }
}

pub fn mobius_point<T: Real>(pt: SymPoint<T>, m: &DiscAutomorphism<T>) -> Result<SymPoint<T>> {
    let one = C::new(T::one(), T::zero());
    let two = C::new(T::lit(2.0), T::zero());
    let a = m.a();
    let ab = a.conj();
    let beta = m.beta();
    let denom = one - ab * pt.s + ab * ab * pt.p;
    if cabs(denom) < T::tol(1e-14) {
        return Err(GammaError::SingularDenominator {
            modulus: cabs(denom).as_f64(),
        });
    }
    let a2 = C::new(a.norm_sqr(), T::zero());
    let s = beta * ((one + a2) * pt.s - two * ab * pt.p - two * a) / denom;
    let p = beta * beta * (pt.p - a * pt.s + a * a) / denom;
    Ok(SymPoint { s, p })
}

/// Polynomial `Σ c_{ij} s^i p^j` in the coordinates of Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<T: Real> {
    pub terms: Vec<(usize, usize, C<T>)>,
}

impl<T: Real> BiPoly<T> {
    pub fn new(terms: Vec<(usize, usize, C<T>)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: C<T>) -> Self {
        Self::new(vec![(0, 0, c)])
    }

    /// The coordinate function `s`.
    pub fn s() -> Self {
        Self::new(vec![(1, 0, C::new(T::one(), T::zero()))])
    }

    /// The coordinate function `p`.
    pub fn p() -> Self {
        Self::new(vec![(0, 1, C::new(T::one(), T::zero()))])
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|&(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, s: C<T>, p: C<T>) -> C<T> {
        self.terms.iter().fold(C::new(T::zero(), T::zero()), |acc, &(i, j, c)| {
            acc + c * s.powu(i as u32) * p.powu(j as u32)
        })
    }

    /// `p(S, P) = Σ c_{ij} S^i P^j` for commuting `S, P`.
    pub fn eval_matrix(&self, s: &CMatrix<T>, p: &CMatrix<T>) -> CMatrix<T> {
        let n = s.nrows();
        let max_i = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_j = self.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut spow = vec![identity::<T>(n)];
        for k in 0..max_i {
            let next = &spow[k] * s;
            spow.push(next);
        }
        let mut ppow = vec![identity::<T>(n)];
        for k in 0..max_j {
            let next = &ppow[k] * p;
            ppow.push(next);
        }
        let mut out = CMatrix::zeros(n, n);
        for &(i, j, c) in &self.terms {
            out += &spow[i] * &ppow[j] * c;
        }
        out
    }

    fn on_torus(&self, t1: T, t2: T) -> T {
        let (z1, z2) = (cis(t1), cis(t2));
        cabs(self.eval(z1 + z2, z1 * z2))
    }
}

/// `max |poly(z₁+z₂, z₁z₂)|` over the torus grid `z_j = e^{2πik/grid_n}`.
/// By the maximum principle on bΓ this is a lower estimate of `‖poly‖_{∞,Γ}`.
pub fn sup_norm_on_gamma<T: Real>(poly: &BiPoly<T>, grid_n: usize) -> T {
    grid_maxima(poly, grid_n.max(1), 1)
        .first()
        .map(|m| m.0)
        .unwrap_or_else(T::zero)
}

/// Largest grid values `(value, θ₁, θ₂)`, at most `keep` of them, taken
/// among grid-local maxima.
fn grid_maxima<T: Real>(poly: &BiPoly<T>, n: usize, keep: usize) -> Vec<(T, T, T)> {
    let step = T::two_pi() / T::lit(n as f64);
    let mut vals = vec![T::zero(); n * n];
    for k1 in 0..n {
        for k2 in k1..n {
            let v = poly.on_torus(step * T::lit(k1 as f64), step * T::lit(k2 as f64));
            vals[k1 * n + k2] = v;
            vals[k2 * n + k1] = v;
        }
    }
    let at = |i: usize, j: usize| vals[(i % n) * n + (j % n)];
    let mut peaks = Vec::new();
    for k1 in 0..n {
        for k2 in k1..n {
            let v = at(k1, k2);
            let local = [(n - 1, 0), (1, 0), (0, n - 1), (0, 1)]
                .iter()
                .all(|&(d1, d2)| v >= at(k1 + d1, k2 + d2));
            if local {
                peaks.push((v, step * T::lit(k1 as f64), step * T::lit(k2 as f64)));
            }
        }
    }
    if peaks.is_empty() {
        peaks.push((at(0, 0), T::zero(), T::zero()));
    }
    peaks.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    peaks.truncate(keep);
    peaks
}

fn golden_1d<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, iters: usize) -> (T, T) {
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let (mut lo, mut hi) = (lo, hi);
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

/// Grid sup refined by coordinate-wise golden-section ascent from the best
/// `seeds` grid maxima. Never below [`sup_norm_on_gamma`] on the same grid.
pub fn sup_norm_refined<T: Real>(poly: &BiPoly<T>, grid_n: usize, seeds: usize) -> T {
    let n = grid_n.max(8);
    let step = T::two_pi() / T::lit(n as f64);
    let mut best = T::zero();
    for (v0, t1, t2) in grid_maxima(poly, n, seeds.max(1)) {
        let (mut t1, mut t2, mut v) = (t1, t2, v0);
        let mut h = step;
        for _ in 0..40 {
            let (a, va) = golden_1d(|x| poly.on_torus(x, t2), t1 - h, t1 + h, 30);
            if va > v {
                t1 = a;
                v = va;
            }
            let (b, vb) = golden_1d(|y| poly.on_torus(t1, y), t2 - h, t2 + h, 30);
            let improved = vb - v;
            if vb > v {
                t2 = b;
                v = vb;
            }
            if improved <= T::default_epsilon() * v {
                h *= T::lit(0.5);
                if h < T::tol(1e-9) {
                    break;
                }
            }
        }
        if v > best {
            best = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(s: (f64, f64), p: (f64, f64)) -> SymPoint<f64> {
        SymPoint::new(c(s.0, s.1), c(p.0, p.1))
    }

    fn disc(rng: &mut ChaCha8Rng, r: f64) -> C<f64> {
        crate::matcore::random_disc_point(rng, r)
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_point(pt((2.0, 0.0), (1.0, 0.0)), 1e-9), Region::DistinguishedBGamma);
        assert_eq!(classify_point(pt((0.0, 0.0), (0.0, 0.0)), 1e-9), Region::InteriorG);
        assert_eq!(classify_point(pt((3.0, 0.0), (1.0, 0.0)), 1e-9), Region::Outside);
        // roots 1 and 0.5
        assert_eq!(classify_point(pt((1.5, 0.0), (0.5, 0.0)), 1e-9), Region::BoundaryGamma);
    }

    #[test]
    fn roots_of_outside_example() {
        let (z1, z2) = quadratic_roots(c::<f64>(3.0, 0.0), c(1.0, 0.0));
        let r5 = 5f64.sqrt();
        assert!((z1.re - (3.0 + r5) / 2.0).abs() < 1e-14);
        assert!((z2.re - (3.0 - r5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn stable_roots_when_p_is_tiny() {
        let (z1, z2) = quadratic_roots(c::<f64>(1.0, 0.0), c(1e-12, 0.0));
        // z₁ = 1 − 1e-12 − …, z₂ = 1e-12 + 1e-24 + …
        assert!((z1.re - (1.0 - 1e-12)).abs() < 1e-15);
        assert!((z2.re - (1e-12 + 1e-24)).abs() < 1e-26);
    }

    #[test]
    fn classification_matches_root_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let z1 = disc(&mut rng, 1.0);
            let z2 = if rng.random::<f64>() < 0.3 {
                crate::scalar::cis(rng.random::<f64>() * std::f64::consts::TAU)
            } else {
                disc(&mut rng, 1.0)
            };
            let (a, b) = (cabs(z1), cabs(z2));
            let (hi, lo) = (a.max(b), a.min(b));
            let want = if hi < 1.0 - 1e-6 {
                Region::InteriorG
            } else if lo > 1.0 - 1e-12 {
                Region::DistinguishedBGamma
            } else if lo < 1.0 - 1e-6 && hi > 1.0 - 1e-12 {
                Region::BoundaryGamma
            } else {
                continue;
            };
            assert_eq!(classify_point(SymPoint::from_roots(z1, z2), 1e-9), want);
            assert_eq!(classify_point(SymPoint::from_roots(z2, z1), 1e-9), want);
        }
    }

    #[test]
    fn mobius_examples() {
        let id = DiscAutomorphism::<f64>::identity();
        let x = pt((0.3, -0.2), (0.1, 0.05));
        let y = mobius_point(x, &id).unwrap();
        assert!(cabs(y.s - x.s) < 1e-15 && cabs(y.p - x.p) < 1e-15);

        let rot = DiscAutomorphism::new(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        let y = mobius_point(x, &rot).unwrap();
        assert!(cabs(y.s + x.s) < 1e-15 && cabs(y.p - x.p) < 1e-15);

        let m = DiscAutomorphism::new(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let y = mobius_point(pt((1.0, 0.0), (0.25, 0.0)), &m).unwrap();
        assert!(cabs(y.s) < 1e-15 && cabs(y.p) < 1e-15);
    }

    #[test]
    fn automorphism_parameters_are_checked() {
        assert!(DiscAutomorphism::new(c::<f64>(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(DiscAutomorphism::new(c::<f64>(0.2, 0.0), c(1.1, 0.0)).is_err());
    }

    #[test]
    fn mobius_agrees_rootwise_and_preserves_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..1000 {
            let z1 = disc(&mut rng, 1.0);
            let z2 = if k % 3 == 0 {
                crate::scalar::cis(rng.random::<f64>() * std::f64::consts::TAU)
            } else {
                disc(&mut rng, 1.0)
            };
            let m = DiscAutomorphism::new(disc(&mut rng, 0.9), crate::scalar::cis(rng.random::<f64>() * std::f64::consts::TAU))
                .unwrap();
            let x = SymPoint::from_roots(z1, z2);
            let y = mobius_point(x, &m).unwrap();
            let rootwise = SymPoint::from_roots(m.apply(z1), m.apply(z2));
            assert!(cabs(y.s - rootwise.s) < 1e-12 * (1.0 + cabs(y.s)));
            assert!(cabs(y.p - rootwise.p) < 1e-12);
            assert_eq!(classify_point(x, 1e-7), classify_point(y, 1e-7));
            let back = mobius_point(y, &m.inverse()).unwrap();
            assert!(cabs(back.s - x.s) < 1e-10 && cabs(back.p - x.p) < 1e-10);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let k = BiPoly::constant(c::<f64>(0.0, 3.0));
        assert!((sup_norm_on_gamma(&k, 16) - 3.0).abs() < 1e-14);
        assert!((sup_norm_on_gamma(&BiPoly::<f64>::s(), 16) - 2.0).abs() < 1e-14);
        assert!((sup_norm_on_gamma(&BiPoly::<f64>::p(), 16) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sup_norm_grid_refinement_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let terms = (0..=3)
                .flat_map(|i| (0..=3 - i).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, disc(&mut rng, 1.0)))
                .collect::<Vec<_>>();
            let poly = BiPoly::new(terms);
            let mut prev = 0.0;
            for n in [8, 16, 32, 64] {
                let v = sup_norm_on_gamma(&poly, n);
                assert!(v >= prev - 1e-12);
                prev = v;
            }
            let refined = sup_norm_refined(&poly, 64, 8);
            assert!(refined >= prev - 1e-12);
            assert!(refined >= sup_norm_on_gamma(&poly, 256) - 1e-12);
        }
    }
}
