//! Unitary equivalence of pure pairs through fundamental operators and
//! characteristic functions: witness transport, verification and a
//! heuristic witness search.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charfn::{coincide_check, default_grid, CharFn};
use crate::error::{GammaError, Result};
use crate::fundamental::{solve_fundamental, FundamentalPair};
use crate::matcore::{
    eigenvectors, fro, identity, inverse, op_norm, polar_unitary, random_disc_point,
    random_unitary, unitarity_defect,
};
use crate::model::{build_model, truncation_degree, Truncation};
use crate::pair::{is_pure, GammaPair};
use crate::scalar::{cabs, re, tol, CMatrix, Real, C};

/// Unitaries that certify equivalence. `eta1` intertwines the fundamental
/// operators of the adjoint pairs; `sigma`, `sigma_star` make the
/// characteristic functions coincide. All act in defect-basis coordinates.
#[derive(Debug, Clone)]
pub struct Witness<T: Real> {
    /// Ambient unitary with `U S_A = S_B U`, when known.
    pub u: Option<CMatrix<T>>,
    pub eta1: CMatrix<T>,
    pub sigma: CMatrix<T>,
    pub sigma_star: CMatrix<T>,
}

impl<T: Real> Witness<T> {
    /// Identity witnesses for a pair compared with itself.
    pub fn identity_for(pair: &GammaPair<T>) -> Result<Self> {
        let fp = solve_fundamental(pair)?;
        let (r, rs) = (fp.defect_p.rank(), fp.defect_p_star.rank());
        Ok(Self {
            u: Some(identity::<T>(pair.dim())),
            eta1: identity::<T>(rs),
            sigma: identity::<T>(r),
            sigma_star: identity::<T>(rs),
        })
    }

    pub fn max_unitarity_defect(&self) -> T {
        let mut m = unitarity_defect(&self.eta1)
            .max(unitarity_defect(&self.sigma))
            .max(unitarity_defect(&self.sigma_star));
        if let Some(u) = &self.u {
            m = m.max(unitarity_defect(u));
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct InducedDefect<T: Real> {
    /// `Q_{P_B}^* U Q_{P_A}`.
    pub v: CMatrix<T>,
    /// `Q_{P_B*}^* U Q_{P_A*}`.
    pub v_star: CMatrix<T>,
    pub unitarity: T,
    pub defect_intertwining: T,
    /// `‖V F_A V* − F_B‖_F`.
    pub f_residual: T,
    pub unitarity_star: T,
    pub f_star_residual: T,
}

impl<T: Real> InducedDefect<T> {
    pub fn max_residual(&self) -> T {
        self.unitarity
            .max(self.defect_intertwining)
            .max(self.f_residual)
            .max(self.unitarity_star)
            .max(self.f_star_residual)
    }

    pub fn witness(&self, u: &CMatrix<T>) -> Witness<T> {
        Witness {
            u: Some(u.clone()),
            eta1: self.v_star.clone(),
            sigma: self.v.clone(),
            sigma_star: self.v_star.clone(),
        }
    }
}

/// `(‖US_A − S_BU‖_F, ‖UP_A − P_BU‖_F)`.
pub fn intertwining_defect<T: Real>(u: &CMatrix<T>, a: &GammaPair<T>, b: &GammaPair<T>) -> (T, T) {
    (
        fro(&(u * a.s() - b.s() * u)),
        fro(&(u * a.p() - b.p() * u)),
    )
}

/// Restricts an ambient unitary intertwiner to the defect spaces of `P`
/// and `P*`.
pub fn induced_defect_unitary<T: Real>(
    u: &CMatrix<T>,
    a: &GammaPair<T>,
    b: &GammaPair<T>,
) -> Result<InducedDefect<T>> {
    if u.shape() != (b.dim(), a.dim()) {
        return Err(GammaError::DimensionMismatch(format!(
            "U is {}×{}, pairs have dimensions {} and {}",
            u.nrows(),
            u.ncols(),
            a.dim(),
            b.dim()
        )));
    }
    let ud = unitarity_defect(u);
    if ud > T::tol(tol::UNITARY) * T::lit(100.0) {
        return Err(GammaError::NotUnitary { defect: ud.as_f64() });
    }
    let (ds, dp) = intertwining_defect(u, a, b);
    let bound = T::tol(1e-8) * (T::one() + a.norm_s);
    if ds > bound || dp > bound {
        return Err(GammaError::NotIntertwining {
            s_defect: ds.as_f64(),
            p_defect: dp.as_f64(),
        });
    }
    let fa = solve_fundamental(a)?;
    let fb = solve_fundamental(b)?;
    Ok(induced_from(u, &fa, &fb))
}

fn induced_from<T: Real>(u: &CMatrix<T>, fa: &FundamentalPair<T>, fb: &FundamentalPair<T>) -> InducedDefect<T> {
    let v = fb.defect_p.q().adjoint() * u * fa.defect_p.q();
    let v_star = fb.defect_p_star.q().adjoint() * u * fa.defect_p_star.q();
    let defect_intertwining = fro(&(&v * fa.defect_p.compressed() - fb.defect_p.compressed() * &v));
    InducedDefect {
        unitarity: unitarity_defect(&v),
        unitarity_star: unitarity_defect(&v_star),
        defect_intertwining,
        f_residual: fro(&(&v * &fa.f * v.adjoint() - &fb.f)),
        f_star_residual: fro(&(&v_star * &fa.f_star * v_star.adjoint() - &fb.f_star)),
        v,
        v_star,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// Conclusive: a unitary invariant differs.
    NotEquivalent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalent => "EQUIVALENT",
            Verdict::NotEquivalent => "NOT_EQUIVALENT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceScreen {
    pub passed: bool,
    pub words_checked: usize,
    /// Largest `|tr_A − tr_B| / (1 + |tr_A|)`.
    pub worst: f64,
    pub failing_word: Option<String>,
}

struct WordScreen<'a, T: Real> {
    letters_a: Vec<CMatrix<T>>,
    letters_b: Vec<CMatrix<T>>,
    names: &'a [&'a str],
    max_len: usize,
    tol: f64,
    checked: usize,
    worst: f64,
    failing: Option<String>,
}

impl<T: Real> WordScreen<'_, T> {
    fn run(&mut self, pa: &CMatrix<T>, pb: &CMatrix<T>, word: &mut Vec<usize>) {
        if word.len() == self.max_len {
            return;
        }
        for k in 0..self.letters_a.len() {
            let na = pa * &self.letters_a[k];
            let nb = pb * &self.letters_b[k];
            word.push(k);
            let ta = na.trace();
            let tb = nb.trace();
            let rel = (cabs(ta - tb) / (T::one() + cabs(ta))).as_f64();
            self.checked += 1;
            self.worst = self.worst.max(rel);
            if rel > self.tol && self.failing.is_none() {
                self.failing = Some(word.iter().map(|&i| self.names[i]).collect::<Vec<_>>().join(" "));
            }
            self.run(&na, &nb, word);
            word.pop();
        }
    }
}

fn screen_words<T: Real>(
    a: &[&CMatrix<T>],
    b: &[&CMatrix<T>],
    names: &[&str],
    max_len: usize,
    relative_tol: f64,
) -> TraceScreen {
    let n = a.first().map(|m| m.nrows()).unwrap_or(0);
    let mut ws = WordScreen {
        letters_a: a.iter().map(|m| (*m).clone()).collect(),
        letters_b: b.iter().map(|m| (*m).clone()).collect(),
        names,
        max_len,
        tol: relative_tol,
        checked: 0,
        worst: 0.0,
        failing: None,
    };
    let id = identity::<T>(n);
    ws.run(&id, &id, &mut Vec::new());
    TraceScreen {
        passed: ws.failing.is_none(),
        words_checked: ws.checked,
        worst: ws.worst,
        failing_word: ws.failing,
    }
}

pub const SCREEN_TOL: f64 = 1e-6;

/// Necessary conditions for unitary equivalence: traces of words up to
/// length 6 in `(F, F^*)` and in `(F_*, F_*^*)`, and up to length 4 in
/// `(S, P, S^*, P^*)`. A failure is conclusive.
pub fn trace_screen<T: Real>(
    a: &GammaPair<T>,
    b: &GammaPair<T>,
    fa: &FundamentalPair<T>,
    fb: &FundamentalPair<T>,
) -> TraceScreen {
    if a.dim() != b.dim() || fa.f.nrows() != fb.f.nrows() || fa.f_star.nrows() != fb.f_star.nrows() {
        return TraceScreen {
            passed: false,
            words_checked: 0,
            worst: f64::INFINITY,
            failing_word: Some("dimension".into()),
        };
    }
    let mut total = 0;
    let mut worst: f64 = 0.0;
    let screens = [
        screen_words(&[&fa.f, &fa.f.adjoint()], &[&fb.f, &fb.f.adjoint()], &["F", "F^*"], 6, SCREEN_TOL),
        screen_words(
            &[&fa.f_star, &fa.f_star.adjoint()],
            &[&fb.f_star, &fb.f_star.adjoint()],
            &["F_*", "F_*^*"],
            6,
            SCREEN_TOL,
        ),
        screen_words(
            &[a.s(), a.p(), &a.s().adjoint(), &a.p().adjoint()],
            &[b.s(), b.p(), &b.s().adjoint(), &b.p().adjoint()],
            &["S", "P", "S^*", "P^*"],
            4,
            SCREEN_TOL,
        ),
    ];
    for sc in screens {
        total += sc.words_checked;
        worst = worst.max(sc.worst);
        if !sc.passed {
            return TraceScreen {
                passed: false,
                words_checked: total,
                worst,
                failing_word: sc.failing_word,
            };
        }
    }
    TraceScreen {
        passed: true,
        words_checked: total,
        worst,
        failing_word: None,
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport<T: Real> {
    pub verdict: Verdict,
    pub screen: TraceScreen,
    /// Keys: `witness_unitarity`, `eta_intertwining` (`‖η₁F_{*A} − F_{*B}η₁‖`),
    /// `coincidence` (`max_z ‖σ_*Θ_A − Θ_Bσ‖`), `sigma_star_intertwining`
    /// (`‖σ_*F_{*A} − F_{*B}σ_*‖`) and, for the model confirmation,
    /// `model_unitarity`, `model_S`, `model_P`.
    pub residuals: BTreeMap<&'static str, T>,
    /// `W_B-basis^* (I ⊗ η₁) W_A-basis`, the unitary realized through the
    /// functional models.
    pub model_unitary: Option<CMatrix<T>>,
    pub note: &'static str,
}

const WITNESS_TOL: f64 = 1e-8;
const MODEL_TOL: f64 = 1e-7;

/// Checks a witness. `EQUIVALENT` needs the intertwining of the adjoint
/// fundamental operators, coincidence of the characteristic functions and
/// a unitary realized through the two functional models that intertwines
/// the pairs; when the first two hold but the model unitary does not
/// intertwine, the verdict is `INCONCLUSIVE`.
pub fn verify_equivalence<T: Real>(
    a: &GammaPair<T>,
    b: &GammaPair<T>,
    w: &Witness<T>,
) -> Result<EquivalenceReport<T>> {
    for pair in [a, b] {
        if !is_pure(pair.p()) {
            return Err(GammaError::NotPure {
                spectral_radius: pair.spectral_radius_p.as_f64(),
            });
        }
    }
    let fa = solve_fundamental(a)?;
    let fb = solve_fundamental(b)?;
    let screen = trace_screen(a, b, &fa, &fb);
    let mut residuals = BTreeMap::new();
    if !screen.passed {
        return Ok(EquivalenceReport {
            verdict: Verdict::NotEquivalent,
            screen,
            residuals,
            model_unitary: None,
            note: "a unitary invariant differs",
        });
    }
    let (r, rs) = (fa.defect_p.rank(), fa.defect_p_star.rank());
    let expect = [(&w.eta1, rs, "η₁"), (&w.sigma, r, "σ"), (&w.sigma_star, rs, "σ_*")];
    for (m, k, name) in expect {
        if m.shape() != (k, k) {
            return Err(GammaError::DimensionMismatch(format!(
                "{name} is {}×{}, expected {k}×{k}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let unit = w.max_unitarity_defect();
    residuals.insert("witness_unitarity", unit);
    let eta_res = fro(&(&w.eta1 * &fa.f_star - &fb.f_star * &w.eta1));
    residuals.insert("eta_intertwining", eta_res);
    residuals.insert(
        "sigma_star_intertwining",
        fro(&(&w.sigma_star * &fa.f_star - &fb.f_star * &w.sigma_star)),
    );
    let ca = CharFn::from_defects(a.p(), fa.defect_p.clone(), fa.defect_p_star.clone(), 1);
    let cb = CharFn::from_defects(b.p(), fb.defect_p.clone(), fb.defect_p_star.clone(), 1);
    let coincidence = coincide_check(&ca, &cb, &w.sigma, &w.sigma_star, &default_grid())?;
    residuals.insert("coincidence", coincidence.max_residual);

    let tol_w = T::tol(WITNESS_TOL);
    let invariant_holds = unit <= T::tol(tol::UNITARY) * T::lit(100.0)
        && eta_res <= tol_w
        && coincidence.coincide();
    if !invariant_holds {
        return Ok(EquivalenceReport {
            verdict: Verdict::Inconclusive,
            screen,
            residuals,
            model_unitary: None,
            note: "witness rejected",
        });
    }

    let n_trunc = truncation_degree(a.p(), Truncation::Auto)?.max(truncation_degree(b.p(), Truncation::Auto)?);
    let ma = build_model(a, Truncation::Fixed(n_trunc))?;
    let mb = build_model(b, Truncation::Fixed(n_trunc))?;
    let ba = &ma.model_basis.q;
    let mut eta_ba = CMatrix::zeros(ba.nrows(), ba.ncols());
    for k in 0..n_trunc {
        let blk = ba.rows(k * rs, rs).into_owned();
        eta_ba.view_mut((k * rs, 0), (rs, ba.ncols())).copy_from(&(&w.eta1 * blk));
    }
    let um = mb.model_basis.q.adjoint() * eta_ba;
    let (ms, mp) = intertwining_defect(&um, a, b);
    let mu = unitarity_defect(&um);
    residuals.insert("model_unitarity", mu);
    residuals.insert("model_S", ms);
    residuals.insert("model_P", mp);
    let tol_m = T::tol(MODEL_TOL);
    let confirmed = mu <= tol_m && ms <= tol_m && mp <= tol_m;
    Ok(EquivalenceReport {
        verdict: if confirmed {
            Verdict::Equivalent
        } else {
            Verdict::Inconclusive
        },
        screen,
        residuals,
        model_unitary: Some(um),
        note: if confirmed {
            "confirmed through the functional models"
        } else {
            "invariants agree but the model unitary does not intertwine"
        },
    })
}

#[derive(Debug, Clone)]
pub enum SearchOutcome<T: Real> {
    Found {
        witness: Witness<T>,
        report: EquivalenceReport<T>,
        restart: usize,
    },
    /// The trace screen failed: conclusive.
    Screened(TraceScreen),
    NotFound {
        restarts: usize,
        best_residual: T,
    },
}

const POLISH_ITERS: usize = 400;

/// Majorize-minimize ascent of `Re tr(U^* (S_B U S_A^* + P_B U P_A^*))` over
/// unitaries via repeated polar factors.
fn polish<T: Real>(mut u: CMatrix<T>, a: &GammaPair<T>, b: &GammaPair<T>) -> CMatrix<T> {
    let mu = re(T::lit(2.0) * (a.norm_s * b.norm_s + a.norm_p * b.norm_p) + T::lit(1e-3));
    let target = T::tol(1e-13) * (T::one() + a.norm_s);
    for _ in 0..POLISH_ITERS {
        let (ds, dp) = intertwining_defect(&u, a, b);
        if ds.max(dp) <= target {
            break;
        }
        let g = b.s() * &u * a.s().adjoint()
            + b.s().adjoint() * &u * a.s()
            + b.p() * &u * a.p().adjoint()
            + b.p().adjoint() * &u * a.p()
            + &u * mu;
        u = polar_unitary(&g);
    }
    u
}

/// Aligns eigenvectors of `S + cP` in both pairs, fixing the column scaling
/// from the Gram matrices, and returns the nearest unitary.
fn eigen_alignment<T: Real>(a: &GammaPair<T>, b: &GammaPair<T>, c: C<T>) -> Option<CMatrix<T>> {
    let n = a.dim();
    let (la, xa) = eigenvectors(&(a.s() + a.p() * c));
    let (lb, xb) = eigenvectors(&(b.s() + b.p() * c));
    let mut used = vec![false; n];
    let mut perm = vec![0; n];
    for i in 0..n {
        let j = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&x, &y| {
                cabs(la[i] - lb[x])
                    .partial_cmp(&cabs(la[i] - lb[y]))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        used[j] = true;
        perm[i] = j;
    }
    let mut y = CMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        y.set_column(i, &xb.column(j));
    }
    // U X = Y D  ⇒  X*X = D* (Y*Y) D
    let gx = xa.adjoint() * &xa;
    let gy = y.adjoint() * &y;
    let mut d = vec![re(T::one()); n];
    let mut fixed = vec![false; n];
    for j in 0..n {
        let mag = (gx[(j, j)].re / gy[(j, j)].re).sqrt();
        let anchor = (0..j)
            .filter(|&i| fixed[i])
            .max_by(|&p, &q| cabs(gy[(p, j)]).partial_cmp(&cabs(gy[(q, j)])).unwrap_or(std::cmp::Ordering::Equal));
        let mut phase = re(T::one());
        if let Some(i) = anchor {
            let gyij = gy[(i, j)];
            if cabs(gyij) > T::lit(1e-8) {
                // gx_ij = conj(d_i) d_j gy_ij
                let dj = gx[(i, j)] / (d[i].conj() * gyij);
                phase = dj.unscale(cabs(dj));
            }
        }
        d[j] = phase * re(mag);
        fixed[j] = true;
    }
    let mut yd = y;
    for j in 0..n {
        let dj = d[j];
        for i in 0..n {
            yd[(i, j)] *= dj;
        }
    }
    let u = yd * inverse(&xa)?;
    Some(polar_unitary(&u))
}

/// Witness search: trace screen, then per restart a starting unitary
/// (identity, eigenvector alignment, Haar random) polished by polar
/// iteration; candidates are accepted only through [`verify_equivalence`].
pub fn search_witness<T: Real>(
    a: &GammaPair<T>,
    b: &GammaPair<T>,
    restarts: usize,
    seed: u64,
) -> Result<SearchOutcome<T>> {
    for pair in [a, b] {
        if !is_pure(pair.p()) {
            return Err(GammaError::NotPure {
                spectral_radius: pair.spectral_radius_p.as_f64(),
            });
        }
    }
    let fa = solve_fundamental(a)?;
    let fb = solve_fundamental(b)?;
    let screen = trace_screen(a, b, &fa, &fb);
    if !screen.passed {
        return Ok(SearchOutcome::Screened(screen));
    }
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::max_value().unwrap_or_else(T::one);
    let accept = T::tol(1e-9) * (T::one() + a.norm_s);
    for restart in 0..restarts.max(1) {
        let start = match restart {
            0 => Some(identity::<T>(n)),
            k if k % 2 == 1 => {
                let c: C<T> = random_disc_point::<T, _>(&mut rng, 1.0) + re::<T>(T::lit(0.5));
                eigen_alignment(a, b, c)
            }
            _ => Some(random_unitary::<T, _>(n, &mut rng)),
        };
        let Some(start) = start else { continue };
        let u = polish(start, a, b);
        let (ds, dp) = intertwining_defect(&u, a, b);
        let res = ds.max(dp);
        if res < best {
            best = res;
        }
        if res > accept {
            continue;
        }
        let induced = induced_from(&u, &fa, &fb);
        let witness = induced.witness(&u);
        let report = verify_equivalence(a, b, &witness)?;
        if report.verdict == Verdict::Equivalent {
            return Ok(SearchOutcome::Found {
                witness,
                report,
                restart,
            });
        }
    }
    Ok(SearchOutcome::NotFound {
        restarts,
        best_residual: best,
    })
}

/// `(‖US_A U* − S_B‖, ‖UP_AU* − P_B‖)` relative to `1 + ‖S_A‖`, a
/// convenience for reports.
pub fn relative_intertwining<T: Real>(u: &CMatrix<T>, a: &GammaPair<T>, b: &GammaPair<T>) -> T {
    let (ds, dp) = intertwining_defect(u, a, b);
    ds.max(dp) / (T::one() + op_norm(a.s()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::random_pure_gamma;
    use crate::scalar::c;
    use nalgebra::DMatrix;

    fn scalar(s: f64, p: f64) -> GammaPair<f64> {
        GammaPair::validate(
            DMatrix::from_element(1, 1, c(s, 0.0)),
            DMatrix::from_element(1, 1, c(p, 0.0)),
        )
        .unwrap()
    }

    fn diag(vals: &[f64]) -> CMatrix<f64> {
        let n = vals.len();
        DMatrix::from_fn(n, n, |i, j| if i == j { c(vals[i], 0.0) } else { c(0.0, 0.0) })
    }

    fn planted(n: usize, seed: u64) -> (GammaPair<f64>, GammaPair<f64>, CMatrix<f64>) {
        let a = random_pure_gamma::<f64>(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let u = random_unitary::<f64, _>(n, &mut rng);
        let b = a.conjugate(&u).unwrap();
        (a, b, u)
    }

    #[test]
    fn identity_witness_on_same_pair() {
        let a = random_pure_gamma::<f64>(4, 1);
        let w = Witness::identity_for(&a).unwrap();
        let rep = verify_equivalence(&a, &a, &w).unwrap();
        assert_eq!(rep.verdict, Verdict::Equivalent, "{:?}", rep.residuals);
        assert!(rep.residuals["eta_intertwining"] < 1e-15);
        assert!(rep.residuals["coincidence"] < 1e-15);
    }

    #[test]
    fn induced_unitary_examples() {
        let a = random_pure_gamma::<f64>(3, 5);
        let ind = induced_defect_unitary(&identity::<f64>(3), &a, &a).unwrap();
        assert!(ind.max_residual() < 1e-14);
        for seed in 0..20 {
            let (a, b, u) = planted(1 + seed as usize % 8, seed);
            let ind = induced_defect_unitary(&u, &a, &b).unwrap();
            assert!(ind.max_residual() <= 1e-9, "seed {seed}: {ind:?}");
            let rep = verify_equivalence(&a, &b, &ind.witness(&u)).unwrap();
            assert_eq!(rep.verdict, Verdict::Equivalent, "seed {seed}: {:?}", rep.residuals);
        }
    }

    #[test]
    fn permutation_on_diagonal_pair() {
        let a = GammaPair::validate(diag(&[0.5, 0.1, 0.0]), diag(&[0.0, 0.3, 0.6])).unwrap();
        let swap = DMatrix::from_fn(3, 3, |i, j| {
            let p = [2, 0, 1];
            if i == p[j] { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        let b = a.conjugate(&swap).unwrap();
        let ind = induced_defect_unitary(&swap, &a, &b).unwrap();
        assert!(ind.max_residual() < 1e-14);
        // each column of V has exactly one unimodular entry
        for j in 0..ind.v.ncols() {
            let big = ind.v.column(j).iter().filter(|z| cabs(**z) > 0.5).count();
            assert_eq!(big, 1);
        }
        assert!(matches!(
            induced_defect_unitary(&identity::<f64>(3), &a, &b),
            Err(GammaError::NotIntertwining { .. })
        ));
    }

    #[test]
    fn scalars_differ_conclusively() {
        let a = scalar(1.0, 0.25);
        let b = scalar(1.0, 0.5);
        let fb = solve_fundamental(&b).unwrap();
        assert!((fb.f[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        match search_witness(&a, &b, 5, 0).unwrap() {
            SearchOutcome::Screened(sc) => assert_eq!(sc.failing_word.as_deref(), Some("F")),
            other => panic!("expected screen failure, got {other:?}"),
        }
        let one = DMatrix::from_element(1, 1, c(1.0, 0.0));
        let w = Witness {
            u: None,
            eta1: one.clone(),
            sigma: one.clone(),
            sigma_star: one,
        };
        assert_eq!(verify_equivalence(&a, &b, &w).unwrap().verdict, Verdict::NotEquivalent);
    }

    #[test]
    fn invariant_data_alone_does_not_force_equivalence() {
        // F_* agree up to a swap and Θ_P agree with identity witnesses, but
        // the S spectra differ
        let p = diag(&[0.0, 0.5]);
        let a = GammaPair::validate(diag(&[0.5, 0.0]), p.clone()).unwrap();
        let b = GammaPair::validate(diag(&[0.0, 0.75]), p).unwrap();
        let fa = solve_fundamental(&a).unwrap();
        let fb = solve_fundamental(&b).unwrap();
        let swap = DMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let qa = fa.defect_p_star.q();
        let qb = fb.defect_p_star.q();
        let eta1 = qb.adjoint() * &swap * qa;
        assert!(fro(&(&eta1 * &fa.f_star - &fb.f_star * &eta1)) < 1e-14);
        let w = Witness {
            u: None,
            eta1,
            sigma: fb.defect_p.q().adjoint() * fa.defect_p.q(),
            sigma_star: qb.adjoint() * qa,
        };
        let ca = CharFn::from_defects(a.p(), fa.defect_p.clone(), fa.defect_p_star.clone(), 1);
        let cb = CharFn::from_defects(b.p(), fb.defect_p.clone(), fb.defect_p_star.clone(), 1);
        assert!(coincide_check(&ca, &cb, &w.sigma, &w.sigma_star, &default_grid()).unwrap().coincide());
        let screen = trace_screen(&a, &b, &fa, &fb);
        assert!(!screen.passed);
        assert_eq!(verify_equivalence(&a, &b, &w).unwrap().verdict, Verdict::NotEquivalent);
    }

    #[test]
    fn model_confirmation_rejects_incompatible_witnesses() {
        // same counterexample with the screen bypassed: the model unitary
        // built from η₁ fails to intertwine
        let p = diag(&[0.0, 0.5]);
        let a = GammaPair::validate(diag(&[0.5, 0.0]), p.clone()).unwrap();
        let b = GammaPair::validate(diag(&[0.0, 0.75]), p).unwrap();
        let fa = solve_fundamental(&a).unwrap();
        let fb = solve_fundamental(&b).unwrap();
        let swap = DMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let eta1 = fb.defect_p_star.q().adjoint() * &swap * fa.defect_p_star.q();
        let rs = 2;
        let n_trunc = 60;
        let ma = build_model(&a, Truncation::Fixed(n_trunc)).unwrap();
        let mb = build_model(&b, Truncation::Fixed(n_trunc)).unwrap();
        let mut eta_ba = ma.model_basis.q.clone();
        for k in 0..n_trunc {
            let blk = ma.model_basis.q.rows(k * rs, rs).into_owned();
            eta_ba.view_mut((k * rs, 0), (rs, 2)).copy_from(&(&eta1 * blk));
        }
        let um = mb.model_basis.q.adjoint() * eta_ba;
        assert!(unitarity_defect(&um) > 0.1);
    }

    #[test]
    fn search_finds_planted_witnesses() {
        for seed in 0..12u64 {
            let n = 1 + seed as usize % 6;
            let (a, b, _) = planted(n, 40 + seed);
            match search_witness(&a, &b, 12, seed).unwrap() {
                SearchOutcome::Found { witness, report, .. } => {
                    assert_eq!(report.verdict, Verdict::Equivalent);
                    assert!(witness.max_unitarity_defect() <= 1e-10);
                }
                other => panic!("seed {seed} n {n}: {other:?}"),
            }
        }
    }

    #[test]
    fn screen_is_invariant_under_conjugation() {
        let (a, b, _) = planted(5, 3);
        let fa = solve_fundamental(&a).unwrap();
        let fb = solve_fundamental(&b).unwrap();
        let sc = trace_screen(&a, &b, &fa, &fb);
        assert!(sc.passed && sc.worst <= 1e-10, "{sc:?}");
        assert_eq!(sc.words_checked, 126 + 126 + 340);
    }

    #[test]
    fn impure_pairs_are_rejected() {
        let g = crate::pair::random_gamma_unitary::<f64>(2, 1);
        let w = Witness {
            u: None,
            eta1: CMatrix::zeros(0, 0),
            sigma: CMatrix::zeros(0, 0),
            sigma_star: CMatrix::zeros(0, 0),
        };
        assert!(matches!(verify_equivalence(&g, &g, &w), Err(GammaError::NotPure { .. })));
    }
}
