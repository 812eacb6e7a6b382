//! Checks tied to the homogeneous solutions: `ker T_G = im T_Theta`,
//! anticausality of `Theta* Xi`, and the Pythagoras split of `||X u||`.

use super::freqint::{integrate_axis, integrate_axis_real};
use super::identities::eval_on_grid;
use super::report::{CheckId, ReportEntry};
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Placement, TimeGrid};
use crate::halfline::build::wiener_hopf_named;
use crate::halfline::{spd_solve, spectral_norm, DiscretizedOperator, SpdSolveConfig};
use crate::halfline::spectrum::{norm, random_vector};
use crate::scalar::{CMat, Cplx, Real};
use crate::solver::{parametrize, BezoutSolution, SolutionParameter};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

type C64 = Complex<f64>;

fn to_c64<T: Real>(z: Cplx<T>) -> C64 {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

/// `||T_G T_Theta|| / ||T_G||` on the discretization. The reverse inclusion
/// is probed with smooth vectors of `ker T_G` and reported as the relative
/// distance from `im T_Theta`.
pub fn kernel_identity<T: Real>(sol: &BezoutSolution<T>, tol: f64) -> Result<ReportEntry> {
    if sol.theta.cols() == 0 {
        return Ok(ReportEntry::new(CheckId::KernelIdentity, 0.0, tol).note("square case: Theta is empty"));
    }
    let tg = wiener_hopf_named(&sol.g, &sol.grid, "T_G")?;
    let tth = wiener_hopf_named(&sol.theta, &sol.grid, "T_Theta")?;
    let prod = tg.compose(&tth)?;
    let ng = spectral_norm(&tg)?.as_f64();
    let np = spectral_norm(&prod)?.as_f64();
    let ratio = if ng > 0.0 { np / ng } else { np };
    let reverse = reverse_inclusion(&tg, &tth, &sol.grid, 2)?;
    Ok(ReportEntry::new(CheckId::KernelIdentity, ratio, tol)
        .metric("norm_tg", ng)
        .metric("norm_tg_ttheta", np)
        .metric("reverse_inclusion", reverse))
}

/// Largest relative distance of `n = (I - T_G* (T_G T_G*)^{-1} T_G) v` from
/// `im T_Theta` over `probes` smooth probes `v` (sums of decaying exponentials).
pub fn reverse_inclusion<T: Real>(
    tg: &DiscretizedOperator<T>,
    tth: &DiscretizedOperator<T>,
    grid: &TimeGrid<T>,
    probes: usize,
) -> Result<f64> {
    let p = tg.in_dim();
    let n = grid.count();
    let cfg = SpdSolveConfig::default();
    let gram = crate::halfline::build_tg_tgstar(tg)?;
    let theta_gram = tth.adjoint().compose(tth)?.materialize_if_small().hermitized();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65);
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let mut v = vec![Complex::new(T::zero(), T::zero()); n * p];
        for _ in 0..3 {
            let rate: f64 = rng.gen_range(0.5..2.0);
            let c = random_vector::<T>(p, rng.gen());
            for j in 0..n {
                let e = T::lit((-rate * grid.time(Placement::Cells, j).as_f64()).exp());
                for (k, ck) in c.iter().enumerate() {
                    v[j * p + k] += *ck * Complex::new(e, T::zero());
                }
            }
        }
        let gv = tg.apply(&v);
        let f = spd_solve(&gram, &CMat::from_column_slice(gv.len(), 1, &gv), &cfg)?.x;
        let back = tg.adjoint().apply(f.as_slice());
        let nullv: Vec<Cplx<T>> = v.iter().zip(&back).map(|(a, b)| *a - *b).collect();
        let nn = norm(&nullv);
        if nn == T::zero() {
            continue;
        }
        let rhs = tth.adjoint().apply(&nullv);
        let w = spd_solve(&theta_gram, &CMat::from_column_slice(rhs.len(), 1, &rhs), &cfg)?.x;
        let proj = tth.apply(w.as_slice());
        let dist: Vec<Cplx<T>> = nullv.iter().zip(&proj).map(|(a, b)| *a - *b).collect();
        worst = worst.max((norm(&dist) / nn).as_f64());
    }
    Ok(worst)
}

/// Time-domain `L^2` masses of an axis function on `[-T, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnticausalMass {
    pub total: f64,
    /// Mass on `(delta, T]`.
    pub positive: f64,
    pub ratio: f64,
}

/// Inverse Fourier transform `phi(t) = (1/2pi) int M(w) e^{iwt} dw` on the
/// nodes `n h`, `|n| < count`, by direct quadrature. The `1/w` behaviour of
/// `M` (a jump of `phi` at 0) is fitted on the last decade as
/// `J/(1 - iw) + K/(1 + iw)`, subtracted before quadrature and restored
/// exactly as `J e^{t} 1_{t<0} + K e^{-t} 1_{t>0}`.
pub fn anticausal_mass<T: Real>(
    omegas: &[T],
    values: &[CMat<T>],
    grid: &TimeGrid<T>,
    delta: f64,
) -> AnticausalMass {
    let w: Vec<f64> = omegas.iter().map(|x| x.as_f64()).collect();
    let kw = values.first().map_or(0, |v| v.len());
    let cols: Vec<Vec<C64>> = (0..kw).map(|e| values.iter().map(|v| to_c64(v.as_slice()[e])).collect()).collect();
    let wmax = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let fits: Vec<(C64, C64)> = cols.iter().map(|c| fit_jump(&w, c, 0.1 * wmax)).collect();
    let weights = trapezoid(&w);
    let rem: Vec<Vec<C64>> = cols
        .iter()
        .zip(&fits)
        .map(|(c, (j, k))| {
            c.iter()
                .zip(&w)
                .map(|(m, x)| *m - *j / C64::new(1.0, -x) - *k / C64::new(1.0, *x))
                .collect()
        })
        .collect();
    let h = grid.step().as_f64();
    let n = grid.count() as i64;
    let pieces: Vec<(f64, f64)> = (-(n - 1)..n)
        .into_par_iter()
        .map(|idx| {
            let t = idx as f64 * h;
            let phases: Vec<C64> = w.iter().zip(&weights).map(|(x, wt)| C64::from_polar(*wt, x * t)).collect();
            let mut sq = 0.0;
            for (r, (j, k)) in rem.iter().zip(&fits) {
                let mut v = r.iter().zip(&phases).fold(C64::new(0.0, 0.0), |a, (x, p)| a + x * p) / (2.0 * PI);
                v += match idx.cmp(&0) {
                    std::cmp::Ordering::Less => *j * t.exp(),
                    std::cmp::Ordering::Greater => *k * (-t).exp(),
                    std::cmp::Ordering::Equal => (*j + *k) * 0.5,
                };
                sq += v.norm_sqr();
            }
            let wt = if idx.abs() == n - 1 { 0.5 * h } else { h };
            (sq * wt, if t > delta { sq * wt } else { 0.0 })
        })
        .collect();
    let total: f64 = pieces.iter().map(|p| p.0).sum();
    let positive: f64 = pieces.iter().map(|p| p.1).sum();
    AnticausalMass { total, positive, ratio: if total > 0.0 { positive / total } else { 0.0 } }
}

fn trapezoid(w: &[f64]) -> Vec<f64> {
    (0..w.len())
        .map(|k| {
            let l = if k > 0 { w[k] - w[k - 1] } else { 0.0 };
            let r = if k + 1 < w.len() { w[k + 1] - w[k] } else { 0.0 };
            0.5 * (l + r)
        })
        .collect()
}

/// Least-squares `(J, K)` for `m(w) ~ J/(1 - iw) + K/(1 + iw)` on `|w| >= lo`.
fn fit_jump(w: &[f64], m: &[C64], lo: f64) -> (C64, C64) {
    let zero = C64::new(0.0, 0.0);
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, zero, 0.0, zero, zero);
    for (x, v) in w.iter().zip(m) {
        if x.abs() < lo || lo <= 0.0 {
            continue;
        }
        let f1 = C64::new(1.0, 0.0) / C64::new(1.0, -x);
        let f2 = C64::new(1.0, 0.0) / C64::new(1.0, *x);
        a11 += f1.norm_sqr();
        a22 += f2.norm_sqr();
        a12 += f1.conj() * f2;
        b1 += f1.conj() * v;
        b2 += f2.conj() * v;
    }
    let det = a11 * a22 - a12.norm_sqr();
    if !(det > 1e-14 * a11 * a22) {
        return (zero, zero);
    }
    let j = (b1 * a22 - a12 * b2) / det;
    let k = (b2 * a11 - a12.conj() * b1) / det;
    (j, k)
}

/// Positive-time mass fraction of `Theta* Xi`, which must be anticausal.
pub fn anticausality<T: Real>(sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>, tol: f64) -> Result<ReportEntry> {
    if sol.theta.cols() == 0 {
        return Ok(ReportEntry::new(CheckId::Anticausality, 0.0, tol).note("square case: Theta is empty"));
    }
    let th = eval_on_grid(&sol.theta, freq)?;
    let xi = eval_on_grid(&sol.xi, freq)?;
    let vals: Vec<CMat<T>> = th.iter().zip(&xi).map(|(t, x)| t.adjoint() * x).collect();
    let h = sol.grid.step().as_f64();
    let mass = anticausal_mass(freq.omegas(), &vals, &sol.grid, 2.0 * h);
    let e = if mass.total < 1e-14 {
        ReportEntry::new(CheckId::Anticausality, 0.0, tol).note("negligible total mass")
    } else {
        ReportEntry::new(CheckId::Anticausality, mass.ratio, tol)
    };
    Ok(e.metric("total_mass", mass.total).metric("positive_mass", mass.positive))
}

/// Terms of the Pythagoras identity for one parameter and one vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PythagorasTerms {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub cross: f64,
    pub relative_error: f64,
}

/// `P1 = ||(X - X(inf)) u||^2`, `P2 = ||(Xi - D+) u||^2`, `P3 = ||Z u||^2`
/// (norms in `L^2` of the axis with measure `dw / 2pi`) and the cross term
/// `<(Xi - D+) u, Theta Z u>`, with `X = Xi + Theta Z`.
pub fn pythagoras_terms<T: Real>(
    sol: &BezoutSolution<T>,
    z: &SolutionParameter<T>,
    u: &[Cplx<T>],
    freq: &FrequencyGrid<T>,
) -> Result<PythagorasTerms> {
    if !z.strictly_proper() {
        return Err(Error::InvalidParameter("Z must be strictly proper".into()));
    }
    if u.len() != sol.m() || u.iter().all(|x| *x == Complex::new(T::zero(), T::zero())) {
        return Err(Error::InvalidParameter(format!("u must be a nonzero vector of length {}", sol.m())));
    }
    let x = parametrize(sol, z)?;
    let uc = CMat::from_column_slice(u.len(), 1, u);
    let xinf = x.constant() * &uc;
    let dplus = &sol.pointers.d_plus * &uc;
    let zf = z.function();
    let rows: Vec<(f64, f64, f64, C64)> = freq
        .omegas()
        .par_iter()
        .map(|w| {
            let d1 = x.eval_axis(*w)? * &uc - &xinf;
            let d2 = sol.xi.eval_axis(*w)? * &uc - &dplus;
            let zu = zf.eval_axis(*w)? * &uc;
            let tz = sol.theta.eval_axis(*w)? * &zu;
            let cross = (d2.adjoint() * tz)[(0, 0)];
            Ok((
                d1.norm_squared().as_f64(),
                d2.norm_squared().as_f64(),
                zu.norm_squared().as_f64(),
                to_c64(cross),
            ))
        })
        .collect::<Result<_>>()?;
    let w: Vec<f64> = freq.omegas().iter().map(|x| x.as_f64()).collect();
    let take = |f: &dyn Fn(&(f64, f64, f64, C64)) -> f64| -> f64 {
        integrate_axis_real(&w, &rows.iter().map(f).collect::<Vec<_>>()) / (2.0 * PI)
    };
    let p1 = take(&|r| r.0);
    let p2 = take(&|r| r.1);
    let p3 = take(&|r| r.2);
    let cross = integrate_axis(&w, &rows.iter().map(|r| r.3).collect::<Vec<_>>()).norm() / (2.0 * PI);
    let relative_error = (p1 - p2 - p3).abs() / p1.max(1e-14);
    Ok(PythagorasTerms { p1, p2, p3, cross, relative_error })
}

pub fn pythagoras<T: Real>(
    sol: &BezoutSolution<T>,
    z: &SolutionParameter<T>,
    u: &[Cplx<T>],
    freq: &FrequencyGrid<T>,
    tol: f64,
) -> Result<ReportEntry> {
    let t = pythagoras_terms(sol, z, u, freq)?;
    Ok(ReportEntry::new(CheckId::Pythagoras, t.relative_error, tol)
        .metric("p1", t.p1)
        .metric("p2", t.p2)
        .metric("p3", t.p3)
        .metric("cross", t.cross)
        .require(t.cross <= tol))
}

/// Pythagoras over `draws` random strictly proper parameters and unit vectors;
/// the entry carries the worst relative error and cross term.
pub fn pythagoras_random<T: Real>(
    sol: &BezoutSolution<T>,
    freq: &FrequencyGrid<T>,
    tol: f64,
    draws: usize,
    seed: u64,
) -> Result<ReportEntry> {
    let (m, p) = (sol.m(), sol.p());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut worst_cross) = (0.0f64, 0.0f64);
    for _ in 0..draws {
        let z = SolutionParameter::new(crate::oracle::random::strictly_proper(p - m, m, &mut rng));
        let u = crate::oracle::random::unit_vector::<T, _>(m, &mut rng);
        let t = pythagoras_terms(sol, &z, &u, freq)?;
        worst = worst.max(t.relative_error);
        worst_cross = worst_cross.max(t.cross);
    }
    Ok(ReportEntry::new(CheckId::Pythagoras, worst, tol)
        .metric("draws", draws as f64)
        .metric("cross", worst_cross)
        .require(worst_cross <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{CausalKernel, ExpSum, WienerPlusFunction};
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;
    use crate::solver::{solve, SolverConfig};

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    fn freq() -> FrequencyGrid<f64> {
        FrequencyGrid::uniform(50.0, 2001).unwrap()
    }

    #[test]
    fn closed_form_anticausal_function() {
        let grid = TimeGrid::from_horizon(0.01, 30.0).unwrap();
        let f = freq();
        let r2 = 2f64.sqrt();
        let vals: Vec<CMat<f64>> = f.omegas().iter().map(|w| CMat::from_element(1, 1, -1.0 / cplx::<f64>(r2, -w))).collect();
        let m = anticausal_mass(f.omegas(), &vals, &grid, 0.02);
        assert!(m.ratio < 1e-3, "{m:?}");
        assert!((m.total - 1.0 / (2.0 * r2)).abs() < 0.02 / (2.0 * r2), "{m:?}");
        let causal: Vec<CMat<f64>> = f.omegas().iter().map(|w| CMat::from_element(1, 1, 1.0 / cplx::<f64>(r2, *w))).collect();
        let c = anticausal_mass(f.omegas(), &causal, &grid, 0.02);
        // all mass sits at t > 0; the window (0, 0.02] holds 1 - e^{-0.04 sqrt 2} of it
        assert!(c.ratio > 0.9, "{c:?}");
    }

    #[test]
    fn g0_checks() {
        let grid = TimeGrid::from_horizon(0.02, 30.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let f = freq();
        let a = anticausality(&sol, &f, 1e-3).unwrap();
        assert!(a.pass, "{a:?}");
        let z = SolutionParameter::new(
            WienerPlusFunction::new(
                from_real_rows(&[&[0.0]]),
                CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[1.0]]), cplx(1.0, 0.0)).unwrap()),
            )
            .unwrap(),
        );
        let t = pythagoras_terms(&sol, &z, &[cplx(1.0, 0.0)], &f).unwrap();
        assert!((t.p1 - 0.5).abs() < 1e-3 && (t.p3 - 0.5).abs() < 1e-3 && t.p2.abs() < 1e-6, "{t:?}");
        assert!(t.cross < 1e-3);
        let zero = SolutionParameter::new(WienerPlusFunction::constant_only(from_real_rows(&[&[0.0]])));
        let t0 = pythagoras_terms(&sol, &zero, &[cplx(1.0, 0.0)], &f).unwrap();
        assert_eq!((t0.p3, t0.relative_error), (0.0, 0.0));
        let proper = SolutionParameter::new(WienerPlusFunction::constant_only(from_real_rows(&[&[1.0]])));
        assert!(pythagoras_terms(&sol, &proper, &[cplx(1.0, 0.0)], &f).is_err());
    }

    #[test]
    fn g0_kernel_identity() {
        let grid = TimeGrid::from_horizon(0.05, 20.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let e = kernel_identity(&sol, 1e-3).unwrap();
        assert!(e.pass, "{e:?}");
        assert!(e.metrics["reverse_inclusion"] < 1e-2, "{e:?}");
    }
}
