//! Semiorthogonal decomposition data from central-charge asymptotics.
//!
//! Each object contributes a sampled charge `Z_t`. Its continuous logarithm
//! is fitted as `alpha t + gamma ln t + beta` on the upper half of the grid;
//! objects are grouped by `alpha`, groups are ordered by `Im alpha`, and the
//! classes of each group span one lattice summand.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::{c64, continue_log, is_finite};
use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix};
use crate::ode::Gauged;
use crate::qde::lstsq;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Largest accepted residual (sup norm on the tail, natural-log units).
    pub fit_tol: f64,
    /// Adds a `1/t` column to soak up the first correction of an asymptotic series.
    pub inverse_t: bool,
    /// Adds a `t^(1/2)` column, for possibly ramified spectra.
    pub sqrt_t: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            fit_tol: 1e-3,
            inverse_t: true,
            sqrt_t: false,
        }
    }
}

/// A sampled charge with its continuous logarithm.
#[derive(Clone, Debug)]
pub struct ChargeSeries {
    pub label: String,
    pub class_v: Vec<Complex64>,
    pub t: Vec<f64>,
    pub log_z: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFit {
    pub label: String,
    pub class_v: Vec<Complex64>,
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub beta: Complex64,
    pub residual_sup: f64,
    /// Residuals of refits on the upper 1/2, 1/4 and 1/8 of the grid.
    pub nested_residuals: Vec<f64>,
    pub quasi_convergent: bool,
    pub accepted: bool,
}

/// Continuous logarithm of a sampled, eventually nonzero series.
///
/// The branch at each sample is the one closest to a linear extrapolation in
/// `t` of the previous two, so phases may advance by several radians per step
/// as long as they do so smoothly. A deviation above `pi/2` from the
/// prediction is reported as a failure to track.
pub fn lift_log_samples(label: &str, t: &[f64], z: &[Complex64]) -> Result<Vec<Complex64>> {
    let bad = || Error::NotEventuallyNonzero { label: label.into() };
    let mut out: Vec<Complex64> = Vec::with_capacity(z.len());
    for (i, &zi) in z.iter().enumerate() {
        if zi.norm() == 0.0 || !is_finite(zi) {
            return Err(bad());
        }
        let l = zi.ln();
        if i == 0 {
            out.push(l);
            continue;
        }
        if i == 1 {
            out.push(continue_log(out[0], zi, FRAC_PI_2).ok_or_else(bad)?);
            continue;
        }
        let (l1, l2) = (out[i - 1], out[i - 2]);
        let h = t[i - 1] - t[i - 2];
        let pred = if h != 0.0 {
            l1.im + (l1.im - l2.im) * (t[i] - t[i - 1]) / h
        } else {
            l1.im
        };
        let k = ((pred - l.im) / TAU).round();
        let im = l.im + k * TAU;
        if (im - pred).abs() > FRAC_PI_2 {
            return Err(bad());
        }
        out.push(c64(l.re, im));
    }
    Ok(out)
}

fn design_row(t: f64, opts: &FitOptions) -> Vec<f64> {
    let mut r = alloc::vec![t, t.ln(), 1.0];
    if opts.inverse_t {
        r.push(1.0 / t);
    }
    if opts.sqrt_t {
        r.push(t.sqrt());
    }
    r
}

struct ComplexFit {
    coef: Vec<Complex64>,
    residual: f64,
}

fn fit_range(t: &[f64], y: &[Complex64], opts: &FitOptions) -> Option<ComplexFit> {
    let rows: Vec<Vec<f64>> = t.iter().map(|&t| design_row(t, opts)).collect();
    let re: Vec<f64> = y.iter().map(|z| z.re).collect();
    let im: Vec<f64> = y.iter().map(|z| z.im).collect();
    let cr = lstsq(&rows, &re)?;
    let ci = lstsq(&rows, &im)?;
    let coef: Vec<Complex64> = cr.iter().zip(&ci).map(|(&a, &b)| c64(a, b)).collect();
    let residual = rows
        .iter()
        .zip(y)
        .map(|(row, &yv)| {
            let model: Complex64 = row.iter().zip(&coef).map(|(&x, &c)| c * x).sum();
            (yv - model).norm()
        })
        .fold(0.0, f64::max);
    Some(ComplexFit { coef, residual })
}

fn sorted_by_t(t: &[f64], y: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by(|&a, &b| t[a].partial_cmp(&t[b]).unwrap_or(core::cmp::Ordering::Equal));
    (idx.iter().map(|&i| t[i]).collect(), idx.iter().map(|&i| y[i]).collect())
}

/// Fits an already lifted logarithm.
pub fn fit_log_asymptotics(series: &ChargeSeries, opts: &FitOptions) -> Result<AsymptoticFit> {
    let (t, y) = sorted_by_t(&series.t, &series.log_z);
    let n = t.len();
    if n < 16 || t.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "fit for {} needs at least 16 samples",
            series.label
        )));
    }
    if !(t[0] > 0.0) || t[n - 1] / t[0] < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!(
            "fit for {} needs a grid spanning two decades",
            series.label
        )));
    }
    let fail = || Error::InvalidInput(format!("fit for {}: degenerate design", series.label));
    let main = fit_range(&t[n / 2..], &y[n / 2..], opts).ok_or_else(fail)?;
    let mut nested = alloc::vec![main.residual];
    for start in [3 * n / 4, 7 * n / 8] {
        if n - start >= design_row(1.0, opts).len() + 3 {
            let f = fit_range(&t[start..], &y[start..], opts).ok_or_else(fail)?;
            nested.push(f.residual);
        }
    }
    let scale = y.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let floor = 1e-10 * scale;
    let quasi_convergent = nested.windows(2).all(|w| w[1] <= w[0].max(floor) * (1.0 + 1e-9));
    let accepted = main.residual < opts.fit_tol && quasi_convergent;
    Ok(AsymptoticFit {
        label: series.label.clone(),
        class_v: series.class_v.clone(),
        alpha: main.coef[0],
        gamma: main.coef[1],
        beta: main.coef[2],
        residual_sup: main.residual,
        nested_residuals: nested,
        quasi_convergent,
        accepted,
    })
}

/// Lifts `z` and fits it; returns the fit and the lifted series.
pub fn fit_asymptotics(
    label: &str,
    class_v: &[Complex64],
    t: &[f64],
    z: &[Complex64],
    opts: &FitOptions,
) -> Result<(AsymptoticFit, ChargeSeries)> {
    if t.len() != z.len() {
        return Err(Error::InvalidInput("fit: length mismatch".into()));
    }
    let (ts, zs) = sorted_by_t(t, z);
    let n = zs.len();
    if zs[n / 2..].iter().any(|z| z.norm() == 0.0 || !is_finite(*z)) {
        return Err(Error::NotEventuallyNonzero { label: label.into() });
    }
    let log_z = lift_log_samples(label, &ts, &zs)?;
    let series = ChargeSeries {
        label: label.into(),
        class_v: class_v.to_vec(),
        t: ts,
        log_z,
    };
    Ok((fit_log_asymptotics(&series, opts)?, series))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSkeleton {
    pub alpha: Complex64,
    /// Indices into the fit list.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SodSkeleton {
    pub clusters: Vec<ClusterSkeleton>,
    pub tol: f64,
}

fn cmp_f64(a: f64, b: f64) -> core::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(core::cmp::Ordering::Equal)
}

/// Groups exponents within `tol` (in both parts) and orders groups by `Im alpha`.
pub fn cluster_and_order(fits: &[AsymptoticFit], tol: f64) -> Result<SodSkeleton> {
    if let Some(f) = fits.iter().find(|f| !f.accepted) {
        return Err(Error::InvalidInput(format!(
            "fit for {} was not accepted (residual {:.3e})",
            f.label, f.residual_sup
        )));
    }
    let close = |a: Complex64, b: Complex64| (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol;
    // single linkage
    let n = fits.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn root(g: &mut [usize], mut i: usize) -> usize {
        while g[i] != i {
            g[i] = g[g[i]];
            i = g[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if close(fits[i].alpha, fits[j].alpha) {
                let (a, b) = (root(&mut group, i), root(&mut group, j));
                if a != b {
                    group[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<ClusterSkeleton> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = root(&mut group, i);
        match roots.iter().position(|&x| x == r) {
            Some(p) => clusters[p].members.push(i),
            None => {
                roots.push(r);
                clusters.push(ClusterSkeleton {
                    alpha: c64(0.0, 0.0),
                    members: alloc::vec![i],
                });
            }
        }
    }
    for c in clusters.iter_mut() {
        c.alpha = c.members.iter().map(|&i| fits[i].alpha).sum::<Complex64>() / c.members.len() as f64;
    }
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let d = clusters[i].alpha - clusters[j].alpha;
            if d.im.abs() <= tol && d.re.abs() > tol {
                return Err(Error::Genericity {
                    first: fits[clusters[i].members[0]].label.clone(),
                    second: fits[clusters[j].members[0]].label.clone(),
                });
            }
        }
    }
    clusters.sort_by(|a, b| cmp_f64(a.alpha.im, b.alpha.im).then(cmp_f64(a.alpha.re, b.alpha.re)));
    Ok(SodSkeleton { clusters, tol })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SodMember {
    pub label: String,
    pub class_v: Vec<Complex64>,
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub beta: Complex64,
    pub limit_z: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SodCluster {
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub members: Vec<SodMember>,
    /// Independent generators of the summand.
    pub lattice_basis: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCheck {
    pub direct: bool,
    /// Rank of the concatenated summand bases.
    pub rank: usize,
    pub generators: usize,
    /// Smallest relative singular value of the concatenated bases.
    pub min_rel_singular: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanningStatus {
    Holds,
    Deficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningReport {
    pub r: f64,
    pub dim_f: usize,
    pub dim_span: usize,
    pub status: SpanningStatus,
    /// Singular value growth rates of the fundamental solution, descending.
    pub rates: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SodResult {
    pub clusters: Vec<SodCluster>,
    pub lattice_check: LatticeCheck,
    pub spanning: Vec<SpanningReport>,
}

const RANK_FLOOR: f64 = 1e-8;

/// Rank of a set of complex vectors (as columns), relative singular value floor.
pub fn vector_rank(vs: &[Vec<Complex64>]) -> (usize, f64) {
    if vs.is_empty() {
        return (0, 1.0);
    }
    let dim = vs[0].len();
    let n = dim.max(vs.len());
    let m = CMatrix::from_fn(n, |i, j| {
        if i < dim && j < vs.len() {
            vs[j][i]
        } else {
            c64(0.0, 0.0)
        }
    });
    let Ok(s) = svd(&m) else {
        return (0, 0.0);
    };
    let top = s.sigma[0];
    if top == 0.0 {
        return (0, 0.0);
    }
    let k = vs.len().min(dim);
    let rank = s.sigma.iter().filter(|&&x| x > RANK_FLOOR * top).count();
    (rank, s.sigma[k - 1] / top)
}

/// Limit of `exp(-alpha t) t^(-gamma) Z_t`: Richardson extrapolation in `1/t`
/// through the three largest grid points.
pub fn limit_charge(series: &ChargeSeries, alpha: Complex64, gamma: Complex64) -> Complex64 {
    let (t, y) = sorted_by_t(&series.t, &series.log_z);
    let n = t.len();
    let pts: Vec<(f64, Complex64)> = (n.saturating_sub(3)..n)
        .map(|i| (1.0 / t[i], (y[i] - alpha * t[i] - gamma * t[i].ln()).exp()))
        .collect();
    if pts.len() < 3 {
        return pts.last().map(|p| p.1).unwrap_or(c64(0.0, 0.0));
    }
    // Lagrange interpolation at h = 0
    let mut acc = c64(0.0, 0.0);
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= (0.0 - pts[j].0) / (pts[i].0 - pts[j].0);
            }
        }
        acc += pts[i].1 * w;
    }
    acc
}

/// Lattice summands, the direct-sum check and limit charges.
pub fn build_sod(skeleton: &SodSkeleton, fits: &[AsymptoticFit], series: &[ChargeSeries]) -> Result<SodResult> {
    let mut clusters = Vec::with_capacity(skeleton.clusters.len());
    let mut all_basis: Vec<Vec<Complex64>> = Vec::new();
    for c in &skeleton.clusters {
        let mut members = Vec::new();
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for &i in &c.members {
            let f = &fits[i];
            let s = series
                .iter()
                .find(|s| s.label == f.label)
                .ok_or_else(|| Error::InvalidInput(format!("no samples for {}", f.label)))?;
            members.push(SodMember {
                label: f.label.clone(),
                class_v: f.class_v.clone(),
                alpha: f.alpha,
                gamma: f.gamma,
                beta: f.beta,
                limit_z: limit_charge(s, f.alpha, f.gamma),
            });
            let mut trial = basis.clone();
            trial.push(f.class_v.clone());
            if vector_rank(&trial).0 == trial.len() {
                basis = trial;
            }
        }
        let gamma = members.iter().map(|m| m.gamma).sum::<Complex64>() / members.len() as f64;
        all_basis.extend(basis.iter().cloned());
        clusters.push(SodCluster {
            alpha: c.alpha,
            gamma,
            members,
            lattice_basis: basis,
        });
    }
    let (rank, min_rel) = vector_rank(&all_basis);
    let lattice_check = LatticeCheck {
        direct: rank == all_basis.len(),
        rank,
        generators: all_basis.len(),
        min_rel_singular: min_rel,
    };
    if !lattice_check.direct {
        return Err(Error::NotDirectSum(format!(
            "{} generators span a rank {} lattice",
            all_basis.len(),
            rank
        )));
    }
    Ok(SodResult {
        clusters,
        lattice_check,
        spanning: Vec::new(),
    })
}

/// An eventually semistable object offered to the spanning check.
#[derive(Clone, Debug)]
pub struct SpanCandidate {
    pub label: String,
    pub class_v: Vec<Complex64>,
    pub alpha: Complex64,
    /// `min over the tail of |Z_t| / ||Phi_t v||`.
    pub ratio_min: f64,
}

/// Minimum over the tail of `|Z_t(v)| / ||Phi_t v||`, from a lifted charge and
/// gauged fundamental-solution samples on the same grid.
pub fn ratio_min(series: &ChargeSeries, phi: &[Gauged]) -> f64 {
    let n = series.t.len().min(phi.len());
    (n / 2..n)
        .map(|i| {
            let w = phi[i].phi.apply(&series.class_v);
            let ln_norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().ln() + phi[i].log_scale;
            (series.log_z[i].re - ln_norm).exp()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Floor under which `|Z|/||Phi v||` counts as vanishing.
pub const RATIO_FLOOR: f64 = 1e-6;

/// Compares `F^r` (vectors growing at most like `e^{rt}`) with the span of the
/// eventually semistable classes with `Re alpha <= r`.
pub fn spanning_check(
    t: &[f64],
    phi: &[Gauged],
    candidates: &[SpanCandidate],
    r: f64,
    rate_tol: f64,
) -> Result<SpanningReport> {
    let n = t.len().min(phi.len());
    if n < 16 {
        return Err(Error::InvalidInput("spanning check needs at least 16 samples".into()));
    }
    let dim = phi[0].phi.n();
    let mut log_sv: Vec<Vec<f64>> = alloc::vec![Vec::new(); dim];
    let mut last_v = None;
    for g in &phi[..n] {
        let s = svd(&g.phi)?;
        for (k, &sv) in s.sigma.iter().enumerate() {
            log_sv[k].push(sv.max(f64::MIN_POSITIVE).ln() + g.log_scale);
        }
        last_v = Some(s.v);
    }
    let mut rates = Vec::with_capacity(dim);
    for ls in &log_sv {
        rates.push(crate::qde::growth_rate_log(&t[..n], ls)?.rate);
    }
    let v = last_v.ok_or(Error::UndefinedRate)?;
    let f_cols: Vec<usize> = (0..dim).filter(|&k| rates[k] <= r + rate_tol).collect();
    let dim_f = f_cols.len();

    let chosen: Vec<&SpanCandidate> = candidates
        .iter()
        .filter(|c| c.alpha.re <= r + rate_tol && c.ratio_min > RATIO_FLOOR)
        .collect();
    // only classes inside F^r count toward its span
    let basis_f: Vec<Vec<Complex64>> = f_cols.iter().map(|&k| v.column(k)).collect();
    let inside: Vec<Vec<Complex64>> = chosen
        .iter()
        .filter(|c| {
            let mut trial = basis_f.clone();
            trial.push(c.class_v.clone());
            vector_rank(&trial).0 == dim_f
        })
        .map(|c| c.class_v.clone())
        .collect();
    let dim_span = vector_rank(&inside).0;
    Ok(SpanningReport {
        r,
        dim_f,
        dim_span,
        status: if dim_span == dim_f {
            SpanningStatus::Holds
        } else {
            SpanningStatus::Deficient
        },
        rates,
    })
}

/// Phase ordering across clusters: every member of a later cluster has a
/// larger phase (`Im log Z`) than every member of an earlier one on the tail.
pub fn phase_witness(sod: &SodResult, series: &[ChargeSeries]) -> bool {
    let find = |label: &str| series.iter().find(|s| s.label == label);
    for (i, ci) in sod.clusters.iter().enumerate() {
        for cj in &sod.clusters[..i] {
            for e in &ci.members {
                for f in &cj.members {
                    let (Some(se), Some(sf)) = (find(&e.label), find(&f.label)) else {
                        return false;
                    };
                    let n = se.t.len().min(sf.t.len());
                    if (n / 2..n).any(|k| se.log_z[k].im <= sf.log_z[k].im) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::k0;
    use crate::cmath::I;
    use crate::grid::geometric;
    use core::f64::consts::PI;

    fn synth(label: &str, t: &[f64], c: Complex64, alpha: Complex64, gamma: f64) -> Vec<Complex64> {
        let _ = label;
        t.iter().map(|&t| c * (alpha * t).exp() * t.powf(gamma)).collect()
    }

    fn fit_of(label: &str, t: &[f64], z: &[Complex64], opts: &FitOptions) -> AsymptoticFit {
        fit_asymptotics(label, &[c64(1.0, 0.0)], t, z, opts).unwrap().0
    }

    #[test]
    fn exact_exponential() {
        let t = geometric(1.0, 200.0, 400).unwrap();
        let z = synth("a", &t, c64(3.0, 0.0), c64(1.0, 2.0), 0.0);
        let f = fit_of("a", &t, &z, &FitOptions::default());
        assert!((f.alpha - c64(1.0, 2.0)).norm() < 1e-9);
        assert!(f.gamma.norm() < 1e-8);
        assert!((f.beta.re - 3f64.ln()).abs() < 1e-8);
        assert!(f.accepted);
    }

    #[test]
    fn bessel_k0_on_imaginary_ray() {
        let t = geometric(1.0, 200.0, 400).unwrap();
        let z: Vec<Complex64> = t.iter().map(|&t| k0(c64(0.0, 2.0 * t)).unwrap().value).collect();
        let (f, s) = fit_asymptotics("k", &[c64(1.0, 0.0)], &t, &z, &FitOptions::default()).unwrap();
        assert!((f.alpha - c64(0.0, -2.0)).norm() < 2e-5, "{}", f.alpha);
        assert!((f.gamma - c64(-0.5, 0.0)).norm() < 5e-4);
        let want = (c64(PI, 0.0) / (I * 4.0)).sqrt();
        let lim = limit_charge(&s, c64(0.0, -2.0), c64(-0.5, 0.0));
        assert!((lim - want).norm() < 1e-4, "{lim} vs {want}");
        assert!(((f.beta.exp()) - want).norm() < 1e-2, "{}", f.beta.exp());
    }

    #[test]
    fn near_degenerate_pair_depends_on_tolerance() {
        let t = geometric(1.0, 200.0, 400).unwrap();
        let z: Vec<Complex64> = t.iter().map(|&t| c64(t.exp() + (0.999 * t).exp(), 0.0)).collect();
        let loose = FitOptions {
            fit_tol: 1e-2,
            ..FitOptions::default()
        };
        let f = fit_of("mix", &t, &z, &loose);
        assert!(f.accepted && (f.alpha.re - 1.0).abs() < 1e-3);
        let tight = FitOptions {
            fit_tol: 1e-9,
            ..FitOptions::default()
        };
        assert!(!fit_of("mix", &t, &z, &tight).accepted);
    }

    fn fake_fit(label: &str, alpha: Complex64) -> AsymptoticFit {
        AsymptoticFit {
            label: label.into(),
            class_v: alloc::vec![c64(1.0, 0.0)],
            alpha,
            gamma: c64(0.0, 0.0),
            beta: c64(0.0, 0.0),
            residual_sup: 0.0,
            nested_residuals: alloc::vec![0.0],
            quasi_convergent: true,
            accepted: true,
        }
    }

    #[test]
    fn clustering_examples() {
        let fits = [
            fake_fit("a", c64(1.0, 2.0)),
            fake_fit("b", c64(3.0, -1.0)),
            fake_fit("c", c64(1.0, 2.0)),
        ];
        let sk = cluster_and_order(&fits, 1e-4).unwrap();
        assert_eq!(sk.clusters.len(), 2);
        assert_eq!(sk.clusters[0].alpha, c64(3.0, -1.0));
        assert_eq!(sk.clusters[1].members, alloc::vec![0, 2]);

        let bad = [fake_fit("x", c64(1.0, 1.0)), fake_fit("y", c64(2.0, 1.0))];
        assert!(matches!(cluster_and_order(&bad, 1e-4), Err(Error::Genericity { .. })));
    }

    #[test]
    fn sign_flip_keeps_cluster() {
        let t = geometric(1.0, 100.0, 300).unwrap();
        let z = synth("a", &t, c64(0.5, 0.2), c64(-0.5, 1.5), -0.5);
        let zm: Vec<Complex64> = z.iter().map(|z| -z).collect();
        let a = fit_of("a", &t, &z, &FitOptions::default());
        let b = fit_of("a", &t, &zm, &FitOptions::default());
        assert!((a.alpha - b.alpha).norm() < 1e-9);
        assert!((a.beta.re - b.beta.re).abs() < 1e-9);
    }

    #[test]
    fn zero_on_tail_is_rejected() {
        let t = geometric(1.0, 100.0, 100).unwrap();
        let mut z = synth("a", &t, c64(1.0, 0.0), c64(1.0, 0.0), 0.0);
        z[80] = c64(0.0, 0.0);
        assert!(matches!(
            fit_asymptotics("a", &[c64(1.0, 0.0)], &t, &z, &FitOptions::default()),
            Err(Error::NotEventuallyNonzero { .. })
        ));
    }

    #[test]
    fn dependent_classes_are_not_direct() {
        let t = geometric(1.0, 100.0, 100).unwrap();
        let za = synth("a", &t, c64(1.0, 0.0), c64(0.0, -1.0), 0.0);
        let zb = synth("b", &t, c64(1.0, 0.0), c64(0.0, 1.0), 0.0);
        let opts = FitOptions::default();
        let (fa, sa) = fit_asymptotics("a", &[c64(1.0, 0.0), c64(2.0, 0.0)], &t, &za, &opts).unwrap();
        let (fb, sb) = fit_asymptotics("b", &[c64(-2.0, 0.0), c64(-4.0, 0.0)], &t, &zb, &opts).unwrap();
        let fits = [fa, fb];
        let sk = cluster_and_order(&fits, 1e-4).unwrap();
        assert!(matches!(build_sod(&sk, &fits, &[sa, sb]), Err(Error::NotDirectSum(_))));
    }
}
