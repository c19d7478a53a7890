//! Euclidean-type projections in `f64`: closed forms for the catalog cones
//! and their faces, a cutting-plane projector for arbitrary hyperbolicity
//! cones, and an optimality certificate.
//!
//! Distances use a weighted inner product `<x, y> = sum_i w_i x_i y_i`. All
//! weights are 1 except for symmetric-matrix encodings, where off-diagonal
//! coordinates carry weight 2 so that the norm is the Frobenius norm.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::cone::HyperbolicityCone;
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use crate::univariate;

/// Weighted Euclidean inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    weights: Vec<f64>,
}

impl Metric {
    pub fn euclidean(n: usize) -> Self {
        Metric {
            weights: vec![1.0; n],
        }
    }

    pub fn weighted(weights: Vec<f64>) -> Self {
        Metric { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_euclidean(&self) -> bool {
        self.weights.iter().all(|w| *w == 1.0)
    }

    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .zip(&self.weights)
            .map(|((x, y), w)| w * x * y)
            .sum()
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        libm::sqrt(self.inner(a, a))
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        self.norm(&linalg::sub(a, b))
    }

    fn to_isometric(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.weights)
            .map(|(v, w)| v * libm::sqrt(*w))
            .collect()
    }

    fn from_isometric(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(&self.weights)
            .map(|(v, w)| v / libm::sqrt(*w))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionMethod {
    ClosedForm,
    CuttingPlane,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub point: Vec<f64>,
    pub distance: f64,
    pub method: ProjectionMethod,
    pub iterations: usize,
    /// Remaining constraint violation (cutting plane) or orthogonality
    /// residual (subspaces); zero for closed forms.
    pub residual: f64,
    pub converged: bool,
}

/// Index of entry `(i, j)` in the symmetric-matrix encoding: diagonal entries
/// first, then the strict upper triangle row by row.
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return i;
    }
    let mut idx = n;
    for r in 0..i {
        idx += n - r - 1;
    }
    idx + (j - i - 1)
}

/// Number of coordinates of the encoding of `n x n` symmetric matrices.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Metric weights making the encoding isometric to the Frobenius norm.
pub fn sym_weights(n: usize) -> Vec<f64> {
    (0..sym_dim(n))
        .map(|k| if k < n { 1.0 } else { 2.0 })
        .collect()
}

pub fn sym_to_matrix(n: usize, x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| x[sym_index(n, i, j)])
}

pub fn sym_from_matrix(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut x = vec![0.0; sym_dim(n)];
    for i in 0..n {
        for j in i..n {
            x[sym_index(n, i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    x
}

fn psd_clip(m: DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m);
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose()
}

/// Closed-form projectors for the catalog cones and faces.
#[derive(Clone, Debug, PartialEq)]
pub enum Projector {
    /// Nonnegative orthant.
    Orthant,
    /// `x_1 >= |(x_2, ..., x_n)|`.
    Lorentz,
    /// Positive semidefinite `n x n` matrices in the symmetric encoding.
    Psd {
        n: usize,
    },
    /// Orthant face: coordinates outside `support` are zero.
    OrthantFace {
        support: Vec<usize>,
    },
    /// PSD face `{U Y U^T : Y psd}` for orthonormal columns `range` of `U`.
    PsdFace {
        n: usize,
        range: Vec<Vec<f64>>,
    },
    /// The ray spanned by `direction`.
    Ray {
        direction: Vec<f64>,
    },
    Origin,
}

impl Projector {
    pub fn project(&self, x: &[f64], metric: &Metric) -> ProjectionResult {
        let point = match self {
            Projector::Orthant => x.iter().map(|v| v.max(0.0)).collect(),
            Projector::Lorentz => {
                let head = x[0];
                let tail = linalg::norm(&x[1..]);
                if tail <= head {
                    x.to_vec()
                } else if tail <= -head {
                    vec![0.0; x.len()]
                } else {
                    let s = 0.5 * (head + tail);
                    let mut y = vec![s];
                    y.extend(x[1..].iter().map(|v| s * v / tail));
                    y
                }
            }
            Projector::Psd { n } => sym_from_matrix(&psd_clip(sym_to_matrix(*n, x))),
            Projector::OrthantFace { support } => (0..x.len())
                .map(|i| {
                    if support.contains(&i) {
                        x[i].max(0.0)
                    } else {
                        0.0
                    }
                })
                .collect(),
            Projector::PsdFace { n, range } => {
                let r = range.len();
                if r == 0 {
                    vec![0.0; x.len()]
                } else {
                    let u = DMatrix::from_fn(*n, r, |i, j| range[j][i]);
                    let m = sym_to_matrix(*n, x);
                    let inner = u.transpose() * m * &u;
                    sym_from_matrix(&(&u * psd_clip(inner) * u.transpose()))
                }
            }
            Projector::Ray { direction } => {
                let t = metric.inner(x, direction) / metric.inner(direction, direction);
                linalg::scaled(direction, t.max(0.0))
            }
            Projector::Origin => vec![0.0; x.len()],
        };
        ProjectionResult {
            distance: metric.dist(x, &point),
            point,
            method: ProjectionMethod::ClosedForm,
            iterations: 0,
            residual: 0.0,
            converged: true,
        }
    }
}

/// Orthogonal projection onto a subspace in the given metric.
pub fn dist_to_subspace<S: Scalar>(
    x: &[f64],
    subspace: &Subspace<S>,
    metric: &Metric,
) -> ProjectionResult {
    let q = subspace.orthonormal_basis(metric.weights());
    let mut point = vec![0.0; x.len()];
    for b in &q {
        let c = metric.inner(x, b);
        point = linalg::add_scaled(&point, c, b);
    }
    let r = linalg::sub(x, &point);
    let residual = q
        .iter()
        .map(|b| metric.inner(&r, b).abs())
        .fold(0.0, f64::max);
    ProjectionResult {
        distance: metric.norm(&r),
        point,
        method: ProjectionMethod::ClosedForm,
        iterations: 0,
        residual,
        converged: true,
    }
}

/// Smallest hyperbolic eigenvalue (real part of the smallest root cluster);
/// `+inf` for the whole-space cone.
pub fn min_eigenvalue(cone: &HyperbolicityCone<f64>, y: &[f64]) -> Result<f64> {
    Ok(min_eigen_cluster(cone, y)?.0)
}

/// Smallest eigenvalue together with the number of eigenvalues (with
/// multiplicity) within a relative `1e-9` of it.
///
/// A companion-matrix solve places roots with absolute error proportional to
/// the largest root, which smears tiny or clustered roots. The estimate starts
/// at the mean of the lowest root group (well conditioned even when its
/// members are not) and is refined by rebuilding the line polynomial at
/// `y - λ e`, whose eigenvalues are the originals shifted by `λ`. The `r`
/// roots near zero are recomputed from the truncation `c_0 + ... + c_r t^r`,
/// which carries its own root scale.
fn min_eigen_cluster(cone: &HyperbolicityCone<f64>, y: &[f64]) -> Result<(f64, usize)> {
    if cone.degree() == 0 {
        return Ok((f64::INFINITY, 0));
    }
    let roots = univariate::float::complex_roots(cone.line_polynomial(y)?.coeffs(), 0.0)?;
    let scale = 1.0
        + roots
            .iter()
            .map(|z| libm::hypot(z.re, z.im))
            .fold(0.0, f64::max);
    let radius = 1e-3 * scale;
    let first = roots
        .iter()
        .copied()
        .reduce(|a, b| if b.re < a.re { b } else { a })
        .expect("degree is positive");
    let mut group = vec![first];
    let mut rest: Vec<_> = roots.iter().copied().filter(|z| *z != first).collect();
    // Closure under `radius`: smeared multiple roots form a ring.
    while let Some(i) = rest.iter().position(|z| {
        group
            .iter()
            .any(|g| libm::hypot(z.re - g.re, z.im - g.im) <= radius)
    }) {
        group.push(rest.swap_remove(i));
    }
    let mut lambda = group.iter().map(|z| z.re).sum::<f64>() / group.len() as f64;
    let mut count = group.len();
    for _ in 0..6 {
        let b = linalg::add_scaled(y, -lambda, cone.direction());
        let line = cone.line_polynomial(&b)?;
        let coeffs = line.coeffs();
        let far = univariate::float::complex_roots(coeffs, 0.0)?;
        let r = far
            .iter()
            .filter(|z| libm::hypot(z.re, z.im) <= radius)
            .count();
        let near = if r > 0 && r < far.len() && coeffs[r] != 0.0 {
            univariate::float::complex_roots(&coeffs[..=r], 0.0)?
        } else {
            Vec::new()
        };
        let shifted: Vec<f64> = if near.len() == r && r > 0 {
            &near
        } else {
            &far
        }
        .iter()
        .map(|z| z.re)
        .collect();
        let min = shifted.iter().copied().fold(f64::INFINITY, f64::min);
        if !min.is_finite() {
            break;
        }
        count = shifted
            .iter()
            .filter(|t| (**t - min).abs() <= 1e-9 * scale)
            .count();
        lambda += min;
        if min.abs() <= 1e-14 * scale {
            break;
        }
    }
    Ok((lambda, count))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuttingPlaneOptions {
    pub max_iterations: usize,
    /// Relative constraint violation accepted at termination.
    pub violation_tol: f64,
    /// Relative step length accepted at termination.
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        CuttingPlaneOptions {
            max_iterations: 2000,
            violation_tol: 1e-8,
            step_tol: 1e-10,
            seed: 0,
        }
    }
}

/// Normalised supporting halfspace `g . y >= 0` of the cone at a boundary
/// point `b`. When `b` is a multiple eigenvalue the gradient of `p` vanishes;
/// the gradient of the first non-vanishing derivative `D_e^(r-1) p` is used
/// instead, which supports the larger relaxation cone at `b`.
fn supporting_normal(
    cone: &HyperbolicityCone<f64>,
    b: &[f64],
    r: usize,
) -> Result<Option<Vec<f64>>> {
    let e = cone.direction();
    for order in (0..r.max(1)).rev() {
        let Ok(q) = cone.derivative(order) else {
            continue;
        };
        let g = q.gradient(b)?;
        let ge = linalg::dot(&g, e);
        let gn = linalg::norm(&g);
        if ge > 0.0 && gn > 0.0 && ge > 1e-12 * gn * linalg::norm(e) {
            return Ok(Some(linalg::scaled(&g, 1.0 / gn)));
        }
    }
    Ok(None)
}

/// Lawson-Hanson non-negative least squares: `argmin_{mu >= 0} |A mu - b|`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.norm().max(1.0) * b.norm().max(1.0);
    let tol = 1e-13 * scale;
    for _ in 0..(3 * n + 30) {
        let w = a.transpose() * (b - a * &x);
        let pick = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = pick else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let z_sub = sub
                .svd(true, true)
                .solve(b, 1e-14)
                .unwrap_or_else(|_| DVector::zeros(idx.len()));
            if z_sub.iter().all(|v| *v > 0.0) {
                x.fill(0.0);
                for (c, &i) in idx.iter().enumerate() {
                    x[i] = z_sub[c];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (c, &i) in idx.iter().enumerate() {
                if z_sub[c] <= 0.0 {
                    let denom = x[i] - z_sub[c];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (c, &i) in idx.iter().enumerate() {
                x[i] += alpha * (z_sub[c] - x[i]);
                if x[i] <= 1e-15 * scale {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if idx.iter().all(|&i| !passive[i]) {
                break;
            }
        }
    }
    x
}

/// Projection onto `{y : g_i . y >= 0}` in isometric coordinates, through the
/// dual problem `min_{mu >= 0} |x + G^T mu|^2`.
fn project_polyhedral(x: &[f64], cuts: &[Vec<f64>]) -> Vec<f64> {
    if cuts.is_empty() {
        return x.to_vec();
    }
    let n = x.len();
    let a = DMatrix::from_fn(n, cuts.len(), |r, c| cuts[c][r]);
    let b = DVector::from_iterator(n, x.iter().map(|v| -v));
    let mu = nnls(&a, &b);
    let y = DVector::from_column_slice(x) + a * mu;
    y.iter().copied().collect()
}

/// Projection onto `Λ(p, e)` by outer polyhedral approximation: each
/// infeasible iterate `y` contributes the supporting halfspace at
/// `y - λ_min(y) e`. The returned point is the last iterate shifted along `e`
/// into the cone, so its distance bounds the true distance from above.
pub fn cutting_plane_projection(
    cone: &HyperbolicityCone<f64>,
    x: &[f64],
    metric: &Metric,
    opts: &CuttingPlaneOptions,
) -> Result<ProjectionResult> {
    let n = cone.num_vars();
    if x.len() != n || metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    let e = cone.direction().to_vec();
    let scale = 1.0 + metric.norm(x);
    let xs = metric.to_isometric(x);
    let mut cuts: Vec<Vec<f64>> = Vec::new();
    let mut y = x.to_vec();
    let mut prev: Option<Vec<f64>> = None;
    let mut violation = 0.0;
    let mut perturbations = 0u64;
    for it in 0..opts.max_iterations {
        let (lambda, mult) = min_eigen_cluster(cone, &y)?;
        violation = (-lambda).max(0.0);
        let step = prev.as_ref().map_or(f64::INFINITY, |p| metric.dist(p, &y));
        let feasible = violation <= opts.violation_tol * scale;
        if feasible && (it == 0 || step <= opts.step_tol * scale || violation == 0.0) {
            return Ok(finish(x, &y, violation, &e, metric, it, true));
        }
        let b = linalg::add_scaled(&y, -lambda, &e);
        let mut normals: Vec<Vec<f64>> = supporting_normal(cone, &b, mult)?.into_iter().collect();
        if mult > 1 || normals.is_empty() {
            // A tied minimum only yields the weaker relaxation cut; add the
            // cut of a nearby boundary point with a simple minimal root.
            let mut size = 1e-9;
            while size <= 1e-5 {
                perturbations += 1;
                let d = sampling::gaussian_sample(opts.seed, perturbations, n);
                let yp = linalg::add_scaled(&y, size * scale, &d);
                let (lp, mp) = min_eigen_cluster(cone, &yp)?;
                if mp == 1 {
                    let bp = linalg::add_scaled(&yp, -lp, &e);
                    if let Some(g) = supporting_normal(cone, &bp, 1)? {
                        normals.push(g);
                        break;
                    }
                }
                size *= 10.0;
            }
        }
        if normals.is_empty() {
            return Err(Error::NumericalInconsistency(
                "no supporting halfspace at a boundary point".into(),
            ));
        }
        for g in normals {
            let gs = metric.from_isometric(&g);
            let gn = linalg::norm(&gs);
            cuts.push(linalg::scaled(&gs, 1.0 / gn));
        }
        prev = Some(y);
        y = metric.from_isometric(&project_polyhedral(&xs, &cuts));
    }
    Ok(finish(
        x,
        &y,
        violation,
        &e,
        metric,
        opts.max_iterations,
        false,
    ))
}

fn finish(
    x: &[f64],
    y: &[f64],
    violation: f64,
    e: &[f64],
    metric: &Metric,
    iterations: usize,
    converged: bool,
) -> ProjectionResult {
    let point = linalg::add_scaled(y, violation, e);
    ProjectionResult {
        distance: metric.dist(x, &point),
        point,
        method: ProjectionMethod::CuttingPlane,
        iterations,
        residual: violation,
        converged,
    }
}

/// Projection onto a cone: closed form when a projector is supplied,
/// cutting plane otherwise.
pub fn project_to_cone(
    cone: &HyperbolicityCone<f64>,
    projector: Option<&Projector>,
    x: &[f64],
    metric: &Metric,
    opts: &CuttingPlaneOptions,
) -> Result<ProjectionResult> {
    match projector {
        Some(p) => Ok(p.project(x, metric)),
        None => cutting_plane_projection(cone, x, metric, opts),
    }
}

/// Checks that `point` is (nearly) in the cone and that `x - point` lies in
/// the normal cone there: `<x - point, k - point> <= tol |x - point| |k - point|`
/// for `k` in `{0, 2 point, e}` and `samples` sampled members. Directions
/// shorter than `1e-9 (1 + |point|)` carry no information and are skipped;
/// so does the residual `x - point` when `x` is already a member.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityCertificate {
    pub feasible: bool,
    pub worst_normal: f64,
    pub passed: bool,
}

pub fn optimality_certificate(
    cone: &HyperbolicityCone<f64>,
    metric: &Metric,
    x: &[f64],
    point: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<OptimalityCertificate> {
    let n = cone.num_vars();
    let scale = 1.0 + metric.norm(point);
    let feasible = min_eigenvalue(cone, point)? >= -1e-8 * scale;
    let r = linalg::sub(x, point);
    let rn = metric.norm(&r);
    let e = cone.direction().to_vec();
    let mut members = vec![vec![0.0; n], linalg::scaled(point, 2.0), e.clone()];
    for i in 0..samples as u64 {
        let g = sampling::gaussian_sample(seed, i, n);
        let lambda = min_eigenvalue(cone, &g)?;
        members.push(linalg::add_scaled(&g, (-lambda).max(0.0), &e));
    }
    let mut worst = f64::NEG_INFINITY;
    for k in &members {
        let d = linalg::sub(k, point);
        let dn = metric.norm(&d);
        if dn <= 1e-9 * scale || rn <= 1e-9 * scale {
            continue;
        }
        worst = worst.max(metric.inner(&r, &d) / (rn * dn));
    }
    let worst = if worst.is_finite() { worst } else { 0.0 };
    Ok(OptimalityCertificate {
        feasible,
        worst_normal: worst,
        passed: feasible && worst <= tol,
    })
}

/// Dykstra's alternating projections between a subspace and a cone, started
/// at `x`. Returns the final cone iterate and the number of sweeps.
pub fn dykstra<S: Scalar>(
    x: &[f64],
    subspace: &Subspace<S>,
    project_cone: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    metric: &Metric,
    max_iterations: usize,
    tol: f64,
) -> Result<(Vec<f64>, usize, f64)> {
    let n = x.len();
    let mut y = x.to_vec();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    let scale = 1.0 + metric.norm(x);
    let mut gap = f64::INFINITY;
    for it in 0..max_iterations {
        let a = dist_to_subspace(&linalg::add_scaled(&y, 1.0, &p), subspace, metric).point;
        p = linalg::sub(&linalg::add_scaled(&y, 1.0, &p), &a);
        let target = linalg::add_scaled(&a, 1.0, &q);
        let b = project_cone(&target)?;
        q = linalg::sub(&target, &b);
        let change = metric.dist(&b, &y);
        gap = metric.dist(&a, &b);
        y = b;
        if gap <= tol * scale && change <= tol * scale {
            return Ok((y, it + 1, gap));
        }
    }
    Ok((y, max_iterations, gap))
}
