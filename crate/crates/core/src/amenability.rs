//! Empirical error-bound constants: `dist(x, F) / dist(x, K)` over points of
//! `span(F)`, the same ratio against the derivative relaxation, and the
//! additive bound for a subspace meeting the interior of a cone.

use alloc::vec;
use alloc::vec::Vec;

use crate::cone::{HyperbolicityCheck, HyperbolicityCone};
use crate::error::{Error, Result};
use crate::faces::FaceDescriptor;
use crate::linalg;
use crate::polynomial::Polynomial;
use crate::projection::{self, CuttingPlaneOptions, Metric, ProjectionResult, Projector};
use crate::sampling;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Samples with `dist(x, K) <= DISCARD_TOL * (1 + |x|)` are left out of ratios.
pub const DISCARD_TOL: f64 = 1e-12;

/// Closed-form projectors available for a face and its parent cone.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Projectors {
    pub cone: Option<Projector>,
    pub face: Option<Projector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmenabilityOptions {
    pub samples: usize,
    pub seed: u64,
    pub radii: Vec<f64>,
    pub keep_ratios: bool,
    pub cutting_plane: CuttingPlaneOptions,
}

impl Default for AmenabilityOptions {
    fn default() -> Self {
        AmenabilityOptions {
            samples: 1000,
            seed: 0,
            radii: vec![0.1, 1.0, 10.0],
            keep_ratios: false,
            cutting_plane: CuttingPlaneOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleRatio {
    pub index: usize,
    pub radius: f64,
    pub dist_face: f64,
    pub dist_cone: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub radius: f64,
    pub kappa_hat: Option<f64>,
    pub retained: usize,
    pub worst_point: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmenabilityEstimate {
    /// Largest ratio over all retained samples and radii; `None` when every
    /// sample was discarded.
    pub kappa_hat: Option<f64>,
    pub samples: usize,
    pub retained: usize,
    pub discarded: usize,
    pub worst_point: Option<Vec<f64>>,
    pub per_radius: Vec<RadiusEstimate>,
    pub ratios: Option<Vec<SampleRatio>>,
    /// Cutting-plane projections that hit the iteration cap.
    pub non_converged: usize,
}

impl AmenabilityEstimate {
    /// `(max - min) / max` of the per-radius estimates.
    pub fn radius_spread(&self) -> Option<f64> {
        let values: Vec<f64> = self.per_radius.iter().filter_map(|r| r.kappa_hat).collect();
        if values.len() != self.per_radius.len() || values.is_empty() {
            return None;
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        Some(if max > 0.0 { (max - min) / max } else { 0.0 })
    }
}

/// Distances to a face, its parent cone and the parent's derivative
/// relaxation, for points of the face span.
pub struct FaceGeometry {
    parent: HyperbolicityCone<f64>,
    m: usize,
    z: Vec<f64>,
    metric: Metric,
    projectors: Projectors,
    /// Metric-orthonormal basis of the span.
    basis: Vec<Vec<f64>>,
    /// The face in orthonormal span coordinates.
    face_cone: Option<HyperbolicityCone<f64>>,
    opts: CuttingPlaneOptions,
}

impl FaceGeometry {
    pub fn new<S: Scalar>(
        face: &FaceDescriptor<S>,
        projectors: Projectors,
        metric: &Metric,
        opts: CuttingPlaneOptions,
    ) -> Result<Self> {
        let parent = face.parent().to_float();
        if metric.dim() != parent.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: parent.num_vars(),
                actual: metric.dim(),
            });
        }
        let basis = face.span().orthonormal_basis(metric.weights());
        let z: Vec<f64> = face.z().iter().map(|v| v.to_f64()).collect();
        let face_cone = if projectors.face.is_none() && !basis.is_empty() {
            let q: Polynomial<f64> = parent.derivative(face.m())?.compose_linear(&basis)?;
            let zc: Vec<f64> = basis.iter().map(|b| metric.inner(&z, b)).collect();
            Some(HyperbolicityCone::with_tolerances(
                q,
                zc,
                HyperbolicityCheck::Skip,
                parent.tolerances(),
            )?)
        } else {
            None
        };
        Ok(FaceGeometry {
            parent,
            m: face.m(),
            z,
            metric: metric.clone(),
            projectors,
            basis,
            face_cone,
            opts,
        })
    }

    pub fn span_dim(&self) -> usize {
        self.basis.len()
    }

    /// Point of the span with the given orthonormal coordinates.
    pub fn span_point(&self, coords: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.parent.num_vars()];
        for (c, b) in coords.iter().zip(&self.basis) {
            x = linalg::add_scaled(&x, *c, b);
        }
        x
    }

    pub fn dist_cone(&self, x: &[f64]) -> Result<ProjectionResult> {
        projection::project_to_cone(
            &self.parent,
            self.projectors.cone.as_ref(),
            x,
            &self.metric,
            &self.opts,
        )
    }

    pub fn dist_relaxation(&self, x: &[f64]) -> Result<ProjectionResult> {
        let relaxation = self.parent.derivative_cone(self.m)?;
        projection::cutting_plane_projection(&relaxation, x, &self.metric, &self.opts)
    }

    /// Distance from a point of the span to the face.
    pub fn dist_face(&self, x: &[f64]) -> Result<ProjectionResult> {
        if let Some(p) = &self.projectors.face {
            return Ok(p.project(x, &self.metric));
        }
        let Some(face_cone) = &self.face_cone else {
            // The face is {0}.
            return Ok(Projector::Origin.project(x, &self.metric));
        };
        let coords: Vec<f64> = self.basis.iter().map(|b| self.metric.inner(x, b)).collect();
        let k = coords.len();
        let r = projection::cutting_plane_projection(
            face_cone,
            &coords,
            &Metric::euclidean(k),
            &self.opts,
        )?;
        Ok(ProjectionResult {
            point: self.span_point(&r.point),
            ..r
        })
    }

    /// Unit-norm point of the span for sample `index`.
    fn sphere_point(&self, seed: u64, index: u64) -> Vec<f64> {
        let u = sampling::sphere_sample(seed, index, self.span_dim());
        self.span_point(&u)
    }
}

/// Samples the unit sphere of `span(F)` (metric norm), scales by each radius
/// and records `dist(x, F) / dist(x, K)`.
pub fn amenability_estimate<S: Scalar>(
    face: &FaceDescriptor<S>,
    projectors: Projectors,
    metric: &Metric,
    opts: &AmenabilityOptions,
) -> Result<AmenabilityEstimate> {
    let geo = FaceGeometry::new(face, projectors, metric, opts.cutting_plane)?;
    let mut per_radius: Vec<RadiusEstimate> = opts
        .radii
        .iter()
        .map(|&radius| RadiusEstimate {
            radius,
            kappa_hat: None,
            retained: 0,
            worst_point: None,
        })
        .collect();
    let mut ratios = Vec::new();
    let mut discarded = 0;
    let mut non_converged = 0;
    if geo.span_dim() == 0 {
        discarded = opts.samples * opts.radii.len();
    } else {
        for i in 0..opts.samples {
            let unit = geo.sphere_point(opts.seed, i as u64);
            for est in per_radius.iter_mut() {
                let x = linalg::scaled(&unit, est.radius);
                let k = geo.dist_cone(&x)?;
                non_converged += usize::from(!k.converged);
                if k.distance <= DISCARD_TOL * (1.0 + metric.norm(&x)) {
                    discarded += 1;
                    continue;
                }
                let f = geo.dist_face(&x)?;
                non_converged += usize::from(!f.converged);
                let ratio = f.distance / k.distance;
                est.retained += 1;
                if est.kappa_hat.map_or(true, |v| ratio > v) {
                    est.kappa_hat = Some(ratio);
                    est.worst_point = Some(x);
                }
                if opts.keep_ratios {
                    ratios.push(SampleRatio {
                        index: i,
                        radius: est.radius,
                        dist_face: f.distance,
                        dist_cone: k.distance,
                        ratio,
                    });
                }
            }
        }
    }
    let best = per_radius
        .iter()
        .filter(|r| r.kappa_hat.is_some())
        .max_by(|a, b| {
            a.kappa_hat
                .partial_cmp(&b.kappa_hat)
                .unwrap_or(core::cmp::Ordering::Equal)
        });
    Ok(AmenabilityEstimate {
        kappa_hat: best.and_then(|r| r.kappa_hat),
        worst_point: best.and_then(|r| r.worst_point.clone()),
        samples: opts.samples,
        retained: per_radius.iter().map(|r| r.retained).sum(),
        discarded,
        per_radius,
        ratios: opts.keep_ratios.then_some(ratios),
        non_converged,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofPathReport {
    pub z_interior: bool,
    pub samples: usize,
    /// Samples with `dist(x, Λ^(m)) > dist(x, K)` beyond tolerance.
    pub sandwich_violations: usize,
    /// Largest `dist(x, Λ^(m)) - dist(x, K)` seen.
    pub worst_gap: f64,
    /// `max dist(x, F) / dist(x, Λ^(m))`.
    pub kappa_relaxation: Option<f64>,
    /// `max dist(x, F) / dist(x, K)`.
    pub kappa_parent: Option<f64>,
    /// No sandwich violations and `kappa_relaxation >= kappa_parent`.
    pub consistent: bool,
    pub witnesses: Vec<Vec<f64>>,
    pub non_converged: usize,
}

/// Runs the chain `z ∈ int Λ^(m)`, `dist(x, Λ^(m)) <= dist(x, K)` and the two
/// face ratios on `samples` unit points of the span. The relaxation distance
/// always uses the cutting-plane projector.
pub fn amenability_proof_path_check<S: Scalar>(
    face: &FaceDescriptor<S>,
    projectors: Projectors,
    metric: &Metric,
    samples: usize,
    seed: u64,
    opts: CuttingPlaneOptions,
) -> Result<ProofPathReport> {
    let geo = FaceGeometry::new(face, projectors, metric, opts)?;
    let z_interior = geo.parent.derivative_cone(geo.m)?.in_interior(&geo.z)?;
    let mut report = ProofPathReport {
        z_interior,
        samples,
        sandwich_violations: 0,
        worst_gap: f64::NEG_INFINITY,
        kappa_relaxation: None,
        kappa_parent: None,
        consistent: true,
        witnesses: Vec::new(),
        non_converged: 0,
    };
    if geo.span_dim() > 0 {
        for i in 0..samples as u64 {
            let x = geo.sphere_point(seed, i);
            let scale = 1.0 + metric.norm(&x);
            let k = geo.dist_cone(&x)?;
            let r = geo.dist_relaxation(&x)?;
            report.non_converged += usize::from(!k.converged) + usize::from(!r.converged);
            let gap = r.distance - k.distance;
            report.worst_gap = report.worst_gap.max(gap);
            if gap > 1e-6 * scale {
                report.sandwich_violations += 1;
                if report.witnesses.len() < crate::faces::MAX_WITNESSES {
                    report.witnesses.push(x.clone());
                }
            }
            if k.distance <= DISCARD_TOL * scale {
                continue;
            }
            let f = geo.dist_face(&x)?;
            report.non_converged += usize::from(!f.converged);
            let parent_ratio = f.distance / k.distance;
            report.kappa_parent = Some(
                report
                    .kappa_parent
                    .map_or(parent_ratio, |v| v.max(parent_ratio)),
            );
            if r.distance > DISCARD_TOL * scale {
                let ratio = f.distance / r.distance;
                report.kappa_relaxation =
                    Some(report.kappa_relaxation.map_or(ratio, |v| v.max(ratio)));
            }
        }
    }
    if !report.worst_gap.is_finite() {
        report.worst_gap = 0.0;
    }
    let ordered = match (report.kappa_relaxation, report.kappa_parent) {
        (Some(a), Some(b)) => a >= b * (1.0 - 1e-6),
        _ => true,
    };
    report.consistent = report.sandwich_violations == 0 && ordered && z_interior;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinRegOptions {
    pub samples: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub tol: f64,
    pub cutting_plane: CuttingPlaneOptions,
}

impl Default for LinRegOptions {
    fn default() -> Self {
        LinRegOptions {
            samples: 1000,
            seed: 0,
            max_iterations: 5000,
            tol: 1e-10,
            cutting_plane: CuttingPlaneOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinRegEstimate {
    /// Largest `dist(x, L ∩ K) / (dist(x, L) + dist(x, K))` seen, with the
    /// numerator taken at a certified point of `L ∩ K`.
    pub kappa_hat: Option<f64>,
    pub samples: usize,
    pub retained: usize,
    pub discarded: usize,
    pub worst_point: Option<Vec<f64>>,
    /// Largest shift along the witness needed to certify feasibility.
    pub max_certificate_shift: f64,
}

/// Estimates the additive error-bound constant of `L` and `K` on Gaussian
/// samples. `witness` must lie in `L` and in the interior of `K`.
///
/// `dist(x, L ∩ K)` comes from Dykstra's method; its final iterate is mapped
/// into `L` and shifted along the witness into `K`, so the numerator is the
/// distance to a point of `L ∩ K`.
pub fn linear_regularity_estimate<S: Scalar>(
    subspace: &Subspace<S>,
    cone: &HyperbolicityCone<S>,
    projector: Option<&Projector>,
    metric: &Metric,
    witness: &[S],
    opts: &LinRegOptions,
) -> Result<LinRegEstimate> {
    subspace.coordinates(witness)?;
    if !cone.in_interior(witness)? {
        return Err(Error::NotInterior);
    }
    let cone_f = cone.to_float();
    let n = cone_f.num_vars();
    let w: Vec<f64> = witness.iter().map(|v| v.to_f64()).collect();
    let along_w = cone_f.with_direction(w.clone())?;
    let l = subspace.to_float();
    let mut project_cone = |y: &[f64]| -> Result<Vec<f64>> {
        Ok(projection::project_to_cone(&cone_f, projector, y, metric, &opts.cutting_plane)?.point)
    };
    let mut est = LinRegEstimate {
        kappa_hat: None,
        samples: opts.samples,
        retained: 0,
        discarded: 0,
        worst_point: None,
        max_certificate_shift: 0.0,
    };
    for i in 0..opts.samples as u64 {
        let x = sampling::gaussian_sample(opts.seed, i, n);
        let scale = 1.0 + metric.norm(&x);
        let dl = projection::dist_to_subspace(&x, &l, metric).distance;
        let dk = project_cone(&x)?;
        let denom = dl + metric.dist(&x, &dk);
        if denom <= DISCARD_TOL * scale {
            est.discarded += 1;
            continue;
        }
        let (y, iterations, gap) = projection::dykstra(
            &x,
            &l,
            &mut project_cone,
            metric,
            opts.max_iterations,
            opts.tol,
        )?;
        let a = projection::dist_to_subspace(&y, &l, metric).point;
        let lambda = projection::min_eigenvalue(&along_w, &a)?;
        let shift = (-lambda).max(0.0);
        if gap > 1e-6 * scale {
            return Err(Error::NotConverged {
                iterations,
                residual: gap,
            });
        }
        est.max_certificate_shift = est.max_certificate_shift.max(shift * metric.norm(&w));
        let certified = linalg::add_scaled(&a, shift, &w);
        let ratio = metric.dist(&x, &certified) / denom;
        est.retained += 1;
        if est.kappa_hat.map_or(true, |v| ratio > v) {
            est.kappa_hat = Some(ratio);
            est.worst_point = Some(x);
        }
    }
    Ok(est)
}
