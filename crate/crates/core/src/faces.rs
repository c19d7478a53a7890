//! Faces `F = span(F) ∩ Λ^(m)` anchored at a relative-interior point `z`,
//! faces as hyperbolicity cones in span coordinates, span discovery, and
//! intersections of hyperbolicity cones.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cone::{Certification, HyperbolicityCheck, HyperbolicityCone, Membership};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polynomial::Polynomial;
use crate::sampling;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Sampled points used for the float-mode vanishing test.
pub const FLOAT_VANISHING_SAMPLES: usize = 200;
/// Witnesses kept in reports.
pub const MAX_WITNESSES: usize = 5;

/// A verified face of `parent`.
#[derive(Clone, Debug)]
pub struct FaceDescriptor<S> {
    parent: HyperbolicityCone<S>,
    z: Vec<S>,
    m: usize,
    span: Subspace<S>,
    q: Polynomial<S>,
    z_coords: Vec<S>,
}

impl<S: Scalar> FaceDescriptor<S> {
    pub fn parent(&self) -> &HyperbolicityCone<S> {
        &self.parent
    }

    pub fn z(&self) -> &[S] {
        &self.z
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn span(&self) -> &Subspace<S> {
        &self.span
    }

    /// `D_e^m p` restricted to the span, in span coordinates.
    pub fn q(&self) -> &Polynomial<S> {
        &self.q
    }

    pub fn z_coords(&self) -> &[S] {
        &self.z_coords
    }

    /// Whether the face is more than `{0}`.
    pub fn is_nontrivial(&self) -> bool {
        self.span.dim() > 0
    }
}

fn to_f64s<S: Scalar>(x: &[S]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64()).collect()
}

fn from_samples<S: Scalar>(x: &[f64]) -> Vec<S> {
    x.iter().map(|v| S::from_sample(*v)).collect()
}

/// Checks that `poly` restricted to `span` is identically zero: symbolically
/// in exact mode, on sampled unit points in float mode.
fn vanishes_on<S: Scalar>(
    poly: &Polynomial<S>,
    span: &Subspace<S>,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    let restricted = poly.subspace_restriction(span)?;
    if S::EXACT {
        return Ok(restricted.is_zero());
    }
    let scale = poly.coefficient_norm().max(f64::MIN_POSITIVE);
    let k = span.dim();
    for i in 0..FLOAT_VANISHING_SAMPLES as u64 {
        let u = sampling::gaussian_sample(seed, i, k);
        let x = span.point(&from_samples::<S>(&u))?;
        let norm = linalg::norm(&to_f64s(&x));
        if norm == 0.0 {
            continue;
        }
        let xhat: Vec<S> = x
            .iter()
            .map(|v| S::from_f64(v.to_f64() / norm).unwrap_or_else(S::zero))
            .collect();
        if poly.evaluate(&xhat)?.to_f64().abs() > tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the face of `cone` whose relative interior contains `z`, given its
/// span. Checks that the derivatives below the multiplicity vanish on the
/// span and that `z` is interior to the matching derivative relaxation.
pub fn make_face<S: Scalar>(
    cone: &HyperbolicityCone<S>,
    z: &[S],
    span: &Subspace<S>,
) -> Result<FaceDescriptor<S>> {
    if z.len() != cone.num_vars() || span.ambient_dim() != cone.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: cone.num_vars(),
            actual: if z.len() != cone.num_vars() {
                z.len()
            } else {
                span.ambient_dim()
            },
        });
    }
    if !cone.member(z)? {
        return Err(Error::NotInCone);
    }
    let z_coords = span.coordinates(z)?;
    let m = cone.multiplicity(z)?.m;
    let tol = cone.tolerances().root;
    for k in 0..m {
        if !vanishes_on(
            cone.derivative(k)?,
            span,
            tol,
            sampling::derive_seed(0, k as u64),
        )? {
            return Err(Error::DerivativeDoesNotVanish { order: k });
        }
    }
    if !cone.derivative_cone(m)?.in_interior(z)? {
        return Err(Error::NotRelativeInterior { order: m });
    }
    let q = cone.derivative(m)?.subspace_restriction(span)?;
    if q.evaluate(&z_coords)? <= S::zero() {
        return Err(Error::NotRelativeInterior { order: m });
    }
    Ok(FaceDescriptor {
        parent: cone.clone(),
        z: z.to_vec(),
        m,
        span: span.clone(),
        q,
        z_coords,
    })
}

/// Counts of sampled disagreements between two membership tests.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AgreementReport {
    pub samples: usize,
    pub violations: usize,
    /// Samples where either side was inside its tolerance band.
    pub band: usize,
    pub witnesses: Vec<Vec<f64>>,
}

impl AgreementReport {
    fn record(&mut self, a: Membership, b: Membership, x: &[f64]) {
        self.samples += 1;
        if a.conflicts(b) {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(x.to_vec());
            }
        } else if a == Membership::Band || b == Membership::Band {
            self.band += 1;
        }
    }
}

/// Result of checking `span ∩ Λ^(m_tested) = F` on samples.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceVerification {
    pub m_tested: usize,
    pub sampled: AgreementReport,
    /// `z` interior to `Λ^(m_tested)`.
    pub interior_ok: bool,
    /// Sample violations plus one if the interior check failed.
    pub violations: usize,
}

impl FaceVerification {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples Gaussian points of the span and compares membership in
/// `Λ^(m)` (derivative signs) with membership in the parent cone
/// (hyperbolic eigenvalues).
pub fn verify_face_representation<S: Scalar>(
    face: &FaceDescriptor<S>,
    samples: usize,
    seed: u64,
) -> Result<FaceVerification> {
    verify_face_representation_at(face, face.m, samples, seed)
}

/// As [`verify_face_representation`] with the relaxation order replaced by
/// `m_test`, for negative controls.
pub fn verify_face_representation_at<S: Scalar>(
    face: &FaceDescriptor<S>,
    m_test: usize,
    samples: usize,
    seed: u64,
) -> Result<FaceVerification> {
    let relaxation = face.parent.derivative_cone(m_test)?;
    let mut sampled = AgreementReport::default();
    for i in 0..samples as u64 {
        let u = sampling::gaussian_sample(seed, i, face.span.dim());
        let x = face.span.point(&from_samples::<S>(&u))?;
        let a = relaxation.classify(&x)?;
        let b = face.parent.member_by_eigenvalues(&x)?;
        sampled.record(a, b, &to_f64s(&x));
    }
    let interior_ok = relaxation.in_interior(&face.z)?;
    let violations = sampled.violations + usize::from(!interior_ok);
    Ok(FaceVerification {
        m_tested: m_test,
        sampled,
        interior_ok,
        violations,
    })
}

/// The face as the hyperbolicity cone of `q` with respect to `z`, in span
/// coordinates, validated on `samples` random lines.
pub fn face_as_cone<S: Scalar>(
    face: &FaceDescriptor<S>,
    samples: usize,
    seed: u64,
) -> Result<HyperbolicityCone<S>> {
    HyperbolicityCone::with_tolerances(
        face.q.clone(),
        face.z_coords.clone(),
        HyperbolicityCheck::Randomized { samples, seed },
        face.parent.tolerances(),
    )
    .map_err(|e| match e {
        Error::NotHyperbolic { witness } | Error::InconclusiveRealness { witness } => {
            Error::NumericalInconsistency(format!(
                "face polynomial failed real-rootedness along {witness:?}"
            ))
        }
        other => other,
    })
}

/// Compares membership in `face_cone` (span coordinates) with membership in
/// the parent cone of the mapped point, on Gaussian span samples.
pub fn face_cone_agreement<S: Scalar>(
    face: &FaceDescriptor<S>,
    face_cone: &HyperbolicityCone<S>,
    samples: usize,
    seed: u64,
) -> Result<AgreementReport> {
    let mut report = AgreementReport::default();
    for i in 0..samples as u64 {
        let u = from_samples::<S>(&sampling::gaussian_sample(seed, i, face.span.dim()));
        let x = face.span.point(&u)?;
        let a = face_cone.classify(&u)?;
        let b = face.parent.member_by_eigenvalues(&x)?;
        report.record(a, b, &to_f64s(&x));
    }
    Ok(report)
}

/// Outcome of sampling relative-interior points of a face.
#[derive(Clone, Debug, PartialEq)]
pub struct MultConstancyReport {
    pub constant: bool,
    pub checked: usize,
    pub witness: Option<Vec<f64>>,
}

/// Perturbs `z` inside the span, keeps perturbations interior to the face
/// cone, and checks that each has parent multiplicity `m`.
pub fn mult_constancy_check<S: Scalar>(
    face: &FaceDescriptor<S>,
    samples: usize,
    seed: u64,
) -> Result<MultConstancyReport> {
    let face_cone = HyperbolicityCone::with_tolerances(
        face.q.clone(),
        face.z_coords.clone(),
        HyperbolicityCheck::Skip,
        face.parent.tolerances(),
    )?;
    let zc = to_f64s(&face.z_coords);
    let radius = 0.25 * (1.0 + linalg::norm(&zc));
    let mut checked = 0;
    for i in 0..samples as u64 {
        let g = sampling::gaussian_sample(seed, i, zc.len());
        let mut step = radius;
        let mut found = None;
        for _ in 0..12 {
            let u: Vec<S> = from_samples(&linalg::add_scaled(&zc, step, &g));
            if face_cone.in_interior(&u)? {
                found = Some(u);
                break;
            }
            step *= 0.5;
        }
        let Some(u) = found else { continue };
        let x = face.span.point(&u)?;
        checked += 1;
        let same = match face.parent.multiplicity(&x) {
            Ok(sig) => sig.m == face.m,
            Err(Error::NumericalInconsistency(_)) => false,
            Err(e) => return Err(e),
        };
        if !same {
            return Ok(MultConstancyReport {
                constant: false,
                checked,
                witness: Some(to_f64s(&x)),
            });
        }
    }
    if checked == 0 && samples > 0 {
        return Err(Error::NoRelativeInteriorSamples);
    }
    Ok(MultConstancyReport {
        constant: true,
        checked,
        witness: None,
    })
}

/// Span found by [`discover_span`] and how it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanDiscovery<S> {
    pub span: Subspace<S>,
    pub m: usize,
    /// Dimension of the common kernel of the lower-derivative gradients.
    pub kernel_dim: usize,
    /// Dimension after removing directions where the last vanishing
    /// derivative curves.
    pub refined_dim: usize,
    /// Smallest step at which an accepted direction passed the two-sided test.
    pub epsilon: Option<f64>,
    pub directions_tested: usize,
}

/// Bisection floor for the two-sided membership test.
pub fn bidirection_floor<S: Scalar>() -> f64 {
    if S::EXACT {
        1e-12
    } else {
        1e-6
    }
}

/// Random bases tried after the canonical one.
pub const DISCOVERY_ROTATIONS: usize = 4;

fn scaled_rows<S: Scalar>(rows: Vec<Vec<S>>, reference: f64) -> Vec<Vec<S>> {
    if S::EXACT {
        return rows;
    }
    rows.into_iter()
        .filter_map(|r| {
            let n = linalg::norm(&to_f64s(&r));
            if n <= 1e-9 * reference {
                None
            } else {
                let inv = S::from_f64(1.0 / n).unwrap_or_else(S::one);
                Some(r.into_iter().map(|v| v * inv.clone()).collect())
            }
        })
        .collect()
}

/// Finds the span of the smallest face containing `z`.
///
/// Starts from the common kernel of `grad D_e^k p(z)`, `k < m`, drops
/// directions where the Hessian of `D_e^(m-1) p` is nonzero on that kernel,
/// then keeps the directions `d` with `z ± εd` in the cone for some
/// `ε >= bidirection_floor`.
pub fn discover_span<S: Scalar>(cone: &HyperbolicityCone<S>, z: &[S]) -> Result<SpanDiscovery<S>> {
    let n = cone.num_vars();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: z.len(),
        });
    }
    if !cone.member(z)? {
        return Err(Error::NotInCone);
    }
    let m = cone.multiplicity(z)?.m;
    if m == 0 {
        return Ok(SpanDiscovery {
            span: Subspace::identity(n),
            m,
            kernel_dim: n,
            refined_dim: n,
            epsilon: None,
            directions_tested: 0,
        });
    }
    let znorm = linalg::norm(&to_f64s(z));
    let mut rows = Vec::new();
    for k in 0..m {
        let d = cone.derivative(k)?;
        let reference = d.coefficient_norm() * libm::pow(1.0 + znorm, d.degree() as f64);
        rows.extend(scaled_rows(vec![d.gradient(z)?], reference));
    }
    let kernel = linalg::nullspace(&rows, n);
    let kernel_dim = kernel.len();

    // Restrict the Hessian of the last vanishing derivative to the kernel.
    let mut basis: Vec<Vec<S>> = if S::EXACT {
        kernel
    } else {
        linalg::orthonormalize(&kernel.iter().map(|b| to_f64s(b)).collect::<Vec<_>>())
            .iter()
            .map(|b| from_f64s(b))
            .collect()
    };
    if !basis.is_empty() {
        let last = cone.derivative(m - 1)?;
        let h = last.hessian(z)?;
        let hb: Vec<Vec<S>> = basis.iter().map(|b| mat_vec(&h, b)).collect();
        let mut form: Vec<Vec<S>> = basis
            .iter()
            .map(|bi| hb.iter().map(|hbj| dot(bi, hbj)).collect())
            .collect();
        if !S::EXACT {
            let reference = last.coefficient_norm() * libm::pow(1.0 + znorm, last.degree() as f64);
            for row in form.iter_mut() {
                for v in row.iter_mut() {
                    if v.to_f64().abs() <= 1e-9 * reference {
                        *v = S::zero();
                    }
                }
            }
        }
        let combos = linalg::nullspace(&form, basis.len());
        basis = combos
            .iter()
            .map(|c| {
                let mut v = vec![S::zero(); n];
                for (ci, b) in c.iter().zip(&basis) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj = vj.clone() + ci.clone() * bj.clone();
                    }
                }
                v
            })
            .collect();
    }
    let refined_dim = basis.len();

    // Two-sided test, first on the basis itself, then on random bases.
    let probe = if S::EXACT {
        cone.clone()
    } else {
        let mut c = cone.clone();
        let mut tol = c.tolerances();
        tol.zero = 1e-13;
        c.set_tolerances(tol);
        c
    };
    let floor = bidirection_floor::<S>();
    let mut directions_tested = 0;
    let mut best: Vec<Vec<S>> = Vec::new();
    let mut best_eps: Option<f64> = None;
    for rotation in 0..=DISCOVERY_ROTATIONS {
        let candidates: Vec<Vec<S>> = if rotation == 0 {
            basis.clone()
        } else {
            let seed = sampling::derive_seed(0x5eed, rotation as u64);
            (0..refined_dim as u64)
                .map(|i| {
                    let g = sampling::gaussian_sample(seed, i, refined_dim);
                    let mut v = vec![S::zero(); n];
                    for (gi, b) in g.iter().zip(&basis) {
                        let c = S::from_sample(*gi);
                        for (vj, bj) in v.iter_mut().zip(b) {
                            *vj = vj.clone() + c.clone() * bj.clone();
                        }
                    }
                    v
                })
                .collect()
        };
        let mut accepted = Vec::new();
        let mut eps_used: Option<f64> = None;
        for d in candidates {
            directions_tested += 1;
            if let Some(eps) = two_sided(&probe, z, &d, znorm, floor)? {
                eps_used = Some(eps_used.map_or(eps, |e: f64| e.min(eps)));
                accepted.push(d);
            }
        }
        if accepted.len() > best.len() || rotation == 0 {
            best_eps = eps_used;
            let full = accepted.len() == refined_dim;
            best = accepted;
            if full {
                break;
            }
        }
    }
    let rank = linalg::rank(&best, n);
    let mut rows = best;
    let pivots = linalg::rref(&mut rows, n);
    rows.truncate(pivots.len().min(rank));
    let span = Subspace::new(n, rows)?;
    if !span.contains(z) {
        return Err(Error::SpanDiscovery(format!(
            "the point does not lie in the discovered span of dimension {}",
            span.dim()
        )));
    }
    Ok(SpanDiscovery {
        span,
        m,
        kernel_dim,
        refined_dim,
        epsilon: best_eps,
        directions_tested,
    })
}

fn from_f64s<S: Scalar>(x: &[f64]) -> Vec<S> {
    x.iter()
        .map(|v| S::from_f64(*v).unwrap_or_else(S::zero))
        .collect()
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn mat_vec<S: Scalar>(h: &[Vec<S>], v: &[S]) -> Vec<S> {
    h.iter().map(|row| dot(row, v)).collect()
}

/// Largest `ε = 2^-j (|z| / |d|)` down to the floor with `z ± εd` in the cone.
fn two_sided<S: Scalar>(
    cone: &HyperbolicityCone<S>,
    z: &[S],
    d: &[S],
    znorm: f64,
    floor: f64,
) -> Result<Option<f64>> {
    let dnorm = linalg::norm(&to_f64s(d));
    if dnorm == 0.0 {
        return Ok(None);
    }
    let reference = if znorm > 0.0 { znorm } else { 1.0 };
    let mut eps = 1.0;
    while eps >= floor {
        let step = S::from_f64(eps * reference / dnorm).unwrap_or_else(S::zero);
        let plus: Vec<S> = z
            .iter()
            .zip(d)
            .map(|(a, b)| a.clone() + step.clone() * b.clone())
            .collect();
        let minus: Vec<S> = z
            .iter()
            .zip(d)
            .map(|(a, b)| a.clone() - step.clone() * b.clone())
            .collect();
        if cone.member(&plus)? && cone.member(&minus)? {
            return Ok(Some(eps));
        }
        eps *= 0.5;
    }
    Ok(None)
}

/// The hyperbolicity cone `K1 ∩ K2` built from the faces of a common
/// relative-interior point.
#[derive(Clone, Debug)]
pub struct Intersection<S> {
    /// Cone of `(q1 q2)|_L` in coordinates of `subspace`, direction `z`.
    pub cone: HyperbolicityCone<S>,
    pub subspace: Subspace<S>,
    pub faces: [FaceDescriptor<S>; 2],
    /// `D^m1 p1 · D^m2 p2` on the ambient space.
    pub product: Polynomial<S>,
}

impl<S: Scalar> Intersection<S> {
    /// Classifies an ambient point of `L` by the intersection cone.
    pub fn classify(&self, x: &[S]) -> Result<Membership> {
        let u = self.subspace.coordinates(x)?;
        self.cone.classify(&u)
    }
}

/// Builds `K1 ∩ K2` as a hyperbolicity cone from a witness `z` in the
/// relative interior of the intersection. Both factors of the product
/// are validated on `samples` random lines.
pub fn intersect<S: Scalar>(
    k1: &HyperbolicityCone<S>,
    k2: &HyperbolicityCone<S>,
    z: &[S],
    samples: usize,
    seed: u64,
) -> Result<Intersection<S>> {
    if k1.num_vars() != k2.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: k1.num_vars(),
            actual: k2.num_vars(),
        });
    }
    if !k1.member(z)? || !k2.member(z)? {
        return Err(Error::NotInCone);
    }
    let s1 = discover_span(k1, z)?.span;
    let s2 = discover_span(k2, z)?.span;
    let f1 = make_face(k1, z, &s1)?;
    let f2 = make_face(k2, z, &s2)?;
    let subspace = s1.intersection(&s2)?;
    let z_coords = subspace.coordinates(z)?;
    // A product is real-rooted along a line exactly when every factor is, so
    // the factors are validated one at a time. Shared factors would otherwise
    // give double roots on every line, which float root finding smears.
    for (i, (k, f)) in [(k1, &f1), (k2, &f2)].into_iter().enumerate() {
        let factor = k.derivative(f.m)?.subspace_restriction(&subspace)?;
        HyperbolicityCone::with_tolerances(
            factor,
            z_coords.clone(),
            HyperbolicityCheck::Randomized { samples, seed },
            k1.tolerances(),
        )
        .map_err(|e| match e {
            Error::NotHyperbolic { witness } | Error::InconclusiveRealness { witness } => {
                Error::NumericalInconsistency(format!(
                    "intersection factor {} failed real-rootedness along {witness:?}",
                    i + 1
                ))
            }
            other => other,
        })?;
    }
    let product = k1.derivative(f1.m)?.multiply(k2.derivative(f2.m)?)?;
    let restricted = product.subspace_restriction(&subspace)?;
    let mut cone = HyperbolicityCone::with_tolerances(
        restricted,
        z_coords,
        HyperbolicityCheck::Skip,
        k1.tolerances(),
    )?;
    cone.set_certification(Certification::ValidatedProbabilistic { samples, seed });
    Ok(Intersection {
        cone,
        subspace,
        faces: [f1, f2],
        product,
    })
}

/// Compares membership in the intersection cone with membership in both
/// parents (by hyperbolic eigenvalues) on Gaussian points of `L`.
pub fn intersection_agreement<S: Scalar>(
    inter: &Intersection<S>,
    k1: &HyperbolicityCone<S>,
    k2: &HyperbolicityCone<S>,
    samples: usize,
    seed: u64,
) -> Result<AgreementReport> {
    let mut report = AgreementReport::default();
    for i in 0..samples as u64 {
        let u = from_samples::<S>(&sampling::gaussian_sample(seed, i, inter.subspace.dim()));
        let x = inter.subspace.point(&u)?;
        let a = inter.cone.classify(&u)?;
        let b1 = k1.member_by_eigenvalues(&x)?;
        let b2 = k2.member_by_eigenvalues(&x)?;
        let both = if b1 == Membership::Outside || b2 == Membership::Outside {
            Membership::Outside
        } else if b1 == Membership::Band || b2 == Membership::Band {
            Membership::Band
        } else {
            Membership::Inside
        };
        report.record(a, both, &to_f64s(&x));
    }
    Ok(report)
}
