//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hypercone_core::amenability::{amenability_estimate, amenability_proof_path_check};
use hypercone_core::faces::{
    face_as_cone, intersect, intersection_agreement, make_face, verify_face_representation,
    verify_face_representation_at,
};
use hypercone_core::fixtures::{self, Fixture};
use hypercone_core::linalg::solve_in_span;
use hypercone_core::projection::{
    cutting_plane_projection, optimality_certificate, CuttingPlaneOptions,
};
use hypercone_core::sampling::gaussian_sample;
use hypercone_core::{
    AmenabilityOptions, HyperbolicityCone, Membership, Polynomial, Projectors, Rational, Scalar,
    UnivariatePoly,
};
use nalgebra::{DMatrix, SymmetricEigen};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture<S: Scalar>(name: &str) -> Fixture<S> {
    fixtures::by_name(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn catalog<S: Scalar>() -> Vec<Fixture<S>> {
    fixtures::catalog_names().into_iter().map(fixture).collect()
}

fn samples<S: Scalar>(x: &[f64]) -> Vec<S> {
    x.iter().map(|v| S::from_sample(*v)).collect()
}

fn f64s<S: Scalar>(x: &[S]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64()).collect()
}

/// Gaussian point shifted along the direction so that every relaxation level
/// sees both members and non-members.
fn shifted_point(f: &Fixture<f64>, seed: u64, i: u64) -> Vec<f64> {
    let n = f.num_vars();
    let g = gaussian_sample(seed, i, n + 1);
    let t = 2.0 * g[n];
    g[..n]
        .iter()
        .zip(f.cone.direction())
        .map(|(x, e)| x + t * e)
        .collect()
}

fn relaxation_chain() -> Check {
    let mut lines = Vec::new();
    for name in ["orthant:6", "lorentz:4", "psd:3"] {
        let f: Fixture<f64> = fixture(name);
        let exact: Fixture<Rational> = fixture(name);
        let d = f.cone.degree();
        let float_cones: Vec<_> = (0..d).map(|m| f.cone.derivative_cone(m).unwrap()).collect();
        let exact_cones: Vec<_> = (0..d)
            .map(|m| exact.cone.derivative_cone(m).unwrap())
            .collect();
        let mut violations = 0;
        let mut members = vec![0usize; d];
        for i in 0..1000 {
            let xf = shifted_point(&f, 1, i);
            let classes: Vec<Membership> = float_cones
                .iter()
                .map(|c| c.classify(&xf).unwrap())
                .collect();
            for m in 0..d - 1 {
                if classes[m] == Membership::Inside && classes[m + 1] == Membership::Outside {
                    violations += 1;
                }
            }
            let xr: Vec<Rational> = samples(&xf);
            let exact_members: Vec<bool> =
                exact_cones.iter().map(|c| c.member(&xr).unwrap()).collect();
            for m in 0..d {
                if exact_members[m] {
                    members[m] += 1;
                }
                if m + 1 < d && exact_members[m] && !exact_members[m + 1] {
                    violations += 1;
                }
            }
        }
        ensure(violations == 0, || {
            format!("{name}: {violations} violations")
        })?;
        ensure(members[0] > 0 && members[d - 1] < 1000, || {
            format!("{name}: degenerate member counts {members:?}")
        })?;
        lines.push(format!("{name} members by order {members:?}"));
    }
    Ok(lines.join("; "))
}

fn eigenvalue_identities() -> Check {
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut worst_oracle = 0.0f64;
    let names = [
        "orthant:3",
        "orthant:6",
        "lorentz:3",
        "lorentz:4",
        "psd:2",
        "psd:3",
        "renegar-orthant:3:1",
    ];
    for name in names {
        let f: Fixture<f64> = fixture(name);
        let n = f.num_vars();
        let e = f.cone.direction().to_vec();
        ensure(f.cone.degree() <= 6, || format!("{name}: degree above 6"))?;
        for i in 0..1000 {
            let g = gaussian_sample(2, i, n + 2);
            let x = &g[..n];
            let s = g[n];
            let c = g[n + 1].exp();
            let base = f
                .cone
                .eigenvalues(x)
                .map_err(|err| format!("{name} {i}: {err}"))?
                .expanded();
            let scale = 1.0 + base.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let shifted: Vec<f64> = x.iter().zip(&e).map(|(xi, ei)| xi + s * ei).collect();
            let scaled: Vec<f64> = x.iter().map(|xi| c * xi).collect();
            let a = f
                .cone
                .eigenvalues(&shifted)
                .map_err(|err| format!("{name} {i}: {err}"))?
                .expanded();
            let b = f
                .cone
                .eigenvalues(&scaled)
                .map_err(|err| format!("{name} {i}: {err}"))?
                .expanded();
            ensure(a.len() == base.len() && b.len() == base.len(), || {
                format!(
                    "{name} {i}: eigenvalue counts {} {} {}",
                    base.len(),
                    a.len(),
                    b.len()
                )
            })?;
            for k in 0..base.len() {
                let shift_err = (a[k] - (base[k] + s)).abs() / (scale + s.abs());
                let scale_err = (b[k] - c * base[k]).abs() / (c * scale);
                if shift_err.max(scale_err) > worst {
                    worst = shift_err.max(scale_err);
                    worst_at = format!("{name} trial {i}");
                }
            }
            if let Some(oracle) = f.eigen_oracle(x) {
                for (k, o) in oracle.iter().enumerate() {
                    worst_oracle = worst_oracle.max((o - base[k]).abs() / scale);
                }
            }
        }
    }
    ensure(worst <= 1e-8, || {
        format!("worst relative error {worst:e} at {worst_at}")
    })?;
    ensure(worst_oracle <= 1e-8, || {
        format!("worst oracle error {worst_oracle:e}")
    })?;
    Ok(format!(
        "7000 trials, worst relative error {worst:.1e}, worst oracle error {worst_oracle:.1e}"
    ))
}

/// Coefficients of `prod (t + r_i)`, lowest degree first.
fn expand_nonpositive_roots(r: &[Rational], lead: &Rational) -> Vec<Rational> {
    let mut coeffs = vec![lead.clone()];
    for ri in r {
        let mut next = vec![Rational::from_i64(0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() + c.clone() * ri.clone();
        }
        coeffs = next;
    }
    coeffs
}

fn trailing_vanishing() -> Check {
    let mut with_zeros = 0;
    for i in 0..10_000u64 {
        let g = gaussian_sample(3, i, 20);
        let degree = 1 + ((g[0].abs() * 1e6) as usize) % 8;
        let roots: Vec<Rational> = (0..degree)
            .map(|k| {
                if g[1 + k] < -0.5 {
                    Rational::from_i64(0)
                } else {
                    let num = 1 + (g[9 + k].abs() * 4.0) as i64;
                    let den = 1 + (k as i64 % 3);
                    Rational::from_i64(num) / Rational::from_i64(den)
                }
            })
            .collect();
        let zeros = roots
            .iter()
            .filter(|r| **r == Rational::from_i64(0))
            .count();
        if zeros > 0 {
            with_zeros += 1;
        }
        let lead = Rational::from_i64(1 + (g[19].abs() * 3.0) as i64);
        let coeffs = expand_nonpositive_roots(&roots, &lead);
        for (k, c) in coeffs.iter().enumerate() {
            ensure((*c == Rational::from_i64(0)) == (k < zeros), || {
                format!("case {i}: coefficient {k} does not match {zeros} zero roots")
            })?;
        }
        let u = UnivariatePoly::new(coeffs);
        let holds = u
            .trailing_vanishing_holds(1e-8)
            .map_err(|e| format!("case {i}: {e}"))?;
        ensure(holds, || format!("case {i}: property failed"))?;
    }
    Ok(format!("10000 polynomials, {with_zeros} with zero roots"))
}

fn psd_rank(n: usize, x: &[f64]) -> usize {
    let mut m = DMatrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        m[(i, i)] = x[i];
    }
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = x[k];
            m[(j, i)] = x[k];
            k += 1;
        }
    }
    let eig = SymmetricEigen::new(m);
    let scale = 1.0 + eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    eig.eigenvalues
        .iter()
        .filter(|v| v.abs() > 1e-9 * scale)
        .count()
}

fn check_signature(
    cone: &HyperbolicityCone<Rational>,
    x: &[Rational],
    expected: usize,
    ctx: &str,
) -> Result<(), String> {
    let sig = cone.multiplicity(x).map_err(|e| format!("{ctx}: {e}"))?;
    ensure(sig.m == expected, || {
        format!("{ctx}: m = {} expected {expected}", sig.m)
    })?;
    ensure(
        sig.zero_block.iter().all(|v| *v == Rational::from_i64(0)),
        || format!("{ctx}: zero block {:?}", sig.zero_block),
    )?;
    ensure(
        sig.positive_block
            .iter()
            .all(|v| *v > Rational::from_i64(0)),
        || format!("{ctx}: positive block {:?}", sig.positive_block),
    )
}

fn multiplicity_signature() -> Check {
    let psd: Fixture<Rational> = fixture("psd:3");
    let mut checked = 0;
    for face in &psd.faces {
        let expected = 3 - psd_rank(3, &f64s(&face.z));
        check_signature(
            &psd.cone,
            &face.z,
            expected,
            &format!("psd:3 {}", face.label),
        )?;
        checked += 1;
    }
    // Random integer Gram matrices of each rank.
    for i in 0..200u64 {
        let g = gaussian_sample(4, i, 10);
        let rank = (i % 4) as usize;
        let vectors: Vec<Vec<i64>> = (0..rank)
            .map(|r| {
                (0..3)
                    .map(|c| (g[3 * r + c] * 3.0).round() as i64)
                    .collect()
            })
            .collect();
        let mut x = vec![0i64; 6];
        let entries = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
        for v in &vectors {
            for (k, &(a, b)) in entries.iter().enumerate() {
                x[k] += v[a] * v[b];
            }
        }
        let xr: Vec<Rational> = x.iter().map(|&v| Rational::from_i64(v)).collect();
        let expected = 3 - psd_rank(3, &f64s(&xr));
        check_signature(&psd.cone, &xr, expected, &format!("psd:3 gram {x:?}"))?;
        checked += 1;
    }
    for name in ["orthant:3", "orthant:6"] {
        let f: Fixture<Rational> = fixture(name);
        let n = f.num_vars();
        for face in &f.faces {
            let zeros = face
                .z
                .iter()
                .filter(|v| **v == Rational::from_i64(0))
                .count();
            check_signature(&f.cone, &face.z, zeros, &format!("{name} {}", face.label))?;
            checked += 1;
        }
        for i in 0..100u64 {
            let g = gaussian_sample(5, i, n);
            let x: Vec<Rational> = g
                .iter()
                .map(|v| {
                    if *v < 0.0 {
                        Rational::from_i64(0)
                    } else {
                        Rational::from_sample(0.1 + v)
                    }
                })
                .collect();
            let zeros = g.iter().filter(|v| **v < 0.0).count();
            check_signature(&f.cone, &x, zeros, &format!("{name} random {i}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} points, zero failures"))
}

fn face_representation() -> Check {
    let mut faces = 0;
    let mut controls = 0;
    for f in catalog::<f64>() {
        for cat in &f.faces {
            let ctx = format!("{} {}", f.name, cat.label);
            let face = make_face(&f.cone, &cat.z, &cat.span).map_err(|e| format!("{ctx}: {e}"))?;
            let report =
                verify_face_representation(&face, 10_000, 5).map_err(|e| format!("{ctx}: {e}"))?;
            ensure(report.passed(), || format!("{ctx}: {report:?}"))?;
            faces += 1;
            if face.is_nontrivial() {
                let orders = [
                    cat.m.checked_sub(1),
                    Some(cat.m + 1).filter(|m| *m <= f.cone.degree()),
                ];
                for m in orders.into_iter().flatten() {
                    let bad = verify_face_representation_at(&face, m, 10_000, 5)
                        .map_err(|e| format!("{ctx}: {e}"))?;
                    ensure(bad.violations > 0, || {
                        format!("{ctx}: control m = {m} found no violation")
                    })?;
                    controls += 1;
                }
            }
        }
    }
    Ok(format!(
        "{faces} faces clean at 10^4 samples, {controls} controls all detected"
    ))
}

fn faces_are_cones() -> Check {
    let mut count = 0;
    for f in catalog::<f64>() {
        for cat in &f.faces {
            let ctx = format!("{} {}", f.name, cat.label);
            let face = make_face(&f.cone, &cat.z, &cat.span).map_err(|e| format!("{ctx}: {e}"))?;
            face_as_cone(&face, 1000, 6).map_err(|e| format!("{ctx} float: {e}"))?;
            count += 1;
        }
    }
    for f in catalog::<Rational>() {
        for cat in &f.faces {
            let ctx = format!("{} {}", f.name, cat.label);
            let face = make_face(&f.cone, &cat.z, &cat.span).map_err(|e| format!("{ctx}: {e}"))?;
            face_as_cone(&face, 1000, 6).map_err(|e| format!("{ctx} exact: {e}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} face cones validated with N = 1000 (float and exact)"
    ))
}

struct Template {
    name: &'static str,
    k1: HyperbolicityCone<f64>,
    k2: HyperbolicityCone<f64>,
    z: Vec<f64>,
    dim: usize,
}

fn templates() -> Vec<Template> {
    let orthant = fixture::<f64>("orthant:3").cone;
    let lorentz = fixture::<f64>("lorentz:3").cone;
    let psd = fixture::<f64>("psd:2").cone;
    let reflected = HyperbolicityCone::known(
        Polynomial::new(3, 3, [(vec![1, 1, 1], -1.0)]).unwrap(),
        vec![1.0, -1.0, 1.0],
    )
    .unwrap();
    let halfspace =
        HyperbolicityCone::known(Polynomial::linear(&[0.0, 1.0, 0.0]), vec![1.0, 1.0, 0.0])
            .unwrap();
    vec![
        Template {
            name: "orthant ∩ lorentz",
            k1: orthant.clone(),
            k2: lorentz.clone(),
            z: vec![2.0, 1.0, 1.0],
            dim: 3,
        },
        Template {
            name: "psd(2) ∩ orthant",
            k1: psd.clone(),
            k2: orthant.clone(),
            z: vec![2.0, 2.0, 1.0],
            dim: 3,
        },
        Template {
            name: "orthant ∩ reflected orthant",
            k1: orthant,
            k2: reflected,
            z: vec![1.0, 0.0, 1.0],
            dim: 2,
        },
        Template {
            name: "lorentz ∩ halfspace",
            k1: lorentz.clone(),
            k2: halfspace,
            z: vec![2.0, 1.0, 0.0],
            dim: 3,
        },
        Template {
            name: "psd(2) ∩ lorentz",
            k1: psd,
            k2: lorentz,
            z: vec![2.0, 1.0, 0.5],
            dim: 3,
        },
    ]
}

/// `p ∘ A` with direction `A^{-1} e`.
fn pull_back(cone: &HyperbolicityCone<f64>, columns: &[Vec<f64>]) -> HyperbolicityCone<f64> {
    let p = cone.polynomial().compose_linear(columns).unwrap();
    let e = solve_in_span(columns, cone.direction());
    HyperbolicityCone::known(p, e).unwrap()
}

fn intersections() -> Check {
    let rv = |v: &[i64]| v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
    let quadrant = HyperbolicityCone::known(
        Polynomial::new(2, 2, [(vec![1, 1], Rational::from_i64(1))]).unwrap(),
        rv(&[1, 1]),
    )
    .map_err(|e| e.to_string())?;
    let lower = HyperbolicityCone::known(
        Polynomial::new(2, 2, [(vec![1, 1], Rational::from_i64(-1))]).unwrap(),
        rv(&[1, -1]),
    )
    .map_err(|e| e.to_string())?;
    let inter = intersect(&quadrant, &lower, &rv(&[1, 0]), 1000, 7)
        .map_err(|e| format!("R^2 example: {e}"))?;
    let q = inter.cone.polynomial();
    ensure(
        inter.subspace.dim() == 1 && q.degree() == 2 && q.len() == 1,
        || format!("R^2 example: q = {q:?}"),
    )?;
    ensure(q.coefficient(&[2]) > Rational::from_i64(0), || {
        "R^2 example: q is not a positive multiple of u^2".into()
    })?;
    ensure(inter.subspace.contains(&rv(&[1, 0])), || {
        "R^2 example: subspace is not the x-axis".into()
    })?;
    ensure(
        inter.classify(&rv(&[-1, 0])).map_err(|e| e.to_string())? == Membership::Outside,
        || "R^2 example: -u is inside".into(),
    )?;

    let mut worst_band = 0;
    let mut pairs = 0;
    for (t, template) in templates().into_iter().enumerate() {
        for rep in 0..2u64 {
            let g = gaussian_sample(8, 10 * t as u64 + rep, 9);
            let columns: Vec<Vec<f64>> = (0..3)
                .map(|j| {
                    (0..3)
                        .map(|i| if i == j { 1.0 } else { 0.0 } + 0.3 * g[3 * i + j])
                        .collect()
                })
                .collect();
            let k1 = pull_back(&template.k1, &columns);
            let k2 = pull_back(&template.k2, &columns);
            let z = solve_in_span(&columns, &template.z);
            let ctx = format!("{} map {rep}", template.name);
            let inter = intersect(&k1, &k2, &z, 1000, 9).map_err(|e| format!("{ctx}: {e}"))?;
            ensure(inter.subspace.dim() == template.dim, || {
                format!(
                    "{ctx}: subspace dimension {} expected {}",
                    inter.subspace.dim(),
                    template.dim
                )
            })?;
            let report = intersection_agreement(&inter, &k1, &k2, 10_000, 10)
                .map_err(|e| format!("{ctx}: {e}"))?;
            ensure(report.violations == 0, || format!("{ctx}: {report:?}"))?;
            worst_band = worst_band.max(report.band);
            pairs += 1;
        }
    }
    Ok(format!(
        "R^2 example gives q = c u^2 with c > 0; {pairs} random pairs, 10^4 samples each, 0 violations (max band {worst_band})"
    ))
}

fn amenability() -> Check {
    let mut notes = Vec::new();
    let cut = CuttingPlaneOptions::default();
    for name in ["orthant:3", "orthant:6"] {
        let f: Fixture<Rational> = fixture(name);
        for cat in f.faces.iter().filter(|c| c.span.dim() > 0) {
            let ctx = format!("{name} {}", cat.label);
            let face = make_face(&f.cone, &cat.z, &cat.span).map_err(|e| format!("{ctx}: {e}"))?;
            let closed = Projectors {
                cone: f.projector.clone(),
                face: cat.projector.clone(),
            };
            let routes: &[(&str, Projectors)] = if name == "orthant:3" {
                &[
                    ("closed", closed.clone()),
                    ("cutting", Projectors::default()),
                ]
            } else {
                &[("closed", closed.clone())]
            };
            for (route, projectors) in routes {
                let opts = AmenabilityOptions {
                    samples: 1000,
                    seed: 11,
                    ..Default::default()
                };
                let est = amenability_estimate(&face, projectors.clone(), &f.metric, &opts)
                    .map_err(|e| format!("{ctx} {route}: {e}"))?;
                let k = est
                    .kappa_hat
                    .ok_or_else(|| format!("{ctx} {route}: no retained samples"))?;
                ensure((k - 1.0).abs() <= 1e-6, || {
                    format!("{ctx} {route}: kappa_hat = {k}")
                })?;
            }
        }
    }
    notes.push("orthant faces kappa_hat = 1 within 1e-6".to_string());

    for name in ["lorentz:3", "lorentz:4", "psd:3"] {
        let f: Fixture<Rational> = fixture(name);
        for cat in f.faces.iter().filter(|c| c.span.dim() > 0) {
            let ctx = format!("{name} {}", cat.label);
            let face = make_face(&f.cone, &cat.z, &cat.span).map_err(|e| format!("{ctx}: {e}"))?;
            let projectors = Projectors {
                cone: f.projector.clone(),
                face: cat.projector.clone(),
            };
            let mut by_n = Vec::new();
            for n in [100, 1000, 10_000] {
                let opts = AmenabilityOptions {
                    samples: n,
                    seed: 12,
                    ..Default::default()
                };
                let est = amenability_estimate(&face, projectors.clone(), &f.metric, &opts)
                    .map_err(|e| format!("{ctx} N={n}: {e}"))?;
                let k = est
                    .kappa_hat
                    .ok_or_else(|| format!("{ctx} N={n}: no retained samples"))?;
                ensure(k.is_finite(), || format!("{ctx} N={n}: kappa_hat = {k}"))?;
                let spread = est
                    .radius_spread()
                    .ok_or_else(|| format!("{ctx} N={n}: missing radius estimate"))?;
                ensure(spread <= 0.01, || {
                    format!("{ctx} N={n}: radius spread {spread:e}")
                })?;
                ensure(est.non_converged == 0, || {
                    format!(
                        "{ctx} N={n}: {} projections did not converge",
                        est.non_converged
                    )
                })?;
                by_n.push(k);
            }
            ensure(by_n.windows(2).all(|w| w[1] >= w[0]), || {
                format!("{ctx}: kappa_hat not monotone in N: {by_n:?}")
            })?;
            ensure(by_n[2] <= 2.0 * by_n[1], || {
                format!("{ctx}: kappa_hat unbounded across N: {by_n:?}")
            })?;
            let pp = amenability_proof_path_check(&face, projectors, &f.metric, 1000, 13, cut)
                .map_err(|e| format!("{ctx} sandwich: {e}"))?;
            ensure(pp.z_interior, || {
                format!("{ctx}: z not interior to the relaxation")
            })?;
            ensure(pp.sandwich_violations == 0, || {
                format!("{ctx}: sandwich {pp:?}")
            })?;
            notes.push(format!(
                "{ctx} kappa_hat {:.4}/{:.4}/{:.4}",
                by_n[0], by_n[1], by_n[2]
            ));
        }
    }
    Ok(notes.join("; "))
}

fn projectors() -> Check {
    let mut worst = 0.0f64;
    for name in [
        "orthant:3",
        "orthant:6",
        "lorentz:3",
        "lorentz:4",
        "psd:2",
        "psd:3",
    ] {
        let f: Fixture<f64> = fixture(name);
        let closed = f
            .projector
            .clone()
            .ok_or_else(|| format!("{name}: no closed-form projector"))?;
        for i in 0..100u64 {
            let x = gaussian_sample(14, i, f.num_vars());
            let a = closed.project(&x, &f.metric);
            let opts = CuttingPlaneOptions {
                seed: i,
                ..Default::default()
            };
            let b = cutting_plane_projection(&f.cone, &x, &f.metric, &opts)
                .map_err(|e| format!("{name} {i}: {e}"))?;
            ensure(b.converged, || {
                format!("{name} {i}: cutting plane did not converge")
            })?;
            let d = f.metric.dist(&a.point, &b.point);
            ensure(d <= 1e-6, || {
                format!("{name} {i}: closed form and cutting plane differ by {d:e}")
            })?;
            worst = worst.max(d);
            for (route, point) in [("closed", &a.point), ("cutting", &b.point)] {
                let cert = optimality_certificate(&f.cone, &f.metric, &x, point, 20, i, 1e-6)
                    .map_err(|e| format!("{name} {i} {route}: {e}"))?;
                ensure(cert.passed, || {
                    format!("{name} {i} {route}: certificate {cert:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "600 points, worst distance {worst:.1e}, all certificates passed"
    ))
}

/// The CLI suite: every subcommand with fixed seeds, run in `dir`.
fn cli_suite(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let exe = env!("CARGO_BIN_EXE_hypercone");
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    std::fs::write(
        dir.join("lower.json"),
        r#"{"vars": 2, "degree": 2, "mode": "rational", "terms": [{"exp": [1, 1], "coef": "-1/1"}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let runs: &[&[&str]] = &[
        &["fixture", "list"],
        &["fixture", "emit", "orthant:3", "-o", "orth3"],
        &["fixture", "emit", "psd:3", "-o", "psd3"],
        &["fixture", "emit", "lorentz:3", "-o", "lor3"],
        &["check", "-p", "orth3/cone.json", "-N", "300", "--seed", "3"],
        &[
            "--mode",
            "float",
            "check",
            "-p",
            "fixture:psd:3",
            "-N",
            "300",
            "--seed",
            "4",
        ],
        &["eig", "-p", "fixture:orthant:3", "-x", "3,1,2"],
        &[
            "--mode",
            "float",
            "eig",
            "-p",
            "psd3/cone.json",
            "-x",
            "2,3,4,1,0,0",
        ],
        &["member", "-p", "fixture:lorentz:3", "-x", "1,2,0"],
        &[
            "member",
            "-p",
            "fixture:psd:3",
            "-x",
            "2,2,2,5/2,0,0",
            "--order",
            "1",
        ],
        &["interior", "-p", "fixture:lorentz:3", "-x", "1,1,0"],
        &["mult", "-p", "fixture:psd:3", "-x", "1,1,0,1,0,0"],
        &[
            "derive",
            "-p",
            "orth3/polynomial.json",
            "-e",
            "1,1,1",
            "-m",
            "1",
            "-o",
            "d1.json",
        ],
        &["check", "-p", "d1.json", "-e", "1,1,1", "-N", "200"],
        &[
            "face",
            "make",
            "-p",
            "fixture:psd:3",
            "-z",
            "1,1,0,1,0,0",
            "--label",
            "found",
            "-o",
            "found.json",
        ],
        &[
            "face",
            "verify",
            "--face",
            "found.json",
            "-N",
            "500",
            "--seed",
            "5",
        ],
        &[
            "face",
            "verify",
            "--face",
            "psd3/faces/rotated2.json",
            "-N",
            "500",
            "--m-test",
            "0",
        ],
        &[
            "--mode",
            "float",
            "face",
            "discover",
            "-p",
            "fixture:psd:3",
            "-z",
            "1,1,0,1,0,0",
        ],
        &[
            "face",
            "as-cone",
            "--face",
            "lor3/faces/ray_1_1_0.json",
            "-N",
            "200",
            "-o",
            "ray.json",
        ],
        &[
            "intersect",
            "--p1",
            "fixture:orthant:2",
            "--p2",
            "lower.json",
            "--e2=1,-1",
            "-z",
            "1,0",
            "-N",
            "500",
        ],
        &[
            "amen",
            "--face",
            "orth3/faces/support_0_1.json",
            "-N",
            "200",
            "--seed",
            "6",
            "--csv",
            "ratios.csv",
        ],
        &[
            "amen",
            "--face",
            "psd3/faces/block2.json",
            "-N",
            "100",
            "--seed",
            "7",
            "--proof-path",
        ],
        &[
            "linreg",
            "-L",
            "1,0,0;0,1,1",
            "-p",
            "fixture:orthant:3",
            "-w",
            "1,1,1",
            "-N",
            "100",
            "--seed",
            "8",
        ],
        &[
            "--output",
            "text",
            "mult",
            "-p",
            "fixture:orthant:3",
            "-x",
            "0,1,2",
        ],
    ];
    let mut outputs = Vec::new();
    for args in runs {
        let out = Command::new(exe)
            .args(*args)
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code().unwrap_or(-1);
        let expected = match args {
            [.., "1,2,0"] | [.., "1,1,0"] | [.., "0"] => 1,
            _ => 0,
        };
        ensure(code == expected, || {
            format!(
                "`hypercone {}` exited {code}: {}",
                args.join(" "),
                String::from_utf8_lossy(&out.stderr)
            )
        })?;
        let mut bytes = out.stdout;
        bytes.extend_from_slice(format!("exit {code}\n").as_bytes());
        outputs.push((args.join(" "), bytes));
    }
    let mut files = Vec::new();
    collect_files(dir, dir, &mut files);
    files.sort();
    for rel in files {
        let bytes = std::fs::read(dir.join(&rel)).map_err(|e| e.to_string())?;
        outputs.push((rel.display().to_string(), bytes));
    }
    Ok(outputs)
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap().flatten() {
        let path = entry.path();
        if path.is_dir() {
            collect_files(root, &path, out);
        } else {
            out.push(path.strip_prefix(root).unwrap().to_path_buf());
        }
    }
}

fn determinism() -> Check {
    let base = std::env::temp_dir().join(format!("hypercone-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    let first = cli_suite(&base.join("a"))?;
    let second = cli_suite(&base.join("b"))?;
    let _ = std::fs::remove_dir_all(&base);
    ensure(first.len() == second.len(), || {
        "runs produced different artifact sets".into()
    })?;
    for ((name_a, a), (name_b, b)) in first.iter().zip(&second) {
        ensure(name_a == name_b && a == b, || {
            format!("output of `{name_a}` differs between runs")
        })?;
    }
    let bytes: usize = first.iter().map(|(_, b)| b.len()).sum();
    Ok(format!(
        "{} outputs ({bytes} bytes) byte-identical across two runs",
        first.len()
    ))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 10] = [
        (
            1,
            "relaxation chain",
            Duration::from_secs(30),
            relaxation_chain,
        ),
        (
            2,
            "eigenvalue identities",
            Duration::from_secs(30),
            eigenvalue_identities,
        ),
        (
            3,
            "trailing coefficient vanishing",
            Duration::from_secs(10),
            trailing_vanishing,
        ),
        (
            4,
            "multiplicity signature",
            Duration::from_secs(60),
            multiplicity_signature,
        ),
        (
            5,
            "face representation",
            Duration::from_secs(120),
            face_representation,
        ),
        (
            6,
            "faces are hyperbolicity cones",
            Duration::from_secs(60),
            faces_are_cones,
        ),
        (7, "intersections", Duration::from_secs(60), intersections),
        (8, "amenability", Duration::from_secs(180), amenability),
        (
            9,
            "projector correctness",
            Duration::from_secs(60),
            projectors,
        ),
        (10, "CLI determinism", Duration::from_secs(120), determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let total = Instant::now();
    let mut failed = 0;
    for (n, title, budget, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > budget {
                Err(format!(
                    "{detail}; runtime {elapsed:.1?} exceeds {budget:?}"
                ))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!("PASS {n:>2} {title}: {detail} [{elapsed:.1?}]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {n:>2} {title}: {reason} [{elapsed:.1?}]");
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1?}", total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
