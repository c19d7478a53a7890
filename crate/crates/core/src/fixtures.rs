//! Cones with known structure: nonnegative orthant, Lorentz cone, PSD cone
//! (determinant of a symmetric matrix), and derivative relaxations of the
//! orthant. Each fixture carries a face catalog, closed-form projectors where
//! they exist, and oracles that do not go through the hyperbolic machinery.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::SymmetricEigen;

use crate::cone::HyperbolicityCone;
use crate::error::{Error, Result};
use crate::linalg;
use crate::polynomial::Polynomial;
use crate::projection::{self, Metric, Projector};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Largest matrix size for the PSD fixture.
pub const PSD_MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Orthant { n: usize },
    Lorentz { n: usize },
    Psd { n: usize },
    RenegarOrthant { n: usize, m: usize },
}

/// A face given by a relative-interior point, its span and multiplicity.
#[derive(Clone, Debug)]
pub struct CatalogFace<S> {
    pub label: String,
    pub z: Vec<S>,
    pub span: Subspace<S>,
    pub m: usize,
    /// Closed-form projector onto the face, if one is known.
    pub projector: Option<Projector>,
    pub note: String,
}

impl<S: Scalar> CatalogFace<S> {
    /// Proper faces other than `{0}`.
    pub fn is_nontrivial(&self) -> bool {
        self.span.dim() > 0
    }
}

#[derive(Clone, Debug)]
pub struct Fixture<S> {
    pub name: String,
    pub kind: FixtureKind,
    pub cone: HyperbolicityCone<S>,
    pub projector: Option<Projector>,
    pub metric: Metric,
    pub faces: Vec<CatalogFace<S>>,
}

fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    (0..n)
        .map(|j| if i == j { S::one() } else { S::zero() })
        .collect()
}

fn ints<S: Scalar>(v: &[i64]) -> Vec<S> {
    v.iter().map(|&x| S::from_i64(x)).collect()
}

impl<S: Scalar> Fixture<S> {
    pub fn num_vars(&self) -> usize {
        self.cone.num_vars()
    }

    /// Multiplicity from an independent routine (coordinate zeros, norm
    /// comparison, or matrix rank). `None` where no such routine exists.
    pub fn mult_oracle(&self, x: &[f64]) -> Option<usize> {
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let tol = 1e-9 * scale;
        match self.kind {
            FixtureKind::Orthant { .. } => Some(x.iter().filter(|v| v.abs() <= tol).count()),
            FixtureKind::Lorentz { .. } => {
                let tail = linalg::norm(&x[1..]);
                if linalg::norm(x) <= tol {
                    Some(2)
                } else if (x[0] - tail).abs() <= tol {
                    Some(1)
                } else {
                    Some(0)
                }
            }
            FixtureKind::Psd { n } => {
                let eig = SymmetricEigen::new(projection::sym_to_matrix(n, x));
                let zeros = eig.eigenvalues.iter().filter(|l| l.abs() <= tol).count();
                Some(zeros)
            }
            FixtureKind::RenegarOrthant { .. } => None,
        }
    }

    /// Eigenvalues from a closed form or a matrix eigensolver, ascending.
    pub fn eigen_oracle(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = match self.kind {
            FixtureKind::Orthant { .. } => x.to_vec(),
            FixtureKind::Lorentz { .. } => {
                let tail = linalg::norm(&x[1..]);
                vec![x[0] - tail, x[0] + tail]
            }
            FixtureKind::Psd { n } => SymmetricEigen::new(projection::sym_to_matrix(n, x))
                .eigenvalues
                .iter()
                .copied()
                .collect(),
            FixtureKind::RenegarOrthant { .. } => return None,
        };
        out.sort_by(f64::total_cmp);
        Some(out)
    }

    pub fn face(&self, label: &str) -> Option<&CatalogFace<S>> {
        self.faces.iter().find(|f| f.label == label)
    }
}

/// Product of coordinates, direction all-ones.
pub fn orthant<S: Scalar>(n: usize) -> Result<Fixture<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("orthant needs n >= 1".into()));
    }
    let p = Polynomial::new(n, n as u32, [(vec![1; n], S::one())])?;
    let cone = HyperbolicityCone::known(p, vec![S::one(); n])?;
    let supports: Vec<Vec<usize>> = if n <= 3 {
        (0..1usize << n)
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        (0..=n).map(|k| (0..k).collect()).collect()
    };
    let faces = supports
        .into_iter()
        .map(|support| {
            let z: Vec<S> = (0..n)
                .map(|i| {
                    if support.contains(&i) {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
                .collect();
            CatalogFace {
                label: format!("support{support:?}"),
                m: n - support.len(),
                span: Subspace::coordinate(n, &support),
                projector: Some(Projector::OrthantFace {
                    support: support.clone(),
                }),
                z,
                note: "coordinate face; m counts zero coordinates".to_string(),
            }
        })
        .collect();
    Ok(Fixture {
        name: format!("orthant:{n}"),
        kind: FixtureKind::Orthant { n },
        cone,
        projector: Some(Projector::Orthant),
        metric: Metric::euclidean(n),
        faces,
    })
}

/// `x_1^2 - x_2^2 - ... - x_n^2`, direction the first unit vector.
pub fn lorentz<S: Scalar>(n: usize) -> Result<Fixture<S>> {
    if n < 2 {
        return Err(Error::InvalidArgument("lorentz needs n >= 2".into()));
    }
    let terms = (0..n).map(|i| {
        let mut exp = vec![0; n];
        exp[i] = 2;
        (exp, if i == 0 { S::one() } else { -S::one() })
    });
    let p = Polynomial::new(n, 2, terms)?;
    let cone = HyperbolicityCone::known(p, unit(n, 0))?;
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut ray = vec![0i64; n];
    ray[0] = 1;
    ray[1] = 1;
    rays.push(ray);
    if n >= 3 {
        let mut ray = vec![0i64; n];
        ray[0] = 5;
        ray[1] = 3;
        ray[2] = 4;
        rays.push(ray);
    }
    let mut faces = vec![CatalogFace {
        label: "full".to_string(),
        z: unit(n, 0),
        span: Subspace::identity(n),
        m: 0,
        projector: Some(Projector::Lorentz),
        note: "the cone itself".to_string(),
    }];
    for r in rays {
        faces.push(CatalogFace {
            label: format!("ray{r:?}"),
            z: ints(&r),
            span: Subspace::new(n, vec![ints(&r)])?,
            m: 1,
            projector: Some(Projector::Ray {
                direction: r.iter().map(|&v| v as f64).collect(),
            }),
            note: "boundary ray; every nonzero boundary point spans an extreme ray".to_string(),
        });
    }
    faces.push(CatalogFace {
        label: "origin".to_string(),
        z: vec![S::zero(); n],
        span: Subspace::trivial(n),
        m: 2,
        projector: Some(Projector::Origin),
        note: "zero face".to_string(),
    });
    Ok(Fixture {
        name: format!("lorentz:{n}"),
        kind: FixtureKind::Lorentz { n },
        cone,
        projector: Some(Projector::Lorentz),
        metric: Metric::euclidean(n),
        faces,
    })
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, n, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out.into_iter()
        .map(|perm| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            (perm, inversions % 2 == 1)
        })
        .collect()
}

/// Symmetric `n x n` matrix (entries as symbols) encoded as a vector.
fn sym_vector<S: Scalar>(n: usize, entries: &[(usize, usize, i64)]) -> Vec<S> {
    let mut v = vec![S::zero(); projection::sym_dim(n)];
    for &(i, j, val) in entries {
        v[projection::sym_index(n, i, j)] = S::from_i64(val);
    }
    v
}

/// Determinant of a symmetric matrix in the encoding of
/// [`projection::sym_index`], direction the identity.
pub fn psd<S: Scalar>(n: usize) -> Result<Fixture<S>> {
    if n == 0 || n > PSD_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "psd needs 1 <= n <= {PSD_MAX_N}"
        )));
    }
    let dim = projection::sym_dim(n);
    let terms = permutations(n).into_iter().map(|(perm, odd)| {
        let mut exp = vec![0u32; dim];
        for (i, &j) in perm.iter().enumerate() {
            exp[projection::sym_index(n, i, j)] += 1;
        }
        (exp, if odd { -S::one() } else { S::one() })
    });
    let p = Polynomial::new(dim, n as u32, terms)?;
    let identity = sym_vector(n, &(0..n).map(|i| (i, i, 1)).collect::<Vec<_>>());
    let cone = HyperbolicityCone::known(p, identity)?;
    let mut faces = Vec::new();
    for r in (0..=n).rev() {
        let z = sym_vector(n, &(0..r).map(|i| (i, i, 1)).collect::<Vec<_>>());
        let mut coords: Vec<usize> = (0..r).collect();
        for i in 0..r {
            for j in i + 1..r {
                coords.push(projection::sym_index(n, i, j));
            }
        }
        coords.sort_unstable();
        faces.push(CatalogFace {
            label: format!("block{r}"),
            z,
            span: Subspace::coordinate(dim, &coords),
            m: n - r,
            projector: Some(Projector::PsdFace {
                n,
                range: (0..r).map(|i| unit::<f64>(n, i)).collect(),
            }),
            note: format!("matrices supported on the leading {r}x{r} block; m = n - rank"),
        });
    }
    if n >= 3 {
        // Range spanned by a = (1, 1, 0, ...) and b = e_3.
        let aa = sym_vector::<S>(n, &[(0, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let ab = sym_vector::<S>(n, &[(0, 2, 1), (1, 2, 1)]);
        let bb = sym_vector::<S>(n, &[(2, 2, 1)]);
        let z = sym_vector::<S>(n, &[(0, 0, 1), (1, 1, 1), (0, 1, 1), (2, 2, 1)]);
        let s = libm::sqrt(0.5);
        let mut a_unit = vec![0.0; n];
        a_unit[0] = s;
        a_unit[1] = s;
        faces.push(CatalogFace {
            label: "rotated2".to_string(),
            z,
            span: Subspace::new(dim, vec![aa, ab, bb])?,
            m: n - 2,
            projector: Some(Projector::PsdFace {
                n,
                range: vec![a_unit, unit::<f64>(n, 2)],
            }),
            note: "matrices with range in span{(1,1,0,..), e_3}; m = n - rank".to_string(),
        });
    }
    Ok(Fixture {
        name: format!("psd:{n}"),
        kind: FixtureKind::Psd { n },
        cone,
        projector: Some(Projector::Psd { n }),
        metric: Metric::weighted(projection::sym_weights(n)),
        faces,
    })
}

/// Cone of the `m`-th derivative of the coordinate product along all-ones,
/// i.e. of `m!` times the elementary symmetric polynomial of degree `n - m`.
pub fn renegar_orthant<S: Scalar>(n: usize, m: usize) -> Result<Fixture<S>> {
    if n == 0 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "renegar-orthant needs 0 <= m < n, got n = {n}, m = {m}"
        )));
    }
    let base = orthant::<S>(n)?;
    let ones = vec![S::one(); n];
    let p = base.cone.polynomial().directional_derivative(&ones, m)?;
    let cone = HyperbolicityCone::known(p, ones.clone())?;
    let mut faces = vec![CatalogFace {
        label: "full".to_string(),
        z: ones,
        span: Subspace::identity(n),
        m: 0,
        projector: None,
        note: "the cone itself".to_string(),
    }];
    if m == 0 {
        faces = base.faces;
    } else if n == 3 && m == 1 {
        let r = ints::<S>(&[-1, 2, 2]);
        faces.push(CatalogFace {
            label: "ray[-1, 2, 2]".to_string(),
            z: r.clone(),
            span: Subspace::new(3, vec![r])?,
            m: 1,
            projector: Some(Projector::Ray {
                direction: vec![-1.0, 2.0, 2.0],
            }),
            note: "boundary ray of a round cone".to_string(),
        });
    }
    if m > 0 {
        faces.push(CatalogFace {
            label: "origin".to_string(),
            z: vec![S::zero(); n],
            span: Subspace::trivial(n),
            m: n - m,
            projector: Some(Projector::Origin),
            note: "zero face".to_string(),
        });
    }
    Ok(Fixture {
        name: format!("renegar-orthant:{n}:{m}"),
        kind: FixtureKind::RenegarOrthant { n, m },
        cone,
        projector: if m == 0 {
            Some(Projector::Orthant)
        } else {
            None
        },
        metric: Metric::euclidean(n),
        faces,
    })
}

/// Parses `orthant:N`, `lorentz:N`, `psd:N` or `renegar-orthant:N:M`.
pub fn by_name<S: Scalar>(name: &str) -> Result<Fixture<S>> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad fixture size in {name:?}")))
    };
    match parts.as_slice() {
        ["orthant", n] => orthant(num(n)?),
        ["lorentz", n] => lorentz(num(n)?),
        ["psd", n] => psd(num(n)?),
        ["renegar-orthant", n, m] => renegar_orthant(num(n)?, num(m)?),
        _ => Err(Error::InvalidArgument(format!("unknown fixture {name:?}"))),
    }
}

/// Names of the default catalog.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "orthant:3",
        "orthant:6",
        "lorentz:3",
        "lorentz:4",
        "psd:2",
        "psd:3",
        "renegar-orthant:3:1",
    ]
}
