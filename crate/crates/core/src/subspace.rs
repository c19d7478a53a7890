//! Linear subspaces given by a basis.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Relative residual below which a float point counts as lying in a subspace.
pub const FLOAT_MEMBERSHIP_TOL: f64 = 1e-9;

/// The span of a list of linearly independent vectors in `R^ambient_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn new(ambient_dim: usize, basis: Vec<Vec<S>>) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    actual: b.len(),
                });
            }
        }
        let rank = linalg::rank(&basis, ambient_dim);
        if rank < basis.len() {
            return Err(Error::DependentBasis {
                rank,
                count: basis.len(),
            });
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// The whole space with its standard basis.
    pub fn identity(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
        Subspace {
            ambient_dim: n,
            basis,
        }
    }

    /// The zero subspace `{0}`.
    pub fn trivial(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Vec::new(),
        }
    }

    /// Coordinate subspace spanned by the unit vectors in `indices`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let basis = indices
            .iter()
            .map(|&i| {
                (0..n)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
        Subspace {
            ambient_dim: n,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// `B u`.
    pub fn point(&self, coords: &[S]) -> Result<Vec<S>> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: coords.len(),
            });
        }
        let mut x = alloc::vec![S::zero(); self.ambient_dim];
        for (u, b) in coords.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi = xi.clone() + u.clone() * bi.clone();
            }
        }
        Ok(x)
    }

    /// Coordinates of `x` in the basis, or `NotInSubspace` when `x` is not in
    /// the span (exactly, or up to a relative residual in float mode).
    pub fn coordinates(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                actual: x.len(),
            });
        }
        let u = linalg::solve_in_span(&self.basis, x);
        let back = self.point(&u)?;
        let residual: Vec<S> = back
            .iter()
            .zip(x)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        let residual_norm = linalg::norm(&residual.iter().map(|v| v.to_f64()).collect::<Vec<_>>());
        let ok = if S::EXACT {
            residual.iter().all(|v| v.is_zero())
        } else {
            let scale = 1.0 + linalg::norm(&x.iter().map(|v| v.to_f64()).collect::<Vec<_>>());
            residual_norm <= FLOAT_MEMBERSHIP_TOL * scale
        };
        if ok {
            Ok(u)
        } else {
            Err(Error::NotInSubspace {
                residual: residual_norm,
            })
        }
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.coordinates(x).is_ok()
    }

    /// `self ∩ other`, from the null space of `[B1, -B2]`.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                actual: other.ambient_dim,
            });
        }
        let k1 = self.dim();
        let k2 = other.dim();
        let rows: Vec<Vec<S>> = (0..self.ambient_dim)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| b[i].clone())
                    .chain(other.basis.iter().map(|b| -b[i].clone()))
                    .collect()
            })
            .collect();
        let null = linalg::nullspace(&rows, k1 + k2);
        let basis = null
            .iter()
            .map(|v| self.point(&v[..k1]))
            .collect::<Result<Vec<_>>>()?;
        Subspace::new(self.ambient_dim, basis)
    }

    /// Whether the two subspaces are equal as sets.
    pub fn same_span(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.ambient_dim == other.ambient_dim
            && other.basis.iter().all(|b| self.contains(b))
    }

    /// Orthonormal basis in `f64` with respect to `<x, y> = sum_i w_i x_i y_i`.
    pub fn orthonormal_basis(&self, weights: &[f64]) -> Vec<Vec<f64>> {
        let sqrt_w: Vec<f64> = weights.iter().map(|w| libm::sqrt(*w)).collect();
        let scaled: Vec<Vec<f64>> = self
            .basis
            .iter()
            .map(|b| b.iter().zip(&sqrt_w).map(|(v, s)| v.to_f64() * s).collect())
            .collect();
        linalg::orthonormalize(&scaled)
            .into_iter()
            .map(|q| q.iter().zip(&sqrt_w).map(|(v, s)| v / s).collect())
            .collect()
    }

    pub fn to_float(&self) -> Subspace<f64> {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|b| b.iter().map(|v| v.to_f64()).collect())
                .collect(),
        }
    }
}
