//! Hyperbolicity cones `Λ(p, e)`: validation, eigenvalues, membership,
//! multiplicity and derivative relaxations.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polynomial::Polynomial;
use crate::sampling;
use crate::scalar::Scalar;
use crate::univariate::{self, RealRootedness, RootList, UnivariatePoly};

/// Numerical thresholds used by float-mode decisions. Exact mode ignores all
/// of them except where a float computation is unavoidable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Real-rootedness tolerance on imaginary parts.
    pub root: f64,
    /// Relative threshold below which a derivative value counts as zero.
    pub zero: f64,
    /// Values within `band * zero` of the threshold are ambiguous.
    pub band: f64,
    /// Relative half-width of the ambiguous band around a zero eigenvalue.
    pub eig_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: univariate::DEFAULT_TOL,
            zero: 1e-10,
            band: 1e3,
            eig_band: 1e-7,
        }
    }
}

/// How hyperbolicity is checked when building a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperbolicityCheck {
    Skip,
    Randomized { samples: usize, seed: u64 },
}

/// What is known about hyperbolicity of the cone's polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    Unchecked,
    /// Hyperbolic by construction (fixtures, derivatives of certified cones).
    ValidatedExact,
    ValidatedProbabilistic {
        samples: usize,
        seed: u64,
    },
}

/// Three-valued membership used when counting disagreements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Too close to a decision threshold to call in float arithmetic.
    Band,
}

impl Membership {
    /// Whether two verdicts contradict each other (bands never do).
    pub fn conflicts(self, other: Membership) -> bool {
        matches!(
            (self, other),
            (Membership::Inside, Membership::Outside) | (Membership::Outside, Membership::Inside)
        )
    }
}

/// `D_e^k p(x)` split at the multiplicity `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicitySignature<S> {
    pub m: usize,
    pub zero_block: Vec<S>,
    pub positive_block: Vec<S>,
}

/// Outcome of comparing membership under two hyperbolic directions.
#[derive(Clone, Debug, PartialEq)]
pub struct GardingReport {
    pub agree: bool,
    pub checked: usize,
    pub band: usize,
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SignClass {
    Zero,
    Positive,
    Negative,
    FuzzyPositive,
    FuzzyNegative,
}

/// The hyperbolicity cone of `D_e^order p0` with respect to `e`, where `p0` is
/// the polynomial the cone was built from. Derivative cones share the cached
/// derivative tower of `p0`.
#[derive(Clone, Debug)]
pub struct HyperbolicityCone<S> {
    direction: Vec<S>,
    tower: Arc<[Polynomial<S>]>,
    order: usize,
    tol: Tolerances,
    certification: Certification,
}

impl<S: Scalar> HyperbolicityCone<S> {
    pub fn new(p: Polynomial<S>, e: Vec<S>, check: HyperbolicityCheck) -> Result<Self> {
        Self::with_tolerances(p, e, check, Tolerances::default())
    }

    pub fn with_tolerances(
        p: Polynomial<S>,
        e: Vec<S>,
        check: HyperbolicityCheck,
        tol: Tolerances,
    ) -> Result<Self> {
        if e.len() != p.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: p.num_vars(),
                actual: e.len(),
            });
        }
        let at_e = p.evaluate(&e)?;
        if at_e <= S::zero() {
            return Err(Error::NonPositiveAtDirection {
                value: at_e.to_f64(),
            });
        }
        let tower = p.derivative_tower(&e)?;
        let mut cone = HyperbolicityCone {
            direction: e,
            tower: Arc::from(tower),
            order: 0,
            tol,
            certification: Certification::Unchecked,
        };
        if let HyperbolicityCheck::Randomized { samples, seed } = check {
            cone.validate(samples, seed)?;
            cone.certification = Certification::ValidatedProbabilistic { samples, seed };
        }
        Ok(cone)
    }

    /// A cone whose polynomial is hyperbolic by construction; no lines are
    /// sampled.
    pub fn known(p: Polynomial<S>, e: Vec<S>) -> Result<Self> {
        let mut cone = Self::new(p, e, HyperbolicityCheck::Skip)?;
        cone.certification = Certification::ValidatedExact;
        Ok(cone)
    }

    pub(crate) fn set_certification(&mut self, certification: Certification) {
        self.certification = certification;
    }

    /// Checks real-rootedness of `t -> p(te - x)` for every unit vector `x`
    /// and then `samples` Gaussian `x`.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<()> {
        let n = self.num_vars();
        let units = (0..n).map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        });
        let gaussians = (0..samples as u64).map(|i| sampling::gaussian_sample(seed, i, n));
        for xf in units.chain(gaussians) {
            let x: Vec<S> = xf.iter().map(|v| S::from_sample(*v)).collect();
            let u = self.line_polynomial(&x)?;
            match u.all_roots_real(self.tol.root)? {
                RealRootedness::RealRooted => {}
                RealRootedness::NotRealRooted => {
                    return Err(Error::NotHyperbolic {
                        witness: x.iter().map(|v| v.to_f64()).collect(),
                    })
                }
                RealRootedness::Inconclusive => {
                    return Err(Error::InconclusiveRealness {
                        witness: x.iter().map(|v| v.to_f64()).collect(),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[S] {
        &self.direction
    }

    /// Degree of this cone's polynomial.
    pub fn degree(&self) -> usize {
        self.tower.len() - 1 - self.order
    }

    /// Derivative order relative to the polynomial the tower was built from.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn polynomial(&self) -> &Polynomial<S> {
        &self.tower[self.order]
    }

    /// `D_e^k` of this cone's polynomial, `k <= degree`.
    pub fn derivative(&self, k: usize) -> Result<&Polynomial<S>> {
        if k > self.degree() {
            return Err(Error::OrderTooLarge {
                order: k,
                degree: self.degree(),
            });
        }
        Ok(&self.tower[self.order + k])
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn set_tolerances(&mut self, tol: Tolerances) {
        self.tol = tol;
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    fn check_dim(&self, x: &[S]) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `D_e^k p(x)` for `k = 0..=degree`.
    pub fn derivative_values(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_dim(x)?;
        self.tower[self.order..]
            .iter()
            .map(|d| d.evaluate(x))
            .collect()
    }

    /// Coefficients of `t -> p(te - x)`, from `a_k = D_e^k p(x) / k!` and
    /// `p(te - x) = (-1)^d p(x - te)`.
    pub fn line_polynomial(&self, x: &[S]) -> Result<UnivariatePoly<S>> {
        let values = self.derivative_values(x)?;
        Ok(Self::line_from_values(&values))
    }

    fn line_from_values(values: &[S]) -> UnivariatePoly<S> {
        let d = values.len() - 1;
        let coeffs = values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let a = v.clone() / S::factorial(k);
                if (d + k) % 2 == 1 {
                    -a
                } else {
                    a
                }
            })
            .collect();
        UnivariatePoly::new(coeffs)
    }

    /// Hyperbolic eigenvalues: the roots of `t -> p(te - x)`, ascending.
    /// In float mode a leading block of derivative values is set to zero
    /// first when it is classified as zero and the root cluster it describes
    /// has relative radius at most `tol.root^(1/m)` for multiplicity `m`, the
    /// displacement a perturbation of size `tol.root` causes, so multiple zero
    /// eigenvalues are not smeared into complex pairs.
    pub fn eigenvalues(&self, x: &[S]) -> Result<RootList<S>> {
        if self.degree() == 0 {
            self.check_dim(x)?;
            return Ok(RootList {
                roots: Vec::new(),
                multiplicities: Vec::new(),
                exact: Vec::new(),
            });
        }
        let mut values = self.derivative_values(x)?;
        if !S::EXACT {
            let (classes, _) = self.classify_values(x)?;
            let zeros = classes
                .iter()
                .take_while(|c| **c == SignClass::Zero)
                .count();
            let line = Self::line_from_values(&values);
            let zeros = (1..=zeros)
                .rev()
                .find(|&m| line.zero_cluster_radius(m) <= libm::pow(self.tol.root, 1.0 / m as f64))
                .unwrap_or(0);
            for v in values.iter_mut().take(zeros) {
                *v = S::zero();
            }
            if zeros == 0 {
                let first = Self::line_from_values(&values).real_roots(self.tol.root)?;
                return Ok(self.recentred(x, first));
            }
        }
        Self::line_from_values(&values).real_roots(self.tol.root)
    }

    /// Roots of a clustered line polynomial far from the origin are poorly
    /// conditioned in the monomial basis, so the eigenvalues are recomputed at
    /// `x - c e` for their mean `c` and shifted back. Falls back to `first`
    /// when the second pass does not give the same number of roots.
    fn recentred(&self, x: &[S], first: RootList<S>) -> RootList<S> {
        let total: usize = first.multiplicities.iter().sum();
        let sum: f64 = first
            .roots
            .iter()
            .zip(&first.multiplicities)
            .map(|(r, m)| r.to_f64() * *m as f64)
            .sum();
        let Some(c) = S::from_f64(sum / total as f64) else {
            return first;
        };
        if c.is_zero() {
            return first;
        }
        let moved: Vec<S> = x
            .iter()
            .zip(&self.direction)
            .map(|(xi, ei)| xi.clone() - c.clone() * ei.clone())
            .collect();
        let second = self
            .derivative_values(&moved)
            .and_then(|v| Self::line_from_values(&v).real_roots(self.tol.root));
        match second {
            Ok(mut list) if list.multiplicities.iter().sum::<usize>() == total => {
                for r in &mut list.roots {
                    *r = r.clone() + c.clone();
                }
                list
            }
            _ => first,
        }
    }

    /// Sign classes of `D_e^k p(x)` for `k = 0..=degree`, together with the
    /// values at the point actually evaluated (`x / |x|` in float mode).
    ///
    /// Float thresholds follow `tol.zero * max_j |D^j p0(x)| * (1 + |x|^(d0 - j))`
    /// over the full tower of `p0`, so that derivative cones of one tower use
    /// identical thresholds and relaxation membership is monotone.
    fn classify_values(&self, x: &[S]) -> Result<(Vec<SignClass>, Vec<S>)> {
        self.check_dim(x)?;
        if S::EXACT {
            let values = self.derivative_values(x)?;
            let classes = values
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        SignClass::Zero
                    } else if *v > S::zero() {
                        SignClass::Positive
                    } else {
                        SignClass::Negative
                    }
                })
                .collect();
            return Ok((classes, values));
        }
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
        let norm = linalg::norm(&xf);
        let xhat: Vec<S> = if norm > 0.0 {
            xf.iter()
                .map(|v| S::from_f64(v / norm).unwrap_or_else(S::zero))
                .collect()
        } else {
            x.to_vec()
        };
        let hat_norm = if norm > 0.0 { 1.0 } else { 0.0 };
        let all: Vec<S> = self
            .tower
            .iter()
            .map(|d| d.evaluate(&xhat))
            .collect::<Result<_>>()?;
        let d0 = self.tower.len() - 1;
        let scale = all.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        let classes = (self.order..=d0)
            .map(|j| {
                let v = all[j].to_f64();
                let thr = self.tol.zero * scale * (1.0 + libm::pow(hat_norm, (d0 - j) as f64));
                if v.abs() <= thr {
                    SignClass::Zero
                } else if v > self.tol.band * thr {
                    SignClass::Positive
                } else if v < -self.tol.band * thr {
                    SignClass::Negative
                } else if v > 0.0 {
                    SignClass::FuzzyPositive
                } else {
                    SignClass::FuzzyNegative
                }
            })
            .collect();
        Ok((classes, all[self.order..].to_vec()))
    }

    /// `D_e^k p(x) >= 0` for `k < degree` (up to the scaled tolerance).
    pub fn member(&self, x: &[S]) -> Result<bool> {
        let (classes, _) = self.classify_values(x)?;
        let d = self.degree();
        Ok(classes[..d]
            .iter()
            .all(|c| !matches!(c, SignClass::Negative | SignClass::FuzzyNegative)))
    }

    /// `D_e^k p(x) > 0` for `k < degree` (beyond the scaled tolerance).
    pub fn in_interior(&self, x: &[S]) -> Result<bool> {
        let (classes, _) = self.classify_values(x)?;
        let d = self.degree();
        Ok(classes[..d]
            .iter()
            .all(|c| matches!(c, SignClass::Positive | SignClass::FuzzyPositive)))
    }

    /// Sign-condition membership, reporting `Band` when a derivative value
    /// sits between the zero threshold and `band` times it.
    pub fn classify(&self, x: &[S]) -> Result<Membership> {
        let (classes, _) = self.classify_values(x)?;
        let d = self.degree();
        let classes = &classes[..d];
        if classes.contains(&SignClass::Negative) {
            Ok(Membership::Outside)
        } else if classes
            .iter()
            .any(|c| matches!(c, SignClass::FuzzyPositive | SignClass::FuzzyNegative))
        {
            Ok(Membership::Band)
        } else {
            Ok(Membership::Inside)
        }
    }

    /// Membership decided by the smallest hyperbolic eigenvalue instead of
    /// the derivative signs.
    pub fn member_by_eigenvalues(&self, x: &[S]) -> Result<Membership> {
        if self.degree() == 0 {
            return Ok(Membership::Inside);
        }
        let (classes, values) = self.classify_values(x)?;
        let zeros = classes
            .iter()
            .take_while(|c| **c == SignClass::Zero)
            .count();
        let stripped: Vec<S> = values
            .iter()
            .enumerate()
            .map(|(k, v)| if k < zeros { S::zero() } else { v.clone() })
            .collect();
        let line = Self::line_from_values(&stripped);
        let reduced = UnivariatePoly::new(line.coeffs()[zeros..].to_vec());
        if S::EXACT {
            return Ok(if reduced.count_negative_roots()? == 0 {
                Membership::Inside
            } else {
                Membership::Outside
            });
        }
        let coeffs: Vec<f64> = reduced.coeffs().iter().map(|c| c.to_f64()).collect();
        let clusters = univariate::float::cluster(univariate::float::complex_roots(&coeffs, 0.0)?);
        let Some(min) = clusters.iter().map(|c| c.re).reduce(f64::min) else {
            return Ok(Membership::Inside);
        };
        let scale = 1.0
            + clusters
                .iter()
                .map(|c| libm::hypot(c.re, c.im))
                .fold(0.0, f64::max);
        let band = self.tol.eig_band * scale;
        Ok(if min >= band {
            Membership::Inside
        } else if min <= -band {
            Membership::Outside
        } else {
            Membership::Band
        })
    }

    /// Multiplicity of `x`: the number of leading vanishing `D_e^k p(x)`.
    /// For members the remaining values must be strictly positive.
    pub fn multiplicity(&self, x: &[S]) -> Result<MultiplicitySignature<S>> {
        let (classes, _) = self.classify_values(x)?;
        let m = classes
            .iter()
            .position(|c| *c != SignClass::Zero)
            .ok_or_else(|| Error::NumericalInconsistency("every derivative vanishes".into()))?;
        let d = self.degree();
        let is_member = classes[..d]
            .iter()
            .all(|c| !matches!(c, SignClass::Negative | SignClass::FuzzyNegative));
        if is_member
            && !classes[m..]
                .iter()
                .all(|c| matches!(c, SignClass::Positive | SignClass::FuzzyPositive))
        {
            return Err(Error::NumericalInconsistency(alloc::format!(
                "derivative signs past order {m} are not all positive at a member"
            )));
        }
        let mut values = self.derivative_values(x)?;
        if S::EXACT {
            debug_assert!(values[..m].iter().all(|v| v.is_zero()));
        }
        let positive_block = values.split_off(m);
        Ok(MultiplicitySignature {
            m,
            zero_block: values,
            positive_block,
        })
    }

    /// The Renegar derivative relaxation `Λ^(m)`: the cone of `D_e^m p`.
    /// `m = degree` yields the whole space.
    pub fn derivative_cone(&self, m: usize) -> Result<Self> {
        if m > self.degree() {
            return Err(Error::OrderTooLarge {
                order: m,
                degree: self.degree(),
            });
        }
        let mut cone = self.clone();
        cone.order += m;
        Ok(cone)
    }

    /// The same polynomial with another direction `z` (no validation).
    pub fn with_direction(&self, z: Vec<S>) -> Result<Self> {
        let mut cone = HyperbolicityCone::with_tolerances(
            self.polynomial().clone(),
            z,
            HyperbolicityCheck::Skip,
            self.tol,
        )?;
        cone.certification = self.certification;
        Ok(cone)
    }

    /// Rebuilds the cone from direction `z` (validated on `samples` lines) and
    /// compares membership with this cone on `samples` Gaussian points.
    pub fn garding_invariance_check(
        &self,
        z: &[S],
        samples: usize,
        seed: u64,
    ) -> Result<GardingReport> {
        if !self.in_interior(z)? {
            return Err(Error::NotInterior);
        }
        let other = HyperbolicityCone::with_tolerances(
            self.polynomial().clone(),
            z.to_vec(),
            HyperbolicityCheck::Randomized { samples, seed },
            self.tol,
        )?;
        let point_seed = sampling::derive_seed(seed, 1);
        let mut band = 0;
        for i in 0..samples as u64 {
            let xf = sampling::gaussian_sample(point_seed, i, self.num_vars());
            let x: Vec<S> = xf.iter().map(|v| S::from_sample(*v)).collect();
            let a = self.classify(&x)?;
            let b = other.classify(&x)?;
            if a.conflicts(b) {
                return Ok(GardingReport {
                    agree: false,
                    checked: i as usize + 1,
                    band,
                    witness: Some(x.iter().map(|v| v.to_f64()).collect()),
                });
            }
            if a == Membership::Band || b == Membership::Band {
                band += 1;
            }
        }
        Ok(GardingReport {
            agree: true,
            checked: samples,
            band,
            witness: None,
        })
    }

    pub fn to_float(&self) -> HyperbolicityCone<f64> {
        HyperbolicityCone {
            direction: self.direction.iter().map(|v| v.to_f64()).collect(),
            tower: self
                .tower
                .iter()
                .map(|p| p.to_float())
                .collect::<Vec<_>>()
                .into(),
            order: self.order,
            tol: self.tol,
            certification: self.certification,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    fn orthant3() -> HyperbolicityCone<Rational> {
        let p = Polynomial::new(3, 3, [(vec![1, 1, 1], Rational::from_i64(1))]).unwrap();
        HyperbolicityCone::new(p, rv(&[1, 1, 1]), HyperbolicityCheck::Skip).unwrap()
    }

    fn lorentz3<S: Scalar>(e: &[i64]) -> Result<HyperbolicityCone<S>> {
        let p = Polynomial::new(
            3,
            2,
            [
                (vec![2, 0, 0], S::from_i64(1)),
                (vec![0, 2, 0], S::from_i64(-1)),
                (vec![0, 0, 2], S::from_i64(-1)),
            ],
        )
        .unwrap();
        let e = e.iter().map(|&v| S::from_i64(v)).collect();
        HyperbolicityCone::new(p, e, HyperbolicityCheck::Skip)
    }

    #[test]
    fn new_cone_examples() {
        let p = Polynomial::new(3, 3, [(vec![1, 1, 1], Rational::from_i64(1))]).unwrap();
        let k = HyperbolicityCone::new(
            p,
            rv(&[1, 1, 1]),
            HyperbolicityCheck::Randomized {
                samples: 200,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(
            k.certification(),
            Certification::ValidatedProbabilistic {
                samples: 200,
                seed: 0
            }
        );
        assert_eq!(
            lorentz3::<Rational>(&[0, 1, 0]).unwrap_err(),
            Error::NonPositiveAtDirection { value: -1.0 }
        );
        let circle = Polynomial::new(
            2,
            2,
            [
                (vec![2, 0], Rational::from_i64(1)),
                (vec![0, 2], Rational::from_i64(1)),
            ],
        )
        .unwrap();
        let err = HyperbolicityCone::new(
            circle,
            rv(&[1, 0]),
            HyperbolicityCheck::Randomized {
                samples: 10,
                seed: 0,
            },
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotHyperbolic {
                witness: vec![0.0, 1.0]
            }
        );
    }

    #[test]
    fn eigenvalue_examples() {
        let k = orthant3();
        let eig = k.eigenvalues(&rv(&[3, 1, 2])).unwrap();
        assert_eq!(eig.roots, rv(&[1, 2, 3]));
        let l = lorentz3::<Rational>(&[1, 0, 0]).unwrap();
        let eig = l.eigenvalues(&rv(&[2, 3, 4])).unwrap();
        assert_eq!(eig.roots, rv(&[-3, 7]));
        let lf = lorentz3::<f64>(&[1, 0, 0]).unwrap();
        let eig = lf.eigenvalues(&[2.0, 3.0, 4.0]).unwrap();
        assert!((eig.roots[0] + 3.0).abs() < 1e-12 && (eig.roots[1] - 7.0).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let k = orthant3();
        assert!(k.member(&rv(&[1, 2, 3])).unwrap());
        assert!(k.in_interior(&rv(&[1, 2, 3])).unwrap());
        assert!(k.member(&rv(&[1, 0, 3])).unwrap());
        assert!(!k.in_interior(&rv(&[1, 0, 3])).unwrap());
        let l = lorentz3::<Rational>(&[1, 0, 0]).unwrap();
        assert!(!l.member(&rv(&[1, 2, 0])).unwrap());
        assert_eq!(
            l.member_by_eigenvalues(&rv(&[1, 2, 0])).unwrap(),
            Membership::Outside
        );
        assert_eq!(
            l.member_by_eigenvalues(&rv(&[1, 1, 0])).unwrap(),
            Membership::Inside
        );
        let lf = lorentz3::<f64>(&[1, 0, 0]).unwrap();
        assert!(!lf.member(&[1.0, 2.0, 0.0]).unwrap());
        assert!(lf.member(&[1.0, 1.0, 0.0]).unwrap());
        assert_eq!(lf.classify(&[1.0, 1.0, 0.0]).unwrap(), Membership::Inside);
        assert_eq!(
            lf.member_by_eigenvalues(&[1.0, 1.0, 0.0]).unwrap(),
            Membership::Inside
        );
    }

    #[test]
    fn multiplicity_examples() {
        let k = orthant3();
        let sig = k.multiplicity(&rv(&[0, 0, 5])).unwrap();
        assert_eq!(sig.m, 2);
        assert!(sig.zero_block.iter().all(|v| v.is_zero()));
        assert!(sig
            .positive_block
            .iter()
            .all(|v| *v > Rational::from_i64(0)));
        let l = lorentz3::<Rational>(&[1, 0, 0]).unwrap();
        let sig = l.multiplicity(&rv(&[1, 1, 0])).unwrap();
        assert_eq!(sig.m, 1);
        assert_eq!(sig.positive_block, rv(&[2, 2]));
        assert_eq!(k.multiplicity(&rv(&[1, 1, 1])).unwrap().m, 0);
        assert_eq!(k.multiplicity(&rv(&[0, 0, 0])).unwrap().m, 3);
    }

    #[test]
    fn derivative_cone_examples() {
        let k = orthant3();
        let k1 = k.derivative_cone(1).unwrap();
        let e2 = Polynomial::new(
            3,
            2,
            [
                (vec![1, 1, 0], Rational::from_i64(1)),
                (vec![1, 0, 1], Rational::from_i64(1)),
                (vec![0, 1, 1], Rational::from_i64(1)),
            ],
        )
        .unwrap();
        assert_eq!(k1.polynomial(), &e2);
        assert!(k1.member(&rv(&[-1, 2, 2])).unwrap());
        assert!(!k.member(&rv(&[-1, 2, 2])).unwrap());
        let whole = k.derivative_cone(3).unwrap();
        assert!(whole.member(&rv(&[-5, -5, -5])).unwrap());
        assert_eq!(
            whole.polynomial().evaluate(&rv(&[9, 9, 9])).unwrap(),
            Rational::from_i64(6)
        );
        assert!(k.derivative_cone(4).is_err());
    }

    #[test]
    fn garding_examples() {
        let k = orthant3();
        assert!(
            k.garding_invariance_check(&rv(&[1, 2, 3]), 100, 0)
                .unwrap()
                .agree
        );
        let l = lorentz3::<f64>(&[1, 0, 0]).unwrap();
        assert!(
            l.garding_invariance_check(&[2.0, 1.0, 0.0], 300, 1)
                .unwrap()
                .agree
        );
        assert_eq!(
            k.garding_invariance_check(&rv(&[1, 0, 3]), 10, 0)
                .unwrap_err(),
            Error::NotInterior
        );
    }

    #[test]
    fn float_threshold_is_scale_free() {
        let l = lorentz3::<f64>(&[1, 0, 0]).unwrap();
        for s in [1e-6, 1.0, 1e6] {
            let x = [s, s, 0.0];
            assert!(l.member(&x).unwrap());
            assert!(!l.in_interior(&x).unwrap());
            assert_eq!(l.multiplicity(&x).unwrap().m, 1);
        }
    }
}
