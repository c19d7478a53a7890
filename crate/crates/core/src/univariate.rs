//! Univariate polynomials arising as line restrictions: real-rootedness,
//! real roots with multiplicities, and the order of vanishing at zero.
//!
//! Exact coefficients go through square-free (Yun) decomposition and Sturm
//! sequences; float coefficients go through companion-matrix eigenvalues with
//! root clustering.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{simplest_between, Rational, Scalar};

/// Default relative tolerance for imaginary parts and coefficient vanishing.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative radius within which float roots are merged into one multiple root.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Imaginary-part ratios in `(tol, GRAY_BAND_FACTOR * tol]` are inconclusive.
pub const GRAY_BAND_FACTOR: f64 = 1e3;

/// Exact roots are refined until the isolating interval is narrower than
/// `2^-REFINE_BITS * max(1, |root|)`.
const REFINE_BITS: u32 = 64;

/// Coefficients `a_0, ..., a_d` in ascending powers of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePoly<S> {
    coeffs: Vec<S>,
}

/// Outcome of a real-rootedness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealRootedness {
    RealRooted,
    NotRealRooted,
    /// Float mode only: an imaginary part fell inside the gray band.
    Inconclusive,
}

/// Distinct real roots in ascending order with their multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RootList<S> {
    pub roots: Vec<S>,
    pub multiplicities: Vec<usize>,
    /// Whether each root is known exactly (rational root found in exact mode).
    pub exact: Vec<bool>,
}

impl<S: Scalar> RootList<S> {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn min(&self) -> Option<&S> {
        self.roots.first()
    }

    /// Roots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<S> {
        self.roots
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(r, &m)| core::iter::repeat_n(r.clone(), m))
            .collect()
    }

    /// Multiplicity of `0` as a root (zero if absent).
    pub fn multiplicity_of_zero(&self) -> usize {
        self.roots
            .iter()
            .zip(&self.multiplicities)
            .find(|(r, _)| r.is_zero())
            .map_or(0, |(_, &m)| m)
    }
}

impl<S: Scalar> UnivariatePoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        UnivariatePoly { coeffs }
    }

    /// `prod_i (t - r_i)`.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut coeffs = vec![S::one()];
        for r in roots {
            let mut next = vec![S::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - c.clone() * r.clone();
            }
            coeffs = next;
        }
        UnivariatePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn evaluate(&self, t: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `t -> u(-t)`.
    pub fn reflect(&self) -> Self {
        UnivariatePoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        UnivariatePoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    fn nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    fn coefficient_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    fn to_rational_coeffs(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| c.to_rational().expect("finite coefficient"))
            .collect()
    }

    /// Whether all complex zeros are real. Exact coefficients get a certified
    /// verdict; float coefficients may come back inconclusive.
    pub fn all_roots_real(&self, tol: f64) -> Result<RealRootedness> {
        self.nonzero()?;
        if S::EXACT {
            Ok(exact::all_roots_real(&self.to_rational_coeffs()))
        } else {
            let coeffs: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64()).collect();
            Ok(float::analyse(&coeffs, tol)?.verdict)
        }
    }

    /// Real roots with multiplicities. Fails unless real-rootedness is
    /// certified.
    pub fn real_roots(&self, tol: f64) -> Result<RootList<S>> {
        self.nonzero()?;
        if S::EXACT {
            let coeffs = self.to_rational_coeffs();
            if exact::all_roots_real(&coeffs) != RealRootedness::RealRooted {
                return Err(Error::NotRealRooted);
            }
            let roots = exact::real_roots(&coeffs);
            Ok(RootList {
                roots: roots.iter().map(|r| S::from_rational(&r.value)).collect(),
                multiplicities: roots.iter().map(|r| r.multiplicity).collect(),
                exact: roots.iter().map(|r| r.exact).collect(),
            })
        } else {
            let coeffs: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64()).collect();
            let analysis = float::analyse(&coeffs, tol)?;
            if analysis.verdict != RealRootedness::RealRooted {
                return Err(Error::NotRealRooted);
            }
            let n = analysis.clusters.len();
            Ok(RootList {
                roots: analysis
                    .clusters
                    .iter()
                    .map(|c| S::from_f64(c.re).unwrap_or_else(S::zero))
                    .collect(),
                multiplicities: analysis.clusters.iter().map(|c| c.size).collect(),
                exact: vec![false; n],
            })
        }
    }

    /// Radius, relative to the root scale, of the `m` roots nearest zero as
    /// implied by the `m` lowest coefficients (infinite if `a_m = 0`).
    pub fn zero_cluster_radius(&self, m: usize) -> f64 {
        let coeffs: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64()).collect();
        let Some(last) = coeffs.iter().rposition(|c| *c != 0.0) else {
            return 0.0;
        };
        if m > last {
            return f64::INFINITY;
        }
        let (scaled, _) = float::scale_roots(&coeffs[..=last]);
        if scaled[m] == 0.0 {
            return f64::INFINITY;
        }
        float::zero_cluster_radius(&scaled, m)
    }

    /// Multiplicity of `0` as a root: the index of the first coefficient that
    /// is nonzero (exact) or exceeds `tol * max_j |a_j|` (float).
    pub fn zero_multiplicity(&self, tol: f64) -> Result<usize> {
        self.nonzero()?;
        let scale = self.coefficient_scale();
        let idx = self
            .coeffs
            .iter()
            .position(|c| {
                if S::EXACT {
                    !c.is_zero()
                } else {
                    c.to_f64().abs() > tol * scale
                }
            })
            .expect("nonzero polynomial");
        Ok(idx)
    }

    /// Number of distinct strictly negative real roots. Exact coefficients
    /// only; float input is converted exactly before counting.
    pub fn count_negative_roots(&self) -> Result<usize> {
        self.nonzero()?;
        Ok(exact::count_negative_roots(&self.to_rational_coeffs()))
    }

    /// Checks that a vanishing coefficient forces every lower coefficient to
    /// vanish. Requires nonnegative coefficients, a positive leading
    /// coefficient, and certified real-rootedness.
    pub fn trailing_vanishing_holds(&self, tol: f64) -> Result<bool> {
        self.nonzero()?;
        let scale = self.coefficient_scale();
        let is_zero = |c: &S| {
            if S::EXACT {
                c.is_zero()
            } else {
                c.to_f64().abs() <= tol * scale
            }
        };
        let degree = self.degree().expect("nonzero polynomial");
        let leading = &self.coeffs[degree];
        let nonnegative = self.coeffs.iter().all(|c| {
            if S::EXACT {
                *c >= S::zero()
            } else {
                c.to_f64() >= -tol * scale
            }
        });
        if !nonnegative || *leading <= S::zero() {
            return Err(Error::InvalidArgument(
                "coefficients must be nonnegative with a positive leading term".into(),
            ));
        }
        if self.all_roots_real(tol)? != RealRootedness::RealRooted {
            return Err(Error::NotRealRooted);
        }
        for k in 0..degree {
            if is_zero(&self.coeffs[k]) && !self.coeffs[..k].iter().all(is_zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exact arithmetic over `Q[t]`.
pub(crate) mod exact {
    use super::*;

    pub(crate) struct ExactRoot {
        pub value: Rational,
        pub multiplicity: usize,
        pub exact: bool,
    }

    pub(crate) fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    fn degree(p: &[Rational]) -> usize {
        p.len().saturating_sub(1)
    }

    pub(crate) fn derivative(p: &[Rational]) -> Vec<Rational> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect()
    }

    /// Quotient and remainder of `a / b` (`b` trimmed and nonzero).
    pub(crate) fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = trim(a.to_vec());
        let db = degree(b);
        let lead = b[db].clone();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Rational::zero(); rem.len() - db];
        while !rem.is_empty() && rem.len() > db {
            let shift = rem.len() - 1 - db;
            let factor = rem.last().unwrap() / &lead;
            for (i, c) in b.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    fn monic(p: Vec<Rational>) -> Vec<Rational> {
        let p = trim(p);
        match p.last() {
            Some(lead) => {
                let lead = lead.clone();
                p.into_iter().map(|c| c / &lead).collect()
            }
            None => p,
        }
    }

    pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = r;
        }
        monic(x)
    }

    fn exact_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let (q, r) = divrem(a, b);
        debug_assert!(r.is_empty());
        q
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs with
    /// pairwise coprime square-free factors of positive degree.
    pub(crate) fn squarefree_decomposition(p: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
        let f = trim(p.to_vec());
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let df = derivative(&f);
        let a0 = gcd(&f, &df);
        let mut b = exact_div(&f, &a0);
        let c = exact_div(&df, &a0);
        let mut d = sub(&c, &derivative(&b));
        let mut i = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            let next_b = exact_div(&b, &a);
            let next_c = exact_div(&d, &a);
            d = sub(&next_c, &derivative(&next_b));
            if a.len() > 1 {
                out.push((a, i));
            }
            b = next_b;
            i += 1;
        }
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|k| {
                let x = a.get(k).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(k).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect();
        trim(out)
    }

    /// Integer polynomial with the same roots, for sign evaluation without
    /// rational normalisation.
    struct IntPoly(Vec<BigInt>);

    impl IntPoly {
        fn from_rational(p: &[Rational]) -> Self {
            let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            IntPoly(p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
        }

        /// Sign of the polynomial at `num / den` (`den > 0`).
        fn sign_at(&self, num: &BigInt, den: &BigInt) -> Sign {
            // Homogenised Horner: sum_k c_k num^k den^(n-k), n = degree.
            let mut acc = BigInt::zero();
            let mut den_power = BigInt::one();
            for c in self.0.iter().rev() {
                acc = acc * num + c * &den_power;
                den_power *= den;
            }
            acc.sign()
        }

        fn sign_at_rational(&self, x: &Rational) -> Sign {
            self.sign_at(x.numer(), x.denom())
        }

        fn leading_sign(&self) -> Sign {
            self.0
                .iter()
                .rev()
                .find(|c| !c.is_zero())
                .map_or(Sign::NoSign, |c| c.sign())
        }
    }

    struct SturmChain(Vec<IntPoly>);

    impl SturmChain {
        fn new(p: &[Rational]) -> Self {
            let mut chain = vec![trim(p.to_vec())];
            let mut next = trim(derivative(&chain[0]));
            while !next.is_empty() {
                let (_, r) = divrem(&chain[chain.len() - 1], &next);
                chain.push(next);
                next = r.into_iter().map(|c| -c).collect();
            }
            SturmChain(chain.iter().map(|p| IntPoly::from_rational(p)).collect())
        }

        fn variations(signs: impl Iterator<Item = Sign>) -> usize {
            let mut last = Sign::NoSign;
            let mut count = 0;
            for s in signs.filter(|s| *s != Sign::NoSign) {
                if last != Sign::NoSign && s != last {
                    count += 1;
                }
                last = s;
            }
            count
        }

        fn at(&self, x: &Rational) -> usize {
            Self::variations(self.0.iter().map(|p| p.sign_at_rational(x)))
        }

        fn at_pos_infinity(&self) -> usize {
            Self::variations(self.0.iter().map(|p| p.leading_sign()))
        }

        fn at_neg_infinity(&self) -> usize {
            Self::variations(self.0.iter().map(|p| {
                let s = p.leading_sign();
                if (p.0.len().saturating_sub(1)) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }))
        }

        /// Number of distinct real roots in `(a, b]`.
        fn count(&self, a: &Rational, b: &Rational) -> usize {
            self.at(a) - self.at(b)
        }

        fn count_all(&self) -> usize {
            self.at_neg_infinity() - self.at_pos_infinity()
        }
    }

    pub(crate) fn all_roots_real(p: &[Rational]) -> RealRootedness {
        let f = trim(p.to_vec());
        if f.len() <= 1 {
            return RealRootedness::RealRooted;
        }
        let g = exact_div(&f, &gcd(&f, &derivative(&f)));
        if SturmChain::new(&g).count_all() == degree(&g) {
            RealRootedness::RealRooted
        } else {
            RealRootedness::NotRealRooted
        }
    }

    pub(crate) fn count_negative_roots(p: &[Rational]) -> usize {
        let f = trim(p.to_vec());
        if f.len() <= 1 {
            return 0;
        }
        let g = exact_div(&f, &gcd(&f, &derivative(&f)));
        let chain = SturmChain::new(&g);
        let at_zero = chain.at(&Rational::zero());
        let zero_root = usize::from(g[0].is_zero());
        chain.at_neg_infinity() - at_zero - zero_root
    }

    /// Power of two strictly above every root modulus (Cauchy bound).
    fn root_bound(p: &[Rational]) -> Rational {
        let lead = Signed::abs(p.last().unwrap());
        let max_ratio = p[..p.len() - 1]
            .iter()
            .map(|c| Signed::abs(c) / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        let bound = max_ratio + Rational::one();
        let mut pow = Rational::one();
        while pow <= bound {
            pow = pow * Rational::from_integer(BigInt::from(2));
        }
        pow
    }

    fn half(a: &Rational, b: &Rational) -> Rational {
        (a + b) / Rational::from_integer(BigInt::from(2))
    }

    /// Roots of a square-free polynomial, each isolated then refined.
    fn isolate(g: &[Rational], multiplicity: usize, out: &mut Vec<ExactRoot>) {
        let chain = SturmChain::new(g);
        let poly = IntPoly::from_rational(g);
        let bound = root_bound(g);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let count = chain.count(&a, &b);
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push(refine(&poly, a, b, multiplicity));
                continue;
            }
            let mid = half(&a, &b);
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }

    /// Refines the unique root in `(a, b]` by sign bisection, then tries to
    /// recognise it as a simple rational.
    fn refine(poly: &IntPoly, mut a: Rational, mut b: Rational, multiplicity: usize) -> ExactRoot {
        let root = |value: Rational| ExactRoot {
            value,
            multiplicity,
            exact: true,
        };
        let sign_b = poly.sign_at_rational(&b);
        if sign_b == Sign::NoSign {
            return root(b);
        }
        let (abs_a, abs_b) = (Signed::abs(&a), Signed::abs(&b));
        let magnitude = if abs_a > abs_b { abs_a } else { abs_b };
        let scale = if magnitude > Rational::one() {
            magnitude
        } else {
            Rational::one()
        };
        let width = scale / Rational::from_integer(BigInt::one() << REFINE_BITS);
        while &b - &a > width {
            let mid = half(&a, &b);
            match poly.sign_at_rational(&mid) {
                Sign::NoSign => return root(mid),
                s if s == sign_b => b = mid,
                _ => a = mid,
            }
        }
        let candidate = simplest_between(&a, &b);
        if poly.sign_at_rational(&candidate) == Sign::NoSign {
            return root(candidate);
        }
        ExactRoot {
            value: half(&a, &b),
            multiplicity,
            exact: false,
        }
    }

    pub(crate) fn real_roots(p: &[Rational]) -> Vec<ExactRoot> {
        let mut roots = Vec::new();
        for (factor, multiplicity) in squarefree_decomposition(p) {
            isolate(&factor, multiplicity, &mut roots);
        }
        roots.sort_by(|x, y| x.value.cmp(&y.value));
        roots
    }
}

/// Companion-matrix root finding in `f64`.
pub(crate) mod float {
    use super::*;
    use nalgebra::Complex;

    #[derive(Clone, Debug)]
    pub(crate) struct Cluster {
        pub re: f64,
        pub im: f64,
        pub size: usize,
    }

    pub(crate) struct Analysis {
        pub verdict: RealRootedness,
        pub clusters: Vec<Cluster>,
    }

    /// Coefficients of `p(s tau) / (lead s^n)` for a Fujiwara-style root
    /// scale `s`, and `s` itself. Trailing zeros must already be trimmed.
    pub(crate) fn scale_roots(coeffs: &[f64]) -> (Vec<f64>, f64) {
        let last = coeffs.len() - 1;
        let lead = coeffs[last];
        let s = (0..last)
            .map(|k| libm::pow(libm::fabs(coeffs[k] / lead), 1.0 / (last - k) as f64))
            .fold(0.0, f64::max);
        let s = if s > 0.0 && s.is_finite() { s } else { 1.0 };
        let scaled = (0..=last)
            .map(|k| coeffs[k] / lead / libm::pow(s, (last - k) as f64))
            .collect();
        (scaled, s)
    }

    /// Newton polygon estimate of the radius of the `m` roots nearest zero.
    pub(crate) fn zero_cluster_radius(coeffs: &[f64], m: usize) -> f64 {
        (0..m)
            .map(|k| libm::pow(libm::fabs(coeffs[k] / coeffs[m]), 1.0 / (m - k) as f64))
            .fold(0.0, f64::max)
    }

    /// All complex roots (unsorted).
    pub(crate) fn complex_roots(coeffs: &[f64], tol: f64) -> Result<Vec<Complex<f64>>> {
        let last = coeffs
            .iter()
            .rposition(|c| *c != 0.0)
            .ok_or(Error::ZeroPolynomial)?;
        let coeffs = &coeffs[..=last];
        if last == 0 {
            return Ok(Vec::new());
        }
        let (scaled, s) = scale_roots(coeffs);
        // Leading coefficients are snapped to a zero root of multiplicity m
        // only when the cluster they describe has radius at most `tol`, so
        // small genuine roots survive.
        let zeros = (1..=last)
            .rev()
            .find(|&m| scaled[m] != 0.0 && zero_cluster_radius(&scaled, m) <= tol)
            .unwrap_or(0);
        let mut roots = vec![Complex::new(0.0, 0.0); zeros];
        let monic = &scaled[zeros..last];
        let n = monic.len();
        if n == 0 {
            return Ok(roots);
        }
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -monic[i];
        }
        let eig = companion.complex_eigenvalues();
        if eig.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalInconsistency(
                "companion eigenvalues did not converge".into(),
            ));
        }
        roots.extend(eig.iter().map(|z| Complex::new(z.re * s, z.im * s)));
        Ok(roots)
    }

    /// Newton steps, kept only while the residual shrinks. Companion
    /// eigenvalues of closely spaced simple roots are often off in the fifth
    /// digit; multiple roots are left alone since Newton breaks the symmetry
    /// of their smeared copies.
    fn polish(coeffs: &[f64], mut z: Complex<f64>) -> Complex<f64> {
        let eval = |z: Complex<f64>| {
            let mut p = Complex::new(0.0, 0.0);
            let mut dp = Complex::new(0.0, 0.0);
            for c in coeffs.iter().rev() {
                dp = dp * z + p;
                p = p * z + *c;
            }
            (p, dp)
        };
        let (mut p, mut dp) = eval(z);
        for _ in 0..8 {
            if p.norm_sqr() == 0.0 || dp.norm_sqr() == 0.0 {
                break;
            }
            let next = z - p / dp;
            let (np, ndp) = eval(next);
            if !(np.norm_sqr() < p.norm_sqr()) {
                break;
            }
            z = next;
            p = np;
            dp = ndp;
        }
        z
    }

    pub(crate) fn cluster(mut roots: Vec<Complex<f64>>) -> Vec<Cluster> {
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
        for r in roots {
            if let Some((sum, size)) = clusters.last_mut() {
                let mean = *sum / *size as f64;
                let d = r - mean;
                if libm::hypot(d.re, d.im) <= CLUSTER_TOL * (1.0 + libm::hypot(mean.re, mean.im)) {
                    *sum += r;
                    *size += 1;
                    continue;
                }
            }
            clusters.push((r, 1));
        }
        clusters
            .into_iter()
            .map(|(sum, size)| {
                let mean = sum / size as f64;
                Cluster {
                    re: mean.re,
                    im: mean.im,
                    size,
                }
            })
            .collect()
    }

    pub(crate) fn analyse(coeffs: &[f64], tol: f64) -> Result<Analysis> {
        let last = coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        let monic: Vec<f64> = coeffs[..=last].iter().map(|c| c / coeffs[last]).collect();
        // Isolated roots are polished, then everything is clustered again since
        // polishing can bring a smeared pair within the cluster radius.
        let mut polished = Vec::new();
        for c in cluster(complex_roots(coeffs, tol)?) {
            let z = Complex::new(c.re, c.im);
            if c.size == 1 && (c.re != 0.0 || c.im != 0.0) {
                polished.push(polish(&monic, z));
            } else {
                polished.extend(core::iter::repeat_n(z, c.size));
            }
        }
        let clusters = cluster(polished);
        let worst = clusters
            .iter()
            .map(|c| c.im.abs() / (1.0 + libm::hypot(c.re, c.im)))
            .fold(0.0, f64::max);
        let verdict = if worst <= tol {
            RealRootedness::RealRooted
        } else if worst <= GRAY_BAND_FACTOR * tol {
            RealRootedness::Inconclusive
        } else {
            RealRootedness::NotRealRooted
        };
        Ok(Analysis { verdict, clusters })
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    /// Distinct integer roots, optionally times `t^2 + c`.
    fn factored() -> impl Strategy<Value = (Vec<i64>, Option<i64>)> {
        (
            prop::collection::btree_set(-6i64..=6, 1..6),
            prop::option::of(1i64..6),
        )
            .prop_map(|(roots, quad)| (roots.into_iter().collect(), quad))
    }

    fn build<S: Scalar>(roots: &[i64], quad: Option<i64>) -> UnivariatePoly<S> {
        let base =
            UnivariatePoly::from_roots(&roots.iter().map(|&v| S::from_i64(v)).collect::<Vec<_>>());
        let Some(c) = quad else { return base };
        let b = base.coeffs();
        let mut out = vec![S::zero(); b.len() + 2];
        for (i, v) in b.iter().enumerate() {
            out[i] = out[i].clone() + v.clone() * S::from_i64(c);
            out[i + 2] = out[i + 2].clone() + v.clone();
        }
        UnivariatePoly::new(out)
    }

    proptest! {
        #[test]
        fn sturm_and_companion_agree((roots, quad) in factored()) {
            let exact = build::<Rational>(&roots, quad).all_roots_real(DEFAULT_TOL).unwrap();
            let float = build::<f64>(&roots, quad).all_roots_real(DEFAULT_TOL).unwrap();
            prop_assert_eq!(exact, float);
            let expected = if quad.is_some() {
                RealRootedness::NotRealRooted
            } else {
                RealRootedness::RealRooted
            };
            prop_assert_eq!(exact, expected);
        }

        #[test]
        fn roots_are_reconstructed(
            roots in prop::collection::btree_map(-20i64..=20, 1usize..4, 1..5),
            den in 1i64..5,
        ) {
            let expanded: Vec<Rational> = roots
                .iter()
                .flat_map(|(&v, &k)| core::iter::repeat(Rational::new(v.into(), den.into())).take(k))
                .collect();
            let u = UnivariatePoly::from_roots(&expanded).scale(&r(3));
            let list = u.real_roots(DEFAULT_TOL).unwrap();
            let want: Vec<Rational> = roots.keys().map(|&v| Rational::new(v.into(), den.into())).collect();
            prop_assert_eq!(&list.roots, &want);
            prop_assert_eq!(list.multiplicities, roots.values().copied().collect::<Vec<_>>());
            prop_assert!(list.exact.iter().all(|e| *e));
            let negatives = roots.keys().filter(|v| **v < 0).count();
            prop_assert_eq!(u.count_negative_roots().unwrap(), negatives);
        }

        #[test]
        fn float_roots_match_integer_roots((roots, _) in factored()) {
            let u = build::<f64>(&roots, None);
            let list = u.real_roots(DEFAULT_TOL).unwrap();
            prop_assert_eq!(list.roots.len(), roots.len());
            for (got, want) in list.roots.iter().zip(&roots) {
                prop_assert!((got - *want as f64).abs() < 1e-6);
            }
        }
    }
}
