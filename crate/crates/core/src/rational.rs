//! Real-coefficient polynomials and rational transfer functions.
//!
//! Coefficients are stored in ascending powers everywhere. For continuous-time
//! systems the indeterminate is `s`; for discrete-time systems it is the unit
//! delay `z^-1`, so `coeffs[k]` multiplies `z^-k`.
//!
//! Roots are extracted with Durand–Kerner (Weierstrass) iteration followed by a
//! Newton polish, clustered into explicit multiplicities and symmetrized so
//! that conjugate pairs are exactly conjugate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative root-merging tolerance: roots closer than `ROOT_TOL * (1 + |r|)`
/// are one root.
pub const ROOT_TOL: f64 = 1e-8;
/// Relative tolerance for partial-fraction recombination checks.
pub const RECOMBINE_TOL: f64 = 1e-9;
/// Stability boundary tolerance.
pub const STAB_TOL: f64 = 1e-12;

const DK_MAX_ITER: usize = 500;
// Candidate radius for the derivative-confirmed multiplicity test.
const CLUSTER_PROBE: f64 = 1e-3;
const MULTIPLICITY_RESIDUAL: f64 = 1e-12;

fn root_tol(r: Complex64) -> f64 {
    ROOT_TOL * (1.0 + r.norm())
}

/// Real polynomial in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zero coefficients. An empty or
    /// all-zero coefficient list yields the zero polynomial `[0]`.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself, `x`.
    pub fn x() -> Self {
        Self { coeffs: vec![0.0, 1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Expands `lead * prod (x - r)^m` from a conjugate-closed root list.
    ///
    /// Conjugate pairs are expanded as real quadratics, so the result is
    /// real by construction.
    pub fn from_roots(roots: &[Root], lead: f64) -> Result<Self> {
        let mut acc = Self::constant(lead);
        for (r, m) in conjugate_factors(roots)? {
            let factor = match r {
                RealOrPair::Real(x) => Self::new(vec![-x, 1.0]),
                RealOrPair::Pair(z) => Self::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]),
            };
            for _ in 0..m {
                acc = &acc * &factor;
            }
        }
        Ok(acc)
    }

    /// All roots with multiplicities. See [`poly_roots`].
    pub fn roots(&self) -> Result<Vec<Root>> {
        poly_roots(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out: Vec<f64> = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied();
                let b = rhs.coeffs.get(k).copied();
                match (a, b) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => 0.0,
                }
            })
            .collect();
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect::<Vec<_>>())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl Root {
    pub fn new(value: Complex64, multiplicity: usize) -> Self {
        Self { value, multiplicity }
    }

    pub fn real(x: f64, multiplicity: usize) -> Self {
        Self::new(Complex64::new(x, 0.0), multiplicity)
    }
}

enum RealOrPair {
    Real(f64),
    Pair(Complex64),
}

/// Groups a root list into real roots and conjugate pairs (upper member).
fn conjugate_factors(roots: &[Root]) -> Result<Vec<(RealOrPair, usize)>> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let r = roots[i];
        if r.value.im.abs() <= root_tol(r.value) {
            out.push((RealOrPair::Real(r.value.re), r.multiplicity));
            continue;
        }
        let target = r.value.conj();
        let partner = (0..roots.len())
            .filter(|&j| !used[j] && roots[j].multiplicity == r.multiplicity)
            .map(|j| (j, (roots[j].value - target).norm()))
            .filter(|&(_, d)| d <= root_tol(target))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => {
                used[j] = true;
                let upper = if r.value.im > 0.0 {
                    (r.value + roots[j].value.conj()) * 0.5
                } else {
                    (r.value.conj() + roots[j].value) * 0.5
                };
                out.push((RealOrPair::Pair(upper), r.multiplicity));
            }
            None => {
                return Err(Error::NonConjugateRoots(format!(
                    "{} (multiplicity {}) has no conjugate partner",
                    r.value, r.multiplicity
                )))
            }
        }
    }
    Ok(out)
}

fn cpoly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn cpoly_abs_bound(coeffs: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn cpoly_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Coefficients of `p(center + h)` in powers of `h`.
fn taylor_shift(coeffs: &[Complex64], center: Complex64) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let hi = a[j + 1];
            a[j] += center * hi;
        }
    }
    a
}

fn cpoly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn durand_kerner(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..DK_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let num = cpoly_eval(monic, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-10 * radius, 1e-10 * radius);
                max_step = f64::INFINITY;
                continue;
            }
            let step = num / den;
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

fn newton_polish(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let d = cpoly_derivative(coeffs);
    let pz = cpoly_eval(coeffs, z);
    let dz = cpoly_eval(&d, z);
    if dz.norm() == 0.0 {
        return z;
    }
    let cand = z - pz / dz;
    if cand.is_finite() && cpoly_eval(coeffs, cand).norm() < pz.norm() {
        cand
    } else {
        z
    }
}

/// Checks whether `c` is a root of multiplicity at least `m`, refining it as a
/// simple root of the `(m-1)`-th derivative first.
fn confirm_multiplicity(coeffs: &[Complex64], c: Complex64, m: usize) -> Option<Complex64> {
    let mut derivs = vec![coeffs.to_vec()];
    for _ in 1..=m {
        let next = cpoly_derivative(derivs.last().unwrap());
        derivs.push(next);
    }
    let target = &derivs[m - 1];
    let slope = &derivs[m];
    let mut x = c;
    for _ in 0..50 {
        let fx = cpoly_eval(target, x);
        let dx = cpoly_eval(slope, x);
        if dx.norm() == 0.0 {
            break;
        }
        let step = fx / dx;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    if (x - c).norm() > CLUSTER_PROBE * (1.0 + c.norm()) {
        return None;
    }
    let ok = derivs[..m].iter().all(|d| {
        cpoly_eval(d, x).norm() <= MULTIPLICITY_RESIDUAL * cpoly_abs_bound(d, x).max(f64::MIN_POSITIVE)
    });
    ok.then_some(x)
}

fn cluster(coeffs: &[Complex64], raw: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = raw.into_iter().map(|z| (z, 1)).collect();
    loop {
        let mut candidates = Vec::new();
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                candidates.push(((groups[i].0 - groups[j].0).norm(), i, j));
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged = None;
        for (d, i, j) in candidates {
            let (a, ma) = groups[i];
            let (b, mb) = groups[j];
            let m = ma + mb;
            let c = (a * ma as f64 + b * mb as f64) / m as f64;
            if d < root_tol(c) {
                merged = Some((i, j, c, m));
                break;
            }
            if d < CLUSTER_PROBE * (1.0 + c.norm()) {
                if let Some(refined) = confirm_multiplicity(coeffs, c, m) {
                    merged = Some((i, j, refined, m));
                    break;
                }
            } else {
                break;
            }
        }
        match merged {
            Some((i, j, c, m)) => {
                groups.remove(j);
                groups[i] = (c, m);
            }
            None => return groups,
        }
    }
}

fn symmetrize(groups: &mut [(Complex64, usize)]) {
    for g in groups.iter_mut() {
        if g.0.im.abs() <= root_tol(g.0) {
            g.0.im = 0.0;
        }
    }
    let n = groups.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] || groups[i].0.im <= 0.0 {
            continue;
        }
        let target = groups[i].0.conj();
        let partner = (0..n)
            .filter(|&j| !done[j] && j != i && groups[j].0.im < 0.0 && groups[j].1 == groups[i].1)
            .min_by(|&a, &b| {
                (groups[a].0 - target)
                    .norm()
                    .total_cmp(&(groups[b].0 - target).norm())
            });
        if let Some(j) = partner {
            let upper = (groups[i].0 + groups[j].0.conj()) * 0.5;
            groups[i].0 = upper;
            groups[j].0 = upper.conj();
            done[i] = true;
            done[j] = true;
        }
    }
}

fn root_order(a: &Root, b: &Root) -> Ordering {
    a.value
        .re
        .total_cmp(&b.value.re)
        .then(a.value.im.total_cmp(&b.value.im))
}

/// Roots of `p` with multiplicities, sorted by real then imaginary part.
///
/// Exact zero low-order coefficients become a root at the origin; degree-one
/// factors are solved in closed form and everything else goes through
/// Durand–Kerner with at most 500 sweeps and one Newton polish per root.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = p.coeffs();
    let origin = c.iter().take_while(|&&x| x == 0.0).count();
    let rest = &c[origin..];
    let mut roots = Vec::new();
    if origin > 0 {
        roots.push(Root::real(0.0, origin));
    }
    let deg = rest.len() - 1;
    if deg == 1 {
        roots.push(Root::real(-rest[0] / rest[1], 1));
    } else if deg >= 2 {
        let lead = rest[deg];
        let monic: Vec<Complex64> = rest.iter().map(|&x| Complex64::new(x / lead, 0.0)).collect();
        let raw: Vec<Complex64> = durand_kerner(&monic)
            .into_iter()
            .map(|z| newton_polish(&monic, z))
            .collect();
        let mut groups = cluster(&monic, raw);
        symmetrize(&mut groups);
        roots.extend(groups.into_iter().map(|(z, m)| Root::new(z, m)));
    }
    roots.sort_by(root_order);
    Ok(roots)
}

/// Which transform variable a transfer function is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Laplace variable `s`.
    Continuous,
    /// Powers of the unit delay `z^-1`.
    Discrete,
}

/// Ratio of two real polynomials tagged with its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTf {
    num: Polynomial,
    den: Polynomial,
    domain: Domain,
}

impl RationalTf {
    pub fn new(num: Polynomial, den: Polynomial, domain: Domain) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.coeffs().iter().chain(den.coeffs()).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("transfer function coefficients"));
        }
        Ok(Self { num, den, domain })
    }

    pub fn continuous(num: impl Into<Vec<f64>>, den: impl Into<Vec<f64>>) -> Result<Self> {
        Self::new(Polynomial::new(num), Polynomial::new(den), Domain::Continuous)
    }

    pub fn discrete(num: impl Into<Vec<f64>>, den: impl Into<Vec<f64>>) -> Result<Self> {
        Self::new(Polynomial::new(num), Polynomial::new(den), Domain::Discrete)
    }

    /// The unit gain in the given domain.
    pub fn identity(domain: Domain) -> Self {
        Self {
            num: Polynomial::one(),
            den: Polynomial::one(),
            domain,
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Evaluates the polynomials directly at their own indeterminate
    /// (`s` for continuous systems, `z^-1` for discrete ones).
    pub fn eval_raw(&self, x: Complex64) -> Complex64 {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }

    /// Evaluates at a point of the transform plane: `s` for continuous
    /// systems, `z` for discrete ones.
    pub fn eval(&self, point: Complex64) -> Complex64 {
        match self.domain {
            Domain::Continuous => self.eval_raw(point),
            Domain::Discrete => self.eval_raw(point.inv()),
        }
    }

    /// Numerator degree does not exceed denominator degree. For discrete
    /// systems written in `z^-1` this is the causality condition `den[0] != 0`.
    pub fn is_proper(&self) -> bool {
        match self.domain {
            Domain::Continuous => self.num.degree() <= self.den.degree(),
            Domain::Discrete => self.den.coeffs()[0] != 0.0,
        }
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain,
                found: other.domain,
            });
        }
        Ok(())
    }

    /// Series connection.
    pub fn cascade(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        Self::new(&self.num * &other.num, &self.den * &other.den, self.domain)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.check_domain(other)?;
        let rhs = other.num.scale(sign);
        let sum = if self.den == other.den {
            Self::new(&self.num + &rhs, self.den.clone(), self.domain)?
        } else {
            Self::new(
                &(&self.num * &other.den) + &(&rhs * &self.den),
                &self.den * &other.den,
                self.domain,
            )?
        };
        sum.reduce()
    }

    /// Parallel connection, reduced.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// Cancels numerator and denominator roots that coincide within
    /// `ROOT_TOL`. Returns the input unchanged when nothing cancels.
    pub fn reduce(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Self::new(Polynomial::zero(), Polynomial::one(), self.domain);
        }
        let pzg = self.to_pzg()?;
        let mut zeros = pzg.zeros.clone();
        let mut poles = pzg.poles.clone();
        let mut cancelled = false;
        for z in zeros.iter_mut() {
            for p in poles.iter_mut() {
                if z.multiplicity == 0 || p.multiplicity == 0 {
                    continue;
                }
                if (z.value - p.value).norm() <= root_tol(p.value) {
                    let k = z.multiplicity.min(p.multiplicity);
                    z.multiplicity -= k;
                    p.multiplicity -= k;
                    cancelled = true;
                }
            }
        }
        if !cancelled {
            return Ok(self.clone());
        }
        zeros.retain(|r| r.multiplicity > 0);
        poles.retain(|r| r.multiplicity > 0);
        PoleZeroGain {
            zeros,
            poles,
            ..pzg
        }
        .to_tf()
    }

    /// Polynomials in the plane variable (`s` or `z`), used for factoring.
    fn plane_polys(&self) -> (Polynomial, Polynomial) {
        match self.domain {
            Domain::Continuous => (self.num.clone(), self.den.clone()),
            Domain::Discrete => {
                // B(z^-1)/A(z^-1) = z^(na-nb) * rev(B)(z) / rev(A)(z)
                let nb = self.num.degree();
                let na = self.den.degree();
                let rev = |p: &Polynomial, shift: usize| {
                    let mut c = vec![0.0; shift];
                    c.extend(p.coeffs().iter().rev());
                    Polynomial::new(c)
                };
                (rev(&self.num, na.saturating_sub(nb)), rev(&self.den, nb.saturating_sub(na)))
            }
        }
    }

    /// Pole–zero–gain factorization. The gain is the ratio of the leading
    /// coefficients of the plane-variable polynomials.
    pub fn to_pzg(&self) -> Result<PoleZeroGain> {
        let (n, d) = self.plane_polys();
        let zeros = if n.is_zero() { Vec::new() } else { poly_roots(&n)? };
        let poles = poly_roots(&d)?;
        let gain = if n.is_zero() { 0.0 } else { n.leading() / d.leading() };
        Ok(PoleZeroGain {
            zeros,
            poles,
            gain,
            domain: self.domain,
        })
    }

    pub fn from_pzg(pzg: &PoleZeroGain) -> Result<Self> {
        pzg.to_tf()
    }

    pub fn poles(&self) -> Result<Vec<Root>> {
        Ok(self.to_pzg()?.poles)
    }

    /// Modal (partial-fraction) decomposition of a proper continuous-time
    /// transfer function.
    pub fn partial_fractions(&self) -> Result<PartialFractionExpansion> {
        partial_fractions(self)
    }
}

/// Series connection of several stages sharing one domain.
pub fn cascade(stages: &[RationalTf]) -> Result<RationalTf> {
    let (first, rest) = stages.split_first().ok_or(Error::Empty("cascade"))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.cascade(s))
}

/// Three-valued stability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

/// Factored form `K * prod(x - zero) / prod(x - pole)` in the plane variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleZeroGain {
    pub zeros: Vec<Root>,
    pub poles: Vec<Root>,
    pub gain: f64,
    pub domain: Domain,
}

impl PoleZeroGain {
    pub fn new(zeros: Vec<Root>, poles: Vec<Root>, gain: f64, domain: Domain) -> Self {
        Self {
            zeros,
            poles,
            gain,
            domain,
        }
    }

    pub fn order(&self) -> usize {
        self.poles.iter().map(|r| r.multiplicity).sum()
    }

    pub fn stability(&self) -> Stability {
        is_stable(self)
    }

    /// Expands back into a rational transfer function. Discrete systems are
    /// returned in powers of `z^-1`.
    pub fn to_tf(&self) -> Result<RationalTf> {
        let n = Polynomial::from_roots(&self.zeros, self.gain)?;
        let d = Polynomial::from_roots(&self.poles, 1.0)?;
        match self.domain {
            Domain::Continuous => RationalTf::new(n, d, Domain::Continuous),
            Domain::Discrete => {
                let l = n.degree().max(d.degree());
                let to_delay = |p: &Polynomial| {
                    let mut c = vec![0.0; l + 1];
                    for (k, &v) in p.coeffs().iter().enumerate() {
                        c[l - k] = v;
                    }
                    Polynomial::new(c)
                };
                RationalTf::new(to_delay(&n), to_delay(&d), Domain::Discrete)
            }
        }
    }
}

/// Stability from pole locations: left half-plane for continuous systems,
/// inside the unit circle for discrete ones. Simple poles on the boundary
/// (within `STAB_TOL`) are marginal; repeated boundary poles grow without
/// bound and count as unstable.
pub fn is_stable(pzg: &PoleZeroGain) -> Stability {
    let mut verdict = Stability::Stable;
    for p in &pzg.poles {
        let margin = match pzg.domain {
            Domain::Continuous => p.value.re,
            Domain::Discrete => p.value.norm() - 1.0,
        };
        if margin > STAB_TOL {
            return Stability::Unstable;
        }
        if margin >= -STAB_TOL {
            if p.multiplicity > 1 {
                return Stability::Unstable;
            }
            verdict = Stability::Marginal;
        }
    }
    verdict
}

/// One modal group `sum_k coeffs[k-1] / (s - pole)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionTerm {
    pub pole: Complex64,
    pub multiplicity: usize,
    pub coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionExpansion {
    pub terms: Vec<PartialFractionTerm>,
    /// Polynomial part; zero for strictly proper inputs.
    pub direct: Polynomial,
}

impl PartialFractionExpansion {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = self.direct.eval_complex(s);
        for t in &self.terms {
            let base = (s - t.pole).inv();
            let mut pow = base;
            for c in &t.coeffs {
                acc += c * pow;
                pow *= base;
            }
        }
        acc
    }

    pub fn total_multiplicity(&self) -> usize {
        self.terms.iter().map(|t| t.multiplicity).sum()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.direct.is_zero()
    }
}

/// Partial-fraction expansion of a proper continuous-time transfer function.
///
/// Coefficients come from Taylor-matching `N(s) / Q_j(s)` around each pole,
/// where `Q_j` is the denominator with that pole's factor removed. For a
/// simple pole this is the residue `lim (s - p) H(s)`. Conjugate poles get
/// exactly conjugate coefficients.
pub fn partial_fractions(tf: &RationalTf) -> Result<PartialFractionExpansion> {
    if tf.domain() != Domain::Continuous {
        return Err(Error::DomainMismatch {
            expected: Domain::Continuous,
            found: tf.domain(),
        });
    }
    let (nd, dd) = (tf.num().degree(), tf.den().degree());
    if !tf.num().is_zero() && nd > dd {
        return Err(Error::ImproperTf { num: nd, den: dd });
    }
    let mut remainder = tf.num().clone();
    let mut direct = Polynomial::zero();
    if !tf.num().is_zero() && nd == dd {
        let q = tf.num().leading() / tf.den().leading();
        direct = Polynomial::constant(q);
        let mut c = (tf.num() - &tf.den().scale(q)).coeffs().to_vec();
        c.resize(dd + 1, 0.0);
        c.truncate(dd);
        remainder = Polynomial::new(c);
    }
    if dd == 0 {
        return Ok(PartialFractionExpansion {
            terms: Vec::new(),
            direct,
        });
    }
    let poles = poly_roots(tf.den())?;
    let lead = Complex64::new(tf.den().leading(), 0.0);
    let num_c: Vec<Complex64> = remainder.coeffs().iter().map(|&x| Complex64::new(x, 0.0)).collect();

    let mut terms: Vec<PartialFractionTerm> = Vec::with_capacity(poles.len());
    for (j, pj) in poles.iter().enumerate() {
        let mut q = vec![lead];
        for (i, pi) in poles.iter().enumerate() {
            if i == j {
                continue;
            }
            for _ in 0..pi.multiplicity {
                q = cpoly_mul(&q, &[-pi.value, Complex64::new(1.0, 0.0)]);
            }
        }
        let m = pj.multiplicity;
        let ns = taylor_shift(&num_c, pj.value);
        let qs = taylor_shift(&q, pj.value);
        let mut g = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m {
            let mut acc = ns.get(k).copied().unwrap_or_default();
            for i in 1..=k {
                acc -= qs.get(i).copied().unwrap_or_default() * g[k - i];
            }
            g[k] = acc / qs[0];
        }
        // g[q] multiplies (s - p)^q in N/Q, i.e. 1/(s - p)^(m - q) in H.
        let coeffs = (1..=m).map(|k| g[m - k]).collect();
        terms.push(PartialFractionTerm {
            pole: pj.value,
            multiplicity: m,
            coeffs,
        });
    }
    // Lower members of conjugate pairs mirror the upper member exactly.
    for idx in 0..terms.len() {
        if terms[idx].pole.im < 0.0 {
            let pole = terms[idx].pole;
            let mult = terms[idx].multiplicity;
            if let Some(upper) = terms.iter().find(|t| t.pole == pole.conj() && t.multiplicity == mult) {
                terms[idx].coeffs = upper.coeffs.iter().map(|c| c.conj()).collect();
            }
        }
    }
    Ok(PartialFractionExpansion { terms, direct })
}
