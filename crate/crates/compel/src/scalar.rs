//! Exact scalar arithmetic: rationals, Gaussian rationals, primitive integer
//! polynomials, and algebraic scalars given by a minimal polynomial plus an
//! isolating rectangle.
//!
//! The decision procedures here (`is_algebraic_integer`, `is_root_of_unity`,
//! `unit_modulus`) are exact: no verdict depends on a floating-point
//! tolerance. Floating point appears only as a search heuristic for locating
//! roots; every acceptance or rejection is certified with rational interval
//! arithmetic and separation bounds.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Exact rational scalar. Kept reduced with positive denominator by the
/// underlying representation.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalar does not have unit modulus")]
    NotUnitModulus,
    #[error("degenerate scalar: {0}")]
    DegenerateScalar(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("cannot parse scalar literal: {0}")]
    ParseError(String),
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or just `p` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` (optionally signed).
pub fn parse_rational(s: &str) -> Result<Rat, ScalarError> {
    let t = s.trim();
    let parts: Vec<&str> = t.split('/').collect();
    let bad = || ScalarError::ParseError(s.to_string());
    match parts.len() {
        1 => {
            let n = BigInt::from_str(parts[0].trim()).map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        2 => {
            let n = BigInt::from_str(parts[0].trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(parts[1].trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        _ => Err(bad()),
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Element of ℚ(i), componentwise reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussianRational { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: Rat::zero(), im: Rat::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`, the square of the complex modulus.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianRational { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn neg(&self) -> Self {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e < 0 {
            self.inv().expect("power of zero scalar")
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Renders in the `p/q+r/s*i` literal syntax.
    pub fn to_literal(&self) -> String {
        if self.im.is_zero() {
            return rat_to_string(&self.re);
        }
        let im_part = if self.im.is_negative() {
            format!("-{}*i", rat_to_string(&-self.im.clone()))
        } else {
            format!("+{}*i", rat_to_string(&self.im))
        };
        if self.re.is_zero() && self.im.is_negative() {
            format!("-{}*i", rat_to_string(&-self.im.clone()))
        } else if self.re.is_zero() {
            format!("{}*i", rat_to_string(&self.im))
        } else {
            format!("{}{}", rat_to_string(&self.re), im_part)
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

/// Parses `p/q`, `p/q+r/s*i`, `r/s*i`, `i`, `-i` and integer shorthands.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational, ScalarError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ScalarError::ParseError(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if t == "i" {
        return Ok(GaussianRational::i());
    }
    if t == "-i" {
        return Ok(GaussianRational::i().neg());
    }
    // Split at the last '+' or '-' that is not the leading sign and not part
    // of an exponent-free rational (no exponents in this grammar).
    let chars: Vec<char> = t.chars().collect();
    let mut split_at = None;
    for idx in (1..chars.len()).rev() {
        if chars[idx] == '+' || chars[idx] == '-' {
            if chars[idx - 1] == '/' || chars[idx - 1] == '+' || chars[idx - 1] == '-' {
                continue;
            }
            split_at = Some(idx);
            break;
        }
    }
    let parse_im = |part: &str| -> Result<Rat, ScalarError> {
        // Accepts `r/s*i`, `r*i`, `i`, with optional sign.
        let core = part.strip_suffix("*i").or_else(|| part.strip_suffix('i'));
        match core {
            Some("") => Ok(Rat::one()),
            Some("-") => Ok(-Rat::one()),
            Some("+") => Ok(Rat::one()),
            Some(c) => parse_rational(c),
            None => Err(bad()),
        }
    };
    if t.ends_with('i') {
        match split_at {
            Some(idx) => {
                let (re_part, im_part) = t.split_at(idx);
                Ok(GaussianRational::new(parse_rational(re_part)?, parse_im(im_part)?))
            }
            None => Ok(GaussianRational::new(Rat::zero(), parse_im(&t)?)),
        }
    } else {
        Ok(GaussianRational::from_rat(parse_rational(&t)?))
    }
}

// ---------------------------------------------------------------------------
// Primitive integer polynomials
// ---------------------------------------------------------------------------

/// Integer polynomial, lowest degree first, with content 1 and positive
/// leading coefficient (zero polynomial excepted).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Normalizes: trims trailing zeros, divides by content, makes the
    /// leading coefficient positive.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return IntPolynomial { coeffs };
        }
        let mut content = BigInt::zero();
        for c in &coeffs {
            content = content.gcd(c);
        }
        if coeffs.last().unwrap().is_negative() {
            content = -content;
        }
        for c in coeffs.iter_mut() {
            *c /= &content;
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators of a rational polynomial, then normalizes.
    pub fn from_rational_coeffs(coeffs: &[Rat]) -> Self {
        let mut lcm = BigInt::one();
        for c in coeffs {
            lcm = lcm.lcm(c.denom());
        }
        Self::new(
            coeffs
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient-reversed polynomial `xⁿ·p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut rev = self.coeffs.clone();
        rev.reverse();
        IntPolynomial::new(rev)
    }

    /// `rev(p) = ±p`; necessary for any root of unit modulus.
    pub fn is_self_reciprocal(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        let same = rev == self.coeffs;
        let negated = rev.iter().zip(&self.coeffs).all(|(a, b)| *a == -b);
        same || negated
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_gauss(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&GaussianRational::from_rat(Rat::from_integer(c.clone())));
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// True iff gcd(p, p′) is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == 0 {
            return true;
        }
        let g = rational_poly_gcd(&self.to_rat_vec(), &self.derivative().to_rat_vec());
        g.len() == 1
    }

    fn to_rat_vec(&self) -> Vec<Rat> {
        self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    /// Rational roots via the rational-root candidates p | c₀, q | lead.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        if self.constant_term().is_zero() {
            roots.push(Rat::zero());
        }
        let c0 = self.constant_term().abs();
        let lead = self.leading().abs();
        if c0.is_zero() {
            return roots;
        }
        for p in divisors(&c0) {
            for q in divisors(&lead) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(&p * BigInt::from(sign), q.clone());
                    if self.eval_rat(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots
    }

    /// Renders like `5x^2-6x+5`, highest degree first.
    pub fn to_display_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                1 => {
                    if mag.is_one() {
                        "x".to_string()
                    } else {
                        format!("{}x", mag)
                    }
                }
                _ => {
                    if mag.is_one() {
                        format!("x^{}", k)
                    } else {
                        format!("{}x^{}", mag, k)
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{}", body) } else { body });
            } else {
                parts.push(if c.is_negative() { format!("-{}", body) } else { format!("+{}", body) });
            }
        }
        parts.concat()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_display_string())
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Small-divisor enumeration; minimal polynomials here have small
    // coefficients. Falls back to {1, n} when n is large.
    let mut out = Vec::new();
    if let Some(v) = n.to_u64() {
        if v <= 1_000_000 {
            let mut d = 1u64;
            while d * d <= v {
                if v.is_multiple_of(d) {
                    out.push(BigInt::from(d));
                    if d != v / d {
                        out.push(BigInt::from(v / d));
                    }
                }
                d += 1;
            }
            out.sort();
            return out;
        }
    }
    out.push(BigInt::one());
    out.push(n.clone());
    out
}

// Dense rational polynomial helpers (lowest degree first, trailing zeros trimmed).

fn rp_trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rp_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem: Vec<Rat> = num.to_vec();
    rp_trim(&mut rem);
    let dlead = den.last().unwrap().clone();
    let dd = den.len() - 1;
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(dd)];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &dlead;
        quot[shift] = factor.clone();
        for (i, dc) in den.iter().enumerate() {
            let v = &rem[shift + i] - &(dc * &factor);
            rem[shift + i] = v;
        }
        rp_trim(&mut rem);
    }
    rp_trim(&mut quot);
    (quot, rem)
}

fn rational_poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x: Vec<Rat> = a.to_vec();
    let mut y: Vec<Rat> = b.to_vec();
    rp_trim(&mut x);
    rp_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rp_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// Algebraic scalars
// ---------------------------------------------------------------------------

/// Isolating rectangle with rational corners.
#[derive(Debug, Clone, PartialEq)]
pub struct RootBox {
    pub re_lo: Rat,
    pub re_hi: Rat,
    pub im_lo: Rat,
    pub im_hi: Rat,
}

impl RootBox {
    pub fn new(re_lo: Rat, re_hi: Rat, im_lo: Rat, im_hi: Rat) -> Self {
        RootBox { re_lo, re_hi, im_lo, im_hi }
    }

    pub fn contains_f64(&self, z: Complex64) -> bool {
        let re = Rat::from_float(z.re);
        let im = Rat::from_float(z.im);
        match (re, im) {
            (Some(re), Some(im)) => {
                re >= self.re_lo && re <= self.re_hi && im >= self.im_lo && im <= self.im_hi
            }
            _ => false,
        }
    }
}

/// Exact scalar: either an element of ℚ(i), or an abstract algebraic number
/// specified by its minimal polynomial and an isolating rectangle.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraicScalar {
    Gaussian(GaussianRational),
    Abstract { minpoly: IntPolynomial, root_box: RootBox },
}

impl AlgebraicScalar {
    pub fn gaussian(z: GaussianRational) -> Self {
        AlgebraicScalar::Gaussian(z)
    }

    pub fn abstract_root(minpoly: IntPolynomial, root_box: RootBox) -> Self {
        AlgebraicScalar::Abstract { minpoly, root_box }
    }

    /// Degree of the scalar over ℚ.
    pub fn degree(&self) -> usize {
        match self {
            AlgebraicScalar::Gaussian(z) => {
                if z.is_rational() {
                    1
                } else {
                    2
                }
            }
            AlgebraicScalar::Abstract { minpoly, .. } => minpoly.degree(),
        }
    }

    pub fn minpoly(&self) -> IntPolynomial {
        match self {
            AlgebraicScalar::Gaussian(z) => minimal_polynomial(z),
            AlgebraicScalar::Abstract { minpoly, .. } => minpoly.clone(),
        }
    }

    /// Is the Gaussian value exactly 1?
    pub fn is_one(&self) -> bool {
        match self {
            AlgebraicScalar::Gaussian(z) => z.is_one(),
            AlgebraicScalar::Abstract { minpoly, .. } => {
                minpoly.coeffs() == [BigInt::from(-1), BigInt::from(1)]
            }
        }
    }

    /// Sanity checks on the abstract encoding: squarefree minimal polynomial,
    /// no rational roots when degree > 1, non-square discriminant in degree 2,
    /// and a root box isolating exactly one complex root. Failures are
    /// reported, never repaired.
    pub fn validate(&self) -> Result<(), ScalarError> {
        match self {
            AlgebraicScalar::Gaussian(_) => Ok(()),
            AlgebraicScalar::Abstract { minpoly, root_box } => {
                if minpoly.is_zero() || minpoly.degree() == 0 {
                    return Err(ScalarError::InvalidScalar(
                        "minimal polynomial must have degree >= 1".into(),
                    ));
                }
                if !minpoly.is_squarefree() {
                    return Err(ScalarError::InvalidScalar(
                        "minimal polynomial is not squarefree".into(),
                    ));
                }
                if minpoly.degree() > 1 && !minpoly.rational_roots().is_empty() {
                    return Err(ScalarError::InvalidScalar(
                        "minimal polynomial has a rational root, so it is reducible".into(),
                    ));
                }
                if minpoly.degree() == 2 {
                    let c = &minpoly.coeffs()[0];
                    let b = &minpoly.coeffs()[1];
                    let a = &minpoly.coeffs()[2];
                    let disc = b * b - BigInt::from(4) * a * c;
                    if !disc.is_negative() && is_perfect_square(&disc) {
                        return Err(ScalarError::InvalidScalar(
                            "degree-2 minimal polynomial has square discriminant".into(),
                        ));
                    }
                }
                let roots = durand_kerner(minpoly);
                let inside: Vec<Complex64> =
                    roots.iter().copied().filter(|r| root_box.contains_f64(*r)).collect();
                if inside.len() != 1 {
                    return Err(ScalarError::InvalidScalar(format!(
                        "root box isolates {} roots, expected exactly 1",
                        inside.len()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Numeric approximation of the located root (search heuristic only).
    pub fn approx(&self) -> Complex64 {
        match self {
            AlgebraicScalar::Gaussian(z) => z.to_complex64(),
            AlgebraicScalar::Abstract { minpoly, root_box } => {
                let roots = durand_kerner(minpoly);
                roots
                    .into_iter()
                    .find(|r| root_box.contains_f64(*r))
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
        }
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Minimal polynomial of a Gaussian rational: degree 1 for rational values,
/// otherwise the primitive form of `(x − z)(x − z̄)`.
pub fn minimal_polynomial(z: &GaussianRational) -> IntPolynomial {
    if z.is_rational() {
        // q·x − p for z = p/q in lowest terms.
        IntPolynomial::new(vec![-z.re.numer().clone(), z.re.denom().clone()])
    } else {
        let trace = &z.re + &z.re;
        let norm = z.norm_sq();
        IntPolynomial::from_rational_coeffs(&[norm, -trace, Rat::one()])
    }
}

/// True iff the primitive minimal polynomial is monic.
pub fn is_algebraic_integer(z: &AlgebraicScalar) -> bool {
    z.minpoly().is_monic()
}

/// Exact unit-modulus test.
pub fn unit_modulus(z: &AlgebraicScalar) -> bool {
    match z {
        AlgebraicScalar::Gaussian(g) => g.norm_sq().is_one(),
        AlgebraicScalar::Abstract { minpoly, root_box } => {
            abstract_unit_modulus(minpoly, root_box)
        }
    }
}

fn abstract_unit_modulus(p: &IntPolynomial, root_box: &RootBox) -> bool {
    match p.degree() {
        0 => false,
        1 => {
            // root −c₀/c₁: unit modulus iff |c₀| = |c₁|.
            p.coeffs()[0].abs() == p.coeffs()[1].abs()
        }
        2 => {
            let c = &p.coeffs()[0];
            let b = &p.coeffs()[1];
            let a = &p.coeffs()[2];
            let disc = b * b - BigInt::from(4) * a * c;
            if disc.is_negative() {
                // Conjugate pair with product c/a; both roots share modulus.
                a == c
            } else {
                // Real roots of an irreducible quadratic are never ±1.
                false
            }
        }
        _ => {
            if !p.is_self_reciprocal() {
                return false;
            }
            reflection_fixed(p, root_box)
        }
    }
}

/// Decides whether the root z isolated by `root_box` satisfies z = 1/z̄.
///
/// Both z̄ and 1/z are roots of a self-reciprocal p, so w := 1/z̄ is a root.
/// If the distance between enclosures of z and w drops below the minimal
/// root separation of p, the two roots coincide and |z| = 1; if the exact
/// interval for |z|² separates from 1, they do not.
fn reflection_fixed(p: &IntPolynomial, root_box: &RootBox) -> bool {
    let sep_sq = root_separation_sq_lower_bound(p);
    let mut z0 = {
        let roots = durand_kerner(p);
        match roots.into_iter().find(|r| root_box.contains_f64(*r)) {
            Some(r) => r,
            None => return false,
        }
    };
    // Exact Newton refinement with dyadic rounding; the enclosure radius is
    // the certified bound n·|p(z)|/|p'(z)|.
    let deriv = p.derivative();
    let n_sq = Rat::from_integer(BigInt::from((p.degree() * p.degree()) as i64));
    for _ in 0..8 {
        z0 = newton_step_f64(p, &deriv, z0);
    }
    let mut center = (
        dyadic_round(z0.re, 200),
        dyadic_round(z0.im, 200),
    );
    // Refinement must stay near the isolating rectangle, else the enclosure
    // could certify the wrong root. Escapes past one box-size of margin are
    // an internal failure, not a verdict.
    let margin = (&root_box.re_hi - &root_box.re_lo) + (&root_box.im_hi - &root_box.im_lo);
    let in_margin = |c: &(Rat, Rat)| -> bool {
        c.0 >= &root_box.re_lo - &margin
            && c.0 <= &root_box.re_hi + &margin
            && c.1 >= &root_box.im_lo - &margin
            && c.1 <= &root_box.im_hi + &margin
    };
    for _ in 0..12 {
        assert!(in_margin(&center), "root refinement escaped the isolating rectangle");
        let zc = GaussianRational::new(center.0.clone(), center.1.clone());
        let pv = p.eval_gauss(&zc);
        let dv = deriv.eval_gauss(&zc);
        let dv_norm = dv.norm_sq();
        if dv_norm.is_zero() {
            return false;
        }
        let radius_sq = &n_sq * pv.norm_sq() / &dv_norm;
        // Box with half-side h such that h² ≥ radius_sq certainly contains
        // the nearest root; take h² = 2·radius_sq for slack.
        let h = rat_sqrt_upper(&(Rat::from_integer(BigInt::from(2)) * &radius_sq));
        let b = RootBox::new(
            &center.0 - &h,
            &center.0 + &h,
            &center.1 - &h,
            &center.1 + &h,
        );
        // Refute: exact interval for re²+im² excludes 1.
        let (lo, hi) = box_norm_sq_interval(&b);
        if lo > Rat::one() || hi < Rat::one() {
            return false;
        }
        // Certify: enclosure of w = 1/z̄ stays within separation distance.
        if let Some(wb) = box_reflect(&b) {
            let max_d2 = box_pair_max_dist_sq(&b, &wb);
            if max_d2 < sep_sq {
                return true;
            }
        }
        // Tighten with one exact Newton step.
        let num = pv;
        let new_re = &center.0 - (&num.re * &dv.re + &num.im * &dv.im) / &dv_norm;
        let new_im = &center.1 - (&num.im * &dv.re - &num.re * &dv.im) / &dv_norm;
        center = (dyadic_round_rat(&new_re, 400), dyadic_round_rat(&new_im, 400));
    }
    false
}

fn newton_step_f64(p: &IntPolynomial, deriv: &IntPolynomial, z: Complex64) -> Complex64 {
    let pv = p.eval_complex(z);
    let dv = deriv.eval_complex(z);
    if dv.norm_sqr() == 0.0 {
        z
    } else {
        z - pv / dv
    }
}

fn dyadic_round(x: f64, bits: u32) -> Rat {
    Rat::from_float(x).map(|r| dyadic_round_rat(&r, bits)).unwrap_or_else(Rat::zero)
}

fn dyadic_round_rat(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.round().to_integer(), scale)
}

/// Rational upper bound for √x.
fn rat_sqrt_upper(x: &Rat) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    // Integer sqrt of ceil(x · 4^k) over 2^k gives an upper bound after +1.
    let k = 120u32;
    let scaled = x * Rat::from_integer(BigInt::one() << (2 * k));
    let n = scaled.ceil().to_integer();
    let r = n.sqrt() + BigInt::one();
    Rat::new(r, BigInt::one() << k)
}

fn box_norm_sq_interval(b: &RootBox) -> (Rat, Rat) {
    let sq_interval = |lo: &Rat, hi: &Rat| -> (Rat, Rat) {
        let l2 = lo * lo;
        let h2 = hi * hi;
        if lo.is_negative() && hi.is_positive() {
            (Rat::zero(), l2.max(h2))
        } else {
            (l2.clone().min(h2.clone()), l2.max(h2))
        }
    };
    let (rl, rh) = sq_interval(&b.re_lo, &b.re_hi);
    let (il, ih) = sq_interval(&b.im_lo, &b.im_hi);
    (rl + il, rh + ih)
}

/// Exact interval enclosure of 1/conj(B) = {1/z̄ : z ∈ B}, or None if B may
/// contain 0. 1/z̄ = (re + i·im)/(re² + im²).
fn box_reflect(b: &RootBox) -> Option<RootBox> {
    let (nlo, nhi) = box_norm_sq_interval(b);
    if !nlo.is_positive() {
        return None;
    }
    let div_interval = |lo: &Rat, hi: &Rat| -> (Rat, Rat) {
        let combos = [lo / &nlo, lo / &nhi, hi / &nlo, hi / &nhi];
        let mut mn = combos[0].clone();
        let mut mx = combos[0].clone();
        for c in &combos[1..] {
            if c < &mn {
                mn = c.clone();
            }
            if c > &mx {
                mx = c.clone();
            }
        }
        (mn, mx)
    };
    let (re_lo, re_hi) = div_interval(&b.re_lo, &b.re_hi);
    let (im_lo, im_hi) = div_interval(&b.im_lo, &b.im_hi);
    Some(RootBox::new(re_lo, re_hi, im_lo, im_hi))
}

fn box_pair_max_dist_sq(a: &RootBox, b: &RootBox) -> Rat {
    let axis_max = |alo: &Rat, ahi: &Rat, blo: &Rat, bhi: &Rat| -> Rat {
        let d1 = (ahi - blo).abs();
        let d2 = (bhi - alo).abs();
        d1.max(d2)
    };
    let dre = axis_max(&a.re_lo, &a.re_hi, &b.re_lo, &b.re_hi);
    let dim = axis_max(&a.im_lo, &a.im_hi, &b.im_lo, &b.im_hi);
    &dre * &dre + &dim * &dim
}

/// Mignotte-style lower bound on the squared minimal root separation:
/// sep(p)² > 3·|disc(p)| / (n^(n+2) · ‖p‖₂^(2(n−1))).
fn root_separation_sq_lower_bound(p: &IntPolynomial) -> Rat {
    let n = p.degree();
    let disc = discriminant(p).abs();
    if disc.is_zero() {
        return Rat::zero();
    }
    let norm_sq = p.norm_sq();
    let mut denom = Rat::from_integer(BigInt::from(n as u64).pow((n + 2) as u32));
    denom *= Rat::from_integer(norm_sq.pow((n - 1) as u32));
    Rat::new(BigInt::from(3) * disc, BigInt::one()) / denom
}

/// disc(p) = (−1)^(n(n−1)/2) · Res(p, p′) / lead(p), via the Sylvester
/// determinant.
pub fn discriminant(p: &IntPolynomial) -> BigInt {
    let n = p.degree();
    if n == 0 {
        return BigInt::zero();
    }
    let dp = p.derivative();
    let res = resultant(p, &dp);
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let q = res / p.leading();
    q * BigInt::from(sign)
}

pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
    let n = p.degree();
    let m = q.degree();
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    let size = n + m;
    let mut mat = vec![vec![Rat::zero(); size]; size];
    // m rows of p's coefficients, then n rows of q's.
    for row in 0..m {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            mat[row][row + k] = Rat::from_integer(c.clone());
        }
    }
    for row in 0..n {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            mat[m + row][row + k] = Rat::from_integer(c.clone());
        }
    }
    let det = crate::linalg::det_rat(mat);
    det.to_integer()
}

/// Exact root-of-unity test.
///
/// Unit-modulus elements of ℚ(i) are roots of unity exactly when they are one
/// of the four units ±1, ±i. Abstract scalars must be algebraic integers
/// whose minimal polynomial divides xᵏ − 1 for some k ≤ 2·deg², the standard
/// bound on the order of a root of unity of given degree.
pub fn is_root_of_unity(z: &AlgebraicScalar) -> Result<bool, ScalarError> {
    if !unit_modulus(z) {
        return Err(ScalarError::NotUnitModulus);
    }
    match z {
        AlgebraicScalar::Gaussian(g) => {
            let one = Rat::one();
            let is_unit = (g.re.abs() == one && g.im.is_zero())
                || (g.im.abs() == one && g.re.is_zero());
            Ok(is_unit)
        }
        AlgebraicScalar::Abstract { minpoly, .. } => {
            if !minpoly.is_monic() {
                return Ok(false);
            }
            let d = minpoly.degree();
            let bound = 2 * d * d;
            // After iteration k, rem = x^k mod p; p monic keeps this in ℤ.
            let mut rem: Vec<BigInt> = vec![BigInt::one()];
            for _k in 1..=bound {
                rem.insert(0, BigInt::zero());
                while rem.len() > d {
                    let lead = rem.pop().unwrap();
                    if lead.is_zero() {
                        continue;
                    }
                    let shift = rem.len() - d;
                    for (i, c) in minpoly.coeffs().iter().take(d).enumerate() {
                        let v = &rem[shift + i] - &lead * c;
                        rem[shift + i] = v;
                    }
                }
                while rem.last().is_some_and(|c| c.is_zero()) {
                    rem.pop();
                }
                if rem.len() == 1 && rem[0].is_one() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Durand–Kerner simultaneous root iteration, as a search heuristic.
fn durand_kerner(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading().to_f64().unwrap_or(1.0);
    let monic: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(0.0) / lead)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + Complex64::new(*c, 0.0);
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(0.4, 0.9).powi(k as i32 + 1))
        .collect();
    for _ in 0..400 {
        let mut max_delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm_sqr() == 0.0 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            max_delta = max_delta.max(delta.norm());
        }
        if max_delta < 1e-14 {
            break;
        }
    }
    roots
}

/// Parses a scalar literal: `p/q`, `p/q+r/s*i`, or a JSON object
/// `{"minpoly": [c0, c1, ...], "root_box": [re_lo, re_hi, im_lo, im_hi]}`.
pub fn parse_scalar(s: &str) -> Result<AlgebraicScalar, ScalarError> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(t).map_err(|e| ScalarError::ParseError(e.to_string()))?;
        let coeffs = v
            .get("minpoly")
            .and_then(|m| m.as_array())
            .ok_or_else(|| ScalarError::ParseError("missing minpoly array".into()))?;
        let parsed: Result<Vec<BigInt>, ScalarError> = coeffs
            .iter()
            .map(|c| match c {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| ScalarError::ParseError("non-integer minpoly coefficient".into())),
                serde_json::Value::String(s) => BigInt::from_str(s)
                    .map_err(|_| ScalarError::ParseError(format!("bad coefficient {s}"))),
                _ => Err(ScalarError::ParseError("bad minpoly coefficient".into())),
            })
            .collect();
        let minpoly = IntPolynomial::new(parsed?);
        let bx = v
            .get("root_box")
            .and_then(|m| m.as_array())
            .ok_or_else(|| ScalarError::ParseError("missing root_box array".into()))?;
        if bx.len() != 4 {
            return Err(ScalarError::ParseError("root_box needs 4 entries".into()));
        }
        let corner = |idx: usize| -> Result<Rat, ScalarError> {
            match &bx[idx] {
                serde_json::Value::Number(n) => Rat::from_float(n.as_f64().unwrap_or(f64::NAN))
                    .ok_or_else(|| ScalarError::ParseError("bad root_box corner".into())),
                serde_json::Value::String(s) => parse_rational(s),
                _ => Err(ScalarError::ParseError("bad root_box corner".into())),
            }
        };
        let scalar = AlgebraicScalar::abstract_root(
            minpoly,
            RootBox::new(corner(0)?, corner(1)?, corner(2)?, corner(3)?),
        );
        scalar.validate()?;
        Ok(scalar)
    } else {
        Ok(AlgebraicScalar::Gaussian(parse_gaussian(t)?))
    }
}
