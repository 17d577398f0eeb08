//! Multivariate Laurent polynomials with Gaussian-rational coefficients, and
//! the exact symbolic determinant used for fixed-point-freeness tests on
//! torus cosets.

use crate::scalar::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in `nvars` variables; no zero coefficients are stored,
/// and the term order is the BTreeMap exponent order, so representation is
/// canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<i64>, c: GaussianRational) -> Self {
        assert_eq!(exponents.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(GaussianRational::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.mul(c2);
                let entry = out.terms.entry(e.clone()).or_insert_with(GaussianRational::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    /// Exact evaluation at a point with invertible coordinates.
    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                term = term.mul(&x.pow(k));
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var_name = |i: usize| -> String {
            if self.nvars == 1 {
                "t".to_string()
            } else {
                format!("t{}", i + 1)
            }
        };
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        var_name(i)
                    } else {
                        format!("{}^{}", var_name(i), k)
                    }
                })
                .collect();
            let coeff = c.to_literal();
            let body = if mono.is_empty() {
                coeff
            } else if c.is_one() {
                mono.join("*")
            } else if c.neg().is_one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("({})*{}", coeff, mono.join("*"))
            };
            if first {
                write!(f, "{}", body)?;
                first = false;
            } else if let Some(stripped) = body.strip_prefix('-') {
                write!(f, " - {}", stripped)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix of Laurent polynomials by the Leibniz
/// expansion; the matrices here have monomial entries, so the permutation
/// sum is exact and cheap at desk scale (m ≤ 8).
pub fn det_laurent(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let m = mat.len();
    let nvars = if m == 0 { 0 } else { mat[0][0].nvars };
    if m == 0 {
        return LaurentPoly::one(0);
    }
    let mut acc = LaurentPoly::zero(nvars);
    let mut perm: Vec<usize> = (0..m).collect();
    permute(&mut perm, 0, &mut |p, sign| {
        let mut prod = LaurentPoly::one(nvars);
        for (row, &col) in p.iter().enumerate() {
            prod = prod.mul(&mat[row][col]);
            if prod.is_zero() {
                break;
            }
        }
        if sign < 0 {
            prod = prod.neg();
        }
        acc = acc.add(&prod);
    });
    acc
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], i32)) {
    let n = perm.len();
    if k == n {
        let mut sign = 1;
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = perm[cur];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        visit(perm, sign);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}
