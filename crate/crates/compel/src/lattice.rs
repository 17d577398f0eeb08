//! Finitely generated subgroups of ℚⁿ in canonical Hermite form, and the
//! module chain oracle that tests finite generation of the derived-subgroup
//! module Σ_n ℤ(1 − zⁿ) independently of the closed-form integrality
//! criterion.

use crate::linalg::hnf_int;
use crate::scalar::{
    is_algebraic_integer, unit_modulus, AlgebraicScalar, GaussianRational, Rat,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("scalar does not have unit modulus")]
    NotUnitModulus,
    #[error("degenerate scalar z = 1: the module chain is identically zero")]
    DegenerateScalar,
}

/// Generating set for a subgroup of ℚⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSet {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<Rat>>,
}

impl GenSet {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<Rat>>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), ambient_dim, "generator has wrong length");
        }
        GenSet { ambient_dim, generators }
    }
}

/// Canonical form of a finitely generated subgroup of ℚⁿ: the lattice is
/// (1/d)·(ℤ-span of the HNF basis rows), with d minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeForm {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<BigInt>>,
    pub denominator: BigInt,
    pub rank: usize,
    pub covolume: Rat,
}

impl LatticeForm {
    /// Pivot entries of the HNF rows.
    fn pivots(basis: &[Vec<BigInt>]) -> Vec<BigInt> {
        basis
            .iter()
            .map(|row| row.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigInt::zero))
            .collect()
    }

    /// Membership test for a rational vector.
    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        // d·v must be integral, then solve against the HNF basis greedily.
        let mut target: Vec<Rat> = v
            .iter()
            .map(|x| x * Rat::from_integer(self.denominator.clone()))
            .collect();
        for row in &self.basis {
            let pivot_col = row.iter().position(|x| !x.is_zero()).unwrap();
            if target[pivot_col].is_zero() {
                continue;
            }
            let q = &target[pivot_col] / Rat::from_integer(row[pivot_col].clone());
            if !q.denom().is_one() {
                return false;
            }
            for c in 0..self.ambient_dim {
                let t = &target[c] - &q * Rat::from_integer(row[c].clone());
                target[c] = t;
            }
        }
        target.iter().all(|x| x.is_zero())
    }

    /// True iff every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &LatticeForm) -> bool {
        other.basis.iter().all(|row| {
            let v: Vec<Rat> = row
                .iter()
                .map(|x| Rat::new(x.clone(), other.denominator.clone()))
                .collect();
            self.contains(&v)
        })
    }
}

/// Canonical Hermite form of the span of a generating set.
pub fn hnf(gens: &GenSet) -> LatticeForm {
    let n = gens.ambient_dim;
    let mut denom = BigInt::one();
    for g in &gens.generators {
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = gens
        .generators
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| x.numer() * (&denom / x.denom()))
                .collect()
        })
        .collect();
    let mut basis = hnf_int(int_rows);
    basis.retain(|row| row.iter().any(|x| !x.is_zero()));
    // Minimal denominator: divide out the common content of basis and d.
    let mut g = denom.clone();
    for row in &basis {
        for x in row {
            g = g.gcd(x);
        }
    }
    if !g.is_one() && !g.is_zero() {
        for row in basis.iter_mut() {
            for x in row.iter_mut() {
                *x /= &g;
            }
        }
        denom /= &g;
    }
    let rank = basis.len();
    let pivots = LatticeForm::pivots(&basis);
    let mut covolume = Rat::one();
    for p in pivots {
        covolume *= Rat::from_integer(p);
    }
    covolume /= Rat::from_integer(denom.pow(rank as u32));
    LatticeForm { ambient_dim: n, basis, denominator: denom, rank, covolume }
}

/// Verdict of the bounded chain computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVerdict {
    Stabilized,
    NotStabilizedByBound,
}

/// Ranks and covolumes of the truncated module chain, level by level.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub ranks: Vec<usize>,
    pub covolumes: Vec<Rat>,
    pub stabilized_at: Option<usize>,
    pub verdict: ChainVerdict,
}

/// Chain computation with the per-level lattices retained for auditing.
#[derive(Debug, Clone)]
pub struct ChainComputation {
    pub report: ChainReport,
    pub levels: Vec<LatticeForm>,
}

/// Coordinates of 1 − zⁿ: in ℚ² (re, im) for Gaussian z, in the power basis
/// of ℚ(z) for abstract z. Evaluation ℚ(z) → ℂ is injective and ℚ-linear,
/// so finite generation is preserved by either coordinate choice.
fn chain_vectors(z: &AlgebraicScalar, level: usize) -> (usize, Vec<Vec<Rat>>) {
    match z {
        AlgebraicScalar::Gaussian(g) => {
            let mut vecs = Vec::new();
            let mut pos = GaussianRational::one();
            let mut neg = GaussianRational::one();
            let inv = g.inv().expect("unit-modulus scalar is nonzero");
            for _ in 1..=level {
                pos = pos.mul(g);
                neg = neg.mul(&inv);
                for w in [&pos, &neg] {
                    let one_minus = GaussianRational::one().sub(w);
                    vecs.push(vec![one_minus.re.clone(), one_minus.im.clone()]);
                }
            }
            (2, vecs)
        }
        AlgebraicScalar::Abstract { minpoly, .. } => {
            let d = minpoly.degree();
            // Multiplication by z and by z⁻¹ in the power basis.
            let lead = Rat::from_integer(minpoly.leading());
            let reduce_top = |coeffs: &mut Vec<Rat>| {
                // knock down degree-d coefficient using p.
                while coeffs.len() > d {
                    let top = coeffs.pop().unwrap();
                    if top.is_zero() {
                        continue;
                    }
                    let shift = coeffs.len() - d;
                    let factor = &top / &lead;
                    for (i, c) in minpoly.coeffs().iter().take(d).enumerate() {
                        let v = &coeffs[shift + i] - &factor * Rat::from_integer(c.clone());
                        coeffs[shift + i] = v;
                    }
                }
                coeffs.resize(d, Rat::zero());
            };
            let mul_z = |v: &[Rat]| -> Vec<Rat> {
                let mut out = vec![Rat::zero()];
                out.extend_from_slice(v);
                reduce_top(&mut out);
                out
            };
            // z⁻¹ = −(c₁ + c₂z + … + c_d z^{d−1})/c₀.
            let c0 = Rat::from_integer(minpoly.coeffs()[0].clone());
            assert!(!c0.is_zero(), "irreducible minpoly has nonzero constant term");
            let z_inv: Vec<Rat> = (1..=d)
                .map(|k| -(Rat::from_integer(minpoly.coeffs()[k].clone()) / &c0))
                .collect();
            let mul_vec = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
                let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        let v = &out[i + j] + x * y;
                        out[i + j] = v;
                    }
                }
                reduce_top(&mut out);
                out
            };
            let mut one = vec![Rat::zero(); d];
            one[0] = Rat::one();
            let mut pos = one.clone();
            let mut neg = one.clone();
            let mut vecs = Vec::new();
            for _ in 1..=level {
                pos = mul_z(&pos);
                neg = mul_vec(&neg, &z_inv);
                for w in [&pos, &neg] {
                    let mut v = vec![Rat::zero(); d];
                    for i in 0..d {
                        v[i] = &one[i] - &w[i];
                    }
                    vecs.push(v);
                }
            }
            (d, vecs)
        }
    }
}

/// Computes the Hermite forms of the ℤ-span of {1 − zⁿ : 0 < |n| ≤ N} for
/// N = 1..bound and reports stabilization (two consecutive equal forms).
pub fn derived_module_chain(
    z: &AlgebraicScalar,
    bound: usize,
) -> Result<ChainComputation, LatticeError> {
    if !unit_modulus(z) {
        return Err(LatticeError::NotUnitModulus);
    }
    if z.is_one() {
        return Err(LatticeError::DegenerateScalar);
    }
    let mut levels: Vec<LatticeForm> = Vec::with_capacity(bound);
    let mut ranks = Vec::with_capacity(bound);
    let mut covolumes = Vec::with_capacity(bound);
    let mut stabilized_at = None;
    for level in 1..=bound {
        let (dim, vecs) = chain_vectors(z, level);
        let form = hnf(&GenSet::new(dim, vecs));
        ranks.push(form.rank);
        covolumes.push(form.covolume.clone());
        if stabilized_at.is_none() {
            if let Some(prev) = levels.last() {
                if *prev == form {
                    stabilized_at = Some(level);
                }
            }
        }
        levels.push(form);
    }
    let verdict = if stabilized_at.is_some() {
        ChainVerdict::Stabilized
    } else {
        ChainVerdict::NotStabilizedByBound
    };
    Ok(ChainComputation {
        report: ChainReport { ranks, covolumes, stabilized_at, verdict },
        levels,
    })
}

/// Closed-form finite-generation criterion for the module Σ_n ℤ(1 − zⁿ):
/// finitely generated precisely when z is an algebraic integer.
pub fn fg_derived_criterion(z: &AlgebraicScalar) -> Result<bool, LatticeError> {
    if !unit_modulus(z) {
        return Err(LatticeError::NotUnitModulus);
    }
    Ok(is_algebraic_integer(z))
}

/// Generator of the subgroup of ℚ spanned by finitely many rationals: every
/// finitely generated subgroup of ℚ is cyclic. Returns g ≥ 0 with
/// ⟨gens⟩_ℤ = gℤ.
pub fn subgroup_of_q_generator(gens: &[Rat]) -> Rat {
    let mut lcm = BigInt::one();
    for g in gens {
        lcm = lcm.lcm(g.denom());
    }
    let mut gcd = BigInt::zero();
    for g in gens {
        let scaled = g.numer() * (&lcm / g.denom());
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return Rat::zero();
    }
    Rat::new(gcd, lcm)
}
