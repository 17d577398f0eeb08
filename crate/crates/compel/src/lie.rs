//! Structure-constant Lie algebras over ℚ: validation, derived and lower
//! central series, solvability and nilpotency, quotients, the solvable-
//! quotient classifier, and the nilpotent splice check.
//!
//! All linear algebra is exact; nilpotency verdicts never depend on a
//! tolerance.

use crate::linalg::{in_span, rref};
use crate::scalar::Rat;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("antisymmetry violated at basis pair ({i}, {j})")]
    AntisymmetryViolation { i: usize, j: usize },
    #[error("Jacobi identity violated at basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Sparse bracket entry: basis indices i, j and the coefficients of [eᵢ, eⱼ].
pub type SparseBracket = (usize, usize, Vec<(usize, Rat)>);

/// Subspace of a structure-constant algebra, stored as the reduced row
/// echelon basis (canonical: two subspaces are equal iff the rows are).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Self {
        let mut rows = vectors;
        let pivots = rref(&mut rows);
        SubspaceBasis { ambient_dim, rows, pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        in_span(v, &self.rows, &self.pivots)
    }

    pub fn contains(&self, other: &SubspaceBasis) -> bool {
        other.rows.iter().all(|r| self.contains_vec(r))
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }
}

/// Lie algebra given by rational structure constants c[i][j][k] with
/// [eᵢ, eⱼ] = Σₖ c[i][j][k] eₖ.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub constants: Vec<Vec<Vec<Rat>>>,
}

/// Output of the solvable-quotient classifier.
#[derive(Debug, Clone)]
pub struct ClassifierReport {
    /// True iff the perfect core is the whole nonzero algebra, or the
    /// quotient by the perfect core is non-nilpotent. For every nilpotent
    /// algebra this is false.
    pub verdict: bool,
    pub perfect_core: SubspaceBasis,
    pub quotient_nilpotent: bool,
}

/// Outcome of the splice hypotheses/conclusion check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpliceOutcome {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

impl LieAlgebra {
    pub fn new(dim: usize, basis_names: Vec<String>, constants: Vec<Vec<Vec<Rat>>>) -> Self {
        assert_eq!(basis_names.len(), dim);
        assert_eq!(constants.len(), dim);
        LieAlgebra { dim, basis_names, constants }
    }

    pub fn zero_algebra() -> Self {
        LieAlgebra { dim: 0, basis_names: Vec::new(), constants: Vec::new() }
    }

    /// Builds from a sparse bracket table; pairs omitted entirely get the
    /// antisymmetric completion of the pairs present (zero if neither (i,j)
    /// nor (j,i) occurs). Explicitly conflicting pairs are kept so that
    /// `validate` can report them.
    pub fn from_sparse(
        dim: usize,
        basis_names: Vec<String>,
        brackets: &[SparseBracket],
    ) -> Self {
        let mut c = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        let mut given = vec![vec![false; dim]; dim];
        for (i, j, coeffs) in brackets {
            given[*i][*j] = true;
            for (k, v) in coeffs {
                c[*i][*j][*k] = v.clone();
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if given[i][j] && !given[j][i] {
                    for k in 0..dim {
                        c[j][i][k] = -c[i][j][k].clone();
                    }
                }
            }
        }
        LieAlgebra::new(dim, basis_names, c)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.constants[i][j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[Rat], w: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if wj.is_zero() {
                    continue;
                }
                let scale = ui * wj;
                for k in 0..self.dim {
                    if !self.constants[i][j][k].is_zero() {
                        let v = &out[k] + &scale * &self.constants[i][j][k];
                        out[k] = v;
                    }
                }
            }
        }
        out
    }

    /// Checks antisymmetry and the Jacobi identity on all basis triples,
    /// reporting the first violation.
    pub fn validate(&self) -> Result<(), LieError> {
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    let sum = &self.constants[i][j][k] + &self.constants[j][i][k];
                    if !sum.is_zero() {
                        return Err(LieError::AntisymmetryViolation { i, j });
                    }
                }
            }
        }
        let basis_vec = |i: usize| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); self.dim];
            v[i] = Rat::from_integer(1.into());
            v
        };
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ei = basis_vec(i);
                    let ej = basis_vec(j);
                    let ek = basis_vec(k);
                    let t1 = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let t2 = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let t3 = self.bracket(&self.bracket(&ek, &ei), &ej);
                    for idx in 0..self.dim {
                        let s = &t1[idx] + &t2[idx] + &t3[idx];
                        if !s.is_zero() {
                            return Err(LieError::JacobiViolation { i, j, k });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn full_subspace(&self) -> SubspaceBasis {
        let rows: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim];
                v[i] = Rat::from_integer(1.into());
                v
            })
            .collect();
        SubspaceBasis::from_vectors(self.dim, rows)
    }

    fn check_subspace_dim(&self, s: &SubspaceBasis) -> Result<(), LieError> {
        if s.ambient_dim != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, got: s.ambient_dim });
        }
        Ok(())
    }

    /// span{[u, w] : u ∈ U basis, w ∈ W basis}, echelonized.
    pub fn product_space(
        &self,
        u: &SubspaceBasis,
        w: &SubspaceBasis,
    ) -> Result<SubspaceBasis, LieError> {
        self.check_subspace_dim(u)?;
        self.check_subspace_dim(w)?;
        let mut vecs = Vec::new();
        for a in &u.rows {
            for b in &w.rows {
                vecs.push(self.bracket(a, b));
            }
        }
        Ok(SubspaceBasis::from_vectors(self.dim, vecs))
    }

    /// Successive terms gⁿ⁺¹ = [gⁿ, gⁿ] until the series stalls; the final
    /// stable term (the perfect core) is included. A repeated nonzero term
    /// appears once more at the end; the zero subspace terminates the list.
    pub fn derived_series(&self) -> Vec<SubspaceBasis> {
        self.series(|current| self.product_space(current, current).unwrap())
    }

    /// Lower central series gᵐ⁺¹ = [g, gᵐ] with the same listing convention.
    pub fn lower_central_series(&self) -> Vec<SubspaceBasis> {
        let full = self.full_subspace();
        self.series(|current| self.product_space(&full, current).unwrap())
    }

    fn series<F: Fn(&SubspaceBasis) -> SubspaceBasis>(&self, step: F) -> Vec<SubspaceBasis> {
        let mut terms = vec![self.full_subspace()];
        loop {
            let last = terms.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = step(last);
            let stalled = &next == last;
            terms.push(next);
            if stalled {
                break;
            }
        }
        terms
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero()
    }

    pub fn is_ideal(&self, s: &SubspaceBasis) -> bool {
        if self.check_subspace_dim(s).is_err() {
            return false;
        }
        let full = self.full_subspace();
        match self.product_space(&full, s) {
            Ok(p) => s.contains(&p),
            Err(_) => false,
        }
    }

    /// Structure constants of a/ideal in the complement basis formed by the
    /// standard basis vectors away from the ideal's pivot columns.
    pub fn quotient(&self, ideal: &SubspaceBasis) -> Result<LieAlgebra, LieError> {
        self.check_subspace_dim(ideal)?;
        if !self.is_ideal(ideal) {
            return Err(LieError::NotAnIdeal);
        }
        let pivots: Vec<usize> = ideal.pivot_cols().to_vec();
        let complement: Vec<usize> =
            (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let m = complement.len();
        let names: Vec<String> =
            complement.iter().map(|&c| self.basis_names[c].clone()).collect();
        let project = |v: &[Rat]| -> Vec<Rat> {
            let reduced = crate::linalg::reduce_against(v, &ideal.rows, ideal.pivot_cols());
            complement.iter().map(|&c| reduced[c].clone()).collect()
        };
        let mut constants = vec![vec![vec![Rat::zero(); m]; m]; m];
        for (a, &i) in complement.iter().enumerate() {
            for (b, &j) in complement.iter().enumerate() {
                let mut ei = vec![Rat::zero(); self.dim];
                ei[i] = Rat::from_integer(1.into());
                let mut ej = vec![Rat::zero(); self.dim];
                ej[j] = Rat::from_integer(1.into());
                let w = project(&self.bracket(&ei, &ej));
                constants[a][b] = w;
            }
        }
        Ok(LieAlgebra::new(m, names, constants))
    }

    /// Perfect core: the stable term of the derived series.
    pub fn perfect_core(&self) -> SubspaceBasis {
        self.derived_series().last().unwrap().clone()
    }

    /// Classifier for generic non-finite-generation of derived subgroups of
    /// dense finitely generated subgroups: true iff the perfect core is the
    /// whole nonzero algebra or the quotient by it is non-nilpotent.
    pub fn classify(&self) -> ClassifierReport {
        let core = self.perfect_core();
        if core.rank() == self.dim && self.dim > 0 {
            return ClassifierReport { verdict: true, perfect_core: core, quotient_nilpotent: true };
        }
        let quotient = self.quotient(&core).expect("perfect core is an ideal");
        let quotient_nilpotent = quotient.is_nilpotent();
        ClassifierReport { verdict: !quotient_nilpotent, perfect_core: core, quotient_nilpotent }
    }

    /// Nilpotency of a bracket-closed subspace, via its lower central series
    /// computed inside the ambient coordinates.
    pub fn subalgebra_nilpotent(&self, s: &SubspaceBasis) -> bool {
        let mut current = s.clone();
        for _ in 0..=self.dim {
            if current.is_zero() {
                return true;
            }
            let next = self.product_space(s, &current).unwrap();
            if next == current {
                return false;
            }
            current = next;
        }
        current.is_zero()
    }

    /// Splice check: nilpotent ideals k ⊆ j⁽¹⁾ ⊆ j with nilpotent quotient
    /// a/k force a nilpotent. Reports whether the hypotheses hold and
    /// whether the conclusion does.
    pub fn splice_check(
        &self,
        j: &SubspaceBasis,
        k: &SubspaceBasis,
    ) -> Result<SpliceOutcome, LieError> {
        self.check_subspace_dim(j)?;
        self.check_subspace_dim(k)?;
        let hypotheses_hold = self.is_ideal(j)
            && self.is_ideal(k)
            && {
                let j1 = self.product_space(j, j)?;
                j1.contains(k) && j.contains(&j1)
            }
            && self.subalgebra_nilpotent(j)
            && self.subalgebra_nilpotent(k)
            && self.quotient(k).map(|q| q.is_nilpotent()).unwrap_or(false);
        Ok(SpliceOutcome { hypotheses_hold, conclusion_holds: self.is_nilpotent() })
    }
}
