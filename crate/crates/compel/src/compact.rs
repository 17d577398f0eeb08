//! Decision engine for almost-ellipticity of `V ⋊ K` where `K` is a finite
//! extension of a torus acting linearly on a complex weight-line
//! decomposition of `V`.
//!
//! Per component σ the relevant data is the symbolic Laurent determinant
//! `det(I − D(t)·ρ(σ))` over a subtorus: a nonzero Laurent polynomial is
//! nonzero on a dense subset of the torus, so fixed-point-freeness on a
//! dense set reduces to an exact zero-polynomial test.

use crate::laurent::{det_laurent, LaurentPoly};
use crate::linalg::{det_gauss, integer_kernel};
use crate::scalar::GaussianRational;
use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompactError {
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("unknown component label: {0}")]
    UnknownComponent(String),
    #[error("invalid group spec at {location}: {message}")]
    Invalid { location: String, message: String },
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> CompactError {
    CompactError::Invalid { location: location.into(), message: message.into() }
}

/// Integer weight vectors of the complex weight-line decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusWeights {
    pub torus_rank: usize,
    pub weights: Vec<Vec<i64>>,
}

/// One connected component of K: the induced torus automorphism (in
/// cocharacter coordinates) and the representation matrix of a chosen
/// representative in the weight basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDatum {
    pub label: String,
    pub torus_aut: Vec<Vec<i64>>,
    pub rep_matrix: Vec<Vec<GaussianRational>>,
}

/// K with toral identity component: torus weights, one datum per component
/// of the finite component group F, and F's multiplication table (entries
/// index into `components`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompactGroupSpec {
    pub weights: TorusWeights,
    pub components: Vec<ComponentDatum>,
    pub component_table: Vec<Vec<usize>>,
}

/// Componentwise outcome of the (c) vs (d) comparison.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub per_component: Vec<(String, bool, bool)>,
    pub disagreements: Vec<String>,
}

/// Basis of the identity component of the σ-fixed subtorus: integer kernel
/// of A − I, one basis vector per row. Automatically saturated.
pub fn fixed_subtorus(torus_aut: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = torus_aut.len();
    if r == 0 {
        return Vec::new();
    }
    let mut m = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            m[i][j] = torus_aut[i][j] - if i == j { 1 } else { 0 };
        }
    }
    integer_kernel(&m)
        .into_iter()
        .map(|row| row.iter().map(|x| x.to_i64().expect("desk-scale kernel entries")).collect())
        .collect()
}

fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let mat: Vec<Vec<crate::scalar::Rat>> = m
        .iter()
        .map(|row| row.iter().map(|&x| crate::scalar::rat_int(x)).collect())
        .collect();
    crate::linalg::det_rat(mat)
        .to_integer()
        .to_i64()
        .expect("desk-scale determinant")
}

impl CompactGroupSpec {
    pub fn component_index(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }

    /// Index of the identity component in the table.
    pub fn identity_index(&self) -> Result<usize, CompactError> {
        let n = self.components.len();
        for e in 0..n {
            let is_identity = (0..n)
                .all(|j| self.component_table[e][j] == j && self.component_table[j][e] == j);
            if is_identity {
                return Ok(e);
            }
        }
        Err(invalid("component_table", "no identity element"))
    }

    /// Full validation: group table, identity datum, weight compatibility,
    /// block pattern, invertibility, and the homomorphism law for the torus
    /// automorphisms (which forces them to have finite order). Returns
    /// non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>, CompactError> {
        let r = self.weights.torus_rank;
        let m = self.weights.weights.len();
        let n = self.components.len();
        if n == 0 {
            return Err(invalid("components", "at least one component required"));
        }
        for (wi, w) in self.weights.weights.iter().enumerate() {
            if w.len() != r {
                return Err(invalid(format!("weights[{wi}]"), "wrong torus rank"));
            }
        }
        if self.component_table.len() != n
            || self.component_table.iter().any(|row| row.len() != n)
        {
            return Err(invalid("component_table", "table must be n×n"));
        }
        for row in &self.component_table {
            for &v in row {
                if v >= n {
                    return Err(invalid("component_table", "entry out of range"));
                }
            }
        }
        // Group axioms: identity, associativity, inverses.
        let e = self.identity_index()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab_c = self.component_table[self.component_table[a][b]][c];
                    let a_bc = self.component_table[a][self.component_table[b][c]];
                    if ab_c != a_bc {
                        return Err(invalid(
                            "component_table",
                            format!("associativity fails at ({a}, {b}, {c})"),
                        ));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| self.component_table[a][b] == e) {
                return Err(invalid("component_table", format!("component {a} has no inverse")));
            }
        }
        // Per-component shape and invariants.
        let sorted_weights = {
            let mut v = self.weights.weights.clone();
            v.sort();
            v
        };
        for (ci, comp) in self.components.iter().enumerate() {
            let loc = format!("components[{}] ({})", ci, comp.label);
            if comp.torus_aut.len() != r || comp.torus_aut.iter().any(|row| row.len() != r) {
                return Err(invalid(&loc, "torus_aut must be r×r"));
            }
            if comp.rep_matrix.len() != m || comp.rep_matrix.iter().any(|row| row.len() != m) {
                return Err(invalid(&loc, "rep_matrix must be m×m"));
            }
            if r > 0 {
                let d = det_i64(&comp.torus_aut);
                if d != 1 && d != -1 {
                    return Err(invalid(&loc, format!("torus_aut determinant {d}, expected ±1")));
                }
            }
            // Multiset {Aᵀλ} = {λ}.
            let mut mapped: Vec<Vec<i64>> = self
                .weights
                .weights
                .iter()
                .map(|lam| apply_aut_transpose(&comp.torus_aut, lam))
                .collect();
            mapped.sort();
            if mapped != sorted_weights {
                return Err(invalid(&loc, "torus_aut does not permute the weight multiset"));
            }
            // Block pattern: ρ_{ij} ≠ 0 forces λ_j = Aᵀλ_i. Together with
            // invertibility this is exactly the conjugation law
            // ρ(σ)·D(t)·ρ(σ)⁻¹ = D(A·t).
            for i in 0..m {
                let target = apply_aut_transpose(&comp.torus_aut, &self.weights.weights[i]);
                for j in 0..m {
                    if !comp.rep_matrix[i][j].is_zero() && self.weights.weights[j] != target {
                        return Err(invalid(
                            &loc,
                            format!("rep_matrix entry ({i}, {j}) violates weight compatibility"),
                        ));
                    }
                }
            }
            if m > 0 && det_gauss(comp.rep_matrix.clone()).is_zero() {
                return Err(invalid(&loc, "rep_matrix is singular"));
            }
        }
        // Identity component carries the trivial datum.
        let id_comp = &self.components[e];
        let is_id_aut = id_comp
            .torus_aut
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)));
        let is_id_rep = id_comp.rep_matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        });
        if !is_id_aut || !is_id_rep {
            return Err(invalid(
                format!("components[{e}]"),
                "identity component must act trivially",
            ));
        }
        // σ ↦ A_σ must be a homomorphism; in a genuine extension of F by the
        // torus the conjugation action is multiplicative, and it gives each
        // A finite order (needed for the fixed/moved splitting of the torus).
        for a in 0..n {
            for b in 0..n {
                let prod = mat_mul_i64(&self.components[a].torus_aut, &self.components[b].torus_aut);
                if prod != self.components[self.component_table[a][b]].torus_aut {
                    return Err(invalid(
                        "components",
                        format!("torus automorphisms are not multiplicative at ({a}, {b})"),
                    ));
                }
            }
        }
        let mut warnings = Vec::new();
        let mut negated: Vec<Vec<i64>> = self
            .weights
            .weights
            .iter()
            .map(|w| w.iter().map(|x| -x).collect())
            .collect();
        negated.sort();
        if negated != sorted_weights {
            warnings.push(
                "weight multiset is not closed under negation; a real representation would be"
                    .to_string(),
            );
        }
        Ok(warnings)
    }

    /// Exact Laurent polynomial `u ↦ det(I − D(B·u)·ρ(σ))` where the columns
    /// of B span the chosen subtorus and D is the diagonal weight action.
    pub fn generic_det(
        &self,
        label: &str,
        subtorus: &[Vec<i64>],
    ) -> Result<LaurentPoly, CompactError> {
        let ci = self
            .component_index(label)
            .ok_or_else(|| CompactError::InvalidComponent(label.to_string()))?;
        let comp = &self.components[ci];
        let m = self.weights.weights.len();
        let nvars = subtorus.len();
        let mut mat = vec![vec![LaurentPoly::zero(nvars); m]; m];
        for i in 0..m {
            // Exponent of the i-th weight under the subtorus parametrization.
            let expo: Vec<i64> = subtorus
                .iter()
                .map(|b| b.iter().zip(&self.weights.weights[i]).map(|(x, y)| x * y).sum())
                .collect();
            for j in 0..m {
                let mut entry = LaurentPoly::zero(nvars);
                if i == j {
                    entry = LaurentPoly::one(nvars);
                }
                if !comp.rep_matrix[i][j].is_zero() {
                    entry = entry.sub(&LaurentPoly::monomial(
                        nvars,
                        expo.clone(),
                        comp.rep_matrix[i][j].clone(),
                    ));
                }
                mat[i][j] = entry;
            }
        }
        Ok(det_laurent(&mat))
    }

    /// Standard basis of the full torus, for the unrestricted determinant.
    pub fn full_torus_basis(&self) -> Vec<Vec<i64>> {
        let r = self.weights.torus_rank;
        (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    /// Per component σ: is the set of fixed-point-free elements dense in the
    /// coset K₀σ? True iff the full-torus determinant is not identically 0.
    pub fn cond_c_check(&self) -> BTreeMap<String, bool> {
        let basis = self.full_torus_basis();
        self.components
            .iter()
            .map(|c| {
                let det = self.generic_det(&c.label, &basis).expect("component exists");
                (c.label.clone(), !det.is_zero())
            })
            .collect()
    }

    /// The same question restricted to the σ-fixed subtorus (T^σ)₀; when the
    /// fixed subtorus is trivial this is a single exact determinant at 1.
    pub fn cond_d_check(&self) -> BTreeMap<String, bool> {
        self.components
            .iter()
            .map(|c| {
                let basis = fixed_subtorus(&c.torus_aut);
                let det = self.generic_det(&c.label, &basis).expect("component exists");
                (c.label.clone(), !det.is_zero())
            })
            .collect()
    }

    /// Density of elliptic elements in V ⋊ K: conjunction of the per-coset
    /// fixed-point-freeness verdicts over all components.
    pub fn almost_elliptic(&self) -> bool {
        self.cond_c_check().values().all(|&v| v)
    }

    /// Componentwise comparison of the full-coset and fixed-subtorus
    /// verdicts; a disagreement is reported, not an error.
    pub fn equivalence_audit(&self) -> AuditReport {
        let c = self.cond_c_check();
        let d = self.cond_d_check();
        let mut per_component = Vec::new();
        let mut disagreements = Vec::new();
        for comp in &self.components {
            let vc = c[&comp.label];
            let vd = d[&comp.label];
            per_component.push((comp.label.clone(), vc, vd));
            if vc != vd {
                disagreements.push(comp.label.clone());
            }
        }
        AuditReport { per_component, disagreements }
    }

    /// Sub-spec generated by one component: same torus and weights, cyclic
    /// component group ⟨σ⟩.
    pub fn monothetic_reduction(&self, label: &str) -> Result<CompactGroupSpec, CompactError> {
        let start = self
            .component_index(label)
            .ok_or_else(|| CompactError::UnknownComponent(label.to_string()))?;
        let e = self.identity_index()?;
        let mut subgroup = vec![e];
        let mut cur = start;
        while cur != e && !subgroup.contains(&cur) {
            subgroup.push(cur);
            cur = self.component_table[cur][start];
        }
        subgroup.sort();
        let position = |idx: usize| subgroup.iter().position(|&x| x == idx).unwrap();
        let components: Vec<ComponentDatum> =
            subgroup.iter().map(|&i| self.components[i].clone()).collect();
        let table: Vec<Vec<usize>> = subgroup
            .iter()
            .map(|&a| {
                subgroup
                    .iter()
                    .map(|&b| position(self.component_table[a][b]))
                    .collect()
            })
            .collect();
        Ok(CompactGroupSpec {
            weights: self.weights.clone(),
            components,
            component_table: table,
        })
    }
}

fn apply_aut_transpose(a: &[Vec<i64>], lam: &[i64]) -> Vec<i64> {
    let r = a.len();
    (0..r).map(|k| (0..r).map(|l| a[l][k] * lam[l]).sum()).collect()
}

// ---------------------------------------------------------------------------
// Randomized valid specs, for the equivalence audit
// ---------------------------------------------------------------------------

/// Bounds for randomized spec generation.
#[derive(Debug, Clone, Copy)]
pub struct RandomSpecParams {
    pub max_rank: usize,
    pub max_weights: usize,
    pub max_component_group: usize,
}

impl Default for RandomSpecParams {
    fn default() -> Self {
        RandomSpecParams { max_rank: 3, max_weights: 6, max_component_group: 4 }
    }
}

/// Random signed permutation matrix of size r.
fn random_signed_permutation<R: Rng>(rng: &mut R, r: usize) -> Vec<Vec<i64>> {
    let mut perm: Vec<usize> = (0..r).collect();
    for i in (1..r).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut m = vec![vec![0i64; r]; r];
    for (i, &p) in perm.iter().enumerate() {
        m[i][p] = if rng.random_bool(0.5) { 1 } else { -1 };
    }
    m
}

fn identity_i64(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn matrix_order(a: &[Vec<i64>], cap: usize) -> Option<usize> {
    let r = a.len();
    let id = identity_i64(r);
    let mut acc = a.to_vec();
    for k in 1..=cap {
        if acc == id {
            return Some(k);
        }
        acc = mat_mul_i64(&acc, a);
    }
    None
}

/// Builds a random spec satisfying every validation invariant: a component
/// group of order ≤ 4, torus automorphisms forming a homomorphic image of
/// it, an orbit-closed weight multiset, and invertible block-compatible
/// representation matrices.
pub fn random_spec<R: Rng>(rng: &mut R, params: &RandomSpecParams) -> CompactGroupSpec {
    loop {
        if let Some(spec) = try_random_spec(rng, params) {
            if spec.validate().is_ok() {
                return spec;
            }
        }
    }
}

fn try_random_spec<R: Rng>(rng: &mut R, params: &RandomSpecParams) -> Option<CompactGroupSpec> {
    let r = rng.random_range(1..=params.max_rank);
    // Component group: C1, C2, C3, C4 or the Klein group.
    let group_kind = rng.random_range(0..5u8);
    let (order, table): (usize, Vec<Vec<usize>>) = match group_kind {
        0 => (1, vec![vec![0]]),
        1..=3 => {
            let k = group_kind as usize + 1;
            let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
            (k, table)
        }
        _ => {
            let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
            (4, table)
        }
    };
    if order > params.max_component_group {
        return None;
    }
    // Torus automorphisms: a homomorphism F → GL_r(ℤ) built on generators.
    let auts: Vec<Vec<Vec<i64>>> = match group_kind {
        0 => vec![identity_i64(r)],
        1..=3 => {
            let k = group_kind as usize + 1;
            let mut gen = identity_i64(r);
            for _ in 0..60 {
                let cand = random_signed_permutation(rng, r);
                if let Some(o) = matrix_order(&cand, 24) {
                    if k.is_multiple_of(o) {
                        gen = cand;
                        break;
                    }
                }
            }
            let mut out = vec![identity_i64(r)];
            let mut acc = gen.clone();
            for _ in 1..k {
                out.push(acc.clone());
                acc = mat_mul_i64(&acc, &gen);
            }
            out
        }
        _ => {
            // Klein group: two commuting involutions; diagonal sign matrices
            // always qualify.
            let diag_sign = |rng: &mut R| -> Vec<Vec<i64>> {
                let mut m = identity_i64(r);
                for i in 0..r {
                    if rng.random_bool(0.5) {
                        m[i][i] = -1;
                    }
                }
                m
            };
            let g1 = diag_sign(rng);
            let g2 = diag_sign(rng);
            vec![
                identity_i64(r),
                g1.clone(),
                g2.clone(),
                mat_mul_i64(&g1, &g2),
            ]
        }
    };
    // Orbit-closed weight multiset.
    let target = rng.random_range(1..=params.max_weights);
    let mut weights: Vec<Vec<i64>> = Vec::new();
    for _ in 0..12 {
        if weights.len() >= target {
            break;
        }
        let seed: Vec<i64> = (0..r).map(|_| rng.random_range(-2i64..=2)).collect();
        let mut orbit: Vec<Vec<i64>> = vec![seed];
        loop {
            let mut grew = false;
            for a in &auts {
                for w in orbit.clone() {
                    let im = apply_aut_transpose(a, &w);
                    if !orbit.contains(&im) {
                        orbit.push(im);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if weights.len() + orbit.len() <= params.max_weights {
            weights.extend(orbit);
        }
    }
    if weights.is_empty() {
        return None;
    }
    let m = weights.len();
    // Representation matrices: invertible fill of the compatible block
    // pattern, entries drawn from a small pool of exact scalars.
    let pool: Vec<GaussianRational> = vec![
        GaussianRational::one(),
        GaussianRational::one().neg(),
        GaussianRational::i(),
        GaussianRational::i().neg(),
        GaussianRational::new(crate::scalar::rat(3, 5), crate::scalar::rat(4, 5)),
        GaussianRational::new(crate::scalar::rat(1, 1), crate::scalar::rat(1, 1)),
        GaussianRational::new(crate::scalar::rat(1, 2), crate::scalar::rat(0, 1)),
    ];
    let mut components = Vec::new();
    for (ci, aut) in auts.iter().enumerate() {
        let rep = if ci == 0 {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            if i == j {
                                GaussianRational::one()
                            } else {
                                GaussianRational::zero()
                            }
                        })
                        .collect()
                })
                .collect::<Vec<Vec<GaussianRational>>>()
        } else {
            let mut rep = None;
            'attempt: for _ in 0..40 {
                let mut cand = vec![vec![GaussianRational::zero(); m]; m];
                for i in 0..m {
                    let tgt = apply_aut_transpose(aut, &weights[i]);
                    let allowed: Vec<usize> = (0..m).filter(|&j| weights[j] == tgt).collect();
                    if allowed.is_empty() {
                        continue 'attempt;
                    }
                    for &j in &allowed {
                        if rng.random_bool(0.6) {
                            cand[i][j] = pool[rng.random_range(0..pool.len())].clone();
                        }
                    }
                    // Guarantee a nonzero entry in every row.
                    if allowed.iter().all(|&j| cand[i][j].is_zero()) {
                        let j = allowed[rng.random_range(0..allowed.len())];
                        cand[i][j] = pool[rng.random_range(0..pool.len())].clone();
                    }
                }
                if !det_gauss(cand.clone()).is_zero() {
                    rep = Some(cand);
                    break;
                }
            }
            rep?
        };
        components.push(ComponentDatum {
            label: if ci == 0 { "1".to_string() } else { format!("s{}", ci) },
            torus_aut: aut.clone(),
            rep_matrix: rep,
        });
    }
    Some(CompactGroupSpec {
        weights: TorusWeights { torus_rank: r, weights },
        components,
        component_table: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(n: i64) -> GaussianRational {
        GaussianRational::from_rat(rat(n, 1))
    }

    pub fn z2_spec() -> CompactGroupSpec {
        CompactGroupSpec {
            weights: TorusWeights { torus_rank: 1, weights: vec![vec![1], vec![-1]] },
            components: vec![
                ComponentDatum {
                    label: "1".into(),
                    torus_aut: vec![vec![1]],
                    rep_matrix: vec![vec![c(1), c(0)], vec![c(0), c(1)]],
                },
                ComponentDatum {
                    label: "s".into(),
                    torus_aut: vec![vec![-1]],
                    rep_matrix: vec![vec![c(0), c(1)], vec![c(1), c(0)]],
                },
            ],
            component_table: vec![vec![0, 1], vec![1, 0]],
        }
    }

    pub fn circle_rotation_spec() -> CompactGroupSpec {
        CompactGroupSpec {
            weights: TorusWeights { torus_rank: 1, weights: vec![vec![1]] },
            components: vec![ComponentDatum {
                label: "1".into(),
                torus_aut: vec![vec![1]],
                rep_matrix: vec![vec![c(1)]],
            }],
            component_table: vec![vec![0]],
        }
    }

    pub fn trivial_action_spec() -> CompactGroupSpec {
        CompactGroupSpec {
            weights: TorusWeights { torus_rank: 1, weights: vec![vec![0]] },
            components: vec![ComponentDatum {
                label: "1".into(),
                torus_aut: vec![vec![1]],
                rep_matrix: vec![vec![c(1)]],
            }],
            component_table: vec![vec![0]],
        }
    }

    pub fn swap_torus_spec() -> CompactGroupSpec {
        CompactGroupSpec {
            weights: TorusWeights { torus_rank: 2, weights: vec![vec![1, 0], vec![0, 1]] },
            components: vec![
                ComponentDatum {
                    label: "1".into(),
                    torus_aut: vec![vec![1, 0], vec![0, 1]],
                    rep_matrix: vec![vec![c(1), c(0)], vec![c(0), c(1)]],
                },
                ComponentDatum {
                    label: "s".into(),
                    torus_aut: vec![vec![0, 1], vec![1, 0]],
                    rep_matrix: vec![vec![c(0), c(1)], vec![c(1), c(0)]],
                },
            ],
            component_table: vec![vec![0, 1], vec![1, 0]],
        }
    }

    #[test]
    fn fixed_subtorus_examples() {
        assert_eq!(fixed_subtorus(&[vec![-1]]), Vec::<Vec<i64>>::new());
        assert_eq!(fixed_subtorus(&[vec![1, 0], vec![0, 1]]), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(fixed_subtorus(&[vec![0, 1], vec![1, 0]]), vec![vec![1, 1]]);
    }

    #[test]
    fn fixed_subtorus_is_saturated() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let r = rng.random_range(1..=3usize);
            let a = random_signed_permutation(&mut rng, r);
            let basis = fixed_subtorus(&a);
            if basis.is_empty() {
                continue;
            }
            let big: Vec<Vec<num_bigint::BigInt>> = basis
                .iter()
                .map(|row| row.iter().map(|&x| num_bigint::BigInt::from(x)).collect())
                .collect();
            let d = crate::linalg::snf_diag(big);
            assert!(
                d.iter().all(|x| *x == num_bigint::BigInt::from(1)),
                "fixed subtorus basis is not saturated"
            );
        }
    }

    #[test]
    fn generic_det_z2() {
        let spec = z2_spec();
        spec.validate().unwrap();
        let full = spec.full_torus_basis();
        let id_det = spec.generic_det("1", &full).unwrap();
        // (1−t)(1−t⁻¹) = 2 − t − t⁻¹.
        let t = LaurentPoly::monomial(1, vec![1], c(1));
        let tinv = LaurentPoly::monomial(1, vec![-1], c(1));
        let expected = LaurentPoly::constant(1, c(2)).sub(&t).sub(&tinv);
        assert_eq!(id_det, expected);
        let s_det = spec.generic_det("s", &full).unwrap();
        assert!(s_det.is_zero());
    }

    #[test]
    fn generic_det_trivial_action() {
        let spec = trivial_action_spec();
        let d = spec.generic_det("1", &spec.full_torus_basis()).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn cond_checks_z2() {
        let spec = z2_spec();
        let cc = spec.cond_c_check();
        assert!(cc["1"]);
        assert!(!cc["s"]);
        let cd = spec.cond_d_check();
        assert!(cd["1"]);
        assert!(!cd["s"]);
        assert!(!spec.almost_elliptic());
        let audit = spec.equivalence_audit();
        assert!(audit.disagreements.is_empty());
    }

    #[test]
    fn cond_d_swap_torus() {
        let spec = swap_torus_spec();
        spec.validate().unwrap();
        // Restricted to the diagonal subtorus: det = 1 − u².
        let basis = fixed_subtorus(&spec.components[1].torus_aut);
        let d = spec.generic_det("s", &basis).unwrap();
        let u2 = LaurentPoly::monomial(1, vec![2], c(1));
        assert_eq!(d, LaurentPoly::one(1).sub(&u2));
        let cd = spec.cond_d_check();
        assert!(cd["s"]);
        let cc = spec.cond_c_check();
        assert!(cc["s"]);
        assert!(spec.almost_elliptic());
    }

    #[test]
    fn monothetic_reductions() {
        let spec = z2_spec();
        let full = spec.monothetic_reduction("s").unwrap();
        assert_eq!(full.components.len(), 2);
        assert!(!full.almost_elliptic());
        let id_only = spec.monothetic_reduction("1").unwrap();
        assert_eq!(id_only.components.len(), 1);
        assert!(id_only.almost_elliptic());
        assert!(matches!(
            spec.monothetic_reduction("nope"),
            Err(CompactError::UnknownComponent(_))
        ));
        // The quantified reduction criterion: the full spec is almost
        // elliptic iff every monothetic reduction is.
        for spec in [z2_spec(), swap_torus_spec(), circle_rotation_spec()] {
            let all_reductions = spec
                .components
                .iter()
                .all(|c| spec.monothetic_reduction(&c.label).unwrap().almost_elliptic());
            assert_eq!(spec.almost_elliptic(), all_reductions);
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut spec = z2_spec();
        // Break weight compatibility: make the swap component diagonal.
        spec.components[1].rep_matrix = vec![vec![c(1), c(0)], vec![c(0), c(1)]];
        assert!(matches!(spec.validate(), Err(CompactError::Invalid { .. })));

        let mut spec = z2_spec();
        spec.component_table = vec![vec![0, 1], vec![1, 1]];
        assert!(spec.validate().is_err());

        let mut spec = z2_spec();
        spec.components[1].rep_matrix = vec![vec![c(0), c(1)], vec![c(0), c(0)]];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn rank_zero_torus_is_a_single_evaluation() {
        // Finite K: the determinant is a constant Laurent polynomial.
        let spec = CompactGroupSpec {
            weights: TorusWeights { torus_rank: 0, weights: vec![vec![], vec![]] },
            components: vec![
                ComponentDatum {
                    label: "1".into(),
                    torus_aut: vec![],
                    rep_matrix: vec![vec![c(1), c(0)], vec![c(0), c(1)]],
                },
                ComponentDatum {
                    label: "s".into(),
                    torus_aut: vec![],
                    rep_matrix: vec![vec![c(0), c(1)], vec![c(1), c(0)]],
                },
            ],
            component_table: vec![vec![0, 1], vec![1, 0]],
        };
        spec.validate().unwrap();
        // det(I − I) = 0 on the identity, det(I − swap) = 1 − 1 = 0 on s.
        let cc = spec.cond_c_check();
        assert!(!cc["1"] && !cc["s"]);
        assert!(!spec.almost_elliptic());
        let audit = spec.equivalence_audit();
        assert!(audit.disagreements.is_empty());
    }

    #[test]
    fn negation_closure_warning() {
        let spec = circle_rotation_spec();
        let warnings = spec.validate().unwrap();
        assert_eq!(warnings.len(), 1);
        let spec = z2_spec();
        assert!(spec.validate().unwrap().is_empty());
    }

    #[test]
    fn random_specs_agree_on_c_and_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_817);
        let params = RandomSpecParams::default();
        for _ in 0..25 {
            let spec = random_spec(&mut rng, &params);
            let audit = spec.equivalence_audit();
            assert!(
                audit.disagreements.is_empty(),
                "conditions disagreed on {:?}",
                spec
            );
        }
    }

    #[test]
    fn conjugation_law_symbolic() {
        // ρ(σ)·D(t) = D(A·t)·ρ(σ) as Laurent-polynomial matrices.
        for spec in [z2_spec(), swap_torus_spec()] {
            let r = spec.weights.torus_rank;
            for comp in &spec.components {
                let m = spec.weights.weights.len();
                let mono = |e: Vec<i64>, coeff: &GaussianRational| {
                    LaurentPoly::monomial(r, e, coeff.clone())
                };
                let mut lhs = vec![vec![LaurentPoly::zero(r); m]; m];
                let mut rhs = vec![vec![LaurentPoly::zero(r); m]; m];
                for i in 0..m {
                    for j in 0..m {
                        if !comp.rep_matrix[i][j].is_zero() {
                            lhs[i][j] =
                                mono(spec.weights.weights[j].clone(), &comp.rep_matrix[i][j]);
                            rhs[i][j] = mono(
                                apply_aut_transpose(&comp.torus_aut, &spec.weights.weights[i]),
                                &comp.rep_matrix[i][j],
                            );
                        }
                    }
                }
                assert_eq!(lhs, rhs);
            }
        }
    }
}
