//! Numeric laboratory for `V ⋊ K`: group arithmetic in double precision,
//! distance-to-elliptic-closure estimates, equidistribution diagnostics for
//! irrational rotations, and integer-relation rank estimates for derived
//! generator families.
//!
//! Everything here produces estimates, never proofs; the exact verdicts live
//! in the symbolic modules and the acceptance suite cross-checks the two.

use crate::compact::CompactGroupSpec;
use crate::linalg::lll;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("element does not match the governing spec: {0}")]
    SpecMismatch(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("spec not usable for simulation: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone)]
struct SimComponent {
    label: String,
    aut: Vec<Vec<i64>>,
    aut_inv: Vec<Vec<i64>>,
    inverse: usize,
    rho: Vec<Vec<Complex64>>,
}

/// Numeric form of a compact-group spec, with precomputed inverses. The
/// construction checks that the per-component representation matrices are
/// multiplicative, i.e. that the data describes a genuine split action; the
/// symbolic checks do not need this, the group arithmetic does.
#[derive(Debug, Clone)]
pub struct SimSpec {
    pub torus_rank: usize,
    pub weights: Vec<Vec<i64>>,
    components: Vec<SimComponent>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

/// Element (v, t) of V ⋊ K: complex vector stored as interleaved re/im
/// pairs, component label index, torus angles as fractions of a full turn.
#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectElement {
    pub v: Vec<f64>,
    pub component: usize,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub tolerance: f64,
    pub delta: f64,
    pub samples: usize,
    pub report_threshold: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            tolerance: 1e-9,
            delta: 0.1,
            samples: 200,
            report_threshold: 1e-3,
            seed: 0,
        }
    }
}

/// Verdict of the sampled ellipticity scan.
#[derive(Debug, Clone)]
pub struct EllipticityReport {
    pub verdict: bool,
    pub witness: Option<SemidirectElement>,
    pub witness_component: Option<String>,
    pub max_distance: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Output of the integer-relation rank estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub q_rank_estimate: usize,
    pub discrete: bool,
    pub invariant_line: bool,
    pub relations_found: usize,
}

fn mat_vec_i64(a: &[Vec<i64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&c, v)| c as f64 * v).sum())
        .collect()
}

fn frac(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl SimSpec {
    pub fn from_spec(spec: &CompactGroupSpec) -> Result<SimSpec, SimError> {
        spec.validate().map_err(|e| SimError::InvalidSpec(e.to_string()))?;
        let identity = spec.identity_index().map_err(|e| SimError::InvalidSpec(e.to_string()))?;
        let n = spec.components.len();
        // ρ must be multiplicative on components for the product law to be
        // associative; verify exactly.
        for a in 0..n {
            for b in 0..n {
                let prod_idx = spec.component_table[a][b];
                let lhs = mat_mul_gauss(
                    &spec.components[a].rep_matrix,
                    &spec.components[b].rep_matrix,
                );
                if lhs != spec.components[prod_idx].rep_matrix {
                    return Err(SimError::InvalidSpec(format!(
                        "rep matrices are not multiplicative at ({a}, {b}); \
                         the simulator requires a split extension"
                    )));
                }
            }
        }
        let mut components = Vec::with_capacity(n);
        for (ci, comp) in spec.components.iter().enumerate() {
            let aut_inv = invert_unimodular(&comp.torus_aut)
                .ok_or_else(|| SimError::InvalidSpec("torus automorphism not invertible".into()))?;
            let inverse = (0..n)
                .find(|&b| spec.component_table[ci][b] == identity)
                .expect("validated table has inverses");
            let rho = comp
                .rep_matrix
                .iter()
                .map(|row| row.iter().map(|g| g.to_complex64()).collect())
                .collect();
            components.push(SimComponent {
                label: comp.label.clone(),
                aut: comp.torus_aut.clone(),
                aut_inv,
                inverse,
                rho,
            });
        }
        Ok(SimSpec {
            torus_rank: spec.weights.torus_rank,
            weights: spec.weights.weights.clone(),
            components,
            table: spec.component_table.clone(),
            identity,
        })
    }

    pub fn dim_v(&self) -> usize {
        self.weights.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_label(&self, idx: usize) -> &str {
        &self.components[idx].label
    }

    pub fn identity_element(&self) -> SemidirectElement {
        SemidirectElement {
            v: vec![0.0; 2 * self.dim_v()],
            component: self.identity,
            angles: vec![0.0; self.torus_rank],
        }
    }

    pub fn element(&self, v: Vec<f64>, component: usize, angles: Vec<f64>) -> Result<SemidirectElement, SimError> {
        if v.len() != 2 * self.dim_v() {
            return Err(SimError::SpecMismatch(format!(
                "vector has {} real coordinates, expected {}",
                v.len(),
                2 * self.dim_v()
            )));
        }
        if angles.len() != self.torus_rank {
            return Err(SimError::SpecMismatch("angle count != torus rank".into()));
        }
        if component >= self.components.len() {
            return Err(SimError::SpecMismatch("component index out of range".into()));
        }
        Ok(SemidirectElement { v, component, angles: angles.into_iter().map(frac).collect() })
    }

    fn check(&self, g: &SemidirectElement) -> Result<(), SimError> {
        if g.v.len() != 2 * self.dim_v()
            || g.angles.len() != self.torus_rank
            || g.component >= self.components.len()
        {
            return Err(SimError::SpecMismatch("element shape mismatch".into()));
        }
        Ok(())
    }

    /// Full representation matrix of the compact part (angles, component).
    pub fn rho(&self, component: usize, angles: &[f64]) -> Vec<Vec<Complex64>> {
        let m = self.dim_v();
        let comp = &self.components[component];
        let mut out = vec![vec![Complex64::ZERO; m]; m];
        for i in 0..m {
            let phase: f64 = self.weights[i]
                .iter()
                .zip(angles)
                .map(|(&w, &a)| w as f64 * a)
                .sum();
            let d = Complex64::from_polar(1.0, TAU * phase);
            for j in 0..m {
                out[i][j] = d * comp.rho[i][j];
            }
        }
        out
    }

    fn apply_rho(&self, component: usize, angles: &[f64], w: &[f64]) -> Vec<f64> {
        let m = self.dim_v();
        let mat = self.rho(component, angles);
        let wc: Vec<Complex64> = (0..m).map(|i| Complex64::new(w[2 * i], w[2 * i + 1])).collect();
        let mut out = vec![0.0; 2 * m];
        for i in 0..m {
            let mut acc = Complex64::ZERO;
            for j in 0..m {
                acc += mat[i][j] * wc[j];
            }
            out[2 * i] = acc.re;
            out[2 * i + 1] = acc.im;
        }
        out
    }

    /// (v, k)(w, l) = (v + ρ(k)w, kl).
    pub fn multiply(
        &self,
        g: &SemidirectElement,
        h: &SemidirectElement,
    ) -> Result<SemidirectElement, SimError> {
        self.check(g)?;
        self.check(h)?;
        let rotated = self.apply_rho(g.component, &g.angles, &h.v);
        let v: Vec<f64> = g.v.iter().zip(&rotated).map(|(a, b)| a + b).collect();
        let component = self.table[g.component][h.component];
        let transported = mat_vec_i64(&self.components[g.component].aut, &h.angles);
        let angles: Vec<f64> = g
            .angles
            .iter()
            .zip(&transported)
            .map(|(a, b)| frac(a + b))
            .collect();
        Ok(SemidirectElement { v, component, angles })
    }

    pub fn invert(&self, g: &SemidirectElement) -> Result<SemidirectElement, SimError> {
        self.check(g)?;
        let comp = &self.components[g.component];
        let inv_component = comp.inverse;
        let minus_a_inv_u = mat_vec_i64(&comp.aut_inv, &g.angles)
            .into_iter()
            .map(|x| frac(-x))
            .collect::<Vec<f64>>();
        let rotated = self.apply_rho(inv_component, &minus_a_inv_u, &g.v);
        let v: Vec<f64> = rotated.into_iter().map(|x| -x).collect();
        Ok(SemidirectElement { v, component: inv_component, angles: minus_a_inv_u })
    }

    pub fn commutator(
        &self,
        g: &SemidirectElement,
        h: &SemidirectElement,
    ) -> Result<SemidirectElement, SimError> {
        let gi = self.invert(g)?;
        let hi = self.invert(h)?;
        self.multiply(&self.multiply(&self.multiply(g, h)?, &gi)?, &hi)
    }

    /// Distance from v to the elliptic closure near g's compact part:
    /// minimum over torus perturbations s with ‖s‖∞ ≤ δ of the Euclidean
    /// distance from v to im(1 − ρ(s·k)).
    pub fn elliptic_distance(&self, g: &SemidirectElement, delta: f64) -> Result<f64, SimError> {
        self.check(g)?;
        let m = self.dim_v();
        if m == 0 {
            return Ok(0.0);
        }
        let vc: Vec<Complex64> =
            (0..m).map(|i| Complex64::new(g.v[2 * i], g.v[2 * i + 1])).collect();
        let objective = |s: &[f64]| -> f64 {
            let mut angles = g.angles.clone();
            for (a, &p) in angles.iter_mut().zip(s) {
                *a = frac(*a + p);
            }
            let rho = self.rho(g.component, &angles);
            let mut mat = rho;
            for i in 0..m {
                for j in 0..m {
                    mat[i][j] = -mat[i][j];
                }
                mat[i][i] += 1.0;
            }
            distance_to_column_span(&mat, &vc)
        };
        let r = self.torus_rank;
        if r == 0 {
            return Ok(objective(&[]));
        }
        // Grid scan, then pattern refinement around the best point.
        let per_axis = if r <= 2 { 7 } else { 5 };
        let mut best_s = vec![0.0; r];
        let mut best = f64::INFINITY;
        let mut idx = vec![0usize; r];
        loop {
            let s: Vec<f64> = idx
                .iter()
                .map(|&k| -delta + 2.0 * delta * (k as f64) / ((per_axis - 1) as f64))
                .collect();
            let val = objective(&s);
            if val < best {
                best = val;
                best_s = s;
            }
            let mut carry = true;
            for d in 0..r {
                if carry {
                    idx[d] += 1;
                    if idx[d] == per_axis {
                        idx[d] = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        let mut step = delta / (per_axis as f64);
        for _ in 0..60 {
            let mut improved = false;
            for d in 0..r {
                for sign in [-1.0, 1.0] {
                    let mut cand = best_s.clone();
                    cand[d] = (cand[d] + sign * step).clamp(-delta, delta);
                    let val = objective(&cand);
                    if val < best {
                        best = val;
                        best_s = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-15 {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Samples elements in the window ‖v‖ ≤ 1 with uniform angles across all
    /// components; verdict is true iff every sampled element is within
    /// `report_threshold` of the elliptic closure (perturbation radius
    /// `delta`). Deterministic for a fixed seed.
    pub fn empirical_ellipticity(&self, config: &SimConfig) -> Result<EllipticityReport, SimError> {
        if config.tolerance >= config.delta {
            return Err(SimError::InvalidSpec("config requires tolerance < delta".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let m = self.dim_v();
        let r = self.torus_rank;
        let mut max_distance: f64 = 0.0;
        let mut witness: Option<SemidirectElement> = None;
        for k in 0..config.samples {
            let component = k % self.components.len();
            let v = loop {
                let cand: Vec<f64> = (0..2 * m).map(|_| rng.random_range(-1.0..1.0)).collect();
                let norm_sq: f64 = cand.iter().map(|x| x * x).sum();
                if norm_sq <= 1.0 && norm_sq > 1e-12 {
                    break cand;
                }
            };
            // Exact fixed points of the sampler (t = 1) have measure zero;
            // reject them rather than special-case downstream.
            let angles = loop {
                let cand: Vec<f64> = (0..r).map(|_| rng.random_range(0.0..1.0)).collect();
                if r == 0 || cand.iter().any(|&a| a != 0.0) {
                    break cand;
                }
            };
            let g = SemidirectElement { v, component, angles };
            let dist = self.elliptic_distance(&g, config.delta)?;
            if dist > max_distance {
                max_distance = dist;
                witness = Some(g);
            }
        }
        let verdict = max_distance < config.report_threshold;
        let witness_component = witness.as_ref().map(|w| self.components[w.component].label.clone());
        Ok(EllipticityReport {
            verdict,
            witness: if verdict { None } else { witness },
            witness_component: if verdict { None } else { witness_component },
            max_distance,
            samples: config.samples,
            seed: config.seed,
        })
    }
}

fn mat_mul_gauss(
    a: &[Vec<crate::scalar::GaussianRational>],
    b: &[Vec<crate::scalar::GaussianRational>],
) -> Vec<Vec<crate::scalar::GaussianRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = crate::scalar::GaussianRational::zero();
                    for k in 0..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn invert_unimodular(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let r = a.len();
    if r == 0 {
        return Some(Vec::new());
    }
    let rat_m: Vec<Vec<crate::scalar::Rat>> = a
        .iter()
        .map(|row| row.iter().map(|&x| crate::scalar::rat_int(x)).collect())
        .collect();
    let inv = crate::linalg::invert_rat(&rat_m)?;
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            if !inv[i][j].denom().is_one() {
                return None;
            }
            out[i][j] = inv[i][j].numer().to_i64()?;
        }
    }
    Some(out)
}

/// Euclidean distance from v to the complex column span of `mat`, via
/// modified Gram–Schmidt with a rank tolerance.
fn distance_to_column_span(mat: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    let m = mat.len();
    let scale: f64 = mat
        .iter()
        .flat_map(|row| row.iter())
        .map(|c| c.norm())
        .fold(1.0f64, f64::max);
    let tol = 1e-10 * scale;
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m {
        let mut col: Vec<Complex64> = (0..m).map(|i| mat[i][j]).collect();
        for b in &basis {
            let proj: Complex64 = col.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
            for (c, y) in col.iter_mut().zip(b) {
                *c -= proj * y;
            }
        }
        let norm: f64 = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            for c in col.iter_mut() {
                *c /= norm;
            }
            basis.push(col);
        }
    }
    let mut residual: Vec<Complex64> = v.to_vec();
    for b in &basis {
        let proj: Complex64 = residual.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
        for (c, y) in residual.iter_mut().zip(b) {
            *c -= proj * y;
        }
    }
    residual.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum circular gap between consecutive points of {nθ mod 1 : 1 ≤ n ≤ N}.
pub fn orbit_gap(theta: f64, n: usize) -> f64 {
    assert!(n >= 1);
    let mut points: Vec<f64> = (1..=n).map(|k| frac(k as f64 * theta)).collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 1.0 - points.last().unwrap() + points.first().unwrap();
    for w in points.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap
}

/// Integer-relation rank estimate for the family {v − zⁿv : n ∈ F} in ℝ²,
/// via exact LLL on a scaled embedding. Coefficients above the bound or
/// residuals above the tolerance are not counted as relations.
pub fn fg_dense_witness(
    z: Complex64,
    v: Complex64,
    exponents: &[i64],
) -> Result<WitnessReport, SimError> {
    if v.norm_sqr() == 0.0 {
        return Err(SimError::DegenerateInput("v = 0".into()));
    }
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(SimError::DegenerateInput("z = 1".into()));
    }
    if (z.norm() - 1.0).abs() > 1e-9 {
        return Err(SimError::DegenerateInput("|z| != 1".into()));
    }
    if exponents.is_empty() {
        return Err(SimError::DegenerateInput("empty exponent set".into()));
    }
    let k = exponents.len();
    let vectors: Vec<Complex64> = exponents
        .iter()
        .map(|&n| v - z.powi(n as i32) * v)
        .collect();
    let scale_k = 1e9f64; // 1/tolerance
    let rows: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut row = vec![BigInt::zero(); k + 2];
            row[i] = BigInt::from(1);
            row[k] = BigInt::from((vectors[i].re * scale_k).round() as i64);
            row[k + 1] = BigInt::from((vectors[i].im * scale_k).round() as i64);
            row
        })
        .collect();
    let reduced = lll(rows);
    // An exact relation c leaves only rounding noise in the embedded
    // columns, at most ‖c‖₁/2 per coordinate. Candidates whose coefficients
    // are large enough that simultaneous-approximation artifacts could pass
    // that test (‖c‖∞ beyond the detection cap) are never counted; genuine
    // relations on the exact corpus stay far below the cap.
    let coeff_cap = BigInt::from(600i64);
    let mut relation_rows: Vec<Vec<crate::scalar::Rat>> = Vec::new();
    for row in &reduced {
        let c_l1: BigInt = row[..k].iter().map(|c| c.abs()).sum();
        let resid_bound = c_l1.max(BigInt::from(8));
        let resid_ok = row[k].abs() <= resid_bound && row[k + 1].abs() <= resid_bound;
        let coeff_ok = row[..k].iter().all(|c| c.abs() <= coeff_cap);
        let nonzero = row[..k].iter().any(|c| !c.is_zero());
        if resid_ok && coeff_ok && nonzero {
            relation_rows.push(
                row[..k]
                    .iter()
                    .map(|c| crate::scalar::Rat::from_integer(c.clone()))
                    .collect(),
            );
        }
    }
    let relations_found = crate::linalg::rank(&relation_rows);
    let q_rank_estimate = k - relations_found;
    // Lattice-like spacing probe: the minimum nonzero norm over small
    // integer combinations should be bounded away from zero.
    let max_norm = vectors.iter().map(|w| w.norm()).fold(0.0f64, f64::max);
    let mut min_nonzero = f64::INFINITY;
    let mut combo = vec![-2i64; k];
    'outer: loop {
        let mut acc = Complex64::ZERO;
        for (c, w) in combo.iter().zip(&vectors) {
            acc += Complex64::new(*c as f64, 0.0) * w;
        }
        // Combinations vanishing numerically are relations, not witnesses of
        // non-discreteness; only small nonzero values count.
        let norm = acc.norm();
        if norm > 1e-7 * max_norm.max(1.0) && norm < min_nonzero {
            min_nonzero = norm;
        }
        for d in 0..k {
            combo[d] += 1;
            if combo[d] <= 2 {
                continue 'outer;
            }
            combo[d] = -2;
        }
        break;
    }
    let lattice_like = min_nonzero > 1e-6 * max_norm.max(1.0);
    Ok(WitnessReport {
        q_rank_estimate,
        discrete: q_rank_estimate <= 2 && lattice_like,
        invariant_line: z.im.abs() < 1e-9,
        relations_found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::{CompactGroupSpec, ComponentDatum, TorusWeights};
    use crate::scalar::{rat, GaussianRational};

    fn c(n: i64) -> GaussianRational {
        GaussianRational::from_rat(rat(n, 1))
    }

    fn z2_spec() -> CompactGroupSpec {
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

    fn rotation_spec() -> CompactGroupSpec {
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

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn group_laws_hold_numerically() {
        let sim = SimSpec::from_spec(&z2_spec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tau = 1e-9;
        for _ in 0..50 {
            let rand_el = |rng: &mut ChaCha8Rng| SemidirectElement {
                v: (0..4).map(|_| rng.random_range(-1.0..1.0)).collect(),
                component: rng.random_range(0..2),
                angles: vec![rng.random_range(0.0..1.0)],
            };
            let g = rand_el(&mut rng);
            let h = rand_el(&mut rng);
            let k = rand_el(&mut rng);
            // Associativity.
            let lhs = sim.multiply(&sim.multiply(&g, &h).unwrap(), &k).unwrap();
            let rhs = sim.multiply(&g, &sim.multiply(&h, &k).unwrap()).unwrap();
            assert_eq!(lhs.component, rhs.component);
            let dv: f64 = lhs.v.iter().zip(&rhs.v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dv < tau, "associativity drift {dv}");
            // Inverses.
            let gi = sim.invert(&g).unwrap();
            let prod = sim.multiply(&g, &gi).unwrap();
            assert_eq!(prod.component, 0);
            assert!(norm(&prod.v) < tau);
            let angle_err = prod
                .angles
                .iter()
                .map(|a| a.min(1.0 - a))
                .fold(0.0f64, f64::max);
            assert!(angle_err < tau);
        }
    }

    #[test]
    fn commutator_formula_in_rotation_spec() {
        // [(v,1), (0,z)] = (v − ρ(z)v, 1).
        let sim = SimSpec::from_spec(&rotation_spec()).unwrap();
        let theta = 0.3_f64;
        let g = SemidirectElement { v: vec![0.7, -0.2], component: 0, angles: vec![0.0] };
        let h = SemidirectElement { v: vec![0.0, 0.0], component: 0, angles: vec![theta] };
        let comm = sim.commutator(&g, &h).unwrap();
        let rotated = sim.apply_rho(0, &[theta], &g.v);
        let expected: Vec<f64> = g.v.iter().zip(&rotated).map(|(a, b)| a - b).collect();
        for (a, b) in comm.v.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(comm.angles[0] < 1e-9 || comm.angles[0] > 1.0 - 1e-9);
    }

    #[test]
    fn elliptic_distance_witness_family() {
        let sim = SimSpec::from_spec(&z2_spec()).unwrap();
        // ((1,1), σ): closed-form distance √2 at s = 0, degraded by O(δ).
        let g = SemidirectElement {
            v: vec![1.0, 0.0, 1.0, 0.0],
            component: 1,
            angles: vec![0.0],
        };
        let d0 = sim.elliptic_distance(&g, 1e-9).unwrap();
        assert!((d0 - 2.0f64.sqrt()).abs() < 1e-6, "expected sqrt(2), got {d0}");
        let d = sim.elliptic_distance(&g, 0.1).unwrap();
        assert!(d >= 1.0, "expected >= 1.0, got {d}");
        // Monotone non-increasing in δ.
        let d_small = sim.elliptic_distance(&g, 0.01).unwrap();
        assert!(d <= d_small + 1e-12);
        // (0, k) is elliptic for any k.
        let zero = SemidirectElement {
            v: vec![0.0; 4],
            component: 1,
            angles: vec![0.37],
        };
        assert!(sim.elliptic_distance(&zero, 0.1).unwrap() < 1e-9);
    }

    #[test]
    fn elliptic_distance_invertible_rotation() {
        let sim = SimSpec::from_spec(&rotation_spec()).unwrap();
        let g = SemidirectElement { v: vec![0.9, 0.1], component: 0, angles: vec![0.25] };
        assert!(sim.elliptic_distance(&g, 0.1).unwrap() < 1e-9);
    }

    #[test]
    fn empirical_ellipticity_matches_symbolic() {
        let config = SimConfig { samples: 60, seed: 42, ..SimConfig::default() };
        let sim = SimSpec::from_spec(&z2_spec()).unwrap();
        let report = sim.empirical_ellipticity(&config).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.witness_component.as_deref(), Some("s"));
        assert!(report.max_distance > 0.5);

        let sim = SimSpec::from_spec(&rotation_spec()).unwrap();
        let report = sim.empirical_ellipticity(&config).unwrap();
        assert!(report.verdict, "max distance {}", report.max_distance);
    }

    #[test]
    fn orbit_gap_examples() {
        assert!((orbit_gap(0.25, 4) - 0.25).abs() < 1e-12);
        assert!((orbit_gap(1.0 / 3.0, 100) - 1.0 / 3.0).abs() < 1e-9);
        assert!(orbit_gap(2.0f64.sqrt(), 10_000) < 1e-2);
    }

    #[test]
    fn orbit_gap_shrinks_for_irrationals() {
        for theta in [2.0f64.sqrt(), (1.0 + 5.0f64.sqrt()) / 2.0] {
            let g2 = orbit_gap(theta, 100);
            let g3 = orbit_gap(theta, 1000);
            let g4 = orbit_gap(theta, 10_000);
            assert!(g2 >= g3 && g3 >= g4);
        }
        // Rational angles: the orbit is finite, so the gap freezes once N
        // passes the denominator.
        for n in [3usize, 50, 1000] {
            assert!((orbit_gap(1.0 / 3.0, n) - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((orbit_gap(2.0 / 7.0, 7) - orbit_gap(2.0 / 7.0, 700)).abs() < 1e-12);
    }

    #[test]
    fn witness_rank_estimates() {
        // Transcendental z: no integer relations at tolerance.
        let z = Complex64::new(1.0f64.cos(), 1.0f64.sin()); // exp(i)
        let report = fg_dense_witness(z, Complex64::new(1.0, 0.0), &[1, 2, 3, 4, 5]).unwrap();
        assert!(report.q_rank_estimate >= 3, "rank {}", report.q_rank_estimate);
        assert!(!report.discrete);
        assert!(!report.invariant_line);

        // z = i: lattice.
        let report =
            fg_dense_witness(Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0), &[1, 2]).unwrap();
        assert!(report.discrete);
        assert_eq!(report.q_rank_estimate, 2);

        // Pythagorean z: rational vectors, rank ≤ 2, discrete.
        let z = Complex64::new(0.6, 0.8);
        let report = fg_dense_witness(z, Complex64::new(1.0, 0.0), &[1, 2, 3, 4, 5]).unwrap();
        assert!(report.discrete);
        assert!(report.q_rank_estimate <= 2);
    }

    #[test]
    fn witness_rejects_degenerate_inputs() {
        let z = Complex64::new(0.0, 1.0);
        assert!(fg_dense_witness(z, Complex64::ZERO, &[1]).is_err());
        assert!(fg_dense_witness(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), &[1]).is_err());
    }
}
