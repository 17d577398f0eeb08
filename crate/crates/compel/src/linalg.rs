//! Exact linear algebra kernels shared across the crate: reduced row echelon
//! form over ℚ, determinants over ℚ and ℚ(i), Hermite and Smith normal forms
//! over ℤ, and an exact LLL reduction used for integer-relation detection.

use crate::scalar::{GaussianRational, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// Rational matrices
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns the pivot columns. Zero rows
/// are removed, so the output has exactly `rank` rows.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for c in col..ncols {
            let v = &rows[r][c] * &inv;
            rows[r][c] = v;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..ncols {
                    let v = &rows[i][c] - &factor * &rows[r][c];
                    rows[i][c] = v;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Reduces `v` against rows already in RREF (with the given pivot columns);
/// the result has zeros in every pivot column.
pub fn reduce_against(v: &[Rat], rows: &[Vec<Rat>], pivots: &[usize]) -> Vec<Rat> {
    let mut out = v.to_vec();
    for (row, &col) in rows.iter().zip(pivots) {
        if !out[col].is_zero() {
            let factor = out[col].clone();
            for c in 0..out.len() {
                let val = &out[c] - &factor * &row[c];
                out[c] = val;
            }
        }
    }
    out
}

/// Is `v` in the row span of an RREF basis?
pub fn in_span(v: &[Rat], rows: &[Vec<Rat>], pivots: &[usize]) -> bool {
    reduce_against(v, rows, pivots).iter().all(|x| x.is_zero())
}

/// Determinant over ℚ by fraction-preserving Gaussian elimination.
pub fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for i in (col + 1)..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            for c in col..n {
                let v = &m[i][c] - &factor * &m[col][c];
                m[i][c] = v;
            }
        }
    }
    det
}

/// Determinant over the field ℚ(i).
pub fn det_gauss(mut m: Vec<Vec<GaussianRational>>) -> GaussianRational {
    let n = m.len();
    if n == 0 {
        return GaussianRational::one();
    }
    let mut det = GaussianRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return GaussianRational::zero();
        };
        if p != col {
            m.swap(col, p);
            det = det.neg();
        }
        det = det.mul(&m[col][col]);
        let inv = m[col][col].inv().expect("pivot is nonzero");
        for i in (col + 1)..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].mul(&inv);
            for c in col..n {
                let v = m[i][c].sub(&factor.mul(&m[col][c]));
                m[i][c] = v;
            }
        }
    }
    det
}

/// Exact inverse of a square rational matrix, or None if singular.
pub fn invert_rat(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Integer matrices: Hermite and Smith normal forms
// ---------------------------------------------------------------------------

/// Symmetric remainder: e − q·p ∈ [−p/2, p/2) for p > 0.
fn symmetric_rem(e: &BigInt, p: &BigInt) -> BigInt {
    let mut r = e.mod_floor(p);
    if &r * BigInt::from(2) >= *p {
        r -= p;
    }
    r
}

/// Row-style Hermite normal form: pivots positive, strictly to the right as
/// rows descend, entries above each pivot reduced to the symmetric range
/// [−p/2, p/2). Zero rows are dropped. The form is the unique canonical
/// representative of the row lattice.
pub fn hnf_int(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    hnf_with_transform(rows).0
}

/// HNF together with a unimodular transform U with U·M = H (H padded with
/// the zero rows it would otherwise drop).
pub fn hnf_with_transform(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let nrows = m.len();
    if nrows == 0 {
        return (Vec::new(), Vec::new());
    }
    let ncols = m[0].len();
    let mut u: Vec<Vec<BigInt>> = (0..nrows)
        .map(|i| {
            (0..nrows)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        // Eliminate down the column by repeated smallest-entry reduction.
        loop {
            let nonzero: Vec<usize> = (pivot_row..nrows).filter(|&i| !m[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let r = nonzero[0];
                m.swap(pivot_row, r);
                u.swap(pivot_row, r);
                break;
            }
            let &r_min = nonzero
                .iter()
                .min_by_key(|&&i| m[i][col].abs())
                .unwrap();
            for &r in &nonzero {
                if r == r_min {
                    continue;
                }
                let q = div_round(&m[r][col], &m[r_min][col]);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let v = &m[r][c] - &q * &m[r_min][c];
                        m[r][c] = v;
                    }
                    for c in 0..nrows {
                        let v = &u[r][c] - &q * &u[r_min][c];
                        u[r][c] = v;
                    }
                }
            }
        }
        if pivot_row >= nrows || m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for c in 0..ncols {
                m[pivot_row][c] = -m[pivot_row][c].clone();
            }
            for c in 0..nrows {
                u[pivot_row][c] = -u[pivot_row][c].clone();
            }
        }
        let p = m[pivot_row][col].clone();
        for r in 0..pivot_row {
            let rem = symmetric_rem(&m[r][col], &p);
            let q = (&m[r][col] - &rem) / &p;
            if !q.is_zero() {
                for c in 0..ncols {
                    let v = &m[r][c] - &q * &m[pivot_row][c];
                    m[r][c] = v;
                }
                for c in 0..nrows {
                    let v = &u[r][c] - &q * &u[pivot_row][c];
                    u[r][c] = v;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }
    (m, u)
}

/// Rounded division: quotient minimizing |e − q·p|.
fn div_round(e: &BigInt, p: &BigInt) -> BigInt {
    let r = symmetric_rem(e, &p.abs());
    (e - r) / p
}

/// Basis (as rows) of the integer kernel {v : v·Mᵀ... i.e. M·vᵀ = 0} of a
/// square or rectangular integer matrix, computed from the transform rows
/// that map to zero rows of the HNF of Mᵀ. The result is automatically
/// saturated.
pub fn integer_kernel(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    if m.is_empty() {
        return Vec::new();
    }
    let nrows = m.len();
    let ncols = m[0].len();
    // Transpose into BigInt.
    let mt: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| (0..nrows).map(|r| BigInt::from(m[r][c])).collect())
        .collect();
    let (h, u) = hnf_with_transform(mt);
    let mut kernel = Vec::new();
    for (row_h, row_u) in h.iter().zip(u.iter()) {
        if row_h.iter().all(|x| x.is_zero()) {
            kernel.push(row_u.clone());
        }
    }
    // Canonicalize the kernel basis itself.
    hnf_int(kernel)
}

/// Diagonal of the Smith normal form (elementary divisors, non-negative).
pub fn snf_diag(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    if m.is_empty() || m[0].is_empty() {
        return Vec::new();
    }
    let nrows = m.len();
    let ncols = m[0].len();
    let mut diag = Vec::new();
    let mut top = 0;
    let mut left = 0;
    while top < nrows && left < ncols {
        // Find a nonzero entry.
        let mut found = None;
        'outer: for i in top..nrows {
            for j in left..ncols {
                if !m[i][j].is_zero() {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }
        loop {
            let mut clean = true;
            for i in (top + 1)..nrows {
                if !m[i][left].is_zero() {
                    let q = div_round(&m[i][left], &m[top][left]);
                    for c in left..ncols {
                        let v = &m[i][c] - &q * &m[top][c];
                        m[i][c] = v;
                    }
                    if !m[i][left].is_zero() {
                        m.swap(top, i);
                        clean = false;
                    }
                }
            }
            for j in (left + 1)..ncols {
                if !m[top][j].is_zero() {
                    let q = div_round(&m[top][j], &m[top][left]);
                    for r in top..nrows {
                        let v = &m[r][j] - &q * &m[r][left];
                        m[r][j] = v;
                    }
                    if !m[top][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(left, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[top][left].abs());
        top += 1;
        left += 1;
    }
    // Enforce the divisibility chain d1 | d2 | ...
    for i in 0..diag.len() {
        for j in (i + 1)..diag.len() {
            if !diag[j].is_multiple_of(&diag[i]) {
                let g = diag[i].gcd(&diag[j]);
                let l = diag[i].lcm(&diag[j]);
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag
}

// ---------------------------------------------------------------------------
// Exact LLL
// ---------------------------------------------------------------------------

/// LLL with δ = 3/4, exact rational Gram–Schmidt. Desk-scale input sizes.
pub fn lll(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    let delta = Rat::new(BigInt::from(3), BigInt::from(4));

    // Recompute Gram–Schmidt data from scratch; input sizes are tiny.
    let gram = |basis: &Vec<Vec<BigInt>>| -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let mut mu = vec![vec![Rat::zero(); n]; n];
        let mut star_sq = vec![Rat::zero(); n];
        let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Rat> = basis[i].iter().map(|x| Rat::from_integer(x.clone())).collect();
            for j in 0..i {
                if star_sq[j].is_zero() {
                    mu[i][j] = Rat::zero();
                    continue;
                }
                let num: Rat = basis[i]
                    .iter()
                    .zip(star[j].iter())
                    .map(|(x, y)| Rat::from_integer(x.clone()) * y)
                    .sum();
                mu[i][j] = num / &star_sq[j];
                for (vc, sc) in v.iter_mut().zip(star[j].iter()) {
                    let t = &*vc - &mu[i][j] * sc;
                    *vc = t;
                }
            }
            star_sq[i] = v.iter().map(|x| x * x).sum();
            star.push(v);
        }
        (mu, star_sq)
    };

    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 20_000 {
            break; // structurally cannot happen at desk scale
        }
        let (mu, star_sq) = gram(&basis);
        // Size reduction of b_k against b_j, j < k.
        let mut changed = false;
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                for c in 0..basis[k].len() {
                    let v = &basis[k][c] - &q * &basis[j][c];
                    basis[k][c] = v;
                }
                changed = true;
            }
        }
        let (mu, star_sq) = if changed { gram(&basis) } else { (mu, star_sq) };
        // Lovász condition; a zero star vector at k−1 makes it vacuous.
        let lhs = &star_sq[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &star_sq[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
    }

    #[test]
    fn rref_canonical() {
        let mut m = vec![
            vec![rat(2, 1), rat(4, 1)],
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ];
        let pivots = rref(&mut m);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m, vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]]);
    }

    #[test]
    fn hnf_matches_hand_reduction() {
        let h = hnf_int(int_rows(&[&[1, -1], &[1, 1]]));
        assert_eq!(h, int_rows(&[&[1, -1], &[0, 2]]));
        let h = hnf_int(int_rows(&[&[1, 0], &[0, 1]]));
        assert_eq!(h, int_rows(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let m = int_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u) = hnf_with_transform(m.clone());
        // U·M = H
        for i in 0..3 {
            for j in 0..3 {
                let s: BigInt = (0..3).map(|k| &u[i][k] * &m[k][j]).sum();
                assert_eq!(s, h[i][j]);
            }
        }
        let det = det_rat(
            u.iter()
                .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect(),
        );
        assert!(det == Rat::one() || det == -Rat::one());
    }

    #[test]
    fn kernel_of_swap_minus_identity() {
        let k = integer_kernel(&[vec![-1, 1], vec![1, -1]]);
        assert_eq!(k, int_rows(&[&[1, 1]]));
    }

    #[test]
    fn kernel_saturation_via_snf() {
        let k = integer_kernel(&[vec![2, -2, 0], vec![0, 0, 3]]);
        // kernel of x↦(2x−2y, 3z): spanned by (1,1,0).
        assert_eq!(k, int_rows(&[&[1, 1, 0]]));
        let d = snf_diag(k);
        assert!(d.iter().all(|x| x.is_one()));
    }

    #[test]
    fn det_examples() {
        let d = det_rat(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]]);
        assert_eq!(d, rat(-2, 1));
        let g = det_gauss(vec![
            vec![GaussianRational::one(), GaussianRational::i()],
            vec![GaussianRational::i(), GaussianRational::one()],
        ]);
        assert_eq!(g, GaussianRational::from_rat(rat(2, 1)));
    }

    #[test]
    fn lll_reduces_collinear_rows() {
        // Rows (1, 0, 1000000) and (1, 0, 999999) should combine to a short
        // vector.
        let b = lll(int_rows(&[&[1, 0, 1_000_000], &[1, 0, 999_999]]));
        let shortest: BigInt = b
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum::<BigInt>())
            .min()
            .unwrap();
        assert!(shortest <= bi(2));
    }
}
