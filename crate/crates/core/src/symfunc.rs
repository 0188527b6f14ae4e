//! Schur polynomials in three variables.
//!
//! [`schur3`] uses the bialternant at distinct points and Jacobi-Trudi when
//! variables coincide; [`schur_tableau`] sums monomials over semistandard
//! tableaux and serves as the independent reference.

use std::collections::HashMap;

use crate::error::Error;
use crate::eulerlib::{expand_inverse, poly_mul, EulerFactorPoly};
use crate::scalar::Field;

/// A partition with at most three parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition3 {
    parts: [u32; 3],
}

impl Partition3 {
    pub fn new(l1: i64, l2: i64, l3: i64) -> Result<Self, Error> {
        if !(l1 >= l2 && l2 >= l3 && l3 >= 0) || l1 > u32::MAX as i64 {
            return Err(Error::BadPartition(l1, l2, l3));
        }
        Ok(Partition3 { parts: [l1 as u32, l2 as u32, l3 as u32] })
    }

    /// The two-row shape `(k1 + k2, k1, 0)`.
    pub fn two_row(k1: u32, k2: u32) -> Self {
        Partition3 { parts: [k1 + k2, k1, 0] }
    }

    pub fn parts(&self) -> [u32; 3] {
        self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// All partitions of `d` with at most three parts.
    pub fn of_size(d: u32) -> Vec<Partition3> {
        let mut out = Vec::new();
        for l3 in 0..=d / 3 {
            for l2 in l3..=(d - l3) / 2 {
                let l1 = d - l2 - l3;
                out.push(Partition3 { parts: [l1, l2, l3] });
            }
        }
        out
    }
}

fn det3<F: Field>(m: [[F; 3]; 3]) -> F {
    let [[a, b, c], [d, e, f], [g, h, i]] = m;
    a * (e.clone() * i.clone() - f.clone() * h.clone()) - b * (d.clone() * i - f * g.clone()) + c * (d * h - e * g)
}

fn distinct<F: Field>(x: &[F; 3]) -> bool {
    x[0] != x[1] && x[0] != x[2] && x[1] != x[2]
}

/// Complete homogeneous symmetric polynomials `h_0..=h_kmax`.
pub fn complete_homogeneous<F: Field>(x: &[F], kmax: usize) -> Vec<F> {
    let poly = x.iter().fold(EulerFactorPoly::one(), |acc, xi| poly_mul(&acc, &EulerFactorPoly::linear(xi.clone())));
    expand_inverse(&poly, kmax).expect("constant term is 1")
}

/// Ratio of alternants; only valid at pairwise distinct points.
pub fn bialternant<F: Field>(lambda: Partition3, x: &[F; 3]) -> F {
    let [l1, l2, l3] = lambda.parts;
    let row = |e: u32| [x[0].pow(e), x[1].pow(e), x[2].pow(e)];
    let num = det3([row(l1 + 2), row(l2 + 1), row(l3)]);
    let vandermonde = (x[0].clone() - x[1].clone()) * (x[0].clone() - x[2].clone()) * (x[1].clone() - x[2].clone());
    num / vandermonde
}

/// `det(h_{lambda_i - i + j})`.
pub fn jacobi_trudi<F: Field>(lambda: Partition3, x: &[F; 3]) -> F {
    let [l1, l2, l3] = lambda.parts;
    let h = complete_homogeneous(x, (l1 + 2) as usize);
    let hk = |k: i64| if k < 0 { F::zero() } else { h[k as usize].clone() };
    let l = [l1 as i64, l2 as i64, l3 as i64];
    let m = [0usize, 1, 2].map(|i| [0i64, 1, 2].map(|j| hk(l[i] - i as i64 + j)));
    det3(m)
}

/// `s_lambda(x1, x2, x3)`.
pub fn schur3<F: Field>(lambda: Partition3, x: &[F; 3]) -> F {
    if distinct(x) {
        bialternant(lambda, x)
    } else {
        jacobi_trudi(lambda, x)
    }
}

/// Largest first part accepted by [`schur_tableau`].
pub const TABLEAU_MAX_PART: u32 = 12;

/// Number of semistandard tableaux of shape `lambda` with entries in
/// `{1, 2, 3}`, grouped by content `(#1, #2, #3)`.
pub fn tableau_contents(lambda: Partition3) -> Result<HashMap<[u32; 3], u64>, Error> {
    let [l1, l2, l3] = lambda.parts;
    if l1 > TABLEAU_MAX_PART {
        return Err(Error::ShapeTooLarge(l1));
    }
    let rows = [l1 as usize, l2 as usize, l3 as usize];
    let cells: Vec<(usize, usize)> = (0..3).flat_map(|r| (0..rows[r]).map(move |c| (r, c))).collect();
    let mut grid = vec![[0u8; TABLEAU_MAX_PART as usize]; 3];
    let mut out = HashMap::new();

    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut [[u8; TABLEAU_MAX_PART as usize]],
        content: &mut [u32; 3],
        out: &mut HashMap<[u32; 3], u64>,
    ) {
        let Some(&(r, c)) = cells.get(idx) else {
            *out.entry(*content).or_insert(0) += 1;
            return;
        };
        let left = if c > 0 { grid[r][c - 1] } else { 1 };
        let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in left.max(above)..=3 {
            grid[r][c] = v;
            content[v as usize - 1] += 1;
            fill(idx + 1, cells, grid, content, out);
            content[v as usize - 1] -= 1;
        }
        grid[r][c] = 0;
    }

    fill(0, &cells, &mut grid, &mut [0; 3], &mut out);
    Ok(out)
}

/// `sum_T x^T` over semistandard tableaux `T` of shape `lambda`.
pub fn schur_tableau<F: Field>(lambda: Partition3, x: &[F; 3]) -> Result<F, Error> {
    let contents = tableau_contents(lambda)?;
    Ok(contents.iter().fold(F::zero(), |acc, (c, &count)| {
        acc + F::from_i64(count as i64) * x[0].pow(c[0]) * x[1].pow(c[1]) * x[2].pow(c[2])
    }))
}

/// `s_f(a, b) = (a^{f+1} - b^{f+1}) / (a - b)`, with the limit
/// `(f + 1) a^f` on the diagonal.
pub fn schur_gl2<F: Field>(f: u32, a: &F, b: &F) -> F {
    if a == b {
        F::from_i64(f as i64 + 1) * a.pow(f)
    } else {
        (a.pow(f + 1) - b.pow(f + 1)) / (a.clone() - b.clone())
    }
}

/// Coefficients of `X^0..=X^k` in `prod_{i,j} 1 / (1 - a_i b_j X)`.
fn product_series<F: Field>(a: &[F], b: &[F], k: usize) -> Vec<F> {
    let mut poly = EulerFactorPoly::one();
    for x in a {
        for y in b {
            poly = poly_mul(&poly, &EulerFactorPoly::linear(x.clone() * y.clone()));
        }
    }
    expand_inverse(&poly, k).expect("constant term is 1")
}

/// Largest discrepancy, degree by degree up to total degree `k`, in
/// `prod 1/(1 - a_i g_j) = sum_lambda s_lambda(a) s_lambda(g)`.
pub fn cauchy_check<F: Field>(alpha: &[F; 3], gamma: &[F; 3], k: u32) -> f64 {
    let lhs = product_series(alpha, gamma, k as usize);
    (0..=k)
        .map(|d| {
            let rhs = Partition3::of_size(d)
                .into_iter()
                .fold(F::zero(), |acc, lam| acc + schur3(lam, alpha) * schur3(lam, gamma));
            (lhs[d as usize].clone() - rhs).magnitude()
        })
        .fold(0.0, f64::max)
}

/// Coefficient of `x^d` on the Schur side of the two-row specialization:
/// `sum_{2 k1 + k2 = d} s_{k1+k2,k1,0}(alpha) s_{k1+k2,k1,0}(g1, g2, 0)`.
pub fn two_row_coeff<F: Field>(alpha: &[F; 3], g1: &F, g2: &F, d: u32) -> F {
    let g = [g1.clone(), g2.clone(), F::zero()];
    (0..=d / 2).fold(F::zero(), |acc, k1| {
        let lam = Partition3::two_row(k1, d - 2 * k1);
        acc + schur3(lam, alpha) * schur3(lam, &g)
    })
}

/// Largest discrepancy up to `x^k` in
/// `prod_{i, j <= 2} 1/(1 - a_i g_j x) = sum_{k1,k2} s(alpha) s(g1, g2, 0) x^{2k1+k2}`.
pub fn cauchy_two_row<F: Field>(alpha: &[F; 3], g1: &F, g2: &F, k: u32) -> f64 {
    let lhs = product_series(alpha, &[g1.clone(), g2.clone()], k as usize);
    (0..=k).map(|d| (lhs[d as usize].clone() - two_row_coeff(alpha, g1, g2, d)).magnitude()).fold(0.0, f64::max)
}

/// Rank of a matrix by fraction-free elimination in the field.
pub fn rank<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let pv = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / pv.clone();
                for j in c..cols {
                    let t = m[rank][j].clone();
                    m[r][j] = m[r][j].clone() - f.clone() * t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Evaluation matrix of the first `shapes.len()` two-row Schur polynomials
/// `s_{k1+k2,k1,0}(x1, x2, 0)` at the given points.
pub fn two_row_evaluation_matrix<F: Field>(shapes: &[(u32, u32)], points: &[(F, F)]) -> Vec<Vec<F>> {
    points
        .iter()
        .map(|(a, b)| {
            let x = [a.clone(), b.clone(), F::zero()];
            shapes.iter().map(|&(k1, k2)| schur3(Partition3::two_row(k1, k2), &x)).collect()
        })
        .collect()
}
