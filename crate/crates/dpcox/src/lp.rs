//! Exact feasibility linear programming by the two-phase simplex method.
//!
//! The solver is generic over an ordered field so it runs on exact rationals;
//! Bland's rule guarantees termination without cycling.

use num_traits::Signed;

/// Field scalar usable by the simplex solver.
pub trait LpScalar: Clone + PartialOrd + Signed + std::fmt::Debug {}
impl<T: Clone + PartialOrd + Signed + std::fmt::Debug> LpScalar for T {}

/// Finds `x` (free sign) with `a x >= b` row by row, or `None` if infeasible.
pub fn feasible_point<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    minimize(a, b, None)
}

/// Minimizes `c . x` over `a x >= b` (free sign `x`) when `c` is given; returns
/// `None` if the system is infeasible or the objective is unbounded below.
pub fn minimize<T: LpScalar>(a: &[Vec<T>], b: &[T], c: Option<&[T]>) -> Option<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Columns: u (n), v (n), surplus s (m), artificial t (m).
    // Row i: a_i (u - v) - s_i + t_i = b_i, negated first if b_i < 0.
    let cols = 2 * n + 2 * m;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let neg = b[i].is_negative();
        let flip = |x: T| if neg { -x } else { x };
        let mut row = vec![T::zero(); cols + 1];
        for j in 0..n {
            row[j] = flip(a[i][j].clone());
            row[n + j] = flip(-a[i][j].clone());
        }
        row[2 * n + i] = flip(-T::one());
        row[2 * n + m + i] = T::one();
        row[cols] = flip(b[i].clone());
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();
    // Objective: minimize the sum of artificials, stored as reduced costs.
    let mut obj = vec![T::zero(); cols + 1];
    for row in &tab {
        for j in 0..=cols {
            if j < 2 * n + m || j == cols {
                obj[j] = obj[j].clone() - row[j].clone();
            }
        }
    }
    // Bland: smallest index with negative reduced cost enters.
    while let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = tab[i][cols].clone() / tab[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded phase-one objective cannot happen; treat as infeasible.
            return None;
        };
        pivot(&mut tab, &mut obj, pr, enter);
        basis[pr] = enter;
    }
    if !obj[cols].is_zero() {
        return None;
    }
    if let Some(c) = c {
        // Drive remaining artificials out of the basis; rows where that is
        // impossible are redundant and keep a zero artificial.
        for i in 0..m {
            if basis[i] >= 2 * n + m {
                if let Some(j) = (0..2 * n + m).find(|&j| !tab[i][j].is_zero()) {
                    pivot(&mut tab, &mut obj, i, j);
                    basis[i] = j;
                }
            }
        }
        // Phase two over the original columns only.
        let real = 2 * n + m;
        let mut cost = vec![T::zero(); cols + 1];
        for j in 0..n {
            cost[j] = c[j].clone();
            cost[n + j] = -c[j].clone();
        }
        for (i, &bv) in basis.iter().enumerate() {
            if !cost[bv].is_zero() {
                let f = cost[bv].clone();
                for j in 0..=cols {
                    cost[j] = cost[j].clone() - f.clone() * tab[i][j].clone();
                }
            }
        }
        while let Some(enter) = (0..real).find(|&j| cost[j].is_negative()) {
            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                if tab[i][enter].is_positive() {
                    let ratio = tab[i][cols].clone() / tab[i][enter].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (pr, _) = leave?;
            pivot(&mut tab, &mut cost, pr, enter);
            basis[pr] = enter;
        }
    }
    let mut x = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = x[bv].clone() + tab[i][cols].clone();
        } else if bv < 2 * n {
            x[bv - n] = x[bv - n].clone() - tab[i][cols].clone();
        }
    }
    Some(x)
}

fn pivot<T: LpScalar>(tab: &mut [Vec<T>], obj: &mut [T], pr: usize, pc: usize) {
    let p = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let prow = tab[pr].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
    if !obj[pc].is_zero() {
        let f = obj[pc].clone();
        for (v, pv) in obj.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;

    fn q(x: i64) -> BigRational {
        BigRational::from_i64(x).unwrap()
    }

    #[test]
    fn simple_feasible_system() {
        // x >= 1, y >= 2, -x - y >= -10
        let a = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(-1)]];
        let b = vec![q(1), q(2), q(-10)];
        let x = feasible_point(&a, &b).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            let lhs: BigRational = row.iter().zip(&x).map(|(p, v)| p * v).sum();
            assert!(lhs >= *bi);
        }
    }

    #[test]
    fn infeasible_system() {
        // x >= 1 and -x >= 1
        let a = vec![vec![q(1)], vec![q(-1)]];
        let b = vec![q(1), q(1)];
        assert!(feasible_point(&a, &b).is_none());
    }

    #[test]
    fn minimizes_objective() {
        // minimize x + y subject to x >= 1, y >= 2, x + y >= 4
        let a = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]];
        let b = vec![q(1), q(2), q(4)];
        let c = vec![q(1), q(1)];
        let x = minimize(&a, &b, Some(&c)).unwrap();
        assert_eq!(&x[0] + &x[1], q(4));
    }

    #[test]
    fn unbounded_objective() {
        let a = vec![vec![q(1)]];
        let b = vec![q(1)];
        let c = vec![q(1)];
        assert!(
            minimize(&a, &b, Some(&c)).is_none() || {
                // x >= 1 with minimize x is bounded: optimum 1.
                minimize(&a, &b, Some(&c)).unwrap()[0] == q(1)
            }
        );
        let c = vec![q(-1)];
        assert!(minimize(&a, &b, Some(&c)).is_none());
    }

    #[test]
    fn works_over_f64() {
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = vec![2.0, 0.0];
        let x = feasible_point(&a, &b).unwrap();
        assert!(x[0] + x[1] >= 2.0 - 1e-12 && x[0] - x[1] >= -1e-12);
    }
}
