//! Exact two-phase simplex over the rationals.
//!
//! Problems are in standard form: minimize `c·x` subject to `A x = b`,
//! `x >= 0`. Pivoting follows Bland's rule, so the method terminates without
//! any anti-cycling perturbation.

use num_traits::{Signed, Zero};

use crate::linalg::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    // m rows of width ncols + 1; last entry is the right-hand side
    rows: Vec<Vec<Rational>>,
    // reduced costs; last entry is minus the objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, c: &[Rational]) {
        let mut cost = vec![Rational::zero(); self.ncols + 1];
        cost[..c.len()].clone_from_slice(c);
        for (i, &b) in self.basis.iter().enumerate() {
            if b < c.len() && !c[b].is_zero() {
                let f = c[b].clone();
                for (v, p) in cost.iter_mut().zip(&self.rows[i]) {
                    *v -= &f * p;
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland-rule simplex over columns `< allowed`. Returns false when
    /// the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let rhs = self.ncols;
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((leave, _)) => self.pivot(leave, enter),
                None => return false,
            }
        }
    }
}

/// Minimizes `c·x` subject to `a x = b`, `x >= 0`.
pub fn minimize(c: &[Rational], a: &Matrix, b: &[Rational]) -> LpOutcome {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(c.len(), n, "cost vector length");
    assert_eq!(b.len(), m, "right-hand side length");
    // phase one: one artificial per row, columns n..n+m
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(ncols + 1);
        for j in 0..n {
            row.push(if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, cost: Vec::new(), basis: (n..n + m).collect(), ncols };
    let mut phase_one = vec![Rational::zero(); ncols];
    for v in phase_one.iter_mut().skip(n) {
        *v = Rational::from_integer(1.into());
    }
    t.set_objective(&phase_one);
    t.optimize(ncols);
    if !t.cost[ncols].is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis; rows that cannot be pivoted are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    t.set_objective(c);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        solution[bv] = t.rows[i][ncols].clone();
    }
    LpOutcome::Optimal { value: -t.cost[ncols].clone(), solution }
}

/// Maximizes `c·x` subject to `a x = b`, `x >= 0`.
pub fn maximize(c: &[Rational], a: &Matrix, b: &[Rational]) -> LpOutcome {
    let neg: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    match minimize(&neg, a, b) {
        LpOutcome::Optimal { value, solution } => LpOutcome::Optimal { value: -value, solution },
        other => other,
    }
}

/// Minimum of `sum_i weights_i |v_i - (W t)_i|` over free `t`, where the
/// columns of `span` generate the subspace being quotiented out.
pub fn weighted_l1_distance(v: &[Rational], span: &Matrix, weights: &[Rational]) -> Rational {
    let n = v.len();
    let k = span.cols();
    if k == 0 {
        return v.iter().zip(weights).map(|(x, w)| x.abs() * w).sum();
    }
    // variables: t+ (k), t- (k), p (n), q (n); W t+ - W t- + p - q = v
    let cols = 2 * k + 2 * n;
    let a = Matrix::from_fn(n, cols, |r, c| {
        if c < k {
            span[(r, c)].clone()
        } else if c < 2 * k {
            -span[(r, c - k)].clone()
        } else if c < 2 * k + n {
            if c - 2 * k == r { Rational::from_integer(1.into()) } else { Rational::zero() }
        } else if c - 2 * k - n == r {
            Rational::from_integer((-1).into())
        } else {
            Rational::zero()
        }
    });
    let mut cost = vec![Rational::zero(); 2 * k];
    cost.extend(weights.iter().cloned());
    cost.extend(weights.iter().cloned());
    match minimize(&cost, &a, v) {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("distance LP is feasible and bounded below, got {other:?}"),
    }
}
