//! Exact rational linear programming for the small systems used by the
//! width search, the simplex separation test and fan validation.
//!
//! Problems are stated as `maximize c·x` subject to `A x ≥ b` with free `x`.
//! Internally this becomes a standard-form tableau (split free variables,
//! surplus columns, artificials) solved by a two-phase simplex with Bland's
//! rule, so termination holds under degeneracy.

use num_traits::{Signed, Zero};

use crate::lattice::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
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

/// Inequality-form program `max c·x, rows·x ≥ rhs`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    nvars: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn at_least(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(row.len(), self.nvars, "constraint width");
        self.rows.push(row);
        self.rhs.push(rhs);
        self
    }

    pub fn at_most(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.at_least(row.into_iter().map(|x| -x).collect(), -rhs)
    }

    pub fn equal(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.at_least(row.clone(), rhs.clone());
        self.at_most(row, rhs)
    }

    pub fn maximize(&self, objective: &[Rational]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars, "objective width");
        Tableau::build(self).solve(objective)
    }

    /// Feasibility only.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        match self.maximize(&vec![Rational::zero(); self.nvars]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau {
    nvars: usize,
    // columns: x⁺ (nvars), x⁻ (nvars), surplus (m), artificials, rhs
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    art: usize,
    ncols: usize,
    // reduced costs of the current objective, with its value last
    cost: Vec<Rational>,
}

impl Tableau {
    /// Row `a·x − s = b`; rows with `b ≤ 0` are negated so the surplus starts
    /// basic, the rest get an artificial.
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.nvars;
        let m = lp.rows.len();
        let needs_art: Vec<bool> = lp.rhs.iter().map(|b| b.is_positive()).collect();
        let nart = needs_art.iter().filter(|&&x| x).count();
        let art = 2 * n + m;
        let ncols = art + nart;
        let one = Rational::from_integer(1.into());
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = art;
        for (i, (a, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let mut row = vec![Rational::zero(); ncols + 1];
            if needs_art[i] {
                for (j, aj) in a.iter().enumerate() {
                    row[j] = aj.clone();
                    row[n + j] = -aj.clone();
                }
                row[2 * n + i] = -one.clone();
                row[next_art] = one.clone();
                row[ncols] = b.clone();
                basis.push(next_art);
                next_art += 1;
            } else {
                for (j, aj) in a.iter().enumerate() {
                    row[j] = -aj.clone();
                    row[n + j] = aj.clone();
                }
                row[2 * n + i] = one.clone();
                row[ncols] = -b.clone();
                basis.push(2 * n + i);
            }
            rows.push(row);
        }
        Self { nvars: n, rows, basis, art, ncols, cost: Vec::new() }
    }

    fn set_objective(&mut self, objective: &[Rational]) {
        let mut cost = objective.to_vec();
        cost.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if objective[b].is_zero() {
                continue;
            }
            let f = objective[b].clone();
            for (c, x) in cost.iter_mut().zip(row) {
                if !x.is_zero() {
                    *c -= &f * x;
                }
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for row in self.rows.iter_mut().chain(std::iter::once(&mut self.cost)) {
            if row.is_empty() || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Maximizes the current objective with columns `>= limit` barred from
    /// entering (Bland's rule). `false` means unbounded.
    fn run(&mut self, limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| self.cost[j].is_positive()) else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        let n = self.nvars;
        let art = self.art;
        let total = self.ncols;

        if total > art {
            let mut phase1 = vec![Rational::zero(); total];
            for c in phase1.iter_mut().skip(art) {
                *c = -Rational::from_integer(1.into());
            }
            self.set_objective(&phase1);
            self.run(total);
            let infeasibility: Rational = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= art)
                .map(|(row, _)| row[total].clone())
                .fold(Rational::zero(), |a, b| a + b);
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }

            // Drive zero-level artificials out of the basis; drop redundant rows.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] < art {
                    r += 1;
                    continue;
                }
                match (0..art).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(c) => {
                        self.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            }
        }

        let mut phase2 = vec![Rational::zero(); total];
        for (j, c) in objective.iter().enumerate() {
            phase2[j] = c.clone();
            phase2[n + j] = -c.clone();
        }
        self.set_objective(&phase2);
        if !self.run(art) {
            return LpOutcome::Unbounded;
        }

        let mut values = vec![Rational::zero(); total];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            values[b] = row[total].clone();
        }
        let point: Vec<Rational> = (0..n).map(|j| &values[j] - &values[n + j]).collect();
        let value = point
            .iter()
            .zip(objective)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { value, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn box_maximum() {
        let mut lp = LinearProgram::new(2);
        lp.at_least(r(&[1, 0]), rat(0, 1))
            .at_least(r(&[0, 1]), rat(0, 1))
            .at_most(r(&[1, 1]), rat(3, 2))
            .at_most(r(&[1, 0]), rat(1, 1));
        let out = lp.maximize(&r(&[2, 1]));
        assert_eq!(out.value(), Some(&rat(5, 2)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.at_least(r(&[1]), rat(2, 1)).at_most(r(&[1]), rat(1, 1));
        assert_eq!(lp.maximize(&r(&[1])), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.at_least(r(&[1, -1]), rat(0, 1));
        assert_eq!(lp.maximize(&r(&[1, 1])), LpOutcome::Unbounded);
    }

    #[test]
    fn equalities_and_free_variables() {
        // x + y = -1, x - y = 3 forces (1, -2)
        let mut lp = LinearProgram::new(2);
        lp.equal(r(&[1, 1]), rat(-1, 1)).equal(r(&[1, -1]), rat(3, 1));
        let out = lp.maximize(&r(&[0, 1]));
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(-2, 1));
                assert_eq!(point, r(&[1, -2]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // many constraints through the origin
        let mut lp = LinearProgram::new(2);
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, 1)] {
            lp.at_least(r(&[a, b]), rat(0, 1));
        }
        lp.at_most(r(&[1, 1]), rat(1, 1));
        assert_eq!(lp.maximize(&r(&[1, 0])).value(), Some(&rat(1, 1)));
        assert_eq!(lp.maximize(&r(&[-1, -1])).value(), Some(&rat(0, 1)));
    }
}
