use num_traits::{Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r || self.rows[k][e].is_zero() {
                continue;
            }
            let f = self.rows[k][e].clone();
            for (x, y) in self.rows[k].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[k] -= &f * &prhs;
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = e;
    }

    fn set_objective(&mut self, c: &[Rational]) {
        self.cost = c.to_vec();
        self.value = Rational::zero();
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            if !self.cost[b].is_zero() {
                let f = self.cost[b].clone();
                for (x, y) in self.cost.iter_mut().zip(&self.rows[i]) {
                    *x -= &f * y;
                }
                self.value += &f * &self.rhs[i];
            }
        }
    }

    /// Bland's rule; returns false when unbounded.
    fn run(&mut self) -> bool {
        loop {
            let Some(e) = self.cost.iter().position(|c| c.is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }
}

/// Maximizes `c.x` subject to `A x <= b`, `x >= 0`, in exact arithmetic.
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    let art = n + m;
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, ai) in a.iter().enumerate() {
        assert_eq!(ai.len(), n);
        let mut r = vec![Rational::zero(); width];
        r[..n].clone_from_slice(ai);
        r[n + i] = Rational::from_integer(1.into());
        r[art] = Rational::from_integer((-1).into());
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        rhs: b.to_vec(),
        basis: (n..n + m).collect(),
        cost: vec![Rational::zero(); width],
        value: Rational::zero(),
    };
    let most_negative = (0..m)
        .filter(|&i| t.rhs[i].is_negative())
        .min_by(|&i, &j| t.rhs[i].cmp(&t.rhs[j]).then(i.cmp(&j)));
    if let Some(r) = most_negative {
        let mut phase1 = vec![Rational::zero(); width];
        phase1[art] = Rational::from_integer((-1).into());
        t.set_objective(&phase1);
        t.pivot(r, art);
        t.run();
        if t.value.is_negative() {
            return LpOutcome::Infeasible;
        }
        if let Some(i) = t.basis.iter().position(|&bv| bv == art) {
            match (0..art).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        }
    }
    for r in t.rows.iter_mut() {
        r[art] = Rational::zero();
    }
    let mut cost = vec![Rational::zero(); width];
    cost[..n].clone_from_slice(c);
    t.set_objective(&cost);
    if !t.run() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal { x, value: t.value }
}

/// Same as [`maximize`] with every variable free (split into x+ - x-).
pub fn maximize_free(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let c2: Vec<Rational> = c.iter().cloned().chain(c.iter().map(|x| -x)).collect();
    let a2: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| r.iter().cloned().chain(r.iter().map(|x| -x)).collect())
        .collect();
    match maximize(&c2, &a2, b) {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal {
            x: (0..n).map(|i| &x[i] - &x[n + i]).collect(),
            value,
        },
        o => o,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_optimum() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let out = maximize(
            &ints(&[3, 2]),
            &[ints(&[1, 1]), ints(&[1, 3]), ints(&[1, 0])],
            &ints(&[4, 6, 3]),
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                x: ints(&[3, 1]),
                value: int(11)
            }
        );
    }

    #[test]
    fn phase_one_negative_rhs() {
        // max -x, x >= 1/2 (i.e. -x <= -1/2), x <= 2
        let out = maximize(&ints(&[-1]), &[ints(&[-1]), ints(&[1])], &[rat(-1, 2), int(2)]);
        assert_eq!(
            out,
            LpOutcome::Optimal {
                x: vec![rat(1, 2)],
                value: rat(-1, 2)
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x <= -1 with x >= 0
        assert_eq!(maximize(&ints(&[1]), &[ints(&[1])], &ints(&[-1])), LpOutcome::Infeasible);
        assert_eq!(maximize(&ints(&[1, 0]), &[ints(&[0, 1])], &ints(&[1])), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables() {
        // max -x - y with x >= -3, y >= -2 (free vars)
        let out = maximize_free(&ints(&[-1, -1]), &[ints(&[-1, 0]), ints(&[0, -1])], &ints(&[3, 2]));
        assert_eq!(
            out,
            LpOutcome::Optimal {
                x: ints(&[-3, -2]),
                value: int(5)
            }
        );
    }
}
