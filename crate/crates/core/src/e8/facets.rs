//! Irredundant inequalities of the secondary cone `{Q : rho(Q) >= 0}`.
//!
//! Each candidate row is decided by a floating-point LP and the decision is
//! then certified exactly: a facet by an integer point violating only that
//! row, a redundant row by a nonnegative rational combination of the others.

use std::collections::{BTreeMap, HashMap};

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::lp::{maximize, LpOutcome};
use crate::exact::{format_rational, int, Rational, SymMatrix};

use super::regulators::{RegulatorKind, RegulatorSet};

/// Exact evidence for the status of one row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowCertificate {
    /// `a_j . x < 0 < a_i . x` for every other row `i`.
    Facet { witness: Vec<i64> },
    /// `a_j = sum lambda_i a_i` with `lambda_i >= 0`.
    Redundant { combination: Vec<(usize, String)> },
}

impl RowCertificate {
    pub fn is_facet(&self) -> bool {
        matches!(self, RowCertificate::Facet { .. })
    }
}

fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&p, &q)| p as i128 * q as i128).sum()
}

fn unit(a: &[i64]) -> Vec<f64> {
    let n = a.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
    a.iter().map(|&x| x as f64 / n).collect()
}

fn check_facet(rows: &[Vec<i64>], j: usize, x: &[i64]) -> bool {
    rows.iter().enumerate().all(|(i, a)| {
        let v = dot(a, x);
        if i == j {
            v < 0
        } else {
            v > 0
        }
    })
}

/// Largest `t` with `a_i . x >= t |a_i|` (`i != j`), `-a_j . x >= t |a_j|`, `|x|_inf <= 1`.
fn separation_lp(normed: &[Vec<f64>], j: usize) -> Option<(f64, Vec<f64>)> {
    let n = normed[0].len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    for (i, a) in normed.iter().enumerate() {
        let sign = if i == j { -1.0 } else { 1.0 };
        let mut terms: Vec<_> = x.iter().zip(a).filter(|(_, c)| **c != 0.0).map(|(&v, &c)| (v, sign * c)).collect();
        terms.push((t, -1.0));
        lp.add_constraint(terms.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().ok()?.into_solution().ok()?;
    Some((sol.var_value(t), x.iter().map(|&v| sol.var_value(v)).collect()))
}

/// Basic solution of `sum_{i != j} lambda_i a_i = a_j`, `lambda >= 0`.
fn combination_lp(normed: &[Vec<f64>], j: usize) -> Option<Vec<(usize, f64)>> {
    let n = normed[0].len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..normed.len())
        .map(|i| (i != j).then(|| lp.add_var(1.0, (0.0, f64::INFINITY))))
        .collect();
    for k in 0..n {
        let terms: Vec<_> = vars
            .iter()
            .zip(normed)
            .filter_map(|(v, a)| v.filter(|_| a[k] != 0.0).map(|v| (v, a[k])))
            .collect();
        lp.add_constraint(terms.as_slice(), ComparisonOp::Eq, normed[j][k]);
    }
    let sol = lp.solve().ok()?.into_solution().ok()?;
    Some(
        vars.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, sol.var_value(v))))
            .filter(|&(_, l)| l > 1e-12)
            .collect(),
    )
}

/// Exact nonnegative solution of `sum_{i in support} lambda_i a_i = a_j`.
fn exact_combination(rows: &[Vec<i64>], j: usize, support: &[usize]) -> Option<Vec<(usize, Rational)>> {
    let n = rows[j].len();
    let mut a = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for (k, &target) in rows[j].iter().enumerate() {
        let row: Vec<Rational> = support.iter().map(|&i| int(rows[i][k])).collect();
        a.push(row.iter().map(|x| -x).collect());
        b.push(int(-target));
        a.push(row);
        b.push(int(target));
    }
    match maximize(&vec![Rational::zero(); support.len()], &a, &b) {
        LpOutcome::Optimal { x, .. } => Some(support.iter().copied().zip(x).filter(|(_, l)| !l.is_zero()).collect()),
        _ => None,
    }
}

fn certify_row(rows: &[Vec<i64>], normed: &[Vec<f64>], j: usize) -> Result<RowCertificate> {
    let fail = |why: &str| Error::NonConvergence {
        iterations: 0,
        message: format!("row {j}: {why}"),
        iterate: Vec::new(),
    };
    let (t, x) = separation_lp(normed, j).ok_or_else(|| fail("separation LP failed"))?;
    if t > 1e-9 {
        let scale = 64.0 / t;
        let witness: Vec<i64> = x.iter().map(|v| (v * scale).round() as i64).collect();
        return if check_facet(rows, j, &witness) {
            Ok(RowCertificate::Facet { witness })
        } else {
            Err(fail("rounded witness does not separate"))
        };
    }
    let lambda = combination_lp(normed, j).ok_or_else(|| fail("combination LP failed"))?;
    let support: Vec<usize> = lambda.iter().map(|&(i, _)| i).collect();
    let exact = exact_combination(rows, j, &support).ok_or_else(|| fail("support admits no exact combination"))?;
    Ok(RowCertificate::Redundant {
        combination: exact.iter().map(|(i, l)| (*i, format_rational(l))).collect(),
    })
}

/// Certificates for the `candidates` among the (pairwise non-parallel) `rows`.
pub fn irredundant_rows(rows: &[Vec<i64>], candidates: &[usize]) -> Result<Vec<RowCertificate>> {
    let normed: Vec<Vec<f64>> = rows.iter().map(|a| unit(a)).collect();
    candidates.par_iter().map(|&j| certify_row(rows, &normed, j)).collect()
}

/// Primitive integer rows, one per ray, in input order.
pub fn distinct_rays(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut seen = std::collections::HashSet::new();
    rows.iter()
        .filter_map(|r| {
            let g = r.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            let p: Vec<i64> = if g > 1 { r.iter().map(|x| x / g).collect() } else { r.clone() };
            seen.insert(p.clone()).then_some(p)
        })
        .collect()
}

/// Linear functional `Q -> tr(R Q)` in upper-triangle coordinates of `Q`.
pub fn functional_row(form: &SymMatrix) -> Result<Vec<i64>> {
    let d = form.dim();
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let v = form.get(i, j);
            let v = if i == j { v.clone() } else { v * int(2) };
            if !v.is_integer() {
                return Err(Error::Parse(format!("non-integral regulator entry {v}")));
            }
            out.push(v.to_integer().to_i64().ok_or_else(|| Error::Parse(format!("entry {v} overflows")))?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetOrbit {
    pub size: usize,
    pub kinds: Vec<RegulatorKind>,
    pub vanishes_at_identity: bool,
    pub representative: Vec<i64>,
    pub certificate: RowCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetReport {
    pub ambient_dim: usize,
    /// Distinct regulator forms (rows of the inequality system).
    pub inequalities: usize,
    pub orbits: usize,
    pub facets: usize,
    pub facets_through_identity: usize,
    pub facet_orbits: Vec<FacetOrbit>,
    pub redundant_orbits: usize,
}

/// Facets of the closed secondary cone cut out by `set`, using the symmetric
/// group on coordinates 2..8 to test one row per orbit.
pub fn facet_count(set: &RegulatorSet) -> Result<FacetReport> {
    let mut by_form: BTreeMap<Vec<i64>, (SymMatrix, Vec<RegulatorKind>)> = BTreeMap::new();
    for r in &set.regulators {
        let row = functional_row(&r.form)?;
        let entry = by_form.entry(row).or_insert_with(|| (r.form.clone(), Vec::new()));
        if !entry.1.contains(&r.kind) {
            entry.1.push(r.kind);
        }
    }
    let forms: Vec<(Vec<i64>, SymMatrix, Vec<RegulatorKind>)> = by_form.into_iter().map(|(k, (f, ks))| (k, f, ks)).collect();
    if distinct_rays(&forms.iter().map(|f| f.0.clone()).collect::<Vec<_>>()).len() != forms.len() {
        return Err(Error::DataIntegrity("regulator forms are not pairwise non-parallel".into()));
    }
    let index: HashMap<&[i64], usize> = forms.iter().enumerate().map(|(i, f)| (f.0.as_slice(), i)).collect();

    // transposition (2 3) and the 7-cycle on coordinates 2..8 generate S7
    let gens: [[usize; 8]; 2] = [[0, 2, 1, 3, 4, 5, 6, 7], [0, 2, 3, 4, 5, 6, 7, 1]];
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, (_, form, _)) in forms.iter().enumerate() {
        for g in &gens {
            let image = SymMatrix::from_fn(8, |a, b| form.get(g[a], g[b]).clone());
            let row = functional_row(&image)?;
            let &k = index
                .get(row.as_slice())
                .ok_or_else(|| Error::DataIntegrity("regulator set is not invariant under coordinate permutations".into()))?;
            let (ri, rk) = (find(&mut parent, i), find(&mut parent, k));
            parent[ri] = rk;
        }
    }
    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..forms.len() {
        let r = find(&mut parent, i);
        orbits.entry(r).or_default().push(i);
    }
    let orbits: Vec<Vec<usize>> = orbits.into_values().collect();
    let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
    let rows: Vec<Vec<i64>> = forms.iter().map(|f| f.0.clone()).collect();
    let certs = irredundant_rows(&rows, &reps)?;

    let identity = SymMatrix::identity(8);
    let mut facet_orbits = Vec::new();
    let mut redundant_orbits = 0;
    for (orbit, cert) in orbits.iter().zip(certs) {
        if !cert.is_facet() {
            redundant_orbits += 1;
            continue;
        }
        let (row, form, kinds) = &forms[orbit[0]];
        facet_orbits.push(FacetOrbit {
            size: orbit.len(),
            kinds: kinds.clone(),
            vanishes_at_identity: form.trace_product(&identity).is_zero(),
            representative: row.clone(),
            certificate: cert,
        });
    }
    facet_orbits.sort_by_key(|o| (o.vanishes_at_identity, o.size));
    let facets = facet_orbits.iter().map(|o| o.size).sum();
    let through = facet_orbits.iter().filter(|o| o.vanishes_at_identity).map(|o| o.size).sum();
    Ok(FacetReport {
        ambient_dim: 36,
        inequalities: forms.len(),
        orbits: orbits.len(),
        facets,
        facets_through_identity: through,
        facet_orbits,
        redundant_orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_cone_has_three_facets() {
        // coordinates (q11, q12, q22); the triangulation with diagonal e1 + e2
        // is Delone on {q12 < 0, q11 + q12 > 0, q22 + q12 > 0}
        let regulators = vec![vec![0, -1, 0], vec![1, 1, 0], vec![0, 1, 1]];
        let mut rows = regulators.clone();
        rows.extend([vec![1, 0, 0], vec![0, 0, 1], vec![1, 0, 1], vec![2, 1, 1], vec![3, 2, 1]]);
        let rows = distinct_rays(&rows);
        let certs = irredundant_rows(&rows, &(0..rows.len()).collect::<Vec<_>>()).unwrap();
        let facets: Vec<&Vec<i64>> = rows.iter().zip(&certs).filter(|(_, c)| c.is_facet()).map(|(r, _)| r).collect();
        assert_eq!(facets.len(), 3);
        for r in &regulators {
            assert!(facets.contains(&r));
        }
    }

    #[test]
    fn parallel_rows_collapse() {
        let rows = distinct_rays(&[vec![2, 4], vec![1, 2], vec![-1, -2]]);
        assert_eq!(rows, vec![vec![1, 2], vec![-1, -2]]);
    }

    #[test]
    fn redundant_row_has_exact_combination() {
        let rows = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let c = irredundant_rows(&rows, &[2]).unwrap();
        match &c[0] {
            RowCertificate::Redundant { combination } => {
                assert_eq!(combination, &vec![(0, "1".to_string()), (1, "1".to_string())]);
            }
            other => panic!("{other:?}"),
        }
    }
}
