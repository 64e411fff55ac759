use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::linalg::{primitive_integer_row, solve_integer};
use crate::exact::{format_rational, int, Rational, SymMatrix};

use super::classes::DiagonalClass;
use super::model::E8Model;
use super::point::E8Point;
use super::triangulation::{facet_pairs, refined_simplices, FacetPair, PeriodicTriangulation, SimplexSource, TriSimplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegulatorKind {
    /// simplex of the unrefined subdivision against a cross polytope piece
    Type1,
    /// pieces of two different cross polytopes
    Type2,
    /// two pieces of the same cross polytope
    Type3,
}

impl RegulatorKind {
    pub fn index(self) -> usize {
        match self {
            RegulatorKind::Type1 => 0,
            RegulatorKind::Type2 => 1,
            RegulatorKind::Type3 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        ["type1", "type2", "type3"][self.index()]
    }
}

/// Linear form `rho(Q) = sum_i c_i Q[v_i]` on symmetric matrices in
/// standard coordinates; positive iff the pair is locally Delone for `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regulator {
    pub kind: RegulatorKind,
    /// Sorted by point, translated so the smallest point is the origin.
    pub terms: Vec<(Rational, E8Point)>,
    /// `sum_i c_i v_i v_i^T`, scaled to a primitive integer matrix.
    pub form: SymMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegulatorJson {
    pub kind: RegulatorKind,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub point: Vec<String>,
}

impl Regulator {
    /// Builds the normalized regulator from weighted points with
    /// `sum c_i = 0` and `sum c_i v_i = 0`.
    pub fn from_terms(kind: RegulatorKind, raw: &[(Rational, E8Point)]) -> Regulator {
        let quarter = Rational::new(BigInt::one(), BigInt::from(4));
        let form = SymMatrix::outer_sum(
            8,
            raw.iter()
                .map(|(c, p)| (c * &quarter, p.0.map(|x| int(x as i64))))
                .collect::<Vec<_>>()
                .iter()
                .map(|(c, v)| (c.clone(), v.as_slice())),
        );
        let upper = form.upper_triangle();
        let prim = primitive_integer_row(&upper);
        let k = upper.iter().position(|x| !x.is_zero()).expect("nonzero regulator");
        let scale = Rational::from_integer(prim[k].clone()) / &upper[k];
        let form = SymMatrix::from_upper_triangle(8, &prim.into_iter().map(Rational::from_integer).collect::<Vec<_>>())
            .expect("36 coordinates");
        let min = raw.iter().map(|t| t.1).min().expect("nonempty");
        let mut terms: Vec<(Rational, E8Point)> = raw
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| (c * &scale, *p - min))
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        Regulator { kind, terms, form }
    }

    /// `tr(R Q)` for `Q` in standard coordinates.
    pub fn evaluate(&self, q: &SymMatrix) -> Rational {
        self.form.trace_product(q)
    }

    /// Same value computed from the weighted points (up to the stored normalization).
    pub fn evaluate_terms(&self, q: &SymMatrix) -> Rational {
        self.terms.iter().map(|(c, p)| c * q.quad(&p.to_rat())).sum()
    }

    pub fn to_json(&self) -> RegulatorJson {
        RegulatorJson {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|(c, p)| TermJson {
                    coeff: format_rational(c),
                    point: p.to_strings(),
                })
                .collect(),
        }
    }
}

/// Regulator of two simplices sharing `facet`, with opposite vertices `a`, `b`.
/// Solves `b - f_0 = lambda (a - f_0) + sum_k mu_k (f_k - f_0)`.
pub fn regulator_from_pair(kind: RegulatorKind, a: E8Point, b: E8Point, facet: &[E8Point; 8]) -> Regulator {
    let f0 = facet[0];
    let cols: Vec<E8Point> = std::iter::once(a - f0).chain(facet[1..].iter().map(|f| *f - f0)).collect();
    let m: Vec<Vec<BigInt>> = (0..8)
        .map(|r| cols.iter().map(|c| BigInt::from(c.0[r])).collect())
        .collect();
    let ub = b - f0;
    let rhs: Vec<Vec<BigInt>> = (0..8).map(|r| vec![BigInt::from(ub.0[r])]).collect();
    let x = solve_integer(&m, &rhs).expect("facet and opposite vertex span the space");
    let lambda = x[0][0].clone();
    assert!(lambda.is_negative(), "opposite vertices on the same side of the facet");
    let mu: Vec<Rational> = x[1..].iter().map(|r| r[0].clone()).collect();
    let mu_sum: Rational = mu.iter().sum();
    let mut raw = Vec::with_capacity(10);
    raw.push((Rational::one(), a));
    raw.push((-lambda.recip(), b));
    for (k, f) in facet[1..].iter().enumerate() {
        raw.push((&mu[k] / &lambda, *f));
    }
    raw.push(((Rational::one() - &lambda - mu_sum) / &lambda, f0));
    Regulator::from_terms(kind, &raw)
}

pub fn pair_kind(a: &TriSimplex, b: &TriSimplex) -> RegulatorKind {
    match (a.source, b.source) {
        (SimplexSource::Piece(x), SimplexSource::Piece(y)) if x == y => RegulatorKind::Type3,
        (SimplexSource::Piece(_), SimplexSource::Piece(_)) => RegulatorKind::Type2,
        (SimplexSource::Delone, SimplexSource::Delone) => {
            panic!("two unrefined simplices never share a facet")
        }
        _ => RegulatorKind::Type1,
    }
}

/// Refined triangulation with its adjacency data.
#[derive(Clone, Debug)]
pub struct RefinedTriangulation {
    pub triangulation: PeriodicTriangulation,
    pub simplices: Vec<TriSimplex>,
    pub pairs: Vec<FacetPair>,
    /// Facets not shared by exactly two simplices.
    pub unmatched_facets: usize,
}

impl RefinedTriangulation {
    pub fn build(model: &E8Model, t: &PeriodicTriangulation) -> Self {
        let simplices = refined_simplices(model, t);
        let (pairs, unmatched_facets) = facet_pairs(&simplices);
        RefinedTriangulation {
            triangulation: t.clone(),
            simplices,
            pairs,
            unmatched_facets,
        }
    }

    pub fn pair_kinds(&self) -> Vec<RegulatorKind> {
        self.pairs
            .iter()
            .map(|p| pair_kind(&self.simplices[p.a], &self.simplices[p.b]))
            .collect()
    }
}

/// Distinct regulators (as linear forms) of a triangulation.
#[derive(Clone, Debug)]
pub struct RegulatorSet {
    /// Sorted by kind, then by form.
    pub regulators: Vec<Regulator>,
    /// Adjacent pairs per kind, before deduplication.
    pub pair_counts: [usize; 3],
}

impl RegulatorSet {
    pub fn distinct_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for r in &self.regulators {
            c[r.kind.index()] += 1;
        }
        c
    }
}

pub fn regulators_of(refined: &RefinedTriangulation) -> RegulatorSet {
    let kinds = refined.pair_kinds();
    let regs: Vec<Regulator> = refined
        .pairs
        .par_iter()
        .zip(kinds.par_iter())
        .map(|(p, &k)| regulator_from_pair(k, p.a_opposite, p.b_opposite, &p.facet))
        .collect();
    let mut pair_counts = [0; 3];
    for k in &kinds {
        pair_counts[k.index()] += 1;
    }
    // one representative per (kind, form); the smallest term list wins
    let mut distinct: BTreeMap<(RegulatorKind, Vec<Rational>), Regulator> = BTreeMap::new();
    for r in regs {
        let key = (r.kind, r.form.upper_triangle());
        match distinct.get(&key) {
            Some(old) if old.terms <= r.terms => {}
            _ => {
                distinct.insert(key, r);
            }
        }
    }
    RegulatorSet {
        regulators: distinct.into_values().collect(),
        pair_counts,
    }
}

pub fn regulators(model: &E8Model, t: &PeriodicTriangulation) -> RegulatorSet {
    regulators_of(&RefinedTriangulation::build(model, t))
}

/// The seven regulators of each split cross polytope in closed form:
/// `(Q[e] - Q[d]) / 2` for the chosen diagonal `d` and each other diagonal `e`.
pub fn type3_regulators(classes: &[DiagonalClass], t: &PeriodicTriangulation) -> Vec<Regulator> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut out: BTreeMap<Vec<Rational>, Regulator> = BTreeMap::new();
    for (c, &d) in classes.iter().zip(&t.diagonals) {
        for &e in &c.members {
            if e == d || e == -d || e < -e {
                continue;
            }
            let r = Regulator::from_terms(RegulatorKind::Type3, &[(half.clone(), e), (-half.clone(), d), (half.clone(), -e), (-half.clone(), -d)]);
            out.entry(r.form.upper_triangle()).or_insert(r);
        }
    }
    out.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, SymMatrix};

    #[test]
    fn type3_closed_form_matches_solve() {
        // cross polytope of 2e1 split along (0, 2e1)
        let w = E8Point([4, 0, 0, 0, 0, 0, 0, 0]);
        let x = |s: i32| E8Point([2, 2 * s, 0, 0, 0, 0, 0, 0]);
        let y = |s: i32| E8Point([2, 0, 2 * s, 0, 0, 0, 0, 0]);
        let rest: Vec<E8Point> = (3..8)
            .map(|i| {
                let mut c = [0; 8];
                c[0] = 2;
                c[i] = 2;
                E8Point(c)
            })
            .collect();
        let mut facet = vec![E8Point::ZERO, w, y(1)];
        facet.extend(&rest);
        facet.sort();
        let facet: [E8Point; 8] = facet.try_into().unwrap();
        let r = regulator_from_pair(RegulatorKind::Type3, x(1), x(-1), &facet);
        // Q[x+] + Q[x-] - Q[0] - Q[w], equivalently (Q[x+ - x-] - Q[w]) / 2
        let q = SymMatrix::from_fn(8, |i, j| if i == j { int(1 + i as i64) } else if j == i + 1 { rat(1, 3) } else { int(0) });
        let direct = q.quad(&x(1).to_rat()) + q.quad(&x(-1).to_rat()) - q.quad(&w.to_rat());
        let val = r.evaluate(&q);
        assert!(val.is_positive() == direct.is_positive());
        let ratio = &val / &direct;
        assert_eq!(r.evaluate(&SymMatrix::identity(8)), int(0));
        assert_eq!(r.evaluate_terms(&q), val);
        // any other symmetric matrix gives the same ratio
        let q2 = SymMatrix::from_fn(8, |i, j| if i == j { int(2) } else { rat(1, 7) });
        let direct2 = q2.quad(&x(1).to_rat()) + q2.quad(&x(-1).to_rat()) - q2.quad(&w.to_rat());
        assert_eq!(r.evaluate(&q2), direct2 * ratio);
    }
}
