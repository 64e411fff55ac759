use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Rational, RatVector};
use crate::qform::Simplex;

use super::model::E8Model;
use super::point::{canonical_vertices, E8Point};

/// Origin-incident cross polytope `P_w`: `v_0 = 0`, `v_8 = w`, `v_j + v_{j+8} = w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CrossPolytope {
    pub diagonal: E8Point,
    pub vertices: [E8Point; 16],
}

impl CrossPolytope {
    /// Center `w/2` as a rational vector.
    pub fn center(&self) -> RatVector {
        self.diagonal.to_rat().scale(&Rational::new(1.into(), 2.into()))
    }

    /// The 8 diagonals `v_j - v_{j+8}`.
    pub fn diagonals(&self) -> [E8Point; 8] {
        std::array::from_fn(|j| self.vertices[j] - self.vertices[j + 8])
    }

    pub fn contains_vertex(&self, p: &E8Point) -> bool {
        self.vertices.contains(p)
    }

    pub fn translate(&self, t: E8Point) -> CrossPolytope {
        CrossPolytope {
            diagonal: self.diagonal,
            vertices: self.vertices.map(|v| v + t),
        }
    }
}

/// Origin-incident regular simplex with center `v/3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeloneSimplexE8 {
    pub center_times_3: E8Point,
    /// Sorted.
    pub vertices: [E8Point; 9],
}

impl DeloneSimplexE8 {
    pub fn center(&self) -> RatVector {
        self.center_times_3.to_rat().scale(&Rational::new(1.into(), 3.into()))
    }

    pub fn to_simplex(&self) -> Simplex {
        to_simplex(&self.vertices)
    }
}

pub fn to_simplex(v: &[E8Point; 9]) -> Simplex {
    Simplex::new(v.iter().map(E8Point::to_rat).collect()).expect("nondegenerate E8 simplex")
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Simplex(DeloneSimplexE8),
    Cross(CrossPolytope),
}

impl Cell {
    fn contains_origin(&self) -> bool {
        match self {
            Cell::Simplex(s) => s.vertices.contains(&E8Point::ZERO),
            Cell::Cross(p) => p.vertices.contains(&E8Point::ZERO),
        }
    }
}

pub fn cross_polytope(model: &E8Model, w: E8Point) -> Result<CrossPolytope> {
    if model.shell4.binary_search(&w).is_err() {
        return Err(Error::NotInShell(format!("{w:?} is not a norm-4 vector")));
    }
    // roots x with (x, w) = 2; each pairs with w - x
    let mut firsts: Vec<E8Point> = model
        .roots
        .iter()
        .copied()
        .filter(|x| x.dot4(&w) == 8 && *x > w - *x)
        .collect();
    firsts.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(firsts.len(), 7);
    let mut vertices = [E8Point::ZERO; 16];
    vertices[8] = w;
    for (j, x) in firsts.iter().enumerate() {
        vertices[j + 1] = *x;
        vertices[j + 9] = w - *x;
    }
    Ok(CrossPolytope { diagonal: w, vertices })
}

/// Origin-incident simplex with center `v/3`: the origin plus the roots `x` with `(x, v) = 3`.
pub fn delone_simplex(model: &E8Model, v: E8Point) -> Result<DeloneSimplexE8> {
    if model.simplex_centers.binary_search(&v).is_err() {
        return Err(Error::NotInShell(format!("{v:?} is not a simplex center")));
    }
    let mut verts = vec![E8Point::ZERO];
    verts.extend(model.roots.iter().copied().filter(|x| x.dot4(&v) == 12));
    let mut vertices: [E8Point; 9] = verts
        .try_into()
        .map_err(|_| Error::NotInShell(format!("{v:?} does not define a simplex")))?;
    vertices.sort_unstable();
    Ok(DeloneSimplexE8 {
        center_times_3: v,
        vertices,
    })
}

/// The 17280 simplices containing the origin.
pub fn simplices_of_subdivision(model: &E8Model) -> Vec<DeloneSimplexE8> {
    model
        .simplex_centers
        .par_iter()
        .map(|&v| delone_simplex(model, v).expect("center from model"))
        .collect()
}

/// Simplices modulo translations, canonicalized with the lexicographically
/// smallest vertex at the origin; sorted.
pub fn simplex_representatives(model: &E8Model) -> Vec<[E8Point; 9]> {
    let set: BTreeSet<[E8Point; 9]> = simplices_of_subdivision(model)
        .into_iter()
        .map(|s| canonical_vertices(s.vertices))
        .collect();
    set.into_iter().collect()
}

/// Facet adjacency of two origin-incident cells, decided by the inner
/// product of their centers: `5/6` (simplex, cross polytope) or `3/4`
/// (two cross polytopes). Two simplices never share a facet.
pub fn adjacency(a: &Cell, b: &Cell) -> Result<bool> {
    if !a.contains_origin() || !b.contains_origin() {
        return Err(Error::NotOriginIncident);
    }
    Ok(match (a, b) {
        (Cell::Simplex(s), Cell::Cross(p)) | (Cell::Cross(p), Cell::Simplex(s)) => {
            // (v/3, w/2) = 5/6
            s.center_times_3.dot4(&p.diagonal) == 20
        }
        (Cell::Cross(p), Cell::Cross(q)) => p.diagonal.dot4(&q.diagonal) == 12,
        (Cell::Simplex(_), Cell::Simplex(_)) => false,
    })
}

/// Number of simplices and cross polytopes sharing a facet with `cell`,
/// found by translating each vertex to the origin. Returns `(simplices, cross polytopes)`.
pub fn neighbor_counts(model: &E8Model, cell: &Cell) -> (usize, usize) {
    // positions are tracked as 6 * center in doubled coordinates
    let (verts, center6): (Vec<E8Point>, E8Point) = match cell {
        Cell::Simplex(s) => (s.vertices.to_vec(), s.center_times_3.scale(2)),
        Cell::Cross(p) => (p.vertices.to_vec(), p.diagonal.scale(3)),
    };
    let mut simplices = HashSet::new();
    let mut crosses = HashSet::new();
    for u in verts {
        let shift = u.scale(6);
        let local = center6 - shift;
        match cell {
            Cell::Simplex(_) => {
                let v = local.div_exact(2).expect("simplex center");
                for w in &model.shell4 {
                    if v.dot4(w) == 20 {
                        crosses.insert(shift + w.scale(3));
                    }
                }
            }
            Cell::Cross(_) => {
                let w = local.div_exact(3).expect("cross center");
                for v in &model.simplex_centers {
                    if v.dot4(&w) == 20 {
                        simplices.insert(shift + v.scale(2));
                    }
                }
                for w2 in &model.shell4 {
                    if w.dot4(w2) == 12 {
                        crosses.insert(shift + w2.scale(3));
                    }
                }
            }
        }
    }
    (simplices.len(), crosses.len())
}

/// Splits `p` along one of its diagonals into 128 simplices, each
/// containing both endpoints of the diagonal.
pub fn split_cross_polytope(p: &CrossPolytope, diagonal: E8Point) -> Result<Vec<[E8Point; 9]>> {
    let k = (0..8)
        .find(|&j| {
            let d = p.vertices[j] - p.vertices[j + 8];
            d == diagonal || -d == diagonal
        })
        .ok_or(Error::NotADiagonal)?;
    let others: Vec<usize> = (0..8).filter(|&j| j != k).collect();
    let mut out = Vec::with_capacity(128);
    for mask in 0u32..128 {
        let mut s = [E8Point::ZERO; 9];
        s[0] = p.vertices[k];
        s[1] = p.vertices[k + 8];
        for (i, &j) in others.iter().enumerate() {
            s[i + 2] = if mask >> i & 1 == 0 {
                p.vertices[j]
            } else {
                p.vertices[j + 8]
            };
        }
        s.sort_unstable();
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e8::model::build_model;
    use crate::exact::{int, rat, Pqf};
    use crate::qform::{circumradius_sq_determinant, circumsphere_solve};

    fn e(i: usize, k: i32) -> E8Point {
        let mut c = [0; 8];
        c[i] = k;
        E8Point(c)
    }

    #[test]
    fn cross_polytope_of_2e1() {
        let m = build_model();
        let w = e(0, 4);
        let p = cross_polytope(&m, w).unwrap();
        let mut expect: Vec<E8Point> = vec![E8Point::ZERO, w];
        for i in 1..8 {
            expect.push(e(0, 2) + e(i, 2));
            expect.push(e(0, 2) + e(i, -2));
        }
        let mut got = p.vertices.to_vec();
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
        for j in 0..8 {
            assert_eq!(p.vertices[j] + p.vertices[j + 8], w);
        }
        let mut diags: Vec<E8Point> = p.diagonals().iter().flat_map(|d| [*d, -*d]).collect();
        diags.sort();
        let mut axis: Vec<E8Point> = (0..8).flat_map(|i| [e(i, 4), e(i, -4)]).collect();
        axis.sort();
        assert_eq!(diags, axis);
        assert!(cross_polytope(&m, e(0, 2)).is_err());
    }

    #[test]
    fn every_cross_polytope_has_radius_one() {
        let m = build_model();
        let q = Pqf::identity(8);
        for &w in m.shell4.iter().step_by(97) {
            let p = cross_polytope(&m, w).unwrap();
            let c = p.center();
            for v in &p.vertices {
                assert_eq!(q.evaluate(&v.to_rat().sub(&c)).unwrap(), int(1));
            }
            for s in split_cross_polytope(&p, w).unwrap().iter().step_by(31) {
                assert_eq!(circumradius_sq_determinant(&to_simplex(s), &q).unwrap(), int(1));
            }
        }
    }

    #[test]
    fn delone_simplex_shape() {
        let m = build_model();
        // center 3 * (5/6, 1/6, ...) = (5/2, 1/2, ..., 1/2)
        let v = E8Point([5, 1, 1, 1, 1, 1, 1, 1]);
        let s = delone_simplex(&m, v).unwrap();
        let mut expect = vec![E8Point::ZERO, E8Point([1; 8])];
        for i in 1..8 {
            expect.push(e(0, 2) + e(i, 2));
        }
        expect.sort();
        assert_eq!(s.vertices.to_vec(), expect);
        let sp = s.to_simplex();
        let c = circumsphere_solve(&sp, &Pqf::identity(8)).unwrap();
        assert_eq!(c.radius_sq, rat(8, 9));
        assert_eq!(c.center, s.center());
        for a in 0..9 {
            for b in a + 1..9 {
                assert_eq!((s.vertices[a] - s.vertices[b]).norm4(), 8);
            }
        }
    }

    #[test]
    fn adjacency_examples() {
        let m = build_model();
        let p1 = Cell::Cross(cross_polytope(&m, e(0, 4)).unwrap());
        let p2 = Cell::Cross(cross_polytope(&m, E8Point([3, -1, 1, 1, 1, 1, 1, 1])).unwrap());
        assert!(adjacency(&p1, &p2).unwrap());
        let far = Cell::Cross(cross_polytope(&m, e(1, 4)).unwrap());
        assert!(!adjacency(&p1, &far).unwrap());
        let moved = Cell::Cross(cross_polytope(&m, e(1, 4)).unwrap().translate(E8Point([2, 2, 0, 0, 0, 0, 0, 0])));
        assert!(matches!(adjacency(&p1, &moved), Err(Error::NotOriginIncident)));
    }

    #[test]
    fn split_rejects_non_diagonal() {
        let m = build_model();
        let p = cross_polytope(&m, e(0, 4)).unwrap();
        assert!(matches!(split_cross_polytope(&p, e(0, 2)), Err(Error::NotADiagonal)));
        let pieces = split_cross_polytope(&p, e(3, -4)).unwrap();
        assert_eq!(pieces.len(), 128);
        let ends = (e(0, 2) + e(3, 2), e(0, 2) + e(3, -2));
        assert!(pieces.iter().all(|s| s.contains(&ends.0) && s.contains(&ends.1)));
    }
}
