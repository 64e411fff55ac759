use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cells::{cross_polytope, simplex_representatives, split_cross_polytope};
use super::classes::DiagonalClass;
use super::model::E8Model;
use super::orbits::GOrbit;
use super::point::{canonical_vertices, E8Point};

pub const I1: [usize; 7] = [1, 3, 6, 10, 11, 12, 13];
pub const I2: [usize; 7] = [1, 6, 7, 11, 12, 13, 20];

/// A `G`-invariant, `Z^8`-periodic refinement of the Delone subdivision,
/// given by one diagonal per class of cross polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicTriangulation {
    /// Sorted orbit ids.
    pub orbit_selection: Vec<usize>,
    /// Chosen diagonal of each class (indexed like the class list): the
    /// lexicographically larger vector of the selected antipodal pair.
    pub diagonals: Vec<E8Point>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangulationJson {
    pub orbit_selection: Vec<usize>,
    pub diagonals: Vec<ClassDiagonalJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassDiagonalJson {
    pub class: usize,
    pub diagonal: Vec<String>,
}

impl PeriodicTriangulation {
    /// Builds the triangulation for an orbit selection; fails unless every
    /// class receives exactly one antipodal pair.
    pub fn from_selection(classes: &[DiagonalClass], orbits: &[GOrbit], selection: &[usize]) -> Result<Self> {
        let mut sel: Vec<usize> = selection.to_vec();
        sel.sort_unstable();
        sel.dedup();
        let mut chosen: Vec<Vec<E8Point>> = vec![Vec::new(); classes.len()];
        for &id in &sel {
            let o = orbits
                .get(id.wrapping_sub(1))
                .ok_or_else(|| Error::UnknownTriangulation(format!("orbit {id}")))?;
            for p in &o.members {
                if let Some(c) = classes.iter().position(|c| c.contains(p)) {
                    chosen[c].push(*p);
                }
            }
        }
        let mut diagonals = Vec::with_capacity(classes.len());
        for (c, pts) in chosen.iter().enumerate() {
            if pts.len() != 2 || pts[0] != -pts[1] {
                return Err(Error::UnknownTriangulation(format!(
                    "selection {sel:?} picks {} vectors in class {c}",
                    pts.len()
                )));
            }
            diagonals.push(pts[0].max(pts[1]));
        }
        Ok(PeriodicTriangulation {
            orbit_selection: sel,
            diagonals,
        })
    }

    pub fn named(name: &str, classes: &[DiagonalClass], orbits: &[GOrbit]) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "I1" => Self::from_selection(classes, orbits, &I1),
            "I2" => Self::from_selection(classes, orbits, &I2),
            _ => Err(Error::UnknownTriangulation(name.to_string())),
        }
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            orbit_selection: self.orbit_selection.clone(),
            diagonals: self
                .diagonals
                .iter()
                .enumerate()
                .map(|(class, d)| ClassDiagonalJson {
                    class,
                    diagonal: d.to_strings(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TriangulationJson, classes: &[DiagonalClass], orbits: &[GOrbit]) -> Result<Self> {
        let t = Self::from_selection(classes, orbits, &j.orbit_selection)?;
        for cd in &j.diagonals {
            let v = crate::exact::RatVector::from_strings(&cd.diagonal)?;
            let p = E8Point::from_rat(&v).ok_or_else(|| Error::Parse("diagonal off the lattice".into()))?;
            if t.diagonals.get(cd.class) != Some(&p) {
                return Err(Error::Parse(format!("diagonal of class {} disagrees with the orbit selection", cd.class)));
            }
        }
        Ok(t)
    }
}

/// All orbit selections meeting every class in exactly one antipodal pair.
pub fn candidate_triangulations(classes: &[DiagonalClass], orbits: &[GOrbit]) -> Vec<PeriodicTriangulation> {
    // per orbit: number of its vectors in each class
    let hits: Vec<Vec<u8>> = orbits
        .iter()
        .map(|o| {
            let mut h = vec![0u8; classes.len()];
            for p in &o.members {
                if let Some(c) = classes.iter().position(|c| c.contains(p)) {
                    h[c] += 1;
                }
            }
            h
        })
        .collect();
    let mut found = Vec::new();
    let mut counts = vec![0u8; classes.len()];
    let mut sel = Vec::new();
    search(0, &hits, &mut counts, &mut sel, &mut found);
    found
        .into_iter()
        .map(|s| PeriodicTriangulation::from_selection(classes, orbits, &s).expect("valid by search"))
        .collect()
}

fn search(i: usize, hits: &[Vec<u8>], counts: &mut [u8], sel: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    if i == hits.len() {
        if counts.iter().all(|&c| c == 2) {
            found.push(sel.clone());
        }
        return;
    }
    // remaining capacity must still reach 2 everywhere
    let reachable = (0..counts.len()).all(|c| counts[c] + hits[i..].iter().map(|h| h[c]).sum::<u8>() >= 2);
    if !reachable {
        return;
    }
    // include orbit i + 1
    if counts.iter().zip(&hits[i]).all(|(c, h)| c + h <= 2) {
        for (c, h) in counts.iter_mut().zip(&hits[i]) {
            *c += h;
        }
        sel.push(i + 1);
        search(i + 1, hits, counts, sel, found);
        sel.pop();
        for (c, h) in counts.iter_mut().zip(&hits[i]) {
            *c -= h;
        }
    }
    search(i + 1, hits, counts, sel, found);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "class", rename_all = "snake_case")]
pub enum SimplexSource {
    /// A simplex of the unrefined Delone subdivision.
    Delone,
    /// A piece of the cross polytope class with this index.
    Piece(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriSimplex {
    /// Translation-canonical vertex list.
    pub vertices: [E8Point; 9],
    pub source: SimplexSource,
}

/// The 19200 simplices of the refined triangulation modulo translations:
/// 1920 Delone simplices and 128 pieces for each of the 135 cross polytope classes.
pub fn refined_simplices(model: &E8Model, t: &PeriodicTriangulation) -> Vec<TriSimplex> {
    let mut out: Vec<TriSimplex> = simplex_representatives(model)
        .into_iter()
        .map(|vertices| TriSimplex {
            vertices,
            source: SimplexSource::Delone,
        })
        .collect();
    for (c, &d) in t.diagonals.iter().enumerate() {
        let p = cross_polytope(model, d).expect("diagonal in shell");
        let pieces = split_cross_polytope(&p, d).expect("own diagonal");
        out.extend(pieces.into_iter().map(|s| TriSimplex {
            vertices: canonical_vertices(s),
            source: SimplexSource::Piece(c),
        }));
    }
    out
}

/// Two simplices sharing a facet, with the translate of `b` placed so that
/// the facet coincides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetPair {
    pub a: usize,
    pub b: usize,
    pub a_opposite: E8Point,
    pub b_opposite: E8Point,
    pub facet: [E8Point; 8],
}

fn facet_of(v: &[E8Point; 9], omit: usize) -> [E8Point; 8] {
    let mut f = [E8Point::ZERO; 8];
    let mut k = 0;
    for (i, p) in v.iter().enumerate() {
        if i != omit {
            f[k] = *p;
            k += 1;
        }
    }
    f
}

/// Matches facets modulo translation. Returns the adjacent pairs and the
/// number of facets seen other than exactly twice (zero for a face-to-face tiling).
pub fn facet_pairs(simplices: &[TriSimplex]) -> (Vec<FacetPair>, usize) {
    let mut map: HashMap<[E8Point; 8], Vec<(u32, u8)>> = HashMap::with_capacity(simplices.len() * 5);
    for (i, s) in simplices.iter().enumerate() {
        for o in 0..9 {
            map.entry(canonical_vertices(facet_of(&s.vertices, o)))
                .or_default()
                .push((i as u32, o as u8));
        }
    }
    let mut bad = 0;
    let mut pairs = Vec::with_capacity(map.len());
    for occ in map.values() {
        if occ.len() != 2 {
            bad += 1;
            continue;
        }
        let (i, oi) = (occ[0].0 as usize, occ[0].1 as usize);
        let (j, oj) = (occ[1].0 as usize, occ[1].1 as usize);
        let (i, oi, j, oj) = if i <= j { (i, oi, j, oj) } else { (j, oj, i, oi) };
        let fa = facet_of(&simplices[i].vertices, oi);
        let fb = facet_of(&simplices[j].vertices, oj);
        // facet lists are sorted, so their minima are the first entries
        let shift = fa[0] - fb[0];
        pairs.push(FacetPair {
            a: i,
            b: j,
            a_opposite: simplices[i].vertices[oi],
            b_opposite: simplices[j].vertices[oj] + shift,
            facet: fa,
        });
    }
    pairs.sort_by_key(|p| (p.a, p.b, p.facet));
    (pairs, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e8::classes::diagonal_classes;
    use crate::e8::model::build_model;
    use crate::e8::orbits::g_orbits;

    #[test]
    fn four_candidates() {
        let m = build_model();
        let cs = diagonal_classes(&m);
        let os = g_orbits(&m);
        let cands = candidate_triangulations(&cs, &os);
        let sels: Vec<Vec<usize>> = cands.iter().map(|c| c.orbit_selection.clone()).collect();
        assert_eq!(
            sels,
            vec![
                vec![1, 3, 6, 10, 11, 12, 13],
                vec![1, 3, 6, 11, 12, 13, 20],
                vec![1, 6, 7, 10, 11, 12, 13],
                vec![1, 6, 7, 11, 12, 13, 20],
            ]
        );
        let never: Vec<usize> = (1..=20).filter(|o| sels.iter().all(|s| !s.contains(o))).collect();
        assert_eq!(never, vec![2, 4, 5, 8, 9, 14, 15, 16, 17, 18, 19]);
        let always: Vec<usize> = (1..=20).filter(|o| sels.iter().all(|s| s.contains(o))).collect();
        assert_eq!(always, vec![1, 6, 11, 12, 13]);
        assert!(PeriodicTriangulation::from_selection(&cs, &os, &[1, 2]).is_err());
        let t = PeriodicTriangulation::named("I1", &cs, &os).unwrap();
        let j = t.to_json();
        assert_eq!(PeriodicTriangulation::from_json(&j, &cs, &os).unwrap(), t);
        assert!(PeriodicTriangulation::named("I3", &cs, &os).is_err());
    }
}
