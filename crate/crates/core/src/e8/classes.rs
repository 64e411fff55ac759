use serde::Serialize;

use super::model::E8Model;
use super::point::E8Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassType {
    /// `±2e_i`
    Axis,
    /// `(±1^4 0^4)`
    Quadruple,
    /// `(±3/2, ±1/2^7)`
    HalfInteger,
}

/// Norm-4 vectors congruent modulo `2 E8`: eight mutually orthogonal
/// antipodal pairs, the diagonals of one translation class of cross polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalClass {
    pub index: usize,
    /// Lexicographically largest member.
    pub representative: E8Point,
    /// Sorted.
    pub members: Vec<E8Point>,
    pub class_type: ClassType,
}

impl DiagonalClass {
    pub fn contains(&self, p: &E8Point) -> bool {
        self.members.binary_search(p).is_ok()
    }
}

/// `w ~ w'` iff `(w' - w)/2` lies in the lattice.
pub fn congruent_mod_2l(a: &E8Point, b: &E8Point) -> bool {
    (*b - *a).div_exact(2).is_some_and(|h| h.is_lattice_point())
}

fn class_type(p: &E8Point) -> ClassType {
    if p.0.iter().any(|c| c % 2 != 0) {
        ClassType::HalfInteger
    } else if p.0.iter().any(|c| c.abs() == 4) {
        ClassType::Axis
    } else {
        ClassType::Quadruple
    }
}

/// The 135 classes, ordered by representative (descending).
pub fn diagonal_classes(model: &E8Model) -> Vec<DiagonalClass> {
    let mut assigned = vec![false; model.shell4.len()];
    let mut classes = Vec::new();
    for i in 0..model.shell4.len() {
        if assigned[i] {
            continue;
        }
        let w = model.shell4[i];
        let mut members = Vec::with_capacity(16);
        for (j, x) in model.shell4.iter().enumerate() {
            if !assigned[j] && congruent_mod_2l(&w, x) {
                assigned[j] = true;
                members.push(*x);
            }
        }
        members.sort_unstable();
        let representative = *members.last().expect("nonempty");
        classes.push(DiagonalClass {
            index: 0,
            representative,
            class_type: class_type(&representative),
            members,
        });
    }
    classes.sort_by_key(|c| std::cmp::Reverse(c.representative));
    for (i, c) in classes.iter_mut().enumerate() {
        c.index = i;
    }
    classes
}

/// Index of the class containing each norm-4 vector, aligned with `model.shell4`.
pub fn class_lookup(model: &E8Model, classes: &[DiagonalClass]) -> std::collections::HashMap<E8Point, usize> {
    let mut m = std::collections::HashMap::with_capacity(model.shell4.len());
    for c in classes {
        for p in &c.members {
            m.insert(*p, c.index);
        }
    }
    m
}
