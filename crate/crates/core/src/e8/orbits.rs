use std::collections::BTreeMap;

use serde::Serialize;

use super::model::E8Model;
use super::point::E8Point;

/// Table representatives (doubled coordinates), orbit ids 1..=20.
pub const ORBIT_REPRESENTATIVES: [[i32; 8]; 20] = [
    [4, 0, 0, 0, 0, 0, 0, 0],
    [0, 4, 0, 0, 0, 0, 0, 0],
    [2, 2, 2, 2, 0, 0, 0, 0],
    [2, -2, 2, 2, 0, 0, 0, 0],
    [2, -2, -2, 2, 0, 0, 0, 0],
    [2, -2, -2, -2, 0, 0, 0, 0],
    [0, 2, 2, 2, 2, 0, 0, 0],
    [0, -2, 2, 2, 2, 0, 0, 0],
    [0, -2, -2, 2, 2, 0, 0, 0],
    [3, -1, 1, 1, 1, 1, 1, 1],
    [3, -1, -1, -1, 1, 1, 1, 1],
    [3, -1, -1, -1, -1, -1, 1, 1],
    [3, -1, -1, -1, -1, -1, -1, -1],
    [1, 3, -1, 1, 1, 1, 1, 1],
    [1, 3, -1, -1, -1, 1, 1, 1],
    [1, 3, -1, -1, -1, -1, -1, 1],
    [1, -3, 1, 1, 1, 1, 1, 1],
    [1, -3, -1, -1, 1, 1, 1, 1],
    [1, -3, -1, -1, -1, -1, 1, 1],
    [1, -3, -1, -1, -1, -1, -1, -1],
];

/// Orbit sizes as tabulated: numbers of antipodal pairs.
pub const ORBIT_PAIR_COUNTS: [usize; 20] = [1, 7, 35, 105, 105, 35, 35, 140, 105, 7, 35, 21, 1, 42, 140, 42, 7, 105, 105, 7];

/// Orbit under `G`, generated by permutations of coordinates 2..8 and `x -> -x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GOrbit {
    pub id: usize,
    pub representative: E8Point,
    /// Number of antipodal pairs (the tabulated size).
    pub size: usize,
    /// Sorted members; `2 * size` vectors.
    pub members: Vec<E8Point>,
}

/// Invariant of the `G`-orbit: the larger of `(x_1, sorted desc x_2..x_8)` for `±x`.
pub fn orbit_key(p: &E8Point) -> [i32; 8] {
    let canon = |q: &E8Point| {
        let mut k = q.0;
        k[1..].sort_unstable_by(|a, b| b.cmp(a));
        k
    };
    canon(p).max(canon(&-*p))
}

/// Images of `p` under the generators of `G`: the transposition of
/// coordinates 2 and 3, the cyclic shift of coordinates 2..8, and negation.
pub fn g_generators(p: &E8Point) -> [E8Point; 3] {
    let c = p.0;
    let mut t = c;
    t.swap(1, 2);
    let mut r = c;
    r[1..].rotate_right(1);
    [E8Point(t), E8Point(r), -*p]
}

pub fn g_orbits(model: &E8Model) -> Vec<GOrbit> {
    let mut groups: BTreeMap<[i32; 8], Vec<E8Point>> = BTreeMap::new();
    for p in &model.shell4 {
        groups.entry(orbit_key(p)).or_default().push(*p);
    }
    let mut out = Vec::with_capacity(20);
    for (i, rep) in ORBIT_REPRESENTATIVES.iter().enumerate() {
        let rep = E8Point(*rep);
        let members = groups.remove(&orbit_key(&rep)).unwrap_or_default();
        out.push(GOrbit {
            id: i + 1,
            representative: rep,
            size: members.len() / 2,
            members,
        });
    }
    debug_assert!(groups.is_empty(), "every norm-4 vector lies in a tabulated orbit");
    out
}

/// The integer matrix `N` with `HAH = N / 4`, where `H = diag(H4, H4)` with
/// the normalized 4x4 Hadamard matrix and `A` swaps coordinates 1 and 5 and
/// negates both.
pub fn hah_integer_matrix() -> [[i32; 8]; 8] {
    let h4 = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];
    let mut h = [[0i32; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = h4[i][j];
            h[i + 4][j + 4] = h4[i][j];
        }
    }
    let mut a = [[0i32; 8]; 8];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1;
    }
    a[0][0] = 0;
    a[4][4] = 0;
    a[0][4] = -1;
    a[4][0] = -1;
    let mul = |x: &[[i32; 8]; 8], y: &[[i32; 8]; 8]| {
        let mut z = [[0i32; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                z[i][j] = (0..8).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        z
    };
    mul(&mul(&h, &a), &h)
}

/// Applies `HAH`; `None` if the image leaves the half-integer grid.
pub fn apply_hah(p: &E8Point) -> Option<E8Point> {
    let n = hah_integer_matrix();
    let v: [i32; 8] = std::array::from_fn(|i| (0..8).map(|k| n[i][k] * p.0[k]).sum());
    E8Point(v).div_exact(4)
}
