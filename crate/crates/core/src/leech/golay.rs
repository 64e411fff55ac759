//! Extended binary Golay code and a lattice generator derived from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Quadratic residues mod 23.
const QR23: [u32; 11] = [1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18];

/// Reduced GF(2) basis of the extended Golay code as 24-bit masks.
pub fn golay_basis() -> Vec<u32> {
    let base: u32 = QR23.iter().fold(1, |m, &r| m | (1 << r));
    let mut gens: Vec<u32> = (0..23)
        .map(|s| {
            let v = (0..23).filter(|i| base >> i & 1 == 1).fold(0u32, |m, i| m | 1 << ((i + s) % 23));
            if v.count_ones() % 2 == 1 {
                v | 1 << 23
            } else {
                v
            }
        })
        .collect();
    gens.push((1 << 24) - 1);
    let mut basis: Vec<u32> = Vec::new();
    for g in gens {
        let mut v = g;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// All 4096 codewords, sorted.
pub fn golay_codewords() -> Vec<u32> {
    let mut words = vec![0u32];
    for b in golay_basis() {
        let n = words.len();
        for i in 0..n {
            words.push(words[i] ^ b);
        }
    }
    words.sort_unstable();
    words
}

pub fn octads() -> Vec<u32> {
    golay_codewords().into_iter().filter(|w| w.count_ones() == 8).collect()
}

/// Generating set of the Leech lattice scaled by `sqrt 8`:
/// `4(e_i +- e_j)`, `2 * octad`, and `(-3, 1^23)`.
pub fn leech_generating_set() -> Vec<Vec<i64>> {
    let mut g = Vec::new();
    for i in 0..24 {
        for j in i + 1..24 {
            for s in [4, -4] {
                let mut v = vec![0; 24];
                v[i] = 4;
                v[j] = s;
                g.push(v);
            }
        }
    }
    for o in octads() {
        g.push((0..24).map(|i| if o >> i & 1 == 1 { 2 } else { 0 }).collect());
    }
    let mut v = vec![1; 24];
    v[0] = -3;
    g.push(v);
    g
}

/// Lower-triangular Hermite normal form of the lattice spanned by `rows`
/// (full rank required); off-diagonal entries reduced into `[0, b_jj)`.
pub fn lower_hnf(rows: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = rows.first()?.len();
    let mut pool: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for col in (0..n).rev() {
        let (mut active, mut others): (Vec<_>, Vec<_>) = pool.into_iter().partition(|r| !r[col].is_zero());
        while active.len() > 1 {
            active.sort_by(|a, b| a[col].abs().cmp(&b[col].abs()));
            let p = active[0].clone();
            let mut next = vec![p.clone()];
            for r in active.into_iter().skip(1) {
                let q = r[col].div_floor(&p[col]);
                let r2: Vec<BigInt> = r.iter().zip(&p).map(|(a, b)| a - &q * b).collect();
                if !r2[col].is_zero() {
                    next.push(r2);
                } else if r2.iter().any(|x| !x.is_zero()) {
                    others.push(r2);
                }
            }
            active = next;
        }
        let mut p = active.pop()?;
        if p[col].is_negative() {
            p.iter_mut().for_each(|x| *x = -x.clone());
        }
        basis[col] = Some(p);
        pool = others;
    }
    let mut b: Vec<Vec<BigInt>> = basis.into_iter().collect::<Option<_>>()?;
    for i in 0..n {
        for j in (0..i).rev() {
            let q = b[i][j].div_floor(&b[j][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                b[i].iter_mut().zip(&bj).for_each(|(a, c)| *a -= &q * c);
            }
        }
    }
    use num_traits::ToPrimitive;
    b.into_iter().map(|r| r.into_iter().map(|x| x.to_i64()).collect()).collect()
}

/// Regenerates the Leech generator from the Golay code.
pub fn generator_from_golay() -> Vec<Vec<i64>> {
    lower_hnf(&leech_generating_set()).expect("Leech generating set has full rank")
}
