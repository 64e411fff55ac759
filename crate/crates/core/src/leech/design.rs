use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, Pqf, Rational, SymMatrix};
use crate::qform::{covering_bound_sq, covering_density_sq_ratio, fold_lattice_vectors, MomentForm, Region, Shell};

use super::model::LeechModel;

/// Exact `sum v v^T` over a stored shell, in the form's coordinates.
pub fn second_moment(shell: &Shell) -> SymMatrix {
    let d = shell.form.dim();
    let sums = shell
        .vectors
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = vec![0i128; d * d];
            for v in chunk {
                accumulate(&mut acc, v);
            }
            acc
        })
        .reduce(|| vec![0i128; d * d], add_acc);
    to_sym(d, &sums)
}

fn accumulate(acc: &mut [i128], v: &[i64]) {
    let d = v.len();
    for i in 0..d {
        if v[i] == 0 {
            continue;
        }
        let vi = v[i] as i128;
        for j in i..d {
            acc[i * d + j] += vi * v[j] as i128;
        }
    }
}

fn add_acc(mut a: Vec<i128>, b: Vec<i128>) -> Vec<i128> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn to_sym(d: usize, acc: &[i128]) -> SymMatrix {
    SymMatrix::from_fn(d, |i, j| Rational::from_integer(BigInt::from(acc[i * d + j])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DesignCheck {
    pub norm: String,
    pub count: usize,
    /// `norm |S| / d`, the predicted multiple of `Q^{-1}`.
    pub scale: String,
    pub holds: bool,
}

/// `sum_{v in S} v v^T == (norm |S| / d) Q^{-1}`, the second-moment identity
/// satisfied by every shell that is a spherical 2-design.
pub fn design_identity_holds(q: &Pqf, norm: &Rational, count: usize, moment: &SymMatrix) -> Result<(Rational, bool)> {
    if count == 0 {
        return Err(Error::NotInShell(format!("empty shell of norm {norm}")));
    }
    let scale = norm * int(count as i64) / int(q.dim() as i64);
    let predicted = q.matrix().inverse()?.scale(&scale);
    Ok((scale, &predicted == moment))
}

pub fn design_identity_check_shell(shell: &Shell) -> Result<DesignCheck> {
    let moment = second_moment(shell);
    let (scale, holds) = design_identity_holds(&shell.form, &shell.norm, shell.len(), &moment)?;
    Ok(DesignCheck {
        norm: format_rational(&shell.norm),
        count: shell.len(),
        scale: format_rational(&scale),
        holds,
    })
}

/// Streams the shell without storing it; used for large shells.
pub fn design_identity_check(q: &Pqf, norm: &Rational) -> Result<DesignCheck> {
    let d = q.dim();
    let (count, acc) = fold_lattice_vectors(
        q,
        norm,
        Region::Shell,
        || (0usize, vec![0i128; d * d]),
        |(n, acc), v| {
            *n += 1;
            accumulate(acc, v);
        },
        |(n, a), (m, b)| (n + m, add_acc(a, b)),
    );
    let moment = to_sym(d, &acc);
    let (scale, holds) = design_identity_holds(q, norm, count, &moment)?;
    Ok(DesignCheck {
        norm: format_rational(norm),
        count,
        scale: format_rational(&scale),
        holds,
    })
}

/// Edge norms of a Delone simplex of the Leech lattice: 275 edges of norm 4
/// and 25 of norm 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexEdgeProfile {
    pub edges_norm4: usize,
    pub edges_norm6: usize,
}

pub const LEECH_A24_PROFILE: SimplexEdgeProfile = SimplexEdgeProfile {
    edges_norm4: 275,
    edges_norm6: 25,
};

/// Moment form of a transitive orbit of simplices whose edge vectors
/// fill out whole shells. Averaging a shell of norm `n` under the
/// automorphism group replaces `e e^T` by `(n/d) Q^{-1}`, so
/// `F = (d+1)^{-1} sum_k count_k (n_k/d) Q^{-1}`.
pub fn moment_form_from_profile(q: &Pqf, profile: &[(usize, Rational)]) -> Result<MomentForm> {
    let d = q.dim();
    let total: usize = profile.iter().map(|p| p.0).sum();
    if total != d * (d + 1) / 2 {
        return Err(Error::DimensionMismatch {
            expected: d * (d + 1) / 2,
            found: total,
        });
    }
    let c: Rational = profile.iter().map(|(k, n)| int(*k as i64) * n).sum::<Rational>() / int((d * (d + 1)) as i64);
    Ok(MomentForm {
        matrix: q.matrix().inverse()?.scale(&c),
        simplex_count: 1,
    })
}

pub fn leech_moment_form(model: &LeechModel) -> Result<MomentForm> {
    let p = LEECH_A24_PROFILE;
    moment_form_from_profile(&model.gram, &[(p.edges_norm4, int(4)), (p.edges_norm6, int(6))])
}

/// Covering radius squared of the Leech lattice (norm-8 deep holes scaled
/// to this normalisation); classical input, not recomputed here.
pub fn leech_covering_radius_sq() -> Rational {
    int(2)
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub dimension: usize,
    pub det: String,
    pub lambda: String,
    pub mu: String,
    pub moment_form_scale: String,
    pub det_moment_form: String,
    /// `(Theta(Leech) / kappa_24)^2 = mu^24 / det`.
    pub theta_sq_ratio: String,
    /// `(Theta_lb / kappa_24)^2 = (24/25)^24 det F`.
    pub lower_bound_sq_ratio: String,
    pub gamma_sq: String,
    pub tight: bool,
    pub generator_sha256: String,
}

pub fn lower_bound_certificate(model: &LeechModel) -> Result<LowerBoundReport> {
    let f = leech_moment_form(model)?;
    let inv = model.gram.matrix().inverse()?;
    // F = c Q^{-1}: recover c from any nonzero entry
    let (i, j) = (0..24)
        .flat_map(|i| (0..24).map(move |j| (i, j)))
        .find(|&(i, j)| !num_traits::Zero::is_zero(inv.get(i, j)))
        .ok_or(Error::Singular)?;
    let scale = f.matrix.get(i, j) / inv.get(i, j);
    let mu = leech_covering_radius_sq();
    let theta = covering_density_sq_ratio(&model.gram, &mu);
    let bound = covering_bound_sq(&f, 24)?;
    Ok(LowerBoundReport {
        dimension: 24,
        det: format_rational(&model.gram.determinant()),
        lambda: format_rational(&model.minimum),
        mu: format_rational(&mu),
        moment_form_scale: format_rational(&scale),
        det_moment_form: format_rational(&f.matrix.determinant()),
        theta_sq_ratio: format_rational(&theta),
        lower_bound_sq_ratio: format_rational(&bound),
        gamma_sq: format_rational(&(int(4) * &mu / &model.minimum)),
        tight: theta == bound,
        generator_sha256: model.checksum.clone(),
    })
}

/// `gamma^2` for the Leech lattice using the stored minimum.
pub fn leech_gamma_sq(model: &LeechModel) -> Rational {
    int(4) * leech_covering_radius_sq() / &model.minimum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::enumerate_shell;

    #[test]
    fn non_design_toy() {
        let q = Pqf::identity(2);
        let shell = Shell {
            form: q.clone(),
            norm: int(1),
            vectors: vec![vec![-1, 0], vec![1, 0]],
        };
        assert!(!design_identity_check_shell(&shell).unwrap().holds);
        assert!(design_identity_check_shell(&enumerate_shell(&q, &int(1))).unwrap().holds);
    }

    #[test]
    fn streamed_and_stored_agree() {
        let q = Pqf::new(SymMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        let stored = design_identity_check_shell(&enumerate_shell(&q, &int(2))).unwrap();
        let streamed = design_identity_check(&q, &int(2)).unwrap();
        assert_eq!(stored, streamed);
        assert!(stored.holds);
        assert_eq!(stored.count, 6);
    }

    #[test]
    fn profile_must_cover_all_edges() {
        let q = Pqf::identity(3);
        assert!(moment_form_from_profile(&q, &[(5, int(1))]).is_err());
        let f = moment_form_from_profile(&q, &[(6, int(1))]).unwrap();
        assert_eq!(f.matrix, SymMatrix::identity(3).scale(&crate::exact::rat(1, 2)));
    }
}
