//! Published approximate optimum `Q~ = 34229189769 Q1 - 17121746137 Q2`,
//! kept for comparison only: its coordinate system differs from ours.

use nalgebra::SMatrix;
use serde::Serialize;

use crate::exact::rational::to_f64;
use crate::exact::{format_rational, int, parse_rational, Rational, SymMatrix};

const Q1: [[&str; 8]; 8] = [
    ["1", "0", "0", "0", "0", "0", "0", "2"],
    ["0", "4/7", "-2/3", "0", "0", "0", "0", "0"],
    ["0", "-2/3", "4/3", "-2/3", "0", "0", "0", "0"],
    ["0", "0", "-2/3", "4/3", "-2/3", "0", "0", "0"],
    ["0", "0", "0", "-2/3", "4/3", "-2/3", "0", "0"],
    ["0", "0", "0", "0", "-2/3", "4/3", "-2/3", "0"],
    ["0", "0", "0", "0", "0", "-2/3", "4/3", "0"],
    ["2", "0", "0", "0", "0", "0", "0", "4"],
];

const Q2: [[&str; 8]; 8] = [
    ["0", "1", "0", "0", "0", "0", "0", "7/2"],
    ["1", "0", "-2/3", "0", "0", "0", "0", "0"],
    ["0", "-2/3", "4/3", "-2/3", "0", "0", "0", "0"],
    ["0", "0", "-2/3", "4/3", "-2/3", "0", "0", "0"],
    ["0", "0", "0", "-2/3", "4/3", "-2/3", "0", "0"],
    ["0", "0", "0", "0", "-2/3", "4/3", "-2/3", "0"],
    ["0", "0", "0", "0", "0", "-2/3", "4/3", "0"],
    ["7/2", "0", "0", "0", "0", "0", "0", "7"],
];

const C1: i64 = 34229189769;
const C2: i64 = -17121746137;

fn parse(m: &[[&str; 8]; 8]) -> SymMatrix {
    SymMatrix::from_fn(8, |i, j| parse_rational(m[i][j]).expect("reference data parses"))
}

pub fn reference_q1() -> SymMatrix {
    parse(&Q1)
}

pub fn reference_q2() -> SymMatrix {
    parse(&Q2)
}

pub fn reference_q_tilde() -> SymMatrix {
    reference_q1().scale(&int(C1)).add(&reference_q2().scale(&int(C2)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceDiagnostic {
    pub det: String,
    pub positive_definite: bool,
    pub eigenvalue_min: f64,
    pub eigenvalue_max: f64,
    /// `det^(1/8)`: the scale of the form.
    pub det_root8: f64,
}

/// Determinant and spectrum of the published form; no claim about its
/// relation to the coordinates used here.
pub fn reference_diagnostic() -> ReferenceDiagnostic {
    let q = reference_q_tilde();
    let det: Rational = q.determinant();
    let m = SMatrix::<f64, 8, 8>::from_fn(|i, j| to_f64(q.get(i, j)));
    let eig = m.symmetric_eigenvalues();
    ReferenceDiagnostic {
        det: format_rational(&det),
        positive_definite: q.is_positive_definite(),
        eigenvalue_min: eig.min(),
        eigenvalue_max: eig.max(),
        det_root8: to_f64(&det).abs().powf(0.125),
    }
}
