use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{int, Pqf, Rational, SymMatrix};
use crate::qform::{fold_lattice_vectors, homogeneous_minimum, Region};

pub const GENERATOR_FILE: &str = "leech_generator.txt";
pub const GENERATOR_SHA256: &str = "e045223046a7ea46971d2b120447edf3270ce5ccc2f98689862f17fa291b4d1c";
pub const DATA_DIR_ENV: &str = "COVERING_DATA_DIR";
const EMBEDDED_GENERATOR: &str = include_str!("../../assets/leech_generator.txt");
const LEECH_KISSING: usize = 196560;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Embedded,
    Override(PathBuf),
}

#[derive(Clone, Debug)]
pub struct LeechModel {
    /// Integer generator with `gram = B B^T / 8`.
    pub generator: Vec<Vec<i64>>,
    pub gram: Pqf,
    pub checksum: String,
    pub source: DataSource,
    pub minimum: Rational,
    pub shell4: usize,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Returns the generator text and its provenance. `COVERING_DATA_DIR` may
/// supply a replacement file; an adjacent `leech_generator.sha256` then
/// overrides the expected checksum.
fn generator_text(data_dir: Option<&Path>) -> Result<(String, DataSource, String)> {
    if let Some(dir) = data_dir {
        let path = dir.join(GENERATOR_FILE);
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let sidecar = dir.join("leech_generator.sha256");
            let expected = if sidecar.exists() {
                let s = std::fs::read_to_string(sidecar)?;
                s.split_whitespace().next().unwrap_or_default().to_lowercase()
            } else {
                GENERATOR_SHA256.to_string()
            };
            return Ok((text, DataSource::Override(path), expected));
        }
    }
    Ok((EMBEDDED_GENERATOR.to_string(), DataSource::Embedded, GENERATOR_SHA256.to_string()))
}

pub fn parse_generator(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "# covering leech-generator v1" => {}
        other => return Err(Error::Parse(format!("unexpected generator header {other:?}"))),
    }
    let rows: Vec<Vec<i64>> = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != 24 || rows.iter().any(|r| r.len() != 24) {
        return Err(Error::Parse("generator must be 24 rows of 24 integers".into()));
    }
    Ok(rows)
}

/// `B B^T / 8`.
pub fn gram_of_generator(b: &[Vec<i64>]) -> SymMatrix {
    SymMatrix::from_fn(b.len(), |i, j| {
        let s: i64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
        Rational::new(s.into(), 8.into())
    })
}

/// Number of lattice vectors of norm `norm`, without storing them.
pub fn shell_count(q: &Pqf, norm: &Rational) -> usize {
    fold_lattice_vectors(q, norm, Region::Shell, || 0usize, |a, _| *a += 1, |a, b| a + b)
}

/// Loads the generator, verifies its checksum, and checks that it spans an
/// even unimodular lattice with minimum 4 and 196560 minimal vectors.
pub fn build_leech() -> Result<LeechModel> {
    let dir = std::env::var_os(DATA_DIR_ENV).map(PathBuf::from);
    build_leech_in(dir.as_deref())
}

/// As [`build_leech`] with an explicit data directory.
pub fn build_leech_in(data_dir: Option<&Path>) -> Result<LeechModel> {
    let (text, source, expected) = generator_text(data_dir)?;
    let checksum = sha256_hex(text.as_bytes());
    if checksum != expected {
        return Err(Error::DataIntegrity(format!("generator checksum {checksum} != expected {expected}")));
    }
    let generator = parse_generator(&text)?;
    let gram = gram_of_generator(&generator);
    for i in 0..24 {
        for j in 0..24 {
            if !gram.get(i, j).is_integer() {
                return Err(Error::DataIntegrity(format!("gram entry ({i},{j}) not integral")));
            }
        }
        if !(gram.get(i, i).to_integer() % 2u32).is_zero() {
            return Err(Error::DataIntegrity(format!("gram diagonal {i} odd")));
        }
    }
    if gram.determinant() != int(1) {
        return Err(Error::DataIntegrity("gram determinant is not 1".into()));
    }
    let gram = Pqf::new(gram).map_err(|_| Error::DataIntegrity("gram not positive definite".into()))?;
    let minimum = homogeneous_minimum(&gram);
    if minimum != int(4) {
        return Err(Error::DataIntegrity(format!("homogeneous minimum {minimum} != 4")));
    }
    let shell4 = shell_count(&gram, &int(4));
    if shell4 != LEECH_KISSING {
        return Err(Error::DataIntegrity(format!("{shell4} minimal vectors, expected {LEECH_KISSING}")));
    }
    Ok(LeechModel {
        generator,
        gram,
        checksum,
        source,
        minimum,
        shell4,
    })
}
