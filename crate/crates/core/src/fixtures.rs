//! Supplementary large-number fixtures: a directory of plain decimal files
//! `n.txt`, `p.txt`, `q.txt` and one or more bases `a.txt`, `a1.txt`, ...
//! Whitespace inside a file is ignored.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::decimal::parse_decimal;
use crate::error::{Error, Result};
use crate::numtheory::gcd;

/// Environment variable naming the fixture directory.
pub const FIXTURE_DIR_ENV: &str = "SHOR_FIXTURE_DIR";

/// The fixtures shipped with this crate.
pub fn bundled_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Resolves `name` to a fixture directory: an existing path is used as is,
/// otherwise `name` is looked up under `dir`, then under `$SHOR_FIXTURE_DIR`,
/// then under the bundled fixtures.
pub fn resolve_fixture(name: &str, dir: Option<&Path>) -> Result<PathBuf> {
    let direct = Path::new(name);
    if direct.is_dir() {
        return Ok(direct.to_path_buf());
    }
    let env_dir = std::env::var_os(FIXTURE_DIR_ENV).map(PathBuf::from);
    let candidates = dir
        .map(Path::to_path_buf)
        .into_iter()
        .chain(env_dir)
        .chain(std::iter::once(bundled_fixture_dir()));
    for base in candidates {
        let path = base.join(name);
        if path.is_dir() {
            return Ok(path);
        }
    }
    Err(Error::Io(format!("fixture {name:?} not found")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupplementaryFixture {
    pub name: String,
    pub n: BigUint,
    pub p: BigUint,
    pub q: BigUint,
    pub bases: Vec<BigUint>,
}

fn read_number(path: &Path) -> Result<BigUint> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_decimal(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn is_base_file(name: &str) -> bool {
    name.strip_prefix('a')
        .and_then(|rest| rest.strip_suffix(".txt"))
        .is_some_and(|idx| idx.chars().all(|c| c.is_ascii_digit()))
}

impl SupplementaryFixture {
    pub fn load(dir: &Path) -> Result<Self> {
        let name = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut base_files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
            .filter_map(|entry| entry.ok())
            .map(|entry| entry.path())
            .filter(|p| {
                p.file_name()
                    .and_then(|f| f.to_str())
                    .is_some_and(is_base_file)
            })
            .collect();
        base_files.sort();
        if base_files.is_empty() {
            return Err(Error::Io(format!(
                "{}: no a*.txt base files",
                dir.display()
            )));
        }
        Ok(Self {
            name,
            n: read_number(&dir.join("n.txt"))?,
            p: read_number(&dir.join("p.txt"))?,
            q: read_number(&dir.join("q.txt"))?,
            bases: base_files
                .iter()
                .map(|p| read_number(p))
                .collect::<Result<_>>()?,
        })
    }

    /// Checks `p q = n`, `a^2 = 1 (mod n)` for every base, and that
    /// `gcd(a - 1, n)`, `gcd(a + 1, n)` are exactly `{p, q}`.
    pub fn verify(&self) -> FixtureVerification {
        let expected = sorted(self.p.clone(), self.q.clone());
        let bases = self
            .bases
            .iter()
            .map(|a| {
                let minus = gcd(&(a - 1u32), &self.n);
                let plus = gcd(&(a + 1u32), &self.n);
                BaseCheck {
                    a: a.clone(),
                    squares_to_one: (a * a % &self.n).is_one(),
                    reproduces_factors: sorted(minus.clone(), plus.clone()) == expected,
                    gcd_minus: minus,
                    gcd_plus: plus,
                }
            })
            .collect::<Vec<_>>();
        let product_matches = &self.p * &self.q == self.n;
        FixtureVerification {
            name: self.name.clone(),
            n_bits: self.n.bits(),
            ok: product_matches
                && bases
                    .iter()
                    .all(|b| b.squares_to_one && b.reproduces_factors),
            product_matches,
            bases,
        }
    }
}

fn sorted(a: BigUint, b: BigUint) -> (BigUint, BigUint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCheck {
    #[serde(with = "crate::decimal")]
    pub a: BigUint,
    pub squares_to_one: bool,
    #[serde(with = "crate::decimal")]
    pub gcd_minus: BigUint,
    #[serde(with = "crate::decimal")]
    pub gcd_plus: BigUint,
    pub reproduces_factors: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureVerification {
    pub name: String,
    pub n_bits: u64,
    pub product_matches: bool,
    pub bases: Vec<BaseCheck>,
    pub ok: bool,
}
