//! Instance serialization: Matrix Market for `A`, one value per line for `b`, and a
//! JSON sidecar with the generating spec.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::{InstanceSpec, QuadraticObjective};
use crate::error::{Error, Result};
use crate::Point;

pub const MATRIX_FILE: &str = "A.mtx";
pub const VECTOR_FILE: &str = "b.txt";
pub const SPEC_FILE: &str = "instance.json";

/// Coordinate-format, real, general. Only nonzeros are written; values use the
/// shortest round-trip representation.
pub fn matrix_market_string(a: &DMatrix<f64>) -> String {
    let nnz = a.iter().filter(|v| **v != 0.0).count();
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.nrows(), a.ncols(), nnz);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            if v != 0.0 {
                let _ = writeln!(s, "{} {} {:?}", i + 1, j + 1, v);
            }
        }
    }
    s
}

pub fn parse_matrix_market(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, banner) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty file".into(),
    })?;
    let banner_lc = banner.to_ascii_lowercase();
    if !banner_lc.starts_with("%%matrixmarket matrix coordinate real general") {
        return Err(Error::Parse {
            line: 1,
            msg: "only `matrix coordinate real general` is supported".into(),
        });
    }
    let mut lines = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sline, size) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing size line".into(),
    })?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line: sline,
            msg: "bad size line".into(),
        })?;
    let [m, n, nnz] = dims[..] else {
        return Err(Error::Parse {
            line: sline,
            msg: "size line needs `rows cols nnz`".into(),
        });
    };
    let mut a = DMatrix::zeros(m, n);
    let mut count = 0;
    for (line, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let bad = || Error::Parse {
            line,
            msg: "entry needs `row col value`".into(),
        };
        if tok.len() != 3 {
            return Err(bad());
        }
        let i: usize = tok[0].parse().map_err(|_| bad())?;
        let j: usize = tok[1].parse().map_err(|_| bad())?;
        let v: f64 = tok[2].parse().map_err(|_| bad())?;
        if i == 0 || j == 0 || i > m || j > n {
            return Err(Error::Parse {
                line,
                msg: "index out of range".into(),
            });
        }
        a[(i - 1, j - 1)] = v;
        count += 1;
    }
    if count != nnz {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {nnz} entries, found {count}"),
        });
    }
    Ok(a)
}

pub fn vector_string(v: &Point) -> String {
    let mut s = String::new();
    for x in v.iter() {
        let _ = writeln!(s, "{x:?}");
    }
    s
}

pub fn parse_vector(text: &str) -> Result<Point> {
    let vals: Vec<f64> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("not a number: {l:?}"),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Point::from_vec(vals))
}

/// Writes `A.mtx`, `b.txt` and `instance.json` into `dir`.
pub fn save_instance(dir: &Path, spec: &InstanceSpec, objective: &QuadraticObjective) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(MATRIX_FILE), matrix_market_string(objective.a()))?;
    fs::write(dir.join(VECTOR_FILE), vector_string(objective.b()))?;
    fs::write(dir.join(SPEC_FILE), serde_json::to_string_pretty(spec)?)?;
    Ok(())
}

pub fn load_instance(dir: &Path) -> Result<(InstanceSpec, QuadraticObjective)> {
    let a = parse_matrix_market(&fs::read_to_string(dir.join(MATRIX_FILE))?)?;
    let b = parse_vector(&fs::read_to_string(dir.join(VECTOR_FILE))?)?;
    let spec = serde_json::from_str(&fs::read_to_string(dir.join(SPEC_FILE))?)?;
    Ok((spec, QuadraticObjective::new(a, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{generate, Family};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_market_round_trips_bit_exactly(
            vals in prop::collection::vec(prop_oneof![Just(0.0), -1e6f64..1e6], 12)
        ) {
            let a = DMatrix::from_vec(3, 4, vals);
            let back = parse_matrix_market(&matrix_market_string(&a)).unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn instance_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = InstanceSpec::new(
            Family::Lasso {
                m: 5,
                n: 12,
                nnz: 3,
                scale: 4.0,
            },
            7,
        );
        let inst = generate(&spec).unwrap();
        save_instance(dir.path(), &spec, &inst.objective).unwrap();
        let (spec2, obj2) = load_instance(dir.path()).unwrap();
        assert_eq!(spec2, spec);
        assert_eq!(obj2.a(), inst.objective.a());
        assert_eq!(obj2.b(), inst.objective.b());
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_matrix_market("").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").is_err());
        assert!(parse_vector("1.0\nabc\n").is_err());
    }
}
