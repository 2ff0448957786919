//! Largest disc inside a fixed polygon of 200 half-planes.
//!
//! Variables are `(x, y, r)`; minimize `-r` subject to
//! `a_i . (x, y) + r |a_i| - b_i <= 0`. The polygon and its precomputed
//! center live in `data/chebyshev.tsv`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::problem::{Problem, SmoothFn};

const DATA: &str = include_str!("../../data/chebyshev.tsv");

#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    /// Rows `(a1, a2, b)`.
    pub half_planes: Vec<[f64; 3]>,
    /// Reference optimum `(x, y, r)`.
    pub center: [f64; 3],
}

fn parse_row(line: &str, lineno: usize, expected: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = line
        .split('\t')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::ReferenceData {
            line: lineno,
            reason: e.to_string(),
        })?;
    if values.len() != expected {
        return Err(Error::ReferenceData {
            line: lineno,
            reason: format!("expected {expected} fields, got {}", values.len()),
        });
    }
    Ok(values)
}

pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let mut half_planes = Vec::new();
    let mut center = None;
    let mut version = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("schema_version") {
                version = Some(v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("center\t") {
            let v = parse_row(rest, lineno, 3)?;
            center = Some([v[0], v[1], v[2]]);
        } else {
            let v = parse_row(line, lineno, 3)?;
            half_planes.push([v[0], v[1], v[2]]);
        }
    }
    if version.as_deref() != Some("1") {
        return Err(Error::ReferenceData {
            line: 1,
            reason: "missing or unsupported schema_version".into(),
        });
    }
    let center = center.ok_or_else(|| Error::ReferenceData {
        line: 0,
        reason: "no center row".into(),
    })?;
    Ok(Polygon { half_planes, center })
}

pub fn polygon() -> Polygon {
    parse_polygon(DATA).expect("bundled polygon data")
}

pub fn chebyshev() -> Problem {
    let poly = polygon();
    let f = SmoothFn::affine(DVector::from_vec(vec![0.0, 0.0, -1.0]), 0.0);
    let cons = poly
        .half_planes
        .iter()
        .map(|&[a1, a2, b]| SmoothFn::affine(DVector::from_vec(vec![a1, a2, a1.hypot(a2)]), -b))
        .collect();
    Problem::new("chebyshev", 3, f, cons).expect("static problem definition")
}

pub fn reference_center() -> DVector<f64> {
    DVector::from_row_slice(&polygon().center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::evaluate;

    #[test]
    fn bundled_data_parses() {
        let p = polygon();
        assert_eq!(p.half_planes.len(), 200);
        assert_eq!(chebyshev().n_constraints(), 200);
    }

    #[test]
    fn malformed_data_is_rejected() {
        assert!(parse_polygon("center\t1\t2\t3\n1\t2\t3\n").is_err());
        let bad = "# schema_version\t1\ncenter\t1\t2\t3\n1\tx\t3\n";
        assert_eq!(
            parse_polygon(bad).unwrap_err(),
            Error::ReferenceData {
                line: 3,
                reason: "invalid float literal".into()
            }
        );
        assert!(parse_polygon("# schema_version\t1\ncenter\t1\t2\n").is_err());
    }

    #[test]
    fn reference_center_is_feasible() {
        let e = evaluate(&chebyshev(), &reference_center()).unwrap();
        assert!(e.max_g <= 1e-12);
        assert!(e.max_g >= -1e-12, "some constraint should be active");
    }
}
