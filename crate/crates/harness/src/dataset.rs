//! Sample files for the custom scenario: CSV with header `role,x1[,x2],label`
//! where `role` is `train`, `test` or `truth`. Test rows leave `label` empty;
//! truth rows list the test points again, in order, with their true labels.

use std::path::Path;

use redaction::domain::{Label, Point, PointKind, Sample};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub train: Sample,
    pub labels: Vec<Label>,
    pub test: Sample,
    /// True test labels, when the file has truth rows.
    pub truth: Option<Vec<Label>>,
}

fn bad(line: usize, msg: impl std::fmt::Display) -> HarnessError {
    HarnessError::Dataset(format!("record {line}: {msg}"))
}

fn point(kind: PointKind, coords: &[&str], line: usize) -> Result<Point> {
    let real = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(line, format!("`{s}`: {e}")));
    match (kind, coords) {
        (PointKind::Real1D, [x]) => Ok(Point::Real1D(real(x)?)),
        (PointKind::Real2D, [x, y]) => Ok(Point::Real2D(real(x)?, real(y)?)),
        (PointKind::Discrete, [x]) => x
            .trim()
            .parse::<usize>()
            .map(Point::Discrete)
            .map_err(|e| bad(line, format!("`{x}`: {e}"))),
        _ => Err(bad(
            line,
            format!("{} coordinates do not fit {kind} points", coords.len()),
        )),
    }
}

fn label(s: &str, line: usize) -> Result<Label> {
    match s.trim() {
        "0" => Ok(Label::Zero),
        "1" => Ok(Label::One),
        other => Err(bad(line, format!("label `{other}` is not 0 or 1"))),
    }
}

pub fn parse(reader: impl std::io::Read, kind: PointKind) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| HarnessError::Dataset(e.to_string()))?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    let dims = match cols.as_slice() {
        ["role", "x1", "label"] => 1,
        ["role", "x1", "x2", "label"] => 2,
        _ => {
            return Err(HarnessError::Dataset(format!(
                "header must be role,x1[,x2],label; got {}",
                cols.join(",")
            )))
        }
    };
    let (mut train, mut labels, mut test, mut truth_pts, mut truth) = (vec![], vec![], vec![], vec![], vec![]);
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| bad(line, e))?;
        let fields: Vec<&str> = rec.iter().collect();
        let p = point(kind, &fields[1..=dims], line)?;
        let l = fields[dims + 1];
        match fields[0] {
            "train" => {
                train.push(p);
                labels.push(label(l, line)?);
            }
            "test" => {
                if !l.is_empty() {
                    return Err(bad(line, "test rows carry no label"));
                }
                test.push(p);
            }
            "truth" => {
                truth_pts.push(p);
                truth.push(label(l, line)?);
            }
            other => return Err(bad(line, format!("unknown role `{other}`"))),
        }
    }
    let truth = if truth.is_empty() {
        None
    } else {
        if truth_pts != test {
            return Err(HarnessError::Dataset(
                "truth rows must repeat the test points in order".into(),
            ));
        }
        Some(truth)
    };
    if train.is_empty() {
        return Err(HarnessError::Dataset("no train rows".into()));
    }
    Ok(Dataset {
        train: Sample::new(train)?,
        labels,
        test: Sample::new(test)?,
        truth,
    })
}

pub fn load(path: &Path, kind: PointKind) -> Result<Dataset> {
    let f = std::fs::File::open(path).map_err(|e| HarnessError::Io(path.display().to_string(), e.to_string()))?;
    parse(f, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_roles() {
        let text = "role,x1,label\ntrain,1.0,0\ntrain,2.0,1\ntest,1.5,\ntruth,1.5,1\n";
        let d = parse(text.as_bytes(), PointKind::Real1D).unwrap();
        assert_eq!(d.train, Sample::from_reals(&[1.0, 2.0]).unwrap());
        assert_eq!(d.labels, vec![Label::Zero, Label::One]);
        assert_eq!(d.truth, Some(vec![Label::One]));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse("role,x,label\n".as_bytes(), PointKind::Real1D).is_err());
        assert!(parse("role,x1,label\ntrain,1.0,2\n".as_bytes(), PointKind::Real1D).is_err());
        assert!(parse("role,x1,label\ntrain,1.0,0\ntest,2.0,1\n".as_bytes(), PointKind::Real1D).is_err());
        assert!(parse(
            "role,x1,label\ntrain,1.0,0\ntest,2.0,\ntruth,3.0,1\n".as_bytes(),
            PointKind::Real1D
        )
        .is_err());
        assert!(parse("role,x1,x2,label\ntrain,1.0,2.0,0\n".as_bytes(), PointKind::Real1D).is_err());
    }

    #[test]
    fn planar_and_discrete_points() {
        let d = parse("role,x1,x2,label\ntrain,1,2,1\n".as_bytes(), PointKind::Real2D).unwrap();
        assert_eq!(d.train.points(), &[Point::Real2D(1.0, 2.0)]);
        let d = parse("role,x1,label\ntrain,3,1\ntest,4,\n".as_bytes(), PointKind::Discrete).unwrap();
        assert_eq!(d.test.points(), &[Point::Discrete(4)]);
        assert!(d.truth.is_none());
    }
}
