use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Vec3};

/// Parses whitespace-separated `x y z [attr ...]` lines. Lines starting with
/// `#` and blank lines are skipped. Every data line must have the same width.
pub fn parse_xyz(text: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    let mut attrs: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno as u64 + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let values = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    Error::format_at_line(line_no, format!("'{tok}' is not a decimal number"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() < 3 {
            return Err(Error::format_at_line(
                line_no,
                format!("expected at least 3 columns, found {}", values.len()),
            ));
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(Error::format_at_line(
                    line_no,
                    format!("expected {w} columns, found {}", values.len()),
                ))
            }
            _ => {}
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "line {line_no} has a non-finite value"
            )));
        }
        points.push(Vec3::new(values[0], values[1], values[2]));
        attrs.push(values[3..].to_vec());
    }
    if points.is_empty() {
        return Err(Error::format_at_line(0, "no points"));
    }
    let cloud = PointCloud::new(points)?;
    if width.unwrap_or(3) > 3 {
        cloud.with_attrs(attrs)
    } else {
        Ok(cloud)
    }
}

/// One line per point, shortest round-trip decimal representation.
pub fn format_xyz(cloud: &PointCloud) -> String {
    let mut out = String::new();
    for (i, p) in cloud.points().iter().enumerate() {
        let _ = write!(out, "{} {} {}", p.x, p.y, p.z);
        if let Some(a) = cloud.attrs() {
            for v in &a[i] {
                let _ = write!(out, " {v}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_xyz(path: impl AsRef<Path>) -> Result<PointCloud> {
    parse_xyz(&fs::read_to_string(path)?)
}

pub fn write_xyz(path: impl AsRef<Path>, cloud: &PointCloud) -> Result<()> {
    fs::write(path, format_xyz(cloud))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_attrs() {
        let c = parse_xyz("# header\n1 2 3 0.5\n\n  -1.5e0 0 4 1\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(1), Vec3::new(-1.5, 0.0, 4.0));
        assert_eq!(c.attrs().unwrap(), &[vec![0.5], vec![1.0]]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_xyz("1 2\n"), Err(Error::Format { offset: 1, .. })));
        assert!(matches!(
            parse_xyz("1 2 3\n1,5 2 3\n"),
            Err(Error::Format { offset: 2, .. })
        ));
        assert!(matches!(parse_xyz("1 2 3\n1 2 3 4\n"), Err(Error::Format { .. })));
        assert!(matches!(parse_xyz("1 nan 3\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_xyz("# only\n"), Err(Error::Format { .. })));
    }

    #[test]
    fn text_roundtrip_is_exact() {
        let c = PointCloud::from_slice(&[[0.1, -2.0 / 3.0, 1e-30], [5.0, 6.0, 7.0]]).unwrap();
        assert_eq!(parse_xyz(&format_xyz(&c)).unwrap(), c);
    }
}
