//! File formats: RSRF binary matrices and XYZ text clouds.

mod rsrf;
mod xyz;

pub use rsrf::{read_rsrf, write_rsrf, RsrfMatrix, HEADER_LEN, MAGIC, VERSION};
pub use xyz::{format_xyz, parse_xyz, read_xyz, write_xyz};

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Xyz,
    Rsrf,
}

impl FileKind {
    /// `.xyz` / `.txt` are text, `.rsrf` is binary. Anything else is rejected.
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("xyz") | Some("txt") => Ok(FileKind::Xyz),
            Some("rsrf") => Ok(FileKind::Rsrf),
            _ => Err(Error::InvalidArgument(format!(
                "cannot infer file format of '{}' (use .xyz or .rsrf)",
                path.display()
            ))),
        }
    }
}

/// Reads a cloud from XYZ text or from an RSRF matrix with at least 3 channels
/// (channels past the third become attributes).
pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    match FileKind::from_path(path)? {
        FileKind::Xyz => read_xyz(path),
        FileKind::Rsrf => cloud_from_matrix(&read_rsrf(path)?),
    }
}

pub fn cloud_from_matrix(m: &RsrfMatrix) -> Result<PointCloud> {
    if m.channels() < 3 {
        return Err(Error::format_at_byte(
            16,
            format!("a point cloud needs 3 channels, file has {}", m.channels()),
        ));
    }
    let points = m
        .iter_rows()
        .take(m.rows() as usize)
        .map(|r| Vec3::new(r[0] as f64, r[1] as f64, r[2] as f64))
        .collect();
    let cloud = PointCloud::new(points)?;
    if m.channels() > 3 {
        let attrs = m
            .iter_rows()
            .map(|r| r[3..].iter().map(|&v| v as f64).collect())
            .collect();
        cloud.with_attrs(attrs)
    } else {
        Ok(cloud)
    }
}

pub fn cloud_rows(cloud: &PointCloud) -> Vec<Vec<f64>> {
    cloud
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut row = vec![p.x, p.y, p.z];
            if let Some(a) = cloud.attrs() {
                row.extend_from_slice(&a[i]);
            }
            row
        })
        .collect()
}

pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    match FileKind::from_path(path)? {
        FileKind::Xyz => write_xyz(path, cloud),
        FileKind::Rsrf => write_matrix(path, 3 + cloud.attr_width(), &cloud_rows(cloud)),
    }
}

/// Writes rows of `channels` values as RSRF, or as whitespace-separated text.
pub fn write_matrix<R: AsRef<[f64]>>(path: &Path, channels: usize, rows: &[R]) -> Result<()> {
    let channels_u32 = u32::try_from(channels)
        .map_err(|_| Error::InvalidInput(format!("{channels} channels do not fit a u32")))?;
    // narrow and validate first so text and binary outputs reject the same inputs
    let m = RsrfMatrix::from_rows(channels_u32, rows)?;
    match FileKind::from_path(path)? {
        FileKind::Rsrf => write_rsrf(path, &m),
        FileKind::Xyz => {
            let mut out = String::new();
            for r in rows {
                let line: Vec<String> = r.as_ref().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            std::fs::write(path, out)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_from_extension() {
        assert_eq!(FileKind::from_path(Path::new("a/b.XYZ")).unwrap(), FileKind::Xyz);
        assert_eq!(FileKind::from_path(Path::new("b.rsrf")).unwrap(), FileKind::Rsrf);
        assert!(FileKind::from_path(Path::new("b.ply")).is_err());
        assert!(FileKind::from_path(Path::new("noext")).is_err());
    }

    #[test]
    fn cloud_through_rsrf_keeps_attrs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.rsrf");
        let c = PointCloud::from_slice(&[[0.5, 1.0, -2.0], [3.0, 0.25, 8.0]])
            .unwrap()
            .with_attrs(vec![vec![1.0], vec![2.0]])
            .unwrap();
        write_cloud(&path, &c).unwrap();
        assert_eq!(read_cloud(&path).unwrap(), c);
    }

    #[test]
    fn magic_checked_regardless_of_extension() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.rsrf");
        std::fs::write(&path, "1 2 3\n").unwrap();
        assert!(matches!(read_cloud(&path), Err(Error::Format { offset: 0, .. })));
    }
}
