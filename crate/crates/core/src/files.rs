//! Plain-text correspondence and ground-truth files.
//!
//! Correspondence files start with `# n=<n> k=<k'>` followed by one
//! `j sigma(j)` line per vertex. Ground-truth files hold one `j j'` pair per
//! line. Both are 0-based; `#` starts a comment.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Result, SymmetryError};

pub fn correspondence_string(sigma: &[usize], k_active: usize) -> String {
    let mut out = String::with_capacity(sigma.len() * 12);
    let _ = writeln!(out, "# n={} k={}", sigma.len(), k_active);
    for (j, s) in sigma.iter().enumerate() {
        let _ = writeln!(out, "{j} {s}");
    }
    out
}

pub fn write_correspondence(path: impl AsRef<Path>, sigma: &[usize], k_active: usize) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, correspondence_string(sigma, k_active)).map_err(|e| SymmetryError::io(path, e))
}

fn read_pairs(text: &str, one_based: bool) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(SymmetryError::Parse {
                line: i + 1,
                message: format!("expected two indices, got `{line}`"),
            });
        }
        let parse = |t: &str| -> Result<usize> {
            let v: usize = t.parse().map_err(|_| SymmetryError::Parse {
                line: i + 1,
                message: format!("invalid index `{t}`"),
            })?;
            if one_based {
                v.checked_sub(1).ok_or_else(|| SymmetryError::Parse {
                    line: i + 1,
                    message: "index 0 in a 1-based file".into(),
                })
            } else {
                Ok(v)
            }
        };
        pairs.push((parse(toks[0])?, parse(toks[1])?));
    }
    Ok(pairs)
}

/// Parses a correspondence file into `sigma`. Every vertex must appear once.
pub fn parse_correspondence(text: &str) -> Result<Vec<usize>> {
    let pairs = read_pairs(text, false)?;
    let n = pairs.len();
    let mut sigma = vec![usize::MAX; n];
    for &(j, s) in &pairs {
        if j >= n {
            return Err(SymmetryError::Index { index: j, len: n });
        }
        if sigma[j] != usize::MAX {
            return Err(SymmetryError::Parse {
                line: 0,
                message: format!("vertex {j} listed twice"),
            });
        }
        sigma[j] = s;
    }
    Ok(sigma)
}

pub fn read_correspondence(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SymmetryError::io(path, e))?;
    parse_correspondence(&text)
}

pub fn parse_ground_truth(text: &str, one_based: bool) -> Result<Vec<(usize, usize)>> {
    read_pairs(text, one_based)
}

pub fn read_ground_truth(path: impl AsRef<Path>, one_based: bool) -> Result<Vec<(usize, usize)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SymmetryError::io(path, e))?;
    parse_ground_truth(&text, one_based)
}

pub fn ground_truth_string(pairs: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for (a, b) in pairs {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correspondence_round_trip() {
        let sigma = vec![2, 1, 0];
        let text = correspondence_string(&sigma, 9);
        assert!(text.starts_with("# n=3 k=9\n0 2\n"));
        assert_eq!(parse_correspondence(&text).unwrap(), sigma);
    }

    #[test]
    fn one_based_ground_truth_is_converted() {
        assert_eq!(parse_ground_truth("1 3\n2 2\n", true).unwrap(), vec![(0, 2), (1, 1)]);
        assert!(parse_ground_truth("0 3\n", true).is_err());
        assert!(parse_ground_truth("1 2 3\n", false).is_err());
    }
}
