//! Lattice specifications and vector arguments.

use std::path::Path;

use hlat_core::lattice::{AmbientVector, DualVector, Lattice, LatticeVector};
use hlat_core::{Error, Result};

/// `"diag:N" | "e8" | "gamma:N" | path`, or a `+`-separated sum of those, folded from the
/// left. A string naming an existing file is always read as a file, even if it contains
/// `+`.
pub fn lattice_spec(spec: &str) -> Result<Lattice> {
    let spec = spec.trim();
    if Path::new(spec).is_file() {
        return lattice_file(spec);
    }
    let mut parts = spec.split('+').map(str::trim);
    let first = atom(parts.next().unwrap_or(""))?;
    let sum = parts.try_fold(first, |acc, p| acc.direct_sum(&atom(p)?))?;
    Ok(sum.with_name(Some(spec.to_string())))
}

fn atom(spec: &str) -> Result<Lattice> {
    let size = |s: &str| -> Result<usize> {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad size in lattice spec {spec:?}")))
    };
    if spec.eq_ignore_ascii_case("e8") {
        Ok(Lattice::e8())
    } else if let Some(n) = spec.strip_prefix("diag:") {
        Lattice::diagonal(size(n)?)
    } else if let Some(n) = spec.strip_prefix("gamma:") {
        Lattice::gamma(size(n)?)
    } else if Path::new(spec).is_file() {
        lattice_file(spec)
    } else if spec.is_empty() {
        Err(Error::Parse("empty lattice spec".into()))
    } else {
        Err(Error::Parse(format!(
            "unknown lattice {spec:?} (expected diag:N, e8, gamma:N, a sum with '+', or a JSON file)"
        )))
    }
}

fn lattice_file(path: &str) -> Result<Lattice> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let lattice = Lattice::from_json_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{path}: {msg}")),
        other => other,
    })?;
    if lattice.name().is_none() {
        return Ok(lattice.with_name(Some(path.to_string())));
    }
    Ok(lattice)
}

fn split_csv(csv: &str) -> impl Iterator<Item = &str> {
    csv.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn integers(csv: &str) -> Result<Vec<i64>> {
    split_csv(csv)
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))))
        .collect()
}

/// Twice a number written as an integer, `p/q`, or a decimal; must be an integer.
fn doubled(s: &str) -> Result<i64> {
    let bad = || Error::Parse(format!("ambient coordinate {s:?} is not a multiple of 1/2"));
    let (num, den): (i128, i128) = if let Some((p, q)) = s.split_once('/') {
        (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10i128.pow(frac.len() as u32);
        let negative = int.trim_start().starts_with('-');
        let int: i128 = if int == "-" || int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let magnitude = int.abs() * scale + frac;
        (if negative { -magnitude } else { magnitude }, scale)
    } else {
        (s.parse().map_err(|_| bad())?, 1)
    };
    if den == 0 || (2 * num) % den != 0 {
        return Err(bad());
    }
    i64::try_from(2 * num / den).map_err(|_| bad())
}

pub fn ambient(csv: &str) -> Result<AmbientVector> {
    Ok(AmbientVector::from_doubled(split_csv(csv).map(doubled).collect::<Result<_>>()?))
}

/// `w` from basis coordinates or from ambient coordinates.
pub fn lattice_vector(lattice: &Lattice, basis: Option<&str>, ambient_csv: Option<&str>) -> Result<LatticeVector> {
    match (basis, ambient_csv) {
        (Some(csv), None) => lattice.vector(integers(csv)?),
        (None, Some(csv)) => lattice.ambient_to_basis(&ambient(csv)?),
        _ => Err(Error::InvalidInput("give exactly one of --w and --w-ambient".into())),
    }
}

pub fn dual_vector(lattice: &Lattice, csv: Option<&str>) -> Result<DualVector> {
    match csv {
        Some(csv) => lattice.dual_vector(integers(csv)?),
        None => Ok(DualVector::zeros(lattice.rank())),
    }
}
