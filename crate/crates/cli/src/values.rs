//! Parsing of scalar, list and range flag values.

use crate::error::{CliError, CliResult};
use crate::format::sig12;

fn real(text: &str, flag: &str) -> CliResult<f64> {
    let text = text.trim();
    let parsed = match text.split_once('/') {
        Some((p, q)) => match (p.trim().parse::<f64>(), q.trim().parse::<f64>()) {
            (Ok(p), Ok(q)) if q != 0.0 => Some(p / q),
            _ => None,
        },
        None => text.parse::<f64>().ok(),
    };
    match parsed {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::usage(format!("--{flag}: cannot parse '{text}' as a number"))),
    }
}

/// `x`, `x,y,z` (fractions such as `4/3` allowed) or `start:stop:step`
/// (inclusive). Range points are rounded to 12 significant digits.
pub fn parse_reals(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!("--{flag}: range must be start:stop:step, got '{text}'")));
        }
        let (start, stop, step) = (real(parts[0], flag)?, real(parts[1], flag)?, real(parts[2], flag)?);
        if !(step > 0.0) || stop < start {
            return Err(CliError::usage(format!("--{flag}: range needs start <= stop and step > 0")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(CliError::usage(format!("--{flag}: range has {count} points")));
        }
        return Ok((0..count)
            .map(|i| sig12(start + i as f64 * step).parse().expect("formatted number"))
            .collect());
    }
    text.split(',').map(|item| real(item, flag)).collect()
}

/// `k`, `i,j,k`, `start:stop` or `start:stop:step` (inclusive).
pub fn parse_levels(text: &str) -> CliResult<Vec<u32>> {
    let int = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| CliError::usage(format!("--n: cannot parse '{}' as a nonnegative integer", s.trim())))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (int(a)?, int(b)?, 1),
            [a, b, c] => (int(a)?, int(b)?, int(c)?),
            _ => return Err(CliError::usage(format!("--n: range must be start:stop[:step], got '{text}'"))),
        };
        if step == 0 || stop < start {
            return Err(CliError::usage("--n: range needs start <= stop and step > 0"));
        }
        return Ok((start..=stop).step_by(step as usize).collect());
    }
    text.split(',').map(int).collect()
}
