//! Angle syntax: decimal radians, or rational multiples of π such as `2pi/3`,
//! `-pi/4`, `pi`, `3pi`.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse angle {0:?}: expected radians or <p>pi/<q>")]
pub struct AngleError(pub String);

pub fn parse_angle(text: &str) -> Result<f64, AngleError> {
    let err = || AngleError(text.to_string());
    let s = text.trim();
    let lower = s.to_ascii_lowercase();
    let Some(at) = lower.find("pi") else {
        let v: f64 = s.parse().map_err(|_| err())?;
        return if v.is_finite() { Ok(v) } else { Err(err()) };
    };
    let (head, tail) = (lower[..at].trim(), lower[at + 2..].trim());
    let p: i64 = match head {
        "" | "+" => 1,
        "-" => -1,
        h => h.trim_end_matches('*').trim().parse().map_err(|_| err())?,
    };
    let q: i64 = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1,
        None => return Err(err()),
        Some(q) => q.trim().parse().map_err(|_| err())?,
    };
    if q == 0 {
        return Err(err());
    }
    Ok(p as f64 * PI / q as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sixvertex::model::is_cube_root_eta;

    #[test]
    fn forms() {
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("-1e-3").unwrap(), -1e-3);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("3pi").unwrap(), 3.0 * PI);
        assert_eq!(parse_angle("2*pi/5").unwrap(), 2.0 * PI / 5.0);
        assert!(is_cube_root_eta(parse_angle("2pi/3").unwrap()));
        assert!(is_cube_root_eta(parse_angle("2PI/3").unwrap()));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "pie", "2pi/0", "pi/x", "x", "inf", "NaN", "2pi3"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
