//! Exact parsing of groups, markings and segments.

use flatvol::rational::{fmt_q, parse_q};
use flatvol::{CartanVec, Error, Result, RootSystem, Q};

pub fn group(name: &str) -> Result<RootSystem> {
    RootSystem::from_name(name)
}

/// One marking: its fundamental coordinates separated by commas. For `A1`
/// the single coordinate is `t = ⟨α, μ⟩`.
pub fn point(rs: &RootSystem, s: &str) -> Result<CartanVec> {
    let coords: Vec<Q> = s.split(',').map(parse_q).collect::<Result<_>>()?;
    if coords.len() != rs.rank() {
        return Err(Error::Parse(format!("marking {s:?} has {} coordinates, {} needs {}", coords.len(), rs.spec, rs.rank())));
    }
    let mu = rs.from_fundamental(&coords);
    if !rs.alcove_membership(&mu).in_closure() {
        return Err(Error::OutsideAlcove(format!("marking {s:?}")));
    }
    Ok(mu)
}

/// Markings given as separate arguments or as one space-separated string.
pub fn markings(rs: &RootSystem, args: &[String], want: usize) -> Result<Vec<CartanVec>> {
    let pts: Vec<CartanVec> = args.iter().flat_map(|a| a.split_whitespace()).map(|s| point(rs, s)).collect::<Result<_>>()?;
    if pts.len() != want {
        return Err(Error::Parse(format!("expected {want} markings, got {}", pts.len())));
    }
    Ok(pts)
}

/// `START:END` to the `steps + 1` equally spaced points of the segment.
pub fn segment(rs: &RootSystem, s: &str, steps: u32) -> Result<Vec<CartanVec>> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("segment {s:?} must be START:END")))?;
    let (a, b) = (point(rs, a)?, point(rs, b)?);
    if steps == 0 {
        return Ok(vec![a]);
    }
    let d = &b - &a;
    Ok((0..=steps).map(|k| &a + &d.scale(&Q::new(k.into(), steps.into()))).collect())
}

/// Fundamental coordinates as `p/q` strings.
pub fn echo(rs: &RootSystem, mu: &CartanVec) -> Vec<String> {
    rs.to_fundamental(mu).iter().map(fmt_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markings_parse_exactly() {
        let a2 = group("A2").unwrap();
        let m = markings(&a2, &["1/3,1/4 0.1,0.2".into(), "1/5,1/5".into()], 3).unwrap();
        assert_eq!(echo(&a2, &m[1]), vec!["1/10", "1/5"]);
        assert!(markings(&a2, &["1/3".into()], 1).is_err());
        assert!(matches!(point(&a2, "1,1"), Err(Error::OutsideAlcove(_))));
        assert!(matches!(point(&a2, "x,1"), Err(Error::Parse(_))));
    }

    #[test]
    fn segments_include_both_ends() {
        let a1 = group("A1").unwrap();
        let s = segment(&a1, "0:1", 4).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(echo(&a1, &s[1]), vec!["1/4"]);
        assert_eq!(segment(&a1, "1/2:1", 0).unwrap().len(), 1);
        assert!(segment(&a1, "0-1", 3).is_err());
    }
}
