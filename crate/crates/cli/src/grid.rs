//! Grid and seed parsing for command-line flags.

/// `a:b:step` (inclusive of `b` up to rounding), a comma list, or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let out = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(format!("grid {s:?} needs a <= b and step > 0"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(format!("grid {s:?} has too many points"));
            }
            // snap away accumulated binary noise so that 0.1:1:0.1 hits 0.7 exactly
            (0..=count).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("grid {s:?} is neither a:b:step nor a list")),
    };
    if out.is_empty() || out.iter().any(|x| !x.is_finite()) {
        return Err(format!("grid {s:?} is empty or not finite"));
    }
    Ok(out)
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse::<u64>(),
    };
    r.map_err(|e| format!("bad seed {s:?}: {e}"))
}

/// `ID:REL`, as in `11:1e-3`.
pub fn parse_perturb(s: &str) -> Result<(usize, f64), String> {
    let (id, rel) = s.split_once(':').ok_or_else(|| format!("expected ID:REL, got {s:?}"))?;
    let id: usize = id.parse().map_err(|e| format!("bad criterion id: {e}"))?;
    if !(1..=16).contains(&id) {
        return Err(format!("criterion id {id} is not in 1..=16"));
    }
    Ok((id, rel.parse().map_err(|e| format!("bad relative shift: {e}"))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1:1:0.1").unwrap().len(), 10);
        assert_eq!(parse_grid("0.1:1:0.1").unwrap()[6], 0.7);
        assert_eq!(parse_grid("-1,0.5").unwrap(), vec![-1.0, 0.5]);
        assert_eq!(parse_grid("2").unwrap(), vec![2.0]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("7").unwrap(), 7);
        assert_eq!(parse_seed("0xff").unwrap(), 255);
        assert!(parse_seed("-1").is_err());
        assert_eq!(parse_perturb("11:1e-3").unwrap(), (11, 1e-3));
        assert!(parse_perturb("17:1").is_err());
    }
}
