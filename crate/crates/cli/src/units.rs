//! Parsing of quantities with optional unit suffixes. Everything is returned in SI.

fn split_suffix<'a>(s: &'a str, suffixes: &[&'a str]) -> Option<(&'a str, &'a str)> {
    let s = s.trim();
    suffixes
        .iter()
        .find(|suf| s.ends_with(**suf))
        .map(|suf| (s[..s.len() - suf.len()].trim(), *suf))
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Intensity: `mW/cm2` (or `mW/cm²`) suffix, `W/m2` suffix, or raw W/m².
pub fn intensity(s: &str) -> Result<f64, String> {
    match split_suffix(s, &["mW/cm2", "mW/cm²", "W/m2", "W/m²"]) {
        Some((v, suf)) if suf.starts_with("mW") => Ok(number(v)? * 10.0),
        Some((v, _)) => number(v),
        None => number(s),
    }
}

/// Wavelength: `nm` suffix, `m` suffix, or raw metres.
pub fn wavelength(s: &str) -> Result<f64, String> {
    match split_suffix(s, &["nm", "m"]) {
        Some((v, "nm")) => Ok(number(v)? * 1e-9),
        Some((v, _)) => number(v),
        None => number(s),
    }
}

/// Inclusive grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

pub fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got `{s}`"));
    };
    let count: usize = n.trim().parse().map_err(|_| format!("bad count `{n}`"))?;
    if count == 0 {
        return Err("grid count must be >= 1".into());
    }
    Ok(Grid {
        start: number(a)?,
        stop: number(b)?,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intensity_suffixes() {
        assert_eq!(intensity("1mW/cm2").unwrap(), 10.0);
        assert_eq!(intensity("40 mW/cm²").unwrap(), 400.0);
        assert_eq!(intensity("400W/m2").unwrap(), 400.0);
        assert_eq!(intensity("400").unwrap(), 400.0);
        assert!(intensity("4x").is_err());
    }

    #[test]
    fn wavelength_suffixes() {
        assert!((wavelength("589nm").unwrap() - 589e-9).abs() < 1e-20);
        assert_eq!(wavelength("5.89e-7m").unwrap(), 5.89e-7);
        assert_eq!(wavelength("5.89e-7").unwrap(), 5.89e-7);
    }

    #[test]
    fn grid_endpoints_inclusive() {
        let g = grid("-1:1:5").unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(grid("2:3:1").unwrap().points(), vec![2.0]);
        assert!(grid("1:2").is_err());
        assert!(grid("1:2:0").is_err());
    }
}
