//! Flag value syntax: `3x3`, `0.1:3`, `1,2`, `p=0:1.4:0.1`.

use anyhow::{bail, Context, Result};

pub fn dims(s: &str) -> Result<Vec<usize>> {
    let out: Vec<usize> = s
        .split(['x', 'X', ','])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .with_context(|| format!("bad dimension `{p}` in `{s}`"))
        })
        .collect::<Result<_>>()?;
    if out.is_empty() || out.contains(&0) {
        bail!("dimensions must be positive: `{s}`");
    }
    Ok(out)
}

pub fn list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{p}` in `{s}`"))
        })
        .collect()
}

/// `lo:hi` windows separated by commas; a single window applies to every argument.
pub fn windows(s: &str, count: usize) -> Result<Vec<(f64, f64)>> {
    let parsed: Vec<(f64, f64)> = s
        .split(',')
        .map(|w| {
            let (lo, hi) = w
                .split_once(':')
                .with_context(|| format!("window `{w}` is not lo:hi"))?;
            Ok((lo.trim().parse()?, hi.trim().parse()?))
        })
        .collect::<Result<_>>()?;
    match parsed.len() {
        1 => Ok(vec![parsed[0]; count]),
        n if n == count => Ok(parsed),
        n => bail!("{n} windows given for {count} arguments"),
    }
}

/// Inclusive range `lo:hi:step`.
pub fn range(s: &str) -> Result<Vec<f64>> {
    let parts = list(&s.replace(':', ","))?;
    let [lo, hi, step] = parts[..] else {
        bail!("range `{s}` is not lo:hi:step")
    };
    if !(step > 0.0) || hi < lo {
        bail!("range `{s}` needs lo ≤ hi and step > 0");
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    // Round to the step's decimal grid so that 0.1·3 prints as 0.3.
    Ok((0..=n)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// `p=lo:hi:step,q=lo:hi:step`.
pub fn sweep_grid(s: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mut p, mut q) = (None, None);
    for part in s.split(',') {
        let (name, r) = part
            .split_once('=')
            .with_context(|| format!("`{part}` is not name=lo:hi:step"))?;
        match name.trim() {
            "p" => p = Some(range(r)?),
            "q" => q = Some(range(r)?),
            other => bail!("unknown sweep variable `{other}`"),
        }
    }
    Ok((p.context("missing p range")?, q.context("missing q range")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flag_values() {
        assert_eq!(dims("3x4").unwrap(), vec![3, 4]);
        assert_eq!(dims("2").unwrap(), vec![2]);
        assert!(dims("0x2").is_err());
        assert_eq!(windows("0.1:3", 2).unwrap(), vec![(0.1, 3.0); 2]);
        assert_eq!(
            windows("0.1:3,0.6:2", 2).unwrap(),
            vec![(0.1, 3.0), (0.6, 2.0)]
        );
        assert!(windows("0.1:3,0.6:2", 3).is_err());
        let r = range("0:1.4:0.1").unwrap();
        assert_eq!(r.len(), 15);
        assert_eq!(r[3], 0.3);
        assert_eq!(*r.last().unwrap(), 1.4);
        let (p, q) = sweep_grid("p=0:1:0.5,q=0.2:0.2:0.1").unwrap();
        assert_eq!(p, vec![0.0, 0.5, 1.0]);
        assert_eq!(q, vec![0.2]);
        assert!(sweep_grid("p=0:1:0.5").is_err());
    }
}
