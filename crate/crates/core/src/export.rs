//! CSV and JSON writers. Floats are printed with 17 significant digits in
//! scientific notation, which round-trips exactly and ignores locale.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::extended::ExtendedReal;
use crate::ldp::{MarginalRateResult, RatePoint};
use crate::process::LogPolyPath;

pub const PATH_HEADER: &str = "k,t,re_log_phi,im_log_phi,re_zeta,im_zeta";
pub const RATE_HEADER: &str = "T,xi,eta,d_re,d_im,h,branch,gamma,rho";

pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_ext(x: ExtendedReal) -> String {
    match x {
        ExtendedReal::Finite(v) => fmt17(v),
        ExtendedReal::PosInfinity => "inf".into(),
    }
}

/// One path: index, `t = k/n`, `log Φ_{k,n}(1)` and its centred version.
pub fn write_path_csv<W: Write>(mut w: W, path: &LogPolyPath, mean_path: &[Complex64]) -> Result<()> {
    let zeta = path.centered(mean_path)?;
    let n = path.params.n as f64;
    writeln!(w, "{PATH_HEADER}")?;
    for (k, (v, z)) in path.values.iter().zip(&zeta).enumerate() {
        writeln!(
            w,
            "{k},{},{},{},{},{}",
            fmt17(k as f64 / n),
            fmt17(v.re),
            fmt17(v.im),
            fmt17(z.re),
            fmt17(z.im)
        )?;
    }
    Ok(())
}

pub fn write_rate_csv<W: Write>(mut w: W, rows: &[(RatePoint, MarginalRateResult)]) -> Result<()> {
    writeln!(w, "{RATE_HEADER}")?;
    for (p, r) in rows {
        let (g, rho) = match r.multipliers {
            Some((g, rho)) => (fmt17(g), fmt17(rho)),
            None => (String::new(), String::new()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{g},{rho}",
            fmt17(p.horizon),
            fmt17(p.xi),
            fmt17(p.eta),
            fmt17(p.d.re),
            fmt17(p.d.im),
            fmt_ext(r.value),
            r.branch.as_str()
        )?;
    }
    Ok(())
}

/// `variable,density` rows, `variable` being `theta` or `x`.
pub fn write_density_csv<W: Write>(mut w: W, variable: &str, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "{variable},density")?;
    for (x, d) in rows {
        writeln!(w, "{},{}", fmt17(*x), fmt17(*d))?;
    }
    Ok(())
}

/// A machine-auditable comparison of a computed quantity with its reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Which identity is being checked.
    pub identity: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(identity: impl Into<String>, computed: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (computed - reference).abs() <= tolerance;
        Check {
            identity: identity.into(),
            computed,
            reference,
            tolerance,
            pass,
        }
    }
}

pub fn write_checks_json<W: Write>(w: W, checks: &[Check]) -> Result<()> {
    serde_json::to_writer_pretty(w, checks).map_err(|e| crate::error::Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldp::marginal_rate_h;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn rate_rows() {
        let p = RatePoint::new(0.5, 0.5, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        let r = marginal_rate_h(p).unwrap();
        let mut buf = Vec::new();
        write_rate_csv(&mut buf, &[(p, r)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with(RATE_HEADER));
        assert!(s.trim_end().ends_with("inf,infinite,,"));
    }

    #[test]
    fn checks_serialize() {
        let c = Check::new("mass", 1.0 + 1e-10, 1.0, 1e-8);
        assert!(c.pass);
        let mut buf = Vec::new();
        write_checks_json(&mut buf, &[c]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("\"identity\": \"mass\""));
    }
}
