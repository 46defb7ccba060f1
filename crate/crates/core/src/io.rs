//! Potential CSV and JSON files for spectra, diagnostics and reports.
//!
//! Numbers are written in `{:.16e}` form (17 significant digits), which
//! round-trips every finite `f64` and keeps output byte-for-byte
//! reproducible.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::characterization::CharacterizationReport;
use crate::error::{Error, Result};
use crate::forward::Boundary;
use crate::grid::{GridFn, GridSpec};
use crate::inverse::Diagnostics;
use crate::potential::DelayParameter;
use crate::spectrum::SpectralSequence;

type C = Complex64;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn pair(z: C) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    let body: Vec<String> = items.iter().map(f).collect();
    format!("[{}]", body.join(", "))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// One `x,q_re,q_im` row per node; nodes with a jump carry the mean of the
/// one-sided values.
pub fn format_potential_csv(q: &GridFn) -> String {
    let grid = q.grid();
    let mut out = String::from("x,q_re,q_im\n");
    for k in 0..grid.nodes() {
        let v = q.node(k);
        let _ = writeln!(out, "{},{},{}", num(grid.x(k)), num(v.re), num(v.im));
    }
    out
}

/// Parses the CSV written by [`format_potential_csv`]. The nodes must be the
/// uniform grid `x_k = k pi/m`; errors carry the 1-based line number.
pub fn parse_potential_csv(text: &str) -> Result<GridFn> {
    let malformed = |line: usize, message: String| Error::Malformed { line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "x,q_re,q_im" => {}
        Some((_, h)) => return Err(malformed(1, format!("expected header `x,q_re,q_im`, found `{h}`"))),
        None => return Err(malformed(1, "empty file".into())),
    }
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(malformed(lineno, format!("expected 3 fields, found {}", fields.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(lineno, format!("not a finite number: `{s}`")))
        };
        xs.push((lineno, parse(fields[0])?));
        vals.push(C::new(parse(fields[1])?, parse(fields[2])?));
    }
    if xs.len() < 2 {
        return Err(malformed(text.lines().count().max(1), "need at least two nodes".into()));
    }
    let m = xs.len() - 1;
    let grid = GridSpec::new(m).map_err(|e| malformed(xs[m].0, e.to_string()))?;
    for (k, &(lineno, x)) in xs.iter().enumerate() {
        if (x - grid.x(k)).abs() > 1e-9 {
            return Err(malformed(
                lineno,
                format!("node {k} at x = {x}, expected {} on a uniform grid of [0, pi]", grid.x(k)),
            ));
        }
    }
    GridFn::from_nodes(grid, vals)
}

pub fn read_potential_csv(path: &Path) -> Result<GridFn> {
    parse_potential_csv(&read_file(path)?)
}

pub fn format_spectrum_json(s: &SpectralSequence) -> String {
    format!(
        "{{\"delay\": {}, \"j\": {}, \"lambdas\": {}}}\n",
        num(s.delay.value()),
        s.j.index(),
        list(&s.lambdas, |z| pair(*z))
    )
}

#[derive(Deserialize)]
struct SpectrumFile {
    delay: f64,
    j: u8,
    lambdas: Vec<[f64; 2]>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Malformed {
        line: e.line(),
        message: e.to_string(),
    }
}

/// Reads a spectrum file; a delay below `pi/2` is reported as
/// [`Error::DelayOutOfRange`].
pub fn parse_spectrum_json(text: &str) -> Result<SpectralSequence> {
    let f: SpectrumFile = serde_json::from_str(text).map_err(json_error)?;
    let j = Boundary::from_index(f.j).ok_or(Error::Malformed {
        line: 1,
        message: format!("boundary index j must be 0 or 1, found {}", f.j),
    })?;
    let delay = DelayParameter::new(f.delay)?;
    SpectralSequence::new(j, delay, f.lambdas.iter().map(|p| C::new(p[0], p[1])).collect())
}

pub fn read_spectrum_json(path: &Path) -> Result<SpectralSequence> {
    parse_spectrum_json(&read_file(path)?)
}

pub fn format_diagnostics_json(d: &Diagnostics) -> String {
    format!(
        "{{\"omega\": {}, \"omega_alt\": {}, \"qminus_consistency\": {}, \"volterra_residual\": {}}}\n",
        pair(d.omega),
        pair(d.omega_alt),
        num(d.qminus_consistency),
        num(d.volterra_residual)
    )
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "\"pass\""
    } else {
        "\"fail\""
    }
}

/// Characterization report with pass/fail flags. `a4_tolerance` and
/// `type_slack` set the flags for the normalization relation and the
/// exponential type; the decay section is `"skipped"` without a Dirichlet
/// spectrum.
pub fn format_report_json(
    r: &CharacterizationReport,
    a: DelayParameter,
    a4_tolerance: f64,
    type_slack: f64,
) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"delay\": {},", num(a.value()));
    let _ = writeln!(out, "  \"omega_fit\": {},", pair(r.omega_fit));
    let _ = writeln!(out, "  \"kappa_residuals\": {},", list(&r.kappa_residuals, |z| pair(*z)));
    let _ = writeln!(out, "  \"kappa_tail_stable\": {},", flag(r.kappa_stable));
    let _ = writeln!(out, "  \"a4_residual\": {},", pair(r.a4_residual));
    let _ = writeln!(out, "  \"a4\": {},", flag(r.a4_residual.norm() <= a4_tolerance));
    match (&r.char_decay, r.exp_type_estimates.0) {
        (Some(decay), Some(t0)) => {
            let _ = writeln!(out, "  \"decay_samples\": {},", list(&r.decay_samples, |x| num(*x)));
            let _ = writeln!(out, "  \"char_decay\": {},", list(decay, |x| num(*x)));
            let _ = writeln!(out, "  \"char\": {},", flag(r.decay_monotone_tail.unwrap_or(false)));
            let _ = writeln!(out, "  \"exp_type_j0\": {},", num(t0));
        }
        _ => {
            let _ = writeln!(out, "  \"char\": \"skipped\",");
            let _ = writeln!(out, "  \"exp_type_j0\": \"skipped\",");
        }
    }
    let t1 = r.exp_type_estimates.1;
    let _ = writeln!(out, "  \"exp_type_j1\": {},", num(t1));
    let limit = std::f64::consts::PI - a.value() + type_slack;
    let _ = writeln!(out, "  \"exp_type_limit\": {},", num(limit));
    let types_ok = t1 <= limit && r.exp_type_estimates.0.is_none_or(|t0| t0 <= limit);
    let _ = writeln!(out, "  \"exp_type\": {}", flag(types_ok));
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn potential_csv_round_trips_exactly() {
        let g = GridSpec::new(32).unwrap();
        let q = GridFn::from_fn(g, |x| C::new(x.sin() / 3.0, -x.exp() * 1e-7));
        let back = parse_potential_csv(&format_potential_csv(&q)).unwrap();
        assert_eq!(back.node_values(), q.node_values());
    }

    #[test]
    fn malformed_csv_reports_the_line() {
        let text = "x,q_re,q_im\n0,1,0\n0.5,abc,0\n";
        match parse_potential_csv(text) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_potential_csv("x,y\n") {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_uniform_nodes_are_rejected() {
        let g = GridSpec::new(16).unwrap();
        let mut text = format_potential_csv(&GridFn::zeros(g));
        text = text.replacen(&num(g.x(3)), "0.6", 1);
        assert!(matches!(parse_potential_csv(&text), Err(Error::Malformed { line: 5, .. })));
    }

    #[test]
    fn spectrum_json_round_trips_exactly() {
        let a = DelayParameter::new(0.6 * PI).unwrap();
        let s = SpectralSequence::new(
            Boundary::Neumann,
            a,
            vec![C::new(0.1, -1e-300), C::new(1.0 / 3.0, 2.0_f64.sqrt())],
        )
        .unwrap();
        let text = format_spectrum_json(&s);
        assert!(text.starts_with("{\"delay\": 1.8849555921538759e0, \"j\": 1, \"lambdas\": [["));
        assert_eq!(parse_spectrum_json(&text).unwrap(), s);
    }

    #[test]
    fn spectrum_delay_below_half_pi_is_rejected() {
        let text = "{\"delay\": 1.0, \"j\": 0, \"lambdas\": [[0.25, 0.0]]}";
        assert_eq!(parse_spectrum_json(text), Err(Error::DelayOutOfRange(1.0)));
        assert!(matches!(parse_spectrum_json("{\"delay\": 2.0,"), Err(Error::Malformed { .. })));
    }
}
