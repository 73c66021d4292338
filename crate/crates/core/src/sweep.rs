//! Parameter sweeps and their text serializations.
//!
//! Numbers are written with 12 significant digits in `%.12g` style, so the
//! output is byte-identical for identical inputs.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::channel::single_use_triad;
use crate::error::{Error, Result};
use crate::metrics::{coherent_fidelity, entanglement_survival};
use crate::scheme::{reduce, ChannelParams};

/// Significant digits used for every number written out.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` like C's `%.{digits}g`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g(x: f64) -> String {
    format_g(x, SIG_DIGITS)
}

/// Value as written in CSV, re-read so JSON carries the same number.
fn rounded(x: f64) -> Value {
    let v: f64 = g(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Eta,
    Eps,
    T,
    Mu,
    Alpha2,
    N,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Eta => "eta",
            SweepParam::Eps => "eps",
            SweepParam::T => "T",
            SweepParam::Mu => "mu",
            SweepParam::Alpha2 => "alpha2",
            SweepParam::N => "N",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => SweepParam::Eta,
            "eps" => SweepParam::Eps,
            "T" => SweepParam::T,
            "mu" => SweepParam::Mu,
            "alpha2" => SweepParam::Alpha2,
            "N" => SweepParam::N,
            other => return Err(Error::InvalidGrid(format!("unknown axis `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: SweepParam, start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "axis {} needs at least 2 steps, got {steps}",
                param.name()
            )));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "axis {} has non-finite bounds",
                param.name()
            )));
        }
        Ok(Self {
            param,
            start,
            stop,
            steps,
        })
    }

    /// Unit-interval axis.
    pub fn unit(param: SweepParam, steps: usize) -> Result<Self> {
        Self::new(param, 0.0, 1.0, steps)
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// Values held fixed while the two axes vary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedParams {
    pub n: usize,
    pub eta: f64,
    pub eps: f64,
    pub t: f64,
    pub mu: f64,
    pub alpha2: f64,
    pub flips: bool,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            n: 2,
            eta: 0.6,
            eps: 0.3,
            t: 3.0,
            mu: 0.6,
            alpha2: 8.0,
            flips: true,
        }
    }
}

impl FixedParams {
    fn set(&mut self, param: SweepParam, value: f64) -> Result<()> {
        match param {
            SweepParam::Eta => self.eta = value,
            SweepParam::Eps => self.eps = value,
            SweepParam::T => self.t = value,
            SweepParam::Mu => self.mu = value,
            SweepParam::Alpha2 => self.alpha2 = value,
            SweepParam::N => {
                let rounded = value.round();
                if (value - rounded).abs() > 1e-9 || rounded < 0.0 {
                    return Err(Error::param("N", value, "must be a nonnegative integer"));
                }
                self.n = rounded as usize;
            }
        }
        Ok(())
    }

    pub fn channel_params(&self) -> Result<ChannelParams> {
        ChannelParams::new(self.n, self.eta, self.eps, self.t, self.flips)
    }
}

/// Two-axis grid, evaluated row-major (first axis outermost).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub outer: Axis,
    pub inner: Axis,
    pub fixed: FixedParams,
}

impl SweepSpec {
    pub fn new(outer: Axis, inner: Axis, fixed: FixedParams) -> Result<Self> {
        if outer.param == inner.param {
            return Err(Error::InvalidGrid("axes must differ".into()));
        }
        Ok(Self {
            outer,
            inner,
            fixed,
        })
    }

    /// `eta × eps` over `[0, 1]²`.
    pub fn eta_eps(eta_steps: usize, eps_steps: usize, fixed: FixedParams) -> Result<Self> {
        Self::new(
            Axis::unit(SweepParam::Eta, eta_steps)?,
            Axis::unit(SweepParam::Eps, eps_steps)?,
            fixed,
        )
    }

    pub fn points(&self) -> Result<Vec<(f64, f64, FixedParams)>> {
        let mut out = Vec::with_capacity(self.outer.steps * self.inner.steps);
        for x in self.outer.values() {
            for y in self.inner.values() {
                let mut p = self.fixed;
                p.set(self.outer.param, x)?;
                p.set(self.inner.param, y)?;
                out.push((x, y, p));
            }
        }
        Ok(out)
    }

    fn evaluate<R: Send>(
        &self,
        f: impl Fn(&FixedParams) -> Result<R> + Sync,
    ) -> Result<Vec<(f64, f64, R)>> {
        self.points()?
            .into_par_iter()
            .map(|(x, y, p)| f(&p).map(|r| (x, y, r)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => g(*x),
                    Cell::Bool(b) => b.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(x) => rounded(*x),
                        Cell::Bool(b) => Value::Bool(*b),
                    };
                    obj.insert(name.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }
}

/// Coherent-state fidelity over the grid; columns `<outer>,<inner>,value`.
pub fn fidelity_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let rows = spec.evaluate(|p| Ok(coherent_fidelity(&p.channel_params()?, p.alpha2)?.value))?;
    Ok(SweepTable {
        columns: vec![
            spec.outer.param.name().into(),
            spec.inner.param.name().into(),
            "value".into(),
        ],
        rows: rows
            .into_iter()
            .map(|(x, y, v)| vec![Cell::Num(x), Cell::Num(y), Cell::Num(v)])
            .collect(),
    })
}

/// `d̃_−` and separability over the grid; columns
/// `<outer>,<inner>,d_minus,separable`.
pub fn entanglement_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let rows = spec.evaluate(|p| entanglement_survival(&p.channel_params()?, p.mu))?;
    Ok(SweepTable {
        columns: vec![
            spec.outer.param.name().into(),
            spec.inner.param.name().into(),
            "d_minus".into(),
            "separable".into(),
        ],
        rows: rows
            .into_iter()
            .map(|(x, y, r)| {
                vec![
                    Cell::Num(x),
                    Cell::Num(y),
                    Cell::Num(r.d_minus),
                    Cell::Bool(r.separable),
                ]
            })
            .collect(),
    })
}

/// Squared output coefficients of the scheme next to the bare single-use
/// transmissivity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub n: usize,
    pub eta: f64,
    pub eps: f64,
    pub flips: bool,
    pub signal: f64,
    pub aux: Vec<f64>,
    pub env: Vec<f64>,
    pub memory: f64,
    pub single_use: f64,
}

impl CoefficientReport {
    pub fn compute(n: usize, eta: f64, eps: f64, flips: bool) -> Result<Self> {
        // T does not enter the coefficients
        let params = ChannelParams::new(n, eta, eps, 0.0, flips)?;
        let c = reduce(&params)?;
        let bare = single_use_triad(eta, eps, 0.0)?;
        let sqrt_eta = bare.x()[(0, 0)];
        Ok(Self {
            n,
            eta,
            eps,
            flips,
            signal: c.signal_weight(),
            aux: c.aux_weights(),
            env: c.env_weights(),
            memory: c.memory_weight(),
            single_use: sqrt_eta * sqrt_eta,
        })
    }

    fn entries(&self) -> Vec<(String, f64)> {
        let mut out = vec![("signal".to_string(), self.signal)];
        out.extend(
            self.aux
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("aux_{}", i + 1), *v)),
        );
        out.extend(
            self.env
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("env_{}", i + 1), *v)),
        );
        out.push(("memory".into(), self.memory));
        out.push(("single_use".into(), self.single_use));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,magnitude\n");
        for (name, v) in self.entries() {
            let _ = writeln!(out, "{name},{}", g(v));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(self.n));
        obj.insert("eta".into(), rounded(self.eta));
        obj.insert("eps".into(), rounded(self.eps));
        obj.insert("flips".into(), Value::Bool(self.flips));
        for (name, v) in self.entries() {
            obj.insert(name, rounded(v));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_g_matches_c() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.598663081071255, "0.598663081071"),
            (1.0 / 3.0, "0.333333333333"),
            (123456789012345.0, "1.23456789012e+14"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (-2.5, "-2.5"),
            (100.0, "100"),
            (0.02 * 3.0, "0.06"),
        ];
        for (x, expect) in cases {
            assert_eq!(format_g(x, 12), expect, "{x}");
        }
        assert_eq!(format_g(1234.5678, 3), "1.23e+03");
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = Axis::unit(SweepParam::Eta, 51).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 51);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[50], 1.0);
        assert!((v[30] - 0.6).abs() < 1e-15);
        assert!(Axis::unit(SweepParam::Eta, 1).is_err());
        assert!("foo".parse::<SweepParam>().is_err());
        assert_eq!("alpha2".parse::<SweepParam>().unwrap(), SweepParam::Alpha2);
    }

    #[test]
    fn row_major_order() {
        let spec = SweepSpec::eta_eps(3, 2, FixedParams::default()).unwrap();
        let pts: Vec<(f64, f64)> = spec
            .points()
            .unwrap()
            .into_iter()
            .map(|(x, y, _)| (x, y))
            .collect();
        assert_eq!(
            pts,
            vec![
                (0.0, 0.0),
                (0.0, 1.0),
                (0.5, 0.0),
                (0.5, 1.0),
                (1.0, 0.0),
                (1.0, 1.0)
            ]
        );
    }

    #[test]
    fn fidelity_table_layout() {
        let spec = SweepSpec::eta_eps(6, 11, FixedParams::default()).unwrap();
        let table = fidelity_sweep(&spec).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("eta,eps,value\n"));
        assert_eq!(csv.lines().count(), 1 + 66);
        // (eta = 0.6, eps = 0.3)
        let row = &table.rows[3 * 11 + 3];
        let Cell::Num(f) = row[2] else { panic!() };
        assert!((f - 0.5987).abs() < 5e-4);
        // eta = 1 rows are lossless
        for row in &table.rows[55..] {
            let Cell::Num(f) = row[2] else { panic!() };
            assert!((f - 1.0).abs() < 1e-12);
        }
        assert_eq!(csv, fidelity_sweep(&spec).unwrap().to_csv());
    }

    #[test]
    fn entanglement_table_layout() {
        let fixed = FixedParams {
            t: 1.0,
            ..FixedParams::default()
        };
        let spec = SweepSpec::eta_eps(6, 11, fixed).unwrap();
        let table = entanglement_sweep(&spec).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("eta,eps,d_minus,separable\n"));
        assert!(csv.lines().nth(1).unwrap().ends_with(",true"));
        let json: Value = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 66);
        assert_eq!(json[0]["separable"], Value::Bool(true));
        assert!((json[65]["d_minus"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn sweeping_n_validates() {
        let spec = SweepSpec::new(
            Axis::new(SweepParam::N, 2.0, 3.0, 2).unwrap(),
            Axis::unit(SweepParam::Eta, 2).unwrap(),
            FixedParams::default(),
        )
        .unwrap();
        assert!(fidelity_sweep(&spec).is_err());
        assert!(SweepSpec::new(
            Axis::unit(SweepParam::Eta, 2).unwrap(),
            Axis::unit(SweepParam::Eta, 2).unwrap(),
            FixedParams::default()
        )
        .is_err());
    }

    #[test]
    fn coefficient_report() {
        let r = CoefficientReport::compute(2, 0.6, 0.3, true).unwrap();
        assert!((r.signal - 0.7817).abs() < 1e-4);
        assert!((r.single_use - 0.6).abs() < 1e-15);
        let csv = r.to_csv();
        assert!(csv.starts_with("component,magnitude\nsignal,0.781705627485\n"));
        assert!(csv.contains("aux_1,") && csv.contains("env_2,") && csv.contains("memory,"));
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["flips"], Value::Bool(true));
        assert!((json["signal"].as_f64().unwrap() - 0.781705627485).abs() < 1e-15);
        let lossless = CoefficientReport::compute(4, 1.0, 0.5, false).unwrap();
        assert!((lossless.signal - 1.0).abs() < 1e-12);
        assert!(lossless
            .aux
            .iter()
            .chain(&lossless.env)
            .all(|v| v.abs() < 1e-12));
        assert!(CoefficientReport::compute(3, 0.5, 0.5, true).is_err());
    }
}
