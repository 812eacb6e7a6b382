//! Problem specification: the symbol `G`, the time grid and the frequency
//! grid, as read from JSON.

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::kernels::io::read_samples;
use crate::kernels::{CausalKernel, ExpSum, ExpTerm, WienerPlusFunction};
use crate::matrix::{from_repr, to_repr, MatrixRepr};
use crate::scalar::Real;
use crate::solver::SolverConfig;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    /// `m x p` coefficient, rows of `[re, im]`.
    pub coeff: MatrixRepr,
    /// Decay rate `a` of `e^{-a t}`, `[re, im]` with `re > 0`.
    pub rate: [f64; 2],
}

/// Kernel of `G`: exponential-sum terms, or a CSV sample file whose path is
/// relative to the directory of the specification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Terms(Vec<TermSpec>),
    Samples(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub h: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { h: 0.01, horizon: 30.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreqSpec {
    pub omega_max: f64,
    pub count: usize,
}

impl Default for FreqSpec {
    fn default() -> Self {
        Self { omega_max: 50.0, count: 2001 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Identity-check tolerance; defaults to `max(1e-3, 10 * solver residual)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<f64>,
    /// Relative positivity threshold of the certification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Relative residual of the normal-equation solves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver_rtol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub m: usize,
    pub p: usize,
    #[serde(rename = "D")]
    pub d: MatrixRepr,
    pub kernel: KernelSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub freq: FreqSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a specification; sample paths are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut spec = Self::from_json(&std::fs::read_to_string(path)?)?;
        if let KernelSpec::Samples(rel) = &spec.kernel {
            if rel.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                spec.kernel = KernelSpec::Samples(base.join(rel));
            }
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.p == 0 {
            return Err(Error::DimensionMismatch("m and p must be positive".into()));
        }
        if self.m > self.p {
            return Err(Error::DimensionMismatch(format!("need m <= p, got m = {}, p = {}", self.m, self.p)));
        }
        let d = from_repr::<f64>(&self.d, None)?;
        if d.shape() != (self.m, self.p) {
            return Err(Error::DimensionMismatch(format!("D is {:?}, expected ({}, {})", d.shape(), self.m, self.p)));
        }
        if let KernelSpec::Terms(terms) = &self.kernel {
            self.expsum::<f64>(terms)?;
        }
        self.time_grid::<f64>()?;
        self.freq_grid::<f64>()?;
        for (name, v) in [
            ("identity", self.tolerances.identity),
            ("threshold", self.tolerances.threshold),
            ("solver_rtol", self.tolerances.solver_rtol),
        ] {
            if let Some(x) = v {
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::InvalidParameter(format!("tolerance {name} must be positive, got {x}")));
                }
            }
        }
        Ok(())
    }

    fn expsum<T: Real>(&self, terms: &[TermSpec]) -> Result<ExpSum<T>> {
        let terms = terms
            .iter()
            .map(|t| {
                let coeff = from_repr::<T>(&t.coeff, None)?;
                Ok(ExpTerm { coeff, rate: Complex::new(T::lit(t.rate[0]), T::lit(t.rate[1])) })
            })
            .collect::<Result<Vec<_>>>()?;
        ExpSum::new(self.m, self.p, terms)
    }

    pub fn kernel<T: Real>(&self) -> Result<CausalKernel<T>> {
        match &self.kernel {
            KernelSpec::Terms(terms) => Ok(CausalKernel::from_expsum(self.expsum(terms)?)),
            KernelSpec::Samples(path) => {
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::InvalidKernel(format!("cannot open {}: {e}", path.display())))?;
                let s = read_samples::<T, _>(std::io::BufReader::new(file))?;
                if (s.rows(), s.cols()) != (self.m, self.p) {
                    return Err(Error::DimensionMismatch(format!(
                        "sample file holds {}x{} kernel, expected {}x{}",
                        s.rows(),
                        s.cols(),
                        self.m,
                        self.p
                    )));
                }
                Ok(CausalKernel::from_samples(s))
            }
        }
    }

    pub fn symbol<T: Real>(&self) -> Result<WienerPlusFunction<T>> {
        WienerPlusFunction::new(from_repr(&self.d, Some(self.p))?, self.kernel()?)
    }

    pub fn time_grid<T: Real>(&self) -> Result<TimeGrid<T>> {
        if !(self.grid.h.is_finite() && self.grid.h > 0.0 && self.grid.horizon.is_finite() && self.grid.horizon > 0.0) {
            return Err(Error::InvalidGrid(format!("h = {}, T = {}", self.grid.h, self.grid.horizon)));
        }
        if self.grid.horizon < self.grid.h {
            return Err(Error::InvalidGrid("horizon shorter than one step".into()));
        }
        TimeGrid::from_horizon(T::lit(self.grid.h), T::lit(self.grid.horizon))
    }

    pub fn freq_grid<T: Real>(&self) -> Result<FrequencyGrid<T>> {
        FrequencyGrid::uniform(T::lit(self.freq.omega_max), self.freq.count)
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(t) = self.tolerances.threshold {
            cfg.certify.threshold = t;
        }
        if let Some(r) = self.tolerances.solver_rtol {
            cfg.certify.solve.rtol = r;
        }
        cfg
    }

    /// `G(s) = [1, c / (s + b)]`.
    pub fn worked_family(b: f64, c: f64) -> Self {
        Self {
            m: 1,
            p: 2,
            d: to_repr::<f64>(&crate::matrix::from_real_rows(&[&[1.0, 0.0]])),
            kernel: KernelSpec::Terms(vec![TermSpec { coeff: vec![vec![[0.0, 0.0], [c, 0.0]]], rate: [b, 0.0] }]),
            grid: GridSpec::default(),
            freq: FreqSpec::default(),
            tolerances: Tolerances::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::SPoint;

    const G0: &str = r#"{
        "m": 1, "p": 2,
        "D": [[[1, 0], [0, 0]]],
        "kernel": {"terms": [{"coeff": [[[0, 0], [1, 0]]], "rate": [1, 0]}]}
    }"#;

    #[test]
    fn parses_with_defaults() {
        let spec = ProblemSpec::from_json(G0).unwrap();
        assert_eq!(spec.grid, GridSpec { h: 0.01, horizon: 30.0 });
        assert_eq!(spec.freq, FreqSpec { omega_max: 50.0, count: 2001 });
        assert_eq!(spec, ProblemSpec::worked_family(1.0, 1.0));
        let g = spec.symbol::<f64>().unwrap();
        let v = g.eval(SPoint::axis(0.0)).unwrap();
        assert!((v[(0, 1)].re - 1.0).abs() < 1e-15);
        assert_eq!(spec.time_grid::<f64>().unwrap().count(), 3001);
    }

    #[test]
    fn round_trip() {
        let spec = ProblemSpec::worked_family(2.0, -0.5);
        let back = ProblemSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ProblemSpec::from_json("{").is_err());
        assert!(ProblemSpec::from_json(&G0.replace("\"p\": 2", "\"p\": 3")).is_err());
        assert!(ProblemSpec::from_json(&G0.replace("\"rate\": [1, 0]", "\"rate\": [-1, 0]")).is_err());
        assert!(ProblemSpec::from_json(&G0.replace("\"m\": 1", "\"m\": 1, \"extra\": 1")).is_err());
        let wide = r#"{"m": 2, "p": 1, "D": [[[1, 0]], [[0, 0]]], "kernel": {"terms": []}}"#;
        assert!(matches!(ProblemSpec::from_json(wide), Err(Error::DimensionMismatch(_))));
        let bad_grid = G0.replace("\"kernel\"", "\"grid\": {\"h\": 0, \"T\": 1}, \"kernel\"");
        assert!(matches!(ProblemSpec::from_json(&bad_grid), Err(Error::InvalidGrid(_))));
    }
}
