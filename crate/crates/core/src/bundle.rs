//! Solution bundle on disk: `solution.json` (problem, pointers, diagnostics),
//! `y.csv` (samples of `y`), `traces.csv` (`Xi`, `Theta`, `Y` on the
//! frequency grid) and, for sampled kernels, a copy of the kernel file.

use crate::diagnostics::write_traces;
use crate::error::{Error, Result};
use crate::kernels::io::{read_samples, write_samples};
use crate::kernels::{CausalKernel, ExpSum, ExpTerm};
use crate::matrix::{from_repr, to_repr, MatrixRepr};
use crate::problem::{KernelSpec, ProblemSpec, TermSpec};
use crate::scalar::Real;
use crate::solver::{assemble, BezoutSolution, Pointers, SolverDiagnostics};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

pub const SOLUTION_FILE: &str = "solution.json";
pub const Y_FILE: &str = "y.csv";
pub const TRACES_FILE: &str = "traces.csv";
pub const KERNEL_FILE: &str = "kernel.csv";
const FORMAT: &str = "wiener-bezout-solution";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointersRecord {
    pub d_plus: MatrixRepr,
    /// `p x (p - m)`; empty rows when `p = m`.
    pub e: MatrixRepr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YRecord {
    /// Sample file inside the bundle.
    pub samples: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub format: String,
    pub version: u32,
    pub m: usize,
    pub p: usize,
    pub problem: ProblemSpec,
    pub pointers: PointersRecord,
    pub y: YRecord,
    pub diagnostics: SolverDiagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn terms_record<T: Real>(e: &ExpSum<T>) -> Vec<TermSpec> {
    e.terms()
        .iter()
        .map(|t| TermSpec { coeff: to_repr(&t.coeff), rate: [t.rate.re.as_f64(), t.rate.im.as_f64()] })
        .collect()
}

/// Writes the bundle into `dir` (created if missing).
pub fn write_bundle<T: Real>(dir: &Path, problem: &ProblemSpec, sol: &BezoutSolution<T>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut problem = problem.clone();
    if let KernelSpec::Samples(src) = &problem.kernel {
        let target = dir.join(KERNEL_FILE);
        if fs::canonicalize(src).ok() != fs::canonicalize(&target).ok() {
            fs::copy(src, &target)?;
        }
        problem.kernel = KernelSpec::Samples(PathBuf::from(KERNEL_FILE));
    }
    let ys = sol.y.samples().ok_or_else(|| Error::InvalidKernel("y has no samples".into()))?;
    write_samples(ys, BufWriter::new(fs::File::create(dir.join(Y_FILE))?))?;
    let freq = problem.freq_grid::<T>()?;
    write_traces(sol, &freq, BufWriter::new(fs::File::create(dir.join(TRACES_FILE))?))?;
    let record = SolutionRecord {
        format: FORMAT.into(),
        version: VERSION,
        m: sol.m(),
        p: sol.p(),
        problem,
        pointers: PointersRecord { d_plus: to_repr(&sol.pointers.d_plus), e: to_repr(&sol.pointers.e) },
        y: YRecord { samples: PathBuf::from(Y_FILE), terms: sol.y.expsum().map(terms_record) },
        diagnostics: sol.diagnostics,
        note: sol.is_square().then(|| "square case: Theta has no columns".to_string()),
    };
    fs::write(dir.join(SOLUTION_FILE), crate::json::to_string(&record)?)?;
    Ok(())
}

/// Reads a bundle back; `Xi` and `Theta` are rebuilt from `y` and the stored
/// pointers.
pub fn read_bundle<T: Real>(dir: &Path) -> Result<(ProblemSpec, BezoutSolution<T>)> {
    let path = dir.join(SOLUTION_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let record: SolutionRecord = serde_json::from_str(&text)?;
    if record.format != FORMAT || record.version != VERSION {
        return Err(Error::Format(format!("unsupported bundle format {} v{}", record.format, record.version)));
    }
    let mut problem = record.problem;
    problem.validate()?;
    if let KernelSpec::Samples(rel) = &problem.kernel {
        problem.kernel = KernelSpec::Samples(dir.join(rel));
    }
    let (m, p) = (problem.m, problem.p);
    if (record.m, record.p) != (m, p) {
        return Err(Error::Format("bundle dimensions disagree with its problem".into()));
    }
    let g = problem.symbol::<T>()?;
    let d_plus = from_repr::<T>(&record.pointers.d_plus, Some(m))?;
    let e = from_repr::<T>(&record.pointers.e, Some(p - m))?;
    let e = if e.nrows() == 0 { crate::scalar::CMat::zeros(p, 0) } else { e };
    if d_plus.shape() != (p, m) || e.shape() != (p, p - m) {
        return Err(Error::Format("pointer shapes do not match the problem".into()));
    }
    let file = fs::File::open(dir.join(&record.y.samples))?;
    let samples = read_samples::<T, _>(BufReader::new(file))?;
    let y = match &record.y.terms {
        Some(terms) => {
            let terms = terms
                .iter()
                .map(|t| {
                    Ok(ExpTerm {
                        coeff: from_repr::<T>(&t.coeff, Some(p))?,
                        rate: Complex::new(T::lit(t.rate[0]), T::lit(t.rate[1])),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            CausalKernel::from_parts(samples, ExpSum::new(p, p, terms)?)?
        }
        None => CausalKernel::from_samples(samples),
    };
    let grid = problem.time_grid::<T>()?;
    let sol = assemble(&g, y, Pointers { d_plus, e }, grid, record.diagnostics)?;
    Ok((problem, sol))
}
