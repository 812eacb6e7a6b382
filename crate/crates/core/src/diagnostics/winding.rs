use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::kernels::WienerPlusFunction;
use crate::scalar::{cabs, carg, Cplx, Real};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Winding of a determinant curve around zero along the imaginary axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub min_abs_det: f64,
    /// Largest phase increment between consecutive points, in radians.
    pub max_phase_step: f64,
    pub reliable: bool,
}

/// Winding number of `values` (ordered by increasing frequency), closed
/// through `1` at both ends of the axis.
pub fn winding_number<T: Real>(values: &[Cplx<T>]) -> WindingResult {
    let one = Complex::new(T::one(), T::zero());
    let mut total = 0.0f64;
    let mut max_step = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let mut prev = one;
    for z in values.iter().chain(std::iter::once(&one)) {
        let step = carg(*z * prev.conj()).as_f64();
        total += step;
        max_step = max_step.max(step.abs());
        prev = *z;
    }
    for z in values {
        min_abs = min_abs.min(cabs(*z).as_f64());
    }
    let winding = (total / std::f64::consts::TAU).round() as i64;
    WindingResult {
        winding,
        min_abs_det: min_abs,
        max_phase_step: max_step,
        reliable: max_step < std::f64::consts::FRAC_PI_2 && min_abs > 0.0,
    }
}

/// Winding of `det Y(i w)` over the grid.
pub fn winding_det_y<T: Real>(y: &WienerPlusFunction<T>, freq: &FrequencyGrid<T>) -> Result<WindingResult> {
    let dets = freq
        .omegas()
        .iter()
        .map(|w| Ok(y.eval_axis(*w)?.determinant()))
        .collect::<Result<Vec<_>>>()?;
    Ok(winding_number(&dets))
}
