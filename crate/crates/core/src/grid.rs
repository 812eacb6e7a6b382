//! Uniform time grids on the half line and symmetric frequency grids on the
//! imaginary axis.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Uniform grid on `[0, T]` with nodes `t_j = j h`, `j = 0..N`.
///
/// Discretized operators act on the cell midpoints `(j + 1/2) h` of the same
/// grid (see [`Placement::Cells`]); kernels are read at node lags.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid<T> {
    step: T,
    count: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(step: T, count: usize) -> Result<Self> {
        if !(step.is_finite_value() && step > T::zero()) {
            return Err(Error::InvalidGrid(format!("step must be positive and finite, got {step}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {count}")));
        }
        Ok(Self { step, count })
    }

    /// Grid with step `h` whose horizon is the smallest multiple of `h` not
    /// below `horizon` (up to rounding noise).
    pub fn from_horizon(step: T, horizon: T) -> Result<Self> {
        if !(horizon.is_finite_value() && horizon > T::zero()) {
            return Err(Error::InvalidGrid(format!("horizon must be positive, got {horizon}")));
        }
        if !(step.is_finite_value() && step > T::zero()) {
            return Err(Error::InvalidGrid(format!("step must be positive and finite, got {step}")));
        }
        let cells = (horizon / step).as_f64();
        let cells = (cells - 1e-9).ceil().max(1.0) as usize;
        Self::new(step, cells + 1)
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn horizon(&self) -> T {
        self.step * T::from_usize_lossy(self.count - 1)
    }

    /// Same horizon, half the step.
    pub fn refined(&self) -> Self {
        Self { step: self.step * T::lit(0.5), count: 2 * self.count - 1 }
    }

    #[inline]
    pub fn node(&self, j: usize) -> T {
        self.step * T::from_usize_lossy(j)
    }

    #[inline]
    pub fn time(&self, placement: Placement, j: usize) -> T {
        self.step * (T::from_usize_lossy(j) + placement.offset::<T>())
    }

    pub fn times(&self, placement: Placement) -> Vec<T> {
        (0..self.count).map(|j| self.time(placement, j)).collect()
    }
}

/// Where samples sit relative to the grid nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// `t_j = j h`
    Nodes,
    /// `t_j = (j + 1/2) h`
    Cells,
}

impl Placement {
    #[inline]
    pub fn offset<T: Real>(self) -> T {
        match self {
            Placement::Nodes => T::zero(),
            Placement::Cells => T::lit(0.5),
        }
    }
}

/// Sorted, symmetric list of real frequencies containing 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid<T> {
    omegas: Vec<T>,
}

impl<T: Real> FrequencyGrid<T> {
    /// `count` equispaced points on `[-omega_max, omega_max]`; `count` must be odd.
    pub fn uniform(omega_max: T, count: usize) -> Result<Self> {
        if !(omega_max.is_finite_value() && omega_max > T::zero()) {
            return Err(Error::InvalidFrequencyGrid(format!("omega_max must be positive, got {omega_max}")));
        }
        if count < 3 || count.is_multiple_of(2) {
            return Err(Error::InvalidFrequencyGrid(format!("count must be odd and >= 3, got {count}")));
        }
        let half = (count - 1) / 2;
        let d = omega_max / T::from_usize_lossy(half);
        let omegas = (0..count)
            .map(|k| {
                if k == half {
                    T::zero()
                } else if k == 0 {
                    -omega_max
                } else if k == count - 1 {
                    omega_max
                } else {
                    d * (T::from_usize_lossy(k) - T::from_usize_lossy(half))
                }
            })
            .collect();
        Ok(Self { omegas })
    }

    pub fn from_values(omegas: Vec<T>) -> Result<Self> {
        let n = omegas.len();
        if n < 3 {
            return Err(Error::InvalidFrequencyGrid("need at least 3 points".into()));
        }
        if omegas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidFrequencyGrid("values must be strictly increasing".into()));
        }
        let scale = omegas[n - 1].abs();
        let tol = scale * T::lit(1e-12);
        for k in 0..n {
            if (omegas[k] + omegas[n - 1 - k]).abs() > tol {
                return Err(Error::InvalidFrequencyGrid("grid must be symmetric about 0".into()));
            }
        }
        if !omegas.iter().any(|w| *w == T::zero()) {
            return Err(Error::InvalidFrequencyGrid("grid must contain 0".into()));
        }
        Ok(Self { omegas })
    }

    pub fn omegas(&self) -> &[T] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omega_max(&self) -> T {
        *self.omegas.last().expect("non-empty grid")
    }

    pub fn max_spacing(&self) -> T {
        self.omegas
            .windows(2)
            .fold(T::zero(), |acc, w| acc.max(w[1] - w[0]))
    }

    /// Trapezoid weights on the (possibly non-uniform) grid.
    pub fn trapezoid_weights(&self) -> Vec<T> {
        let n = self.omegas.len();
        let half = T::lit(0.5);
        (0..n)
            .map(|k| {
                let left = if k > 0 { self.omegas[k] - self.omegas[k - 1] } else { T::zero() };
                let right = if k + 1 < n { self.omegas[k + 1] - self.omegas[k] } else { T::zero() };
                (left + right) * half
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::<f64>::new(0.0, 10).is_err());
        assert!(TimeGrid::<f64>::new(0.1, 1).is_err());
        let g = TimeGrid::<f64>::from_horizon(0.01, 30.0).unwrap();
        assert_eq!(g.count(), 3001);
        assert!((g.horizon() - 30.0).abs() < 1e-12);
        assert_eq!(g.refined().count(), 6001);
        assert!((g.time(Placement::Cells, 0) - 0.005).abs() < 1e-15);
    }

    #[test]
    fn frequency_grid_is_symmetric_with_zero() {
        let f = FrequencyGrid::<f64>::uniform(50.0, 2001).unwrap();
        assert_eq!(f.len(), 2001);
        assert_eq!(f.omegas()[1000], 0.0);
        assert_eq!(f.omegas()[0], -50.0);
        assert!((f.max_spacing() - 0.05).abs() < 1e-12);
        assert!(FrequencyGrid::<f64>::uniform(50.0, 2000).is_err());
        assert!(FrequencyGrid::from_values(vec![-1.0, 0.0, 2.0]).is_err());
        assert!(FrequencyGrid::from_values(vec![-1.0, 1.0, 2.0]).is_err());
        let w: f64 = f.trapezoid_weights().iter().sum();
        assert!((w - 100.0).abs() < 1e-9);
    }
}
