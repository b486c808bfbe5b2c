//! Plane-wave mode functions on a periodic one-dimensional domain.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::C64;

/// Monochromatic comb `φ_j(x) = e^{i k_j x}/√L` with
/// `k_j = 2π(j₀ + j·Δ)/L`. Each mode slot carries an explicit comb index, so
/// a reordered basis is just a relabeling of slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    length: f64,
    comb_indices: Vec<f64>,
}

impl ModeBasis {
    pub fn comb(num_modes: usize, length: f64, offset: f64, spacing: f64) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::NoModes);
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("domain length {length} must be positive")));
        }
        Ok(ModeBasis {
            length,
            comb_indices: (0..num_modes).map(|j| offset + j as f64 * spacing).collect(),
        })
    }

    /// `L = 1`, `j₀ = 0`, `Δ = 1`.
    pub fn unit_comb(num_modes: usize) -> Self {
        Self::comb(num_modes, 1.0, 0.0, 1.0).expect("valid defaults")
    }

    pub fn num_modes(&self) -> usize {
        self.comb_indices.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn wavenumber(&self, mode: usize) -> f64 {
        TAU * self.comb_indices[mode] / self.length
    }

    pub fn max_wavenumber(&self) -> f64 {
        (0..self.num_modes()).map(|m| self.wavenumber(m).abs()).fold(0.0, f64::max)
    }

    pub fn value(&self, mode: usize, x: f64) -> C64 {
        C64::from_polar(1.0 / self.length.sqrt(), self.wavenumber(mode) * x)
    }

    /// `[φ_0(x), …, φ_{N−1}(x)]`
    pub fn values(&self, x: f64) -> Vec<C64> {
        (0..self.num_modes()).map(|m| self.value(m, x)).collect()
    }

    /// Slot `p` of the result carries the mode function of slot `order[p]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.num_modes() {
            return Err(Error::LengthMismatch { expected: self.num_modes(), got: order.len() });
        }
        crate::permutation::PermutationSpec::explicit(order.to_vec())?;
        Ok(ModeBasis {
            length: self.length,
            comb_indices: order.iter().map(|&m| self.comb_indices[m]).collect(),
        })
    }

    /// Midpoint-rule overlap `∫₀ᴸ φ_i* φ_j dx` on `samples` points, which is
    /// exact for comb modes when `samples` exceeds the index spread.
    pub fn overlap(&self, i: usize, j: usize, samples: usize) -> C64 {
        let h = self.length / samples as f64;
        (0..samples)
            .map(|s| {
                let x = (s as f64 + 0.5) * h;
                self.value(i, x).conj() * self.value(j, x) * h
            })
            .sum()
    }

    /// `grid_size` equally spaced points `a·L/grid_size` covering `[0, L)`.
    pub fn grid(&self, grid_size: usize) -> Vec<f64> {
        (0..grid_size).map(|a| a as f64 * self.length / grid_size as f64).collect()
    }
}

/// Arguments of `Γ^{(n)}(x₁,…,x_n, y_n,…,y₁)`. Both `xs` and `ys` are stored
/// in index order `1..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointTuple {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PointTuple {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { expected: xs.len(), got: ys.len() });
        }
        if xs.is_empty() {
            return Err(Error::InvalidArgument("correlator order must be at least 1".into()));
        }
        Ok(PointTuple { xs, ys })
    }

    /// `Γ^{(1)}(x, y)`
    pub fn first(x: f64, y: f64) -> Self {
        PointTuple { xs: vec![x], ys: vec![y] }
    }

    /// Intensity-type tuple with `y_i = x_i`, e.g. `Γ^{(2)}(x,y,y,x)` for `[x, y]`.
    pub fn diagonal(xs: Vec<f64>) -> Self {
        PointTuple { ys: xs.clone(), xs }
    }

    pub fn order(&self) -> usize {
        self.xs.len()
    }

    pub fn within(&self, length: f64) -> bool {
        self.xs.iter().chain(&self.ys).all(|&p| (0.0..length).contains(&p))
    }
}
