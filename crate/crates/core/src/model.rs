use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::linspace;
use crate::tolerances::{BETA_GAMMA_TOL, ENDPOINT_DECAY, MIN_GRID_NODES};

/// Coefficients of A_xt = alpha A + beta A B, B_x = -(gamma/2)(|A|^2)_t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for ModelParameters {
    fn default() -> Self {
        ModelParameters { alpha: -1.0, beta: 1.0, gamma: -1.0 }
    }
}

impl ModelParameters {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = ModelParameters { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()) {
            return Err(Error::InvalidInput("model parameters must be finite".into()));
        }
        if (self.beta * self.gamma + 1.0).abs() > BETA_GAMMA_TOL {
            return Err(Error::InvalidInput(format!(
                "beta*gamma = {} but only beta*gamma = -1 is supported",
                self.beta * self.gamma
            )));
        }
        if self.alpha == 0.0 {
            return Err(Error::InvalidInput("alpha must be nonzero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Zero,
    Sech,
    Gauss,
}

impl Profile {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "zero" => Ok(Profile::Zero),
            "sech" => Ok(Profile::Sech),
            "gauss" => Ok(Profile::Gauss),
            other => Err(Error::InvalidInput(format!("unknown profile '{other}'"))),
        }
    }

    pub fn eval(self, c: f64, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            // 2/(e^x + e^-x) without overflowing cosh
            Profile::Sech => {
                let e = (-x.abs()).exp();
                c * 2.0 * e / (1.0 + e * e)
            }
            Profile::Gauss => c * (-x * x).exp(),
        }
    }
}

pub const DEFAULT_AMPLITUDE: f64 = 0.3;

/// Uniformly sampled A(x, 0), B(x, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub x_min: f64,
    pub x_max: f64,
    pub a0: Vec<C64>,
    pub b0: Vec<f64>,
}

impl InitialData {
    pub fn new(x_min: f64, x_max: f64, a0: Vec<C64>, b0: Vec<f64>) -> Result<Self> {
        let d = InitialData { x_min, x_max, a0, b0 };
        d.validate()?;
        Ok(d)
    }

    /// Same checks as `new`, minus the endpoint decay (used for evolved fields).
    pub fn new_unchecked_decay(x_min: f64, x_max: f64, a0: Vec<C64>, b0: Vec<f64>) -> Result<Self> {
        let d = InitialData { x_min, x_max, a0, b0 };
        d.validate_shape()?;
        Ok(d)
    }

    pub fn from_profile(profile: Profile, amplitude: f64, x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 nodes".into()));
        }
        let x = linspace(x_min, x_max, n);
        let a0 = x.iter().map(|&x| C64::new(profile.eval(amplitude, x), 0.0)).collect();
        Self::new(x_min, x_max, a0, vec![0.0; n])
    }

    /// Symmetric grid [-l, l].
    pub fn symmetric(profile: Profile, amplitude: f64, l: f64, n: usize) -> Result<Self> {
        Self::from_profile(profile, amplitude, -l, l, n)
    }

    fn validate_shape(&self) -> Result<()> {
        let n = self.a0.len();
        if n < MIN_GRID_NODES {
            return Err(Error::InvalidInput(format!("grid has {n} nodes, at least {MIN_GRID_NODES} required")));
        }
        if self.b0.len() != n {
            return Err(Error::InvalidInput(format!("A0 has {n} samples but B0 has {}", self.b0.len())));
        }
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::InvalidInput("grid bounds must be finite with min < max".into()));
        }
        if self.a0.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) || self.b0.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("samples must be finite".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let n = self.a0.len();
        for i in [0, n - 1] {
            if self.a0[i].norm() >= ENDPOINT_DECAY || self.b0[i].abs() >= ENDPOINT_DECAY {
                return Err(Error::InvalidInput(format!(
                    "initial data does not decay at the grid end x = {} (|A| = {:e}, |B| = {:e})",
                    self.x(i),
                    self.a0[i].norm(),
                    self.b0[i].abs()
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a0.len()
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.n() - 1 {
            self.x_max
        } else {
            self.x_min + self.h() * i as f64
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.n())
    }

    /// Index of the node closest to x.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.h()).round();
        i.clamp(0.0, (self.n() - 1) as f64) as usize
    }

    /// B0 does not enter the x-part of the Lax pair; nonzero B0 is flagged.
    pub fn b0_nonzero(&self) -> bool {
        self.b0.iter().any(|&b| b != 0.0)
    }

    pub fn max_amplitude(&self) -> f64 {
        self.a0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_checks() {
        assert!(ModelParameters::new(-1.0, 1.0, -1.0).is_ok());
        assert!(ModelParameters::new(-1.0, 2.0, -0.5).is_ok());
        assert!(ModelParameters::new(-1.0, 1.0, 1.0).is_err());
        assert!(ModelParameters::new(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn profiles_and_decay() {
        let d = InitialData::symmetric(Profile::Sech, 0.3, 30.0, 4096).unwrap();
        assert!((d.a0[d.nearest(0.0)].re - 0.3).abs() < 1e-4);
        assert!(InitialData::symmetric(Profile::Sech, 0.3, 5.0, 4096).is_err());
        assert!(InitialData::symmetric(Profile::Gauss, 0.3, 30.0, 100).is_err());
        assert_eq!(Profile::Sech.eval(1.0, 800.0), 0.0);
        assert!(!d.b0_nonzero());
    }
}
