use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A point of the plane. The slit is the closed negative half-axis `(-inf, 0] x {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }

    /// Mirror image across the horizontal axis.
    pub fn reflect(self) -> Point {
        Point::new(self.x1, -self.x2)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// True when the point lies in the slit domain, i.e. off the slit.
    pub fn in_slit_domain(self) -> bool {
        self.is_finite() && !(self.x2 == 0.0 && self.x1 <= 0.0)
    }

    pub(crate) fn require_in_domain(self, name: &str) -> Result<()> {
        if self.in_slit_domain() {
            Ok(())
        } else {
            Err(domain(format!("{name} = ({}, {}) lies on the slit", self.x1, self.x2)))
        }
    }

    /// Principal square root `(re, im)` of the point viewed as a complex number.
    /// The branch cut is the slit, so `re > 0` everywhere in the domain.
    pub fn principal_sqrt(self) -> (f64, f64) {
        let r = self.norm();
        let re = ((r + self.x1) / 2.0).max(0.0).sqrt();
        let im = ((r - self.x1) / 2.0).max(0.0).sqrt();
        (re, if self.x2 < 0.0 { -im } else { im })
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// Brownian normalization a formula is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// `E B_t^2 = 2t` per coordinate; heat kernel `exp(-|x|^2/4t)/(4 pi t)`.
    Var2T,
    /// Standard Brownian motion, `E B_t^2 = t`; killing at rate `lambda^2/2`.
    Var1T,
}

impl Convention {
    pub fn tag(self) -> &'static str {
        match self {
            Convention::Var2T => "VAR2T",
            Convention::Var1T => "VAR1T",
        }
    }

    /// Variance per unit time per coordinate.
    pub fn sigma2(self) -> f64 {
        match self {
            Convention::Var2T => 2.0,
            Convention::Var1T => 1.0,
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Time and place of the first visit to the slit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitSample {
    pub s: f64,
    pub z: f64,
}
