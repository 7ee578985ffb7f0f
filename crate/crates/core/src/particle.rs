//! Mechanical parameters of the extended particle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kinematics {
    Nonrelativistic,
    Relativistic,
}

impl fmt::Display for Kinematics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kinematics::Nonrelativistic => "nonrelativistic",
            Kinematics::Relativistic => "relativistic",
        })
    }
}

impl FromStr for Kinematics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonrelativistic" => Ok(Kinematics::Nonrelativistic),
            "relativistic" => Ok(Kinematics::Relativistic),
            _ => Err(Error::config(
                "particle.kind",
                format!("unknown kind {s:?}"),
            )),
        }
    }
}

/// Mass, moment of inertia and kinematics of the particle. The rotational
/// part is nonrelativistic in both cases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Particle {
    pub kinematics: Kinematics,
    pub mass: f64,
    pub inertia: f64,
}

impl Particle {
    pub fn new(kinematics: Kinematics, mass: f64, inertia: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::config(
                "particle.m",
                format!("must be positive, got {mass}"),
            ));
        }
        if !(inertia.is_finite() && inertia > 0.0) {
            return Err(Error::config(
                "particle.I",
                format!("must be positive, got {inertia}"),
            ));
        }
        Ok(Particle {
            kinematics,
            mass,
            inertia,
        })
    }

    pub fn nonrelativistic(mass: f64, inertia: f64) -> Self {
        Self::new(Kinematics::Nonrelativistic, mass, inertia).expect("invalid particle")
    }

    pub fn relativistic(mass: f64, inertia: f64) -> Self {
        Self::new(Kinematics::Relativistic, mass, inertia).expect("invalid particle")
    }

    /// Velocity from kinetic momentum.
    pub fn velocity(&self, p: [f64; 2]) -> [f64; 2] {
        let d = match self.kinematics {
            Kinematics::Nonrelativistic => self.mass,
            Kinematics::Relativistic => (self.mass * self.mass + p[0] * p[0] + p[1] * p[1]).sqrt(),
        };
        [p[0] / d, p[1] / d]
    }

    /// Kinetic energy as a function of kinetic momentum. The relativistic
    /// value includes the rest energy.
    pub fn kinetic_energy(&self, p: [f64; 2]) -> f64 {
        let p2 = p[0] * p[0] + p[1] * p[1];
        match self.kinematics {
            Kinematics::Nonrelativistic => p2 / (2.0 * self.mass),
            Kinematics::Relativistic => (self.mass * self.mass + p2).sqrt(),
        }
    }

    /// T(p + dp) - T(p), evaluated without subtracting the two energies.
    pub fn kinetic_energy_increment(&self, p: [f64; 2], dp: [f64; 2]) -> f64 {
        let num = dp[0] * (2.0 * p[0] + dp[0]) + dp[1] * (2.0 * p[1] + dp[1]);
        match self.kinematics {
            Kinematics::Nonrelativistic => num / (2.0 * self.mass),
            Kinematics::Relativistic => {
                let p1 = [p[0] + dp[0], p[1] + dp[1]];
                num / (self.kinetic_energy(p) + self.kinetic_energy(p1))
            }
        }
    }

    /// Kinetic momentum of a particle moving with velocity v.
    pub fn kinetic_momentum(&self, v: [f64; 2]) -> [f64; 2] {
        let g = self.gamma(v);
        [g * self.mass * v[0], g * self.mass * v[1]]
    }

    /// ∂p_j/∂v_l of [`Particle::kinetic_momentum`].
    pub fn kinetic_jacobian(&self, v: [f64; 2]) -> [[f64; 2]; 2] {
        let m = self.mass;
        match self.kinematics {
            Kinematics::Nonrelativistic => [[m, 0.0], [0.0, m]],
            Kinematics::Relativistic => {
                let g = self.gamma(v);
                let g3 = g * g * g;
                [
                    [g * m + g3 * m * v[0] * v[0], g3 * m * v[0] * v[1]],
                    [g3 * m * v[1] * v[0], g * m + g3 * m * v[1] * v[1]],
                ]
            }
        }
    }

    fn gamma(&self, v: [f64; 2]) -> f64 {
        match self.kinematics {
            Kinematics::Nonrelativistic => 1.0,
            Kinematics::Relativistic => 1.0 / (1.0 - v[0] * v[0] - v[1] * v[1]).sqrt(),
        }
    }
}
