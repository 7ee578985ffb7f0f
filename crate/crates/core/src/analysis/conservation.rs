use serde::Serialize;

/// Time series of conserved quantities along a trajectory.
#[derive(Clone, Debug, Default)]
pub struct ConservationMonitor {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub momentum: Vec<[f64; 2]>,
    pub angular_momentum: Vec<f64>,
    pub hamiltonian: Vec<f64>,
}

/// Largest relative deviation from the initial value of each quantity.
/// Absent series report `None`.
#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq)]
pub struct DriftReport {
    pub energy: Option<f64>,
    pub momentum: Option<f64>,
    pub angular_momentum: Option<f64>,
    pub hamiltonian: Option<f64>,
}

impl ConservationMonitor {
    pub fn record_lab(&mut self, t: f64, energy: f64, momentum: [f64; 2], angular: f64) {
        self.times.push(t);
        self.energy.push(energy);
        self.momentum.push(momentum);
        self.angular_momentum.push(angular);
    }

    pub fn record_reduced(&mut self, t: f64, hamiltonian: f64) {
        if self.times.len() == self.hamiltonian.len() {
            self.times.push(t);
        }
        self.hamiltonian.push(hamiltonian);
    }

    pub fn drift(&self) -> DriftReport {
        let mom: Vec<f64> = self.momentum.iter().map(|p| p[0]).collect();
        let mom2: Vec<f64> = self.momentum.iter().map(|p| p[1]).collect();
        DriftReport {
            energy: relative_drift(&self.energy),
            momentum: vector_drift(&mom, &mom2),
            angular_momentum: relative_drift(&self.angular_momentum),
            hamiltonian: relative_drift(&self.hamiltonian),
        }
    }
}

/// max_t |Q(t) - Q(0)| / |Q(0)|. When Q(0) = 0 the absolute drift is
/// returned.
pub fn relative_drift(series: &[f64]) -> Option<f64> {
    let q0 = *series.first()?;
    let dev = series.iter().fold(0.0f64, |m, q| m.max((q - q0).abs()));
    Some(if q0 == 0.0 { dev } else { dev / q0.abs() })
}

fn vector_drift(x: &[f64], y: &[f64]) -> Option<f64> {
    let (x0, y0) = (*x.first()?, *y.first()?);
    let dev = x
        .iter()
        .zip(y)
        .fold(0.0f64, |m, (a, b)| m.max((a - x0).hypot(b - y0)));
    let n0 = x0.hypot(y0);
    Some(if n0 == 0.0 { dev } else { dev / n0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_of_constant_series_is_zero() {
        assert_eq!(relative_drift(&[2.0, 2.0, 2.0]), Some(0.0));
        assert_eq!(relative_drift(&[]), None);
        assert_eq!(relative_drift(&[2.0, 2.5, 1.0]), Some(0.5));
        assert_eq!(relative_drift(&[0.0, 1e-3]), Some(1e-3));
    }

    #[test]
    fn vector_drift_uses_euclidean_norm() {
        let mut m = ConservationMonitor::default();
        m.record_lab(0.0, 1.0, [3.0, 4.0], 1.0);
        m.record_lab(1.0, 1.0, [3.3, 4.4], 1.0);
        let d = m.drift();
        assert!((d.momentum.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(d.hamiltonian, None);
    }
}
