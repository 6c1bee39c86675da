//! Hardware profiles. Times are in seconds; simulations use them as
//! fractions of the coherence time `T_c`.

use logiq::NoiseParams;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceProfile {
    pub name: String,
    pub t_c: f64,
    pub t_1q: f64,
    pub t_2q: f64,
    pub gate_error: f64,
    /// T1 and T2 in units of `T_c`. The coherence time stands for T1 on
    /// superconductors and T2* on quantum dots; the other constant
    /// defaults to `T_c` as well.
    pub t1_over_tc: f64,
    pub t2_over_tc: f64,
}

impl DeviceProfile {
    pub fn superconductor() -> Self {
        Self::new("superconductor", 10e-6, 20e-9, 40e-9)
    }

    pub fn quantum_dot() -> Self {
        Self::new("quantum_dot", 120e-6, 130e-9, 100e-9)
    }

    fn new(name: &str, t_c: f64, t_1q: f64, t_2q: f64) -> Self {
        Self {
            name: name.to_string(),
            t_c,
            t_1q,
            t_2q,
            gate_error: 1e-3,
            t1_over_tc: 1.0,
            t2_over_tc: 1.0,
        }
    }

    pub fn custom(t_c: f64, t_1q: f64, t_2q: f64, gate_error: f64) -> Result<Self> {
        let p = Self {
            gate_error,
            ..Self::new("custom", t_c, t_1q, t_2q)
        };
        p.validate()?;
        Ok(p)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "superconductor" | "sc" => Ok(Self::superconductor()),
            "quantum_dot" | "qd" => Ok(Self::quantum_dot()),
            _ => Err(invalid(format!("unknown profile '{name}' (expected superconductor or quantum_dot)"))),
        }
    }

    pub fn with_gate_error(mut self, p: f64) -> Self {
        self.gate_error = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (k, v) in [("t_c", self.t_c), ("t_1q", self.t_1q), ("t_2q", self.t_2q)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("profile {k} must be > 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.gate_error) {
            return Err(invalid(format!("gate error must lie in [0, 1], got {}", self.gate_error)));
        }
        Ok(())
    }

    pub fn ratio_1q(&self) -> f64 {
        self.t_1q / self.t_c
    }

    pub fn ratio_2q(&self) -> f64 {
        self.t_2q / self.t_c
    }

    pub fn noise_params(&self) -> Result<NoiseParams> {
        let mut p = NoiseParams::uniform(self.t1_over_tc, self.t2_over_tc, self.gate_error, self.ratio_1q())?;
        p.gate_time_2q = self.ratio_2q();
        Ok(p.validated()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_come_from_table_values() {
        let sc = DeviceProfile::superconductor();
        assert!((sc.ratio_1q() - 0.002).abs() < 1e-15);
        assert!((sc.ratio_2q() - 0.004).abs() < 1e-15);
        let qd = DeviceProfile::quantum_dot();
        assert!((qd.ratio_1q() - 130.0 / 120_000.0).abs() < 1e-15);
        assert!((qd.ratio_2q() - 100.0 / 120_000.0).abs() < 1e-15);
        assert!((qd.ratio_1q() - 0.00108).abs() < 1e-5);
        assert!((qd.ratio_2q() - 0.00083).abs() < 1e-5);
    }

    #[test]
    fn unknown_and_invalid_profiles() {
        assert!(DeviceProfile::by_name("trapped_ion").is_err());
        assert!(DeviceProfile::custom(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(DeviceProfile::custom(1.0, 1.0, 1.0, 1.5).is_err());
    }
}
