//! Timing models for a race between early computers and a photonic sampler,
//! and the count-rate scaling model for larger photon numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permanent::ryser_op_counts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineSpec {
    pub name: String,
    #[serde(rename = "adds_per_s")]
    pub additions_per_second: f64,
    #[serde(rename = "mults_per_s")]
    pub multiplications_per_second: f64,
}

impl MachineSpec {
    pub fn new(name: impl Into<String>, adds_per_s: f64, mults_per_s: f64) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            additions_per_second: adds_per_s,
            multiplications_per_second: mults_per_s,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !ok(self.additions_per_second) || !ok(self.multiplications_per_second) {
            return Err(Error::Domain(format!(
                "machine {:?} needs positive finite rates",
                self.name
            )));
        }
        Ok(())
    }

    /// 5000 additions or 357 multiplications per second.
    pub fn eniac() -> Self {
        Self::new("ENIAC", 5000.0, 357.0).unwrap()
    }

    /// 62500 additions or 3333 multiplications per second.
    pub fn tradic() -> Self {
        Self::new("TRADIC", 62500.0, 3333.0).unwrap()
    }

    pub fn builtin() -> Vec<Self> {
        vec![Self::eniac(), Self::tradic()]
    }

    /// Parses a registry: `[{"name": ..., "adds_per_s": ..., "mults_per_s": ...}, ...]`.
    pub fn registry_from_json(text: &str) -> Result<Vec<Self>> {
        let machines: Vec<Self> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        machines.iter().try_for_each(Self::validate)?;
        Ok(machines)
    }

    fn millis(&self, mults: f64, adds: f64) -> f64 {
        1000.0 * (mults / self.multiplications_per_second + adds / self.additions_per_second)
    }
}

/// Milliseconds for one exact permanent via Ryser's formula.
pub fn ryser_time_ms(machine: &MachineSpec, n: usize) -> Result<f64> {
    let ops = ryser_op_counts(n)?;
    Ok(machine.millis(ops.multiplications as f64, ops.additions as f64))
}

/// Milliseconds for one additive-error-`epsilon` permanent via the sign-pattern
/// estimator: `1/epsilon^2` samples (unrounded), each costing `n`
/// multiplications and `n^2` additions.
pub fn gurvits_time_ms(machine: &MachineSpec, n: usize, epsilon: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("photon number must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let samples = 1.0 / (epsilon * epsilon);
    let n = n as f64;
    Ok(samples * machine.millis(n, n * n))
}

/// Milliseconds per recorded event.
pub fn quantum_sample_time_ms(event_count: u64, duration_s: f64) -> Result<f64> {
    if event_count == 0 || duration_s.is_nan() || duration_s <= 0.0 {
        return Err(Error::Domain(format!(
            "need positive events and duration, got {event_count} events in {duration_s} s"
        )));
    }
    Ok(1000.0 * duration_s / event_count as f64)
}

/// Estimated fraction of collision-free outcomes, `C(m, n) / C(m + n - 1, n)`.
pub fn no_collision_ratio(m: usize, n: usize) -> Result<f64> {
    if n == 0 || n > m {
        return Err(Error::Domain(format!("need 1 <= n <= m, got m={m}, n={n}")));
    }
    // product form avoids overflow for large m: prod_{k<n} (m - k) / (m + k)
    Ok((0..n).map(|k| (m - k) as f64 / (m + k) as f64).product())
}

/// Source, circuit and detector parameters of the count-rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Pump repetition rate, pulses per second.
    pub r_pump: f64,
    pub eta_qd: f64,
    pub eta_de: f64,
    pub eta_c: f64,
    pub eta_det: f64,
    pub m: usize,
    pub n: usize,
}

impl RateParams {
    /// Parameters of the nine-mode experiment.
    pub fn experiment(n: usize) -> Self {
        Self {
            r_pump: 76e6,
            eta_qd: 0.338,
            eta_de: 0.845,
            eta_c: 0.905,
            eta_det: 0.32,
            m: 9,
            n,
        }
    }

    /// Improved source brightness and superconducting detectors on a
    /// `4n`-mode circuit.
    pub fn upgraded(n: usize) -> Self {
        Self {
            eta_qd: 0.37,
            eta_det: 0.95,
            m: 4 * n,
            ..Self::experiment(n)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let effs = [
            ("eta_qd", self.eta_qd),
            ("eta_de", self.eta_de),
            ("eta_c", self.eta_c),
            ("eta_det", self.eta_det),
        ];
        for (name, v) in effs {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if !(self.r_pump > 0.0 && self.r_pump.is_finite()) {
            return Err(Error::Domain(format!(
                "pump rate {} must be positive",
                self.r_pump
            )));
        }
        if self.n == 0 || self.n > self.m {
            return Err(Error::Domain(format!(
                "need 1 <= n <= m, got m={}, n={}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// `CR(n) = R_pump / n * (eta_QD eta_de eta_C eta_det)^n * S(m, n)`, events per second.
pub fn expected_count_rate(params: &RateParams) -> Result<f64> {
    params.validate()?;
    let eta = params.eta_qd * params.eta_de * params.eta_c * params.eta_det;
    let s = no_collision_ratio(params.m, params.n)?;
    Ok(params.r_pump / params.n as f64 * eta.powi(params.n as i32) * s)
}

/// Half-up rounding to one decimal place, as displayed in the race table.
pub fn round_display(x: f64) -> f64 {
    (x * 10.0 + 0.5).floor() / 10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Ryser,
    Gurvits,
    Quantum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceRow {
    pub label: String,
    pub kind: RowKind,
    /// Unrounded milliseconds, one per photon number.
    pub values_ms: Vec<f64>,
}

/// Milliseconds to one permanent (classical rows) or one sample (quantum row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceTable {
    pub photon_numbers: Vec<usize>,
    pub rows: Vec<RaceRow>,
}

/// Recorded events and accumulation time of one quantum run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumRun {
    pub events: u64,
    pub duration_s: f64,
}

/// Inputs of the reference race: both machines, the three recorded runs,
/// and the additive errors of the three experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceInputs {
    pub machines: Vec<MachineSpec>,
    pub quantum: Vec<QuantumRun>,
    pub photon_numbers: Vec<usize>,
    pub epsilons: Vec<f64>,
}

impl Default for RaceInputs {
    fn default() -> Self {
        Self {
            machines: MachineSpec::builtin(),
            quantum: vec![
                QuantumRun {
                    events: 446_084,
                    duration_s: 90.0,
                },
                QuantumRun {
                    events: 36_261,
                    duration_s: 240.0,
                },
                QuantumRun {
                    events: 11_660,
                    duration_s: 2900.0,
                },
            ],
            photon_numbers: vec![3, 4, 5],
            epsilons: vec![0.052, 0.065, 0.041],
        }
    }
}

/// For each machine a Ryser row and a Gurvits row, then the quantum row.
/// An empty `quantum` list omits the quantum row.
pub fn race_table(inputs: &RaceInputs) -> Result<RaceTable> {
    let cols = inputs.photon_numbers.len();
    if inputs.epsilons.len() != cols {
        return Err(Error::Alignment(format!(
            "{} photon numbers but {} epsilons",
            cols,
            inputs.epsilons.len()
        )));
    }
    if !inputs.quantum.is_empty() && inputs.quantum.len() != cols {
        return Err(Error::Alignment(format!(
            "{} photon numbers but {} quantum runs",
            cols,
            inputs.quantum.len()
        )));
    }
    let mut rows = Vec::new();
    for machine in &inputs.machines {
        machine.validate()?;
        let ryser = inputs
            .photon_numbers
            .iter()
            .map(|&n| ryser_time_ms(machine, n))
            .collect::<Result<Vec<_>>>()?;
        let gurvits = inputs
            .photon_numbers
            .iter()
            .zip(&inputs.epsilons)
            .map(|(&n, &eps)| gurvits_time_ms(machine, n, eps))
            .collect::<Result<Vec<_>>>()?;
        rows.push(RaceRow {
            label: format!("{} (Ryser)", machine.name),
            kind: RowKind::Ryser,
            values_ms: ryser,
        });
        rows.push(RaceRow {
            label: format!("{} (Gurvits)", machine.name),
            kind: RowKind::Gurvits,
            values_ms: gurvits,
        });
    }
    if !inputs.quantum.is_empty() {
        let values_ms = inputs
            .quantum
            .iter()
            .map(|q| quantum_sample_time_ms(q.events, q.duration_s))
            .collect::<Result<Vec<_>>>()?;
        rows.push(RaceRow {
            label: "Quantum sampler".into(),
            kind: RowKind::Quantum,
            values_ms,
        });
    }
    Ok(RaceTable {
        photon_numbers: inputs.photon_numbers.clone(),
        rows,
    })
}

impl RaceTable {
    /// Rounded table, one row per line, milliseconds to one decimal.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row");
        for n in &self.photon_numbers {
            s.push_str(&format!(",{n}-photon"));
        }
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.label);
            for v in &row.values_ms {
                s.push_str(&format!(",{:.1}", round_display(*v)));
            }
            s.push('\n');
        }
        s
    }

    pub fn row(&self, label: &str) -> Option<&RaceRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::binomial;

    #[test]
    fn ryser_cells() {
        let e = MachineSpec::eniac();
        let t = MachineSpec::tradic();
        assert!((ryser_time_ms(&e, 3).unwrap() - 44.0).abs() <= 0.05);
        assert!((ryser_time_ms(&e, 5).unwrap() - 383.3).abs() <= 0.05);
        assert!((ryser_time_ms(&t, 4).unwrap() - 14.6).abs() <= 0.05);
        assert!(ryser_time_ms(&e, 1).is_err());
    }

    #[test]
    fn gurvits_cells() {
        let e = MachineSpec::eniac();
        let t = MachineSpec::tradic();
        assert!((gurvits_time_ms(&e, 3, 0.052).unwrap() - 3773.4).abs() <= 0.5);
        assert!((gurvits_time_ms(&e, 4, 0.065).unwrap() - 3409.3).abs() <= 0.5);
        assert!((gurvits_time_ms(&t, 5, 0.041).unwrap() - 1130.4).abs() <= 0.5);
        assert!(gurvits_time_ms(&e, 3, 0.0).is_err());
        assert!(gurvits_time_ms(&e, 3, -0.1).is_err());
    }

    #[test]
    fn quantum_cells() {
        assert_eq!(
            round_display(quantum_sample_time_ms(446_084, 90.0).unwrap()),
            0.2
        );
        assert_eq!(
            round_display(quantum_sample_time_ms(36_261, 240.0).unwrap()),
            6.6
        );
        assert_eq!(
            round_display(quantum_sample_time_ms(11_660, 2900.0).unwrap()),
            248.7
        );
        assert!(quantum_sample_time_ms(0, 1.0).is_err());
        assert!(quantum_sample_time_ms(1, 0.0).is_err());
    }

    #[test]
    fn collision_free_ratio() {
        assert!((no_collision_ratio(9, 3).unwrap() - 84.0 / 165.0).abs() < 1e-15);
        assert!((no_collision_ratio(9, 5).unwrap() - 126.0 / 1287.0).abs() < 1e-15);
        assert_eq!(no_collision_ratio(7, 1).unwrap(), 1.0);
        assert!(no_collision_ratio(3, 4).is_err());
        let via_binomials = binomial(48, 12) / binomial(59, 12);
        assert!((no_collision_ratio(48, 12).unwrap() / via_binomials - 1.0).abs() < 1e-12);
    }

    #[test]
    fn count_rate_edges() {
        let mut p = RateParams::experiment(3);
        p.eta_det = 0.0;
        assert_eq!(expected_count_rate(&p).unwrap(), 0.0);
        p.eta_det = 1.2;
        assert!(expected_count_rate(&p).is_err());
        let base = RateParams::experiment(3);
        let doubled = RateParams {
            eta_qd: 2.0 * base.eta_qd,
            ..base
        };
        let ratio = expected_count_rate(&doubled).unwrap() / expected_count_rate(&base).unwrap();
        assert!((ratio - 8.0).abs() < 1e-12);
    }

    #[test]
    fn table_shapes() {
        let t = race_table(&RaceInputs::default()).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows.iter().all(|r| r.values_ms.len() == 3));

        let single = RaceInputs {
            machines: vec![MachineSpec::eniac()],
            quantum: vec![QuantumRun {
                events: 446_084,
                duration_s: 90.0,
            }],
            photon_numbers: vec![3],
            epsilons: vec![0.052],
        };
        let t = race_table(&single).unwrap();
        let flat: Vec<f64> = t.rows.iter().map(|r| r.values_ms[0]).collect();
        assert_eq!(
            flat,
            vec![
                ryser_time_ms(&MachineSpec::eniac(), 3).unwrap(),
                gurvits_time_ms(&MachineSpec::eniac(), 3, 0.052).unwrap(),
                quantum_sample_time_ms(446_084, 90.0).unwrap(),
            ]
        );

        let quantum_only = RaceInputs {
            machines: vec![],
            ..RaceInputs::default()
        };
        let t = race_table(&quantum_only).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].kind, RowKind::Quantum);

        let bad = RaceInputs {
            epsilons: vec![0.05],
            ..RaceInputs::default()
        };
        assert!(matches!(race_table(&bad), Err(Error::Alignment(_))));
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_display(0.25), 0.3);
        assert_eq!(round_display(44.0156), 44.0);
        assert_eq!(round_display(4.5844), 4.6);
    }

    #[test]
    fn registry_parsing() {
        let text = r#"[{"name": "ENIAC", "adds_per_s": 5000, "mults_per_s": 357}]"#;
        assert_eq!(
            MachineSpec::registry_from_json(text).unwrap(),
            vec![MachineSpec::eniac()]
        );
        let bad = r#"[{"name": "X", "adds_per_s": 0, "mults_per_s": 1}]"#;
        assert!(MachineSpec::registry_from_json(bad).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = race_table(&RaceInputs::default()).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "row,3-photon,4-photon,5-photon");
        assert_eq!(lines[1], "ENIAC (Ryser),44.0,140.1,383.3");
        assert_eq!(lines[5], "Quantum sampler,0.2,6.6,248.7");
    }
}
