//! Scenario descriptions: how a study case's operating point moves with the
//! array size, plus a TOML file format and the built-in case tables.
//!
//! A [`ScenarioCase`] binds power-law schedules for training energy, data
//! SNR, and user count to the fixed network shape (cells, correlation
//! fraction, cross gain) and a pilot-sharing schedule. Instantiating the
//! case at an antenna count yields a concrete [`NetworkConfig`]; the same
//! schedules expose their [`ScalingExponents`] so measured curves can be
//! checked against the predicted growth exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::scaling::{fit_power_decay, ScalingExponents};

/// Default antenna grid for the built-in tables.
pub const DEFAULT_M_GRID: [usize; 6] = [100, 200, 300, 400, 500, 600];

/// Which downlink precoder a case studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precoder {
    /// Maximum-ratio transmission (conjugate beamforming).
    Mrt,
    /// Zero forcing on the in-cell estimates.
    Zf,
}

impl fmt::Display for Precoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precoder::Mrt => "mrt",
            Precoder::Zf => "zf",
        })
    }
}

impl FromStr for Precoder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mrt" => Ok(Precoder::Mrt),
            "zf" => Ok(Precoder::Zf),
            other => Err(Error::Scenario(format!(
                "unknown precoder {other:?}; expected \"mrt\" or \"zf\""
            ))),
        }
    }
}

/// A parameter that follows `coefficient * M^exponent`, optionally floored
/// to an integer (used for user counts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawParam {
    pub coefficient: f64,
    pub exponent: f64,
    pub floor_to_int: bool,
}

impl PowerLawParam {
    pub fn new(coefficient: f64, exponent: f64, floor_to_int: bool) -> Self {
        Self {
            coefficient,
            exponent,
            floor_to_int,
        }
    }

    /// A parameter that ignores `M`.
    pub fn constant(value: f64) -> Self {
        Self::new(value, 0.0, false)
    }

    /// Evaluates the law at an antenna count. Floored parameters must land
    /// at 1 or above; continuous ones must stay positive and finite.
    pub fn evaluate(&self, antennas: usize) -> Result<f64> {
        let m = antennas as f64;
        // Snap the common rational exponents to their exact forms so that
        // e.g. floor(sqrt(400)) can never land on 19 through a stray ulp.
        let e = self.exponent;
        let grown = if e == 0.0 {
            1.0
        } else if e == 1.0 {
            m
        } else if e == -1.0 {
            1.0 / m
        } else if e == 0.5 {
            m.sqrt()
        } else if e == -0.5 {
            1.0 / m.sqrt()
        } else {
            m.powf(e)
        };
        let value = self.coefficient * grown;
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Scenario(format!(
                "parameter {} * M^{} is {value} at M = {antennas}; must be positive",
                self.coefficient, self.exponent
            )));
        }
        if self.floor_to_int {
            let floored = (value + 1e-9).floor();
            if floored < 1.0 {
                return Err(Error::Scenario(format!(
                    "parameter {} * M^{} floors to {floored} at M = {antennas}; must be >= 1",
                    self.coefficient, self.exponent
                )));
            }
            Ok(floored)
        } else {
            Ok(value)
        }
    }
}

/// Pilot-sharing schedule: how many other cells reuse the pilots at each
/// grid point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SharingSchedule {
    /// The same number of sharing cells at every antenna count.
    Constant(usize),
    /// One value per entry of the case's antenna grid.
    PerPoint(Vec<usize>),
}

/// A complete study case: network shape plus parameter schedules over an
/// antenna grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioCase {
    pub case_id: String,
    pub precoder: Precoder,
    /// Total cells in the network (sharing cells + non-sharing + serving).
    pub cells: usize,
    /// Fraction of the antenna dimensions the channel actually occupies.
    pub corr_fraction: f64,
    /// Relative gain of pilot-sharing cross links.
    pub cross_gain: f64,
    /// Training energy schedule.
    pub train_snr: PowerLawParam,
    /// Data SNR schedule.
    pub data_snr: PowerLawParam,
    /// Users-per-cell schedule (floored to integers).
    pub users: PowerLawParam,
    pub sharing: SharingSchedule,
    pub m_grid: Vec<usize>,
}

impl ScenarioCase {
    /// Number of pilot-sharing cells at a grid point.
    pub fn sharing_at(&self, antennas: usize) -> Result<usize> {
        match &self.sharing {
            SharingSchedule::Constant(n) => Ok(*n),
            SharingSchedule::PerPoint(list) => {
                let idx = self.m_grid.iter().position(|&m| m == antennas).ok_or_else(|| {
                    Error::Scenario(format!(
                        "case {}: M = {antennas} is not on the antenna grid {:?}",
                        self.case_id, self.m_grid
                    ))
                })?;
                list.get(idx).copied().ok_or_else(|| {
                    Error::Scenario(format!(
                        "case {}: sharing schedule shorter than the antenna grid",
                        self.case_id
                    ))
                })
            }
        }
    }

    /// Instantiates the case at an antenna count.
    pub fn config_at(&self, antennas: usize) -> Result<NetworkConfig> {
        let users_f = self.users.evaluate(antennas)?;
        if !self.users.floor_to_int && users_f.fract() != 0.0 {
            return Err(Error::Scenario(format!(
                "case {}: user schedule yields non-integer {users_f} at M = {antennas}; \
                 set the floor flag",
                self.case_id
            )));
        }
        NetworkConfig::new(
            self.cells,
            antennas,
            users_f as usize,
            self.corr_fraction,
            self.cross_gain,
            self.sharing_at(antennas)?,
            self.train_snr.evaluate(antennas)?,
            self.data_snr.evaluate(antennas)?,
        )
    }

    /// The trajectory exponents implied by the schedules.
    ///
    /// Training and data SNR must have exponents in `[-1, 0]`, user counts
    /// in `[0, 1]`. A per-point sharing schedule contributes its fitted
    /// decay exponent; a constant nonzero schedule contributes 0 (hard
    /// contamination ceiling).
    pub fn exponents(&self) -> Result<ScalingExponents> {
        let (sharing_decay, contamination_free) = match &self.sharing {
            SharingSchedule::Constant(0) => (0.0, true),
            SharingSchedule::Constant(_) => (0.0, false),
            SharingSchedule::PerPoint(list) => {
                if list.len() != self.m_grid.len() {
                    return Err(Error::Scenario(format!(
                        "case {}: sharing schedule has {} entries for {} grid points",
                        self.case_id,
                        list.len(),
                        self.m_grid.len()
                    )));
                }
                if list.iter().all(|&l| l == 0) {
                    (0.0, true)
                } else if list.iter().any(|&l| l == 0) {
                    return Err(Error::Scenario(format!(
                        "case {}: sharing schedule mixes zero and nonzero entries; \
                         its decay exponent is undefined",
                        self.case_id
                    )));
                } else if list.iter().all(|&l| l == list[0]) {
                    (0.0, false)
                } else {
                    let pts: Vec<(f64, f64)> = self
                        .m_grid
                        .iter()
                        .zip(list)
                        .map(|(&m, &l)| (m as f64, l as f64))
                        .collect();
                    let (_, decay) = fit_power_decay(&pts)?;
                    (decay, false)
                }
            }
        };
        ScalingExponents::new(
            -self.train_snr.exponent,
            self.users.exponent,
            -self.data_snr.exponent,
            sharing_decay,
            contamination_free,
        )
        .map_err(|e| {
            Error::Scenario(format!(
                "case {}: schedules imply out-of-range exponents: {e}",
                self.case_id
            ))
        })
    }

    /// Checks the whole case: grid shape, schedules, and every instantiated
    /// configuration.
    pub fn validate(&self) -> Result<()> {
        if self.m_grid.is_empty() {
            return Err(Error::Scenario(format!(
                "case {}: empty antenna grid",
                self.case_id
            )));
        }
        for w in self.m_grid.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Scenario(format!(
                    "case {}: antenna grid must be strictly increasing",
                    self.case_id
                )));
            }
        }
        if let SharingSchedule::PerPoint(list) = &self.sharing {
            if list.len() != self.m_grid.len() {
                return Err(Error::Scenario(format!(
                    "case {}: sharing schedule has {} entries for {} grid points",
                    self.case_id,
                    list.len(),
                    self.m_grid.len()
                )));
            }
        }
        self.exponents()?;
        for &m in &self.m_grid {
            self.config_at(m).map_err(|e| {
                Error::Scenario(format!("case {} at M = {m}: {e}", self.case_id))
            })?;
        }
        Ok(())
    }

    /// The same case under zero forcing, with a distinguishing id suffix.
    pub fn as_zero_forcing(&self) -> ScenarioCase {
        let mut c = self.clone();
        c.precoder = Precoder::Zf;
        c.case_id = format!("{}-zf", self.case_id);
        c
    }
}

// ---------------------------------------------------------------------------
// TOML file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ScenarioDoc {
    case: BTreeMap<String, CaseDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseDoc {
    precoder: String,
    cells: usize,
    corr: f64,
    cross_gain: f64,
    m_grid: Vec<usize>,
    lp: LpDoc,
    et_coeff: f64,
    et_exp: f64,
    rho_coeff: f64,
    rho_exp: f64,
    k_coeff: f64,
    k_exp: f64,
    k_floor: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LpDoc {
    Constant(usize),
    PerPoint(Vec<usize>),
}

/// Parses a scenario file. Ids are rejected when they collide
/// case-insensitively; unknown keys and malformed values are reported with
/// the parser's line/column diagnostics.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioCase>> {
    let doc: ScenarioDoc =
        toml::from_str(text).map_err(|e| Error::Scenario(format!("scenario parse: {e}")))?;
    let mut seen = std::collections::HashSet::new();
    let mut cases = Vec::with_capacity(doc.case.len());
    for (id, c) in doc.case {
        if !seen.insert(id.to_ascii_lowercase()) {
            return Err(Error::Scenario(format!(
                "case id {id:?} collides with another id (ids are case-insensitive)"
            )));
        }
        let case = ScenarioCase {
            case_id: id,
            precoder: c.precoder.parse()?,
            cells: c.cells,
            corr_fraction: c.corr,
            cross_gain: c.cross_gain,
            train_snr: PowerLawParam::new(c.et_coeff, c.et_exp, false),
            data_snr: PowerLawParam::new(c.rho_coeff, c.rho_exp, false),
            users: PowerLawParam::new(c.k_coeff, c.k_exp, c.k_floor),
            sharing: match c.lp {
                LpDoc::Constant(n) => SharingSchedule::Constant(n),
                LpDoc::PerPoint(v) => SharingSchedule::PerPoint(v),
            },
            m_grid: c.m_grid,
        };
        case.validate()?;
        cases.push(case);
    }
    Ok(cases)
}

/// Emits cases as a scenario file; `parse_scenario` inverts this exactly.
pub fn emit_scenario(cases: &[ScenarioCase]) -> Result<String> {
    let mut map = BTreeMap::new();
    for c in cases {
        let doc = CaseDoc {
            precoder: c.precoder.to_string(),
            cells: c.cells,
            corr: c.corr_fraction,
            cross_gain: c.cross_gain,
            m_grid: c.m_grid.clone(),
            lp: match &c.sharing {
                SharingSchedule::Constant(n) => LpDoc::Constant(*n),
                SharingSchedule::PerPoint(v) => LpDoc::PerPoint(v.clone()),
            },
            et_coeff: c.train_snr.coefficient,
            et_exp: c.train_snr.exponent,
            rho_coeff: c.data_snr.coefficient,
            rho_exp: c.data_snr.exponent,
            k_coeff: c.users.coefficient,
            k_exp: c.users.exponent,
            k_floor: c.users.floor_to_int,
        };
        if map.insert(c.case_id.clone(), doc).is_some() {
            return Err(Error::Scenario(format!("duplicate case id {:?}", c.case_id)));
        }
    }
    toml::to_string_pretty(&ScenarioDoc { case: map })
        .map_err(|e| Error::Scenario(format!("scenario emit: {e}")))
}

// ---------------------------------------------------------------------------
// Built-in tables
// ---------------------------------------------------------------------------

fn shape(
    id: String,
    train_snr: PowerLawParam,
    data_snr: PowerLawParam,
    users: PowerLawParam,
    sharing: SharingSchedule,
) -> ScenarioCase {
    ScenarioCase {
        case_id: id,
        precoder: Precoder::Mrt,
        cells: 7,
        corr_fraction: 0.6,
        cross_gain: 0.3,
        train_snr,
        data_snr,
        users,
        sharing,
        m_grid: DEFAULT_M_GRID.to_vec(),
    }
}

fn konst(v: f64) -> PowerLawParam {
    PowerLawParam::constant(v)
}

fn users_const(v: f64) -> PowerLawParam {
    PowerLawParam::new(v, 0.0, true)
}

/// The contamination-free case table: eleven trajectories over
/// `M = 100..600` probing every combination of saved training energy,
/// saved data power, and grown user count.
pub fn table1() -> Vec<ScenarioCase> {
    let rows: [(PowerLawParam, PowerLawParam, PowerLawParam); 11] = [
        (konst(10.0), konst(10.0), PowerLawParam::new(0.1, 1.0, true)),
        (konst(10.0), PowerLawParam::new(1.0, -1.0, false), users_const(10.0)),
        (
            konst(10.0),
            PowerLawParam::new(1.0, -0.5, false),
            PowerLawParam::new(1.0, 0.5, true),
        ),
        (konst(10.0), PowerLawParam::new(1.0, -0.5, false), users_const(10.0)),
        (konst(10.0), konst(10.0), PowerLawParam::new(1.0, 0.5, true)),
        (konst(10.0), konst(10.0), users_const(10.0)),
        (PowerLawParam::new(10.0, -1.0, false), konst(10.0), users_const(10.0)),
        (
            PowerLawParam::new(1.0, -0.5, false),
            PowerLawParam::new(1.0, -0.5, false),
            users_const(10.0),
        ),
        (
            PowerLawParam::new(1.0, -0.5, false),
            konst(10.0),
            PowerLawParam::new(1.0, 0.5, true),
        ),
        (PowerLawParam::new(1.0, -0.5, false), konst(10.0), users_const(10.0)),
        (konst(10.0), PowerLawParam::new(20.0, -0.5, false), users_const(10.0)),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (et, rho, k))| {
            shape(
                format!("table1.case{:02}", i + 1),
                et,
                rho,
                k,
                SharingSchedule::Constant(0),
            )
        })
        .collect()
}

/// The pilot-contaminated case table: five trajectories over
/// `M = 100..600` with per-point sharing schedules.
pub fn table2() -> Vec<ScenarioCase> {
    let decaying = vec![5usize, 5, 4, 4, 3, 3];
    let constant = vec![5usize; 6];
    let rows: [(PowerLawParam, PowerLawParam, PowerLawParam, Vec<usize>); 5] = [
        (
            konst(0.2),
            PowerLawParam::new(1.0, -0.5, false),
            PowerLawParam::new(1.0, 0.5, true),
            decaying.clone(),
        ),
        (
            konst(0.2),
            konst(0.1),
            PowerLawParam::new(0.1, 1.0, true),
            decaying.clone(),
        ),
        (konst(0.2), konst(10.0), users_const(2.0), decaying),
        (konst(1.0), konst(20.0), users_const(2.0), constant.clone()),
        (konst(0.2), konst(10.0), users_const(10.0), constant),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (et, rho, k, lp))| {
            shape(
                format!("table2.case{:02}", i + 1),
                et,
                rho,
                k,
                SharingSchedule::PerPoint(lp),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{deterministic_check, scaling_exponent};

    #[test]
    fn power_law_reference_points() {
        assert_eq!(PowerLawParam::new(0.1, 1.0, true).evaluate(100).unwrap(), 10.0);
        assert!((PowerLawParam::new(1.0, -0.5, false).evaluate(100).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(PowerLawParam::new(1.0, 0.5, true).evaluate(400).unwrap(), 20.0);
        assert_eq!(PowerLawParam::new(1.0, 0.5, true).evaluate(300).unwrap(), 17.0);
        // Floored below one is a configuration error.
        assert!(PowerLawParam::new(0.1, -1.0, true).evaluate(100).is_err());
        // Continuous parameters just need positivity.
        assert!(PowerLawParam::new(0.1, -1.0, false).evaluate(100).is_ok());
    }

    #[test]
    fn builtin_tables_validate() {
        for case in table1().iter().chain(table2().iter()) {
            case.validate().unwrap_or_else(|e| panic!("{}: {e}", case.case_id));
        }
        assert_eq!(table1().len(), 11);
        assert_eq!(table2().len(), 5);
    }

    #[test]
    fn instantiation_reference_points() {
        let t1 = table1();
        let c1 = t1[0].config_at(300).unwrap();
        assert_eq!(c1.users_per_cell, 30);
        assert_eq!(c1.train_snr, 10.0);
        assert_eq!(c1.data_snr, 10.0);

        let c3 = t1[2].config_at(300).unwrap();
        assert_eq!(c3.users_per_cell, 17);
        assert!((c3.data_snr - 1.0 / (300f64).sqrt()).abs() < 1e-15);

        let c7 = t1[6].config_at(200).unwrap();
        assert!((c7.train_snr - 0.05).abs() < 1e-15);

        let t2 = table2();
        assert_eq!(t2[0].sharing_at(100).unwrap(), 5);
        assert_eq!(t2[0].sharing_at(300).unwrap(), 4);
        assert_eq!(t2[0].sharing_at(600).unwrap(), 3);
        assert!(t2[0].sharing_at(250).is_err(), "off-grid M has no schedule entry");
        let cfg = t2[4].config_at(600).unwrap();
        assert_eq!(cfg.sharing_cells, 5);
        assert_eq!(cfg.users_per_cell, 10);
    }

    #[test]
    fn growth_exponents_of_the_tables() {
        let expected_rs = [0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0, 0.0, 0.5, 0.5];
        let expected_det = [true, true, true, true, false, false, true, true, true, true, true];
        for (i, case) in table1().iter().enumerate() {
            let e = case.exponents().unwrap();
            assert!(e.contamination_free);
            assert!(
                (scaling_exponent(&e) - expected_rs[i]).abs() < 1e-12,
                "{}: r_s {}",
                case.case_id,
                scaling_exponent(&e)
            );
            assert_eq!(
                deterministic_check(&e),
                expected_det[i],
                "{}: deterministic",
                case.case_id
            );
        }

        let t2 = table2();
        let e1 = t2[0].exponents().unwrap();
        assert!(!e1.contamination_free);
        assert!((e1.sharing_decay - 0.3107).abs() < 2e-3);
        assert!(scaling_exponent(&e1).abs() < 1e-12, "saving sum hits 1 exactly");
        let e3 = t2[2].exponents().unwrap();
        assert!((scaling_exponent(&e3) - e3.sharing_decay).abs() < 1e-12);
        let e4 = t2[3].exponents().unwrap();
        assert_eq!(e4.sharing_decay, 0.0);
        assert_eq!(scaling_exponent(&e4), 0.0);
        assert!(deterministic_check(&e4), "contaminated cases always harden");
    }

    #[test]
    fn toml_round_trip_is_exact() {
        let mut cases = table1();
        cases.extend(table2());
        cases.push(cases[3].as_zero_forcing());
        let text = emit_scenario(&cases).unwrap();
        let back = parse_scenario(&text).unwrap();
        // The file orders cases by id; compare as sorted sets.
        let mut sorted = cases.clone();
        sorted.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        assert_eq!(back, sorted);
    }

    #[test]
    fn scenario_parse_diagnostics() {
        let unknown_key = r#"
            [case.demo]
            precoder = "mrt"
            cells = 7
            corr = 0.6
            cross_gain = 0.3
            m_grid = [100, 200, 300]
            lp = 0
            et_coeff = 10.0
            et_exp = 0.0
            rho_coeff = 10.0
            rho_exp = 0.0
            k_coeff = 10.0
            k_exp = 0.0
            k_floor = true
            pilots = 16
        "#;
        let err = parse_scenario(unknown_key).unwrap_err().to_string();
        assert!(err.contains("pilots"), "names the offending key: {err}");
        assert!(err.contains("line"), "carries a location: {err}");

        let duplicate = r#"
            [case.demo]
            precoder = "mrt"
            cells = 7
            corr = 0.6
            cross_gain = 0.3
            m_grid = [100, 200, 300]
            lp = 0
            et_coeff = 10.0
            et_exp = 0.0
            rho_coeff = 10.0
            rho_exp = 0.0
            k_coeff = 10.0
            k_exp = 0.0
            k_floor = true

            [case.DEMO]
            precoder = "mrt"
            cells = 7
            corr = 0.6
            cross_gain = 0.3
            m_grid = [100, 200, 300]
            lp = 0
            et_coeff = 10.0
            et_exp = 0.0
            rho_coeff = 10.0
            rho_exp = 0.0
            k_coeff = 10.0
            k_exp = 0.0
            k_floor = true
        "#;
        let err = parse_scenario(duplicate).unwrap_err().to_string();
        assert!(err.contains("case-insensitive"), "{err}");
    }

    #[test]
    fn schedule_shape_errors() {
        let mut case = table2().remove(0);
        case.sharing = SharingSchedule::PerPoint(vec![5, 5, 4]);
        assert!(case.validate().is_err());

        let mut mixed = table2().remove(0);
        mixed.sharing = SharingSchedule::PerPoint(vec![5, 5, 4, 4, 0, 0]);
        assert!(mixed.exponents().is_err());

        let mut fractional = table1().remove(5);
        fractional.users = PowerLawParam::new(0.1, 1.0, false);
        assert!(fractional.config_at(105).is_err(), "10.5 users without floor flag");

        let mut steep = table1().remove(0);
        steep.data_snr = PowerLawParam::new(1.0, -2.0, false);
        assert!(steep.exponents().is_err(), "decay exponent outside [0, 1]");
    }

    #[test]
    fn zero_forcing_variant_keeps_schedules() {
        let base = &table1()[3];
        let zf = base.as_zero_forcing();
        assert_eq!(zf.precoder, Precoder::Zf);
        assert_eq!(zf.case_id, "table1.case04-zf");
        assert_eq!(zf.m_grid, base.m_grid);
        assert_eq!(zf.users, base.users);
        zf.validate().unwrap();
    }
}
