//! Sweep runners emitting CSV tables, a state-file correlation report, and
//! the self-verification suites that cross-check independent computational
//! routes against each other.
//!
//! All tables are deterministic: identical configuration (and seed, where
//! sampling is involved) yields byte-identical output. Floats are written
//! with 17 significant digits and lines end in LF.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discord::{
    gqd_brute_force, gqd_k, gqd_two_qubit, project_measure, tqc, GridResolution,
};
use crate::dynamics::{
    evolve_three, kraus_oracle, p_t, p_t_numeric, ReservoirParams, SurvivalAmplitude,
};
use crate::error::{Error, Result};
use crate::qstate::{
    bloch_parts, coeff_tensor, random_density8, reduce_two_qubit, DensityMatrix8, Qubit, QubitPair,
};
use crate::states::{make_ghz, make_w, GhzSpec, WSpec};

/// Which initial-state family a sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    Ghz,
    W,
}

impl StateFamily {
    /// Conventional balanced weight: 1/2 for the two-level family, 1/3 for
    /// the single-excitation family.
    pub fn default_alpha_sq(self) -> f64 {
        match self {
            StateFamily::Ghz => 0.5,
            StateFamily::W => 1.0 / 3.0,
        }
    }
}

impl std::str::FromStr for StateFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateFamily::Ghz),
            "w" => Ok(StateFamily::W),
            other => Err(Error::Config(format!(
                "unknown state family '{other}' (expected ghz or w)"
            ))),
        }
    }
}

impl std::fmt::Display for StateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateFamily::Ghz => write!(f, "ghz"),
            StateFamily::W => write!(f, "w"),
        }
    }
}

/// Uniform grid of `n` points covering `[0, 1]` inclusive.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Everything a sweep needs. `alpha_sq`/`r` are the fixed primary values;
/// the optional grids activate the secondary axis of the two parameter
/// sweeps. `out` and `seed` are carried for the harness (the sweeps
/// themselves are deterministic and sample nothing).
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: StateFamily,
    pub lambda_ratios: Vec<f64>,
    pub t_max: f64,
    pub n_t: usize,
    pub alpha_sq: f64,
    pub alpha_sq_grid: Option<Vec<f64>>,
    pub r: f64,
    pub r_grid: Option<Vec<f64>>,
    pub delta: f64,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl SweepConfig {
    fn base(family: StateFamily) -> Self {
        SweepConfig {
            family,
            lambda_ratios: vec![0.01],
            t_max: 20.0,
            n_t: 2001,
            alpha_sq: family.default_alpha_sq(),
            alpha_sq_grid: None,
            r: 1.0,
            r_grid: None,
            delta: 0.0,
            epsilon: 0.0,
            out: None,
            seed: 0,
        }
    }

    /// Time sweep of the pure balanced state across four reservoir widths.
    pub fn case1_defaults(family: StateFamily) -> Self {
        SweepConfig {
            lambda_ratios: vec![2.5, 0.1, 0.05, 0.01],
            ..SweepConfig::base(family)
        }
    }

    /// Narrow reservoir, initial weight `alpha_sq` swept over 101 points.
    pub fn case2_defaults(family: StateFamily) -> Self {
        SweepConfig {
            alpha_sq_grid: Some(unit_grid(101)),
            ..SweepConfig::base(family)
        }
    }

    /// Narrow reservoir, mixing weight `r` swept over 101 points.
    pub fn case3_defaults(family: StateFamily) -> Self {
        SweepConfig {
            r_grid: Some(unit_grid(101)),
            ..SweepConfig::base(family)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(Error::Config(format!("t_max = {} must be > 0", self.t_max)));
        }
        if self.n_t < 2 {
            return Err(Error::Config(format!("n_t = {} must be >= 2", self.n_t)));
        }
        if self.lambda_ratios.is_empty() {
            return Err(Error::Config("lambda_ratios must not be empty".into()));
        }
        for &ratio in &self.lambda_ratios {
            if !ratio.is_finite() || ratio <= 0.0 {
                return Err(Error::Config(format!("lambda ratio {ratio} must be > 0")));
            }
        }
        for (name, v) in [("alpha_sq", self.alpha_sq), ("r", self.r)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} outside [0, 1]")));
            }
        }
        for (name, grid) in [
            ("alpha_sq_grid", &self.alpha_sq_grid),
            ("r_grid", &self.r_grid),
        ] {
            if let Some(values) = grid {
                if values.is_empty() {
                    return Err(Error::Config(format!("{name} must not be empty")));
                }
                for &v in values {
                    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                        return Err(Error::Config(format!(
                            "{name} value {v} outside [0, 1]"
                        )));
                    }
                }
            }
        }
        for (name, v) in [("delta", self.delta), ("epsilon", self.epsilon)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Builds the configured family member with explicit weight and mixing.
    pub fn initial_state(&self, alpha_sq: f64, r: f64) -> Result<DensityMatrix8> {
        match self.family {
            StateFamily::Ghz => make_ghz(&GhzSpec::with_alpha_sq(alpha_sq, self.delta, r)?),
            StateFamily::W => {
                make_w(&WSpec::with_alpha_sq(alpha_sq, self.delta, self.epsilon, r)?)
            }
        }
    }

    pub fn time_grid(&self) -> Vec<f64> {
        (0..self.n_t)
            .map(|i| i as f64 * self.t_max / (self.n_t - 1) as f64)
            .collect()
    }
}

fn push_row(buf: &mut String, vals: &[f64]) {
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            buf.push(',');
        }
        let _ = write!(buf, "{v:.16e}");
    }
    buf.push('\n');
}

/// Correlation dynamics of one initial state for every configured reservoir
/// width. Columns: `lambda_ratio,gamma0_t,d1,d2,d3,q`.
pub fn run_case1(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let rho0 = cfg.initial_state(cfg.alpha_sq, cfg.r)?;
    let grid = cfg.time_grid();
    let mut out = String::with_capacity(64 + cfg.lambda_ratios.len() * grid.len() * 128);
    out.push_str("lambda_ratio,gamma0_t,d1,d2,d3,q\n");
    for &ratio in &cfg.lambda_ratios {
        let params = ReservoirParams::from_ratio(ratio)?;
        for &t in &grid {
            let p = p_t(&params, t)?;
            let rho_t = evolve_three(&rho0, p)?;
            let rep = tqc(&rho_t)?;
            push_row(&mut out, &[ratio, t, rep.d1, rep.d2, rep.d3, rep.q]);
        }
    }
    Ok(out)
}

/// Correlation dynamics as a function of the initial weight `alpha_sq`
/// (first configured reservoir width). Columns: `alpha_sq,gamma0_t,q`.
pub fn run_case2(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let weights = match &cfg.alpha_sq_grid {
        Some(g) => g.clone(),
        None => unit_grid(101),
    };
    let params = ReservoirParams::from_ratio(cfg.lambda_ratios[0])?;
    let grid = cfg.time_grid();
    let mut out = String::with_capacity(64 + weights.len() * grid.len() * 72);
    out.push_str("alpha_sq,gamma0_t,q\n");
    for &alpha_sq in &weights {
        let rho0 = cfg.initial_state(alpha_sq, cfg.r)?;
        for &t in &grid {
            let p = p_t(&params, t)?;
            let rep = tqc(&evolve_three(&rho0, p)?)?;
            push_row(&mut out, &[alpha_sq, t, rep.q]);
        }
    }
    Ok(out)
}

/// Correlation dynamics as a function of the mixing weight `r` (first
/// configured reservoir width). Columns: `r,gamma0_t,q`.
pub fn run_case3(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let mixings = match &cfg.r_grid {
        Some(g) => g.clone(),
        None => unit_grid(101),
    };
    let params = ReservoirParams::from_ratio(cfg.lambda_ratios[0])?;
    let grid = cfg.time_grid();
    let mut out = String::with_capacity(64 + mixings.len() * grid.len() * 72);
    out.push_str("r,gamma0_t,q\n");
    for &r in &mixings {
        let rho0 = cfg.initial_state(cfg.alpha_sq, r)?;
        for &t in &grid {
            let p = p_t(&params, t)?;
            let rep = tqc(&evolve_three(&rho0, p)?)?;
            push_row(&mut out, &[r, t, rep.q]);
        }
    }
    Ok(out)
}

/// Closed-form survival probability curves for every configured width.
/// Columns: `lambda_ratio,gamma0_t,p`.
pub fn run_pt(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let grid = cfg.time_grid();
    let mut out = String::with_capacity(64 + cfg.lambda_ratios.len() * grid.len() * 72);
    out.push_str("lambda_ratio,gamma0_t,p\n");
    for &ratio in &cfg.lambda_ratios {
        let params = ReservoirParams::from_ratio(ratio)?;
        for &t in &grid {
            push_row(&mut out, &[ratio, t, p_t(&params, t)?.value()]);
        }
    }
    Ok(out)
}

/// Reads a density-matrix text file and reports every correlation measure:
/// the sequential per-qubit values with their optimal axes, plus the
/// pair measure of each two-qubit reduction.
pub fn run_discord_file(path: &Path) -> Result<String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let rho = DensityMatrix8::from_text(&text)?;
    discord_report_text(&rho)
}

/// The `key=value` report body behind [`run_discord_file`].
pub fn discord_report_text(rho: &DensityMatrix8) -> Result<String> {
    let rep = tqc(rho)?;
    let mut out = String::new();
    out.push_str("measurement_order=1,2,3\n");
    for (key, v) in [
        ("d1", rep.d1),
        ("d2", rep.d2),
        ("d3", rep.d3),
        ("q", rep.q),
    ] {
        let _ = writeln!(out, "{key}={v:.16e}");
    }
    for (i, axis) in rep.axes.iter().enumerate() {
        let [x, y, z] = axis.components();
        for (comp, v) in [("x", x), ("y", y), ("z", z)] {
            let _ = writeln!(out, "axis{}_{comp}={v:.16e}", i + 1);
        }
    }
    for pair in QubitPair::ALL {
        let d = gqd_two_qubit(&reduce_two_qubit(rho, pair))?;
        let _ = writeln!(out, "gqd2_{pair}={d:.16e}");
    }
    Ok(out)
}

/// Sample counts, grids and seed for [`run_verify`].
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub dynamics_samples: usize,
    pub discord_samples: usize,
    pub roundtrip_samples: usize,
    pub classicality_samples: usize,
    pub grid: GridResolution,
    pub volterra_dt: f64,
    pub volterra_t_max: f64,
    pub lambda_ratios: Vec<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            dynamics_samples: 500,
            discord_samples: 200,
            roundtrip_samples: 1000,
            classicality_samples: 100,
            grid: GridResolution::default(),
            volterra_dt: 1e-4,
            volterra_t_max: 10.0,
            lambda_ratios: vec![2.5, 0.1, 0.05, 0.01],
        }
    }
}

/// One cross-check suite's observed worst error against its tolerance.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }
}

/// Results of every suite, in fixed order.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    /// Machine-readable lines; depends only on seeds and counts, so a fixed
    /// configuration reproduces this text bit for bit.
    pub fn write_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(
                out,
                "suite={} samples={} max_error={:.16e} tolerance={:e} status={}",
                s.name,
                s.samples,
                s.max_error,
                s.tolerance,
                if s.passed() { "pass" } else { "fail" }
            );
        }
        let _ = writeln!(
            out,
            "overall={}",
            if self.all_passed() { "pass" } else { "fail" }
        );
        out
    }
}

fn max_elementwise_diff(a: &DensityMatrix8, b: &DensityMatrix8) -> f64 {
    let (ma, mb) = (a.entries(), b.entries());
    let mut max = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            max = max.max((ma[i][j] - mb[i][j]).norm());
        }
    }
    max
}

/// Generic core of the dynamics suite so tests can inject a faulty
/// evolution and watch the suite catch it.
pub fn dynamics_suite_with<F>(evolve: F, seed: u64, samples: usize) -> Result<SuiteResult>
where
    F: Fn(&DensityMatrix8, SurvivalAmplitude) -> Result<DensityMatrix8>,
{
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let rho = random_density8(&mut rng);
        let p = SurvivalAmplitude::new(rng.gen_range(0.0..=1.0))?;
        let direct = evolve(&rho, p)?;
        let oracle = kraus_oracle(&rho, p);
        max_error = max_error.max(max_elementwise_diff(&direct, &oracle));
    }
    Ok(SuiteResult {
        name: "dynamics-kraus",
        samples,
        max_error,
        tolerance: 1e-12,
    })
}

/// Entry-wise evolution formulas against the operator-product oracle.
pub fn suite_dynamics_kraus(seed: u64, samples: usize) -> Result<SuiteResult> {
    dynamics_suite_with(evolve_three, seed, samples)
}

/// Numerically marched memory-kernel amplitude against the closed form.
pub fn suite_volterra(ratios: &[f64], t_max: f64, dt: f64) -> Result<SuiteResult> {
    let mut max_error = 0.0f64;
    for &ratio in ratios {
        let params = ReservoirParams::from_ratio(ratio)?;
        for (t, p_num) in p_t_numeric(&params, t_max, dt)? {
            let p_exact = p_t(&params, t)?.value();
            max_error = max_error.max((p_num - p_exact).abs());
        }
    }
    Ok(SuiteResult {
        name: "volterra-closed-form",
        samples: ratios.len(),
        max_error,
        tolerance: 1e-6,
    })
}

/// Eigenvalue-based per-qubit measure against the dense grid minimizer.
pub fn suite_discord_brute(seed: u64, samples: usize, grid: GridResolution) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let rho = random_density8(&mut rng);
        let b = bloch_parts(&coeff_tensor(&rho)?);
        for k in Qubit::ALL {
            let (d, _) = gqd_k(&b, k)?;
            let bf = gqd_brute_force(&rho, k, grid);
            max_error = max_error.max((d - bf).abs());
        }
    }
    Ok(SuiteResult {
        name: "discord-brute-force",
        samples,
        max_error,
        tolerance: 1e-5,
    })
}

/// Coefficient expansion and reconstruction as mutual inverses.
pub fn suite_round_trip(seed: u64, samples: usize) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let rho = random_density8(&mut rng);
        let rebuilt = crate::qstate::rho_from_coeff(&coeff_tensor(&rho)?)?;
        max_error = max_error.max(crate::qstate::hs_distance_sq(&rho, &rebuilt.rho).sqrt());
    }
    Ok(SuiteResult {
        name: "round-trip",
        samples,
        max_error,
        tolerance: 1e-12,
    })
}

/// Squared coefficient norm against the direct matrix purity.
pub fn suite_purity(seed: u64, samples: usize) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let rho = random_density8(&mut rng);
        let c = coeff_tensor(&rho)?;
        max_error = max_error.max((c.norm_sq() - rho.purity()).abs());
    }
    Ok(SuiteResult {
        name: "purity-identity",
        samples,
        max_error,
        tolerance: 1e-12,
    })
}

/// A state measured along its own optimal axis must be left with no
/// measurable correlation on that qubit.
pub fn suite_classicality(seed: u64, samples: usize) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let rho = random_density8(&mut rng);
        let c = coeff_tensor(&rho)?;
        let b = bloch_parts(&c);
        for k in Qubit::ALL {
            let (_, axis) = gqd_k(&b, k)?;
            let after = project_measure(&c, &axis, k);
            let (residual, _) = gqd_k(&bloch_parts(&after), k)?;
            max_error = max_error.max(residual);
        }
    }
    Ok(SuiteResult {
        name: "post-measurement-classicality",
        samples,
        max_error,
        tolerance: 1e-8,
    })
}

/// Runs every suite in fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let suites = vec![
        suite_dynamics_kraus(cfg.seed, cfg.dynamics_samples)?,
        suite_volterra(&cfg.lambda_ratios, cfg.volterra_t_max, cfg.volterra_dt)?,
        suite_discord_brute(cfg.seed, cfg.discord_samples, cfg.grid)?,
        suite_round_trip(cfg.seed, cfg.roundtrip_samples)?,
        suite_purity(cfg.seed, cfg.roundtrip_samples)?,
        suite_classicality(cfg.seed, cfg.classicality_samples)?,
    ];
    Ok(VerifyReport { suites })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use std::io::Write as _;

    fn small_case1_cfg() -> SweepConfig {
        SweepConfig {
            lambda_ratios: vec![0.1, 2.5],
            n_t: 3,
            ..SweepConfig::case1_defaults(StateFamily::Ghz)
        }
    }

    #[test]
    fn case1_shape_and_t0_values() {
        let csv = run_case1(&small_case1_cfg()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lambda_ratio,gamma0_t,d1,d2,d3,q");
        assert_eq!(lines.len(), 1 + 2 * 3);
        for line in &lines[1..] {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields.len(), 6);
            assert!((fields[5] - (fields[2] + fields[3] + fields[4])).abs() < 1e-12);
        }
        // t = 0 rows carry the undamped balanced-superposition values.
        let first: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(first[1], 0.0);
        assert!((first[2] - 0.5).abs() < 1e-10);
        assert!((first[5] - 0.75).abs() < 1e-10);
    }

    #[test]
    fn case1_output_is_deterministic() {
        let a = run_case1(&small_case1_cfg()).unwrap();
        let b = run_case1(&small_case1_cfg()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn case2_boundary_weights_have_no_correlation() {
        let cfg = SweepConfig {
            alpha_sq_grid: Some(vec![0.0, 0.5, 1.0]),
            n_t: 2,
            ..SweepConfig::case2_defaults(StateFamily::Ghz)
        };
        let csv = run_case2(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "alpha_sq,gamma0_t,q");
        assert_eq!(lines.len(), 1 + 3 * 2);
        let q_of = |line: &str| -> f64 { line.split(',').nth(2).unwrap().parse().unwrap() };
        // alpha_sq = 0 and 1 are product levels: no correlation at t = 0,
        // and the all-ground level stays uncorrelated forever.
        assert!(q_of(lines[1]) < 1e-10);
        assert!(q_of(lines[5]) < 1e-10);
        assert!(q_of(lines[6]) < 1e-10);
        // The balanced weight dominates both boundaries at t = 0.
        assert!(q_of(lines[3]) > 0.7);
    }

    #[test]
    fn case3_mixing_boundaries() {
        let cfg = SweepConfig {
            r_grid: Some(vec![0.0, 1.0]),
            n_t: 2,
            ..SweepConfig::case3_defaults(StateFamily::Ghz)
        };
        let csv = run_case3(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,gamma0_t,q");
        let q_of = |line: &str| -> f64 { line.split(',').nth(2).unwrap().parse().unwrap() };
        assert!(q_of(lines[1]) < 1e-10); // r = 0, t = 0
        assert!(q_of(lines[2]) < 1e-10); // r = 0, t = t_max
        assert!((q_of(lines[3]) - 0.75).abs() < 1e-10); // r = 1, t = 0
    }

    #[test]
    fn pt_table_matches_closed_form() {
        let cfg = SweepConfig {
            lambda_ratios: vec![0.5],
            n_t: 5,
            t_max: 4.0,
            ..SweepConfig::case1_defaults(StateFamily::Ghz)
        };
        let csv = run_pt(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lambda_ratio,gamma0_t,p");
        assert_eq!(lines.len(), 6);
        let params = ReservoirParams::from_ratio(0.5).unwrap();
        for line in &lines[1..] {
            let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((f[2] - p_t(&params, f[1]).unwrap().value()).abs() < 1e-15);
        }
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        let mut cfg = SweepConfig::case1_defaults(StateFamily::Ghz);
        cfg.n_t = 1;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = SweepConfig::case1_defaults(StateFamily::Ghz);
        cfg.lambda_ratios = vec![-0.5];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = SweepConfig::case1_defaults(StateFamily::Ghz);
        cfg.t_max = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = SweepConfig::case2_defaults(StateFamily::W);
        cfg.alpha_sq_grid = Some(vec![0.2, 1.4]);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        assert!("ghz".parse::<StateFamily>().is_ok());
        assert!("W".parse::<StateFamily>().is_ok());
        assert!("bell".parse::<StateFamily>().is_err());
    }

    #[test]
    fn discord_file_report_reads_states() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mixed.txt");
        std::fs::write(&path, DensityMatrix8::maximally_mixed().to_text()).unwrap();
        let report = run_discord_file(&path).unwrap();
        assert!(report.contains("measurement_order=1,2,3"));
        assert!(report.contains("q=0.0000000000000000e0"));
        assert!(report.contains("gqd2_12=0.0000000000000000e0"));

        let ghz = crate::states::make_ghz(
            &crate::states::GhzSpec::with_alpha_sq(0.5, 0.0, 1.0).unwrap(),
        )
        .unwrap();
        let gpath = dir.path().join("ghz.txt");
        std::fs::write(&gpath, ghz.to_text()).unwrap();
        let report = run_discord_file(&gpath).unwrap();
        let d1_line = report
            .lines()
            .find(|l| l.starts_with("d1="))
            .expect("report carries d1");
        let d1: f64 = d1_line[3..].parse().unwrap();
        assert!((d1 - 0.5).abs() < 1e-12, "{report}");

        let bad = dir.path().join("bad.txt");
        let mut f = std::fs::File::create(&bad).unwrap();
        writeln!(f, "1.0+0.0i garbage").unwrap();
        drop(f);
        assert!(matches!(
            run_discord_file(&bad),
            Err(Error::Parse { line: 1, .. })
        ));

        assert!(matches!(
            run_discord_file(std::path::Path::new("/nonexistent/state.txt")),
            Err(Error::Io { .. })
        ));
    }

    fn small_verify_cfg() -> VerifyConfig {
        VerifyConfig {
            seed: 11,
            dynamics_samples: 5,
            discord_samples: 2,
            roundtrip_samples: 5,
            classicality_samples: 3,
            grid: GridResolution {
                n_theta: 16,
                n_phi: 32,
            },
            volterra_dt: 1e-3,
            volterra_t_max: 2.0,
            lambda_ratios: vec![0.1, 2.5],
        }
    }

    #[test]
    fn verify_passes_and_reports_deterministically() {
        let cfg = small_verify_cfg();
        let a = run_verify(&cfg).unwrap();
        assert!(a.all_passed(), "{}", a.write_text());
        let b = run_verify(&cfg).unwrap();
        assert_eq!(a.write_text(), b.write_text());
        let text = a.write_text();
        assert!(text.contains("suite=dynamics-kraus"));
        assert!(text.contains("status=pass"));
        assert!(text.trim_end().ends_with("overall=pass"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn injected_dynamics_fault_is_caught() {
        let faulty = |rho: &DensityMatrix8, p: SurvivalAmplitude| -> crate::Result<DensityMatrix8> {
            let good = evolve_three(rho, p)?;
            let mut m = *good.entries();
            m[0][0] += C64::new(1e-9, 0.0);
            Ok(DensityMatrix8::from_raw(m))
        };
        let suite = dynamics_suite_with(faulty, 11, 5).unwrap();
        assert!(!suite.passed(), "max_error = {:.3e}", suite.max_error);
        let good = suite_dynamics_kraus(11, 5).unwrap();
        assert!(good.passed());
    }
}
