//! Grid sweep of the five eligibility conditions.
//!
//! Each condition is evaluated through the barrier-term split
//! `ψ = (t² - 1)/2 + b`, so the growth term cancels symbolically:
//!
//! | condition | expression in `b` |
//! |---|---|
//! | `tψ'' + ψ' > 0`, `t < 1` | `2t + t b'' + b'` |
//! | `tψ'' - ψ' > 0`, `t > 1` | `t b'' - b'` |
//! | `ψ''' < 0`, `t > 0` | `-b'''` |
//! | `2ψ''² - ψ'ψ''' > 0`, `t < 1` | `2(1 + b'')² - (t + b') b'''` |
//! | `ψ''(t)ψ'(βt) - βψ'(t)ψ''(βt) > 0`, `t > 1`, `β > 1` | expanded below |

use super::Kernel;

/// The five conditions a kernel must satisfy to be eligible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `tψ''(t) + ψ'(t) > 0` for `t < 1`.
    SmallArgumentGrowth,
    /// `tψ''(t) - ψ'(t) > 0` for `t > 1`.
    LargeArgumentGrowth,
    /// `ψ'''(t) < 0` for `t > 0`.
    DecreasingCurvature,
    /// `2ψ''(t)² - ψ'(t)ψ'''(t) > 0` for `t < 1`.
    CurvatureDominance,
    /// `ψ''(t)ψ'(βt) - βψ'(t)ψ''(βt) > 0` for `t > 1`, `β > 1`.
    ScaledMonotonicity,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::SmallArgumentGrowth,
        Condition::LargeArgumentGrowth,
        Condition::DecreasingCurvature,
        Condition::CurvatureDominance,
        Condition::ScaledMonotonicity,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Condition::SmallArgumentGrowth => "t psi''(t) + psi'(t) > 0 on (0,1)",
            Condition::LargeArgumentGrowth => "t psi''(t) - psi'(t) > 0 on (1,inf)",
            Condition::DecreasingCurvature => "psi'''(t) < 0 on (0,inf)",
            Condition::CurvatureDominance => "2 psi''(t)^2 - psi'(t) psi'''(t) > 0 on (0,1)",
            Condition::ScaledMonotonicity => "psi''(t) psi'(bt) - b psi'(t) psi''(bt) > 0 for t > 1, b > 1",
        }
    }
}

/// Sampling specification for [`eligibility_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityGrid {
    pub t_min: f64,
    pub t_max: f64,
    /// Number of log-spaced samples over `[t_min, t_max]`.
    pub t_samples: usize,
    pub beta_max: f64,
    /// Number of log-spaced samples of `β - 1` over `[1e-3, β_max - 1]`.
    pub beta_samples: usize,
}

impl Default for EligibilityGrid {
    fn default() -> Self {
        Self { t_min: 1e-4, t_max: 1e4, t_samples: 2001, beta_max: 100.0, beta_samples: 121 }
    }
}

/// Outcome of one condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    pub condition: Condition,
    pub passed: bool,
    /// Smallest value of the expression that must be positive.
    pub worst_margin: f64,
    pub worst_t: f64,
    /// The `β` attaining the worst margin, for the scaled condition only.
    pub worst_beta: Option<f64>,
}

/// Per-condition results of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityReport {
    pub kernel: String,
    pub conditions: Vec<ConditionResult>,
}

impl EligibilityReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, condition: Condition) -> &ConditionResult {
        self.conditions.iter().find(|c| c.condition == condition).expect("every condition is reported")
    }
}

fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

fn scaled_margin(k: &dyn Kernel, t: f64, beta: f64) -> f64 {
    let bt = beta * t;
    let (b1t, b2t) = (k.barrier_d1(t), k.barrier_d2(t));
    let (b1bt, b2bt) = (k.barrier_d1(bt), k.barrier_d2(bt));
    b1bt + bt * b2t + b2t * b1bt - bt * b2bt - beta * b1t - beta * b1t * b2bt
}

/// Sweeps the grid and reports the worst margin of every condition.
pub fn eligibility_check(k: &dyn Kernel, grid: &EligibilityGrid) -> EligibilityReport {
    let ts = log_space(grid.t_min, grid.t_max, grid.t_samples);
    let small: Vec<f64> = ts.iter().copied().filter(|&t| t < 1.0).collect();
    let large: Vec<f64> = ts.iter().copied().filter(|&t| t > 1.0).collect();
    let betas: Vec<f64> =
        log_space(1e-3, (grid.beta_max - 1.0).max(1e-3), grid.beta_samples).into_iter().map(|d| 1.0 + d).collect();

    let worst = |condition: Condition, points: &[f64], f: &dyn Fn(f64) -> f64| {
        let mut out = ConditionResult {
            condition,
            passed: true,
            worst_margin: f64::INFINITY,
            worst_t: f64::NAN,
            worst_beta: None,
        };
        for &t in points {
            let m = f(t);
            if !(m >= out.worst_margin) {
                out.worst_margin = m;
                out.worst_t = t;
            }
        }
        out.passed = out.worst_margin > 0.0;
        out
    };

    let c1 = worst(Condition::SmallArgumentGrowth, &small, &|t| 2.0 * t + t * k.barrier_d2(t) + k.barrier_d1(t));
    let c2 = worst(Condition::LargeArgumentGrowth, &large, &|t| t * k.barrier_d2(t) - k.barrier_d1(t));
    let c3 = worst(Condition::DecreasingCurvature, &ts, &|t| -k.barrier_d3(t));
    let c4 = worst(Condition::CurvatureDominance, &small, &|t| {
        2.0 * (1.0 + k.barrier_d2(t)).powi(2) - (t + k.barrier_d1(t)) * k.barrier_d3(t)
    });

    let mut c5 = ConditionResult {
        condition: Condition::ScaledMonotonicity,
        passed: true,
        worst_margin: f64::INFINITY,
        worst_t: f64::NAN,
        worst_beta: None,
    };
    for &t in &large {
        for &beta in &betas {
            let m = scaled_margin(k, t, beta);
            if !(m >= c5.worst_margin) {
                c5.worst_margin = m;
                c5.worst_t = t;
                c5.worst_beta = Some(beta);
            }
        }
    }
    c5.passed = c5.worst_margin > 0.0;

    EligibilityReport { kernel: k.name(), conditions: vec![c1, c2, c3, c4, c5] }
}
