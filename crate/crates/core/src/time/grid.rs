use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Serialised description of a [`TimeGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeGridSpec {
    /// `t_j = τ (j/M)^r`, `j = 0..=M`.
    Graded {
        tau: f64,
        #[serde(rename = "M")]
        m: usize,
        r: f64,
    },
    /// `t_0 = 0` followed by log-spaced nodes from `t_min` to `τ`.
    Geometric {
        t_min: f64,
        tau: f64,
        per_decade: usize,
    },
}

/// Strictly increasing nodes `0 = t_0 < t_1 < … < t_M = τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TimeGridSpec", into = "TimeGridSpec")]
pub struct TimeGrid {
    spec: TimeGridSpec,
    nodes: Vec<f64>,
}

impl TryFrom<TimeGridSpec> for TimeGrid {
    type Error = Error;
    fn try_from(spec: TimeGridSpec) -> Result<Self> {
        match spec {
            TimeGridSpec::Graded { tau, m, r } => TimeGrid::graded(tau, m, r),
            TimeGridSpec::Geometric {
                t_min,
                tau,
                per_decade,
            } => TimeGrid::geometric(t_min, tau, per_decade),
        }
    }
}

impl From<TimeGrid> for TimeGridSpec {
    fn from(g: TimeGrid) -> Self {
        g.spec
    }
}

impl TimeGrid {
    pub const DEFAULT_NODES: usize = 256;
    pub const DEFAULT_GRADING: f64 = 2.0;

    pub fn graded(tau: f64, m: usize, r: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive and finite, got {tau}")));
        }
        if m < 2 {
            return Err(Error::Domain(format!("need at least 2 intervals, got {m}")));
        }
        if !(r >= 1.0) {
            return Err(Error::Domain(format!("grading must be >= 1, got {r}")));
        }
        let nodes = (0..=m)
            .map(|j| {
                if j == m {
                    tau
                } else {
                    tau * (j as f64 / m as f64).powf(r)
                }
            })
            .collect();
        Ok(Self {
            spec: TimeGridSpec::Graded { tau, m, r },
            nodes,
        })
    }

    /// Default grading on `(0, τ)`.
    pub fn standard(tau: f64) -> Result<Self> {
        Self::graded(tau, Self::DEFAULT_NODES, Self::DEFAULT_GRADING)
    }

    pub fn geometric(t_min: f64, tau: f64, per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && tau > t_min && tau.is_finite()) || per_decade == 0 {
            return Err(Error::Domain(format!(
                "geometric grid needs 0 < t_min < tau, got [{t_min}, {tau}]"
            )));
        }
        let mut nodes = vec![0.0];
        nodes.extend(crate::quad::log_grid(t_min, tau, per_decade));
        *nodes.last_mut().unwrap() = tau;
        if nodes.len() < 3 {
            return Err(Error::Domain("geometric grid too coarse".into()));
        }
        Ok(Self {
            spec: TimeGridSpec::Geometric {
                t_min,
                tau,
                per_decade,
            },
            nodes,
        })
    }

    pub fn spec(&self) -> TimeGridSpec {
        self.spec
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes including `t_0`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn tau(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Index of the node closest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let mut best = 0;
        for (j, &s) in self.nodes.iter().enumerate() {
            if (s - t).abs() < (self.nodes[best] - t).abs() {
                best = j;
            }
        }
        best
    }

    /// Same family with twice the resolution.
    pub fn refined(&self) -> Self {
        match self.spec {
            TimeGridSpec::Graded { tau, m, r } => Self::graded(tau, 2 * m, r),
            TimeGridSpec::Geometric {
                t_min,
                tau,
                per_decade,
            } => Self::geometric(t_min, tau, 2 * per_decade),
        }
        .expect("refinement of a valid grid is valid")
    }

    /// Same nodes scaled to horizon `tau`.
    pub fn with_horizon(&self, tau: f64) -> Result<Self> {
        match self.spec {
            TimeGridSpec::Graded { m, r, .. } => Self::graded(tau, m, r),
            TimeGridSpec::Geometric {
                t_min,
                tau: old,
                per_decade,
            } => Self::geometric(t_min * tau / old, tau, per_decade),
        }
    }
}
