use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which power of the link factor a [`TadpoleField`] stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TadpoleKind {
    /// `u^4`, square plaquettes.
    Chain,
    /// `u^6`, hexagonal plaquettes.
    Honeycomb,
}

impl TadpoleKind {
    pub fn exponent(self) -> u32 {
        match self {
            TadpoleKind::Chain => 4,
            TadpoleKind::Honeycomb => 6,
        }
    }
}

/// Admissible range of `u^k`: the plaquette operators have norm at most 1.
pub const FIELD_BOUNDS: (f64, f64) = (0.5, 1.5);
const BOUND_SLACK: f64 = 1e-9;

/// Per-plaquette improvement factors at one instant, stored as the power
/// that enters the magnetic Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TadpoleField {
    kind: TadpoleKind,
    values: Vec<f64>,
}

impl TadpoleField {
    pub fn new(kind: TadpoleKind, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("empty tadpole field".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "tadpole factors must be positive and finite, got {v}"
            )));
        }
        Ok(Self { kind, values })
    }

    pub fn ones(kind: TadpoleKind, len: usize) -> Self {
        Self {
            kind,
            values: vec![1.0; len],
        }
    }

    pub fn kind(&self) -> TadpoleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The link factor `u` itself, for reporting.
    pub fn link_factor(&self, i: usize) -> f64 {
        self.values[i].powf(1.0 / self.kind.exponent() as f64)
    }

    pub fn max_abs_diff(&self, other: &TadpoleField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `theta * measured + (1 - theta) * self`.
    pub fn mix(&self, measured: &TadpoleField, theta: f64) -> TadpoleField {
        let values = self
            .values
            .iter()
            .zip(&measured.values)
            .map(|(old, new)| theta * new + (1.0 - theta) * old)
            .collect();
        TadpoleField {
            kind: self.kind,
            values,
        }
    }
}

/// `1 + <box + box^dagger> / (2 N_c)`, asserted to lie in [`FIELD_BOUNDS`].
pub fn factor_from_expectation(plaquette_sum: f64, n_colors: usize) -> Result<f64> {
    let value = 1.0 + plaquette_sum / (2.0 * n_colors as f64);
    let (lo, hi) = FIELD_BOUNDS;
    if !(value >= lo - BOUND_SLACK && value <= hi + BOUND_SLACK) {
        return Err(Error::Consistency(format!(
            "tadpole factor {value} outside [{lo}, {hi}]"
        )));
    }
    Ok(value)
}
