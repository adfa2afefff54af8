use crate::error::{Error, Result};
use crate::state::BellKind;

use super::lindblad::ChannelKind;

/// Largest `Γt` for which the thermal first-order expansion is returned.
pub const THERMAL_FIRST_ORDER_LIMIT: f64 = 0.05;

/// Concurrence of an initial Bell state after time `t` with identical
/// reservoirs on both qubits.
///
/// Zero temperature, dephasing and infinite temperature are exact. Thermal
/// reservoirs only have the first-order expansion in `Γt`, returned for
/// `Γt ≤ 0.05`; beyond that use [`super::evolve`].
pub fn bell_decay_closed_form(state: BellKind, channel: ChannelKind, t: f64) -> Result<f64> {
    channel.validate()?;
    if t < 0.0 {
        return Err(Error::OutOfRange { value: t, min: 0.0, max: f64::INFINITY });
    }
    let psi = matches!(state, BellKind::PsiPlus | BellKind::PsiMinus);
    Ok(match channel {
        ChannelKind::ZeroTemperature { gamma } => (-(if psi { 1.0 } else { 2.0 }) * gamma * t).exp(),
        ChannelKind::Dephasing { gamma } => (-gamma * t).exp(),
        ChannelKind::InfiniteTemperature { gamma } => {
            ((-4.0 * gamma * t).exp() / 2.0 + (-2.0 * gamma * t).exp() - 0.5).max(0.0)
        }
        ChannelKind::Thermal { gamma, nbar } => {
            let gt = gamma * t;
            if gt > THERMAL_FIRST_ORDER_LIMIT {
                return Err(Error::UnsupportedExactForm(format!(
                    "thermal reservoir at Γt = {gt} (first-order form valid up to {THERMAL_FIRST_ORDER_LIMIT})"
                )));
            }
            let slope = if psi { 2.0 * nbar + 1.0 + 2.0 * (nbar * (nbar + 1.0)).sqrt() } else { 2.0 * (2.0 * nbar + 1.0) };
            1.0 - slope * gt
        }
    })
}

/// `lim_{t→∞} σ₁ − Σ_{i>1} σ_i = −2n̄(n̄+1)/(2n̄+1)²` for Bell states in a
/// thermal reservoir. Takes `n̄ ≥ 0`.
pub fn asymptotic_singular_gap(nbar: f64) -> f64 {
    -2.0 * nbar * (nbar + 1.0) / (2.0 * nbar + 1.0).powi(2)
}
