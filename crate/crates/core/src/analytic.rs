//! Closed-form link gains and expected aggregate interference.
//!
//! These are the far-field expressions: Friis-style LOS gain with molecular
//! absorption, the two-hop RIS link gain with the RIS capture area, and the
//! semicircle Poisson-field means built on the shared attenuation integral.
//! The 1/(8π) and 1/4 prefactors of the mean expressions already encode the
//! half-plane drop region (RIS mounted on a wall); they are used as stated
//! and validated against the phase-exact Monte Carlo, not re-derived.

use crate::error::SimError;
use crate::geometry::{Scene, SPEED_OF_LIGHT};
use crate::quadrature::attenuation_integral;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Poisson interferer population on the half-annulus in front of the RIS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticPopulation {
    /// λ_U, users per m².
    pub user_density: f64,
    /// ALOHA transmit probability p_T.
    pub transmit_prob: f64,
    /// Non-blocked probability p_N.
    pub nonblocked_prob: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Interferers beamform toward the RIS instead of random directions.
    pub oriented_at_ris: bool,
    /// Drop height relative to the RIS center (the analytic model is 2D;
    /// the simulator places users at this fixed height).
    pub drop_height: f64,
}

impl StochasticPopulation {
    pub fn new(
        user_density: f64,
        transmit_prob: f64,
        nonblocked_prob: f64,
        r_min: f64,
        r_max: f64,
        oriented_at_ris: bool,
    ) -> Result<Self, SimError> {
        if !(user_density >= 0.0) {
            return Err(SimError::invalid("user_density", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&transmit_prob) {
            return Err(SimError::invalid("transmit_prob", "must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&nonblocked_prob) {
            return Err(SimError::invalid("nonblocked_prob", "must be in [0, 1]"));
        }
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(SimError::InvalidBounds { r_min, r_max });
        }
        Ok(StochasticPopulation {
            user_density,
            transmit_prob,
            nonblocked_prob,
            r_min,
            r_max,
            oriented_at_ris,
            drop_height: 0.0,
        })
    }

    /// Build from a mean user count over the half-disk of radius `r_max`,
    /// the user-facing unit: λ_U = N̄ / (π r_max² / 2).
    pub fn from_mean_count(
        mean_count: f64,
        transmit_prob: f64,
        nonblocked_prob: f64,
        r_min: f64,
        r_max: f64,
        oriented_at_ris: bool,
    ) -> Result<Self, SimError> {
        if !(mean_count >= 0.0) {
            return Err(SimError::invalid("mean_count", "must be >= 0"));
        }
        let density = mean_count / (PI * r_max * r_max / 2.0);
        StochasticPopulation::new(
            density,
            transmit_prob,
            nonblocked_prob,
            r_min,
            r_max,
            oriented_at_ris,
        )
    }

    /// Mean number of dropped users over the half-annulus [r_min, r_max].
    pub fn mean_count(&self) -> f64 {
        self.user_density * PI * (self.r_max * self.r_max - self.r_min * self.r_min) / 2.0
    }
}

/// A received power together with the named multiplicative factors that
/// produce it; the factors always multiply back to the power.
#[derive(Debug, Clone)]
pub struct LinkBudget {
    pub received_power: f64,
    pub gain_breakdown: Vec<(&'static str, f64)>,
}

impl LinkBudget {
    fn new(factors: Vec<(&'static str, f64)>) -> Self {
        let received_power = factors.iter().map(|(_, v)| v).product();
        LinkBudget {
            received_power,
            gain_breakdown: factors,
        }
    }

    pub fn factor_product(&self) -> f64 {
        self.gain_breakdown.iter().map(|(_, v)| v).product()
    }
}

/// LOS link gain with explicit antenna gains:
/// `P_Tx G_Tx G_Rx c² exp(-κ_a r) / (4π r f)²`.
pub fn los_link_budget(
    r: f64,
    scene: &Scene,
    g_tx: f64,
    g_rx: f64,
) -> Result<LinkBudget, SimError> {
    if !(r > 0.0) {
        return Err(SimError::NonPositiveDistance(r));
    }
    let spreading = (SPEED_OF_LIGHT / (4.0 * PI * r * scene.frequency())).powi(2);
    Ok(LinkBudget::new(vec![
        ("tx_power", scene.tx_power()),
        ("tx_gain", g_tx),
        ("rx_gain", g_rx),
        ("spreading", spreading),
        ("absorption", (-scene.absorption() * r).exp()),
    ]))
}

pub fn los_link_gain(r: f64, scene: &Scene, g_tx: f64, g_rx: f64) -> Result<f64, SimError> {
    Ok(los_link_budget(r, scene, g_tx, g_rx)?.received_power)
}

/// LOS interference gain for randomly oriented nodes: unit expected gains
/// on both ends.
pub fn los_interference_gain(r: f64, scene: &Scene) -> Result<f64, SimError> {
    los_link_gain(r, scene, 1.0, 1.0)
}

/// Two-hop RIS link gain:
/// `P_Tx G_Tx G_Rx G_RIS exp(-κ_a (r1 + r2)) c² A_RIS / ((4π)³ f² r1² r2²)`.
pub fn ris_link_budget(
    r1: f64,
    r2: f64,
    scene: &Scene,
    g_tx: f64,
    g_rx: f64,
    g_ris: f64,
    a_ris: f64,
) -> Result<LinkBudget, SimError> {
    if !(r1 > 0.0) {
        return Err(SimError::NonPositiveDistance(r1));
    }
    if !(r2 > 0.0) {
        return Err(SimError::NonPositiveDistance(r2));
    }
    let f = scene.frequency();
    let spreading =
        SPEED_OF_LIGHT * SPEED_OF_LIGHT / ((4.0 * PI).powi(3) * f * f * r1 * r1 * r2 * r2);
    Ok(LinkBudget::new(vec![
        ("tx_power", scene.tx_power()),
        ("tx_gain", g_tx),
        ("rx_gain", g_rx),
        ("ris_gain", g_ris),
        ("ris_aperture", a_ris),
        ("spreading", spreading),
        ("absorption", (-scene.absorption() * (r1 + r2)).exp()),
    ]))
}

pub fn ris_link_gain(
    r1: f64,
    r2: f64,
    scene: &Scene,
    g_tx: f64,
    g_rx: f64,
    g_ris: f64,
    a_ris: f64,
) -> Result<f64, SimError> {
    Ok(ris_link_budget(r1, r2, scene, g_tx, g_rx, g_ris, a_ris)?.received_power)
}

/// Expected aggregated direct LOS interference at the Rx:
/// `P_Tx c² p_T p_N λ_U / (8π f²) · ∫ exp(-κ_a r)/r dr`.
pub fn mean_los_interference(pop: &StochasticPopulation, scene: &Scene) -> Result<f64, SimError> {
    let integral = attenuation_integral(pop.r_min, pop.r_max, scene.absorption())?;
    let f = scene.frequency();
    Ok(scene.tx_power() * SPEED_OF_LIGHT * SPEED_OF_LIGHT
        * pop.transmit_prob
        * pop.nonblocked_prob
        * pop.user_density
        / (8.0 * PI * f * f)
        * integral)
}

/// Expected aggregated interference incident on the RIS:
/// `P_Tx A_RIS p_T p_N λ_U / 4 · ∫ exp(-κ_a r)/r dr`, multiplied by `G_Tx`
/// when the interferers beamform toward the RIS.
pub fn mean_ris_incident_interference(
    pop: &StochasticPopulation,
    a_ris: f64,
    g_tx: f64,
    scene: &Scene,
) -> Result<f64, SimError> {
    let integral = attenuation_integral(pop.r_min, pop.r_max, scene.absorption())?;
    let orientation_gain = if pop.oriented_at_ris { g_tx } else { 1.0 };
    Ok(scene.tx_power() * a_ris * pop.transmit_prob * pop.nonblocked_prob * pop.user_density
        / 4.0
        * orientation_gain
        * integral)
}

/// Interference relayed from the RIS to the Rx:
/// `I_RIS · c² G_Rx √G_RIS / (4π r_RIS,Rx f)²`.
pub fn mean_ris_relayed_interference(
    i_ris: f64,
    g_rx: f64,
    g_ris: f64,
    r_ris_rx: f64,
    scene: &Scene,
) -> Result<f64, SimError> {
    if !(r_ris_rx > 0.0) {
        return Err(SimError::NonPositiveDistance(r_ris_rx));
    }
    let f = scene.frequency();
    Ok(i_ris * SPEED_OF_LIGHT * SPEED_OF_LIGHT * g_rx * g_ris.sqrt()
        / (4.0 * PI * r_ris_rx * f).powi(2))
}

/// Watts to dBW; `-inf` for zero power.
pub fn to_db(power_w: f64) -> f64 {
    10.0 * power_w.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarArray;
    use crate::vec3::Vec3;

    fn test_scene(kappa: f64) -> Scene {
        let a = PlanarArray::new(
            2,
            2,
            1e-3,
            Vec3::ZERO,
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        Scene::new(a.clone(), a.clone(), a, 140e9, kappa, 1.0).unwrap()
    }

    /// Independent Friis evaluation: P G1 G2 (c / (4π r f))² exp(-κ r).
    fn friis_oracle(p: f64, g1: f64, g2: f64, r: f64, f: f64, kappa: f64) -> f64 {
        p * g1 * g2 * (SPEED_OF_LIGHT / (4.0 * PI * r * f)).powi(2) * (-kappa * r).exp()
    }

    #[test]
    fn los_gain_matches_friis_oracle() {
        let scene = test_scene(0.0);
        let got = los_link_gain(4.0, &scene, 1.0, 1.0).unwrap();
        let want = friis_oracle(1.0, 1.0, 1.0, 4.0, 140e9, 0.0);
        assert!((got / want - 1.0).abs() < 1e-14);
        assert!((got - 1.82e-9).abs() < 1e-11, "got {got}");
        assert!((to_db(got) + 87.4).abs() < 0.05);

        let got = los_interference_gain(1.0, &scene).unwrap();
        assert!((got - 2.91e-8).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn los_gain_inverse_square_and_absorption_factorization() {
        let scene = test_scene(0.0);
        let p1 = los_link_gain(3.0, &scene, 4.0, 16.0).unwrap();
        let p2 = los_link_gain(6.0, &scene, 4.0, 16.0).unwrap();
        assert!((p1 / p2 - 4.0).abs() < 1e-12);

        let absorbing = test_scene(0.05);
        let pa = los_link_gain(3.0, &absorbing, 4.0, 16.0).unwrap();
        assert!((pa / p1 - (-0.05f64 * 3.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn ris_gain_symmetry_and_scaling() {
        let scene = test_scene(0.0);
        let a = ris_link_gain(2.0, 5.0, &scene, 16.0, 16.0, 64.0, 1e-3).unwrap();
        let b = ris_link_gain(5.0, 2.0, &scene, 16.0, 16.0, 64.0, 1e-3).unwrap();
        assert_eq!(a, b);

        let c = ris_link_gain(4.0, 10.0, &scene, 16.0, 16.0, 64.0, 1e-3).unwrap();
        assert!((a / c - 16.0).abs() < 1e-10);

        // Degenerate 1x1 "RIS" has zero capture area.
        let z = ris_link_gain(2.0, 5.0, &scene, 16.0, 16.0, 1.0, 0.0).unwrap();
        assert_eq!(z, 0.0);

        assert!(ris_link_gain(0.0, 5.0, &scene, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn budgets_multiply_to_power() {
        let scene = test_scene(0.02);
        let b = los_link_budget(3.7, &scene, 9.0, 25.0).unwrap();
        assert!((b.factor_product() / b.received_power - 1.0).abs() < 1e-12);
        let b = ris_link_budget(1.9, 4.1, &scene, 9.0, 25.0, 100.0, 2e-3).unwrap();
        assert!((b.factor_product() / b.received_power - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_interference_scaling() {
        let scene = test_scene(0.0);
        let pop = StochasticPopulation::new(2.0, 0.5, 0.8, 0.1, 10.0, false).unwrap();

        let silent = StochasticPopulation {
            transmit_prob: 0.0,
            ..pop.clone()
        };
        assert_eq!(mean_los_interference(&silent, &scene).unwrap(), 0.0);

        let base = mean_los_interference(&pop, &scene).unwrap();
        let dense = StochasticPopulation {
            user_density: 4.0,
            ..pop.clone()
        };
        let doubled = mean_los_interference(&dense, &scene).unwrap();
        assert!((doubled / base - 2.0).abs() < 1e-12);

        // Oriented / unoriented incident interference = G_Tx exactly.
        let oriented = StochasticPopulation {
            oriented_at_ris: true,
            ..pop.clone()
        };
        let i0 = mean_ris_incident_interference(&pop, 1e-3, 16.0, &scene).unwrap();
        let i1 = mean_ris_incident_interference(&oriented, 1e-3, 16.0, &scene).unwrap();
        assert!((i1 / i0 - 16.0).abs() < 1e-12);

        assert_eq!(
            mean_ris_incident_interference(&pop, 0.0, 16.0, &scene).unwrap(),
            0.0
        );
    }

    #[test]
    fn relayed_interference_sqrt_gain_scaling() {
        let scene = test_scene(0.0);
        let plain = mean_ris_relayed_interference(1e-6, 4.0, 1.0, 2.0, &scene).unwrap();
        let hop = los_link_gain(2.0, &scene, 1.0, 4.0).unwrap();
        assert!((plain / (1e-6 * hop) - 1.0).abs() < 1e-12);

        let g4 = mean_ris_relayed_interference(1e-6, 4.0, 64.0, 2.0, &scene).unwrap();
        let g16 = mean_ris_relayed_interference(1e-6, 4.0, 256.0, 2.0, &scene).unwrap();
        assert!((g16 / g4 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn population_validation_and_count_conversion() {
        assert!(StochasticPopulation::new(1.0, 1.5, 1.0, 0.1, 10.0, false).is_err());
        assert!(StochasticPopulation::new(1.0, 1.0, 1.0, 0.0, 10.0, false).is_err());
        assert!(StochasticPopulation::new(1.0, 1.0, 1.0, 5.0, 2.0, false).is_err());

        let pop = StochasticPopulation::from_mean_count(10.0, 1.0, 1.0, 0.1, 10.0, false).unwrap();
        let expected_density = 10.0 / (PI * 100.0 / 2.0);
        assert!((pop.user_density - expected_density).abs() < 1e-15);
        // Annulus mean differs from the half-disk count only by the r_min hole.
        assert!((pop.mean_count() - 10.0).abs() < 1e-2);
    }
}
