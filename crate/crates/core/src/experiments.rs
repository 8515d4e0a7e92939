//! The four canned experiments behind the CLI: RIS size sweep, moving Rx,
//! interference validation and the analytic power comparison.
//!
//! All internal columns are watts; dB conversion happens at the I/O boundary
//! (plot-ready columns, no plotting in-tool).

use crate::analytic::{
    los_link_gain, mean_los_interference, mean_ris_incident_interference,
    mean_ris_relayed_interference, ris_link_gain,
};
use crate::config::{ConfigError, ExperimentConfig};
use crate::error::SimError;
use crate::geometry::{aperture_area, near_field_radius, Scene};
use crate::monte_carlo::{realization_seed, run_ensemble, OrientationMode, Target};
use crate::phase_sim::{
    incident_field_at_ris, received_power_direct, received_power_via_ris, ris_reflection_phases,
    steering_phases,
};
use crate::table::{ResultTable, TableMetadata};
use std::time::Instant;

/// Desired-link power via the RIS from the phase-exact simulator: Tx steered
/// at the RIS, RIS configured between Tx and Rx, Rx steered at the RIS.
pub fn desired_ris_power_sim(scene: &Scene) -> Result<f64, SimError> {
    let lambda = scene.wavelength();
    let tx_prof = steering_phases(
        &scene.tx,
        (scene.ris.origin() - scene.tx.origin())
            .normalized()
            .ok_or_else(|| SimError::DegenerateGeometry("Tx coincides with the RIS".into()))?,
        lambda,
    );
    let rx_prof = steering_phases(
        &scene.rx,
        (scene.ris.origin() - scene.rx.origin())
            .normalized()
            .ok_or_else(|| SimError::DegenerateGeometry("Rx coincides with the RIS".into()))?,
        lambda,
    );
    let ris_prof =
        ris_reflection_phases(&scene.ris, scene.tx.origin(), scene.rx.origin(), lambda)?;
    let field = incident_field_at_ris(&scene.tx, &tx_prof, &scene.ris, &ris_prof, scene)?;
    received_power_via_ris(&field, &scene.ris, &scene.rx, &rx_prof, scene)
}

/// Desired-link power via the RIS from the closed form, far-field gains
/// G = N on every array.
pub fn desired_ris_power_analytic(scene: &Scene) -> Result<f64, SimError> {
    let r1 = scene.tx.origin().distance(scene.ris.origin());
    let r2 = scene.rx.origin().distance(scene.ris.origin());
    ris_link_gain(
        r1,
        r2,
        scene,
        scene.tx.gain(),
        scene.rx.gain(),
        scene.ris.gain(),
        aperture_area(&scene.ris),
    )
}

/// Direct LOS desired-link power, Tx and Rx beamforming at each other.
pub fn desired_los_power_analytic(scene: &Scene) -> Result<f64, SimError> {
    let r = scene.tx.origin().distance(scene.rx.origin());
    los_link_gain(r, scene, scene.tx.gain(), scene.rx.gain())
}

/// Same link from the phase-exact simulator.
pub fn desired_los_power_sim(scene: &Scene) -> Result<f64, SimError> {
    let lambda = scene.wavelength();
    let tx_prof = steering_phases(
        &scene.tx,
        (scene.rx.origin() - scene.tx.origin())
            .normalized()
            .ok_or(SimError::ZeroLengthPath)?,
        lambda,
    );
    let rx_prof = steering_phases(
        &scene.rx,
        (scene.tx.origin() - scene.rx.origin())
            .normalized()
            .ok_or(SimError::ZeroLengthPath)?,
        lambda,
    );
    received_power_direct(&scene.tx, &tx_prof, &scene.rx, &rx_prof, scene)
}

/// Analytic interference relayed from the RIS to the Rx for one orientation
/// mode: incident mean through the RIS-to-Rx hop.
pub fn analytic_relayed_interference(
    cfg: &ExperimentConfig,
    scene: &Scene,
    oriented_at_ris: bool,
) -> Result<f64, SimError> {
    let pop = cfg.population(oriented_at_ris)?;
    let g_tx = (cfg.population.interferer_n_x * cfg.population.interferer_n_y) as f64;
    let incident =
        mean_ris_incident_interference(&pop, aperture_area(&scene.ris), g_tx, scene)?;
    let r2 = scene.rx.origin().distance(scene.ris.origin());
    mean_ris_relayed_interference(incident, scene.rx.gain(), scene.ris.gain(), r2, scene)
}

fn metadata(cfg: &ExperimentConfig, started: Instant) -> TableMetadata {
    TableMetadata {
        scenario: cfg.scenario.name().to_string(),
        master_seed: cfg.master_seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: started.elapsed().as_secs_f64(),
        config_echo: cfg.effective_toml(),
    }
}

/// RIS size sweep at fixed geometry: analytic vs simulated RIS-link power,
/// the direct LOS reference and the near-field markers per size.
pub fn run_ris_size_sweep(cfg: &ExperimentConfig) -> Result<ResultTable, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut rows = Vec::new();
    for &side in &cfg.ris_sides {
        let scene = cfg.scene_with_ris_side(side)?;
        let lambda = scene.wavelength();
        let nf = near_field_radius(&scene.ris, lambda);
        rows.push(vec![
            side as f64,
            desired_ris_power_analytic(&scene)?,
            desired_ris_power_sim(&scene)?,
            desired_los_power_analytic(&scene)?,
            nf,
            nf / 2.0, // break-down boundary D²/λ
        ]);
    }
    let mut table = ResultTable::new(
        &[
            "ris_side",
            "analytic_ris_w",
            "sim_ris_w",
            "los_w",
            "near_field_radius_m",
            "breakdown_m",
        ],
        metadata(cfg, started),
    );
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Received power along an Rx trajectory, flagging waypoints inside the
/// break-down boundary D²/λ of the RIS.
pub fn run_moving_rx(cfg: &ExperimentConfig) -> Result<ResultTable, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let start: crate::vec3::Vec3 = cfg.trajectory.start.into();
    let end: crate::vec3::Vec3 = cfg.trajectory.end.into();
    let n = cfg.trajectory.waypoints;
    let mut rows = Vec::new();
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let rx_pos = start + (end - start) * t;
        let scene = cfg.scene_with_rx_at(rx_pos)?;
        let ris_distance = rx_pos.distance(scene.ris.origin());
        let breakdown = near_field_radius(&scene.ris, scene.wavelength()) / 2.0;
        rows.push(vec![
            ris_distance,
            desired_los_power_analytic(&scene)?,
            desired_ris_power_analytic(&scene)?,
            desired_ris_power_sim(&scene)?,
            if ris_distance < breakdown { 1.0 } else { 0.0 },
        ]);
    }
    let mut table = ResultTable::new(
        &[
            "ris_distance_m",
            "los_w",
            "analytic_ris_w",
            "sim_ris_w",
            "in_breakdown",
        ],
        metadata(cfg, started),
    );
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Theory-versus-simulation benchmark for interference relayed through the
/// RIS, both orientation modes, with Monte Carlo confidence intervals and
/// convergence flags.
pub fn run_interference_validation(cfg: &ExperimentConfig) -> Result<ResultTable, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let interferer = (cfg.population.interferer_n_x, cfg.population.interferer_n_y);
    let mut rows = Vec::new();
    for (k, &side) in cfg.ris_sides.iter().enumerate() {
        let scene = cfg.scene_with_ris_side(side)?;
        // One substream per sweep point; both modes share it so they see
        // the same interferer drops.
        let seed = realization_seed(cfg.master_seed, 1000 + k as u64);
        let mut row = vec![side as f64];
        for mode in [OrientationMode::TowardRis, OrientationMode::Random] {
            let oriented = mode == OrientationMode::TowardRis;
            let analytic = analytic_relayed_interference(cfg, &scene, oriented)?;
            let pop = cfg.population(oriented)?;
            let stats = run_ensemble(
                &scene,
                &pop,
                interferer,
                mode,
                Target::RxViaRis,
                cfg.n_realizations,
                seed,
            )?;
            row.extend([
                analytic,
                stats.mean_power,
                stats.ci95_halfwidth,
                if stats.converged() { 1.0 } else { 0.0 },
            ]);
        }
        rows.push(row);
    }
    let mut table = ResultTable::new(
        &[
            "ris_side",
            "analytic_toward_w",
            "mc_toward_mean_w",
            "mc_toward_ci95_w",
            "toward_converged",
            "analytic_random_w",
            "mc_random_mean_w",
            "mc_random_ci95_w",
            "random_converged",
        ],
        metadata(cfg, started),
    );
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Purely analytic comparison of the desired links against the interference
/// contributions across RIS sizes.
pub fn run_power_comparison(cfg: &ExperimentConfig) -> Result<ResultTable, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut rows = Vec::new();
    for &side in &cfg.ris_sides {
        let scene = cfg.scene_with_ris_side(side)?;
        let pop = cfg.population(false)?;
        rows.push(vec![
            side as f64,
            desired_ris_power_analytic(&scene)?,
            desired_los_power_analytic(&scene)?,
            analytic_relayed_interference(cfg, &scene, true)?,
            analytic_relayed_interference(cfg, &scene, false)?,
            mean_los_interference(&pop, &scene)?,
        ]);
    }
    let mut table = ResultTable::new(
        &[
            "ris_side",
            "desired_ris_w",
            "desired_los_w",
            "relayed_toward_w",
            "relayed_random_w",
            "los_interference_w",
        ],
        metadata(cfg, started),
    );
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}
