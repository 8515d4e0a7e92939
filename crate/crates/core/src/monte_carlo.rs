//! Stochastic scene generation and seeded ensemble execution.
//!
//! Interferers are dropped as a Poisson process on the half-annulus in front
//! of the RIS (the RIS is wall-mounted), thinned by the transmit and
//! non-blocked probabilities, oriented either randomly or toward the RIS,
//! and evaluated through the phase-exact simulator. Distinct interferers are
//! mutually incoherent: powers, not fields, are summed across the active set;
//! within one interferer's own array the summation stays coherent.
//!
//! Reproducibility: every realization draws from its own substream whose seed
//! is a pure function of the master seed and the realization counter, so
//! reruns are bit-identical and realizations could be evaluated in any order.

use crate::analytic::StochasticPopulation;
use crate::error::SimError;
use crate::geometry::{PlanarArray, Scene};
use crate::phase_sim::{
    incident_field_at_ris, received_power_direct, received_power_via_ris, ris_reflection_phases,
    steering_phases,
};
use crate::vec3::Vec3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One interfering transmitter of a realization.
#[derive(Debug, Clone)]
pub struct InterfererNode {
    pub position: Vec3,
    pub array: PlanarArray,
    pub beam_dir: Vec3,
    /// Survived the p_T · p_N thinning and contributes to the active set Φ.
    pub active: bool,
}

/// One realization of the Poisson interferer set Φ.
#[derive(Debug, Clone)]
pub struct InterfererField {
    pub nodes: Vec<InterfererNode>,
    pub realization_seed: u64,
}

/// Beamforming behavior of the interfering transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationMode {
    Random,
    TowardRis,
}

/// Where the aggregate interference is observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// At the Rx, relayed through the RIS configured for the desired link.
    RxViaRis,
    /// At the Rx over the direct paths (no RIS bounce).
    RxDirect,
    /// Total power captured over the RIS surface.
    RisIncident,
}

/// Mean, spread and 95% confidence half-width of per-realization aggregate
/// powers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub mean_power: f64,
    pub std_power: f64,
    pub ci95_halfwidth: f64,
    pub n_realizations: usize,
    pub per_realization_powers: Vec<f64>,
}

impl EnsembleStats {
    pub fn from_powers(powers: Vec<f64>) -> Self {
        let n = powers.len();
        assert!(n >= 1, "need at least one realization");
        let mean = powers.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
            var.sqrt()
        };
        let ci95 = if n < 2 {
            0.0
        } else {
            1.96 * std / (n as f64).sqrt()
        };
        EnsembleStats {
            mean_power: mean,
            std_power: std,
            ci95_halfwidth: ci95,
            n_realizations: n,
            per_realization_powers: powers,
        }
    }

    /// Non-convergence flag: a 95% CI half-width above 20% of the mean marks
    /// an ensemble whose mean estimate should not be trusted (the random
    /// orientation runs typically trip this).
    pub fn converged(&self) -> bool {
        self.mean_power > 0.0 && self.ci95_halfwidth <= 0.2 * self.mean_power
    }
}

/// SplitMix64 step, the substream seed derivation.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for realization `index` under `master_seed`; a pure counter-based
/// function so substreams are independent of evaluation order.
pub fn realization_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index))
}

/// Draw one Poisson interferer realization on the half-annulus
/// `[r_min, r_max]` in front of the RIS; each node is independently marked
/// active with probability `p_T · p_N`.
pub fn sample_interferers(
    pop: &StochasticPopulation,
    ris: &PlanarArray,
    interferer_array: (usize, usize),
    spacing_d: f64,
    seed: u64,
) -> InterfererField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = pop.mean_count();
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("valid Poisson mean").sample(&mut rng) as usize
    } else {
        0
    };
    let p_active = pop.transmit_prob * pop.nonblocked_prob;
    let h_axis = ris.horizontal_axis();
    let mut nodes = Vec::with_capacity(count);
    for _ in 0..count {
        // Uniform over the half-annulus: angle uniform around boresight,
        // radius density proportional to r.
        let theta = rng.random_range(-PI / 2.0..PI / 2.0);
        let u: f64 = rng.random_range(0.0..1.0);
        let r = (pop.r_min * pop.r_min + u * (pop.r_max * pop.r_max - pop.r_min * pop.r_min))
            .sqrt();
        let position = ris.origin()
            + ris.boresight() * (r * theta.cos())
            + h_axis * (r * theta.sin())
            + ris.up() * pop.drop_height;
        let array = PlanarArray::facing(
            interferer_array.0,
            interferer_array.1,
            spacing_d,
            position,
            ris.origin(),
        )
        .expect("interferer cannot coincide with the RIS center");
        let beam_dir = (ris.origin() - position).normalized().unwrap();
        let active = rng.random_bool(p_active);
        nodes.push(InterfererNode {
            position,
            array,
            beam_dir,
            active,
        });
    }
    InterfererField {
        nodes,
        realization_seed: seed,
    }
}

/// Uniform direction on the unit sphere.
fn random_unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let az: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    Vec3::new(s * az.cos(), s * az.sin(), z)
}

/// Assign beam directions: toward the RIS center, or uniformly random over
/// the full sphere.
pub fn assign_orientations(
    mut field: InterfererField,
    mode: OrientationMode,
    ris: &PlanarArray,
    seed: u64,
) -> InterfererField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for node in &mut field.nodes {
        node.beam_dir = match mode {
            OrientationMode::TowardRis => (ris.origin() - node.position).normalized().unwrap(),
            OrientationMode::Random => random_unit_vector(&mut rng),
        };
    }
    field
}

/// Aggregate interference of one realization at the chosen target: the sum
/// of per-interferer powers over the active set.
pub fn simulate_realization(
    scene: &Scene,
    field: &InterfererField,
    target: Target,
) -> Result<f64, SimError> {
    let lambda = scene.wavelength();
    // The RIS stays configured for the desired link; the Rx beamforms at the
    // RIS (via-RIS observation keeps that beamformer for the direct paths
    // too, the Rx has only one configuration at a time).
    let ris_profile = ris_reflection_phases(
        &scene.ris,
        scene.tx.origin(),
        scene.rx.origin(),
        lambda,
    )?;
    let rx_profile = steering_phases(
        &scene.rx,
        (scene.ris.origin() - scene.rx.origin())
            .normalized()
            .ok_or_else(|| SimError::DegenerateGeometry("Rx coincides with the RIS".into()))?,
        lambda,
    );

    let mut total = 0.0;
    for node in field.nodes.iter().filter(|n| n.active) {
        let tx_profile = steering_phases(&node.array, node.beam_dir, lambda);
        let power = match target {
            Target::RisIncident => {
                incident_field_at_ris(&node.array, &tx_profile, &scene.ris, &ris_profile, scene)?
                    .total_power()
            }
            Target::RxViaRis => {
                let f = incident_field_at_ris(
                    &node.array,
                    &tx_profile,
                    &scene.ris,
                    &ris_profile,
                    scene,
                )?;
                received_power_via_ris(&f, &scene.ris, &scene.rx, &rx_profile, scene)?
            }
            Target::RxDirect => {
                received_power_direct(&node.array, &tx_profile, &scene.rx, &rx_profile, scene)?
            }
        };
        total += power;
    }
    Ok(total)
}

/// Run `n_realizations` seeded realizations and collect statistics.
/// Identical inputs reproduce `per_realization_powers` bit-exactly.
pub fn run_ensemble(
    scene: &Scene,
    pop: &StochasticPopulation,
    interferer_array: (usize, usize),
    mode: OrientationMode,
    target: Target,
    n_realizations: usize,
    master_seed: u64,
) -> Result<EnsembleStats, SimError> {
    if n_realizations < 1 {
        return Err(SimError::invalid("n_realizations", "must be >= 1"));
    }
    let spacing = scene.wavelength() / 2.0;
    let mut powers = Vec::with_capacity(n_realizations);
    for i in 0..n_realizations {
        let seed = realization_seed(master_seed, i as u64);
        let field = sample_interferers(pop, &scene.ris, interferer_array, spacing, seed);
        let field = assign_orientations(field, mode, &scene.ris, realization_seed(seed, u64::MAX));
        powers.push(simulate_realization(scene, &field, target)?);
    }
    Ok(EnsembleStats::from_powers(powers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SPEED_OF_LIGHT;

    fn lambda() -> f64 {
        SPEED_OF_LIGHT / 140e9
    }

    fn wall_ris(n: usize) -> PlanarArray {
        PlanarArray::new(
            n,
            n,
            lambda() / 2.0,
            Vec3::ZERO,
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap()
    }

    fn small_scene(ris_side: usize) -> Scene {
        let ris = wall_ris(ris_side);
        let tx = PlanarArray::facing(4, 4, lambda() / 2.0, Vec3::new(-2.0, 2.0, 0.0), Vec3::ZERO)
            .unwrap();
        let rx = PlanarArray::facing(4, 4, lambda() / 2.0, Vec3::new(2.0, 2.0, 0.0), Vec3::ZERO)
            .unwrap();
        Scene::new(tx, rx, ris, 140e9, 0.0, 1.0).unwrap()
    }

    fn pop(mean_count: f64, r_max: f64) -> StochasticPopulation {
        StochasticPopulation::from_mean_count(mean_count, 1.0, 1.0, 0.1, r_max, false).unwrap()
    }

    #[test]
    fn sampled_positions_respect_the_half_annulus() {
        let ris = wall_ris(4);
        let p = pop(40.0, 5.0);
        let mut seen = 0usize;
        for seed in 0..200 {
            let field = sample_interferers(&p, &ris, (2, 2), lambda() / 2.0, seed);
            for node in &field.nodes {
                let d = node.position.distance(ris.origin());
                assert!(d >= p.r_min - 1e-12 && d <= p.r_max + 1e-12);
                // In front of the wall.
                assert!((node.position - ris.origin()).dot(ris.boresight()) >= 0.0);
                seen += 1;
            }
        }
        assert!(seen > 1000);
    }

    #[test]
    fn poisson_count_mean_matches_population() {
        let ris = wall_ris(4);
        let p = pop(10.0, 5.0);
        let draws = 10_000;
        let mut total = 0usize;
        for seed in 0..draws {
            total += sample_interferers(&p, &ris, (2, 2), lambda() / 2.0, seed)
                .nodes
                .len();
        }
        let mean = total as f64 / draws as f64;
        let expected = p.mean_count();
        // 3 sigma of the empirical mean of Poisson draws.
        let tol = 3.0 * expected.sqrt() / (draws as f64).sqrt();
        assert!((mean - expected).abs() < tol, "mean {mean} vs {expected}");
    }

    #[test]
    fn vanishing_density_gives_empty_fields() {
        let ris = wall_ris(4);
        let p = StochasticPopulation::new(1e-9, 1.0, 1.0, 0.1, 2.0, false).unwrap();
        let mut total = 0;
        for seed in 0..200 {
            total += sample_interferers(&p, &ris, (2, 2), lambda() / 2.0, seed)
                .nodes
                .len();
        }
        assert!(total <= 1);
    }

    #[test]
    fn toward_ris_orientation_points_at_the_ris() {
        let ris = wall_ris(4);
        let p = pop(20.0, 5.0);
        let field = sample_interferers(&p, &ris, (2, 2), lambda() / 2.0, 7);
        let field = assign_orientations(field, OrientationMode::TowardRis, &ris, 8);
        for node in &field.nodes {
            let want = (ris.origin() - node.position).normalized().unwrap();
            assert!(node.beam_dir.dot(want) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn random_orientations_average_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut acc = Vec3::ZERO;
        for _ in 0..n {
            let v = random_unit_vector(&mut rng);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            acc = acc + v;
        }
        assert!((acc / n as f64).norm() < 0.02);
    }

    #[test]
    fn empty_and_single_node_realizations() {
        let scene = small_scene(4);
        let empty = InterfererField {
            nodes: vec![],
            realization_seed: 0,
        };
        assert_eq!(
            simulate_realization(&scene, &empty, Target::RxViaRis).unwrap(),
            0.0
        );

        let p = pop(20.0, 3.0);
        let field = sample_interferers(&p, &scene.ris, (2, 2), lambda() / 2.0, 3);
        let field = assign_orientations(field, OrientationMode::TowardRis, &scene.ris, 4);
        let first_active = field
            .nodes
            .iter()
            .find(|n| n.active)
            .expect("some active node")
            .clone();
        let single = InterfererField {
            nodes: vec![first_active.clone()],
            realization_seed: 0,
        };
        // Power additivity: duplicating the node exactly doubles the sum.
        let double = InterfererField {
            nodes: vec![first_active.clone(), first_active],
            realization_seed: 0,
        };
        for target in [Target::RxViaRis, Target::RxDirect, Target::RisIncident] {
            let p1 = simulate_realization(&scene, &single, target).unwrap();
            let p2 = simulate_realization(&scene, &double, target).unwrap();
            assert!(p1 > 0.0);
            assert!((p2 / p1 - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn aggregate_equals_sum_of_single_node_runs() {
        let scene = small_scene(4);
        let p = pop(15.0, 3.0);
        let field = sample_interferers(&p, &scene.ris, (2, 2), lambda() / 2.0, 5);
        let field = assign_orientations(field, OrientationMode::Random, &scene.ris, 6);
        let total = simulate_realization(&scene, &field, Target::RisIncident).unwrap();
        let mut by_parts = 0.0;
        for node in field.nodes.iter().filter(|n| n.active) {
            let single = InterfererField {
                nodes: vec![node.clone()],
                realization_seed: 0,
            };
            by_parts += simulate_realization(&scene, &single, Target::RisIncident).unwrap();
        }
        assert!((total - by_parts).abs() <= 1e-12 * total.max(1e-300));
    }

    #[test]
    fn ensembles_are_deterministic_in_the_master_seed() {
        let scene = small_scene(4);
        let p = pop(5.0, 2.0);
        let a = run_ensemble(
            &scene,
            &p,
            (2, 2),
            OrientationMode::Random,
            Target::RisIncident,
            20,
            42,
        )
        .unwrap();
        let b = run_ensemble(
            &scene,
            &p,
            (2, 2),
            OrientationMode::Random,
            Target::RisIncident,
            20,
            42,
        )
        .unwrap();
        assert_eq!(a.per_realization_powers, b.per_realization_powers);
        let c = run_ensemble(
            &scene,
            &p,
            (2, 2),
            OrientationMode::Random,
            Target::RisIncident,
            20,
            43,
        )
        .unwrap();
        assert_ne!(a.per_realization_powers, c.per_realization_powers);
    }

    #[test]
    fn single_realization_stats_degenerate_cleanly() {
        let scene = small_scene(4);
        let p = pop(5.0, 2.0);
        let s = run_ensemble(
            &scene,
            &p,
            (2, 2),
            OrientationMode::TowardRis,
            Target::RisIncident,
            1,
            1,
        )
        .unwrap();
        assert_eq!(s.n_realizations, 1);
        assert_eq!(s.std_power, 0.0);
        assert_eq!(s.ci95_halfwidth, 0.0);
        assert_eq!(s.mean_power, s.per_realization_powers[0]);
    }

    #[test]
    fn stats_mean_matches_recomputation() {
        let s = EnsembleStats::from_powers(vec![1.0, 2.0, 3.0, 4.0]);
        assert!((s.mean_power - 2.5).abs() < 1e-15);
        assert!(s.ci95_halfwidth > 0.0);
    }
}
