//! Array geometry: element lattices, apertures, inter-node paths and the
//! near-field radius.
//!
//! Conventions used throughout the crate:
//! - all lengths in meters, powers in watts, gains linear;
//! - arrays are centered on their origin, element lattice symmetric about it;
//! - the array plane is spanned by `(boresight × up, up)`;
//! - local azimuth is measured in the array plane from the horizontal axis,
//!   local elevation from the array plane toward boresight.

use crate::error::SimError;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rectangular planar array of isotropic elements on a uniform lattice
/// (used for the Tx, the Rx, the RIS and the interferer arrays alike).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarArray {
    n_x: usize,
    n_y: usize,
    spacing_d: f64,
    origin: Vec3,
    boresight: Vec3,
    up: Vec3,
}

impl PlanarArray {
    pub fn new(
        n_x: usize,
        n_y: usize,
        spacing_d: f64,
        origin: Vec3,
        boresight: Vec3,
        up: Vec3,
    ) -> Result<Self, SimError> {
        if n_x < 1 || n_y < 1 {
            return Err(SimError::invalid("n_x/n_y", "element counts must be >= 1"));
        }
        if !(spacing_d > 0.0) {
            return Err(SimError::invalid("spacing_d", "element pitch must be > 0"));
        }
        let boresight = boresight
            .normalized()
            .ok_or_else(|| SimError::invalid("boresight", "zero vector"))?;
        let up = up
            .normalized()
            .ok_or_else(|| SimError::invalid("up", "zero vector"))?;
        if boresight.dot(up).abs() >= 1e-9 {
            return Err(SimError::invalid(
                "up",
                "boresight and up must be orthogonal",
            ));
        }
        Ok(PlanarArray {
            n_x,
            n_y,
            spacing_d,
            origin,
            boresight,
            up,
        })
    }

    /// Array at `origin` with boresight pointed at `target`; `up` is picked
    /// as the projection of global +z (or +x when boresight is vertical).
    pub fn facing(
        n_x: usize,
        n_y: usize,
        spacing_d: f64,
        origin: Vec3,
        target: Vec3,
    ) -> Result<Self, SimError> {
        let boresight = (target - origin).normalized().ok_or_else(|| {
            SimError::DegenerateGeometry("array origin coincides with its target".into())
        })?;
        let z = Vec3::new(0.0, 0.0, 1.0);
        let candidate = z - boresight * z.dot(boresight);
        let up = match candidate.normalized() {
            Some(u) => u,
            None => {
                let x = Vec3::new(1.0, 0.0, 0.0);
                (x - boresight * x.dot(boresight)).normalized().unwrap()
            }
        };
        PlanarArray::new(n_x, n_y, spacing_d, origin, boresight, up)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn spacing(&self) -> f64 {
        self.spacing_d
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn boresight(&self) -> Vec3 {
        self.boresight
    }

    pub fn up(&self) -> Vec3 {
        self.up
    }

    /// In-plane horizontal axis, `boresight × up`.
    pub fn horizontal_axis(&self) -> Vec3 {
        self.boresight.cross(self.up)
    }

    pub fn num_elements(&self) -> usize {
        self.n_x * self.n_y
    }

    /// Far-field gain convention for isotropic elements: G = N.
    pub fn gain(&self) -> f64 {
        self.num_elements() as f64
    }

    /// Physical side lengths `((n_x - 1) d, (n_y - 1) d)`.
    pub fn side_lengths(&self) -> (f64, f64) {
        (
            (self.n_x - 1) as f64 * self.spacing_d,
            (self.n_y - 1) as f64 * self.spacing_d,
        )
    }

    /// Characteristic dimension D: the longer side length.
    pub fn characteristic_dimension(&self) -> f64 {
        let (sx, sy) = self.side_lengths();
        sx.max(sy)
    }

    /// Express a global direction in the local `(horizontal, up, boresight)`
    /// basis.
    pub fn to_local(&self, dir: Vec3) -> Vec3 {
        Vec3::new(
            dir.dot(self.horizontal_axis()),
            dir.dot(self.up),
            dir.dot(self.boresight),
        )
    }

    /// Element centers in row-major order (horizontal index fastest),
    /// symmetric about the array origin.
    pub fn element_positions(&self) -> Vec<Vec3> {
        let h = self.horizontal_axis();
        let cx = (self.n_x as f64 - 1.0) / 2.0;
        let cy = (self.n_y as f64 - 1.0) / 2.0;
        let mut out = Vec::with_capacity(self.num_elements());
        for iy in 0..self.n_y {
            for ix in 0..self.n_x {
                let dx = (ix as f64 - cx) * self.spacing_d;
                let dy = (iy as f64 - cy) * self.spacing_d;
                out.push(self.origin + h * dx + self.up * dy);
            }
        }
        out
    }
}

/// Distance `2 D^2 / λ` beyond which plane-wave approximations of the
/// aperture hold. `D` is the longer side of the array; a 1x1 array has no
/// aperture and returns 0.
pub fn near_field_radius(array: &PlanarArray, wavelength: f64) -> f64 {
    assert!(wavelength > 0.0, "wavelength must be positive");
    let d = array.characteristic_dimension();
    2.0 * d * d / wavelength
}

/// Capture area `(n_x - 1) d × (n_y - 1) d`; zero whenever either dimension
/// is a single element.
pub fn aperture_area(array: &PlanarArray) -> f64 {
    let (sx, sy) = array.side_lengths();
    sx * sy
}

/// Desired-link scene: the three fixed nodes plus channel constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    pub tx: PlanarArray,
    pub rx: PlanarArray,
    pub ris: PlanarArray,
    frequency_f: f64,
    absorption_kappa: f64,
    tx_power: f64,
}

impl Scene {
    pub fn new(
        tx: PlanarArray,
        rx: PlanarArray,
        ris: PlanarArray,
        frequency_f: f64,
        absorption_kappa: f64,
        tx_power: f64,
    ) -> Result<Self, SimError> {
        if !(frequency_f > 0.0) {
            return Err(SimError::invalid("frequency", "must be > 0"));
        }
        if !(absorption_kappa >= 0.0) {
            return Err(SimError::invalid("absorption_kappa", "must be >= 0"));
        }
        if !(tx_power > 0.0) {
            return Err(SimError::invalid("tx_power", "must be > 0"));
        }
        Ok(Scene {
            tx,
            rx,
            ris,
            frequency_f,
            absorption_kappa,
            tx_power,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.frequency_f
    }

    pub fn absorption(&self) -> f64 {
        self.absorption_kappa
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    /// λ = c / f, always derived.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_f
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength()
    }
}

/// Straight-line path between two nodes with departure and arrival
/// directions expressed in the respective array local frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPath {
    pub length_r: f64,
    /// Direction from the source toward the destination, source local frame.
    pub departure_dir: Vec3,
    /// Direction from the destination back toward the source, destination
    /// local frame (the direction the destination would beamform).
    pub arrival_dir: Vec3,
}

impl RayPath {
    /// In-plane bearing of a local-frame unit direction, radians from the
    /// horizontal axis.
    pub fn azimuth(dir: Vec3) -> f64 {
        dir.y.atan2(dir.x)
    }

    /// Angle of a local-frame unit direction off the array plane toward
    /// boresight, radians.
    pub fn elevation(dir: Vec3) -> f64 {
        dir.z.clamp(-1.0, 1.0).asin()
    }
}

/// Path from `a` to `b`; the local frames are those of the arrays the
/// endpoints belong to.
pub fn path_between(
    a: Vec3,
    b: Vec3,
    frame_a: &PlanarArray,
    frame_b: &PlanarArray,
) -> Result<RayPath, SimError> {
    let delta = b - a;
    let dir = delta.normalized().ok_or(SimError::ZeroLengthPath)?;
    Ok(RayPath {
        length_r: delta.norm(),
        departure_dir: frame_a.to_local(dir),
        arrival_dir: frame_b.to_local(-dir),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn broadside_array(n: usize, d: f64) -> PlanarArray {
        PlanarArray::new(
            n,
            n,
            d,
            Vec3::ZERO,
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap()
    }

    fn lambda_at(f: f64) -> f64 {
        SPEED_OF_LIGHT / f
    }

    #[test]
    fn near_field_radius_matches_d_band_figures() {
        let lambda = lambda_at(140e9);
        // 64x64 half-wavelength array: boundary near 4.25 m.
        let a = broadside_array(64, lambda / 2.0);
        let r = near_field_radius(&a, lambda);
        assert!((r - 4.25).abs() < 0.01, "got {r}");
        // 52x52: about 2.79 m, the size where nodes at 2.83 m enter the
        // near field.
        let a = broadside_array(52, lambda / 2.0);
        let r = near_field_radius(&a, lambda);
        assert!((r - 2.79).abs() < 0.01, "got {r}");
        // Degenerate single element has no aperture.
        let a = broadside_array(1, lambda / 2.0);
        assert_eq!(near_field_radius(&a, lambda), 0.0);
    }

    #[test]
    fn near_field_radius_scales_quadratically_in_d() {
        let lambda = lambda_at(140e9);
        let a = broadside_array(17, lambda / 2.0);
        let b = broadside_array(33, lambda / 2.0); // (2n-1) doubles D exactly
        let ra = near_field_radius(&a, lambda);
        let rb = near_field_radius(&b, lambda);
        assert!((rb / ra - 4.0).abs() < 1e-12);
    }

    #[test]
    fn aperture_area_values() {
        let lambda = lambda_at(140e9);
        let a = broadside_array(64, lambda / 2.0);
        let area = aperture_area(&a);
        let expected = (63.0 * lambda / 2.0).powi(2);
        assert!((area - expected).abs() < 1e-15);
        assert!((area - 4.55e-3).abs() < 5e-6, "got {area}");

        let degenerate = PlanarArray::new(
            2,
            1,
            lambda / 2.0,
            Vec3::ZERO,
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        assert_eq!(aperture_area(&degenerate), 0.0);

        let unit = broadside_array(2, 1.0);
        assert_eq!(aperture_area(&unit), 1.0);
    }

    #[test]
    fn aperture_area_quadruples_when_sides_double() {
        let a = broadside_array(9, 0.01);
        let b = broadside_array(17, 0.01);
        assert!((aperture_area(&b) / aperture_area(&a) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn element_positions_centered_and_spaced() {
        let a = broadside_array(1, 1.0);
        assert_eq!(a.element_positions(), vec![Vec3::ZERO]);

        let a = broadside_array(2, 1.0);
        let pts = a.element_positions();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!((p.x.abs() - 0.5).abs() < 1e-15);
            assert!((p.y.abs() - 0.5).abs() < 1e-15);
            assert!(p.z.abs() < 1e-15);
        }

        let a = PlanarArray::new(
            3,
            1,
            0.7,
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        let pts = a.element_positions();
        assert_eq!(pts.len(), 3);
        let mean = pts.iter().fold(Vec3::ZERO, |acc, &p| acc + p) / 3.0;
        assert!(mean.distance(a.origin()) < 1e-12);
        assert!((pts[0].distance(pts[1]) - 0.7).abs() < 1e-12);
        assert!((pts[1].distance(pts[2]) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn path_between_lengths_and_symmetry() {
        let frame = broadside_array(2, 1e-3);
        let p = path_between(Vec3::ZERO, Vec3::new(0.0, 0.0, 4.0), &frame, &frame).unwrap();
        assert_eq!(p.length_r, 4.0);
        // Broadside departure: all energy along local boresight.
        assert!((p.departure_dir.z - 1.0).abs() < 1e-12);

        let tx = Vec3::new(-2.0, 2.0, 0.0);
        let ris = Vec3::ZERO;
        let p = path_between(tx, ris, &frame, &frame).unwrap();
        assert!((p.length_r - 8f64.sqrt()).abs() < 1e-12);
        assert!((p.length_r - 2.83).abs() < 0.01);

        let fwd = path_between(tx, ris, &frame, &frame).unwrap();
        let back = path_between(ris, tx, &frame, &frame).unwrap();
        assert_eq!(fwd.length_r, back.length_r);

        assert!(matches!(
            path_between(tx, tx, &frame, &frame),
            Err(SimError::ZeroLengthPath)
        ));
    }

    #[test]
    fn planar_array_rejects_bad_frames() {
        let r = PlanarArray::new(
            2,
            2,
            1e-3,
            Vec3::ZERO,
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.5, 1.0),
        );
        assert!(r.is_err());
        let r = PlanarArray::new(
            0,
            2,
            1e-3,
            Vec3::ZERO,
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn scene_derives_wavelength() {
        let a = broadside_array(2, 1e-3);
        let scene = Scene::new(a.clone(), a.clone(), a, 140e9, 0.0, 1.0).unwrap();
        assert!((scene.wavelength() - 2.1414e-3).abs() < 1e-7);
    }
}
