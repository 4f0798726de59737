//! LVLH relative state of the chaser with respect to the target.

use nalgebra::{Vector3, Vector6};

/// Relative state in the target LVLH frame: `x` radial, `z` along the orbital
/// angular momentum, `y` completing the right-handed triad. Stacked ordering
/// is fixed as `[r_x r_y r_z v_x v_y v_z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    /// Relative position [m].
    pub position: Vector3<f64>,
    /// Relative velocity (LVLH frame derivative) [m/s].
    pub velocity: Vector3<f64>,
}

impl StateVector {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self { position, velocity }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        Self {
            position: Vector3::new(v[0], v[1], v[2]),
            velocity: Vector3::new(v[3], v[4], v[5]),
        }
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(
            self.position.x,
            self.position.y,
            self.position.z,
            self.velocity.x,
            self.velocity.y,
            self.velocity.z,
        )
    }

    /// Distance from the target [m].
    pub fn range(&self) -> f64 {
        self.position.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip_preserves_ordering() {
        let v = Vector6::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0);
        let s = StateVector::from_vector(&v);
        assert_eq!(s.position, Vector3::new(1.0, 2.0, 3.0));
        assert_eq!(s.velocity, Vector3::new(4.0, 5.0, 6.0));
        assert_eq!(s.to_vector(), v);
    }
}
