//! Minimal 2D circle dynamics.
//!
//! Just enough of a physics engine to generate realistic contact LCP
//! sequences: circles and static half-planes, an O(N²) narrow phase,
//! velocity-level constraint assembly with restitution bias and optional
//! boxed friction rows, and a semi-implicit Euler step with warm-started
//! impulses keyed by persistent contact identity.

mod assemble;
mod detect;
mod step;

pub use assemble::{assemble, Bounds, RowKey};
pub use detect::detect_contacts;
pub use step::{
    solve_dense_pgs, solve_with, step, warm_start_map, SolverKind, StepTrace, WarmStartCache,
};

use crate::contact::ContactError;
use crate::lcp::LcpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("coincident circle centers for bodies {a} and {b}: contact normal undefined")]
    CoincidentCenters { a: usize, b: usize },
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Lcp(#[from] LcpError),
}

/// Plain 2D vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, rhs: Vec2) -> f64 {
        self.x * rhs.x + self.y * rhs.y
    }

    /// 2D cross product scalar `self.x * rhs.y - self.y * rhs.x`.
    pub fn cross(self, rhs: Vec2) -> f64 {
        self.x * rhs.y - self.y * rhs.x
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Collision geometry of a body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Circle { radius: f64 },
    /// Boundary line `normal · p = offset`, solid below; the normal points
    /// into the free half-space.
    HalfPlane { normal: Vec2, offset: f64 },
}

/// Rigid body state. Static bodies carry zero inverse mass and inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub inv_mass: f64,
    pub inv_inertia: f64,
    pub position: Vec2,
    pub angle: f64,
    pub linear_velocity: Vec2,
    pub angular_velocity: f64,
    pub shape: Shape,
}

impl Body {
    /// Dynamic solid disc: `I = ½ m r²`.
    pub fn dynamic_circle(mass: f64, radius: f64, position: Vec2) -> Self {
        assert!(mass > 0.0 && radius > 0.0);
        let inertia = 0.5 * mass * radius * radius;
        Self {
            inv_mass: 1.0 / mass,
            inv_inertia: 1.0 / inertia,
            position,
            angle: 0.0,
            linear_velocity: Vec2::ZERO,
            angular_velocity: 0.0,
            shape: Shape::Circle { radius },
        }
    }

    pub fn static_half_plane(normal: Vec2, offset: f64) -> Self {
        let len = normal.length();
        assert!(len > 0.0);
        Self {
            inv_mass: 0.0,
            inv_inertia: 0.0,
            position: Vec2::ZERO,
            angle: 0.0,
            linear_velocity: Vec2::ZERO,
            angular_velocity: 0.0,
            shape: Shape::HalfPlane {
                normal: normal.scale(1.0 / len),
                offset,
            },
        }
    }

    pub fn with_velocity(mut self, v: Vec2) -> Self {
        self.linear_velocity = v;
        self
    }

    pub fn is_static(&self) -> bool {
        self.inv_mass == 0.0 && self.inv_inertia == 0.0
    }
}

/// Stable identity of a contact across steps: the unordered body pair
/// plus a feature index disambiguating multiple contacts per pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContactKey {
    pub a: usize,
    pub b: usize,
    pub feature: u32,
}

impl ContactKey {
    pub fn new(a: usize, b: usize, feature: u32) -> Self {
        Self {
            a: a.min(b),
            b: a.max(b),
            feature,
        }
    }
}

/// A detected contact. The normal is a unit vector pointing from
/// `body_a` toward `body_b`; `depth ≥ 0` is the overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub body_a: usize,
    pub body_b: usize,
    pub point: Vec2,
    pub normal: Vec2,
    pub depth: f64,
    pub key: ContactKey,
}

/// A world of bodies plus the shared material and stepping parameters.
#[derive(Debug, Clone)]
pub struct Scene {
    pub bodies: Vec<Body>,
    pub gravity: Vec2,
    pub restitution: f64,
    /// Approach speeds at or below this threshold collide inelastically.
    ///
    /// Without it, the gravity-kick chatter of a resting pile feeds the
    /// restitution bias on opposing contact normals and the assembled
    /// LCP loses feasibility (the coefficient matrix is only positive
    /// semidefinite there), which shows up as residuals that stall
    /// instead of converging.
    pub restitution_threshold: f64,
    pub friction: f64,
    pub dt: f64,
}

impl Scene {
    pub fn new(bodies: Vec<Body>) -> Self {
        Self {
            bodies,
            gravity: Vec2::new(0.0, -9.80665),
            restitution: 0.2,
            restitution_threshold: 1.0,
            friction: 0.1,
            dt: 1.0 / 60.0,
        }
    }

    /// Generalized velocity vector `(vx, vy, ω)` per body.
    pub fn generalized_velocity(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.bodies.len() * 3);
        for b in &self.bodies {
            v.push(b.linear_velocity.x);
            v.push(b.linear_velocity.y);
            v.push(b.angular_velocity);
        }
        v
    }

    /// Total linear momentum of the dynamic bodies.
    pub fn linear_momentum(&self) -> Vec2 {
        let mut p = Vec2::ZERO;
        for b in &self.bodies {
            if b.inv_mass > 0.0 {
                p = p + b.linear_velocity.scale(1.0 / b.inv_mass);
            }
        }
        p
    }

    /// Snapshot CSV: `body_id,x,y,angle,vx,vy,omega`.
    pub fn snapshot_csv(&self) -> String {
        use crate::linalg::mm::fmt_real as f;
        let mut out = String::from("body_id,x,y,angle,vx,vy,omega\n");
        for (id, b) in self.bodies.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                id,
                f(b.position.x),
                f(b.position.y),
                f(b.angle),
                f(b.linear_velocity.x),
                f(b.linear_velocity.y),
                f(b.angular_velocity)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_key_is_order_independent() {
        assert_eq!(ContactKey::new(5, 2, 0), ContactKey::new(2, 5, 0));
        assert!(ContactKey::new(1, 2, 0) < ContactKey::new(1, 2, 1));
    }

    #[test]
    fn dynamic_circle_inertia_is_solid_disc() {
        let b = Body::dynamic_circle(2.0, 0.5, Vec2::ZERO);
        // I = 0.5 * 2 * 0.25 = 0.25
        assert!((b.inv_inertia - 4.0).abs() < 1e-12);
        assert!(!b.is_static());
    }

    #[test]
    fn snapshot_has_header_and_rows() {
        let scene = Scene::new(vec![
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.5, 1.0)),
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
        ]);
        let csv = scene.snapshot_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("body_id,"));
        assert!(lines[1].starts_with("0,"));
    }
}
