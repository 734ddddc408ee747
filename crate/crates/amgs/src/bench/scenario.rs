use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BenchError, MassModel, ScenarioName, ScenarioSpec};
use crate::sim::{Body, Scene, Vec2};

/// Builds the initial scene for a spec. Deterministic for a given seed:
/// the pool scenarios place circles on a jittered lattice between the
/// container walls, the stacking scenario builds an exact vertical column
/// with 1 mm gaps. Static walls come first in the body list.
pub fn build_scenario(spec: &ScenarioSpec) -> Result<Scene, BenchError> {
    if spec.radius <= 0.0 {
        return Err(BenchError::InvalidSpec(format!(
            "radius must be positive, got {}",
            spec.radius
        )));
    }
    let mut bodies = Vec::with_capacity(spec.circle_count + 3);
    match spec.name {
        ScenarioName::Pool1 | ScenarioName::Pool2 => {
            // floor plus both container walls
            bodies.push(Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0));
            bodies.push(Body::static_half_plane(Vec2::new(1.0, 0.0), 0.0));
            bodies.push(Body::static_half_plane(Vec2::new(-1.0, 0.0), -spec.area_width));
            place_pool_circles(spec, &mut bodies)?;
        }
        ScenarioName::Stacking => {
            bodies.push(Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0));
            place_stack_circles(spec, &mut bodies);
        }
    }
    let mut scene = Scene::new(bodies);
    scene.friction = spec.friction;
    scene.restitution = spec.restitution;
    scene.dt = spec.dt;
    Ok(scene)
}

fn mass_at_height(mass: MassModel, y: f64, y_min: f64, y_max: f64) -> f64 {
    match mass {
        MassModel::Uniform(m) => m,
        MassModel::LinearInHeight { min, max } => {
            if y_max > y_min {
                min + (max - min) * (y - y_min) / (y_max - y_min)
            } else {
                0.5 * (min + max)
            }
        }
    }
}

fn place_pool_circles(spec: &ScenarioSpec, bodies: &mut Vec<Body>) -> Result<(), BenchError> {
    // Square drop lattice with small clearances and jitter: each circle
    // falls into the valley between the two below, so the lattice settles
    // into a disordered dense pile within the first simulation steps and
    // the later steps are the quasi-static regime the residual
    // comparisons care about. Jitter stays below a quarter clearance, so
    // nothing starts interpenetrated.
    let r = spec.radius;
    let gap = 0.04 * r;
    let jitter = gap / 4.0;
    let cell = 2.0 * r + gap;
    let x_first = r + gap;
    let usable = spec.area_width - 2.0 * x_first;
    if usable < 0.0 {
        return Err(BenchError::GeometryOverflow {
            count: spec.circle_count,
            radius: r,
            width: spec.area_width,
        });
    }
    let cols = (usable / cell).floor() as usize + 1;
    if cols == 0 {
        return Err(BenchError::GeometryOverflow {
            count: spec.circle_count,
            radius: r,
            width: spec.area_width,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut positions = Vec::with_capacity(spec.circle_count);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for k in 0..spec.circle_count {
        let row = k / cols;
        let col = k % cols;
        let x = x_first + col as f64 * cell + rng.random_range(-jitter..jitter);
        let y = r + gap + row as f64 * cell + rng.random_range(-jitter..jitter);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
        positions.push(Vec2::new(x, y));
    }
    for p in positions {
        let mass = mass_at_height(spec.mass, p.y, y_min, y_max);
        bodies.push(Body::dynamic_circle(mass, r, p));
    }
    Ok(())
}

fn place_stack_circles(spec: &ScenarioSpec, bodies: &mut Vec<Body>) {
    const GAP: f64 = 1e-3;
    let r = spec.radius;
    let x = 0.5 * spec.area_width;
    for k in 0..spec.circle_count {
        let y = r + GAP + k as f64 * (2.0 * r + GAP);
        let mass = match spec.mass {
            MassModel::Uniform(m) => m,
            MassModel::LinearInHeight { min, max } => {
                let t = if spec.circle_count > 1 {
                    k as f64 / (spec.circle_count - 1) as f64
                } else {
                    0.5
                };
                min + (max - min) * t
            }
        };
        bodies.push(Body::dynamic_circle(mass, r, Vec2::new(x, y)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{detect_contacts, Shape, SolverKind, WarmStartCache};

    #[test]
    fn pool1_has_expected_dimensions() {
        let scene = build_scenario(&ScenarioSpec::pool1()).unwrap();
        // 221 circles + 3 static walls = 224 bodies, n = 672
        assert_eq!(scene.bodies.len(), 224);
        assert_eq!(scene.generalized_velocity().len(), 672);
        let statics = scene.bodies.iter().filter(|b| b.is_static()).count();
        assert_eq!(statics, 3);
        // no initial interpenetration
        assert!(detect_contacts(&scene).unwrap().is_empty());
        // circles stay inside the container
        for b in &scene.bodies {
            if let Shape::Circle { radius } = b.shape {
                assert!(b.position.x >= radius && b.position.x <= 6.0 - radius);
                assert!(b.position.y >= radius);
            }
        }
    }

    #[test]
    fn pool2_masses_ramp_with_height() {
        let scene = build_scenario(&ScenarioSpec::pool2()).unwrap();
        let circles: Vec<_> = scene.bodies.iter().filter(|b| !b.is_static()).collect();
        let lowest = circles
            .iter()
            .min_by(|a, b| a.position.y.total_cmp(&b.position.y))
            .unwrap();
        let highest = circles
            .iter()
            .max_by(|a, b| a.position.y.total_cmp(&b.position.y))
            .unwrap();
        assert!((1.0 / lowest.inv_mass - 1.0).abs() < 1e-9);
        assert!((1.0 / highest.inv_mass - 3.0).abs() < 1e-9);
    }

    #[test]
    fn stacking_two_circles_settle_onto_their_contacts() {
        let mut spec = ScenarioSpec::stacking();
        spec.circle_count = 2;
        spec.friction = 0.0;
        let mut scene = build_scenario(&spec).unwrap();
        assert_eq!(scene.bodies.len(), 3);
        // initial 1 mm gaps: no contacts yet
        assert!(detect_contacts(&scene).unwrap().is_empty());
        let mut warm = WarmStartCache::default();
        let cfg = crate::lcp::SolverConfig {
            max_iterations: 10,
            ..Default::default()
        };
        for _ in 0..5 {
            crate::sim::step(&mut scene, SolverKind::Amgs, &cfg, &mut warm).unwrap();
        }
        let contacts = detect_contacts(&scene).unwrap();
        assert_eq!(contacts.len(), 2, "floor contact plus inter-circle contact");
    }

    #[test]
    fn same_seed_reproduces_the_scene_exactly() {
        let a = build_scenario(&ScenarioSpec::pool1()).unwrap();
        let b = build_scenario(&ScenarioSpec::pool1()).unwrap();
        assert_eq!(a.snapshot_csv(), b.snapshot_csv());
        let mut other = ScenarioSpec::pool1();
        other.seed = 1;
        let c = build_scenario(&other).unwrap();
        assert_ne!(a.snapshot_csv(), c.snapshot_csv());
    }

    #[test]
    fn oversized_circles_overflow_the_area() {
        let mut spec = ScenarioSpec::pool1();
        spec.radius = 4.0;
        assert!(matches!(
            build_scenario(&spec),
            Err(BenchError::GeometryOverflow { .. })
        ));
    }
}
