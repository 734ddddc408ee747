use std::collections::HashMap;

use super::{assemble, detect_contacts, Bounds, RowKey, Scene, SimError};
use crate::contact::{
    amgs_boxed_solve, amgs_contact_solve, pgs_boxed_contact_solve, pgs_contact_solve, ContactLcp,
};
use crate::lcp::{
    amgs_dense_boxed_solve, amgs_dense_solve, pgs_boxed_solve, pgs_solve, BoxedLcpProblem,
    Solution, SolverConfig,
};

/// Which solver advances the contact impulses in a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Matrix-free projected Gauss-Seidel.
    Pgs,
    /// Accelerated modulus sweep on the densified matrix.
    AmgsDense,
    /// Accelerated modulus sweep on the factored problem.
    Amgs,
    /// Factored accelerated sweep with explicit box projection.
    AmgsBoxed,
}

impl SolverKind {
    pub fn label(&self) -> &'static str {
        match self {
            SolverKind::Pgs => "pgs",
            SolverKind::AmgsDense => "amgs-dense",
            SolverKind::Amgs => "amgs",
            SolverKind::AmgsBoxed => "amgs-boxed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pgs" => Some(SolverKind::Pgs),
            "amgs-dense" => Some(SolverKind::AmgsDense),
            "amgs" => Some(SolverKind::Amgs),
            "amgs-boxed" => Some(SolverKind::AmgsBoxed),
            _ => None,
        }
    }
}

/// Impulses of the previous step keyed by persistent contact identity.
/// One cache belongs to one simulation timeline.
#[derive(Debug, Clone, Default)]
pub struct WarmStartCache {
    map: HashMap<RowKey, f64>,
}

impl WarmStartCache {
    pub fn get(&self, key: RowKey) -> f64 {
        self.map.get(&key).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Replaces the cache with the impulses of the step that just solved;
    /// keys of vanished contacts are dropped.
    pub fn replace(&mut self, keys: &[RowKey], lambda: &[f64]) {
        debug_assert_eq!(keys.len(), lambda.len());
        self.map = keys.iter().copied().zip(lambda.iter().copied()).collect();
    }
}

/// Maps cached impulses onto the rows of a freshly assembled problem:
/// matched keys keep their value, new rows start at zero. Normal rows are
/// clamped nonnegative and tangent rows into their friction box.
pub fn warm_start_map(prev: &WarmStartCache, keys: &[RowKey], bounds: Option<&Bounds>) -> Vec<f64> {
    keys.iter()
        .enumerate()
        .map(|(i, &key)| {
            let cached = prev.get(key);
            match bounds {
                Some(b) => cached.clamp(b.l[i], b.u[i]),
                None => cached.max(0.0),
            }
        })
        .collect()
}

/// Everything a step leaves behind for reporting: the solved problem (in
/// factored form), the impulse solution, and the final residual.
#[derive(Debug)]
pub struct StepTrace {
    pub rows: usize,
    pub residual: f64,
    pub problem: ContactLcp,
    pub bounds: Option<Bounds>,
    pub keys: Vec<RowKey>,
    pub solution: Solution,
}

/// Advances the scene by one time step: semi-implicit gravity kick,
/// contact detection, assembly, warm-started solve, velocity update from
/// the impulses, and position integration. The warm-start cache is
/// refreshed with the step's final impulses.
pub fn step(
    scene: &mut Scene,
    solver: SolverKind,
    cfg: &SolverConfig,
    warm: &mut WarmStartCache,
) -> Result<StepTrace, SimError> {
    let dt = scene.dt;
    for body in &mut scene.bodies {
        if body.inv_mass > 0.0 {
            body.linear_velocity = body.linear_velocity + scene.gravity.scale(dt);
        }
    }

    let contacts = detect_contacts(scene)?;
    let with_friction = scene.friction > 0.0;
    let (prob, bounds, keys) = assemble(scene, &contacts, with_friction, warm)?;
    let lambda0 = warm_start_map(warm, &keys, bounds.as_ref());

    let mut solve_cfg = *cfg;
    solve_cfg.record_history = true;
    let solution = solve_with(solver, &prob, bounds.as_ref(), &lambda0, &solve_cfg)?;

    let new_v = prob.apply_impulses(&prob.v, &solution.lambda)?;
    for (i, body) in scene.bodies.iter_mut().enumerate() {
        if body.is_static() {
            continue;
        }
        body.linear_velocity.x = new_v[3 * i];
        body.linear_velocity.y = new_v[3 * i + 1];
        body.angular_velocity = new_v[3 * i + 2];
        body.position = body.position + body.linear_velocity.scale(dt);
        body.angle += body.angular_velocity * dt;
    }

    warm.replace(&keys, &solution.lambda);
    let residual = solution.residual_history.last().copied().unwrap_or(0.0);
    Ok(StepTrace {
        rows: prob.constraints(),
        residual,
        problem: prob,
        bounds,
        keys,
        solution,
    })
}

/// Dispatches one solve over the factored problem, routing to the boxed
/// variants whenever friction bounds are present.
pub fn solve_with(
    solver: SolverKind,
    prob: &ContactLcp,
    bounds: Option<&Bounds>,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, SimError> {
    let solution = match (solver, bounds) {
        (SolverKind::Pgs, None) => pgs_contact_solve(prob, lambda0, cfg)?,
        (SolverKind::Pgs, Some(b)) => pgs_boxed_contact_solve(prob, (&b.l, &b.u), lambda0, cfg)?,
        (SolverKind::Amgs, None) => amgs_contact_solve(prob, lambda0, cfg)?,
        (SolverKind::Amgs, Some(b)) | (SolverKind::AmgsBoxed, Some(b)) => {
            amgs_boxed_solve(prob, (&b.l, &b.u), lambda0, cfg)?
        }
        (SolverKind::AmgsBoxed, None) => {
            let m = prob.constraints();
            let l = vec![0.0; m];
            let u = vec![f64::INFINITY; m];
            amgs_boxed_solve(prob, (&l, &u), lambda0, cfg)?
        }
        (SolverKind::AmgsDense, None) => {
            let dense = prob.densify()?;
            amgs_dense_solve(&dense, lambda0, cfg)?
        }
        (SolverKind::AmgsDense, Some(b)) => {
            let dense = prob.densify()?;
            let boxed = BoxedLcpProblem::new(dense, b.l.clone(), b.u.clone())?;
            amgs_dense_boxed_solve(&boxed, lambda0, cfg)?
        }
    };
    Ok(solution)
}

/// Dense-path dispatch used by tests that need Gauss-Seidel on the
/// explicit matrix (the factored PGS is the production path).
pub fn solve_dense_pgs(
    prob: &ContactLcp,
    bounds: Option<&Bounds>,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, SimError> {
    let dense = prob.densify()?;
    Ok(match bounds {
        None => pgs_solve(&dense, lambda0, cfg)?,
        Some(b) => {
            let boxed = BoxedLcpProblem::new(dense, b.l.clone(), b.u.clone())?;
            pgs_boxed_solve(&boxed, lambda0, cfg)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Body, Vec2};

    fn step_cfg(iters: usize) -> SolverConfig {
        SolverConfig {
            max_iterations: iters,
            residual_tol: 1e-11,
            ..Default::default()
        }
    }

    #[test]
    fn free_fall_without_contacts() {
        let mut scene = Scene::new(vec![Body::dynamic_circle(
            1.0,
            0.2,
            Vec2::new(0.0, 10.0),
        )]);
        let mut warm = WarmStartCache::default();
        let trace = step(&mut scene, SolverKind::Amgs, &step_cfg(10), &mut warm).unwrap();
        assert_eq!(trace.rows, 0);
        assert!(trace.solution.lambda.is_empty());
        let dt = scene.dt;
        let expected_v = -9.80665 * dt;
        assert!((scene.bodies[0].linear_velocity.y - expected_v).abs() < 1e-12);
        assert!((scene.bodies[0].position.y - (10.0 + expected_v * dt)).abs() < 1e-12);
    }

    #[test]
    fn resting_ball_supports_its_weight() {
        let mut scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.1999)),
        ]);
        scene.restitution = 0.0;
        scene.friction = 0.0;
        let mut warm = WarmStartCache::default();
        let trace = step(&mut scene, SolverKind::Amgs, &step_cfg(50), &mut warm).unwrap();
        assert_eq!(trace.rows, 1);
        // λ = m g dt balances the gravity kick
        let expected = 9.80665 * scene.dt;
        assert!((trace.solution.lambda[0] - expected).abs() < 1e-9);
        assert!(scene.bodies[1].linear_velocity.y >= -1e-9);
    }

    #[test]
    fn bounce_restores_a_fraction_of_approach_speed() {
        let mut scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.199)).with_velocity(Vec2::new(0.0, -3.0)),
        ]);
        scene.restitution = 0.2;
        scene.friction = 0.0;
        let mut warm = WarmStartCache::default();
        let approach = 3.0 + 9.80665 * scene.dt;
        step(&mut scene, SolverKind::Amgs, &step_cfg(200), &mut warm).unwrap();
        let separating = scene.bodies[1].linear_velocity.y;
        assert!(separating > 0.0);
        assert!(
            (separating / approach - 0.2).abs() < 1e-6,
            "ratio {}",
            separating / approach
        );
    }

    #[test]
    fn internal_contact_conserves_momentum() {
        let mut scene = Scene::new(vec![
            Body::dynamic_circle(1.5, 0.2, Vec2::new(0.0, 0.0)).with_velocity(Vec2::new(1.0, 0.0)),
            Body::dynamic_circle(0.5, 0.2, Vec2::new(0.39, 0.0)),
        ]);
        scene.gravity = Vec2::ZERO;
        scene.friction = 0.0;
        let before = scene.linear_momentum();
        let mut warm = WarmStartCache::default();
        step(&mut scene, SolverKind::Amgs, &step_cfg(100), &mut warm).unwrap();
        let after = scene.linear_momentum();
        assert!((before.x - after.x).abs() < 1e-9);
        assert!((before.y - after.y).abs() < 1e-9);
    }

    #[test]
    fn warm_start_survives_across_steps() {
        let mut scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.1999)),
        ]);
        scene.restitution = 0.0;
        scene.friction = 0.0;
        let mut warm = WarmStartCache::default();
        let first = step(&mut scene, SolverKind::Amgs, &step_cfg(30), &mut warm).unwrap();
        assert_eq!(warm.len(), 1);
        let seeded = warm_start_map(&warm, &first.keys, None);
        assert_eq!(seeded, first.solution.lambda);
        // a fresh key maps to zero
        let other = RowKey::normal(crate::sim::ContactKey::new(5, 9, 0));
        assert_eq!(warm.get(other), 0.0);
        // on replacement, vanished keys drop while survivors keep their
        // value and new keys start at zero
        let survivor = first.keys[0];
        warm.replace(&[survivor, other], &[first.solution.lambda[0], 0.25]);
        warm.replace(&[survivor], &[first.solution.lambda[0]]);
        let mapped = warm_start_map(&warm, &[other, survivor], None);
        assert_eq!(mapped, vec![0.0, first.solution.lambda[0]]);
    }

    #[test]
    fn assembled_matrix_is_symmetric_psd() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let mut bodies = vec![Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0)];
            for _ in 0..6 {
                bodies.push(Body::dynamic_circle(
                    rng.random_range(0.5..2.0),
                    0.2,
                    Vec2::new(rng.random_range(0.0..1.2), rng.random_range(0.15..0.8)),
                ));
            }
            let scene = Scene::new(bodies);
            let contacts = match crate::sim::detect_contacts(&scene) {
                Ok(c) => c,
                Err(_) => continue, // coincident centers in the random draw
            };
            if contacts.is_empty() {
                continue;
            }
            let (prob, _, _) =
                crate::sim::assemble(&scene, &contacts, false, &WarmStartCache::default())
                    .unwrap();
            let dense = prob.densify().unwrap();
            let a = dense.a();
            // symmetry is exact by construction; semidefiniteness via
            // random quadratic forms
            for _ in 0..50 {
                let x: Vec<f64> = (0..dense.dim())
                    .map(|_| rng.random_range(-1.0..1.0))
                    .collect();
                let ax = a.matvec(&x).unwrap();
                let quad: f64 = x.iter().zip(&ax).map(|(u, v)| u * v).sum();
                assert!(quad >= -1e-10, "indefinite quadratic form {quad}");
            }
        }
    }

    #[test]
    fn mirror_symmetric_pyramid_gets_mirror_impulses() {
        // two base circles at ±x resting on the floor, one on top
        let r = 0.2;
        let base_y = 0.1999;
        let mut scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, r, Vec2::new(-0.21, base_y)),
            Body::dynamic_circle(1.0, r, Vec2::new(0.21, base_y)),
            Body::dynamic_circle(1.0, r, Vec2::new(0.0, base_y + 0.33)),
        ]);
        scene.restitution = 0.0;
        scene.friction = 0.0;
        let mut warm = WarmStartCache::default();
        let cfg = SolverConfig {
            max_iterations: 20_000,
            residual_tol: 1e-12,
            ..Default::default()
        };
        let trace = step(&mut scene, SolverKind::Amgs, &cfg, &mut warm).unwrap();
        assert!(trace.solution.converged);
        // rows sorted by key: (0,1) floor-left, (0,2) floor-right,
        // (1,3) left-top, (2,3) right-top
        assert_eq!(trace.rows, 4);
        let lambda = &trace.solution.lambda;
        assert!((lambda[0] - lambda[1]).abs() <= 1e-9, "floor pair asymmetric");
        assert!((lambda[2] - lambda[3]).abs() <= 1e-9, "shoulder pair asymmetric");
        assert!(lambda.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn resting_stack_velocities_stay_feasible() {
        let r = 0.18;
        let mut bodies = vec![Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0)];
        for k in 0..5 {
            bodies.push(Body::dynamic_circle(
                1.0,
                r,
                Vec2::new(0.0, r + 1e-3 + k as f64 * (2.0 * r + 1e-3)),
            ));
        }
        let mut scene = Scene::new(bodies);
        scene.restitution = 0.0;
        scene.friction = 0.0;
        let mut warm = WarmStartCache::default();
        let cfg = SolverConfig {
            max_iterations: 40,
            ..Default::default()
        };
        let mut last = None;
        for _ in 0..240 {
            last = Some(step(&mut scene, SolverKind::Amgs, &cfg, &mut warm).unwrap());
        }
        let trace = last.unwrap();
        assert!(trace.rows >= 5);
        // post-solve constraint velocities: no penetration progress
        for (i, &w) in trace.solution.w.iter().enumerate() {
            assert!(w >= -1e-6, "row {i} penetrating at {w}");
        }
    }

    #[test]
    fn solver_kinds_agree_on_a_small_stack() {
        let build = || {
            let mut s = Scene::new(vec![
                Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
                Body::dynamic_circle(1.0, 0.18, Vec2::new(0.0, 0.1799)),
                Body::dynamic_circle(1.0, 0.18, Vec2::new(0.0, 0.5399)),
            ]);
            s.restitution = 0.0;
            s.friction = 0.0;
            s
        };
        let mut reference = None;
        for kind in [
            SolverKind::Pgs,
            SolverKind::Amgs,
            SolverKind::AmgsDense,
            SolverKind::AmgsBoxed,
        ] {
            let mut scene = build();
            let mut warm = WarmStartCache::default();
            let trace = step(&mut scene, kind, &step_cfg(3000), &mut warm).unwrap();
            assert!(trace.solution.converged, "{:?} did not converge", kind);
            match &reference {
                None => reference = Some(trace.solution.lambda.clone()),
                Some(lambda) => {
                    for (a, b) in lambda.iter().zip(&trace.solution.lambda) {
                        assert!((a - b).abs() < 1e-8, "{:?}: {a} vs {b}", kind);
                    }
                }
            }
        }
    }
}
