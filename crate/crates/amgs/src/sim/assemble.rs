use super::step::WarmStartCache;
use super::{Contact, ContactKey, Scene, SimError, Vec2};
use crate::contact::ContactLcp;
use crate::linalg::{BlockDiagInverseMass, SparseMatrix};

/// Identity of one constraint row: its parent contact plus whether it is
/// the tangential (friction) row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    pub contact: ContactKey,
    pub tangent: bool,
}

impl RowKey {
    pub fn normal(contact: ContactKey) -> Self {
        Self {
            contact,
            tangent: false,
        }
    }

    pub fn tangent(contact: ContactKey) -> Self {
        Self {
            contact,
            tangent: true,
        }
    }
}

/// Impulse bounds of an assembled problem, row-aligned.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

/// Builds the factored contact problem for the current velocities.
///
/// One normal row per contact, with at most six nonzeros (three per
/// dynamic body): `(-n, -(r_a × n))` on body `a` and `(n, r_b × n)` on
/// body `b`. Entries of static bodies are omitted. The bias carries
/// restitution on approach: `bᵢ = e · min(0, (Jv)ᵢ)`, evaluated on the
/// passed-in velocities (after the gravity kick), so an impact separates
/// at `e` times its approach speed. Approaches slower than the scene's
/// restitution threshold get no bias.
///
/// With `with_friction`, each contact whose warm-started normal impulse
/// estimate `λ̂ₙ` is positive gains one tangent row bounded by
/// `±μ λ̂ₙ`; zero-width boxes are omitted entirely. Tangent rows follow
/// all normal rows and bounds are returned only when tangent rows exist.
pub fn assemble(
    scene: &Scene,
    contacts: &[Contact],
    with_friction: bool,
    warm: &WarmStartCache,
) -> Result<(ContactLcp, Option<Bounds>, Vec<RowKey>), SimError> {
    let bodies = &scene.bodies;
    let n = bodies.len() * 3;
    let v = scene.generalized_velocity();

    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(contacts.len() * 2);
    let mut bias = Vec::with_capacity(contacts.len() * 2);
    let mut keys = Vec::with_capacity(contacts.len() * 2);

    let row_for = |contact: &Contact, direction: Vec2| -> Vec<(usize, f64)> {
        let mut entries = Vec::with_capacity(6);
        let a = contact.body_a;
        let b = contact.body_b;
        if !bodies[a].is_static() {
            let r = contact.point - bodies[a].position;
            entries.push((3 * a, -direction.x));
            entries.push((3 * a + 1, -direction.y));
            entries.push((3 * a + 2, -r.cross(direction)));
        }
        if !bodies[b].is_static() {
            let r = contact.point - bodies[b].position;
            entries.push((3 * b, direction.x));
            entries.push((3 * b + 1, direction.y));
            entries.push((3 * b + 2, r.cross(direction)));
        }
        entries.sort_by_key(|&(c, _)| c);
        entries
    };
    let relative_speed = |entries: &[(usize, f64)]| -> f64 {
        entries.iter().map(|&(c, jv)| jv * v[c]).sum()
    };

    for contact in contacts {
        let entries = row_for(contact, contact.normal);
        let approach = relative_speed(&entries);
        // bounce only above the threshold; resting chatter is inelastic
        let bias_i = if approach < -scene.restitution_threshold {
            scene.restitution * approach
        } else {
            0.0
        };
        bias.push(bias_i);
        rows.push(entries);
        keys.push(RowKey::normal(contact.key));
    }

    let mut lower = vec![0.0; contacts.len()];
    let mut upper = vec![f64::INFINITY; contacts.len()];
    let mut any_tangent = false;
    if with_friction && scene.friction > 0.0 {
        for contact in contacts {
            let normal_estimate = warm.get(RowKey::normal(contact.key));
            let bound = scene.friction * normal_estimate;
            if bound <= 0.0 {
                continue;
            }
            let entries = row_for(contact, contact.normal.perp());
            rows.push(entries);
            bias.push(0.0);
            keys.push(RowKey::tangent(contact.key));
            lower.push(-bound);
            upper.push(bound);
            any_tangent = true;
        }
    }

    let j = SparseMatrix::from_rows_sorted(rows.len(), n, &rows)
        .map_err(crate::contact::ContactError::Linalg)?;
    let minv = BlockDiagInverseMass::from_planar_bodies(
        &bodies
            .iter()
            .map(|b| (b.inv_mass, b.inv_inertia))
            .collect::<Vec<_>>(),
    );
    let prob = ContactLcp::new(j, minv, v, bias)?;
    let bounds = any_tangent.then_some(Bounds { l: lower, u: upper });
    Ok((prob, bounds, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{detect_contacts, Body};

    fn floor_and_ball(ball_y: f64) -> Scene {
        Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, ball_y)),
        ])
    }

    #[test]
    fn resting_ball_rows_have_unit_normal_and_zero_arm() {
        let scene = floor_and_ball(0.19);
        let contacts = detect_contacts(&scene).unwrap();
        let (prob, bounds, keys) =
            assemble(&scene, &contacts, false, &WarmStartCache::default()).unwrap();
        assert!(bounds.is_none());
        assert_eq!(keys.len(), 1);
        // only the ball's dofs appear; the torque arm is zero and pruned
        let (cols, vals) = prob.j.row(0);
        assert_eq!(cols, &[4]);
        assert_eq!(vals, &[1.0]);
    }

    #[test]
    fn stacked_circles_row_signs() {
        let scene = Scene::new(vec![
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.0)),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.39)),
        ]);
        let contacts = detect_contacts(&scene).unwrap();
        let (prob, _, _) =
            assemble(&scene, &contacts, false, &WarmStartCache::default()).unwrap();
        let (cols, vals) = prob.j.row(0);
        assert_eq!(cols, &[1, 4]);
        assert_eq!(vals, &[-1.0, 1.0]);
    }

    #[test]
    fn approach_velocity_sets_restitution_bias() {
        let mut scene = floor_and_ball(0.19);
        scene.bodies[1].linear_velocity = Vec2::new(0.0, -3.0);
        scene.restitution = 0.2;
        let contacts = detect_contacts(&scene).unwrap();
        let (prob, _, _) =
            assemble(&scene, &contacts, false, &WarmStartCache::default()).unwrap();
        assert!((prob.b[0] + 0.6).abs() < 1e-12);
        // separating ball gets no bias
        scene.bodies[1].linear_velocity = Vec2::new(0.0, 3.0);
        let (prob, _, _) =
            assemble(&scene, &contacts, false, &WarmStartCache::default()).unwrap();
        assert_eq!(prob.b[0], 0.0);
    }

    #[test]
    fn friction_rows_need_a_warm_normal_estimate() {
        let scene = floor_and_ball(0.19);
        let contacts = detect_contacts(&scene).unwrap();
        // no estimate: no tangent rows
        let (prob, bounds, _) =
            assemble(&scene, &contacts, true, &WarmStartCache::default()).unwrap();
        assert_eq!(prob.constraints(), 1);
        assert!(bounds.is_none());
        // seeded estimate: one bounded tangent row
        let mut warm = WarmStartCache::default();
        warm.replace(
            &[RowKey::normal(contacts[0].key)],
            &[2.0],
        );
        let (prob, bounds, keys) = assemble(&scene, &contacts, true, &warm).unwrap();
        assert_eq!(prob.constraints(), 2);
        let bounds = bounds.unwrap();
        assert_eq!(bounds.l, vec![0.0, -0.2]);
        assert_eq!(bounds.u, vec![f64::INFINITY, 0.2]);
        assert!(keys[1].tangent);
    }

    #[test]
    fn zero_friction_matches_frictionless_problem() {
        let mut scene = floor_and_ball(0.19);
        scene.friction = 0.0;
        let contacts = detect_contacts(&scene).unwrap();
        let mut warm = WarmStartCache::default();
        warm.replace(&[RowKey::normal(contacts[0].key)], &[2.0]);
        let (with_flag, bounds, _) = assemble(&scene, &contacts, true, &warm).unwrap();
        let (without, _, _) = assemble(&scene, &contacts, false, &warm).unwrap();
        assert!(bounds.is_none());
        assert_eq!(with_flag.j, without.j);
        assert_eq!(with_flag.b, without.b);
    }

    #[test]
    fn assembled_matrix_is_positive_definite_for_distinct_contacts() {
        let scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.19)),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.0, 0.58)),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(0.39, 0.19)),
        ]);
        let contacts = detect_contacts(&scene).unwrap();
        assert!(contacts.len() >= 3);
        let (prob, _, _) =
            assemble(&scene, &contacts, false, &WarmStartCache::default()).unwrap();
        let dense = prob.densify().unwrap();
        assert!(dense.a().is_positive_definite());
    }
}
