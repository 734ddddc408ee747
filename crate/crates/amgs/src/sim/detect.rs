use super::{Contact, ContactKey, Scene, Shape, SimError, Vec2};

/// Narrow-phase contact detection over all body pairs.
///
/// Circle-circle: contact iff the center distance is below the radius sum;
/// the normal runs along the center line and the point sits at the middle
/// of the overlap segment. Circle-half-plane: contact iff the signed
/// distance of the center is below the radius. Pairs of static bodies are
/// skipped. Output is sorted by contact key, so the constraint ordering is
/// reproducible run to run.
pub fn detect_contacts(scene: &Scene) -> Result<Vec<Contact>, SimError> {
    let mut contacts = Vec::new();
    let bodies = &scene.bodies;
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            if bodies[i].is_static() && bodies[j].is_static() {
                continue;
            }
            match (bodies[i].shape, bodies[j].shape) {
                (Shape::Circle { radius: ri }, Shape::Circle { radius: rj }) => {
                    let delta = bodies[j].position - bodies[i].position;
                    let dist = delta.length();
                    if dist >= ri + rj {
                        continue;
                    }
                    if dist == 0.0 {
                        return Err(SimError::CoincidentCenters { a: i, b: j });
                    }
                    let normal = delta.scale(1.0 / dist);
                    let point =
                        bodies[i].position + normal.scale(0.5 * (ri + dist - rj));
                    contacts.push(Contact {
                        body_a: i,
                        body_b: j,
                        point,
                        normal,
                        depth: ri + rj - dist,
                        key: ContactKey::new(i, j, 0),
                    });
                }
                (Shape::HalfPlane { normal, offset }, Shape::Circle { radius }) => {
                    if let Some(c) = plane_circle(i, j, normal, offset, bodies[j].position, radius)
                    {
                        contacts.push(c);
                    }
                }
                (Shape::Circle { radius }, Shape::HalfPlane { normal, offset }) => {
                    if let Some(c) = plane_circle(j, i, normal, offset, bodies[i].position, radius)
                    {
                        contacts.push(c);
                    }
                }
                (Shape::HalfPlane { .. }, Shape::HalfPlane { .. }) => {}
            }
        }
    }
    contacts.sort_by_key(|c| c.key);
    Ok(contacts)
}

fn plane_circle(
    plane_idx: usize,
    circle_idx: usize,
    normal: Vec2,
    offset: f64,
    center: Vec2,
    radius: f64,
) -> Option<Contact> {
    let signed = normal.dot(center) - offset;
    if signed >= radius {
        return None;
    }
    // midpoint of the overlap segment between the circle surface and the
    // plane boundary
    let point = center - normal.scale(0.5 * (radius + signed));
    Some(Contact {
        body_a: plane_idx,
        body_b: circle_idx,
        point,
        normal,
        depth: radius - signed,
        key: ContactKey::new(plane_idx, circle_idx, 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Body;

    #[test]
    fn overlapping_circles_meet_at_segment_midpoint() {
        let scene = Scene::new(vec![
            Body::dynamic_circle(1.0, 0.21, Vec2::new(0.0, 0.0)),
            Body::dynamic_circle(1.0, 0.21, Vec2::new(0.0, 0.4)),
        ]);
        let contacts = detect_contacts(&scene).unwrap();
        assert_eq!(contacts.len(), 1);
        let c = &contacts[0];
        assert_eq!(c.normal, Vec2::new(0.0, 1.0));
        assert!((c.depth - 0.02).abs() < 1e-12);
        assert!((c.point.y - 0.2).abs() < 1e-12);
    }

    #[test]
    fn separated_circles_produce_nothing() {
        let scene = Scene::new(vec![
            Body::dynamic_circle(1.0, 0.21, Vec2::new(0.0, 0.0)),
            Body::dynamic_circle(1.0, 0.21, Vec2::new(1.0, 0.0)),
        ]);
        assert!(detect_contacts(&scene).unwrap().is_empty());
    }

    #[test]
    fn circle_touching_floor() {
        let scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            Body::dynamic_circle(1.0, 0.18, Vec2::new(0.3, 0.15)),
        ]);
        let contacts = detect_contacts(&scene).unwrap();
        assert_eq!(contacts.len(), 1);
        let c = &contacts[0];
        assert_eq!(c.normal, Vec2::new(0.0, 1.0));
        assert!((c.depth - 0.03).abs() < 1e-12);
        assert_eq!(c.body_a, 0);
        assert_eq!(c.body_b, 1);
    }

    #[test]
    fn coincident_centers_error_names_the_pair() {
        let scene = Scene::new(vec![
            Body::dynamic_circle(1.0, 0.2, Vec2::new(1.0, 2.0)),
            Body::dynamic_circle(1.0, 0.2, Vec2::new(1.0, 2.0)),
        ]);
        match detect_contacts(&scene) {
            Err(SimError::CoincidentCenters { a, b }) => {
                assert_eq!((a, b), (0, 1));
            }
            other => panic!("expected coincident centers, got {other:?}"),
        }
    }

    #[test]
    fn output_is_sorted_by_key() {
        let mut bodies = vec![Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0)];
        for k in 0..4 {
            bodies.push(Body::dynamic_circle(
                1.0,
                0.2,
                Vec2::new(0.3 * k as f64, 0.19),
            ));
        }
        let scene = Scene::new(bodies);
        let contacts = detect_contacts(&scene).unwrap();
        assert!(contacts.windows(2).all(|w| w[0].key < w[1].key));
    }
}
