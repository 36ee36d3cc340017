use hmelas::domains::{boundary_distance, in_radius, sigma, voxelize, DistanceField, DomainSpec};
use hmelas::hgeom::{cc_ball_volume, cc_distance, unit_ball_volume_constant};
use hmelas::GroupPoint;

fn tube_lower_bound(r: f64, beta: f64) -> f64 {
    (r.powi(4) - (r - beta).powi(4)) * unit_ball_volume_constant()
}

fn assert_tube_bounds(spec: &DomainSpec, resolution: usize) {
    let field = DistanceField::new(spec, resolution).unwrap();
    let r = field.in_radius();
    let b1 = unit_ball_volume_constant();
    for j in 1..=10 {
        let beta = r * j as f64 / 10.0;
        let tube = field.tube_volume(beta).unwrap();
        let lower = tube_lower_bound(r, beta);
        assert!(tube >= 0.98 * lower, "{spec:?} β {beta}: {tube} < {lower}");
        assert!(tube >= 0.98 * beta * r.powi(3) * b1, "{spec:?} β {beta}");
    }
    let metrics = field.metrics(12).unwrap();
    assert!(metrics.sigma >= 0.98 * r.powi(3) * b1);
    assert!(metrics.volume >= r.powi(4) * b1);
}

#[test]
fn tube_lower_bound_on_box() {
    assert_tube_bounds(&DomainSpec::Box { min: [0.0, 0.0, -0.5], max: [1.0, 2.0, 0.5] }, 48);
}

#[test]
fn tube_lower_bound_on_euclidean_ball() {
    assert_tube_bounds(&DomainSpec::euclidean_ball(GroupPoint::new(0.0, 0.0, 0.0), 1.0), 48);
}

#[test]
fn tube_lower_bound_on_cc_ball() {
    assert_tube_bounds(&DomainSpec::cc_ball(GroupPoint::new(0.5, -0.5, 1.0), 1.0), 48);
}

#[test]
fn cc_ball_sigma_matches_ball_volume_over_radius() {
    // (r⁴ − (r−β)⁴)/β decreases in β, so the infimum sits at β = r
    for r in [0.5, 1.5] {
        let s = sigma(&DomainSpec::cc_ball(GroupPoint::ORIGIN, r), 48, 12).unwrap();
        let expected = r * r * r * unit_ball_volume_constant();
        assert!((s - expected).abs() < 0.03 * expected, "r {r}: {s} vs {expected}");
    }
}

#[test]
fn cc_ball_tube_is_sharp() {
    let field = DistanceField::new(&DomainSpec::cc_ball(GroupPoint::ORIGIN, 2.0), 48).unwrap();
    for beta in [0.2, 0.7, 1.5, 2.0] {
        let exact = cc_ball_volume(2.0) - cc_ball_volume(2.0 - beta);
        let got = field.tube_volume(beta).unwrap();
        assert!((got - exact).abs() < 0.02 * exact, "β {beta}: {got} vs {exact}");
    }
}

#[test]
fn in_radius_scales_under_dilation() {
    let spec = DomainSpec::Box { min: [0.0, 0.0, 0.0], max: [1.0, 1.5, 0.6] };
    let r1 = in_radius(&spec, 16).unwrap();
    let r2 = in_radius(&spec.dilated(2.0).unwrap(), 16).unwrap();
    assert!((r2 - 2.0 * r1).abs() < 1e-6, "{r1} {r2}");
    assert!(r1 > 0.0 && r1 < 2.0);
}

#[test]
fn sigma_scales_cubically() {
    let spec = DomainSpec::Box { min: [-0.5, -0.5, 0.0], max: [0.5, 0.5, 1.0] };
    let s1 = sigma(&spec, 16, 10).unwrap();
    let s2 = sigma(&spec.dilated(0.5).unwrap(), 16, 10).unwrap();
    assert!((s2 / s1 - 0.125).abs() < 1e-3 * 0.125, "{}", s2 / s1);
}

#[test]
fn distance_is_lipschitz_on_voxel_centers() {
    let spec = DomainSpec::euclidean_ball(GroupPoint::new(0.2, 0.0, 0.0), 1.0);
    let vox = voxelize(&spec, 8).unwrap();
    let pts: Vec<GroupPoint> = vox.occupied().map(|i| vox.center(vox.cell(i))).step_by(7).collect();
    let d: Vec<f64> = pts.iter().map(|&p| boundary_distance(&spec, p, 300).unwrap()).collect();
    for i in 0..pts.len() {
        for j in 0..i {
            assert!((d[i] - d[j]).abs() <= cc_distance(pts[i], pts[j]).unwrap() + 1e-6);
        }
    }
}

#[test]
fn voxel_volumes_settle_under_refinement() {
    let spec = DomainSpec::cc_ball(GroupPoint::ORIGIN, 1.0);
    let v: Vec<f64> = [32, 48, 64].iter().map(|&r| voxelize(&spec, r).unwrap().volume()).collect();
    assert!((v[2] - v[1]).abs() / v[2] < 0.02);
    assert!((v[2] - unit_ball_volume_constant()).abs() / v[2] < 0.02);
}
