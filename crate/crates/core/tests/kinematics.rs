use handmark_core::synth::{
    forward_kinematics, project, sample_angles, sample_shape, CameraConfig, JointLimits,
};
use handmark_core::topology::{canonical_topology, Finger, Handedness, BONES};
use handmark_core::{Rotation, Vec3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bone_lengths_survive_global_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let limits = JointLimits::default();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let shape = sample_shape(&mut rng);
        let angles = sample_angles(&mut rng, &limits).unwrap();
        let rot = Rotation::random(&mut rng);
        let pose = forward_kinematics(&shape, &angles, Handedness::Right).rotated(&rot);
        for b in BONES.iter() {
            let got = (pose.keypoints[b.to_kp] - pose.keypoints[b.from_kp]).norm();
            let want = shape.effective_length(b.index());
            worst = worst.max(((got - want) / want).abs());
        }
    }
    assert!(worst <= 1e-9, "worst relative error {worst}");
}

#[test]
fn zero_flexion_fingers_are_straight() {
    let topo = canonical_topology();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let shape = sample_shape(&mut rng);
        let pose = forward_kinematics(&shape, &Default::default(), Handedness::Left);
        for f in Finger::ALL {
            let chain = topo.finger_chain(f);
            let dir = pose.keypoints[chain[4]] - pose.keypoints[chain[0]];
            let unit = dir.scale(1.0 / dir.norm());
            for &k in &chain[1..4] {
                let v = pose.keypoints[k] - pose.keypoints[chain[0]];
                assert!(unit.cross(v).norm() <= 1e-9);
            }
        }
    }
}

fn same_points(a: &[handmark_core::Keypoint], b: &[handmark_core::Keypoint], tol: f64) -> bool {
    a.iter().zip(b).all(|(p, q)| {
        (p.x - q.x).abs() <= tol && (p.y - q.y).abs() <= tol && (p.z - q.z).abs() <= tol
    })
}

#[test]
fn rotating_twice_equals_composed_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let limits = JointLimits::default();
    for _ in 0..200 {
        let shape = sample_shape(&mut rng);
        let angles = sample_angles(&mut rng, &limits).unwrap();
        let pose = forward_kinematics(&shape, &angles, Handedness::Right);
        let r1 = Rotation::random(&mut rng);
        let r2 = Rotation::random(&mut rng);
        let twice = project(
            &pose.rotated(&r1),
            &CameraConfig::new(r2, 128, 96, 0.1).unwrap(),
        )
        .unwrap();
        let once = project(&pose, &CameraConfig::new(r2 * r1, 128, 96, 0.1).unwrap()).unwrap();
        assert!(same_points(twice.keypoints(), once.keypoints(), 1e-9));
    }
}

proptest! {
    #[test]
    fn mirror_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = sample_shape(&mut rng);
        let angles = sample_angles(&mut rng, &JointLimits::default()).unwrap();
        let r = forward_kinematics(&shape, &angles, Handedness::Right);
        let l = forward_kinematics(&shape, &angles, Handedness::Left);
        for (p, q) in l.keypoints.iter().zip(r.keypoints.iter()) {
            prop_assert_eq!(*p, Vec3::new(-q.x, q.y, q.z));
        }
    }

    #[test]
    fn projection_fits_inside_image(seed in any::<u64>(), w in 16u32..300, h in 16u32..300, margin in 0.0f64..0.45) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = sample_shape(&mut rng);
        let angles = sample_angles(&mut rng, &JointLimits::default()).unwrap();
        let pose = forward_kinematics(&shape, &angles, Handedness::Right);
        let cam = CameraConfig::new(Rotation::random(&mut rng), w, h, margin).unwrap();
        let proj = project(&pose, &cam).unwrap();
        for k in proj.keypoints() {
            prop_assert!(k.x >= 0.0 && k.x < w as f64);
            prop_assert!(k.y >= 0.0 && k.y < h as f64);
        }
    }
}
