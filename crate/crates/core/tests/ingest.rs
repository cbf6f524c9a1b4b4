use handmark_core::annotate::validate;
use handmark_core::detection::{annotate_record, filter_in_bounds, DetectedHand, DetectionRecord};
use handmark_core::synth::{sample_hand, JointLimits};
use handmark_core::topology::{ChannelCodes, Handedness};
use handmark_core::{Keypoint, RasterConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CODES: ChannelCodes = ChannelCodes::STANDARD;

/// A synthetic hand fitted into `[x0, x0+w) x [0, h)`, keypoints snapped to
/// multiples of 1/8 so mirrored coordinates stay exact.
fn hand_in(seed: u64, x0: f64, w: u32, h: u32, handedness: Handedness) -> DetectedHand {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = sample_hand(&mut rng, &JointLimits::default(), w, h).unwrap();
    let snap = |v: f64| (v * 8.0).round() / 8.0;
    let kp = s
        .projected
        .keypoints()
        .map(|k| Keypoint::new(snap(k.x) + x0, snap(k.y), snap(k.z)));
    DetectedHand::new(handedness, 0.97, kp).unwrap()
}

#[test]
fn two_hands_keep_their_own_codes() {
    let record = DetectionRecord {
        image: "pair.png".into(),
        width: 256,
        height: 128,
        hands: vec![
            hand_in(1, 0.0, 120, 128, Handedness::Left),
            hand_in(2, 136.0, 120, 128, Handedness::Right),
        ],
    };
    let (kept, _) = filter_in_bounds(vec![record.clone()]);
    assert_eq!(kept.len(), 1);
    let cfg = RasterConfig::new(256, 128, 2.0).unwrap();
    let ann = annotate_record(&record, &cfg, &CODES).unwrap();
    assert!(validate(&ann, &CODES, 0).passes());
    let (mut left, mut right) = (0, 0);
    for y in 0..128 {
        for x in 0..256 {
            match ann.get(x, y)[2] {
                0 => {}
                100 => {
                    assert!(x < 128);
                    left += 1;
                }
                200 => {
                    assert!(x >= 128);
                    right += 1;
                }
                v => panic!("unexpected handedness value {v}"),
            }
        }
    }
    assert!(left > 0 && right > 0);
}

#[test]
fn half_turn_of_record_turns_annotation() {
    let (w, h) = (160u32, 120u32);
    for seed in 0..20 {
        let hand = hand_in(seed, 0.0, w, h, Handedness::Right);
        let mut turned = hand.clone();
        for k in turned.keypoints.iter_mut() {
            k.x = f64::from(w - 1) - k.x;
            k.y = f64::from(h - 1) - k.y;
        }
        let rec = |hand: DetectedHand| DetectionRecord {
            image: "r.png".into(),
            width: w,
            height: h,
            hands: vec![hand],
        };
        let cfg = RasterConfig::new(w, h, 2.5).unwrap();
        let a = annotate_record(&rec(hand), &cfg, &CODES).unwrap();
        let b = annotate_record(&rec(turned), &cfg, &CODES).unwrap();
        for y in 0..h {
            for x in 0..w {
                assert_eq!(b.get(x, y), a.get(w - 1 - x, h - 1 - y), "seed {seed} ({x},{y})");
            }
        }
        assert!(a.plane_handed().iter().all(|&v| v == 0 || v == 200));
    }
}

fn arb_record() -> impl Strategy<Value = DetectionRecord> {
    let hand = (prop::array::uniform21((-20.0f64..80.0, -20.0f64..80.0)), 0.0f64..=1.0).prop_map(
        |(pts, c)| {
            let kp = pts.map(|(x, y)| Keypoint::new(x, y, 0.0));
            DetectedHand::new(Handedness::Left, c, kp).unwrap()
        },
    );
    (prop::collection::vec(hand, 0..3), any::<u16>()).prop_map(|(hands, id)| DetectionRecord {
        image: format!("{id}.png"),
        width: 64,
        height: 64,
        hands,
    })
}

proptest! {
    #[test]
    fn filter_partitions_input(records in prop::collection::vec(arb_record(), 0..12)) {
        let (kept, discarded) = filter_in_bounds(records.clone());
        prop_assert_eq!(kept.len() + discarded.len(), records.len());
        // order-preserving merge reconstructs the input
        let (mut k, mut d) = (kept.iter(), discarded.iter());
        for r in &records {
            let next = if r.is_kept() { k.next() } else { d.next() };
            prop_assert_eq!(next, Some(r));
        }
        for r in &kept {
            prop_assert!(!r.hands.is_empty());
            for hand in &r.hands {
                for p in &hand.keypoints {
                    prop_assert!(p.x >= 0.0 && p.x < 64.0 && p.y >= 0.0 && p.y < 64.0);
                }
            }
        }
    }
}
