use hatenet_core::stats::mann_whitney_u;
use proptest::prelude::*;

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..12).prop_map(f64::from), 1..25)
}

proptest! {
    #[test]
    fn swapping_samples_keeps_p(a in sample(), b in sample()) {
        let ab = mann_whitney_u(&a, &b).unwrap();
        let ba = mann_whitney_u(&b, &a).unwrap();
        prop_assert!((ab.p - ba.p).abs() < 1e-12);
        prop_assert_eq!(ab.u + ba.u, (a.len() * b.len()) as f64);
        prop_assert!(ab.p > 0.0 && ab.p <= 1.0);
    }

    #[test]
    fn monotone_transform_keeps_p(a in sample(), b in sample()) {
        let f = |xs: &[f64]| xs.iter().map(|x| 3.0 * x + 7.0).collect::<Vec<_>>();
        let p = mann_whitney_u(&a, &b).unwrap().p;
        let q = mann_whitney_u(&f(&a), &f(&b)).unwrap().p;
        prop_assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn complete_separation_is_the_smallest_exact_p() {
    // 2 / C(8, 4) = 1/35
    let r = mann_whitney_u(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 7.0, 8.0]).unwrap();
    assert!(r.exact);
    assert!((r.p - 2.0 / 70.0).abs() < 1e-15);
    assert_eq!(r.u, 0.0);
}
