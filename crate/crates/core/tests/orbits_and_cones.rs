use num_bigint::BigInt;
use pellsurf_core::cone::{cone_bound, minimal_multiple_in_box, RationalCone2D};
use pellsurf_core::cremona::{degree_growing_orbit, orbit_degrees};
use pellsurf_core::gallery::rational_cover_record;
use pellsurf_core::{canonical_class, Execution};

#[test]
fn ten_point_orbit_grows_geometrically() {
    let orbit = degree_growing_orbit(10, 50).unwrap();
    let degs = orbit_degrees(&orbit);
    assert_eq!(degs[50], BigInt::from(312_620_764u64));
    let k = canonical_class(10);
    for a in &orbit {
        assert_eq!(a.square(), BigInt::from(1));
        assert_eq!(k.intersect(a).unwrap(), BigInt::from(-3));
        assert_eq!(rational_cover_record(a).unwrap().d_sq, BigInt::from(2));
    }
    // the ratio of consecutive degrees settles well above 1
    let ratio = |t: usize| {
        let (a, b): (f64, f64) = (
            degs[t].to_string().parse().unwrap(),
            degs[t - 1].to_string().parse().unwrap(),
        );
        a / b
    };
    assert!(ratio(50) > 1.4 && ratio(40) > 1.4);
}

#[test]
fn bound_for_skewed_cone() {
    let cone = RationalCone2D::new([5, 1], [1, 4]).unwrap();
    let b = cone_bound(&cone, [3, 3], Some(50)).unwrap();
    // normals (-1,5) and (4,-1): c² = 1/26, ‖R‖² = 18, so m = ⌈√468⌉ = 22
    assert_eq!(b.m, 22);
    assert_eq!(b.c_sq.to_string(), "1/26");
    assert_eq!(b.verified, Some(true));
    let min = minimal_multiple_in_box(&cone, [3, 3], 50, b.m, Execution::Sequential)
        .unwrap()
        .unwrap();
    assert!(min <= b.m);
}
