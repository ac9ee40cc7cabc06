use frame_lab::io::{format_system, parse_system, read_system, write_system, Format};
use frame_lab::objective::evaluate;
use frame_lab::VectorSystem;
use proptest::prelude::*;

fn any_system() -> impl Strategy<Value = VectorSystem> {
    (1usize..=5, 1usize..=8).prop_flat_map(|(d, n)| {
        proptest::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), d * n)
            .prop_map(move |c| VectorSystem::from_flat(d, c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip_is_bit_exact(vs in any_system(), csv in any::<bool>()) {
        let format = if csv { Format::Csv } else { Format::Json };
        let back = parse_system(&format_system(&vs, format), format, Some(vs.dim())).unwrap();
        let bits = |s: &VectorSystem| s.as_flat().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&vs));
    }
}

#[test]
fn file_round_trip_preserves_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let vs = VectorSystem::new(
        3,
        &[vec![0.1, 1.0 / 3.0, -2.5e-7], vec![1.0, 0.0, 0.0], vec![0.3, 0.7, 0.2], vec![-1e300, 5e-324, 1.0]],
    )
    .unwrap();
    for (name, format) in [("s.json", Format::Json), ("s.csv", Format::Csv)] {
        let path = dir.path().join(name);
        write_system(&path, &vs, format).unwrap();
        let back = read_system(&path, None).unwrap();
        assert_eq!(back, vs);
        let (a, b) = (evaluate(&vs, 0.25).unwrap(), evaluate(&back, 0.25).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn read_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,0\n0,1\n1\n").unwrap();
    let msg = read_system(&path, None).unwrap_err().to_string();
    assert!(msg.contains("bad.csv") && msg.contains("row 3"), "{msg}");
    assert!(read_system(&dir.path().join("missing.json"), None).is_err());
}
