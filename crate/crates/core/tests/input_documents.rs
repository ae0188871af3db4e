use std::path::PathBuf;

use kstab_core::input::{CoeffPolytopeSpec, DivisorSpec, ExactRational, Format, InputDocument, Options};
use kstab_core::Rational;
use proptest::prelude::*;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn bundled_fixtures_parse() {
    let mut n = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let doc = InputDocument::parse_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(doc.to_couple().is_ok());
        n += 1;
    }
    assert!(n >= 6);
}

#[test]
fn toml_and_json_agree() {
    let a = InputDocument::parse_file(&fixtures().join("p2_line.json")).unwrap();
    let b = InputDocument::parse_file(&fixtures().join("p2_line.toml")).unwrap();
    assert_eq!(a, b);
}

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational(Rational::new(n.into(), d.into()))
}

fn doc_strategy() -> impl Strategy<Value = InputDocument> {
    let fans = prop_oneof![
        Just((vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]])),
        Just((
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]
        )),
    ];
    (fans, 1usize..=2, 0..=i64::MAX as u64, 0i64..=8, 1i64..=8, proptest::option::of(1i64..=12), any::<bool>()).prop_flat_map(
        |((rays, cones), k, bits, lo, span, tau, seed)| {
            let n = rays.len();
            let coeffs = proptest::collection::vec(proptest::collection::vec(0u64..3, n), k)
                .prop_filter("nonzero divisors", |ds| ds.iter().all(|d| d.iter().any(|&c| c > 0)));
            coeffs.prop_map(move |ds| {
                let hi = (lo + span).min(16);
                let mut ineqs = Vec::new();
                for j in 0..k {
                    let mut lower = vec![q(-lo.min(hi - 1), 16)];
                    let mut upper = vec![q(hi, 16)];
                    for i in 0..k {
                        lower.push(q((i == j) as i64, 1));
                        upper.push(q(-((i == j) as i64), 1));
                    }
                    ineqs.push(lower);
                    ineqs.push(upper);
                }
                InputDocument {
                    version: Some(1),
                    dim: 2,
                    rays: rays.clone(),
                    max_cones: cones.clone(),
                    divisors: ds
                        .into_iter()
                        .enumerate()
                        .map(|(j, coeffs)| DivisorSpec { name: format!("D{j}"), coeffs })
                        .collect(),
                    coeff_polytope: CoeffPolytopeSpec { ineqs },
                    options: Options {
                        tau: tau.map(|t| q(t, 12)),
                        seed: seed.then_some(bits),
                        refinement_width: None,
                    },
                }
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(doc in doc_strategy()) {
        let json = doc.to_json_string();
        prop_assert_eq!(&InputDocument::parse_str(&json, Format::Json).unwrap(), &doc);
        let toml = doc.to_toml_string().unwrap();
        prop_assert_eq!(&InputDocument::parse_str(&toml, Format::Toml).unwrap(), &doc);
    }
}
