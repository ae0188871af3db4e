//! Property tests for the exact invariants over the fixture corpus.

use std::path::PathBuf;
use std::sync::OnceLock;

use kstab_core::chambers::volume_function;
use kstab_core::geometry::{dilate, volume, volume_with_anchor};
use kstab_core::input::{parse_rational, InputDocument};
use kstab_core::invariants::{beta, delta, ToricValuation};
use kstab_core::oracles::{random_audit, random_points};
use kstab_core::toric::{Scope, ToricCouple};
use kstab_core::walls::level_set;
use kstab_core::Rational;
use proptest::prelude::*;

const FIXTURES: [&str; 6] =
    ["p2_line.json", "p2_boundary.json", "f1_exceptional.json", "p1p2.json", "p1p1_sym.json", "p2_k2.json"];

fn couples() -> &'static [ToricCouple] {
    static CELL: OnceLock<Vec<ToricCouple>> = OnceLock::new();
    CELL.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        FIXTURES
            .iter()
            .map(|n| InputDocument::parse_file(&dir.join(n)).and_then(|d| d.to_couple()).unwrap())
            .collect()
    })
}

fn factorial(d: usize) -> Rational {
    Rational::from_integer((1..=d as i64).product::<i64>().into())
}

/// A fixture index, a point of its coefficient polytope and a direction.
fn instance() -> impl Strategy<Value = (usize, Vec<Rational>, Vec<i64>)> {
    (0..FIXTURES.len(), any::<u64>(), prop::collection::vec(-4i64..=4, 3)).prop_filter_map(
        "zero direction",
        |(i, seed, u)| {
            let c = &couples()[i];
            let u: Vec<i64> = u.into_iter().take(c.dim()).collect();
            (u.iter().any(|&v| v != 0)).then(|| (i, random_points(c, 1, seed).remove(0), u))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants_are_homogeneous_in_u((i, x, u) in instance(), lambda in 1i64..6) {
        let c = &couples()[i];
        let u = ToricValuation::from_ints(&u).unwrap();
        let l = Rational::from_integer(lambda.into());
        let r1 = beta(c, &x, &u).unwrap();
        let rl = beta(c, &x, &u.scaled(&l)).unwrap();
        prop_assert_eq!(&rl.a, &(&r1.a * &l));
        prop_assert_eq!(&rl.s, &(&r1.s * &l));
        prop_assert_eq!(&rl.beta, &(&r1.beta * &l));
        prop_assert_eq!(rl.ratio, r1.ratio);
    }

    #[test]
    fn delta_bounds_every_valuation((i, x, u) in instance()) {
        let c = &couples()[i];
        prop_assume!(c.is_log_fano(&x, Scope::Coefficient));
        let d = delta(c, &x).unwrap();
        let r = beta(c, &x, &ToricValuation::from_ints(&u).unwrap()).unwrap();
        if let Some(ratio) = r.ratio {
            prop_assert!(d.delta <= ratio, "delta {} above A/S {}", d.delta, ratio);
        }
        prop_assert!(d.candidates.iter().any(|cand| cand.ratio == d.delta));
    }

    #[test]
    fn volume_is_anchor_independent((i, x, _u) in instance(), s in 1i64..4) {
        let c = &couples()[i];
        let p = c.anticanonical_polytope(&x).unwrap();
        let v = volume(&p).unwrap();
        for a in 1..p.vertices().len() {
            prop_assert_eq!(&volume_with_anchor(&p, a).unwrap(), &v);
        }
        let s = Rational::from_integer(s.into());
        let scaled = volume(&dilate(&p, &s).unwrap()).unwrap();
        prop_assert_eq!(scaled, v * num_traits::pow(s, c.dim()));
    }

    #[test]
    fn chamber_volume_matches_direct((i, x, _u) in instance()) {
        let c = &couples()[i];
        let f = volume_function(c).unwrap();
        let direct = volume(&c.anticanonical_polytope(&x).unwrap()).unwrap() * factorial(c.dim());
        prop_assert_eq!(f.eval(&x), Some(direct));
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r = Rational::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn level_sets_agree_with_direct_delta(i in 0..FIXTURES.len(), num in 1i64..=8, seed in any::<u64>()) {
        let c = &couples()[i];
        let tau = Rational::new(num.into(), 8.into());
        let set = level_set(c, &tau).unwrap();
        let report = random_audit(c, &set, &tau, 50, seed);
        prop_assert!(report.is_clean(), "{:?}", report.discrepancies.first());
        prop_assert!(report.members <= report.checked);
    }
}
