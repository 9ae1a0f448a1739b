mod common;

use std::collections::BTreeSet;

use common::*;
use gamecat_core::combinators::limits::d_b_regular;
use gamecat_core::enumerate::{level_map_to_run_map, level_maps};
use gamecat_core::game::{Code, Player};
use gamecat_core::metric::*;
use proptest::prelude::*;

fn space(codes: &[&[usize]]) -> UltraSpace {
    let n = codes.len();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    UltraSpace::from_fn(labels, |i, j| if i == j { Code::Inf } else { Code::Fin(codes[i][j]) }).unwrap()
}

#[test]
fn runs_apart_at_the_root_have_code_zero() {
    let g = game(&[(run(&[], "0"), Player::Alice), (run(&[], "1"), Player::Bob)]);
    let rs = run_space(&g);
    assert_eq!(rs.space.code(0, 1), Code::Fin(0));
    assert_eq!(rs.space.distance(0, 1), num_rational::Ratio::from_integer(1));
    assert_eq!(rs.alice, vec![true, false]);
}

#[test]
fn strict_quotient_preimages_have_code_zero() {
    let sc = gamecat_core::combinators::counterexample("strict_quotient_gap", 2).unwrap();
    let t = sc.regular("T").unwrap();
    let c = sc.map("c").unwrap();
    let rs = run_space(t);
    let star = m("*");
    let r = gamecat_core::game::Run::constant(vec![star.clone()], m("0"));
    let r2 = gamecat_core::game::Run::constant(vec![star], m("1"));
    let s = rs.runs.iter().position(|x| c.run_image(x).unwrap() == r).unwrap();
    let s2 = rs.runs.iter().position(|x| c.run_image(x).unwrap() == r2).unwrap();
    assert_eq!(rs.space.code(s, s2), Code::Fin(0));
    assert_eq!(r.delta(&r2), Code::Fin(1));
}

#[test]
fn terminal_run_space_is_a_point() {
    let rs = run_space(&terminal());
    assert_eq!(rs.space.len(), 1);
    assert_eq!(rs.space.to_string().lines().count(), 1);
}

#[test]
fn ball_game_of_a_point_is_one_branch() {
    let b = ball_game(&space(&[&[0]]), None);
    assert_eq!(b.game.len(), 1);
    assert_eq!(level_counts(&b.game, 4), vec![1; 5]);
}

#[test]
fn ball_game_splits_where_the_code_says() {
    let b = ball_game(&space(&[&[0, 1], &[1, 0]]), None);
    assert_eq!(level_counts(&b.game, 3), vec![1, 1, 2, 2]);
    let b = ball_game(&space(&[&[0, 2], &[2, 0]]), None);
    assert_eq!(level_counts(&b.game, 3), vec![1, 1, 1, 2]);
    let runs = b.game.basis();
    assert_eq!(runs[0].delta(&runs[1]), Code::Fin(2));
}

#[test]
fn counit_of_two_points_is_a_bijection() {
    let x = space(&[&[0, 1], &[1, 0]]);
    let b = ball_game(&x, None);
    let eps = counit(&b).unwrap();
    let hit: BTreeSet<usize> = eps.values().copied().collect();
    assert_eq!(hit.len(), 2);
    assert!(ball_roundtrip(&x).unwrap().holds());
}

#[test]
fn ball_game_payoff_follows_the_subset() {
    let x = space(&[&[0, 0, 0], &[0, 0, 3], &[0, 3, 0]]);
    let b = ball_game(&x, Some(&[true, false, true]));
    let eps = counit(&b).unwrap();
    for (r, p) in eps {
        assert_eq!(b.game.winner(&r) == Some(Player::Alice), p != 1);
    }
}

#[test]
fn every_finite_coded_space_is_a_sequence_space() {
    assert!(is_seqspa(&space(&[&[0, 4], &[4, 0]])));
    assert!(is_seqspa(&run_space(&binary(3)).space));
    let x = space(&[&[0, 0], &[0, 0]]);
    let h = hom_space(&x, &x, 10_000).unwrap();
    assert!(is_seqspa(&h.space));
}

#[test]
fn broken_triangle_is_rejected() {
    let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let codes = vec![
        vec![Code::Inf, Code::Fin(3), Code::Fin(0)],
        vec![Code::Fin(3), Code::Inf, Code::Fin(3)],
        vec![Code::Fin(0), Code::Fin(3), Code::Inf],
    ];
    assert!(UltraSpace::new(labels.clone(), codes.clone()).is_err());
    let raw = UltraSpace::raw(labels, codes).unwrap();
    assert!(!is_seqspa(&raw));
    assert!(raw.strong_triangle_witness().is_some());
}

#[test]
fn hom_from_a_point_is_the_target() {
    let y = space(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
    let h = hom_space(&space(&[&[0]]), &y, 10_000).unwrap();
    assert_eq!(h.space.len(), 3);
    let map: Vec<usize> = h.maps.iter().map(|f| f[0]).collect();
    assert!(h.space.is_isometry(&y, &map));
}

#[test]
fn hom_into_a_point_is_a_point() {
    let x = space(&[&[0, 1], &[1, 0]]);
    assert_eq!(hom_space(&x, &space(&[&[0]]), 10_000).unwrap().space.len(), 1);
}

#[test]
fn hom_of_two_discrete_points() {
    let x = space(&[&[0, 0], &[0, 0]]);
    let h = hom_space(&x, &x, 10_000).unwrap();
    assert_eq!(h.maps.len(), 4);
    let id = h.maps.iter().position(|f| f == &vec![0, 1]).unwrap();
    let swap = h.maps.iter().position(|f| f == &vec![1, 0]).unwrap();
    assert_eq!(h.space.code(id, swap), Code::Fin(0));
}

#[test]
fn hom_space_respects_the_cap() {
    let x = space(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
    assert!(hom_space(&x, &x, 10).is_err());
}

#[test]
fn krom_space_keeps_bob_runs() {
    let g = binary(2);
    assert_eq!(krom_space(&g.with_payoff(|_| Player::Alice)).space.len(), 0);
    assert_eq!(krom_space(&g.with_payoff(|_| Player::Bob)).space, run_space(&g).space);
}

#[test]
fn krom_space_of_quit_extension_is_dense() {
    let mut rng = rng(9);
    for _ in 0..20 {
        let g = small(&mut rng, 3, 3, 5);
        let d = d_b_regular(&g, 4);
        let k = krom_space(&d);
        for t in d.moments_upto(3) {
            assert!(k.runs.iter().any(|r| r.truncate(t.len()) == t), "{t} has no Bob run");
        }
    }
}

#[test]
fn classifier_gadget_codes_and_maps() {
    let n = 5;
    let gd = classifier_gadget(n).unwrap();
    let bar = gd.limit();
    for k in 0..n {
        assert_eq!(gd.space.code(bar, k), Code::Fin(k));
        for m in 0..n {
            if k != m {
                assert_eq!(gd.space.code(k, m), Code::Fin(k.min(m)));
            }
        }
    }
    assert!(gd.space.is_nonexpanding(&gd.target, &gd.chi));
    assert!(gd.space.is_nonexpanding(&gd.target, &gd.chi_prime));
    assert_eq!(gd.fibre(&gd.chi, bar), vec![bar]);
    assert_eq!(gd.fibre(&gd.chi_prime, bar), vec![bar]);
    assert!((0..n - 1).any(|k| gd.chi[k] != gd.chi_prime[k]));
    assert!(classifier_gadget(1).is_err());
}

#[test]
fn nonexpansion_matches_chronological_maps() {
    let mut rng = rng(4);
    for _ in 0..25 {
        let g1 = small(&mut rng, 2, 2, 3);
        let g2 = small(&mut rng, 2, 2, 3);
        let depth = g1.horizon().max(g2.horizon()) + 1;
        let chron: BTreeSet<Table> =
            level_maps(&g1, &g2, depth, 100_000).unwrap().iter().map(|t| level_map_to_run_map(&g1, &g2, t, depth)).collect();
        let (x, y) = (run_space(&g1), run_space(&g2));
        let lipschitz: BTreeSet<Table> = all_functions(&g1, &g2)
            .into_iter()
            .filter(|t| {
                let map: Vec<usize> = x.runs.iter().map(|r| y.point_of(&t[r]).unwrap()).collect();
                x.space.is_nonexpanding(&y.space, &map)
            })
            .collect();
        assert_eq!(chron, lipschitz);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn run_spaces_satisfy_the_strong_triangle(seed in any::<u64>()) {
        let g = small(&mut rng(seed), 3, 4, 8);
        let rs = run_space(&g);
        prop_assert!(rs.space.strong_triangle_witness().is_none());
        prop_assert!(is_seqspa(&rs.space));
    }

    #[test]
    fn ball_roundtrip_is_an_isometry_on_run_spaces(seed in any::<u64>()) {
        let g = small(&mut rng(seed), 3, 4, 8);
        let rt = ball_roundtrip(&run_space(&g).space).unwrap();
        prop_assert!(rt.holds());
    }

    #[test]
    fn hom_spaces_satisfy_the_strong_triangle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = run_space(&small(&mut r, 2, 2, 3)).space;
        let y = run_space(&small(&mut r, 2, 2, 3)).space;
        let h = hom_space(&x, &y, 10_000).unwrap();
        prop_assert!(h.space.strong_triangle_witness().is_none());
    }
}
