mod common;

use std::collections::BTreeSet;

use common::*;
use gamecat_core::combinators::colimits::{kernel_pair, level_sizes};
use gamecat_core::combinators::exponential::{encode, single_board};
use gamecat_core::combinators::factor::{check_factorization, in_left, in_right, middle_signature, Arrow};
use gamecat_core::combinators::limits::{coproduct_regular, injection, untag_run};
use gamecat_core::combinators::ump::{coequalizer_ump, coproduct_ump, equalizer_ump, product_ump};
use gamecat_core::combinators::*;
use gamecat_core::game::{canonical_game, Canonical, Game, Move, Moment, Player, RegularGame, Run};
use gamecat_core::morphism::{profile, run_table, ChronMap};
use gamecat_core::strategy::has_winning_strategy;

fn regular(g: &Game) -> RegularGame {
    g.regular().expect("regular").clone()
}

#[test]
fn empty_product_is_terminal() {
    let p = product(&[], Mode::A);
    let g = regular(&p.game);
    assert_eq!(g.len(), 1);
    assert_eq!(g.alice_runs().len(), 1);
    assert_eq!(level_counts(&g, 4), vec![1; 5]);
}

#[test]
fn terminal_is_a_unit_for_the_product() {
    let g = binary(2);
    let (p, pr) = product_regular(&[terminal(), g.clone()], Mode::A);
    for n in 0..=4 {
        let imgs: BTreeSet<Moment> = p.level(n).iter().map(|t| pr[1].apply(t)).collect();
        assert_eq!(imgs.len(), p.level(n).len());
        assert_eq!(imgs, g.level(n).into_iter().collect());
    }
    let table = run_table(&pr[1], &p).unwrap();
    for (r, w) in p.runs() {
        assert_eq!(g.winner(&table[r]), Some(w));
    }
}

#[test]
fn product_of_generating_games_has_one_pair_move() {
    let p = product(&[canonical_game(Canonical::Generating), canonical_game(Canonical::Generating)], Mode::A);
    let star = Move::atom("*");
    assert_eq!(p.game.tree.children(&[]), vec![Move::tuple(vec![star.clone(), star])]);
}

#[test]
fn product_modes_differ_on_mixed_boards() {
    let g1 = game(&[(run(&[], "a"), Player::Alice)]);
    let g2 = game(&[(run(&[], "b"), Player::Bob)]);
    let (pa, _) = product_regular(&[g1.clone(), g2.clone()], Mode::A);
    let (pb, _) = product_regular(&[g1, g2], Mode::B);
    assert_eq!(pa.alice_runs().len(), 0);
    assert_eq!(pb.alice_runs().len(), 1);
}

#[test]
fn empty_coproduct_is_empty() {
    let c = coproduct(&[]);
    assert!(c.game.is_empty());
}

#[test]
fn coproduct_tags_first_moves() {
    let c = coproduct(&[canonical_game(Canonical::Terminal), canonical_game(Canonical::Generating)]);
    let kids = c.game.tree.children(&[]);
    assert_eq!(kids.len(), 2);
    let tags: BTreeSet<&str> = kids.iter().map(|m| m.component_tag().expect("tagged")).collect();
    assert_eq!(tags.len(), 2);
    let g = coproduct_regular(&[terminal(), generating()]);
    assert_eq!(g.alice_runs().len(), 1);
}

#[test]
fn equalizer_of_equal_maps_is_everything() {
    let g = binary(2);
    let f = ChronMap::identity();
    let (e, _) = equalizer(&f, &f, &g).unwrap();
    assert_eq!(e.basis(), g.basis());
}

#[test]
fn equalizer_of_everywhere_different_maps_is_empty() {
    let g = binary(2);
    let cog = canonical_game(Canonical::Cogenerating);
    let f = ChronMap::letterwise(|_| Move::atom("1"));
    let h = ChronMap::letterwise(|_| Move::atom("0"));
    assert!(cog.tree.contains(&f.apply(&g.level(3)[0])));
    let (e, _) = equalizer(&f, &h, &g).unwrap();
    assert!(e.is_empty());
}

#[test]
fn equalizer_inclusion_equalizes() {
    let mut rng = rng(11);
    for _ in 0..20 {
        let dom = small(&mut rng, 2, 3, 5);
        let cod = small(&mut rng, 2, 2, 3);
        let (_, f) = gamecat_core::random::chron_map(&mut rng, &dom, &cod);
        let (_, g) = gamecat_core::random::chron_map(&mut rng, &dom, &cod);
        let (e, incl) = equalizer(&f, &g, &dom).unwrap();
        for t in e.moments_upto(6) {
            let u = incl.apply(&t);
            assert_eq!(f.apply(&u), g.apply(&u));
        }
    }
}

#[test]
fn pullback_along_identities_is_the_product() {
    let g1 = binary(1);
    let g2 = game(&[(run(&["x"], "y"), Player::Alice), (run(&["z"], "y"), Player::Bob)]);
    let t = terminal();
    let to_t = ChronMap::letterwise(|_| Move::atom("*"));
    let pb = pullback(&to_t, &to_t, &g1, &g2, Mode::A).unwrap();
    let (p, _) = product_regular(&[g1, g2], Mode::A);
    assert!(t.len() == 1);
    assert_eq!(pb.game.basis(), p.basis());
    assert_eq!(pb.game.alice_runs(), p.alice_runs());
}

#[test]
fn kernel_pair_of_gallery_quotient_has_the_counted_pairs() {
    let sc = counterexample("quotient_composite", 4).unwrap();
    let t = sc.regular("T").unwrap();
    let q = sc.map("q").unwrap();
    let kp = kernel_pair(q, t).unwrap();
    let table = run_table(q, t).unwrap();
    let pairs: usize = t.runs().map(|(r, _)| table.values().filter(|s| **s == table[r]).count()).sum();
    assert_eq!(kp.game.clone().len(), pairs);
}

#[test]
fn coequalizer_of_equal_maps_is_the_codomain() {
    let cod = binary(2);
    let dom = binary(1);
    let f = ChronMap::identity();
    let c = coequalizer(&f, &f, &dom, &cod, Mode::A).unwrap();
    assert_eq!(level_sizes(&c.game, 4), level_counts(&cod, 4));
    let mut seen = BTreeSet::new();
    for (r, w) in cod.runs() {
        assert_eq!(c.game.winner(&c.table[r]), Some(w));
        assert!(seen.insert(c.table[r].clone()));
    }
}

#[test]
fn coequalizer_of_kernel_pair_recovers_the_quotient_codomain() {
    let sc = counterexample("quotient_composite", 4).unwrap();
    let t = sc.regular("T").unwrap();
    let q = sc.map("q").unwrap();
    let kp = kernel_pair(q, t).unwrap();
    let c = coequalizer(&kp.p1, &kp.p2, &kp.game.clone(), t, Mode::A).unwrap();
    // The image of q: runs *^a 0^ω for a ≤ K and *^ω, counted directly.
    let image: BTreeSet<Run> = run_table(q, t).unwrap().into_values().collect();
    let image_counts: Vec<usize> =
        (0..=6).map(|n| image.iter().map(|r| r.truncate(n)).collect::<BTreeSet<_>>().len()).collect();
    assert_eq!(level_sizes(&c.game, 6), image_counts);
    let image_alice = image.iter().filter(|r| t.runs().any(|(s, p)| p == Player::Alice && q.run_image(s).unwrap() == **r)).count();
    assert_eq!(c.game.alice_runs().len(), image_alice);
}

#[test]
fn coequalizer_modes_differ_only_on_mixed_classes() {
    let cod = game(&[
        (run(&["0"], "0"), Player::Alice),
        (run(&["1"], "0"), Player::Bob),
        (run(&["2"], "0"), Player::Alice),
    ]);
    let dom = game(&[(run(&[], "x"), Player::Alice)]);
    let f = ChronMap::from_run_table(&dom, [(run(&[], "x"), run(&["0"], "0"))].into()).unwrap();
    let g = ChronMap::from_run_table(&dom, [(run(&[], "x"), run(&["1"], "0"))].into()).unwrap();
    let a = coequalizer(&f, &g, &dom, &cod, Mode::A).unwrap();
    let b = coequalizer(&f, &g, &dom, &cod, Mode::B).unwrap();
    assert_eq!(a.game.len(), 2);
    let merged = &a.table[&run(&["0"], "0")];
    assert_eq!(merged, &a.table[&run(&["1"], "0")]);
    assert_eq!(a.game.winner(merged), Some(Player::Alice));
    assert_eq!(b.game.winner(&b.table[&run(&["0"], "0")]), Some(Player::Bob));
    let lone = run(&["2"], "0");
    assert_eq!(a.game.winner(&a.table[&lone]), b.game.winner(&b.table[&lone]));
}

#[test]
fn pushout_along_identity_is_the_codomain() {
    let dom = binary(1);
    let g1 = binary(2);
    let incl = ChronMap::identity();
    let po = pushout(&incl, &ChronMap::identity(), &dom, &g1, &dom, Mode::A).unwrap();
    assert_eq!(level_sizes(&po.game, 4), level_counts(&g1, 4));
}

#[test]
fn cokernel_pair_of_subtree_inclusion_has_three_summands() {
    let big = binary(2);
    let sub = big.restrict(|r| r.at(0) == &Move::atom("0"));
    let incl = ChronMap::identity();
    let po = pushout(&incl, &incl, &sub, &big, &big, Mode::A).unwrap();
    // (T′∖T) ⊔ T ⊔ (T′∖T)
    assert_eq!(po.game.len(), 2 * (big.len() - sub.len()) + sub.len());
}

#[test]
fn pushout_of_embedding_is_an_embedding() {
    let mut rng = rng(8);
    for _ in 0..10 {
        let x = small(&mut rng, 2, 3, 4);
        let s = gamecat_core::random::subgame(&mut rng, &x);
        let y0 = small(&mut rng, 2, 2, 3);
        let (s2, _, f) = morphism(&mut rng, &s, &y0, Player::Alice);
        let y = y0;
        let x = x.with_payoff(|r| s2.winner(r).unwrap_or_else(|| x.winner(r).unwrap()));
        let po = pushout(&f, &ChronMap::identity(), &s2, &y, &x, Mode::A).unwrap();
        let prof = profile(&po.j1, &y.game(), &po.game.game(), 5).unwrap();
        assert!(prof.embedding.holds, "{prof:?}");
    }
}

#[test]
fn d_b_of_empty_is_one_quit_branch() {
    let g = d_b(&canonical_game(Canonical::Empty));
    let q = limits::quit_move();
    assert_eq!(g.tree.children(&[]), vec![q.clone()]);
    assert_eq!(g.tree.children(&[q.clone(), q.clone()]), vec![q]);
}

#[test]
fn d_b_of_terminal_lets_bob_win_the_quit() {
    let g = d_b(&canonical_game(Canonical::Terminal));
    let q = limits::quit_move();
    let quit = Run::constant(vec![], q);
    let stay = Run::constant(vec![], Move::atom("*"));
    assert_eq!(g.evaluate(&quit).unwrap(), Player::Bob);
    assert_eq!(g.evaluate(&stay).unwrap(), Player::Alice);
}

#[test]
fn d_b_keeps_strategy_existence() {
    let mut rng = rng(5);
    for _ in 0..20 {
        let g = small(&mut rng, 2, 3, 5);
        let d = d_b_regular(&g, 3);
        for p in [Player::Alice, Player::Bob] {
            assert_eq!(scan_winning(&g, p, 1 << 16), scan_winning(&d, p, 1 << 16));
            assert_eq!(Some(has_winning_strategy(&d, p)), scan_winning(&d, p, 1 << 16));
        }
    }
}

#[test]
fn umps_have_unique_mediators() {
    let mut rng = rng(21);
    let cap = 10_000;
    for _ in 0..6 {
        let g1 = small(&mut rng, 2, 2, 3);
        let g2 = small(&mut rng, 2, 2, 2);
        let z = small(&mut rng, 2, 2, 2);
        for mode in [Mode::A, Mode::B] {
            assert!(product_ump(&g1, &g2, &z, mode, cap).unwrap().iter().all(|c| *c == 1));
            assert!(coproduct_ump(&g1, &g2, &z, mode, cap).unwrap().iter().all(|c| *c == 1));
        }
        let (_, f) = gamecat_core::random::chron_map(&mut rng, &g1, &g2);
        let (_, g) = gamecat_core::random::chron_map(&mut rng, &g1, &g2);
        for mode in [Mode::A, Mode::B] {
            assert!(equalizer_ump(&f, &g, &g1, &z, mode, cap).unwrap().iter().all(|c| *c == 1));
            let dom = small(&mut rng, 2, 2, 2);
            let (dom, _, f2) = morphism(&mut rng, &dom, &g1, mode.player());
            let (_, g2m) = gamecat_core::random::chron_map(&mut rng, &dom, &g1);
            let counts = coequalizer_ump(&f2, &g2m, &dom, &g1, &z, mode, cap).unwrap();
            assert!(counts.iter().all(|c| *c == 1), "{counts:?}");
        }
    }
}

#[test]
fn gallery_verdicts_match() {
    for name in gallery::SCENARIOS {
        let sc = counterexample(name, 4).unwrap();
        for v in sc.evaluate().unwrap() {
            assert!(v.agrees(), "{name}: {} expected {} observed {} ({})", v.claim, v.expected, v.observed, v.detail);
        }
    }
}

#[test]
fn factorizations_are_correct_and_orthogonal() {
    let mut rng = rng(77);
    for system in System::ALL {
        for _ in 0..8 {
            let dom = small(&mut rng, 2, 2, 4);
            let cod = small(&mut rng, 2, 2, 3);
            let (dom, _, f) = morphism(&mut rng, &dom, &cod, Player::Alice);
            let fac = factorize(&f, &dom, &cod, system).unwrap();
            assert!(check_factorization(&fac, &f, &dom, &cod).unwrap(), "{system}");
            let e = Arrow { dom: dom.clone(), cod: fac.middle.clone(), table: fac.e_table.clone() };
            let m = Arrow { dom: fac.middle.clone(), cod: cod.clone(), table: fac.m_table.clone() };
            let counts = orthogonal_diagonals(&e, &m, 10_000).unwrap();
            assert!(counts.iter().all(|c| *c == 1), "{system}: {counts:?}");
        }
    }
}

#[test]
fn factorization_of_an_injective_map_keeps_it() {
    let dom = binary(1);
    let cod = binary(2);
    let f = ChronMap::identity();
    let dom = dom.with_payoff(|r| cod.winner(r).unwrap());
    let fac = factorize(&f, &dom, &cod, System::EpiRegMono).unwrap();
    assert_eq!(fac.middle.basis(), dom.basis());
    assert_eq!(fac.m_table, run_table(&f, &dom).unwrap());
}

#[test]
fn surjective_map_factors_through_identity_on_image() {
    let sc = counterexample("surjective_not_run_surjective", 4).unwrap();
    let dom = sc.regular("T1").unwrap();
    let f = sc.map("f").unwrap();
    let cod = RegularGame::from_game(sc.game("cogenerating").unwrap(), 4, 1, 8, 10_000).unwrap();
    let fac = factorize(f, dom, &cod, System::EpiRegMono).unwrap();
    assert_eq!(fac.e_table, run_table(f, dom).unwrap());
    assert!(fac.m_table.iter().all(|(a, b)| a == b));
    assert_eq!(fac.middle.len(), 4);
}

#[test]
fn four_systems_have_distinct_middles() {
    let x = game(&[(run(&["a"], "0"), Player::Bob), (run(&["b"], "1"), Player::Bob)]);
    let y = game(&[(run(&["c"], "0"), Player::Alice), (run(&["c"], "1"), Player::Alice)]);
    let table: Table = [(run(&["a"], "0"), run(&["c"], "0")), (run(&["b"], "1"), run(&["c"], "1"))].into();
    let f = ChronMap::from_run_table(&x, table).unwrap();
    let sigs: BTreeSet<(Vec<usize>, Vec<Run>)> =
        System::ALL.iter().map(|s| middle_signature(&factorize(&f, &x, &y, *s).unwrap(), 3)).collect();
    assert_eq!(sigs.len(), 4);
}

#[test]
fn class_membership_is_exclusive_on_the_example() {
    let x = game(&[(run(&["a"], "0"), Player::Bob), (run(&["b"], "1"), Player::Bob)]);
    let y = game(&[(run(&["c"], "0"), Player::Alice), (run(&["c"], "1"), Player::Alice)]);
    let table: Table = [(run(&["a"], "0"), run(&["c"], "0")), (run(&["b"], "1"), run(&["c"], "1"))].into();
    assert!(!in_right(System::EMStar, &table, &x, &y));
    assert!(in_right(System::StrongEpiMono, &table, &x, &y));
    assert!(!in_right(System::EpiRegMono, &table, &x, &y));
    assert!(in_left(System::EpiRegMono, &table, &x, &y));
    assert!(!in_left(System::EStarM, &table, &x, &y));
}

#[test]
fn exponential_of_generating_is_the_target() {
    let g = binary(2);
    let exp = exponential(&generating(), &g, 1000).unwrap();
    let iso = single_board();
    for n in 0..=3 {
        let imgs: BTreeSet<Moment> = exp.game.level(n).iter().map(|t| iso.apply(t)).collect();
        assert_eq!(imgs.len(), exp.game.level(n).len());
        assert_eq!(imgs, g.level(n).into_iter().collect());
    }
}

#[test]
fn exponential_into_terminal_is_all_alice() {
    let g = binary(2);
    let exp = exponential(&g, &terminal(), 1000).unwrap();
    assert_eq!(exp.game.alice_runs().len(), exp.game.len());
}

#[test]
fn exponential_level_one_counts_functions() {
    let g = binary(1);
    let exp = exponential(&g, &g, 1000).unwrap();
    assert_eq!(exp.game.level(1).len(), 2usize.pow(2));
    // Runs are exactly the nonexpanding maps.
    assert_eq!(exp.game.len(), all_nonexpanding(&g, &g).len());
}

#[test]
fn eval_picks_the_chosen_moment() {
    let g = binary(2);
    let exp = exponential(&generating(), &g, 1000).unwrap();
    let (ev, _) = eval_curry(&exp, None, None).unwrap();
    let (p, _) = product_regular(&[exp.game.clone(), generating()], Mode::A);
    for t in p.level(3) {
        let picked: Vec<Move> = t.0.iter().map(|m| m.parts().unwrap()[0].parts().unwrap()[0].clone()).collect();
        assert_eq!(ev.apply(&t).0, picked);
    }
}

#[test]
fn curry_of_eval_is_identity() {
    let g = binary(1);
    let exp = exponential(&g, &g, 1000).unwrap();
    let (ev, _) = eval_curry(&exp, None, None).unwrap();
    let (_, cur) = eval_curry(&exp, Some(&exp.game), Some(&ev)).unwrap();
    let cur = cur.unwrap();
    for t in exp.game.moments_upto(3) {
        assert_eq!(cur.apply(&t), t);
    }
    for (r, _) in exp.game.runs() {
        assert_eq!(&cur.run_image(r).unwrap(), r);
    }
}

#[test]
fn curry_makes_the_triangle_commute_uniquely() {
    let mut rng = rng(3);
    for _ in 0..5 {
        let g = small(&mut rng, 2, 1, 2);
        let g1 = small(&mut rng, 2, 1, 2);
        let g2 = small(&mut rng, 2, 1, 2);
        let (prod, _) = product_regular(&[g.clone(), g1.clone()], Mode::A);
        let (_, h) = gamecat_core::random::chron_map(&mut rng, &prod, &g2);
        let exp = exponential(&g1, &g2, 10_000).unwrap();
        let (ev, cur) = eval_curry(&exp, Some(&g), Some(&h)).unwrap();
        let cur = cur.unwrap();
        let pair = product_map(&[cur.clone(), ChronMap::identity()]);
        for t in prod.moments_upto(3) {
            assert_eq!(ev.apply(&pair.apply(&t)), h.apply(&t));
        }
        let h_table = run_table(&h, &prod).unwrap();
        let mut count = 0;
        for u in all_nonexpanding(&g, &exp.game) {
            let ok = prod.runs().all(|(r, _)| {
                let parts = r.unzip(2).unwrap();
                exp.maps[&u[&parts[0]]][&parts[1]] == h_table[r]
            });
            count += usize::from(ok);
        }
        assert_eq!(count, 1);
    }
}

#[test]
fn exponential_strategy_law() {
    let mut rng = rng(17);
    for _ in 0..10 {
        let g1 = small(&mut rng, 2, 1, 2);
        let g2 = small(&mut rng, 2, 2, 3);
        let exp = exponential(&g1, &g2, 10_000).unwrap();
        let cap = 1 << 18;
        let (Some(a_exp), Some(a2)) = (scan_winning(&exp.game, Player::Alice, cap), scan_winning(&g2, Player::Alice, cap)) else {
            continue;
        };
        if !g1.alice_runs().is_empty() {
            assert_eq!(a_exp, a2);
        }
        if scan_winning(&g2, Player::Bob, cap) == Some(true) && !g1.alice_runs().is_empty() {
            assert_eq!(scan_winning(&exp.game, Player::Bob, cap), Some(true));
        }
    }
}

#[test]
fn encode_is_injective_on_maps() {
    let g = binary(1);
    let maps = all_nonexpanding(&g, &g);
    let codes: BTreeSet<Run> = maps.iter().map(|phi| encode(phi, &g)).collect();
    assert_eq!(codes.len(), maps.len());
}

#[test]
fn classifier_of_identity_is_the_map() {
    let s = binary(2);
    let t = binary(1);
    let (s, table, f) = morphism(&mut rng(1), &s, &t, Player::Alice);
    let fb = classify_partial(&ChronMap::identity(), &s, &s, &f).unwrap();
    for u in s.moments_upto(4) {
        assert_eq!(fb.apply(&u), f.apply(&u));
    }
    assert_eq!(run_table(&fb, &s).unwrap(), table);
}

#[test]
fn classifier_pads_after_a_quit() {
    let s = binary(1);
    let t = terminal();
    let s = s.with_payoff(|_| Player::Alice);
    let f = ChronMap::letterwise(|_| Move::atom("*"));
    let s_tilde = d_b_regular(&s, 3);
    let s_tilde = s_tilde.with_payoff(|r| s.winner(r).unwrap_or(Player::Bob));
    let fb = classify_partial(&ChronMap::identity(), &s, &s_tilde, &f).unwrap();
    let q = limits::quit_move();
    let u = Moment(vec![Move::atom("1"), Move::atom("0"), q.clone(), q.clone()]);
    let img = fb.apply(&u);
    assert_eq!(img.0, vec![Move::atom("*"), Move::atom("*"), classifier::pad(), classifier::pad()]);
    let sq = classifier::check_square(&ChronMap::identity(), &s, &s_tilde, &f, &t, &fb, 4).unwrap();
    assert!(sq.holds(), "{sq:?}");
}

#[test]
fn classifier_squares_are_pullbacks() {
    let mut rng = rng(41);
    for _ in 0..10 {
        let s_tilde = small(&mut rng, 2, 3, 5);
        let s = gamecat_core::random::subgame(&mut rng, &s_tilde);
        let t = small(&mut rng, 2, 2, 3);
        let (s, _, f) = morphism(&mut rng, &s, &t, Player::Alice);
        let s_tilde = s_tilde.with_payoff(|r| s.winner(r).unwrap_or_else(|| s_tilde.winner(r).unwrap()));
        let fb = classify_partial(&ChronMap::identity(), &s, &s_tilde, &f).unwrap();
        let sq = classifier::check_square(&ChronMap::identity(), &s, &s_tilde, &f, &t, &fb, 4).unwrap();
        assert!(sq.holds(), "{sq:?}");
    }
}

#[test]
fn classifier_rejects_non_embeddings() {
    let s = game(&[(run(&[], "0"), Player::Alice)]);
    let s_tilde = game(&[(run(&[], "0"), Player::Bob)]);
    let r = classify_partial(&ChronMap::identity(), &s, &s_tilde, &ChronMap::identity());
    assert!(r.is_err());
}

#[test]
fn extensivity_map_is_iso() {
    let g = binary(1);
    let d = extensivity_canonical(&g, &[binary(1), binary(2)], 4).unwrap();
    assert!(d.iso_at_depth);
    let single = extensivity_canonical(&g, &[binary(1)], 4).unwrap();
    assert!(single.iso_at_depth);
    let none = extensivity_canonical(&g, &[], 4).unwrap();
    assert!(none.iso_at_depth && none.domain.is_empty() && none.codomain.is_empty());
}

#[test]
fn coproduct_injection_pulls_back_to_its_component() {
    let g1 = binary(1);
    let g2 = binary(2);
    let sum = coproduct_regular(&[g1.clone(), g2.clone()]);
    let mut rng = rng(2);
    let h_dom = small(&mut rng, 2, 2, 4);
    let (_, h) = gamecat_core::random::chron_map(&mut rng, &h_dom, &sum);
    let pb = pullback(&injection(0), &h, &g1, &h_dom, Mode::A).unwrap();
    let table = run_table(&h, &h_dom).unwrap();
    let expected = h_dom.runs().filter(|(r, _)| untag_run(&table[*r]).map(|(j, _)| j) == Some(0)).count();
    assert_eq!(pb.game.len(), expected);
}
