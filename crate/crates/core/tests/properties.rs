//! Algebraic and metric invariants checked on random and exhaustive inputs.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{free, Folded};
use relsep::cayley::{build_ball, BrokenLine, Metric, RelGraphView};
use relsep::geometry::{attachment_constant, gromov_product, is_quasigeodesic, Q};
use relsep::groups::{FiniteGroup, GenSet};
use relsep::separability::subgroup_graph;
use relsep::shortcut::{check_shortcut_invariants, random_broken_line, shortcut, CorpusParams};
use relsep::{GroupSpec, Letter, PeripheralSpec};

fn f2_rel_a() -> RelGraphView {
    let g = GroupSpec::rel_hyp(GroupSpec::free(2), vec![PeripheralSpec::CyclicGenerator { generator: 0 }]).unwrap();
    RelGraphView::new(g).unwrap()
}

fn z2_star_z() -> GroupSpec {
    GroupSpec::free_product(vec![
        GroupSpec::free_abelian(GenSet::new(["x", "y"]).unwrap()),
        GroupSpec::free_named(GenSet::new(["t"]).unwrap()),
    ])
    .unwrap()
}

fn sl2z() -> GroupSpec {
    let b = GroupSpec::finite(FiniteGroup::cyclic(4).unwrap(), GenSet::new(["b"]).unwrap()).unwrap();
    let c = GroupSpec::finite(FiniteGroup::cyclic(6).unwrap(), GenSet::new(["c"]).unwrap()).unwrap();
    GroupSpec::amalgam(b, c, &[(2, 3)]).unwrap()
}

fn groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::free(2),
        GroupSpec::free_abelian(GenSet::new(["x", "y"]).unwrap()),
        z2_star_z(),
        sl2z(),
        GroupSpec::finite(FiniteGroup::cyclic(5).unwrap(), GenSet::new(["s"]).unwrap()).unwrap(),
    ]
}

/// Words over the first `rank` generators.
fn word(rank: u32, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..=max)
}

fn free_word(max: usize) -> impl Strategy<Value = free::W> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..=max).prop_map(|w| free::reduce(&w))
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn word_to_elem_is_a_homomorphism(gi in 0usize..5, u in word(3, 12), v in word(3, 12)) {
        let g = &groups()[gi];
        let rank = g.gens().len() as u32;
        let clip = |w: &[Letter]| -> Vec<Letter> { w.iter().copied().filter(|l| l.gen < rank).collect() };
        let (u, v) = (clip(&u), clip(&v));
        let uv: Vec<Letter> = u.iter().chain(&v).copied().collect();
        let lhs = g.word_to_elem(&uv).unwrap();
        let rhs = g.mul(&g.word_to_elem(&u).unwrap(), &g.word_to_elem(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn amalgam_multiplication_is_associative(u in word(2, 10), v in word(2, 10), w in word(2, 10)) {
        let g = sl2z();
        let [u, v, w] = [&u, &v, &w].map(|x| g.word_to_elem(x).unwrap());
        let left = g.mul(&g.mul(&u, &v).unwrap(), &w).unwrap();
        let right = g.mul(&u, &g.mul(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn gromov_identity_in_both_metrics(x in free_word(8), y in free_word(8), z in free_word(8)) {
        let view = f2_rel_a();
        let [x, y, z] = [&x, &y, &z].map(|w| free::elem(w));
        for metric in [Metric::Word, Metric::Relative] {
            let d = view.dist(metric, &x, &y).unwrap() as i64;
            let at_x = gromov_product(&view, metric, &y, &z, &x).unwrap();
            let at_y = gromov_product(&view, metric, &x, &z, &y).unwrap();
            prop_assert_eq!(2 * d, at_x.doubled() + at_y.doubled());
        }
    }

    #[test]
    fn gromov_product_shrinks_along_geodesics(x in free_word(7), y in free_word(7), z in free_word(7), i in 0usize..16, j in 0usize..16) {
        let view = f2_rel_a();
        let [x, y, z] = [&x, &y, &z].map(|w| free::elem(w));
        for metric in [Metric::Word, Metric::Relative] {
            let zx = view.geodesic(metric, &z, &x).unwrap();
            let zy = view.geodesic(metric, &z, &y).unwrap();
            let u = &zx.vertices()[i % zx.vertices().len()];
            let v = &zy.vertices()[j % zy.vertices().len()];
            let inner = gromov_product(&view, metric, u, v, &z).unwrap();
            let outer = gromov_product(&view, metric, &x, &y, &z).unwrap();
            prop_assert!(inner <= outer);
        }
    }

    #[test]
    fn relative_metric_is_left_invariant_and_shorter(g in free_word(6), x in free_word(6), y in free_word(6)) {
        let view = f2_rel_a();
        let [g, x, y] = [&g, &x, &y].map(|w| free::elem(w));
        let grp = view.group();
        let d = view.rel_dist(&x, &y).unwrap();
        let shifted = view.rel_dist(&grp.mul(&g, &x).unwrap(), &grp.mul(&g, &y).unwrap()).unwrap();
        prop_assert_eq!(d, shifted);
        prop_assert!(d <= view.x_dist(&x, &y).unwrap());
        let p = view.rel_geodesic(&x, &y).unwrap();
        prop_assert_eq!(p.len(), d);
    }

    #[test]
    fn subpaths_of_quasigeodesics_are_quasigeodesic(seed in any::<u64>(), lambda in 1i64..4, c in 0i64..6, i in 0usize..40, j in 0usize..40) {
        let view = f2_rel_a();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_broken_line(&view, &mut rng, CorpusParams::default(), &[Letter::pos(0)]).unwrap().path();
        if is_quasigeodesic(&view, &p, q(lambda), q(c), Metric::Relative).unwrap().holds {
            let (i, j) = (i % (p.len() + 1), j % (p.len() + 1));
            let sub = p.subpath(i.min(j), i.max(j));
            prop_assert!(is_quasigeodesic(&view, &sub, q(lambda), q(c), Metric::Relative).unwrap().holds);
        }
    }

    #[test]
    fn attachments_cost_at_most_the_stated_constant(p in free_word(10), pre in free_word(4), post in free_word(4), lambda in 1i64..4) {
        let view = RelGraphView::new(GroupSpec::free(2)).unwrap();
        let grp = view.group();
        // A geodesic with arbitrary short paths attached at both ends.
        let word: Vec<i8> = pre.iter().chain(&p).chain(&post).copied().collect();
        let path = view.word_path(grp.identity(), &free::letters(&word)).unwrap();
        let d = pre.len().max(post.len()) as i64;
        let c = attachment_constant(q(lambda), q(0), q(d));
        prop_assert_eq!(c, q(2 * (lambda + 1) * d));
        prop_assert!(is_quasigeodesic(&view, &path, q(lambda), c, Metric::Word).unwrap().holds);
    }

    #[test]
    fn shortcutting_is_deterministic_and_sound(seed in any::<u64>(), theta in 1usize..9) {
        let view = f2_rel_a();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bl = random_broken_line(&view, &mut rng, CorpusParams::default(), &[Letter::pos(0)]).unwrap();
        let a = shortcut(&view, &bl, theta).unwrap();
        let b = shortcut(&view, &bl, theta).unwrap();
        prop_assert_eq!(&a.v, &b.v);
        prop_assert!(check_shortcut_invariants(&view, &bl, &a, theta).unwrap().is_empty());
    }

    #[test]
    fn folding_ignores_generator_order(gens in prop::collection::vec(free_word(7), 1..5), perm in any::<prop::sample::Index>()) {
        let mut shuffled = gens.clone();
        let k = perm.index(shuffled.len());
        shuffled.rotate_left(k);
        shuffled.reverse();
        let to_letters = |g: &[free::W]| -> Vec<Vec<Letter>> { g.iter().map(|w| free::letters(w)).collect() };
        let a = subgroup_graph(2, &to_letters(&gens));
        let b = subgroup_graph(2, &to_letters(&shuffled));
        prop_assert_eq!(&a, &b);
        // Agreement with an independent folding on short words.
        let oracle = Folded::new(&gens);
        for w in free::ball(2, 4) {
            prop_assert_eq!(a.contains_word(&free::letters(&w)), oracle.contains(&w));
        }
    }
}

#[test]
fn inverse_law_on_balls() {
    for g in groups() {
        let ball = build_ball(&g, 4, 1 << 20).unwrap();
        for x in ball.vertices() {
            let y = g.mul(x, &g.inv(x).unwrap()).unwrap();
            assert!(g.is_identity(&y), "{} in {}", g.format_elem(x), g.family_name());
        }
    }
}

#[test]
fn relative_triangle_inequality_on_a_ball() {
    let view = f2_rel_a();
    let ball = build_ball(view.group(), 3, 1 << 20).unwrap();
    let vs = ball.vertices();
    let n = vs.len();
    let mut d = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = view.rel_dist(&vs[i], &vs[j]).unwrap();
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert_eq!(d[i * n + j], d[j * n + i]);
            for k in 0..n {
                assert!(d[i * n + k] <= d[i * n + j] + d[j * n + k]);
            }
        }
    }
}

#[test]
fn broken_lines_through_nodes_have_geodesic_segments() {
    let view = f2_rel_a();
    let g = view.group();
    let nodes: Vec<_> = ["1", "a^4 b", "b^-1 a", "a^-3"].iter().map(|s| g.parse_elem(s).unwrap()).collect();
    let bl = BrokenLine::through(&view, &nodes).unwrap();
    assert_eq!(bl.nodes(), nodes);
    for s in bl.segments() {
        assert!(view.is_geodesic(Metric::Relative, s).unwrap());
    }
}
