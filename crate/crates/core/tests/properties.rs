//! Invariants checked on random inputs.

use std::sync::OnceLock;

use constrained_ergm::enumeration::{EnumSpec, GraphHistogram};
use constrained_ergm::euler_lagrange::delta_h;
use constrained_ergm::phase::{EntropyCurve, PhaseOptions};
use constrained_ergm::sampling::{empirical_densities, sample_w_random, SampleSpec};
use constrained_ergm::variational::{region_bounds, s_half_closed};
use constrained_ergm::{
    cut_norm, edge_density, graph_to_graphon, hom_density, rate_function, rate_function_scalar, triangle_density,
    SimpleGraph, StepGraphon,
};
use proptest::prelude::*;

fn graphon_with(k: usize) -> impl Strategy<Value = StepGraphon> {
    (prop::collection::vec(0.05f64..1.0, k), prop::collection::vec(0.0f64..=1.0, k * (k + 1) / 2)).prop_map(
        move |(w, upper)| {
            let total: f64 = w.iter().sum();
            let masses = w.iter().map(|x| x / total).collect();
            let mut values = vec![vec![0.0; k]; k];
            let mut it = upper.into_iter();
            for i in 0..k {
                for j in i..k {
                    let v = it.next().unwrap();
                    values[i][j] = v;
                    values[j][i] = v;
                }
            }
            StepGraphon::new(masses, values).unwrap()
        },
    )
}

fn graphon() -> impl Strategy<Value = StepGraphon> {
    (1usize..=4).prop_flat_map(graphon_with)
}

fn small_graph() -> impl Strategy<Value = SimpleGraph> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, keep)| *keep).map(|(p, _)| p).collect();
            SimpleGraph::new(n, edges).unwrap()
        })
    })
}

fn histogram(n: usize) -> &'static GraphHistogram {
    static CACHE: OnceLock<Vec<GraphHistogram>> = OnceLock::new();
    &CACHE.get_or_init(|| (3..=6).map(|n| GraphHistogram::new(n).unwrap()).collect())[n - 3]
}

fn half_curve() -> &'static EntropyCurve {
    static CURVE: OnceLock<EntropyCurve> = OnceLock::new();
    CURVE.get_or_init(|| EntropyCurve::new(0.5, &PhaseOptions::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn densities_invariant_under_block_permutation(h in graphon(), g in small_graph(), seed in any::<u64>()) {
        let k = h.n_blocks();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = h.permuted(&perm);
        prop_assert!((hom_density(&g, &h).unwrap() - hom_density(&g, &p).unwrap()).abs() < 1e-12);
        prop_assert!((rate_function(&h) - rate_function(&p)).abs() < 1e-12);
    }

    #[test]
    fn density_of_disjoint_union_factorizes(h in graphon(), a in small_graph(), b in small_graph()) {
        let joint = hom_density(&a.disjoint_union(&b), &h).unwrap();
        let product = hom_density(&a, &h).unwrap() * hom_density(&b, &h).unwrap();
        prop_assert!((joint - product).abs() < 1e-12);
    }

    #[test]
    fn densities_in_range(h in graphon()) {
        let (e, t, i) = (edge_density(&h), triangle_density(&h), rate_function(&h));
        prop_assert!((0.0..=1.0).contains(&e));
        prop_assert!((0.0..=1.0).contains(&t));
        prop_assert!((-std::f64::consts::LN_2 / 2.0 - 1e-15..=0.0).contains(&i));
    }

    #[test]
    fn edge_triangle_pair_is_attainable(h in graphon()) {
        let (e, t) = (edge_density(&h), triangle_density(&h));
        prop_assert!(t <= e.powf(1.5) + 1e-12);
        prop_assert!(region_bounds(e).unwrap().contains(t, 1e-9));
    }

    #[test]
    fn cut_norm_is_a_pseudometric(a in graphon(), b in graphon(), c in graphon()) {
        let ab = cut_norm(&a, &b).unwrap();
        prop_assert_eq!(cut_norm(&a, &a).unwrap(), 0.0);
        prop_assert!((ab - cut_norm(&b, &a).unwrap()).abs() < 1e-15);
        prop_assert!(cut_norm(&a, &c).unwrap() <= ab + cut_norm(&b, &c).unwrap() + 1e-12);
        prop_assert!(ab <= 1.0);
    }

    #[test]
    fn graph_and_its_graphon_agree(g in small_graph()) {
        let (e, t) = empirical_densities(&g);
        let hg = graph_to_graphon(&g);
        prop_assert!((edge_density(&hg) - e).abs() < 1e-12);
        prop_assert!((triangle_density(&hg) - t).abs() < 1e-12);
    }

    #[test]
    fn sampled_densities_match_counts(h in graphon(), n in 2usize..40, seed in any::<u64>()) {
        let g = sample_w_random(&SampleSpec { n, graphon: h, seed }).unwrap();
        let (e, t) = empirical_densities(&g);
        let hg = graph_to_graphon(&g);
        prop_assert!((hom_density(&SimpleGraph::edge(), &hg).unwrap() - e).abs() < 1e-12);
        prop_assert!((hom_density(&SimpleGraph::triangle(), &hg).unwrap() - t).abs() < 1e-12);
    }

    #[test]
    fn edge_variation_is_one(h in graphon()) {
        let d = delta_h(&SimpleGraph::edge(), &h).unwrap();
        prop_assert!(d.values.iter().flatten().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn variation_is_the_directional_derivative(h in graphon_with(3), dir in prop::collection::vec(-1.0f64..1.0, 6)) {
        let k = 3;
        let mut g = vec![vec![0.0; k]; k];
        let mut it = dir.into_iter();
        for i in 0..k {
            for j in i..k {
                let v = it.next().unwrap();
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let w = h.masses();
        let v = |s: f64, a: usize, b: usize| h.value(a, b) + s * g[a][b];
        // t(P3, h + s g) and t(K3, h + s g) expanded by hand; h + s g may leave [0,1]
        let path = |s: f64| {
            let mut total = 0.0;
            for a in 0..k { for b in 0..k { for c in 0..k {
                total += w[a] * w[b] * w[c] * v(s, a, b) * v(s, b, c);
            }}}
            total
        };
        let tri = |s: f64| {
            let mut total = 0.0;
            for a in 0..k { for b in 0..k { for c in 0..k {
                total += w[a] * w[b] * w[c] * v(s, a, b) * v(s, b, c) * v(s, a, c);
            }}}
            total
        };
        let cases: [(SimpleGraph, &dyn Fn(f64) -> f64); 2] =
            [(SimpleGraph::path(3).unwrap(), &path), (SimpleGraph::triangle(), &tri)];
        let step = 1e-5;
        for (pattern, poly) in cases {
            let numeric = (poly(step) - poly(-step)) / (2.0 * step);
            let d = delta_h(&pattern, &h).unwrap();
            let mut analytic = 0.0;
            for a in 0..k { for b in 0..k { analytic += w[a] * w[b] * d.values[a][b] * g[a][b]; } }
            prop_assert!((numeric - analytic).abs() < 1e-8, "numeric {} analytic {}", numeric, analytic);
            prop_assert!((poly(0.0) - hom_density(&pattern, &h).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn shell_constant_grows_with_width(n in 3usize..=6, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0,
                                       e in 0.1f64..0.9, a1 in 0.01f64..0.5, extra in 0.0f64..0.5) {
        let hist = histogram(n);
        let narrow = hist.evaluate(&EnumSpec::conditional(n, b1, b2, e, a1));
        let wide = hist.evaluate(&EnumSpec::conditional(n, b1, b2, e, a1 + extra));
        if let Ok(narrow) = narrow {
            let wide = wide.unwrap();
            prop_assert!(wide.psi >= narrow.psi);
            prop_assert!(wide.graph_count >= narrow.graph_count);
        }
    }

    #[test]
    fn free_energy_is_convex_with_slope_t_star(b0 in -5.0f64..0.0, b in -5.0f64..0.0) {
        let curve = half_curve();
        let p0 = curve.psi(b0).unwrap();
        let p = curve.psi(b).unwrap();
        prop_assert!(p.psi >= p0.psi + p0.t_star * (b - b0) - 1e-9);
    }

    #[test]
    fn rate_function_symmetric(u in 0.0f64..=1.0) {
        let (a, b) = (rate_function_scalar(u).unwrap(), rate_function_scalar(1.0 - u).unwrap());
        prop_assert!((a - b).abs() < 1e-15);
        prop_assert!(a >= rate_function_scalar(0.5).unwrap());
    }

    #[test]
    fn half_density_entropy_increases_in_t(t1 in 0.0f64..=0.125, t2 in 0.0f64..=0.125) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(s_half_closed(lo).unwrap().s <= s_half_closed(hi).unwrap().s + 1e-15);
    }
}

fn hom_count(h: &SimpleGraph, g: &SimpleGraph) -> u64 {
    let (k, n) = (h.n_vertices(), g.n_vertices());
    let mut map = vec![0usize; k];
    let mut count = 0;
    loop {
        if h.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
            count += 1;
        }
        let mut i = 0;
        while i < k && map[i] == n - 1 {
            map[i] = 0;
            i += 1;
        }
        if i == k {
            return count;
        }
        map[i] += 1;
    }
}

fn graph_on(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1usize..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            SimpleGraph::new(n, pairs.zip(bits).filter(|(_, keep)| *keep).map(|(p, _)| p)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graphon_density_counts_homomorphisms(h in graph_on(4), g in graph_on(6)) {
        let exact = hom_count(&h, &g) as f64 / (g.n_vertices() as f64).powi(h.n_vertices() as i32);
        prop_assert!((hom_density(&h, &graph_to_graphon(&g)).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn triangle_count_matches_triple_loop(g in graph_on(7)) {
        let n = g.n_vertices();
        let mut count = 0;
        for a in 0..n { for b in a + 1..n { for c in b + 1..n {
            if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) { count += 1; }
        }}}
        prop_assert_eq!(g.triangle_count(), count);
    }

    #[test]
    fn cut_norm_vanishes_only_on_equal_kernels(a in graphon(), b in graphon()) {
        let r = constrained_ergm::graphon::common_refinement(&a, &b);
        let differ = r.difference().iter().flatten().any(|&d| d != 0.0);
        prop_assert_eq!(cut_norm(&a, &b).unwrap() > 0.0, differ);
    }

    #[test]
    fn triangle_variation_matches_quadrature(h in graphon_with(4)) {
        let d = delta_h(&SimpleGraph::triangle(), &h).unwrap();
        let w = h.masses();
        for a in 0..4 {
            for b in 0..4 {
                let q: f64 = (0..4).map(|c| w[c] * h.value(a, c) * h.value(b, c)).sum();
                prop_assert!((d.values[a][b] - 3.0 * q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conditional_constant_reaches_unconstrained(n in 3usize..=6, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0, e in 0.0f64..=1.0) {
        let hist = histogram(n);
        let full = hist.evaluate(&EnumSpec::conditional(n, b1, b2, e, 1.0 + 1e-9)).unwrap();
        let free = hist.evaluate(&EnumSpec::unconstrained(n, b1, b2)).unwrap();
        prop_assert_eq!(full.psi, free.psi);
        prop_assert_eq!(full.graph_count, free.total_graphs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn el_solutions_are_stationary(b1 in -1.5f64..1.5, b2 in -2.0f64..1.0,
                                   init in prop::collection::vec(0.05f64..0.95, 6)) {
        use constrained_ergm::euler_lagrange::{el_fixed_point, el_logit_residual, ELConfig};
        let mut values = vec![vec![0.0; 3]; 3];
        let mut it = init.into_iter();
        for i in 0..3 { for j in i..3 { let v = it.next().unwrap(); values[i][j] = v; values[j][i] = v; } }
        let cfg = ELConfig::triangle(b1, b2, 3);
        let sol = el_fixed_point(&cfg, &StepGraphon::equal_blocks(values).unwrap()).unwrap();
        prop_assume!(sol.converged);
        prop_assert!(sol.residual_sup <= cfg.tol);
        prop_assert!(el_logit_residual(&cfg, &sol.graphon).unwrap() <= 10.0 * cfg.tol);

        // perturbations orthogonal to the gradients of t(K2) and t(K3) leave -I stationary
        let h = &sol.graphon;
        let w = h.masses();
        let tri = delta_h(&SimpleGraph::triangle(), h).unwrap();
        let inner = |f: &dyn Fn(usize, usize) -> f64, g: &dyn Fn(usize, usize) -> f64| {
            let mut s = 0.0;
            for a in 0..3 { for b in 0..3 { s += w[a] * w[b] * f(a, b) * g(a, b); } }
            s
        };
        let mut dir = [[0.0f64; 3]; 3];
        for a in 0..3 { for b in a..3 { let v = ((a * 7 + b * 3) % 5) as f64 - 2.0; dir[a][b] = v; dir[b][a] = v; } }
        let basis: [Box<dyn Fn(usize, usize) -> f64>; 2] = [Box::new(|_, _| 1.0), Box::new(|a, b| tri.values[a][b])];
        // Gram-Schmidt against the two gradient directions
        let mut ortho: Vec<[[f64; 3]; 3]> = Vec::new();
        for g in &basis {
            let mut v = [[0.0; 3]; 3];
            for a in 0..3 { for b in 0..3 { v[a][b] = g(a, b); } }
            for u in &ortho {
                let c = inner(&|a, b| v[a][b], &|a, b| u[a][b]) / inner(&|a, b| u[a][b], &|a, b| u[a][b]);
                for a in 0..3 { for b in 0..3 { v[a][b] -= c * u[a][b]; } }
            }
            if inner(&|a, b| v[a][b], &|a, b| v[a][b]) > 1e-20 { ortho.push(v); }
        }
        for u in &ortho {
            let c = inner(&|a, b| dir[a][b], &|a, b| u[a][b]) / inner(&|a, b| u[a][b], &|a, b| u[a][b]);
            for a in 0..3 { for b in 0..3 { dir[a][b] -= c * u[a][b]; } }
        }
        let norm = dir.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assume!(norm > 1e-6);
        let step = 1e-4 / norm;
        let shifted = |s: f64| {
            let values = (0..3).map(|a| (0..3).map(|b| h.value(a, b) + s * dir[a][b]).collect()).collect();
            rate_function(&StepGraphon::new(w.to_vec(), values).unwrap())
        };
        let change = (shifted(step) - shifted(-step)) / 2.0;
        prop_assert!(change.abs() < 1e-7, "first-order change {}", change);
    }

    #[test]
    fn numeric_entropy_is_bounded_and_feasible(e in 0.1f64..=0.5, frac in 0.0f64..1.0) {
        use constrained_ergm::variational::s_numeric;
        let r = region_bounds(e).unwrap();
        let t = r.t_min + frac * (e.powi(3) - r.t_min).max(0.0);
        let p = s_numeric(e, t, 8, 1e-9).unwrap();
        prop_assert!(p.s <= -rate_function_scalar(e).unwrap() + 1e-12);
        prop_assert!((p.maximizer.edge_density() - e).abs() <= 1e-8);
        prop_assert!((p.maximizer.triangle_density() - t).abs() <= 1e-8);
    }

    #[test]
    fn numeric_entropy_rejects_exactly_outside_region(e in 0.05f64..=0.5, over in 2e-9f64..0.05) {
        use constrained_ergm::variational::s_numeric;
        use constrained_ergm::Error;
        let r = region_bounds(e).unwrap();
        prop_assert!(matches!(s_numeric(e, r.t_max + over, 8, 1e-9), Err(Error::Region(_))));
        if r.t_min - over >= 0.0 {
            prop_assert!(matches!(s_numeric(e, r.t_min - over, 8, 1e-9), Err(Error::Region(_))));
        }
    }
}

#[test]
fn entropy_on_the_er_curve_is_the_rate() {
    use constrained_ergm::variational::s_numeric;
    for e in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let p = s_numeric(e, e * e * e, 32, 1e-9).unwrap();
        assert_eq!(p.s, -rate_function_scalar(e).unwrap());
    }
}

#[test]
fn scans_are_convex_with_envelope_slope() {
    let opts = PhaseOptions::default();
    let grid: Vec<f64> = (0..=100).map(|i| -0.05 * i as f64).collect();
    for e in [0.5, 0.4] {
        let curve = EntropyCurve::new(e, &opts).unwrap();
        let scan: Vec<_> = grid.iter().map(|&b| curve.psi(b).unwrap()).collect();
        for w in scan.windows(3) {
            assert!(w[0].psi - 2.0 * w[1].psi + w[2].psi >= -1e-8);
            assert!(w[1].psi <= w[0].psi + 1e-12);
        }
        let crit = curve.critical_point(1e-10, opts.validation_points).unwrap();
        for p in scan.iter().filter(|p| (p.beta2 - crit.beta2_c).abs() > 0.1 && p.beta2 < 0.0) {
            let d = 1e-4;
            let slope = (curve.psi(p.beta2 + d).unwrap().psi - curve.psi(p.beta2 - d).unwrap().psi) / (2.0 * d);
            assert!((slope - p.t_star).abs() < 1e-3, "e = {e}, β₂ = {}: slope {slope} vs t* {}", p.beta2, p.t_star);
            if p.beta2 > crit.beta2_c {
                assert_eq!(p.t_star, e * e * e);
            }
        }
    }
}

#[test]
fn repulsion_lowers_conditional_triangle_density() {
    use constrained_ergm::enumeration::conditional_concentration;
    let half = StepGraphon::constant(0.5).unwrap();
    let flat = conditional_concentration(&EnumSpec::conditional(4, 0.0, 0.0, 0.5, 0.1), &half, 1.0).unwrap();
    let repulsive = conditional_concentration(&EnumSpec::conditional(4, 0.0, -5.0, 0.5, 0.1), &half, 1.0).unwrap();
    assert_eq!(flat.mass_far, 0.0);
    assert!(repulsive.mean_t < flat.mean_t);
}
