mod common;

use featnet_core::backbone::{build_edge_list, component_count, score_edges, sparsify, sweep_alpha, WeightMatrix};
use featnet_core::export::{parse_graph, round_significant, to_canonical_json};
use featnet_core::ingest::{apply_null_policy, classify_feature, Cell, FeatureColumn, FeatureKind, NullPolicy};
use featnet_core::mi::{mi_discrete_discrete, mutual_information, MiConfig};
use featnet_core::pipeline::{run_on_text, PipelineConfig};
use proptest::prelude::*;

fn weight_matrix(n: usize, cells: &[f64]) -> WeightMatrix {
    let mut m = WeightMatrix::zeros(n);
    let mut it = cells.iter();
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, *it.next().unwrap());
        }
    }
    m
}

fn graph_strategy() -> impl Strategy<Value = WeightMatrix> {
    (2usize..12).prop_flat_map(|n| {
        let cells = prop::collection::vec(prop_oneof![Just(0.0), 0.001f64..5.0], n * (n - 1) / 2);
        cells.prop_map(move |c| weight_matrix(n, &c))
    })
}

fn cell_strategy(kind: FeatureKind) -> BoxedStrategy<Cell> {
    match kind {
        FeatureKind::Continuous => prop_oneof![
            1 => Just(Cell::Null),
            6 => (-5.0f64..5.0).prop_map(Cell::Number),
            2 => (0i32..4).prop_map(|v| Cell::Number(v as f64)),
        ]
        .boxed(),
        FeatureKind::Discrete => prop_oneof![
            1 => Just(Cell::Null),
            6 => prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(|t| Cell::Token(t.into())),
        ]
        .boxed(),
    }
}

fn column(name: &'static str, kind: FeatureKind, len: usize) -> impl Strategy<Value = FeatureColumn> {
    prop::collection::vec(cell_strategy(kind), len).prop_map(move |cells| {
        let mut c = FeatureColumn::new(name, cells);
        c.kind = kind;
        c
    })
}

fn pair_strategy() -> impl Strategy<Value = (FeatureColumn, FeatureColumn)> {
    let kind = prop_oneof![Just(FeatureKind::Discrete), Just(FeatureKind::Continuous)];
    (kind.clone(), kind, 0usize..60).prop_flat_map(|(ka, kb, n)| (column("left", ka, n), column("right", kb, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mi_is_symmetric_and_non_negative((u, v) in pair_strategy(), seed in 0u64..1000) {
        let cfg = MiConfig { k: 3, seed };
        let a = mutual_information(&u, &v, &cfg);
        let b = mutual_information(&v, &u, &cfg);
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.estimator, b.estimator);
        prop_assert!(a.value >= 0.0);
        if a.n_used == 0 {
            prop_assert_eq!(a.value, 0.0);
        }
    }

    #[test]
    fn plugin_invariant_under_shuffle_and_relabel(
        pairs in prop::collection::vec((0u8..5, 0u8..4), 1..200),
        perm_seed in any::<u64>(),
    ) {
        let (u, v): (Vec<u8>, Vec<u8>) = pairs.iter().copied().unzip();
        let base = mi_discrete_discrete(&u, &v).value;

        let mut order: Vec<usize> = (0..u.len()).collect();
        let mut state = perm_seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let su: Vec<u8> = order.iter().map(|&i| u[i]).collect();
        let sv: Vec<u8> = order.iter().map(|&i| v[i]).collect();
        prop_assert_eq!(mi_discrete_discrete(&su, &sv).value.to_bits(), base.to_bits());

        let relabeled: Vec<String> = u.iter().map(|x| format!("cat{}", 7 - x)).collect();
        prop_assert_eq!(mi_discrete_discrete(&relabeled, &v).value.to_bits(), base.to_bits());
    }

    #[test]
    fn plugin_matches_oracle(table in prop::collection::vec(prop::collection::vec(0u64..30, 1..=5), 1..=5)) {
        let width = table[0].len();
        let table: Vec<Vec<u64>> = table.into_iter().map(|mut r| { r.resize(width, 1); r }).collect();
        prop_assume!(table.iter().flatten().any(|&c| c > 0));
        let (u, v) = common::expand_table(&table);
        let got = mi_discrete_discrete(&u, &v).value;
        prop_assert!((got - common::plugin_oracle(&table).max(0.0)).abs() <= 1e-12);
    }

    #[test]
    fn sparsification_is_monotone_and_conservative(m in graph_strategy(), a in 0.0f64..1.1, b in 0.0f64..1.1) {
        let scored = score_edges(&build_edge_list(&m).unwrap());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = sparsify(&scored, lo);
        let large = sparsify(&scored, hi);
        for e in &small.base.edges {
            prop_assert!(large.base.edges.contains(e));
        }
        for e in &large.base.edges {
            prop_assert!(scored.edges.contains(e));
            prop_assert_eq!(e.weight, m.get(e.u, e.v));
        }
        prop_assert_eq!(large.base.n_nodes, m.n());
        prop_assert_eq!(sparsify(&scored, 0.0).base.edges.len(), 0);
        prop_assert_eq!(sparsify(&scored, 1.0 + 1e-9).base.edges.len(), scored.edges.len());
    }

    #[test]
    fn scored_alphas_in_range(m in graph_strategy()) {
        let scored = score_edges(&build_edge_list(&m).unwrap());
        for e in &scored.edges {
            prop_assert!((0.0..=1.0).contains(&e.alpha_uv) && (0.0..=1.0).contains(&e.alpha_vu));
            prop_assert_eq!(e.alpha, e.alpha_uv.min(e.alpha_vu));
            prop_assert!(e.weight > 0.0);
        }
    }

    #[test]
    fn components_match_bfs(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12), 0..30)) {
        let edges: Vec<(usize, usize)> = raw.into_iter().filter(|&(a, b)| a < n && b < n && a != b).collect();
        let comps = component_count(n, edges.iter().copied());
        let (count, labels) = common::bfs_components(n, &edges);
        prop_assert_eq!(comps.count, count);
        prop_assert_eq!(comps.labels, labels);
    }

    #[test]
    fn backbone_count_matches_recount(m in graph_strategy()) {
        let g = sweep_alpha(&score_edges(&build_edge_list(&m).unwrap()));
        let edges: Vec<(usize, usize)> = g.base.edges.iter().map(|e| (e.u, e.v)).collect();
        let (count, labels) = common::bfs_components(m.n(), &edges);
        prop_assert_eq!(g.n_components, count);
        prop_assert_eq!(g.component_id, labels);
    }

    #[test]
    fn rounding_is_idempotent(x in prop::num::f64::NORMAL) {
        let once = round_significant(x);
        prop_assert_eq!(round_significant(once), once);
        prop_assert!((once - x).abs() <= x.abs() * 1e-8);
    }

    #[test]
    fn classification_moves_only_toward_discrete(
        cells in prop::collection::vec(cell_strategy(FeatureKind::Continuous), 0..40),
        t1 in 2usize..30,
        t2 in 2usize..30,
    ) {
        let col = FeatureColumn::new("c", cells);
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        if classify_feature(&col, hi) == FeatureKind::Continuous {
            prop_assert_eq!(classify_feature(&col, lo), FeatureKind::Continuous);
        }
        prop_assert_eq!(classify_feature(&col, lo), classify_feature(&col.clone(), lo));
    }

    #[test]
    fn null_policies_keep_length_and_remove_nulls(
        cells in prop::collection::vec(cell_strategy(FeatureKind::Continuous), 1..40),
        tokens in prop::collection::vec(cell_strategy(FeatureKind::Discrete), 1..40),
    ) {
        let mut cont = FeatureColumn::new("c", cells);
        cont.kind = FeatureKind::Continuous;
        let disc = FeatureColumn::new("d", tokens);
        for policy in [NullPolicy::DropPairwise, NullPolicy::FillMin, NullPolicy::FillMedian] {
            match apply_null_policy(&cont, policy) {
                Ok(out) => {
                    prop_assert_eq!(out.len(), cont.len());
                    if policy != NullPolicy::DropPairwise {
                        prop_assert!(out.values.iter().all(|c| !c.is_null()));
                    }
                }
                Err(_) => prop_assert!(cont.all_null),
            }
        }
        let out = apply_null_policy(&disc, NullPolicy::NullCategory).unwrap();
        prop_assert_eq!(out.len(), disc.len());
        prop_assert!(out.values.iter().all(|c| !c.is_null()));
        prop_assert!(apply_null_policy(&disc, NullPolicy::FillMin).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn graph_artifact_round_trips(seed in 0u64..500) {
        let data = featnet_core::synthetic::planted_blocks(60, 2, 2, seed);
        let run = run_on_text(&data.csv, &PipelineConfig { seed, ..PipelineConfig::default() }).unwrap();
        let text = to_canonical_json(&run.graph_artifact(), false).unwrap();
        let parsed = parse_graph(&text).unwrap();
        prop_assert_eq!(to_canonical_json(&parsed, false).unwrap(), text);
        prop_assert_eq!(parsed.nodes.len(), data.names.len());
    }
}
