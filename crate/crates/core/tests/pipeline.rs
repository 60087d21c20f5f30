use rtlab::analysis::{complete_join, density_report, max_clique, p_independence};
use rtlab::cbe::{build_cbe, CbeParams, SamplingMode};
use rtlab::io::{read_edge_list, read_weighted, write_edge_list, write_hypergraph, write_weighted};
use rtlab::mbe::{build_mbe, verify_sparsity, MbeParams};
use rtlab::weighted::{find_herculean, in_g_p_q, PWeightedGraph};

#[test]
fn cbe_edge_list_round_trip_preserves_statistics() {
    let prm = CbeParams::new(4, 2, 8, 60, 11).unwrap().with_mode(SamplingMode::Orbits);
    let g = build_cbe(&prm).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&mut buf, &g.graph, &prm).unwrap();
    let back = read_edge_list(&buf[..]).unwrap();
    let back_prm: CbeParams = serde_json::from_value(back.header["config"].clone()).unwrap();
    assert_eq!(back_prm, prm);
    let (a, b) = (density_report(&g.graph), density_report(&back.graph));
    assert_eq!(a.edges, b.edges);
    assert_eq!(a.pairs[0].edges, b.pairs[0].edges);
    assert_eq!(max_clique(&g.graph, None).unwrap(), max_clique(&back.graph, None).unwrap());
}

#[test]
fn blown_up_mbe_keeps_its_guarantees() {
    let prm = MbeParams::new(2, 1, 2, 12, 8, 4).unwrap().with_blowup(4).unwrap();
    let g = build_mbe(&prm).unwrap();
    assert_eq!(g.class_size(), 256);
    assert_eq!(g.borsuk.clique_containment_violation(), None);
    let sp = verify_sparsity(&g.borsuk.hypergraph, prm.zeta(), prm.r().pow(3), 10_000_000);
    assert!(sp.exhaustive && sp.violation.is_none());
    let c = max_clique(&g.graph, Some(prm.clique_bound())).unwrap();
    assert!(c.size <= prm.clique_bound());
    let audit = g.audit_clique(&c.witness);
    assert!(audit.class_bound_holds && audit.budget_holds);

    let mut buf = Vec::new();
    write_hypergraph(&mut buf, &g.borsuk.hypergraph).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 1 + g.borsuk.hypergraph.edges.len());
}

#[test]
fn join_of_constructions_adds_clique_numbers() {
    let a = build_mbe(&MbeParams::new(1, 1, 2, 10, 8, 1).unwrap()).unwrap().graph;
    let b = build_cbe(&CbeParams::new(3, 1, 8, 30, 2).unwrap().with_mode(SamplingMode::Orbits)).unwrap().graph;
    let j = complete_join(&[a.clone(), b.clone()]);
    let (wa, wb, wj) = (
        max_clique(&a, None).unwrap().size,
        max_clique(&b, None).unwrap().size,
        max_clique(&j, None).unwrap().size,
    );
    assert_eq!(wj, wa + wb);
    let ind = p_independence(&j, 2, 0).unwrap();
    assert!(ind.lower <= ind.upper);
}

#[test]
fn weighted_file_to_certificates() {
    let text = "3 4\n3 2 1\n3 2\n3\n";
    let g = read_weighted(text.as_bytes()).unwrap();
    let mut out = Vec::new();
    write_weighted(&mut out, &g).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), text);
    let hero = find_herculean(&g).unwrap();
    hero.verify(&g).unwrap();
    // (p, t, 1, 1) from the heaviest edge: 3 + 3 + 2.
    let mem = in_g_p_q(&g, 8).unwrap();
    assert!(mem.extension.is_some());
    assert_eq!(PWeightedGraph::uniform(3, 4, 3).unwrap().upper_triangle(), vec![3; 6]);
}
