mod common;

use std::collections::BTreeSet;

use bigraph_emof::typegraph::TypeGraphError;
use bigraph_emof::{
    all_sub, base_type_graph, check_multiplicities, check_typing, check_validity,
    extend_for_signature, InstanceGraph, TypeGraph,
};
use common::printer_signature;

/// Strict subtypes via a Warshall closure over the inheritance pairs.
fn closure_oracle(tg: &TypeGraph, t: &str) -> BTreeSet<String> {
    let types: Vec<&String> = tg.node_types().iter().collect();
    let n = types.len();
    let idx = |s: &str| types.iter().position(|x| x.as_str() == s).unwrap();
    let mut reach = vec![vec![false; n]; n];
    for (sub, sup) in tg.inherits() {
        reach[idx(sub)][idx(sup)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let target = idx(t);
    (0..n)
        .filter(|&i| reach[i][target])
        .map(|i| types[i].clone())
        .collect()
}

#[test]
fn all_sub_matches_closure_for_every_type() {
    let tg = extend_for_signature(&printer_signature()).unwrap();
    for t in tg.node_types() {
        assert_eq!(all_sub(&tg, t).unwrap(), closure_oracle(&tg, t), "type {t}");
    }
}

#[test]
fn bplace_has_nine_strict_subtypes() {
    let tg = extend_for_signature(&printer_signature()).unwrap();
    let subs = all_sub(&tg, "BPlace").unwrap();
    assert_eq!(subs.len(), 9);
    for t in [
        "BRoot", "BNode", "BSite", "Job", "User", "Room", "Spool", "Printer", "Computer",
    ] {
        assert!(subs.contains(t), "{t}");
    }
}

#[test]
fn bnode_subtypes_are_the_controls() {
    let tg = extend_for_signature(&printer_signature()).unwrap();
    let expected: BTreeSet<String> = ["Job", "User", "Room", "Spool", "Printer", "Computer"]
        .into_iter()
        .map(String::from)
        .collect();
    assert_eq!(all_sub(&tg, "BNode").unwrap(), expected);
}

#[test]
fn controls_are_unknown_in_the_base_graph() {
    assert_eq!(
        all_sub(&base_type_graph(), "Job"),
        Err(TypeGraphError::UnknownType("Job".into()))
    );
}

#[test]
fn base_and_extended_type_graphs_are_well_formed() {
    assert!(base_type_graph().validate().is_empty());
    let tg = extend_for_signature(&printer_signature()).unwrap();
    assert!(tg.validate().is_empty(), "{}", tg.validate());
    assert_eq!(tg.node_types().len(), 16);
    assert_eq!(tg.edge_types().len(), 6);
}

#[test]
fn abstract_types_cannot_be_instantiated() {
    let tg = base_type_graph();
    let mut g = InstanceGraph::new();
    g.add_node("p", "BPlace");
    assert!(check_typing(&g, &tg).has_code("abstract-instantiation"));
}

#[test]
fn retyping_to_a_subtype_keeps_edges_well_typed() {
    let tg = extend_for_signature(&printer_signature()).unwrap();
    let mut g = InstanceGraph::new();
    g.add_node("r", "BRoot").add_node("v", "BNode");
    g.set_attr("r", "index", bigraph_emof::AttrValue::Int(0));
    g.add_edge("up", "bPrnt", "v", "r")
        .add_edge("down", "bChld", "r", "v");
    let before = check_typing(&g, &tg);
    assert!(before.has_code("abstract-instantiation") || before.is_empty());
    for sub in all_sub(&tg, "BNode").unwrap() {
        let mut h = g.clone();
        h.retype_node("v", sub.clone());
        assert!(check_typing(&h, &tg).is_empty(), "{sub}");
        assert!(check_validity(&h, &tg).is_empty(), "{sub}");
        assert!(check_multiplicities(&h, &tg).is_empty(), "{sub}");
    }
}
