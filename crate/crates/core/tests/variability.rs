mod common;

use std::collections::BTreeSet;

use bigraph_emof::generate::{random_bigraph, random_signature, Limits};
use bigraph_emof::{
    annotate_150, apply_deltas, check_multiplicities, check_typing, check_validity,
    derive_type_graph, encode, enumerate_configs, extend_for_signature, validate_config, AttrValue,
    Bigraph, Feature, FeatureConfig, FeatureModel,
};
use common::printer;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn all_leaf_subsets() -> Vec<FeatureConfig> {
    (0u32..1 << Feature::LEAVES.len())
        .map(|mask| {
            FeatureConfig::new(
                Feature::LEAVES
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, f)| *f),
            )
        })
        .collect()
}

fn cfg(names: &[&str]) -> FeatureConfig {
    FeatureConfig::parse_list(names).unwrap()
}

#[test]
fn brute_force_finds_54_configurations() {
    let valid: BTreeSet<String> = all_leaf_subsets()
        .into_iter()
        .filter(|c| validate_config(c).is_empty())
        .map(|c| c.to_string())
        .collect();
    assert_eq!(valid.len(), 54);
    let enumerated: BTreeSet<String> = enumerate_configs().iter().map(|c| c.to_string()).collect();
    assert_eq!(enumerate_configs().len(), 54);
    assert_eq!(enumerated, valid);
}

#[test]
fn model_formula_agrees_with_validation() {
    let formula = FeatureModel::fixed().formula();
    for c in all_leaf_subsets() {
        assert_eq!(formula.eval(&c), validate_config(&c).is_empty(), "{c}");
    }
}

fn assert_conforms(b: &Bigraph, c: &FeatureConfig) {
    let sig = b.signature();
    let atg = annotate_150(&extend_for_signature(sig).unwrap());
    let tg = derive_type_graph(&atg, c).unwrap();
    assert!(tg.validate().is_empty(), "{c}: {}", tg.validate());
    let (g, _) = encode(b).unwrap();
    let variant = apply_deltas(&g, c, sig).unwrap();
    let mut report = check_typing(&variant, &tg);
    report.extend(check_validity(&variant, &tg));
    report.extend(check_multiplicities(&variant, &tg));
    assert!(report.is_empty(), "{c}:\n{report}");
    assert_eq!(
        apply_deltas(&variant, c, sig).unwrap(),
        variant,
        "{c}: not idempotent"
    );
}

#[test]
fn printer_variants_conform_to_their_type_graphs() {
    let b = printer();
    for c in enumerate_configs() {
        assert_conforms(&b, &c);
    }
}

#[test]
fn canonical_configuration_leaves_the_encoding_unchanged() {
    let b = printer();
    let (g, _) = encode(&b).unwrap();
    assert_eq!(
        apply_deltas(&g, &FeatureConfig::canonical(), b.signature()).unwrap(),
        g
    );
}

#[test]
fn implicit_roots_drop_one_node_and_six_edges() {
    let b = printer();
    let (g, _) = encode(&b).unwrap();
    let v = apply_deltas(&g, &cfg(&["ST", "ES", "SI", "EP", "PI"]), b.signature()).unwrap();
    assert_eq!((v.node_count(), v.edge_count()), (20, 40));
    assert!(!v.contains_node("r:0"));
}

#[test]
fn weak_typing_retypes_seven_nodes() {
    let b = printer();
    let (g, _) = encode(&b).unwrap();
    let v = apply_deltas(
        &g,
        &cfg(&["WT", "ER", "RI", "ES", "SI", "EP", "PI"]),
        b.signature(),
    )
    .unwrap();
    assert_eq!(v.node_count(), 21);
    let retyped: Vec<&str> = v.nodes_of_type("BNode").collect();
    assert_eq!(retyped.len(), 7);
    for n in retyped {
        let former = g.node_type(n).unwrap();
        assert_eq!(
            v.attr(n, "control"),
            Some(&AttrValue::Str(former.to_string()))
        );
    }
}

#[test]
fn weak_typing_type_graph_has_ten_node_types() {
    let b = printer();
    let atg = annotate_150(&extend_for_signature(b.signature()).unwrap());
    let tg = derive_type_graph(&atg, &cfg(&["WT", "ER", "RI", "ES", "SI", "EP", "PI"])).unwrap();
    assert_eq!(tg.node_types().len(), 10);
}

#[test]
fn minimal_strong_variant_has_no_roots_sites_or_ports() {
    let b = printer();
    let atg = annotate_150(&extend_for_signature(b.signature()).unwrap());
    let tg = derive_type_graph(&atg, &cfg(&["ST"])).unwrap();
    let expected: BTreeSet<String> = [
        "BPlace",
        "BNode",
        "BPoint",
        "BLink",
        "BInnerName",
        "BEdge",
        "BOuterName",
        "Job",
        "User",
        "Room",
        "Spool",
        "Printer",
        "Computer",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    assert_eq!(tg.node_types(), &expected);
    assert!(tg
        .inherits()
        .contains(&("BNode".to_string(), "BPoint".to_string())));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_variants_conform(seed in any::<u64>(), pick in 0usize..54) {
        let mut rng = StdRng::seed_from_u64(seed);
        let limits = Limits::default();
        let sig = random_signature(&mut rng, &limits);
        let b = random_bigraph(&mut rng, &sig, &limits);
        assert_conforms(&b, &enumerate_configs()[pick]);
    }
}
