//! Representation variants of the typed-graph encoding.
//!
//! A fixed feature model describes which parts of a bigraph are represented
//! explicitly: typing (strong `ST` or weak `WT`), roots (`ER`, `RI`), sites
//! (`ES`, `SI`) and ports (`EP`, `PI`). Type-level variability is a 150% type
//! graph whose elements carry presence conditions; instance-level variability
//! is a list of deltas applied to the canonical encoding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bigraph::Signature;
use crate::mapping::extend_for_signature;
use crate::names::*;
use crate::report::ValidationReport;
use crate::typegraph::{check_typing, AttrValue, DataType, InstanceGraph, Multiplicity, TypeGraph};

#[derive(Debug, Error)]
pub enum VariabilityError {
    #[error("invalid feature configuration:\n{0}")]
    InvalidConfig(ValidationReport),
    #[error("instance graph is not a canonical encoding:\n{0}")]
    NotCanonical(ValidationReport),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error(transparent)]
    Signature(#[from] crate::bigraph::SignatureError),
}

/// Features of the representation feature model. `AS`, `T`, `R`, `S`, `P` are
/// abstract structuring features and never appear in a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    AS,
    T,
    R,
    S,
    P,
    ST,
    WT,
    ER,
    RI,
    ES,
    SI,
    EP,
    PI,
}

impl Feature {
    pub const LEAVES: [Feature; 8] = [
        Feature::ST,
        Feature::WT,
        Feature::ER,
        Feature::RI,
        Feature::ES,
        Feature::SI,
        Feature::EP,
        Feature::PI,
    ];

    pub const ALL: [Feature; 13] = [
        Feature::AS,
        Feature::T,
        Feature::R,
        Feature::S,
        Feature::P,
        Feature::ST,
        Feature::WT,
        Feature::ER,
        Feature::RI,
        Feature::ES,
        Feature::SI,
        Feature::EP,
        Feature::PI,
    ];

    pub fn is_abstract(self) -> bool {
        matches!(
            self,
            Feature::AS | Feature::T | Feature::R | Feature::S | Feature::P
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Feature::AS => "AS",
            Feature::T => "T",
            Feature::R => "R",
            Feature::S => "S",
            Feature::P => "P",
            Feature::ST => "ST",
            Feature::WT => "WT",
            Feature::ER => "ER",
            Feature::RI => "RI",
            Feature::ES => "ES",
            Feature::SI => "SI",
            Feature::EP => "EP",
            Feature::PI => "PI",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = VariabilityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| VariabilityError::UnknownFeature(s.to_string()))
    }
}

/// Propositional formula over features.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    Var(Feature),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(f: Feature) -> Self {
        Formula::Var(f)
    }

    pub fn not(f: Feature) -> Self {
        Formula::Not(Box::new(Formula::Var(f)))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Abstract features are implied by every configuration.
    pub fn eval(&self, cfg: &FeatureConfig) -> bool {
        match self {
            Formula::True => true,
            Formula::Var(f) => f.is_abstract() || cfg.has(*f),
            Formula::Not(inner) => !inner.eval(cfg),
            Formula::And(parts) => parts.iter().all(|p| p.eval(cfg)),
            Formula::Or(parts) => parts.iter().any(|p| p.eval(cfg)),
            Formula::Implies(a, b) => !a.eval(cfg) || b.eval(cfg),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[Formula], op: &str| {
            f.write_str("(")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(inner) => write!(f, "¬{inner}"),
            Formula::And(parts) => join(f, parts, "∧"),
            Formula::Or(parts) => join(f, parts, "∨"),
            Formula::Implies(a, b) => write!(f, "({a} ⇒ {b})"),
        }
    }
}

/// A selection of leaf features.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureConfig {
    selected: BTreeSet<Feature>,
}

impl FeatureConfig {
    pub fn new(selected: impl IntoIterator<Item = Feature>) -> Self {
        Self {
            selected: selected.into_iter().collect(),
        }
    }

    /// The configuration of the canonical encoding: strongly typed, everything explicit and indexed.
    pub fn canonical() -> Self {
        Self::new([
            Feature::ST,
            Feature::ER,
            Feature::RI,
            Feature::ES,
            Feature::SI,
            Feature::EP,
            Feature::PI,
        ])
    }

    pub fn parse_list(names: &[&str]) -> Result<Self, VariabilityError> {
        names
            .iter()
            .map(|n| n.parse())
            .collect::<Result<BTreeSet<_>, _>>()
            .map(|selected| Self { selected })
    }

    pub fn selected(&self) -> &BTreeSet<Feature> {
        &self.selected
    }

    pub fn has(&self, f: Feature) -> bool {
        self.selected.contains(&f)
    }
}

/// Comma-separated, in feature order: `ST,ER,RI,ES,SI,EP,PI`.
impl fmt::Display for FeatureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.selected.iter().map(|x| x.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// The fixed feature tree: root `AS` with mandatory abstract children
/// `T`, `R`, `S`, `P`; `T` holds the alternative group `{ST, WT}`; the other
/// three each hold an optional explicit/indexed pair where indexing requires
/// explicitness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureModel {
    pub alternative: (Feature, Feature),
    /// `(explicit, indexed)` optional pairs with `indexed ⇒ explicit`.
    pub optional_pairs: [(Feature, Feature); 3],
}

impl FeatureModel {
    pub fn fixed() -> Self {
        Self {
            alternative: (Feature::ST, Feature::WT),
            optional_pairs: [
                (Feature::ER, Feature::RI),
                (Feature::ES, Feature::SI),
                (Feature::EP, Feature::PI),
            ],
        }
    }

    /// The model's semantics as one propositional formula over the leaves.
    pub fn formula(&self) -> Formula {
        let (a, b) = self.alternative;
        let exactly_one = Formula::And(vec![
            Formula::Or(vec![Formula::var(a), Formula::var(b)]),
            Formula::Not(Box::new(Formula::And(vec![
                Formula::var(a),
                Formula::var(b),
            ]))),
        ]);
        let mut clauses = vec![exactly_one];
        for (explicit, indexed) in self.optional_pairs {
            clauses.push(Formula::implies(
                Formula::var(indexed),
                Formula::var(explicit),
            ));
        }
        Formula::And(clauses)
    }
}

/// Reports every constraint of the fixed feature model that `cfg` violates.
pub fn validate_config(cfg: &FeatureConfig) -> ValidationReport {
    let mut report = ValidationReport::new();
    let model = FeatureModel::fixed();
    for f in cfg.selected() {
        if f.is_abstract() {
            report.error(
                "abstract-feature",
                format!("feature:{f}"),
                format!("abstract feature {f} cannot be selected"),
            );
        }
    }
    let (a, b) = model.alternative;
    if cfg.has(a) == cfg.has(b) {
        report.error(
            "alternative-group",
            "feature:T",
            format!("alternative group {{{a}, {b}}}: exactly one must be selected"),
        );
    }
    for (explicit, indexed) in model.optional_pairs {
        if cfg.has(indexed) && !cfg.has(explicit) {
            report.error(
                "requires",
                format!("feature:{indexed}"),
                format!("{indexed} requires {explicit}"),
            );
        }
    }
    report
}

/// All valid configurations, built from the tree: the typing alternative times
/// the three `{none, explicit, explicit+indexed}` choices.
pub fn enumerate_configs() -> Vec<FeatureConfig> {
    let model = FeatureModel::fixed();
    let (a, b) = model.alternative;
    let choices = |(explicit, indexed): (Feature, Feature)| -> [Vec<Feature>; 3] {
        [vec![], vec![explicit], vec![explicit, indexed]]
    };
    let [roots, sites, ports] = model.optional_pairs.map(choices);
    let mut out = Vec::new();
    for typing in [a, b] {
        for r in &roots {
            for s in &sites {
                for p in &ports {
                    let mut selected = vec![typing];
                    selected.extend(r.iter().chain(s).chain(p).copied());
                    out.push(FeatureConfig::new(selected));
                }
            }
        }
    }
    out
}

/// An element of a type graph that can carry a presence condition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeElement {
    NodeType(String),
    EdgeType(String),
    Inheritance(String, String),
    Attribute(String, String),
}

/// A 150% type graph: the superimposition of all variants plus presence conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedTypeGraph {
    base: TypeGraph,
    annotations: BTreeMap<TypeElement, Formula>,
    mult_overrides: Vec<(String, Multiplicity, Formula)>,
}

impl AnnotatedTypeGraph {
    pub fn base(&self) -> &TypeGraph {
        &self.base
    }

    pub fn annotations(&self) -> &BTreeMap<TypeElement, Formula> {
        &self.annotations
    }

    /// Presence condition of an element; `None` means present in every variant.
    pub fn annotation(&self, element: &TypeElement) -> Option<&Formula> {
        self.annotations.get(element)
    }

    /// Conditional multiplicities `(edge type, multiplicity, condition)`.
    pub fn mult_overrides(&self) -> &[(String, Multiplicity, Formula)] {
        &self.mult_overrides
    }

    fn present(&self, element: &TypeElement, cfg: &FeatureConfig) -> bool {
        self.annotations.get(element).is_none_or(|f| f.eval(cfg))
    }
}

/// Builds the 150% type graph over a control-compatible type graph.
pub fn annotate_150(tg_sigma: &TypeGraph) -> AnnotatedTypeGraph {
    use Feature::*;
    let mut base = tg_sigma.clone();
    base.declare_attr(B_NODE, CONTROL, DataType::String)
        .add_inheritance(B_NODE, B_POINT);

    let mut annotations = BTreeMap::new();
    let mut annotate = |element: TypeElement, formula: Formula| {
        annotations.insert(element, formula);
    };
    let attr = |t: &str, a: &str| TypeElement::Attribute(t.into(), a.into());
    let inh = |sub: &str, sup: &str| TypeElement::Inheritance(sub.into(), sup.into());
    let node = |t: &str| TypeElement::NodeType(t.into());
    let edge = |t: &str| TypeElement::EdgeType(t.into());

    annotate(attr(B_NODE, CONTROL), Formula::var(WT));
    for t in tg_sigma.node_types() {
        if !BASE_NODE_TYPES.contains(&t.as_str()) {
            annotate(node(t), Formula::var(ST));
            annotate(inh(t, B_NODE), Formula::var(ST));
        }
    }

    annotate(node(B_ROOT), Formula::var(ER));
    annotate(inh(B_ROOT, B_PLACE), Formula::var(ER));
    annotate(attr(B_ROOT, INDEX), Formula::var(RI));

    annotate(node(B_SITE), Formula::var(ES));
    annotate(inh(B_SITE, B_PLACE), Formula::var(ES));
    annotate(attr(B_SITE, INDEX), Formula::var(SI));

    annotate(node(B_PORT), Formula::var(EP));
    annotate(inh(B_PORT, B_POINT), Formula::var(EP));
    annotate(edge(PORTS), Formula::var(EP));
    annotate(edge(NODE), Formula::var(EP));
    annotate(attr(B_PORT, INDEX), Formula::var(PI));
    annotate(inh(B_NODE, B_POINT), Formula::not(EP));

    AnnotatedTypeGraph {
        base,
        annotations,
        mult_overrides: vec![(
            LINK.to_string(),
            Multiplicity::at_least(0),
            Formula::not(EP),
        )],
    }
}

/// Resolves the 150% type graph for one configuration: unannotated elements
/// stay, annotated ones stay iff their condition holds, and anything left
/// referring to a removed element is dropped with it.
pub fn derive_type_graph(
    atg: &AnnotatedTypeGraph,
    cfg: &FeatureConfig,
) -> Result<TypeGraph, VariabilityError> {
    let report = validate_config(cfg);
    if !report.is_empty() {
        return Err(VariabilityError::InvalidConfig(report));
    }
    let base = &atg.base;
    let mut tg = TypeGraph::new();

    let nodes: BTreeSet<&String> = base
        .node_types()
        .iter()
        .filter(|t| atg.present(&TypeElement::NodeType((*t).clone()), cfg))
        .collect();
    for t in &nodes {
        tg.add_node_type(t.as_str());
    }
    let mut edges = BTreeSet::new();
    for (e, ends) in base.edge_types() {
        if atg.present(&TypeElement::EdgeType(e.clone()), cfg)
            && nodes.contains(&ends.src)
            && nodes.contains(&ends.tgt)
        {
            tg.add_edge_type(e.as_str(), ends.src.as_str(), ends.tgt.as_str());
            edges.insert(e.as_str());
        }
    }
    for (sub, sup) in base.inherits() {
        if nodes.contains(sub)
            && nodes.contains(sup)
            && atg.present(&TypeElement::Inheritance(sub.clone(), sup.clone()), cfg)
        {
            tg.add_inheritance(sub.as_str(), sup.as_str());
        }
    }
    for t in base.abstracts() {
        if nodes.contains(t) {
            tg.set_abstract(t.as_str());
        }
    }
    for e in base.containments() {
        if edges.contains(e.as_str()) {
            tg.set_containment(e.as_str());
        }
    }
    for (a, b) in base.opposites() {
        if edges.contains(a.as_str()) && edges.contains(b.as_str()) {
            tg.add_opposite_directed(a.as_str(), b.as_str());
        }
    }
    for (e, m) in base.multiplicities() {
        if edges.contains(e.as_str()) {
            let m = atg
                .mult_overrides
                .iter()
                .rev()
                .find(|(target, _, cond)| target == e && cond.eval(cfg))
                .map(|(_, m, _)| *m)
                .unwrap_or(*m);
            tg.set_multiplicity(e.as_str(), m);
        }
    }
    for (t, decls) in base.attr_decls() {
        if !nodes.contains(t) {
            continue;
        }
        for (a, dt) in decls {
            if atg.present(&TypeElement::Attribute(t.clone(), a.clone()), cfg) {
                tg.declare_attr(t.as_str(), a.as_str(), *dt);
            }
        }
    }
    Ok(tg)
}

/// What a delta does to an instance graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Patch {
    /// Retype every control-typed node to `BNode` and record the control as an attribute.
    WeakenTyping,
    /// Unset `index` on every node of the given type.
    UnsetIndex(&'static str),
    /// Delete every node of the given type together with its incident edges.
    DeleteNodes(&'static str),
    /// Move each port's link onto its owning node, then delete the port.
    DissolvePorts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub name: &'static str,
    pub condition: Formula,
    pub patch: Patch,
}

impl Delta {
    pub fn applies(&self, cfg: &FeatureConfig) -> bool {
        self.condition.eval(cfg)
    }

    pub fn apply(&self, g: &mut InstanceGraph, sig: &Signature) {
        match self.patch {
            Patch::WeakenTyping => {
                let targets: Vec<(String, String)> = g
                    .node_types()
                    .iter()
                    .filter(|(_, t)| sig.contains(t))
                    .map(|(n, t)| (n.clone(), t.clone()))
                    .collect();
                for (n, control) in targets {
                    g.retype_node(&n, B_NODE);
                    g.set_attr(&n, CONTROL, AttrValue::Str(control));
                }
            }
            Patch::UnsetIndex(node_type) => {
                let targets: Vec<String> = g.nodes_of_type(node_type).map(String::from).collect();
                for n in targets {
                    g.unset_attr(&n, INDEX);
                }
            }
            Patch::DeleteNodes(node_type) => {
                let targets: Vec<String> = g.nodes_of_type(node_type).map(String::from).collect();
                for n in targets {
                    g.remove_node(&n);
                }
            }
            Patch::DissolvePorts => {
                let ports: Vec<String> = g.nodes_of_type(B_PORT).map(String::from).collect();
                for port in ports {
                    let owner = g.outgoing(&port, NODE).map(|(_, t)| t.to_string()).next();
                    if let Some(owner) = owner {
                        let links: Vec<(String, String)> = g
                            .outgoing(&port, LINK)
                            .map(|(e, t)| (e.to_string(), t.to_string()))
                            .collect();
                        for (link_edge, target) in links {
                            g.set_edge_source(&link_edge, owner.as_str());
                            let back: Vec<String> = g
                                .outgoing(&target, POINTS)
                                .filter(|(_, t)| *t == port)
                                .map(|(e, _)| e.to_string())
                                .collect();
                            if let Some(back) = back.first() {
                                g.set_edge_target(back, owner.as_str());
                            }
                        }
                    }
                    g.remove_node(&port);
                }
            }
        }
    }
}

/// The instance-level deltas, in application order.
pub fn deltas() -> Vec<Delta> {
    use Feature::*;
    vec![
        Delta {
            name: "Δ(ST,WT)",
            condition: Formula::var(WT),
            patch: Patch::WeakenTyping,
        },
        Delta {
            name: "Δ(RI,ER)",
            condition: Formula::not(RI),
            patch: Patch::UnsetIndex(B_ROOT),
        },
        Delta {
            name: "Δ(ER,AS)",
            condition: Formula::not(ER),
            patch: Patch::DeleteNodes(B_ROOT),
        },
        Delta {
            name: "Δ(SI,ES)",
            condition: Formula::not(SI),
            patch: Patch::UnsetIndex(B_SITE),
        },
        Delta {
            name: "Δ(ES,AS)",
            condition: Formula::not(ES),
            patch: Patch::DeleteNodes(B_SITE),
        },
        Delta {
            name: "Δ(PI,EP)",
            condition: Formula::not(PI),
            patch: Patch::UnsetIndex(B_PORT),
        },
        Delta {
            name: "Δ(EP,AS)",
            condition: Formula::not(EP),
            patch: Patch::DissolvePorts,
        },
    ]
}

/// Transforms an encoded graph into the variant selected by `cfg` by applying
/// every delta whose condition holds, in order.
///
/// The input must be typed over the 150% type graph of `sig`; canonical
/// encodings and already-configured variants both are, which makes the
/// operation idempotent.
pub fn apply_deltas(
    g: &InstanceGraph,
    cfg: &FeatureConfig,
    sig: &Signature,
) -> Result<InstanceGraph, VariabilityError> {
    let report = validate_config(cfg);
    if !report.is_empty() {
        return Err(VariabilityError::InvalidConfig(report));
    }
    let atg = annotate_150(&extend_for_signature(sig)?);
    let typing = check_typing(g, atg.base());
    if !typing.is_empty() {
        return Err(VariabilityError::NotCanonical(typing));
    }
    let mut out = g.clone();
    for delta in deltas() {
        if delta.applies(cfg) {
            delta.apply(&mut out, sig);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::make_signature;
    use crate::mapping::{base_type_graph, extend_for_signature};

    fn cfg(names: &[&str]) -> FeatureConfig {
        FeatureConfig::parse_list(names).unwrap()
    }

    #[test]
    fn canonical_config_is_valid() {
        assert!(validate_config(&FeatureConfig::canonical()).is_empty());
    }

    #[test]
    fn requires_and_alternative_violations() {
        let report = validate_config(&cfg(&["WT", "RI"]));
        assert_eq!(report.codes(), ["requires"]);
        assert!(report.findings()[0].message.contains("RI requires ER"));

        let report = validate_config(&cfg(&["ST", "WT", "ER"]));
        assert_eq!(report.codes(), ["alternative-group"]);
        assert!(validate_config(&cfg(&["ER"])).has_code("alternative-group"));
        assert!(validate_config(&cfg(&["ST", "AS"])).has_code("abstract-feature"));
    }

    #[test]
    fn enumeration_contains_extremes() {
        let all = enumerate_configs();
        assert!(all.contains(&FeatureConfig::canonical()));
        assert!(all.contains(&cfg(&["WT"])));
    }

    #[test]
    fn unknown_feature_name() {
        assert!(matches!(
            FeatureConfig::parse_list(&["XX"]),
            Err(VariabilityError::UnknownFeature(_))
        ));
    }

    #[test]
    fn derive_canonical_is_identity() {
        let sig = make_signature([("A", 1), ("B", 0)]).unwrap();
        let tg = extend_for_signature(&sig).unwrap();
        let derived = derive_type_graph(&annotate_150(&tg), &FeatureConfig::canonical()).unwrap();
        assert_eq!(derived, tg);
    }

    #[test]
    fn derive_minimal_variant() {
        let tg = base_type_graph();
        let derived = derive_type_graph(&annotate_150(&tg), &cfg(&["ST"])).unwrap();
        let names: Vec<&str> = derived.node_types().iter().map(String::as_str).collect();
        assert_eq!(
            names,
            [
                B_EDGE,
                B_INNER_NAME,
                B_LINK,
                B_NODE,
                B_OUTER_NAME,
                B_PLACE,
                B_POINT
            ]
        );
        assert!(derived
            .inherits()
            .contains(&(B_NODE.into(), B_POINT.into())));
        assert!(derived.edge_type(PORTS).is_none());
        assert_eq!(derived.multiplicity(LINK), Some(Multiplicity::at_least(0)));
        assert!(derived.validate().is_empty());
    }

    #[test]
    fn derive_rejects_invalid_config() {
        let atg = annotate_150(&base_type_graph());
        assert!(matches!(
            derive_type_graph(&atg, &cfg(&["ST", "WT"])),
            Err(VariabilityError::InvalidConfig(_))
        ));
    }

    #[test]
    fn model_formula_matches_root_semantics() {
        let f = FeatureModel::fixed().formula();
        assert!(f.eval(&FeatureConfig::canonical()));
        assert!(!f.eval(&cfg(&["WT", "PI"])));
        assert!(f.to_string().contains("(PI ⇒ EP)"));
    }
}
