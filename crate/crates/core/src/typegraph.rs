//! Type graphs (metamodels) and instance graphs typed over them.
//!
//! A [`TypeGraph`] is a directed graph of node and edge types enriched with an
//! inheritance relation, abstract node types, containment edge types, opposite
//! edge-type pairs, multiplicities and attribute declarations. An
//! [`InstanceGraph`] carries a typing map into a type graph plus node
//! attributes. The checkers in this module are pure and never fail; they
//! return a [`ValidationReport`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeGraphError {
    #[error("unknown node type `{0}`")]
    UnknownType(String),
}

/// Source and target of an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEnds {
    pub src: String,
    pub tgt: String,
}

impl EdgeEnds {
    pub fn new(src: impl Into<String>, tgt: impl Into<String>) -> Self {
        Self {
            src: src.into(),
            tgt: tgt.into(),
        }
    }
}

/// A directed multigraph with named nodes and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeMap<String, EdgeEnds>,
}

/// Lower and upper bound on the number of outgoing edges of one type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    pub lower: u32,
    /// `None` is the unbounded upper bound `*`.
    pub upper: Option<u32>,
}

impl Multiplicity {
    pub const fn new(lower: u32, upper: Option<u32>) -> Self {
        Self { lower, upper }
    }

    pub const fn exactly(n: u32) -> Self {
        Self::new(n, Some(n))
    }

    pub const fn at_least(n: u32) -> Self {
        Self::new(n, None)
    }

    pub fn is_well_formed(&self) -> bool {
        self.upper.is_none_or(|ub| self.lower <= ub)
    }

    pub fn admits(&self, count: usize) -> bool {
        count >= self.lower as usize && self.upper.is_none_or(|ub| count <= ub as usize)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(ub) => write!(f, "[{},{}]", self.lower, ub),
            None => write!(f, "[{},*]", self.lower),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataType {
    Int,
    String,
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataType::Int => f.write_str("int"),
            DataType::String => f.write_str("string"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttrValue {
    Int(i64),
    Str(String),
}

impl AttrValue {
    pub fn data_type(&self) -> DataType {
        match self {
            AttrValue::Int(_) => DataType::Int,
            AttrValue::Str(_) => DataType::String,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(i) => Some(*i),
            AttrValue::Str(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            AttrValue::Str(s) => Some(s),
            AttrValue::Int(_) => None,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Int(i) => write!(f, "{i}"),
            AttrValue::Str(s) => write!(f, "{s:?}"),
        }
    }
}

/// A metamodel: node types, edge types and their structural constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeGraph {
    graph: Graph,
    inherits: BTreeSet<(String, String)>,
    abstracts: BTreeSet<String>,
    containments: BTreeSet<String>,
    opposites: BTreeSet<(String, String)>,
    mult: BTreeMap<String, Multiplicity>,
    attr_decls: BTreeMap<String, BTreeMap<String, DataType>>,
}

impl TypeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node_type(&mut self, name: impl Into<String>) -> &mut Self {
        self.graph.nodes.insert(name.into());
        self
    }

    pub fn add_edge_type(
        &mut self,
        name: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.graph
            .edges
            .insert(name.into(), EdgeEnds::new(src, tgt));
        self
    }

    /// Records `sub` as a direct subtype of `sup`.
    pub fn add_inheritance(&mut self, sub: impl Into<String>, sup: impl Into<String>) -> &mut Self {
        self.inherits.insert((sub.into(), sup.into()));
        self
    }

    pub fn set_abstract(&mut self, name: impl Into<String>) -> &mut Self {
        self.abstracts.insert(name.into());
        self
    }

    pub fn set_containment(&mut self, edge_type: impl Into<String>) -> &mut Self {
        self.containments.insert(edge_type.into());
        self
    }

    /// Adds the pair in both directions; the opposite relation is symmetric.
    pub fn add_opposite(&mut self, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        let (a, b) = (a.into(), b.into());
        self.opposites.insert((b.clone(), a.clone()));
        self.opposites.insert((a, b));
        self
    }

    /// Adds a single ordered pair. Used when loading documents, where symmetry
    /// is checked rather than assumed.
    pub fn add_opposite_directed(
        &mut self,
        a: impl Into<String>,
        b: impl Into<String>,
    ) -> &mut Self {
        self.opposites.insert((a.into(), b.into()));
        self
    }

    pub fn set_multiplicity(
        &mut self,
        edge_type: impl Into<String>,
        mult: Multiplicity,
    ) -> &mut Self {
        self.mult.insert(edge_type.into(), mult);
        self
    }

    pub fn declare_attr(
        &mut self,
        node_type: impl Into<String>,
        attr: impl Into<String>,
        data_type: DataType,
    ) -> &mut Self {
        self.attr_decls
            .entry(node_type.into())
            .or_default()
            .insert(attr.into(), data_type);
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_types(&self) -> &BTreeSet<String> {
        &self.graph.nodes
    }

    pub fn edge_types(&self) -> &BTreeMap<String, EdgeEnds> {
        &self.graph.edges
    }

    pub fn has_node_type(&self, name: &str) -> bool {
        self.graph.nodes.contains(name)
    }

    pub fn edge_type(&self, name: &str) -> Option<&EdgeEnds> {
        self.graph.edges.get(name)
    }

    pub fn inherits(&self) -> &BTreeSet<(String, String)> {
        &self.inherits
    }

    pub fn abstracts(&self) -> &BTreeSet<String> {
        &self.abstracts
    }

    pub fn is_abstract(&self, name: &str) -> bool {
        self.abstracts.contains(name)
    }

    pub fn containments(&self) -> &BTreeSet<String> {
        &self.containments
    }

    pub fn is_containment(&self, edge_type: &str) -> bool {
        self.containments.contains(edge_type)
    }

    pub fn opposites(&self) -> &BTreeSet<(String, String)> {
        &self.opposites
    }

    pub fn opposite_of(&self, edge_type: &str) -> Option<&str> {
        self.opposites
            .iter()
            .find(|(a, _)| a == edge_type)
            .map(|(_, b)| b.as_str())
    }

    pub fn multiplicities(&self) -> &BTreeMap<String, Multiplicity> {
        &self.mult
    }

    pub fn multiplicity(&self, edge_type: &str) -> Option<Multiplicity> {
        self.mult.get(edge_type).copied()
    }

    pub fn attr_decls(&self) -> &BTreeMap<String, BTreeMap<String, DataType>> {
        &self.attr_decls
    }

    /// Direct supertypes of `t`.
    pub fn direct_supertypes<'a>(&'a self, t: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.inherits
            .iter()
            .filter(move |(sub, _)| sub == t)
            .map(|(_, sup)| sup.as_str())
    }

    /// `t` together with all of its (transitive) supertypes.
    pub fn supertypes_or_self(&self, t: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([t.to_string()]);
        let mut queue = VecDeque::from([t.to_string()]);
        while let Some(cur) = queue.pop_front() {
            for sup in self.direct_supertypes(&cur) {
                if seen.insert(sup.to_string()) {
                    queue.push_back(sup.to_string());
                }
            }
        }
        seen
    }

    /// All strict subtypes of `t`, i.e. `{ y | (y, t) ∈ I⁺ }`.
    pub fn all_sub(&self, t: &str) -> Result<BTreeSet<String>, TypeGraphError> {
        if !self.has_node_type(t) {
            return Err(TypeGraphError::UnknownType(t.to_string()));
        }
        let mut result = BTreeSet::new();
        let mut queue = VecDeque::from([t.to_string()]);
        while let Some(cur) = queue.pop_front() {
            for (sub, sup) in &self.inherits {
                if *sup == cur && result.insert(sub.clone()) {
                    queue.push_back(sub.clone());
                }
            }
        }
        Ok(result)
    }

    /// `x == t` or `x ∈ allSub(t)`.
    pub fn conforms_to(&self, x: &str, t: &str) -> bool {
        x == t || self.supertypes_or_self(x).contains(t)
    }

    /// Data type of attribute `attr` as declared on `node_type` or a supertype.
    pub fn declared_attr(&self, node_type: &str, attr: &str) -> Option<DataType> {
        self.supertypes_or_self(node_type)
            .iter()
            .find_map(|t| self.attr_decls.get(t).and_then(|decls| decls.get(attr)))
            .copied()
    }

    /// Edge types whose source type is `node_type` or one of its supertypes.
    pub fn applicable_edge_types(&self, node_type: &str) -> Vec<&str> {
        let supers = self.supertypes_or_self(node_type);
        self.graph
            .edges
            .iter()
            .filter(|(_, ends)| supers.contains(&ends.src))
            .map(|(name, _)| name.as_str())
            .collect()
    }

    /// Well-formedness of the type graph itself.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let nodes = &self.graph.nodes;
        let edges = &self.graph.edges;

        for (name, ends) in edges {
            for end in [&ends.src, &ends.tgt] {
                if !nodes.contains(end) {
                    report.error(
                        "dangling-edge-type",
                        format!("edge-type:{name}"),
                        format!("edge type refers to unknown node type `{end}`"),
                    );
                }
            }
        }
        for (sub, sup) in &self.inherits {
            for t in [sub, sup] {
                if !nodes.contains(t) {
                    report.error(
                        "inheritance-unknown-type",
                        format!("inherits:{sub}<:{sup}"),
                        format!("inheritance refers to unknown node type `{t}`"),
                    );
                }
            }
        }
        for t in nodes {
            if self
                .all_sub(t)
                .map(|subs| subs.contains(t))
                .unwrap_or(false)
            {
                report.error(
                    "inheritance-cycle",
                    format!("node-type:{t}"),
                    "inheritance relation is cyclic",
                );
            }
        }
        for t in &self.abstracts {
            if !nodes.contains(t) {
                report.error(
                    "abstract-unknown-type",
                    format!("node-type:{t}"),
                    "abstract type is not a node type",
                );
            }
        }
        for e in &self.containments {
            if !edges.contains_key(e) {
                report.error(
                    "containment-unknown-type",
                    format!("edge-type:{e}"),
                    "containment is not an edge type",
                );
            }
        }
        let mut partners: BTreeMap<&str, usize> = BTreeMap::new();
        for (a, b) in &self.opposites {
            for e in [a, b] {
                if !edges.contains_key(e) {
                    report.error(
                        "opposite-unknown-type",
                        format!("edge-type:{e}"),
                        "opposite pair refers to an unknown edge type",
                    );
                }
            }
            if a == b {
                report.error(
                    "opposite-reflexive",
                    format!("edge-type:{a}"),
                    "edge type is opposite to itself",
                );
            }
            if !self.opposites.contains(&(b.clone(), a.clone())) {
                report.error(
                    "opposite-asymmetric",
                    format!("edge-type:{a}"),
                    format!("`{a}` is opposite to `{b}` but not vice versa"),
                );
            }
            *partners.entry(a.as_str()).or_default() += 1;
        }
        for (e, n) in partners {
            if n > 1 {
                report.error(
                    "opposite-not-unique",
                    format!("edge-type:{e}"),
                    "edge type has more than one opposite",
                );
            }
        }
        for (e, m) in &self.mult {
            if !edges.contains_key(e) {
                report.error(
                    "multiplicity-unknown-type",
                    format!("edge-type:{e}"),
                    "multiplicity attached to an unknown edge type",
                );
            }
            if !m.is_well_formed() {
                report.error(
                    "multiplicity-malformed",
                    format!("edge-type:{e}"),
                    format!("multiplicity {m} has lower bound above upper bound"),
                );
            }
        }
        for t in self.attr_decls.keys() {
            if !nodes.contains(t) {
                report.error(
                    "attribute-unknown-type",
                    format!("node-type:{t}"),
                    "attributes declared on an unknown node type",
                );
            }
        }
        report
    }
}

/// Free-function form of [`TypeGraph::all_sub`].
pub fn all_sub(tg: &TypeGraph, t: &str) -> Result<BTreeSet<String>, TypeGraphError> {
    tg.all_sub(t)
}

/// A directed graph with a typing map and node attributes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceGraph {
    graph: Graph,
    node_types: BTreeMap<String, String>,
    edge_types: BTreeMap<String, String>,
    attrs: BTreeMap<String, BTreeMap<String, AttrValue>>,
}

impl InstanceGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, node_type: impl Into<String>) -> &mut Self {
        let id = id.into();
        self.node_types.insert(id.clone(), node_type.into());
        self.graph.nodes.insert(id);
        self
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        edge_type: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        let id = id.into();
        self.edge_types.insert(id.clone(), edge_type.into());
        self.graph.edges.insert(id, EdgeEnds::new(src, tgt));
        self
    }

    /// Removes a node together with its attributes and incident edges.
    pub fn remove_node(&mut self, id: &str) -> bool {
        if !self.graph.nodes.remove(id) {
            return false;
        }
        self.node_types.remove(id);
        self.attrs.remove(id);
        let incident: Vec<String> = self
            .graph
            .edges
            .iter()
            .filter(|(_, ends)| ends.src == id || ends.tgt == id)
            .map(|(e, _)| e.clone())
            .collect();
        for e in incident {
            self.remove_edge(&e);
        }
        true
    }

    pub fn remove_edge(&mut self, id: &str) -> bool {
        self.edge_types.remove(id);
        self.graph.edges.remove(id).is_some()
    }

    pub fn retype_node(&mut self, id: &str, node_type: impl Into<String>) {
        if self.graph.nodes.contains(id) {
            self.node_types.insert(id.to_string(), node_type.into());
        }
    }

    pub fn retype_edge(&mut self, id: &str, edge_type: impl Into<String>) {
        if self.graph.edges.contains_key(id) {
            self.edge_types.insert(id.to_string(), edge_type.into());
        }
    }

    pub fn set_edge_source(&mut self, id: &str, src: impl Into<String>) {
        if let Some(ends) = self.graph.edges.get_mut(id) {
            ends.src = src.into();
        }
    }

    pub fn set_edge_target(&mut self, id: &str, tgt: impl Into<String>) {
        if let Some(ends) = self.graph.edges.get_mut(id) {
            ends.tgt = tgt.into();
        }
    }

    pub fn set_attr(&mut self, node: &str, attr: impl Into<String>, value: AttrValue) {
        self.attrs
            .entry(node.to_string())
            .or_default()
            .insert(attr.into(), value);
    }

    pub fn unset_attr(&mut self, node: &str, attr: &str) -> Option<AttrValue> {
        let decls = self.attrs.get_mut(node)?;
        let old = decls.remove(attr);
        if decls.is_empty() {
            self.attrs.remove(node);
        }
        old
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.graph.nodes
    }

    pub fn edges(&self) -> &BTreeMap<String, EdgeEnds> {
        &self.graph.edges
    }

    pub fn node_count(&self) -> usize {
        self.graph.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.graph.nodes.contains(id)
    }

    pub fn node_type(&self, id: &str) -> Option<&str> {
        self.node_types.get(id).map(String::as_str)
    }

    pub fn edge_type(&self, id: &str) -> Option<&str> {
        self.edge_types.get(id).map(String::as_str)
    }

    pub fn node_types(&self) -> &BTreeMap<String, String> {
        &self.node_types
    }

    pub fn edge_types(&self) -> &BTreeMap<String, String> {
        &self.edge_types
    }

    pub fn attrs(&self) -> &BTreeMap<String, BTreeMap<String, AttrValue>> {
        &self.attrs
    }

    pub fn attr(&self, node: &str, attr: &str) -> Option<&AttrValue> {
        self.attrs.get(node).and_then(|a| a.get(attr))
    }

    pub fn nodes_of_type<'a>(&'a self, node_type: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.node_types
            .iter()
            .filter(move |(_, t)| *t == node_type)
            .map(|(n, _)| n.as_str())
    }

    /// Outgoing edges of `node` typed `edge_type`, as `(edge id, target)`.
    pub fn outgoing<'a>(
        &'a self,
        node: &'a str,
        edge_type: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.graph
            .edges
            .iter()
            .filter(move |(e, ends)| {
                ends.src == node && self.edge_types.get(*e).map(String::as_str) == Some(edge_type)
            })
            .map(|(e, ends)| (e.as_str(), ends.tgt.as_str()))
    }

    /// Precomputed outgoing adjacency: node → edge type → targets (in edge-id order).
    pub fn adjacency(&self) -> BTreeMap<&str, BTreeMap<&str, Vec<&str>>> {
        let mut adj: BTreeMap<&str, BTreeMap<&str, Vec<&str>>> = BTreeMap::new();
        for (e, ends) in &self.graph.edges {
            if let Some(t) = self.edge_types.get(e) {
                adj.entry(ends.src.as_str())
                    .or_default()
                    .entry(t.as_str())
                    .or_default()
                    .push(ends.tgt.as_str());
            }
        }
        adj
    }
}

/// Memoized supertype closure over the types actually used by a graph.
struct Conformance<'a> {
    tg: &'a TypeGraph,
    cache: BTreeMap<String, BTreeSet<String>>,
}

impl<'a> Conformance<'a> {
    fn new(tg: &'a TypeGraph) -> Self {
        Self {
            tg,
            cache: BTreeMap::new(),
        }
    }

    fn conforms(&mut self, x: &str, t: &str) -> bool {
        if x == t {
            return true;
        }
        if !self.cache.contains_key(x) {
            self.cache
                .insert(x.to_string(), self.tg.supertypes_or_self(x));
        }
        self.cache[x].contains(t)
    }
}

/// Checks that the typing is a morphism into `tg` (respecting subtyping at edge
/// ends), that no node has an abstract type, and that attributes conform to
/// their declarations.
pub fn check_typing(g: &InstanceGraph, tg: &TypeGraph) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut conf = Conformance::new(tg);

    for n in g.nodes() {
        match g.node_type(n) {
            None => report.error("untyped-node", format!("node:{n}"), "node has no type"),
            Some(t) if !tg.has_node_type(t) => report.error(
                "unknown-node-type",
                format!("node:{n}"),
                format!("node typed by unknown type `{t}`"),
            ),
            Some(t) if tg.is_abstract(t) => report.error(
                "abstract-instantiation",
                format!("node:{n}"),
                format!("abstract type instantiated: `{t}`"),
            ),
            Some(_) => {}
        }
    }
    for n in g.node_types().keys() {
        if !g.contains_node(n) {
            report.error(
                "typing-domain",
                format!("node:{n}"),
                "type assigned to an absent node",
            );
        }
    }

    for (e, ends) in g.edges() {
        let loc = format!("edge:{e}");
        for end in [&ends.src, &ends.tgt] {
            if !g.contains_node(end) {
                report.error(
                    "dangling-edge",
                    loc.clone(),
                    format!("edge end `{end}` is not a node"),
                );
            }
        }
        let Some(et) = g.edge_type(e) else {
            report.error("untyped-edge", loc, "edge has no type");
            continue;
        };
        let Some(type_ends) = tg.edge_type(et) else {
            report.error(
                "unknown-edge-type",
                loc,
                format!("edge typed by unknown edge type `{et}`"),
            );
            continue;
        };
        if let Some(st) = g.node_type(&ends.src) {
            if !conf.conforms(st, &type_ends.src) {
                report.error(
                    "source-type",
                    loc.clone(),
                    format!(
                        "source type incompatible: `{st}` is not `{}` or a subtype (edge type `{et}`)",
                        type_ends.src
                    ),
                );
            }
        }
        if let Some(tt) = g.node_type(&ends.tgt) {
            if !conf.conforms(tt, &type_ends.tgt) {
                report.error(
                    "target-type",
                    loc.clone(),
                    format!(
                        "target type incompatible: `{tt}` is not `{}` or a subtype (edge type `{et}`)",
                        type_ends.tgt
                    ),
                );
            }
        }
    }

    for (n, attrs) in g.attrs() {
        let Some(t) = g.node_type(n) else {
            if !g.contains_node(n) {
                report.error(
                    "attribute-domain",
                    format!("node:{n}"),
                    "attributes set on an absent node",
                );
            }
            continue;
        };
        for (name, value) in attrs {
            match tg.declared_attr(t, name) {
                None => report.error(
                    "attribute-undeclared",
                    format!("node:{n}"),
                    format!("attribute `{name}` is not declared on `{t}` or a supertype"),
                ),
                Some(dt) if dt != value.data_type() => report.error(
                    "attribute-type",
                    format!("node:{n}"),
                    format!(
                        "attribute `{name}` must be {dt}, found {}",
                        value.data_type()
                    ),
                ),
                Some(_) => {}
            }
        }
    }
    report
}

/// Checks the validity conditions: no containment cycles, at most one container
/// per node, and consistent opposite edges.
///
/// Opposite consistency is counted per endpoint pair: for opposite types
/// `(t1, t2)` the number of `t1` edges `a → b` must equal the number of `t2`
/// edges `b → a`. For simple graphs this is "exactly one reverse edge".
pub fn check_validity(g: &InstanceGraph, tg: &TypeGraph) -> ValidationReport {
    let mut report = ValidationReport::new();

    let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut containers: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (e, ends) in g.edges() {
        if g.edge_type(e).is_some_and(|t| tg.is_containment(t)) {
            children
                .entry(ends.src.as_str())
                .or_default()
                .push(ends.tgt.as_str());
            containers
                .entry(ends.tgt.as_str())
                .or_default()
                .push(ends.src.as_str());
        }
    }

    for (n, by) in &containers {
        if by.len() > 1 {
            report.error(
                "multiple-containers",
                format!("node:{n}"),
                format!("node has more than one container: {}", by.join(", ")),
            );
        }
    }

    for rep in containment_cycles(&children) {
        report.error(
            "containment-cycle",
            format!("node:{rep}"),
            "containment cycle",
        );
    }

    // (canonical edge type, a, b) -> (count of canonical a→b, count of opposite b→a)
    let mut pairs: BTreeMap<(&str, &str, &str), (usize, usize)> = BTreeMap::new();
    for (e, ends) in g.edges() {
        let Some(t) = g.edge_type(e) else { continue };
        let Some(opp) = tg.opposite_of(t) else {
            continue;
        };
        let (a, b) = (ends.src.as_str(), ends.tgt.as_str());
        if t <= opp {
            pairs.entry((t, a, b)).or_default().0 += 1;
        } else {
            pairs.entry((opp, b, a)).or_default().1 += 1;
        }
    }
    for ((t, a, b), (forward, backward)) in pairs {
        if forward != backward {
            let opp = tg.opposite_of(t).unwrap_or("?");
            report.error(
                "opposite-inconsistency",
                format!("node:{a}"),
                format!(
                    "opposite inconsistency: {forward} `{t}` edge(s) {a} -> {b} but {backward} `{opp}` edge(s) {b} -> {a}"
                ),
            );
        }
    }
    report
}

fn containment_cycles<'a>(children: &BTreeMap<&'a str, Vec<&'a str>>) -> Vec<&'a str> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    let mut found = Vec::new();

    for &start in children.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // iterative DFS keeping the active path
        let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let kids = children.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if *next < kids.len() {
                let child = kids[*next];
                *next += 1;
                match marks.get(child) {
                    None => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                    Some(Mark::Active) => {
                        let pos = stack.iter().position(|(n, _)| *n == child).unwrap_or(0);
                        let rep = stack[pos..].iter().map(|(n, _)| *n).min().unwrap_or(child);
                        found.push(rep);
                    }
                    Some(Mark::Done) => {}
                }
            } else {
                marks.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// Checks every node's outgoing edge counts against the multiplicities of the
/// edge types applicable to its type.
pub fn check_multiplicities(g: &InstanceGraph, tg: &TypeGraph) -> ValidationReport {
    let mut report = ValidationReport::new();
    let adj = g.adjacency();
    let mut applicable: BTreeMap<&str, Vec<&str>> = BTreeMap::new();

    for n in g.nodes() {
        let Some(t) = g.node_type(n) else { continue };
        if !tg.has_node_type(t) {
            continue;
        }
        let edge_types = applicable
            .entry(t)
            .or_insert_with(|| tg.applicable_edge_types(t));
        for et in edge_types.iter() {
            let Some(m) = tg.multiplicity(et) else {
                continue;
            };
            let count = adj
                .get(n.as_str())
                .and_then(|by_type| by_type.get(et))
                .map_or(0, Vec::len);
            if !m.admits(count) {
                let (code, word) = if count < m.lower as usize {
                    ("multiplicity-underflow", "underflow")
                } else {
                    ("multiplicity-overflow", "overflow")
                };
                report.error(
                    code,
                    format!("node:{n}"),
                    format!("multiplicity {word}: {count} outgoing `{et}` edge(s), expected {m}"),
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> TypeGraph {
        let mut tg = TypeGraph::new();
        tg.add_node_type("Thing")
            .add_node_type("Box")
            .add_node_type("Ball")
            .add_inheritance("Box", "Thing")
            .add_inheritance("Ball", "Thing")
            .set_abstract("Thing")
            .add_edge_type("holds", "Box", "Thing")
            .add_edge_type("heldBy", "Thing", "Box")
            .add_opposite("holds", "heldBy")
            .set_containment("holds")
            .set_multiplicity("heldBy", Multiplicity::new(0, Some(1)))
            .declare_attr("Thing", "weight", DataType::Int);
        tg
    }

    fn hold(g: &mut InstanceGraph, parent: &str, child: &str) {
        g.add_edge(format!("h:{child}:{parent}"), "holds", parent, child);
        g.add_edge(format!("b:{child}:{parent}"), "heldBy", child, parent);
    }

    #[test]
    fn all_sub_is_transitive_and_strict() {
        let mut tg = tiny();
        tg.add_node_type("Crate").add_inheritance("Crate", "Box");
        let subs = tg.all_sub("Thing").unwrap();
        assert_eq!(
            subs,
            BTreeSet::from(["Ball".into(), "Box".into(), "Crate".into()])
        );
        assert!(tg.all_sub("Ball").unwrap().is_empty());
        assert_eq!(
            tg.all_sub("Nope"),
            Err(TypeGraphError::UnknownType("Nope".into()))
        );
    }

    #[test]
    fn well_formed_tiny_graph() {
        assert!(tiny().validate().is_empty());
    }

    #[test]
    fn type_graph_validation_catches_defects() {
        let mut tg = tiny();
        tg.add_inheritance("Thing", "Ball")
            .add_opposite_directed("holds", "holds")
            .set_multiplicity("holds", Multiplicity::new(3, Some(1)))
            .set_abstract("Ghost");
        let codes = tg.validate().codes();
        for code in [
            "inheritance-cycle",
            "opposite-reflexive",
            "opposite-not-unique",
            "multiplicity-malformed",
            "abstract-unknown-type",
        ] {
            assert!(codes.contains(&code), "missing {code} in {codes:?}");
        }
    }

    #[test]
    fn typing_respects_subtypes_and_abstracts() {
        let tg = tiny();
        let mut g = InstanceGraph::new();
        g.add_node("b", "Box").add_node("c", "Ball");
        hold(&mut g, "b", "c");
        g.set_attr("c", "weight", AttrValue::Int(3));
        assert!(check_typing(&g, &tg).is_empty());

        g.add_node("t", "Thing");
        g.add_edge("bad", "holds", "c", "b");
        g.set_attr("b", "weight", AttrValue::Str("heavy".into()));
        g.set_attr("b", "colour", AttrValue::Str("red".into()));
        let codes = check_typing(&g, &tg).codes();
        assert!(codes.contains(&"abstract-instantiation"));
        assert!(codes.contains(&"source-type"));
        assert!(codes.contains(&"attribute-type"));
        assert!(codes.contains(&"attribute-undeclared"));
    }

    #[test]
    fn validity_reports_cycles_containers_and_opposites() {
        let tg = tiny();
        let mut g = InstanceGraph::new();
        g.add_node("a", "Box")
            .add_node("b", "Box")
            .add_node("c", "Box");
        hold(&mut g, "a", "b");
        assert!(check_validity(&g, &tg).is_empty());

        hold(&mut g, "b", "a");
        assert!(check_validity(&g, &tg).has_code("containment-cycle"));

        let mut g2 = InstanceGraph::new();
        g2.add_node("a", "Box")
            .add_node("b", "Box")
            .add_node("c", "Ball");
        hold(&mut g2, "a", "c");
        hold(&mut g2, "b", "c");
        assert_eq!(check_validity(&g2, &tg).codes(), ["multiple-containers"]);

        g2.remove_edge("b:c:a");
        let report = check_validity(&g2, &tg);
        assert_eq!(
            report.codes(),
            ["multiple-containers", "opposite-inconsistency"]
        );
    }

    #[test]
    fn parallel_opposite_pairs_are_consistent() {
        let tg = tiny();
        let mut g = InstanceGraph::new();
        g.add_node("a", "Box").add_node("c", "Ball");
        g.add_edge("h1", "holds", "a", "c")
            .add_edge("h2", "holds", "a", "c");
        g.add_edge("b1", "heldBy", "c", "a")
            .add_edge("b2", "heldBy", "c", "a");
        assert!(!check_validity(&g, &tg).has_code("opposite-inconsistency"));
        g.remove_edge("b2");
        assert!(check_validity(&g, &tg).has_code("opposite-inconsistency"));
    }

    #[test]
    fn multiplicities_count_outgoing_edges() {
        let tg = tiny();
        let mut g = InstanceGraph::new();
        g.add_node("a", "Box")
            .add_node("b", "Box")
            .add_node("c", "Ball");
        hold(&mut g, "a", "c");
        assert!(check_multiplicities(&g, &tg).is_empty());
        hold(&mut g, "b", "c");
        let report = check_multiplicities(&g, &tg);
        assert_eq!(report.codes(), ["multiplicity-overflow"]);
        assert!(report.findings()[0].location.ends_with(":c"));
    }

    #[test]
    fn removing_a_node_drops_incident_edges() {
        let mut g = InstanceGraph::new();
        g.add_node("a", "Box").add_node("c", "Ball");
        hold(&mut g, "a", "c");
        g.set_attr("c", "weight", AttrValue::Int(1));
        assert!(g.remove_node("c"));
        assert_eq!(g.edge_count(), 0);
        assert!(g.attrs().is_empty());
    }
}
