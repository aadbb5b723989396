//! The canonical correspondence between bigraphs and typed graphs.
//!
//! [`base_type_graph`] models the anatomy of bigraphs (places, points, links,
//! ports); [`extend_for_signature`] adds one `BNode` subtype per control.
//! [`encode`] turns a bigraph into an instance graph over that type graph and
//! returns the element map; [`decode`] inverts it for canonical graphs.
//! [`check_arity_rule`] and [`check_soundness`] are the extra well-formedness
//! and alignment conditions that plain typing cannot express.
//!
//! Instance-graph node identifiers are derived from the bigraph element by a
//! kind prefix: `n:` nodes, `e:` edges, `p:<node>:<i>` ports, `s:` sites,
//! `r:` roots, `x:` inner names, `y:` outer names. The prefixes keep sites
//! apart from roots and inner names apart from outer names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::bigraph::{
    ports_of, validate_bigraph, Bigraph, Link, Parent, Place, Point, Port, Signature,
    SignatureError, RESERVED_CONTROL_NAMES,
};
use crate::names::*;
use crate::report::ValidationReport;
use crate::typegraph::{
    check_multiplicities, check_typing, check_validity, AttrValue, DataType, InstanceGraph,
    Multiplicity, TypeGraph,
};

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("invalid bigraph:\n{0}")]
    InvalidBigraph(ValidationReport),
    #[error("{0} is idle; links without points have no typed-graph representation")]
    IdleLink(Link),
    #[error("element map is not bijective at `{0}`")]
    NotBijective(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("instance graph is not canonical: {0}")]
    NotCanonical(String),
    #[error("node `{0}` is typed by the generic BNode type; controls must be node types")]
    UntypedControl(String),
    #[error("instance graph violates its type graph:\n{0}")]
    InvalidGraph(ValidationReport),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A bigraph element, tagged by kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Node(String),
    Edge(String),
    Port(Port),
    Site(usize),
    InnerName(String),
    Root(usize),
    OuterName(String),
}

impl Element {
    /// Deterministic instance-graph node id for this element.
    pub fn graph_id(&self) -> String {
        match self {
            Element::Node(v) => format!("n:{v}"),
            Element::Edge(e) => format!("e:{e}"),
            Element::Port(p) => format!("p:{}:{}", p.node, p.index),
            Element::Site(i) => format!("s:{i}"),
            Element::InnerName(x) => format!("x:{x}"),
            Element::Root(i) => format!("r:{i}"),
            Element::OuterName(y) => format!("y:{y}"),
        }
    }

    /// The node type this element must carry in the instance graph.
    pub fn expected_type(&self, b: &Bigraph) -> Option<String> {
        Some(
            match self {
                Element::Node(v) => return b.control_of(v).map(|c| c.as_str().to_string()),
                Element::Edge(_) => B_EDGE,
                Element::Port(_) => B_PORT,
                Element::Site(_) => B_SITE,
                Element::InnerName(_) => B_INNER_NAME,
                Element::Root(_) => B_ROOT,
                Element::OuterName(_) => B_OUTER_NAME,
            }
            .to_string(),
        )
    }

    fn of_place(place: &Place) -> Self {
        match place {
            Place::Site(i) => Element::Site(*i),
            Place::Node(v) => Element::Node(v.clone()),
        }
    }

    fn of_parent(parent: &Parent) -> Self {
        match parent {
            Parent::Root(i) => Element::Root(*i),
            Parent::Node(v) => Element::Node(v.clone()),
        }
    }

    fn of_point(point: &Point) -> Self {
        match point {
            Point::InnerName(x) => Element::InnerName(x.clone()),
            Point::Port(p) => Element::Port(p.clone()),
        }
    }

    fn of_link(link: &Link) -> Self {
        match link {
            Link::Edge(e) => Element::Edge(e.clone()),
            Link::OuterName(y) => Element::OuterName(y.clone()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Node(v) => write!(f, "node {v}"),
            Element::Edge(e) => write!(f, "edge {e}"),
            Element::Port(p) => write!(f, "port {p}"),
            Element::Site(i) => write!(f, "site {i}"),
            Element::InnerName(x) => write!(f, "inner name {x}"),
            Element::Root(i) => write!(f, "root {i}"),
            Element::OuterName(y) => write!(f, "outer name {y}"),
        }
    }
}

/// All elements of `b`: nodes, edges, ports, sites, inner names, roots, outer names.
pub fn elements_of(b: &Bigraph) -> BTreeSet<Element> {
    let mut out = BTreeSet::new();
    out.extend(b.nodes().iter().cloned().map(Element::Node));
    out.extend(b.edges().iter().cloned().map(Element::Edge));
    out.extend(ports_of(b).into_iter().map(Element::Port));
    out.extend((0..b.inner().width).map(Element::Site));
    out.extend(b.inner().names.iter().cloned().map(Element::InnerName));
    out.extend((0..b.outer().width).map(Element::Root));
    out.extend(b.outer().names.iter().cloned().map(Element::OuterName));
    out
}

/// A bijection from bigraph elements to instance-graph node ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementMap {
    forward: BTreeMap<Element, String>,
    backward: BTreeMap<String, Element>,
}

impl ElementMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a pair, refusing anything that would break injectivity either way.
    pub fn insert(
        &mut self,
        element: Element,
        node: impl Into<String>,
    ) -> Result<(), MappingError> {
        let node = node.into();
        if self.forward.contains_key(&element) {
            return Err(MappingError::NotBijective(element.to_string()));
        }
        if self.backward.contains_key(&node) {
            return Err(MappingError::NotBijective(node));
        }
        self.forward.insert(element.clone(), node.clone());
        self.backward.insert(node, element);
        Ok(())
    }

    pub fn remove_element(&mut self, element: &Element) -> Option<String> {
        let node = self.forward.remove(element)?;
        self.backward.remove(&node);
        Some(node)
    }

    pub fn image(&self, element: &Element) -> Option<&str> {
        self.forward.get(element).map(String::as_str)
    }

    pub fn preimage(&self, node: &str) -> Option<&Element> {
        self.backward.get(node)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &str)> {
        self.forward.iter().map(|(e, n)| (e, n.as_str()))
    }
}

/// The identity correspondence between controls and their node types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlTypeMap {
    controls: BTreeSet<String>,
}

impl ControlTypeMap {
    pub fn new(sig: &Signature) -> Self {
        Self {
            controls: sig
                .controls()
                .map(|(c, _)| c.as_str().to_string())
                .collect(),
        }
    }

    pub fn type_of<'a>(&self, control: &'a str) -> Option<&'a str> {
        self.controls.contains(control).then_some(control)
    }

    pub fn control_of<'a>(&self, node_type: &'a str) -> Option<&'a str> {
        self.controls.contains(node_type).then_some(node_type)
    }

    /// The node types that represent controls.
    pub fn range(&self) -> &BTreeSet<String> {
        &self.controls
    }
}

/// The signature-independent type graph describing places, points and links.
pub fn base_type_graph() -> TypeGraph {
    let mut tg = TypeGraph::new();
    for t in BASE_NODE_TYPES {
        tg.add_node_type(t);
    }
    tg.add_inheritance(B_ROOT, B_PLACE)
        .add_inheritance(B_NODE, B_PLACE)
        .add_inheritance(B_SITE, B_PLACE)
        .add_inheritance(B_PORT, B_POINT)
        .add_inheritance(B_INNER_NAME, B_POINT)
        .add_inheritance(B_EDGE, B_LINK)
        .add_inheritance(B_OUTER_NAME, B_LINK);
    tg.set_abstract(B_PLACE)
        .set_abstract(B_POINT)
        .set_abstract(B_LINK);

    tg.add_edge_type(PRNT, B_PLACE, B_PLACE)
        .add_edge_type(CHLD, B_PLACE, B_PLACE)
        .add_edge_type(LINK, B_POINT, B_LINK)
        .add_edge_type(POINTS, B_LINK, B_POINT)
        .add_edge_type(PORTS, B_NODE, B_PORT)
        .add_edge_type(NODE, B_PORT, B_NODE);
    tg.add_opposite(PRNT, CHLD)
        .add_opposite(LINK, POINTS)
        .add_opposite(PORTS, NODE);
    tg.set_containment(CHLD).set_containment(PORTS);

    tg.set_multiplicity(PRNT, Multiplicity::new(0, Some(1)))
        .set_multiplicity(CHLD, Multiplicity::at_least(0))
        .set_multiplicity(LINK, Multiplicity::exactly(1))
        .set_multiplicity(POINTS, Multiplicity::at_least(1))
        .set_multiplicity(PORTS, Multiplicity::at_least(0))
        .set_multiplicity(NODE, Multiplicity::exactly(1));

    tg.declare_attr(B_ROOT, INDEX, DataType::Int)
        .declare_attr(B_SITE, INDEX, DataType::Int)
        .declare_attr(B_PORT, INDEX, DataType::Int);
    tg
}

/// The control-compatible extension of the base type graph: every control
/// becomes a node type directly below `BNode`.
pub fn extend_for_signature(sig: &Signature) -> Result<TypeGraph, SignatureError> {
    let mut tg = base_type_graph();
    for (control, _) in sig.controls() {
        let name = control.as_str();
        if RESERVED_CONTROL_NAMES.contains(&name) {
            return Err(SignatureError::ReservedControlName(name.to_string()));
        }
        tg.add_node_type(name).add_inheritance(name, B_NODE);
    }
    Ok(tg)
}

/// Every node typed by a control type must own exactly `ar(control)` ports.
pub fn check_arity_rule(g: &InstanceGraph, tg: &TypeGraph, sig: &Signature) -> ValidationReport {
    let mut report = ValidationReport::new();
    let phi = ControlTypeMap::new(sig);
    let adj = g.adjacency();
    for n in g.nodes() {
        let Some(t) = g.node_type(n) else { continue };
        let Some(control) = phi.control_of(t) else {
            continue;
        };
        if !tg.has_node_type(t) {
            continue;
        }
        let arity = sig.arity(control).unwrap_or(0);
        let ports = adj
            .get(n.as_str())
            .and_then(|m| m.get(PORTS))
            .map_or(0, Vec::len);
        if ports != arity {
            report.error(
                "arity",
                format!("node:{n}"),
                format!("`{control}` has arity {arity} but node owns {ports} `{PORTS}` edge(s)"),
            );
        }
    }
    report
}

fn add_pair(g: &mut InstanceGraph, ty: &str, opp: &str, from: &str, to: &str) {
    g.add_edge(format!("{ty}:{from}"), ty, from, to);
    g.add_edge(format!("{opp}:{from}"), opp, to, from);
}

/// Encodes a valid bigraph as an instance graph over `extend_for_signature(b.signature())`.
///
/// Idle edges and idle outer names are rejected: a `BLink` needs at least one point.
pub fn encode(b: &Bigraph) -> Result<(InstanceGraph, ElementMap), MappingError> {
    let report = validate_bigraph(b);
    if !report.is_empty() {
        return Err(MappingError::InvalidBigraph(report));
    }
    if let Some(idle) = b.idle_links().into_iter().next() {
        return Err(MappingError::IdleLink(idle));
    }

    let mut g = InstanceGraph::new();
    let mut map = ElementMap::new();

    for element in elements_of(b) {
        let id = element.graph_id();
        let ty = element
            .expected_type(b)
            .expect("validated bigraph has total ctrl");
        g.add_node(&id, ty);
        match &element {
            Element::Site(i) | Element::Root(i) => {
                g.set_attr(&id, INDEX, AttrValue::Int(*i as i64));
            }
            Element::Port(p) => {
                g.set_attr(&id, INDEX, AttrValue::Int(p.index as i64));
                let owner = Element::Node(p.node.clone()).graph_id();
                g.add_edge(format!("{PORTS}:{id}"), PORTS, &owner, &id);
                g.add_edge(format!("{NODE}:{id}"), NODE, &id, &owner);
            }
            _ => {}
        }
        map.insert(element, id)?;
    }

    for (place, parent) in b.prnt() {
        let child = Element::of_place(place).graph_id();
        let parent = Element::of_parent(parent).graph_id();
        add_pair(&mut g, PRNT, CHLD, &child, &parent);
    }
    for (point, link) in b.link() {
        let point = Element::of_point(point).graph_id();
        let link = Element::of_link(link).graph_id();
        add_pair(&mut g, LINK, POINTS, &point, &link);
    }
    Ok((g, map))
}

fn strip<'a>(id: &'a str, prefix: &str) -> &'a str {
    id.strip_prefix(prefix).unwrap_or(id)
}

fn index_attr(g: &InstanceGraph, n: &str) -> Result<usize, DecodeError> {
    match g.attr(n, INDEX) {
        Some(AttrValue::Int(i)) if *i >= 0 => Ok(*i as usize),
        Some(other) => Err(DecodeError::NotCanonical(format!(
            "node `{n}` has invalid index {other}"
        ))),
        None => Err(DecodeError::NotCanonical(format!(
            "node `{n}` has no index"
        ))),
    }
}

/// Checks that `indices` is exactly `0..indices.len()`.
fn gap_free(
    kind: &str,
    indices: &BTreeMap<usize, String>,
    count: usize,
) -> Result<(), DecodeError> {
    if indices.len() != count {
        return Err(DecodeError::NotCanonical(format!("duplicate {kind} index")));
    }
    if let Some(missing) = (0..count).find(|i| !indices.contains_key(i)) {
        return Err(DecodeError::NotCanonical(format!(
            "{kind} indices are not gap-free: {missing} is missing"
        )));
    }
    Ok(())
}

fn single_target<'a>(
    g: &'a InstanceGraph,
    node: &'a str,
    edge_type: &'a str,
) -> Result<&'a str, DecodeError> {
    let mut targets = g.outgoing(node, edge_type).map(|(_, t)| t);
    match (targets.next(), targets.next()) {
        (Some(t), None) => Ok(t),
        (None, _) => Err(DecodeError::NotCanonical(format!(
            "node `{node}` has no outgoing `{edge_type}` edge"
        ))),
        (Some(_), Some(_)) => Err(DecodeError::NotCanonical(format!(
            "node `{node}` has several outgoing `{edge_type}` edges"
        ))),
    }
}

/// Decodes a canonical instance graph (strongly typed, explicit and fully
/// indexed roots, sites and ports) back into a bigraph.
///
/// Node, edge and name identifiers are recovered by removing the kind prefix
/// that [`encode`] adds; ids without the prefix are taken verbatim.
pub fn decode(g: &InstanceGraph, sig: &Signature) -> Result<(Bigraph, ElementMap), DecodeError> {
    let tg = extend_for_signature(sig)?;
    let phi = ControlTypeMap::new(sig);

    if let Some(n) = g.nodes().iter().find(|n| g.node_type(n) == Some(B_NODE)) {
        return Err(DecodeError::UntypedControl(n.clone()));
    }
    let mut report = check_typing(g, &tg);
    if report.is_empty() {
        report.extend(check_validity(g, &tg));
        report.extend(check_multiplicities(g, &tg));
        report.extend(check_arity_rule(g, &tg, sig));
    }
    if !report.is_empty() {
        return Err(DecodeError::InvalidGraph(report));
    }

    // Pass 1: identify every graph node as a bigraph element.
    let mut map = ElementMap::new();
    let mut roots = BTreeMap::new();
    let mut sites = BTreeMap::new();
    let mut builder = Bigraph::builder(sig.clone());
    let mut inner_names = Vec::new();
    let mut outer_names = Vec::new();
    let mut ports: Vec<(String, String)> = Vec::new();

    for n in g.nodes() {
        let ty = g.node_type(n).unwrap_or_default();
        let element = match ty {
            B_ROOT => {
                let i = index_attr(g, n)?;
                roots.insert(i, n.clone());
                Element::Root(i)
            }
            B_SITE => {
                let i = index_attr(g, n)?;
                sites.insert(i, n.clone());
                Element::Site(i)
            }
            B_EDGE => {
                let e = strip(n, "e:").to_string();
                builder.edges.insert(e.clone());
                Element::Edge(e)
            }
            B_INNER_NAME => {
                let x = strip(n, "x:").to_string();
                inner_names.push(x.clone());
                Element::InnerName(x)
            }
            B_OUTER_NAME => {
                let y = strip(n, "y:").to_string();
                outer_names.push(y.clone());
                Element::OuterName(y)
            }
            B_PORT => {
                ports.push((n.clone(), single_target(g, n, NODE)?.to_string()));
                continue;
            }
            t => match phi.control_of(t) {
                Some(control) => {
                    let v = strip(n, "n:").to_string();
                    builder = builder.node(v.clone(), control);
                    Element::Node(v)
                }
                None => {
                    return Err(DecodeError::NotCanonical(format!(
                        "node `{n}` has non-canonical type `{t}`"
                    )))
                }
            },
        };
        map.insert(element, n.clone()).map_err(|_| {
            DecodeError::NotCanonical(format!("node `{n}` duplicates a bigraph element"))
        })?;
    }

    let mut port_indices: BTreeMap<&str, BTreeMap<usize, String>> = BTreeMap::new();
    for (port, owner) in &ports {
        let Some(Element::Node(v)) = map.preimage(owner) else {
            return Err(DecodeError::NotCanonical(format!(
                "port `{port}` is not owned by a bigraph node"
            )));
        };
        let i = index_attr(g, port)?;
        let per_node = port_indices.entry(owner.as_str()).or_default();
        if per_node.insert(i, port.clone()).is_some() {
            return Err(DecodeError::NotCanonical(format!(
                "duplicate port index {i} on `{owner}`"
            )));
        }
        let element = Element::Port(Port::new(v.clone(), i));
        map.insert(element, port.clone()).map_err(|_| {
            DecodeError::NotCanonical(format!("port `{port}` duplicates a bigraph element"))
        })?;
    }
    for (owner, indices) in &port_indices {
        gap_free(&format!("port (on `{owner}`)"), indices, indices.len())?;
    }
    gap_free("root", &roots, roots.len())?;
    gap_free("site", &sites, sites.len())?;

    builder = builder
        .inner(sites.len(), inner_names)
        .outer(roots.len(), outer_names);

    // Pass 2: parent and link maps.
    for n in g.nodes() {
        let Some(element) = map.preimage(n) else {
            continue;
        };
        match element {
            Element::Node(_) | Element::Site(_) => {
                let place = match element {
                    Element::Node(v) => Place::Node(v.clone()),
                    Element::Site(i) => Place::Site(*i),
                    _ => unreachable!(),
                };
                let target = single_target(g, n, PRNT)?;
                let parent = match map.preimage(target) {
                    Some(Element::Node(v)) => Parent::Node(v.clone()),
                    Some(Element::Root(i)) => Parent::Root(*i),
                    _ => {
                        return Err(DecodeError::NotCanonical(format!(
                            "parent `{target}` of `{n}` is neither a node nor a root"
                        )))
                    }
                };
                builder = builder.parent(place, parent);
            }
            Element::Root(_) => {
                if g.outgoing(n, PRNT).next().is_some() {
                    return Err(DecodeError::NotCanonical(format!(
                        "root `{n}` has a parent"
                    )));
                }
            }
            Element::Port(_) | Element::InnerName(_) => {
                let point = match element {
                    Element::Port(p) => Point::Port(p.clone()),
                    Element::InnerName(x) => Point::InnerName(x.clone()),
                    _ => unreachable!(),
                };
                let target = single_target(g, n, LINK)?;
                let link = match map.preimage(target) {
                    Some(Element::Edge(e)) => Link::Edge(e.clone()),
                    Some(Element::OuterName(y)) => Link::OuterName(y.clone()),
                    _ => {
                        return Err(DecodeError::NotCanonical(format!(
                            "link target `{target}` of `{n}` is neither an edge nor an outer name"
                        )))
                    }
                };
                builder = builder.link(point, link);
            }
            Element::Edge(_) | Element::OuterName(_) => {}
        }
    }

    let b = builder.build();
    let invalid = validate_bigraph(&b);
    if !invalid.is_empty() {
        return Err(DecodeError::NotCanonical(format!(
            "decoded bigraph is invalid: {}",
            invalid.findings()[0]
        )));
    }
    let soundness = check_soundness(&b, g, &map);
    if !soundness.is_empty() {
        return Err(DecodeError::InvalidGraph(soundness));
    }
    Ok((b, map))
}

/// Every check that applies to a claimed encoding over `sig`: typing,
/// validity, multiplicities and the arity rule against the extended type
/// graph, then decoding with the soundness criteria.
pub fn check_encoding(g: &InstanceGraph, sig: &Signature) -> ValidationReport {
    let mut report = ValidationReport::new();
    let tg = match extend_for_signature(sig) {
        Ok(tg) => tg,
        Err(e) => {
            report.error("signature", "signature", e.to_string());
            return report;
        }
    };
    report.extend(check_typing(g, &tg));
    report.extend(check_validity(g, &tg));
    report.extend(check_multiplicities(g, &tg));
    report.extend(check_arity_rule(g, &tg, sig));
    if !report.is_empty() {
        return report;
    }
    match decode(g, sig) {
        Ok(_) => {}
        Err(DecodeError::InvalidGraph(r)) => report.extend(r),
        Err(DecodeError::UntypedControl(n)) => report.error(
            "untyped-control",
            n,
            "node typed by the generic BNode type; controls must be node types",
        ),
        Err(DecodeError::NotCanonical(m)) => report.error("not-canonical", "graph", m),
        Err(DecodeError::Signature(e)) => report.error("signature", "signature", e.to_string()),
    }
    report
}

/// Checks proper typing and the five alignment criteria between `b` and `g`
/// under `map`: nesting and linking coincidence (in both quantifier
/// directions) and index consistency for roots, sites and ports.
pub fn check_soundness(b: &Bigraph, g: &InstanceGraph, map: &ElementMap) -> ValidationReport {
    let mut report = ValidationReport::new();
    let elements = elements_of(b);

    // The map itself must be a bijection between elements(b) and G_N.
    for element in &elements {
        match map.image(element) {
            None => report.error(
                "map-not-total",
                element.graph_id(),
                format!("{element} has no image in the instance graph"),
            ),
            Some(n) if !g.contains_node(n) => report.error(
                "map-dangling",
                format!("node:{n}"),
                format!("{element} is mapped to absent node `{n}`"),
            ),
            Some(_) => {}
        }
    }
    for (element, n) in map.iter() {
        if !elements.contains(element) {
            report.error(
                "map-extraneous",
                format!("node:{n}"),
                format!("map domain contains {element}, which is not an element of the bigraph"),
            );
        }
    }
    for n in g.nodes() {
        if map.preimage(n).is_none() {
            report.error(
                "map-not-surjective",
                format!("node:{n}"),
                "instance-graph node has no bigraph preimage",
            );
        }
    }

    // Proper typing.
    for n in g.nodes() {
        let Some(element) = map.preimage(n) else {
            continue;
        };
        let actual = g.node_type(n);
        let expected = element.expected_type(b);
        if actual.map(str::to_string) != expected {
            report.error(
                "soundness-typing",
                format!("node:{n}"),
                format!(
                    "improper typing: {element} must be typed `{}`, found `{}`",
                    expected.as_deref().unwrap_or("?"),
                    actual.unwrap_or("?")
                ),
            );
        }
    }

    let typed_edges = |edge_type: &str| -> BTreeSet<(&str, &str)> {
        g.edges()
            .iter()
            .filter(|(e, _)| g.edge_type(e) == Some(edge_type))
            .map(|(_, ends)| (ends.src.as_str(), ends.tgt.as_str()))
            .collect()
    };

    // Nesting
    let prnt_edges = typed_edges(PRNT);
    for (place, parent) in b.prnt() {
        let (child_el, parent_el) = (Element::of_place(place), Element::of_parent(parent));
        let found = match (map.image(&child_el), map.image(&parent_el)) {
            (Some(c), Some(p)) => prnt_edges.contains(&(c, p)),
            _ => false,
        };
        if !found {
            report.error(
                "soundness-nesting",
                child_el.graph_id(),
                format!(
                    "nesting, direction bigraph→graph: no `{PRNT}` edge from {child_el} to {parent_el}"
                ),
            );
        }
    }
    for (src, tgt) in &prnt_edges {
        let ok = match map.preimage(src) {
            Some(el @ (Element::Node(_) | Element::Site(_))) => {
                let place = match el {
                    Element::Node(v) => Place::Node(v.clone()),
                    Element::Site(i) => Place::Site(*i),
                    _ => unreachable!(),
                };
                b.parent_of(&place)
                    .and_then(|p| map.image(&Element::of_parent(p)))
                    == Some(*tgt)
            }
            _ => false,
        };
        if !ok {
            report.error(
                "soundness-nesting",
                format!("node:{src}"),
                format!(
                    "nesting, direction graph→bigraph: `{PRNT}` edge {src} -> {tgt} has no counterpart in the parent map"
                ),
            );
        }
    }

    // Linking
    let link_edges = typed_edges(LINK);
    for (point, link) in b.link() {
        let (point_el, link_el) = (Element::of_point(point), Element::of_link(link));
        let found = match (map.image(&point_el), map.image(&link_el)) {
            (Some(p), Some(l)) => link_edges.contains(&(p, l)),
            _ => false,
        };
        if !found {
            report.error(
                "soundness-linking",
                point_el.graph_id(),
                format!(
                    "linking, direction bigraph→graph: no `{LINK}` edge from {point_el} to {link_el}"
                ),
            );
        }
    }
    for (src, tgt) in &link_edges {
        let ok = match map.preimage(src) {
            Some(el @ (Element::Port(_) | Element::InnerName(_))) => {
                let point = match el {
                    Element::Port(p) => Point::Port(p.clone()),
                    Element::InnerName(x) => Point::InnerName(x.clone()),
                    _ => unreachable!(),
                };
                b.link_of(&point)
                    .and_then(|l| map.image(&Element::of_link(l)))
                    == Some(*tgt)
            }
            _ => false,
        };
        if !ok {
            report.error(
                "soundness-linking",
                format!("node:{src}"),
                format!(
                    "linking, direction graph→bigraph: `{LINK}` edge {src} -> {tgt} has no counterpart in the link map"
                ),
            );
        }
    }

    // Root and site indices: for every index i and every node of the kind,
    // (i ↦ n) ∈ φ  ⟺  n.index = i
    let index_of = |n: &str| g.attr(n, INDEX).and_then(AttrValue::as_int);
    let mut check_indices = |code: &'static str,
                             criterion: &str,
                             width: usize,
                             node_type: &str,
                             element: fn(usize) -> Element| {
        let candidates: Vec<&str> = g.nodes_of_type(node_type).collect();
        for i in 0..width {
            let image = map.image(&element(i));
            for &n in &candidates {
                let mapped = image == Some(n);
                let indexed = index_of(n) == Some(i as i64);
                if mapped != indexed {
                    report.error(
                        code,
                        format!("node:{n}"),
                        format!(
                            "{criterion}: {} is {}mapped to `{n}` but `{n}`.index is {}",
                            element(i),
                            if mapped { "" } else { "not " },
                            index_of(n).map_or("unset".to_string(), |v| v.to_string())
                        ),
                    );
                }
            }
        }
    };
    check_indices(
        "soundness-root-index",
        "root index",
        b.outer().width,
        B_ROOT,
        Element::Root,
    );
    check_indices(
        "soundness-site-index",
        "site index",
        b.inner().width,
        B_SITE,
        Element::Site,
    );

    // Port indices: n ranges over the images of the same node's ports
    let ports = ports_of(b);
    for port in &ports {
        let arity = b.arity_of(&port.node).unwrap_or(0);
        let image = map.image(&Element::Port(port.clone()));
        for j in 0..arity {
            let Some(n) = map.image(&Element::Port(Port::new(port.node.as_str(), j))) else {
                continue;
            };
            let mapped = image == Some(n);
            let indexed = index_of(n) == Some(port.index as i64);
            if mapped != indexed {
                report.error(
                    "soundness-port-index",
                    format!("node:{n}"),
                    format!(
                        "port index: port {port} is {}mapped to `{n}` but `{n}`.index is {}",
                        if mapped { "" } else { "not " },
                        index_of(n).map_or("unset".to_string(), |v| v.to_string())
                    ),
                );
            }
        }
    }

    report
}
