//! Concrete pure bigraphs over basic signatures.
//!
//! A [`Bigraph`] bundles a place graph (the `prnt` map over sites and nodes)
//! and a link graph (the `link` map over inner names and ports) that share one
//! control map. Sites and roots are the integer ranges `0..k` and `0..m` of the
//! inner and outer interface; they have no identity beyond their index.
//!
//! Values are immutable once built. Use [`Bigraph::to_builder`] to derive a
//! modified copy. Construction does not validate; call [`validate_bigraph`]
//! (or [`BigraphBuilder::build_checked`]) to obtain the list of violations.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::report::ValidationReport;

/// Names of the node types of the basic type graph. Controls may not reuse them.
pub const RESERVED_CONTROL_NAMES: [&str; 10] = crate::names::BASE_NODE_TYPES;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate control `{0}`")]
    DuplicateControl(String),
    #[error("control name `{0}` collides with a base node type")]
    ReservedControlName(String),
    #[error("control names must be non-empty")]
    EmptyControlName,
}

#[derive(Debug, Error)]
pub enum BigraphError {
    #[error("invalid bigraph:\n{0}")]
    Invalid(ValidationReport),
}

/// The type of a bigraph node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Control(String);

impl Control {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Control {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A basic signature: an ordered set of controls, each with an arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: IndexMap<Control, usize>,
}

impl Signature {
    pub fn new<I, S>(pairs: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut arities = IndexMap::new();
        for (name, arity) in pairs {
            let name = name.into();
            if name.is_empty() {
                return Err(SignatureError::EmptyControlName);
            }
            if RESERVED_CONTROL_NAMES.contains(&name.as_str()) {
                return Err(SignatureError::ReservedControlName(name));
            }
            if arities.contains_key(name.as_str()) {
                return Err(SignatureError::DuplicateControl(name));
            }
            arities.insert(Control(name), arity);
        }
        Ok(Self { arities })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn arity(&self, control: &str) -> Option<usize> {
        self.arities.get(control).copied()
    }

    pub fn contains(&self, control: &str) -> bool {
        self.arities.contains_key(control)
    }

    /// Controls in declaration order.
    pub fn controls(&self) -> impl Iterator<Item = (&Control, usize)> + '_ {
        self.arities.iter().map(|(c, a)| (c, *a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }
}

/// Builds a signature from `(name, arity)` pairs.
pub fn make_signature<I, S>(pairs: I) -> Result<Signature, SignatureError>
where
    I: IntoIterator<Item = (S, usize)>,
    S: Into<String>,
{
    Signature::new(pairs)
}

/// Inner or outer face: a width (number of sites or roots) and a name set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interface {
    pub width: usize,
    pub names: BTreeSet<String>,
}

impl Interface {
    pub fn new<I, S>(width: usize, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            width,
            names: names.into_iter().map(Into::into).collect(),
        }
    }
}

/// The `index`-th port of `node`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub node: String,
    pub index: usize,
}

impl Port {
    pub fn new(node: impl Into<String>, index: usize) -> Self {
        Self {
            node: node.into(),
            index,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.node, self.index)
    }
}

/// Domain of the parent map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Site(usize),
    Node(String),
}

/// Codomain of the parent map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parent {
    Root(usize),
    Node(String),
}

/// Domain of the link map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    InnerName(String),
    Port(Port),
}

/// Codomain of the link map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    Edge(String),
    OuterName(String),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Site(i) => write!(f, "site:{i}"),
            Place::Node(v) => write!(f, "node:{v}"),
        }
    }
}

impl fmt::Display for Parent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parent::Root(i) => write!(f, "root:{i}"),
            Parent::Node(v) => write!(f, "node:{v}"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::InnerName(x) => write!(f, "inner:{x}"),
            Point::Port(p) => write!(f, "port:{}:{}", p.node, p.index),
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Link::Edge(e) => write!(f, "edge:{e}"),
            Link::OuterName(y) => write!(f, "outer:{y}"),
        }
    }
}

/// A concrete pure bigraph `⟨k, X⟩ → ⟨m, Y⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigraph {
    signature: Signature,
    nodes: BTreeSet<String>,
    edges: BTreeSet<String>,
    ctrl: BTreeMap<String, Control>,
    prnt: BTreeMap<Place, Parent>,
    link: BTreeMap<Point, Link>,
    inner: Interface,
    outer: Interface,
}

impl Bigraph {
    pub fn builder(signature: Signature) -> BigraphBuilder {
        BigraphBuilder::new(signature)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<String> {
        &self.edges
    }

    pub fn ctrl(&self) -> &BTreeMap<String, Control> {
        &self.ctrl
    }

    pub fn control_of(&self, node: &str) -> Option<&Control> {
        self.ctrl.get(node)
    }

    pub fn prnt(&self) -> &BTreeMap<Place, Parent> {
        &self.prnt
    }

    pub fn parent_of(&self, place: &Place) -> Option<&Parent> {
        self.prnt.get(place)
    }

    pub fn link(&self) -> &BTreeMap<Point, Link> {
        &self.link
    }

    pub fn link_of(&self, point: &Point) -> Option<&Link> {
        self.link.get(point)
    }

    pub fn inner(&self) -> &Interface {
        &self.inner
    }

    pub fn outer(&self) -> &Interface {
        &self.outer
    }

    /// Number of ports of `node` as given by its control's arity.
    pub fn arity_of(&self, node: &str) -> Option<usize> {
        self.ctrl
            .get(node)
            .and_then(|c| self.signature.arity(c.as_str()))
    }

    pub fn ports(&self) -> BTreeSet<Port> {
        ports_of(self)
    }

    /// Links that no point is mapped to (idle edges and idle outer names).
    pub fn idle_links(&self) -> Vec<Link> {
        let used: BTreeSet<&Link> = self.link.values().collect();
        self.edges
            .iter()
            .map(|e| Link::Edge(e.clone()))
            .chain(self.outer.names.iter().map(|y| Link::OuterName(y.clone())))
            .filter(|l| !used.contains(l))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_bigraph(self)
    }

    pub fn to_builder(&self) -> BigraphBuilder {
        BigraphBuilder {
            signature: self.signature.clone(),
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            ctrl: self.ctrl.clone(),
            prnt: self.prnt.clone(),
            link: self.link.clone(),
            inner: self.inner.clone(),
            outer: self.outer.clone(),
        }
    }
}

/// Mutable staging area for a [`Bigraph`]. Fields are public so callers (and
/// tests) can assemble deliberately broken values.
#[derive(Clone, Debug, Default)]
pub struct BigraphBuilder {
    pub signature: Signature,
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<String>,
    pub ctrl: BTreeMap<String, Control>,
    pub prnt: BTreeMap<Place, Parent>,
    pub link: BTreeMap<Point, Link>,
    pub inner: Interface,
    pub outer: Interface,
}

impl BigraphBuilder {
    pub fn new(signature: Signature) -> Self {
        Self {
            signature,
            ..Self::default()
        }
    }

    pub fn inner<I, S>(mut self, width: usize, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.inner = Interface::new(width, names);
        self
    }

    pub fn outer<I, S>(mut self, width: usize, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.outer = Interface::new(width, names);
        self
    }

    /// Adds a node with its control.
    pub fn node(mut self, id: impl Into<String>, control: impl Into<String>) -> Self {
        let id = id.into();
        self.ctrl.insert(id.clone(), Control::new(control));
        self.nodes.insert(id);
        self
    }

    pub fn edge(mut self, id: impl Into<String>) -> Self {
        self.edges.insert(id.into());
        self
    }

    pub fn parent(mut self, place: Place, parent: Parent) -> Self {
        self.prnt.insert(place, parent);
        self
    }

    /// Shorthand for `parent(Place::Node(child), Parent::Node(parent))`.
    pub fn nest(self, child: &str, parent: &str) -> Self {
        self.parent(Place::Node(child.into()), Parent::Node(parent.into()))
    }

    pub fn in_root(self, child: &str, root: usize) -> Self {
        self.parent(Place::Node(child.into()), Parent::Root(root))
    }

    pub fn site(self, site: usize, parent: Parent) -> Self {
        self.parent(Place::Site(site), parent)
    }

    pub fn link(mut self, point: Point, link: Link) -> Self {
        self.link.insert(point, link);
        self
    }

    pub fn port_to_edge(self, node: &str, index: usize, edge: &str) -> Self {
        self.link(Point::Port(Port::new(node, index)), Link::Edge(edge.into()))
    }

    pub fn port_to_outer(self, node: &str, index: usize, name: &str) -> Self {
        self.link(
            Point::Port(Port::new(node, index)),
            Link::OuterName(name.into()),
        )
    }

    pub fn build(self) -> Bigraph {
        Bigraph {
            signature: self.signature,
            nodes: self.nodes,
            edges: self.edges,
            ctrl: self.ctrl,
            prnt: self.prnt,
            link: self.link,
            inner: self.inner,
            outer: self.outer,
        }
    }

    pub fn build_checked(self) -> Result<Bigraph, BigraphError> {
        let b = self.build();
        let report = validate_bigraph(&b);
        if report.is_empty() {
            Ok(b)
        } else {
            Err(BigraphError::Invalid(report))
        }
    }
}

/// All ports `(v, i)` with `i < ar(ctrl(v))`. Nodes whose control is missing or
/// undeclared contribute no ports.
pub fn ports_of(b: &Bigraph) -> BTreeSet<Port> {
    b.nodes
        .iter()
        .flat_map(|v| (0..b.arity_of(v).unwrap_or(0)).map(move |i| Port::new(v.as_str(), i)))
        .collect()
}

/// Lists every violated structural invariant of `b`.
pub fn validate_bigraph(b: &Bigraph) -> ValidationReport {
    let mut report = ValidationReport::new();

    for id in b.nodes.intersection(&b.edges) {
        report.error(
            "node-edge-overlap",
            format!("node:{id}"),
            format!("`{id}` is both a node and an edge identifier"),
        );
    }

    // control map
    for v in &b.nodes {
        match b.ctrl.get(v) {
            None => report.error("ctrl-missing", format!("node:{v}"), "node has no control"),
            Some(c) if !b.signature.contains(c.as_str()) => report.error(
                "ctrl-undeclared",
                format!("node:{v}"),
                format!("control `{c}` is not declared in the signature"),
            ),
            Some(_) => {}
        }
    }
    for v in b.ctrl.keys() {
        if !b.nodes.contains(v) {
            report.error(
                "ctrl-domain",
                format!("node:{v}"),
                "control assigned to an undeclared node",
            );
        }
    }

    // parent map: totality, domain, codomain
    let k = b.inner.width;
    let m = b.outer.width;
    let places = (0..k)
        .map(Place::Site)
        .chain(b.nodes.iter().cloned().map(Place::Node));
    for place in places {
        if !b.prnt.contains_key(&place) {
            report.error("prnt-missing", place.to_string(), "place has no parent");
        }
    }
    for (place, parent) in &b.prnt {
        let in_domain = match place {
            Place::Site(i) => *i < k,
            Place::Node(v) => b.nodes.contains(v),
        };
        if !in_domain {
            report.error(
                "prnt-domain",
                place.to_string(),
                "parent assigned to a place outside sites and nodes",
            );
        }
        let in_codomain = match parent {
            Parent::Root(j) => *j < m,
            Parent::Node(v) => b.nodes.contains(v),
        };
        if !in_codomain {
            report.error(
                "prnt-codomain",
                place.to_string(),
                format!("parent map codomain violation: {parent} is neither a node nor a root"),
            );
        }
    }
    for cycle_node in parent_cycles(b) {
        report.error(
            "prnt-cycle",
            format!("node:{cycle_node}"),
            "parent map cyclic",
        );
    }

    // link map: totality, domain, codomain
    let ports = ports_of(b);
    let points = b
        .inner
        .names
        .iter()
        .cloned()
        .map(Point::InnerName)
        .chain(ports.iter().cloned().map(Point::Port));
    for point in points {
        if !b.link.contains_key(&point) {
            report.error("link-missing", point.to_string(), "point is not linked");
        }
    }
    for (point, target) in &b.link {
        let in_domain = match point {
            Point::InnerName(x) => b.inner.names.contains(x),
            Point::Port(p) => ports.contains(p),
        };
        if !in_domain {
            report.error(
                "link-domain",
                point.to_string(),
                "link assigned to a point outside inner names and ports",
            );
        }
        let in_codomain = match target {
            Link::Edge(e) => b.edges.contains(e),
            Link::OuterName(y) => b.outer.names.contains(y),
        };
        if !in_codomain {
            report.error(
                "link-codomain",
                point.to_string(),
                format!("link codomain violation: {target} is neither an edge nor an outer name"),
            );
        }
    }

    report
}

/// One representative (the smallest node id) per cycle of node→node parent steps.
fn parent_cycles(b: &Bigraph) -> Vec<String> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    let mut found = Vec::new();

    for start in &b.nodes {
        if marks.contains_key(start.as_str()) {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut cur = start.as_str();
        loop {
            match marks.get(cur) {
                Some(Mark::Done) => break,
                Some(Mark::Active) => {
                    let pos = path.iter().position(|v| *v == cur).unwrap_or(0);
                    let rep = path[pos..].iter().min().copied().unwrap_or(cur);
                    found.push(rep.to_string());
                    break;
                }
                None => {}
            }
            marks.insert(cur, Mark::Active);
            path.push(cur);
            match b.prnt.get(&Place::Node(cur.to_string())) {
                Some(Parent::Node(p)) if b.nodes.contains(p) => cur = p.as_str(),
                _ => break,
            }
        }
        for v in path {
            marks.insert(v, Mark::Done);
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> Signature {
        make_signature([
            ("Job", 0),
            ("User", 1),
            ("Room", 1),
            ("Spool", 1),
            ("Printer", 2),
            ("Computer", 1),
        ])
        .unwrap()
    }

    #[test]
    fn signature_keeps_declared_arities() {
        let sig = sigma1();
        assert_eq!(sig.len(), 6);
        assert_eq!(sig.arity("Printer"), Some(2));
        assert_eq!(sig.arity("Job"), Some(0));
        let order: Vec<_> = sig.controls().map(|(c, _)| c.as_str()).collect();
        assert_eq!(
            order,
            ["Job", "User", "Room", "Spool", "Printer", "Computer"]
        );
    }

    #[test]
    fn empty_signature() {
        let sig = make_signature(Vec::<(String, usize)>::new()).unwrap();
        assert!(sig.is_empty());
    }

    #[test]
    fn signature_rejects_reserved_and_duplicate_names() {
        assert_eq!(
            make_signature([("BNode", 1)]),
            Err(SignatureError::ReservedControlName("BNode".into()))
        );
        assert_eq!(
            make_signature([("A", 1), ("A", 2)]),
            Err(SignatureError::DuplicateControl("A".into()))
        );
        assert_eq!(
            make_signature([("", 0)]),
            Err(SignatureError::EmptyControlName)
        );
    }

    #[test]
    fn single_printer_has_two_ports() {
        let b = Bigraph::builder(sigma1())
            .outer(1, Vec::<String>::new())
            .node("p", "Printer")
            .in_root("p", 0)
            .edge("e")
            .port_to_edge("p", 0, "e")
            .port_to_edge("p", 1, "e")
            .build();
        let ports: Vec<_> = ports_of(&b).into_iter().collect();
        assert_eq!(ports, [Port::new("p", 0), Port::new("p", 1)]);
        assert!(validate_bigraph(&b).is_empty());
    }

    #[test]
    fn no_nodes_no_ports() {
        let b = Bigraph::builder(sigma1()).build();
        assert!(ports_of(&b).is_empty());
        assert!(validate_bigraph(&b).is_empty());
    }

    #[test]
    fn self_parent_is_a_cycle() {
        let b = Bigraph::builder(sigma1())
            .node("v", "Job")
            .nest("v", "v")
            .build();
        let report = validate_bigraph(&b);
        assert_eq!(report.codes(), ["prnt-cycle"]);
        assert!(report.findings()[0].message.contains("parent map cyclic"));
    }

    #[test]
    fn longer_cycle_reported_once() {
        let b = Bigraph::builder(sigma1())
            .outer(1, Vec::<String>::new())
            .node("a", "Job")
            .node("b", "Job")
            .node("c", "Job")
            .node("d", "Job")
            .nest("a", "b")
            .nest("b", "c")
            .nest("c", "a")
            .nest("d", "a")
            .build();
        let report = validate_bigraph(&b);
        assert_eq!(report.codes(), ["prnt-cycle"]);
        assert_eq!(report.findings()[0].location, "node:a");
    }

    #[test]
    fn link_to_undeclared_outer_name() {
        let b = Bigraph::builder(sigma1())
            .outer(1, ["jeff"])
            .node("u", "User")
            .in_root("u", 0)
            .port_to_outer("u", 0, "bob")
            .build();
        let report = validate_bigraph(&b);
        assert_eq!(report.codes(), ["link-codomain"]);
        assert!(report.findings()[0]
            .message
            .contains("link codomain violation"));
    }

    #[test]
    fn each_violation_is_reported() {
        let b = Bigraph::builder(sigma1())
            .inner(1, ["x"])
            .outer(1, Vec::<String>::new())
            .node("v", "User")
            .node("w", "Desk")
            .edge("v")
            .in_root("w", 3)
            .port_to_edge("v", 5, "v")
            .build();
        let codes = validate_bigraph(&b).codes();
        for code in [
            "node-edge-overlap",
            "ctrl-undeclared",
            "prnt-missing",
            "prnt-codomain",
            "link-missing",
            "link-domain",
        ] {
            assert!(codes.contains(&code), "missing {code} in {codes:?}");
        }
    }

    #[test]
    fn idle_links_are_listed() {
        let b = Bigraph::builder(sigma1()).outer(1, ["y"]).edge("e").build();
        assert_eq!(
            b.idle_links(),
            [Link::Edge("e".into()), Link::OuterName("y".into())]
        );
    }
}
