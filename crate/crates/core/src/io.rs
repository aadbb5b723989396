//! JSON document envelopes for signatures, bigraphs, type graphs, instance
//! graphs and feature configurations.
//!
//! Every file has the shape `{"formatVersion": "1.0", "kind": ..., "payload": ...}`.
//! Output is canonical: object keys sorted, two-space indentation, trailing
//! newline, and every list in a fixed order. Loading a canonical file and
//! saving it again reproduces the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bigraph::{
    Bigraph, Control, Interface, Link, Parent, Place, Point, Port, Signature, SignatureError,
};
use crate::typegraph::{AttrValue, DataType, InstanceGraph, Multiplicity, TypeGraph};
use crate::variability::{Feature, FeatureConfig};

pub const FORMAT_VERSION: &str = "1.0";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl IoError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// JSON pointer of the offending field, for schema errors.
    pub fn pointer(&self) -> Option<&str> {
        match self {
            IoError::Schema { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Signature,
    Bigraph,
    TypeGraph,
    InstanceGraph,
    FeatureConfig,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Signature,
        Kind::Bigraph,
        Kind::TypeGraph,
        Kind::InstanceGraph,
        Kind::FeatureConfig,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Signature => "signature",
            Kind::Bigraph => "bigraph",
            Kind::TypeGraph => "typegraph",
            Kind::InstanceGraph => "instancegraph",
            Kind::FeatureConfig => "featureconfig",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Signature(Signature),
    Bigraph(Bigraph),
    TypeGraph(TypeGraph),
    InstanceGraph(InstanceGraph),
    FeatureConfig(FeatureConfig),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Signature(_) => Kind::Signature,
            Document::Bigraph(_) => Kind::Bigraph,
            Document::TypeGraph(_) => Kind::TypeGraph,
            Document::InstanceGraph(_) => Kind::InstanceGraph,
            Document::FeatureConfig(_) => Kind::FeatureConfig,
        }
    }
}

// ---------------------------------------------------------------------------
// Wire format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct Envelope {
    format_version: String,
    kind: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDto {
    controls: Vec<ControlDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDto {
    name: String,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterfaceDto {
    width: usize,
    names: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
enum PlaceDto {
    Site(usize),
    Node(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
enum ParentDto {
    Root(usize),
    Node(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
enum PointDto {
    InnerName(String),
    Port((String, usize)),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
enum LinkDto {
    Edge(String),
    OuterName(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrntDto {
    child: PlaceDto,
    parent: ParentDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkEntryDto {
    point: PointDto,
    link: LinkDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BigraphDto {
    signature: SignatureDto,
    nodes: Vec<String>,
    edges: Vec<String>,
    ctrl: BTreeMap<String, String>,
    prnt: Vec<PrntDto>,
    link: Vec<LinkEntryDto>,
    inner: InterfaceDto,
    outer: InterfaceDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeTypeDto {
    name: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
enum Star {
    #[serde(rename = "*")]
    Star,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum UpperDto {
    Bounded(u32),
    Unbounded(Star),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiplicityDto {
    lower: u32,
    upper: UpperDto,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DataTypeDto {
    Int,
    String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct TypeGraphDto {
    node_types: Vec<String>,
    edge_types: Vec<EdgeTypeDto>,
    inherits: Vec<(String, String)>,
    abstracts: Vec<String>,
    containments: Vec<String>,
    opposites: Vec<(String, String)>,
    multiplicities: BTreeMap<String, MultiplicityDto>,
    attributes: BTreeMap<String, BTreeMap<String, DataTypeDto>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AttrDto {
    Int(i64),
    Str(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDto {
    id: String,
    #[serde(rename = "type")]
    ty: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attrs: BTreeMap<String, AttrDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDto {
    id: String,
    #[serde(rename = "type")]
    ty: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceGraphDto {
    nodes: Vec<NodeDto>,
    edges: Vec<EdgeDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureConfigDto {
    selected: Vec<String>,
}

// ---------------------------------------------------------------------------
// Model -> wire

fn signature_dto(sig: &Signature) -> SignatureDto {
    SignatureDto {
        controls: sig
            .controls()
            .map(|(c, arity)| ControlDto {
                name: c.to_string(),
                arity,
            })
            .collect(),
    }
}

fn interface_dto(i: &Interface) -> InterfaceDto {
    InterfaceDto {
        width: i.width,
        names: i.names.clone(),
    }
}

fn bigraph_dto(b: &Bigraph) -> BigraphDto {
    BigraphDto {
        signature: signature_dto(b.signature()),
        nodes: b.nodes().iter().cloned().collect(),
        edges: b.edges().iter().cloned().collect(),
        ctrl: b
            .ctrl()
            .iter()
            .map(|(v, c)| (v.clone(), c.to_string()))
            .collect(),
        prnt: b
            .prnt()
            .iter()
            .map(|(child, parent)| PrntDto {
                child: match child {
                    Place::Site(i) => PlaceDto::Site(*i),
                    Place::Node(v) => PlaceDto::Node(v.clone()),
                },
                parent: match parent {
                    Parent::Root(i) => ParentDto::Root(*i),
                    Parent::Node(v) => ParentDto::Node(v.clone()),
                },
            })
            .collect(),
        link: b
            .link()
            .iter()
            .map(|(point, link)| LinkEntryDto {
                point: match point {
                    Point::InnerName(x) => PointDto::InnerName(x.clone()),
                    Point::Port(p) => PointDto::Port((p.node.clone(), p.index)),
                },
                link: match link {
                    Link::Edge(e) => LinkDto::Edge(e.clone()),
                    Link::OuterName(y) => LinkDto::OuterName(y.clone()),
                },
            })
            .collect(),
        inner: interface_dto(b.inner()),
        outer: interface_dto(b.outer()),
    }
}

fn typegraph_dto(tg: &TypeGraph) -> TypeGraphDto {
    TypeGraphDto {
        node_types: tg.node_types().iter().cloned().collect(),
        edge_types: tg
            .edge_types()
            .iter()
            .map(|(name, ends)| EdgeTypeDto {
                name: name.clone(),
                source: ends.src.clone(),
                target: ends.tgt.clone(),
            })
            .collect(),
        inherits: tg.inherits().iter().cloned().collect(),
        abstracts: tg.abstracts().iter().cloned().collect(),
        containments: tg.containments().iter().cloned().collect(),
        opposites: tg.opposites().iter().cloned().collect(),
        multiplicities: tg
            .multiplicities()
            .iter()
            .map(|(name, m)| {
                let upper = match m.upper {
                    Some(u) => UpperDto::Bounded(u),
                    None => UpperDto::Unbounded(Star::Star),
                };
                (
                    name.clone(),
                    MultiplicityDto {
                        lower: m.lower,
                        upper,
                    },
                )
            })
            .collect(),
        attributes: tg
            .attr_decls()
            .iter()
            .map(|(t, attrs)| {
                let attrs = attrs
                    .iter()
                    .map(|(a, dt)| {
                        let dt = match dt {
                            DataType::Int => DataTypeDto::Int,
                            DataType::String => DataTypeDto::String,
                        };
                        (a.clone(), dt)
                    })
                    .collect();
                (t.clone(), attrs)
            })
            .collect(),
    }
}

fn instance_dto(g: &InstanceGraph) -> InstanceGraphDto {
    InstanceGraphDto {
        nodes: g
            .nodes()
            .iter()
            .map(|id| NodeDto {
                id: id.clone(),
                ty: g.node_type(id).unwrap_or_default().to_string(),
                attrs: g
                    .attrs()
                    .get(id)
                    .map(|m| {
                        m.iter()
                            .map(|(k, v)| {
                                let v = match v {
                                    AttrValue::Int(i) => AttrDto::Int(*i),
                                    AttrValue::Str(s) => AttrDto::Str(s.clone()),
                                };
                                (k.clone(), v)
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|(id, ends)| EdgeDto {
                id: id.clone(),
                ty: g.edge_type(id).unwrap_or_default().to_string(),
                src: ends.src.clone(),
                tgt: ends.tgt.clone(),
            })
            .collect(),
    }
}

fn config_dto(cfg: &FeatureConfig) -> FeatureConfigDto {
    FeatureConfigDto {
        selected: cfg
            .selected()
            .iter()
            .map(|f| f.name().to_string())
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Wire -> model

fn pointer_of(path: &serde_path_to_error::Path, prefix: &str) -> String {
    use serde_path_to_error::Segment;
    let mut out = prefix.to_string();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, IoError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = pointer_of(e.path(), prefix);
        IoError::schema(path, e.into_inner().to_string())
    })
}

fn signature_from(dto: SignatureDto, at: &str) -> Result<Signature, IoError> {
    let position = |name: &str| {
        dto.controls
            .iter()
            .position(|c| c.name == name)
            .map(|i| format!("{at}/controls/{i}/name"))
            .unwrap_or_else(|| format!("{at}/controls"))
    };
    let pairs: Vec<(String, usize)> = dto
        .controls
        .iter()
        .map(|c| (c.name.clone(), c.arity))
        .collect();
    Signature::new(pairs).map_err(|e| {
        let path = match &e {
            SignatureError::DuplicateControl(n) => {
                // Point at the second occurrence.
                let first = dto.controls.iter().position(|c| &c.name == n).unwrap_or(0);
                let second = dto
                    .controls
                    .iter()
                    .skip(first + 1)
                    .position(|c| &c.name == n);
                second
                    .map(|i| format!("{at}/controls/{}/name", first + 1 + i))
                    .unwrap_or_else(|| position(n))
            }
            SignatureError::ReservedControlName(n) => position(n),
            SignatureError::EmptyControlName => position(""),
        };
        IoError::schema(path, e.to_string())
    })
}

fn bigraph_from(dto: BigraphDto) -> Result<Bigraph, IoError> {
    let sig = signature_from(dto.signature, "/payload/signature")?;
    for (v, c) in &dto.ctrl {
        if !sig.contains(c) {
            return Err(IoError::schema(
                format!("/payload/ctrl/{v}"),
                format!("control `{c}` is not declared in the signature"),
            ));
        }
    }
    let mut builder = Bigraph::builder(sig);
    builder.nodes = dto.nodes.into_iter().collect();
    builder.edges = dto.edges.into_iter().collect();
    for (v, c) in dto.ctrl {
        builder.ctrl.insert(v, Control::new(c));
    }
    for (i, entry) in dto.prnt.into_iter().enumerate() {
        let child = match entry.child {
            PlaceDto::Site(s) => Place::Site(s),
            PlaceDto::Node(v) => Place::Node(v),
        };
        let parent = match entry.parent {
            ParentDto::Root(r) => Parent::Root(r),
            ParentDto::Node(v) => Parent::Node(v),
        };
        if builder.prnt.insert(child.clone(), parent).is_some() {
            return Err(IoError::schema(
                format!("/payload/prnt/{i}/child"),
                format!("duplicate parent entry for {child}"),
            ));
        }
    }
    for (i, entry) in dto.link.into_iter().enumerate() {
        let point = match entry.point {
            PointDto::InnerName(x) => Point::InnerName(x),
            PointDto::Port((v, j)) => Point::Port(Port::new(v, j)),
        };
        let link = match entry.link {
            LinkDto::Edge(e) => Link::Edge(e),
            LinkDto::OuterName(y) => Link::OuterName(y),
        };
        if builder.link.insert(point.clone(), link).is_some() {
            return Err(IoError::schema(
                format!("/payload/link/{i}/point"),
                format!("duplicate link entry for {point}"),
            ));
        }
    }
    builder.inner = Interface::new(dto.inner.width, dto.inner.names);
    builder.outer = Interface::new(dto.outer.width, dto.outer.names);
    Ok(builder.build())
}

fn typegraph_from(dto: TypeGraphDto) -> TypeGraph {
    let mut tg = TypeGraph::new();
    for t in dto.node_types {
        tg.add_node_type(t);
    }
    for e in dto.edge_types {
        tg.add_edge_type(e.name, e.source, e.target);
    }
    for (sub, sup) in dto.inherits {
        tg.add_inheritance(sub, sup);
    }
    for t in dto.abstracts {
        tg.set_abstract(t);
    }
    for e in dto.containments {
        tg.set_containment(e);
    }
    for (a, b) in dto.opposites {
        tg.add_opposite_directed(a, b);
    }
    for (e, m) in dto.multiplicities {
        let upper = match m.upper {
            UpperDto::Bounded(u) => Some(u),
            UpperDto::Unbounded(_) => None,
        };
        tg.set_multiplicity(e, Multiplicity::new(m.lower, upper));
    }
    for (t, attrs) in dto.attributes {
        for (a, dt) in attrs {
            let dt = match dt {
                DataTypeDto::Int => DataType::Int,
                DataTypeDto::String => DataType::String,
            };
            tg.declare_attr(t.clone(), a, dt);
        }
    }
    tg
}

fn instance_from(dto: InstanceGraphDto) -> Result<InstanceGraph, IoError> {
    let mut g = InstanceGraph::new();
    for (i, n) in dto.nodes.into_iter().enumerate() {
        if g.contains_node(&n.id) {
            return Err(IoError::schema(
                format!("/payload/nodes/{i}/id"),
                format!("duplicate node id `{}`", n.id),
            ));
        }
        g.add_node(n.id.clone(), n.ty);
        for (k, v) in n.attrs {
            let v = match v {
                AttrDto::Int(x) => AttrValue::Int(x),
                AttrDto::Str(s) => AttrValue::Str(s),
            };
            g.set_attr(&n.id, k, v);
        }
    }
    for (i, e) in dto.edges.into_iter().enumerate() {
        if g.edge_type(&e.id).is_some() {
            return Err(IoError::schema(
                format!("/payload/edges/{i}/id"),
                format!("duplicate edge id `{}`", e.id),
            ));
        }
        g.add_edge(e.id, e.ty, e.src, e.tgt);
    }
    Ok(g)
}

fn config_from(dto: FeatureConfigDto) -> Result<FeatureConfig, IoError> {
    let mut selected = Vec::new();
    for (i, name) in dto.selected.iter().enumerate() {
        let f: Feature = name
            .parse()
            .map_err(|e: crate::variability::VariabilityError| {
                IoError::schema(format!("/payload/selected/{i}"), e.to_string())
            })?;
        selected.push(f);
    }
    Ok(FeatureConfig::new(selected))
}

// ---------------------------------------------------------------------------
// Public API

/// Canonical text of a document.
pub fn to_string(doc: &Document) -> String {
    let payload = match doc {
        Document::Signature(s) => serde_json::to_value(signature_dto(s)),
        Document::Bigraph(b) => serde_json::to_value(bigraph_dto(b)),
        Document::TypeGraph(tg) => serde_json::to_value(typegraph_dto(tg)),
        Document::InstanceGraph(g) => serde_json::to_value(instance_dto(g)),
        Document::FeatureConfig(c) => serde_json::to_value(config_dto(c)),
    }
    .expect("wire types always serialize");
    let envelope = Envelope {
        format_version: FORMAT_VERSION.to_string(),
        kind: doc.kind().as_str().to_string(),
        payload,
    };
    // serde_json maps are ordered by key, so going through `Value` sorts every object.
    let value = serde_json::to_value(envelope).expect("envelope always serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("values always serialize");
    text.push('\n');
    text
}

pub fn from_str(text: &str) -> Result<Document, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let envelope: Envelope = from_value(value, "")?;
    if envelope.format_version != FORMAT_VERSION {
        return Err(IoError::schema(
            "/formatVersion",
            format!(
                "unsupported format version `{}`, expected `{FORMAT_VERSION}`",
                envelope.format_version
            ),
        ));
    }
    let Some(kind) = Kind::ALL.into_iter().find(|k| k.as_str() == envelope.kind) else {
        return Err(IoError::schema(
            "/kind",
            format!("unknown document kind `{}`", envelope.kind),
        ));
    };
    let payload = envelope.payload;
    let at = "/payload";
    Ok(match kind {
        Kind::Signature => Document::Signature(signature_from(from_value(payload, at)?, at)?),
        Kind::Bigraph => Document::Bigraph(bigraph_from(from_value(payload, at)?)?),
        Kind::TypeGraph => Document::TypeGraph(typegraph_from(from_value(payload, at)?)),
        Kind::InstanceGraph => Document::InstanceGraph(instance_from(from_value(payload, at)?)?),
        Kind::FeatureConfig => Document::FeatureConfig(config_from(from_value(payload, at)?)?),
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<Document, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_str(&text)
}

pub fn save(doc: &Document, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, to_string(doc)).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn expect_kind(doc: Document, want: Kind) -> Result<Document, IoError> {
    if doc.kind() == want {
        Ok(doc)
    } else {
        Err(IoError::schema(
            "/kind",
            format!("expected a {want} document, found {}", doc.kind()),
        ))
    }
}

macro_rules! typed_loader {
    ($name:ident, $kind:ident, $ty:ty) => {
        pub fn $name(path: impl AsRef<Path>) -> Result<$ty, IoError> {
            match expect_kind(load(path)?, Kind::$kind)? {
                Document::$kind(x) => Ok(x),
                _ => unreachable!(),
            }
        }
    };
}

typed_loader!(load_signature, Signature, Signature);
typed_loader!(load_bigraph, Bigraph, Bigraph);
typed_loader!(load_typegraph, TypeGraph, TypeGraph);
typed_loader!(load_instance_graph, InstanceGraph, InstanceGraph);
typed_loader!(load_feature_config, FeatureConfig, FeatureConfig);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::make_signature;

    #[test]
    fn signature_keeps_declaration_order() {
        let sig = make_signature([("Zeta", 1), ("Alpha", 0)]).unwrap();
        let text = to_string(&Document::Signature(sig.clone()));
        assert!(text.find("Zeta").unwrap() < text.find("Alpha").unwrap());
        assert_eq!(from_str(&text).unwrap(), Document::Signature(sig));
    }

    #[test]
    fn signature_payload_under_bigraph_kind_is_rejected() {
        let sig = make_signature([("A", 1)]).unwrap();
        let text = to_string(&Document::Signature(sig)).replace("\"signature\"", "\"bigraph\"");
        let err = from_str(&text).unwrap_err();
        assert!(err.pointer().unwrap().starts_with("/payload"), "{err}");
    }

    #[test]
    fn unknown_field_is_reported_with_pointer() {
        let text = r#"{"formatVersion":"1.0","kind":"signature","payload":{"controls":[{"name":"A","arity":1,"colour":"red"}]}}"#;
        let err = from_str(text).unwrap_err();
        assert_eq!(err.pointer(), Some("/payload/controls/0/colour"), "{err}");
    }

    #[test]
    fn reserved_control_name_points_at_entry() {
        let text = r#"{"formatVersion":"1.0","kind":"signature","payload":{"controls":[{"name":"A","arity":1},{"name":"BNode","arity":0}]}}"#;
        assert_eq!(
            from_str(text).unwrap_err().pointer(),
            Some("/payload/controls/1/name")
        );
    }

    #[test]
    fn unbounded_multiplicity_is_a_star() {
        let mut tg = TypeGraph::new();
        tg.add_node_type("A")
            .add_edge_type("e", "A", "A")
            .set_multiplicity("e", Multiplicity::at_least(1));
        let text = to_string(&Document::TypeGraph(tg.clone()));
        assert!(text.contains("\"upper\": \"*\""));
        assert_eq!(from_str(&text).unwrap(), Document::TypeGraph(tg));
        let bad = text.replace("\"*\"", "\"many\"");
        assert!(matches!(from_str(&bad), Err(IoError::Schema { .. })));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let text = r#"{"formatVersion":"2.0","kind":"featureconfig","payload":{"selected":[]}}"#;
        assert_eq!(
            from_str(text).unwrap_err().pointer(),
            Some("/formatVersion")
        );
    }

    #[test]
    fn unknown_feature_points_at_entry() {
        let text =
            r#"{"formatVersion":"1.0","kind":"featureconfig","payload":{"selected":["ST","XX"]}}"#;
        assert_eq!(
            from_str(text).unwrap_err().pointer(),
            Some("/payload/selected/1")
        );
    }
}
