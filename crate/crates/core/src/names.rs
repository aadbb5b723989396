//! Node type, edge type and attribute names of the basic type graph.

pub const B_PLACE: &str = "BPlace";
pub const B_ROOT: &str = "BRoot";
pub const B_NODE: &str = "BNode";
pub const B_SITE: &str = "BSite";
pub const B_POINT: &str = "BPoint";
pub const B_LINK: &str = "BLink";
pub const B_PORT: &str = "BPort";
pub const B_INNER_NAME: &str = "BInnerName";
pub const B_EDGE: &str = "BEdge";
pub const B_OUTER_NAME: &str = "BOuterName";

pub const BASE_NODE_TYPES: [&str; 10] = [
    B_PLACE,
    B_ROOT,
    B_NODE,
    B_SITE,
    B_POINT,
    B_LINK,
    B_PORT,
    B_INNER_NAME,
    B_EDGE,
    B_OUTER_NAME,
];

pub const PRNT: &str = "bPrnt";
pub const CHLD: &str = "bChld";
pub const LINK: &str = "bLink";
pub const POINTS: &str = "bPoints";
pub const PORTS: &str = "bPorts";
pub const NODE: &str = "bNode";

pub const BASE_EDGE_TYPES: [&str; 6] = [PRNT, CHLD, LINK, POINTS, PORTS, NODE];

pub const INDEX: &str = "index";
pub const CONTROL: &str = "control";
