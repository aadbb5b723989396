#![allow(dead_code)]

use std::path::PathBuf;

use bigraph_emof::{make_signature, Bigraph, Parent, Signature};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn printer_signature() -> Signature {
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

/// The office example: a spool and two rooms under one root, the printer
/// wired to the spool and the computer, the user linked to `jeff`.
pub fn printer() -> Bigraph {
    Bigraph::builder(printer_signature())
        .inner(2, Vec::<String>::new())
        .outer(1, ["jeff"])
        .node("spool", "Spool")
        .node("room1", "Room")
        .node("room2", "Room")
        .node("printer", "Printer")
        .node("computer", "Computer")
        .node("user", "User")
        .node("job", "Job")
        .edge("e0")
        .edge("e1")
        .edge("e2")
        .in_root("spool", 0)
        .in_root("room1", 0)
        .in_root("room2", 0)
        .nest("printer", "room1")
        .nest("computer", "room1")
        .nest("user", "room2")
        .nest("job", "user")
        .site(0, Parent::Node("room1".into()))
        .site(1, Parent::Node("spool".into()))
        .port_to_edge("room1", 0, "e0")
        .port_to_edge("room2", 0, "e0")
        .port_to_edge("printer", 0, "e1")
        .port_to_edge("spool", 0, "e1")
        .port_to_edge("printer", 1, "e2")
        .port_to_edge("computer", 0, "e2")
        .port_to_outer("user", 0, "jeff")
        .build_checked()
        .unwrap()
}
