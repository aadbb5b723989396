//! Random valid bigraphs for property tests and benchmarks.
//!
//! Generated bigraphs have no idle edges or idle outer names, so every one of
//! them has a canonical encoding.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bigraph::{Bigraph, Link, Parent, Place, Point, Port, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_controls: usize,
    pub max_arity: usize,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_sites: usize,
    pub max_roots: usize,
    pub max_inner_names: usize,
    pub max_outer_names: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_controls: 6,
            max_arity: 4,
            max_nodes: 30,
            max_edges: 10,
            max_sites: 5,
            max_roots: 5,
            max_inner_names: 5,
            max_outer_names: 5,
        }
    }
}

const NAME_POOL: [&str; 8] = ["a", "b", "c", "d", "jeff", "x", "y", "z"];

pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, limits: &Limits) -> Signature {
    let n = rng.gen_range(1..=limits.max_controls.max(1));
    Signature::new((0..n).map(|i| (format!("K{i}"), rng.gen_range(0..=limits.max_arity))))
        .expect("generated control names are distinct and unreserved")
}

/// A random bigraph over `sig`. Inner and outer names are drawn from one pool,
/// so they often coincide.
pub fn random_bigraph<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, limits: &Limits) -> Bigraph {
    let roots = rng.gen_range(0..=limits.max_roots);
    let sites = if roots == 0 {
        0
    } else {
        rng.gen_range(0..=limits.max_sites)
    };
    let node_count = if roots == 0 || sig.is_empty() {
        0
    } else {
        rng.gen_range(0..=limits.max_nodes)
    };
    let controls: Vec<_> = sig.controls().map(|(c, _)| c.to_string()).collect();

    let mut b = Bigraph::builder(sig.clone());
    let nodes: Vec<String> = (0..node_count).map(|i| format!("v{i}")).collect();
    for (i, v) in nodes.iter().enumerate() {
        b = b.node(v.clone(), controls.choose(rng).unwrap().clone());
        // Parents precede children, which keeps the place graph acyclic.
        let parent = if i == 0 || rng.gen_bool(0.3) {
            Parent::Root(rng.gen_range(0..roots))
        } else {
            Parent::Node(nodes[rng.gen_range(0..i)].clone())
        };
        b = b.parent(Place::Node(v.clone()), parent);
    }
    for s in 0..sites {
        let parent = if nodes.is_empty() || rng.gen_bool(0.4) {
            Parent::Root(rng.gen_range(0..roots))
        } else {
            Parent::Node(nodes.choose(rng).unwrap().clone())
        };
        b = b.site(s, parent);
    }

    let inner: Vec<String> = sample_names(rng, limits.max_inner_names);
    let mut outer: Vec<String> = sample_names(rng, limits.max_outer_names);

    let mut points: Vec<Point> = inner.iter().cloned().map(Point::InnerName).collect();
    for v in &nodes {
        let arity = sig.arity(b.ctrl[v].as_str()).unwrap_or(0);
        points.extend((0..arity).map(|i| Point::Port(Port::new(v.clone(), i))));
    }
    points.shuffle(rng);

    // Every link needs at least one point.
    let mut edge_count = rng.gen_range(0..=limits.max_edges);
    if edge_count == 0 && outer.is_empty() && !points.is_empty() {
        edge_count = 1;
    }
    while edge_count + outer.len() > points.len() {
        if edge_count > 0 && (outer.is_empty() || rng.gen_bool(0.5)) {
            edge_count -= 1;
        } else {
            outer.remove(rng.gen_range(0..outer.len()));
        }
    }
    let edges: Vec<String> = (0..edge_count).map(|i| format!("e{i}")).collect();
    let mut links: Vec<Link> = edges.iter().cloned().map(Link::Edge).collect();
    links.extend(outer.iter().cloned().map(Link::OuterName));

    for e in &edges {
        b = b.edge(e.clone());
    }
    for (i, point) in points.into_iter().enumerate() {
        let link = if i < links.len() {
            links[i].clone()
        } else {
            links.choose(rng).unwrap().clone()
        };
        b = b.link(point, link);
    }
    b.inner(sites, inner).outer(roots, outer).build()
}

fn sample_names<R: Rng + ?Sized>(rng: &mut R, max: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max.min(NAME_POOL.len()));
    let mut names: Vec<String> = NAME_POOL
        .choose_multiple(rng, n)
        .map(|s| s.to_string())
        .collect();
    names.sort();
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_bigraphs_are_valid_and_not_idle() {
        let mut rng = StdRng::seed_from_u64(7);
        let limits = Limits::default();
        for _ in 0..300 {
            let sig = random_signature(&mut rng, &limits);
            let b = random_bigraph(&mut rng, &sig, &limits);
            assert!(b.validate().is_empty(), "{}", b.validate());
            assert!(b.idle_links().is_empty());
            assert!(b.nodes().len() <= 30 && b.edges().len() <= 10);
        }
    }
}
