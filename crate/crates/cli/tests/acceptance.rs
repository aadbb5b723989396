//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use bigraph_emof::constraints::{evaluate, parse_constraints, CheckResult};
use bigraph_emof::generate::{random_bigraph, random_signature, Limits};
use bigraph_emof::io::{self, Document};
use bigraph_emof::mapping::ElementMap;
use bigraph_emof::{
    annotate_150, apply_deltas, check_arity_rule, check_encoding, check_multiplicities,
    check_soundness, check_typing, check_validity, decode, derive_type_graph, encode,
    enumerate_configs, extend_for_signature, validate_config, AttrValue, Bigraph, Feature,
    FeatureConfig, InstanceGraph, Parent, Place, Signature, ValidationReport,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn printer() -> Bigraph {
    io::load_bigraph(fixtures().join("printer.bg.json")).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn all_checkers(b: &Bigraph, map: &ElementMap, g: &InstanceGraph) -> ValidationReport {
    let sig = b.signature();
    let tg = extend_for_signature(sig).unwrap();
    let mut report = check_typing(g, &tg);
    report.extend(check_validity(g, &tg));
    report.extend(check_multiplicities(g, &tg));
    report.extend(check_arity_rule(g, &tg, sig));
    report.extend(check_soundness(b, g, map));
    report
}

fn printer_golden() -> Outcome {
    let start = Instant::now();
    let b = printer();
    let (g, map) = encode(&b).map_err(|e| e.to_string())?;
    let counts = (g.node_count(), g.edge_count());
    ensure(counts == (21, 46), || format!("got {counts:?}"))?;
    let report = all_checkers(&b, &map, &g);
    ensure(report.is_empty(), || report.to_string())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "21 nodes, 46 edges, 5 checkers empty in {:.2?}",
        start.elapsed()
    ))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let limits = Limits::default();
    let (mut max_nodes, mut max_edges) = (0, 0);
    for i in 0..1000 {
        let sig = random_signature(&mut rng, &limits);
        let b = random_bigraph(&mut rng, &sig, &limits);
        max_nodes = max_nodes.max(b.nodes().len());
        max_edges = max_edges.max(b.edges().len());
        let (g, map) = encode(&b).map_err(|e| format!("case {i}: {e}"))?;
        let report = all_checkers(&b, &map, &g);
        ensure(report.is_empty(), || format!("case {i}:\n{report}"))?;
        let (back, _) = decode(&g, &sig).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == b, || format!("case {i}: decode(encode(b)) differs"))?;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "1000 bigraphs (up to {max_nodes} nodes, {max_edges} edges) in {:.2?}",
        start.elapsed()
    ))
}

type Mutation = (
    &'static str,
    fn(&mut InstanceGraph),
    &'static [&'static str],
);

fn mutation_suite() -> [Mutation; 12] {
    [
        (
            "delete a bPrnt edge",
            |g| {
                g.remove_edge("bPrnt:n:printer");
            },
            &["opposite-inconsistency", "soundness-nesting"],
        ),
        (
            "delete its opposite only",
            |g| {
                g.remove_edge("bChld:n:printer");
            },
            &["opposite-inconsistency"],
        ),
        (
            "retype Printer to BNode",
            |g| g.retype_node("n:printer", "BNode"),
            &["soundness-typing"],
        ),
        (
            "change root index 0 to 1",
            |g| g.set_attr("r:0", "index", AttrValue::Int(1)),
            &["soundness-root-index"],
        ),
        (
            "change a site index",
            |g| g.set_attr("s:0", "index", AttrValue::Int(3)),
            &["soundness-site-index"],
        ),
        (
            "change a port index",
            |g| g.set_attr("p:printer:1", "index", AttrValue::Int(0)),
            &["soundness-port-index"],
        ),
        (
            "drop one Printer port",
            |g| {
                g.remove_node("p:printer:1");
            },
            &["arity"],
        ),
        (
            "add a second container",
            |g| {
                g.add_edge("extra:chld", "bChld", "n:spool", "n:printer");
                g.add_edge("extra:prnt", "bPrnt", "n:printer", "n:spool");
            },
            &["multiple-containers"],
        ),
        (
            "create a containment cycle",
            |g| {
                g.remove_edge("bChld:n:room1");
                g.remove_edge("bPrnt:n:room1");
                g.add_edge("cyc:chld", "bChld", "n:printer", "n:room1");
                g.add_edge("cyc:prnt", "bPrnt", "n:room1", "n:printer");
            },
            &["containment-cycle"],
        ),
        (
            "point a bLink at a second BLink",
            |g| {
                g.add_edge("extra:link", "bLink", "p:printer:0", "e:e0");
            },
            &["multiplicity-overflow"],
        ),
        (
            "delete the BRoot",
            |g| {
                g.remove_node("r:0");
            },
            &["map-dangling", "soundness-nesting"],
        ),
        (
            "desynchronize an opposite pair",
            |g| g.set_edge_target("bChld:n:printer", "n:spool"),
            &["opposite-inconsistency"],
        ),
    ]
}

fn mutation_kill() -> Outcome {
    let b = printer();
    let (g, map) = encode(&b).map_err(|e| e.to_string())?;
    ensure(all_checkers(&b, &map, &g).is_empty(), || {
        "unmutated graph fails".into()
    })?;
    let mut killed = 0;
    for (name, mutate, codes) in mutation_suite() {
        let mut h = g.clone();
        mutate(&mut h);
        let report = all_checkers(&b, &map, &h);
        ensure(!report.is_empty(), || format!("{name}: false pass"))?;
        for code in codes {
            ensure(report.has_code(code), || {
                format!("{name}: no {code} finding")
            })?;
        }
        killed += 1;
    }
    Ok(format!("{killed}/12 mutations killed, 0 false passes"))
}

fn configuration_space() -> Outcome {
    let start = Instant::now();
    let configs = enumerate_configs();
    ensure(configs.len() == 54, || {
        format!("enumerated {}", configs.len())
    })?;
    let brute = (0u32..1 << Feature::LEAVES.len())
        .filter(|mask| {
            let cfg = FeatureConfig::new(
                Feature::LEAVES
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, f)| *f),
            );
            validate_config(&cfg).is_empty()
        })
        .count();
    ensure(brute == 54, || format!("brute force found {brute}"))?;

    let b = printer();
    let sig = b.signature();
    let atg = annotate_150(&extend_for_signature(sig).unwrap());
    let (g, _) = encode(&b).map_err(|e| e.to_string())?;
    for cfg in &configs {
        let tg = derive_type_graph(&atg, cfg).map_err(|e| format!("{cfg}: {e}"))?;
        ensure(tg.validate().is_empty(), || {
            format!("{cfg}: {}", tg.validate())
        })?;
        let v = apply_deltas(&g, cfg, sig).map_err(|e| format!("{cfg}: {e}"))?;
        let mut report = check_typing(&v, &tg);
        report.extend(check_validity(&v, &tg));
        report.extend(check_multiplicities(&v, &tg));
        ensure(report.is_empty(), || format!("{cfg}:\n{report}"))?;
        let again = apply_deltas(&v, cfg, sig).map_err(|e| format!("{cfg}: {e}"))?;
        ensure(again == v, || format!("{cfg}: deltas not idempotent"))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "54 configurations, all variants conform, in {:.2?}",
        start.elapsed()
    ))
}

fn delta_spot_checks() -> Outcome {
    let b = printer();
    let sig = b.signature();
    let (g, _) = encode(&b).map_err(|e| e.to_string())?;
    let no_roots = FeatureConfig::parse_list(&["ST", "ES", "SI", "EP", "PI"]).unwrap();
    let v = apply_deltas(&g, &no_roots, sig).map_err(|e| e.to_string())?;
    ensure(v.node_count() == 20, || {
        format!("¬ER: {} nodes", v.node_count())
    })?;
    let removed = g.edge_count() - v.edge_count();
    ensure(removed == 6, || format!("¬ER: {removed} edges removed"))?;

    let weak = FeatureConfig::parse_list(&["WT", "ER", "RI", "ES", "SI", "EP", "PI"]).unwrap();
    let w = apply_deltas(&g, &weak, sig).map_err(|e| e.to_string())?;
    let retyped: Vec<&str> = w.nodes_of_type("BNode").collect();
    ensure(retyped.len() == 7, || {
        format!("WT: {} retyped", retyped.len())
    })?;
    for n in &retyped {
        let former = g.node_type(n).unwrap_or_default();
        ensure(
            w.attr(n, "control") == Some(&AttrValue::Str(former.to_string())),
            || format!("WT: {n} lost its control"),
        )?;
    }
    Ok("¬ER: 21→20 nodes, 6 edges removed; WT: 7 nodes retyped with controls kept".into())
}

fn spool_with_jobs(sig: &Signature, jobs: usize, site: bool) -> Bigraph {
    let mut b = Bigraph::builder(sig.clone())
        .outer(1, Vec::<String>::new())
        .node("spool", "Spool")
        .edge("e")
        .in_root("spool", 0)
        .port_to_edge("spool", 0, "e");
    for i in 0..jobs {
        let j = format!("job{i}");
        b = b.node(j.clone(), "Job").nest(&j, "spool");
    }
    if site {
        b = b
            .inner(1, Vec::<String>::new())
            .site(0, Parent::Node("spool".into()));
    }
    b.build_checked().unwrap()
}

fn constraints() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(fixtures().join("office.bgc")).map_err(|e| e.to_string())?;
    let doc = parse_constraints(&text).map_err(|e| e.to_string())?;
    let b = printer();
    let sig = b.signature().clone();
    let tg = extend_for_signature(&sig).unwrap();
    let run = |b: &Bigraph| -> Result<CheckResult, String> {
        let (g, _) = encode(b).map_err(|e| e.to_string())?;
        evaluate(&doc, &g, &tg).map_err(|e| e.to_string())
    };
    let failed =
        |r: &CheckResult| -> Vec<String> { r.failures().map(|(i, _)| i.name.clone()).collect() };

    let base = run(&b)?;
    ensure(base.all_passed(), || {
        format!("printer fails {:?}", failed(&base))
    })?;

    let mut moved = b.to_builder();
    moved
        .prnt
        .insert(Place::Node("user".into()), Parent::Node("spool".into()));
    let r = run(&moved.build())?;
    ensure(failed(&r) == ["iv1"], || {
        format!("User in Spool: {:?}", failed(&r))
    })?;

    let r = run(&spool_with_jobs(&sig, 100, true))?;
    ensure(failed(&r) == ["iv2"], || {
        format!("100 Jobs + site: {:?}", failed(&r))
    })?;
    let r = run(&spool_with_jobs(&sig, 100, false))?;
    ensure(r.all_passed(), || format!("100 Jobs: {:?}", failed(&r)))?;

    let r = run(&b.to_builder().port_to_outer("room1", 0, "jeff").build())?;
    ensure(failed(&r) == ["iv3"], || {
        format!("Room to jeff: {:?}", failed(&r))
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "iv1, iv2, iv3 verdicts as expected in {:.2?}",
        start.elapsed()
    ))
}

fn checker_verdict(path: &Path, sig: &Signature) -> bool {
    match io::load(path).unwrap() {
        Document::Bigraph(b) => b.validate().is_empty(),
        Document::TypeGraph(tg) => tg.validate().is_empty(),
        Document::InstanceGraph(g) => check_encoding(&g, sig).is_empty(),
        Document::FeatureConfig(c) => validate_config(&c).is_empty(),
        Document::Signature(_) => true,
    }
}

fn io_determinism() -> Outcome {
    let mut identical = 0;
    for dir in [fixtures(), fixtures().join("corpus")] {
        for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let doc = io::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(io::to_string(&doc) == text, || {
                format!("{} not byte-identical", path.display())
            })?;
            identical += 1;
        }
    }

    let sig_path = fixtures().join("printer.sig.json");
    let sig = io::load_signature(&sig_path).unwrap();
    let mut corpus: Vec<PathBuf> = std::fs::read_dir(fixtures().join("corpus"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    corpus.sort();
    ensure(corpus.len() == 6, || {
        format!("corpus has {} files", corpus.len())
    })?;
    for path in &corpus {
        let good = path
            .file_name()
            .unwrap()
            .to_string_lossy()
            .starts_with("good-");
        let verdict = checker_verdict(path, &sig);
        ensure(verdict == good, || {
            format!("{}: checker verdict {verdict}", path.display())
        })?;
        let args = [
            "bgemof".into(),
            "validate".into(),
            path.display().to_string(),
            "--sig".into(),
            sig_path.display().to_string(),
        ];
        let code = bigraph_emof_cli::run(args, &mut Vec::new(), &mut Vec::new());
        let expected = if verdict { 0 } else { 1 };
        ensure(code == expected, || {
            format!("{}: exit {code}, expected {expected}", path.display())
        })?;
    }
    Ok(format!(
        "{identical} fixtures byte-identical; 6 corpus exit codes match"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("printer golden file", printer_golden),
        ("round trip", round_trip),
        ("mutation kill", mutation_kill),
        ("configuration space", configuration_space),
        ("delta spot checks", delta_spot_checks),
        ("constraints", constraints),
        ("I/O determinism", io_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
