//! Static checking and evaluation of invariants over instance graphs.

use std::collections::BTreeMap;

use super::ast::{BinOp, CollOp, ConstraintDoc, Expr, Invariant};
use super::ConstraintError;
use crate::typegraph::{InstanceGraph, TypeGraph};

const MAX_TRACE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum StaticType {
    Bool,
    Int,
    Node(String),
    Nodes(String),
}

impl StaticType {
    fn describe(&self) -> String {
        match self {
            StaticType::Bool => "Boolean".into(),
            StaticType::Int => "Integer".into(),
            StaticType::Node(t) => t.clone(),
            StaticType::Nodes(t) => format!("Set({t})"),
        }
    }

    /// Element type when used as a collection (a single node is a singleton).
    fn element_type(&self) -> Option<&str> {
        match self {
            StaticType::Node(t) | StaticType::Nodes(t) => Some(t),
            _ => None,
        }
    }
}

struct TypeChecker<'a> {
    tg: &'a TypeGraph,
    invariant: &'a Invariant,
}

impl<'a> TypeChecker<'a> {
    fn error(&self, message: impl Into<String>) -> ConstraintError {
        ConstraintError::TypeCheck {
            invariant: format!("{}::{}", self.invariant.context, self.invariant.name),
            message: message.into(),
        }
    }

    fn known_type(&self, t: &str) -> Result<(), ConstraintError> {
        if self.tg.has_node_type(t) {
            Ok(())
        } else {
            Err(self.error(format!("unknown type `{t}`")))
        }
    }

    fn node_type(&self, ty: &StaticType, what: &str) -> Result<String, ConstraintError> {
        match ty {
            StaticType::Node(t) => Ok(t.clone()),
            other => Err(self.error(format!(
                "{what} expects a single node, found {}",
                other.describe()
            ))),
        }
    }

    fn check(
        &self,
        e: &Expr,
        env: &BTreeMap<String, StaticType>,
    ) -> Result<StaticType, ConstraintError> {
        match e {
            Expr::SelfRef => Ok(StaticType::Node(self.invariant.context.clone())),
            Expr::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| self.error(format!("unknown variable `{v}`"))),
            Expr::Int(_) => Ok(StaticType::Int),
            Expr::Bool(_) => Ok(StaticType::Bool),
            Expr::Nav(base, name) => {
                let base_ty = self.check(base, env)?;
                let Some(from) = base_ty.element_type() else {
                    return Err(self.error(format!(
                        "cannot navigate `{name}` from {}",
                        base_ty.describe()
                    )));
                };
                let Some(ends) = self.tg.edge_type(name) else {
                    return Err(self.error(format!("unknown edge type `{name}`")));
                };
                if !self.tg.conforms_to(from, &ends.src) {
                    return Err(self.error(format!(
                        "edge type `{name}` is not applicable to `{from}` (source type is `{}`)",
                        ends.src
                    )));
                }
                let single = matches!(base_ty, StaticType::Node(_))
                    && self.tg.multiplicity(name).and_then(|m| m.upper) == Some(1);
                Ok(if single {
                    StaticType::Node(ends.tgt.clone())
                } else {
                    StaticType::Nodes(ends.tgt.clone())
                })
            }
            Expr::IsTypeOf(base, t) => {
                let base_ty = self.check(base, env)?;
                self.node_type(&base_ty, "oclIsTypeOf")?;
                self.known_type(t)?;
                Ok(StaticType::Bool)
            }
            Expr::AsType(base, t) => {
                let base_ty = self.check(base, env)?;
                self.node_type(&base_ty, "oclAsType")?;
                self.known_type(t)?;
                Ok(StaticType::Node(t.clone()))
            }
            Expr::Coll(base, op) => {
                let base_ty = self.check(base, env)?;
                let Some(elem) = base_ty.element_type() else {
                    return Err(
                        self.error(format!("collection operation on {}", base_ty.describe()))
                    );
                };
                match op {
                    CollOp::Size => Ok(StaticType::Int),
                    CollOp::First => Ok(StaticType::Node(elem.to_string())),
                    CollOp::ForAll(var, body) | CollOp::Exists(var, body) => {
                        let mut inner = env.clone();
                        inner.insert(var.clone(), StaticType::Node(elem.to_string()));
                        match self.check(body, &inner)? {
                            StaticType::Bool => Ok(StaticType::Bool),
                            other => Err(self.error(format!(
                                "iterator body must be Boolean, found {}",
                                other.describe()
                            ))),
                        }
                    }
                }
            }
            Expr::Not(inner) => match self.check(inner, env)? {
                StaticType::Bool => Ok(StaticType::Bool),
                other => {
                    Err(self.error(format!("`not` expects Boolean, found {}", other.describe())))
                }
            },
            Expr::Binary(op, lhs, rhs) => {
                let (l, r) = (self.check(lhs, env)?, self.check(rhs, env)?);
                let ok = match op {
                    BinOp::And | BinOp::Or | BinOp::Implies => {
                        l == StaticType::Bool && r == StaticType::Bool
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        l == StaticType::Int && r == StaticType::Int
                    }
                    BinOp::Eq => matches!(
                        (&l, &r),
                        (StaticType::Int, StaticType::Int)
                            | (StaticType::Bool, StaticType::Bool)
                            | (StaticType::Node(_), StaticType::Node(_))
                    ),
                };
                if ok {
                    Ok(StaticType::Bool)
                } else {
                    Err(self.error(format!(
                        "operator `{}` cannot combine {} and {}",
                        op.symbol(),
                        l.describe(),
                        r.describe()
                    )))
                }
            }
            Expr::Let {
                name,
                ty,
                value,
                body,
            } => {
                let value_ty = self.check(value, env)?;
                let bound = match ty.as_deref() {
                    None => value_ty,
                    Some("integer" | "Integer") => {
                        if value_ty != StaticType::Int {
                            return Err(self.error(format!(
                                "`{name}` declared Integer but bound to {}",
                                value_ty.describe()
                            )));
                        }
                        StaticType::Int
                    }
                    Some("boolean" | "Boolean") => {
                        if value_ty != StaticType::Bool {
                            return Err(self.error(format!(
                                "`{name}` declared Boolean but bound to {}",
                                value_ty.describe()
                            )));
                        }
                        StaticType::Bool
                    }
                    Some(t) => {
                        self.known_type(t)?;
                        match &value_ty {
                            StaticType::Node(actual) if self.tg.conforms_to(actual, t) => {
                                StaticType::Node(t.to_string())
                            }
                            other => {
                                return Err(self.error(format!(
                                    "`{name}` declared `{t}` but bound to {}",
                                    other.describe()
                                )))
                            }
                        }
                    }
                };
                let mut inner = env.clone();
                inner.insert(name.clone(), bound);
                self.check(body, &inner)
            }
        }
    }
}

/// Statically checks every invariant of `doc` against `tg`.
pub fn type_check(doc: &ConstraintDoc, tg: &TypeGraph) -> Result<(), ConstraintError> {
    for inv in &doc.invariants {
        let checker = TypeChecker { tg, invariant: inv };
        checker.known_type(&inv.context)?;
        match checker.check(&inv.body, &BTreeMap::new())? {
            StaticType::Bool => {}
            other => {
                return Err(checker.error(format!(
                    "invariant body must be Boolean, found {}",
                    other.describe()
                )))
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Value {
    Bool(bool),
    Int(i64),
    Node(String),
    Nodes(Vec<String>),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Node(n) => n.clone(),
            Value::Nodes(ns) => format!("{{{}}}", ns.join(", ")),
        }
    }

    fn into_nodes(self) -> Vec<String> {
        match self {
            Value::Node(n) => vec![n],
            Value::Nodes(ns) => ns,
            _ => Vec::new(),
        }
    }
}

struct Evaluator<'a> {
    g: &'a InstanceGraph,
    tg: &'a TypeGraph,
    adjacency: BTreeMap<&'a str, BTreeMap<&'a str, Vec<&'a str>>>,
    trace: Vec<String>,
    invariant: String,
    instance: String,
}

impl<'a> Evaluator<'a> {
    fn note(&mut self, line: String) {
        if self.trace.len() < MAX_TRACE {
            self.trace.push(line);
        }
    }

    fn error(&self, message: impl Into<String>) -> ConstraintError {
        ConstraintError::Evaluation {
            invariant: self.invariant.clone(),
            node: self.instance.clone(),
            message: message.into(),
        }
    }

    fn targets(&self, node: &str, edge_type: &str) -> Vec<String> {
        self.adjacency
            .get(node)
            .and_then(|m| m.get(edge_type))
            .map(|v| v.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default()
    }

    fn eval_bool(
        &mut self,
        e: &Expr,
        env: &BTreeMap<String, Value>,
    ) -> Result<bool, ConstraintError> {
        match self.eval(e, env)? {
            Value::Bool(b) => Ok(b),
            other => Err(self.error(format!("expected Boolean, found {}", other.render()))),
        }
    }

    fn eval_int(
        &mut self,
        e: &Expr,
        env: &BTreeMap<String, Value>,
    ) -> Result<i64, ConstraintError> {
        match self.eval(e, env)? {
            Value::Int(i) => Ok(i),
            other => Err(self.error(format!("expected Integer, found {}", other.render()))),
        }
    }

    fn eval(&mut self, e: &Expr, env: &BTreeMap<String, Value>) -> Result<Value, ConstraintError> {
        match e {
            Expr::SelfRef => Ok(Value::Node(self.instance.clone())),
            Expr::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| self.error(format!("unbound variable `{v}`"))),
            Expr::Int(i) => Ok(Value::Int(*i)),
            Expr::Bool(b) => Ok(Value::Bool(*b)),
            Expr::Nav(base, name) => {
                let base_val = self.eval(base, env)?;
                let single_source = matches!(base_val, Value::Node(_));
                let sources = base_val.into_nodes();
                let mut reached = Vec::new();
                for n in &sources {
                    reached.extend(self.targets(n, name));
                }
                let single =
                    single_source && self.tg.multiplicity(name).and_then(|m| m.upper) == Some(1);
                let result = if single && reached.len() == 1 {
                    Value::Node(reached.remove(0))
                } else {
                    Value::Nodes(reached)
                };
                self.note(format!(
                    "{}.{name} = {}",
                    Value::Nodes(sources).render(),
                    result.render()
                ));
                Ok(result)
            }
            Expr::IsTypeOf(base, t) => match self.eval(base, env)? {
                Value::Node(n) => Ok(Value::Bool(self.g.node_type(&n) == Some(t.as_str()))),
                Value::Nodes(ns) if ns.is_empty() => Ok(Value::Bool(false)),
                other => Err(self.error(format!(
                    "oclIsTypeOf on {} (expected a single node)",
                    other.render()
                ))),
            },
            Expr::AsType(base, t) => match self.eval(base, env)? {
                Value::Node(n) => {
                    let actual = self.g.node_type(&n).unwrap_or_default();
                    if self.tg.conforms_to(actual, t) {
                        Ok(Value::Node(n))
                    } else {
                        Err(self.error(format!("cannot cast `{n}` of type `{actual}` to `{t}`")))
                    }
                }
                Value::Nodes(ns) if ns.is_empty() => Ok(Value::Nodes(ns)),
                other => Err(self.error(format!(
                    "oclAsType on {} (expected a single node)",
                    other.render()
                ))),
            },
            Expr::Coll(base, op) => {
                let items = self.eval(base, env)?.into_nodes();
                match op {
                    CollOp::Size => Ok(Value::Int(items.len() as i64)),
                    CollOp::First => items
                        .into_iter()
                        .next()
                        .map(Value::Node)
                        .ok_or_else(|| self.error("first() on an empty collection")),
                    CollOp::ForAll(var, body) => {
                        for item in items {
                            let mut inner = env.clone();
                            inner.insert(var.clone(), Value::Node(item.clone()));
                            if !self.eval_bool(body, &inner)? {
                                self.note(format!("forAll({var}) fails for {var} = {item}"));
                                return Ok(Value::Bool(false));
                            }
                        }
                        Ok(Value::Bool(true))
                    }
                    CollOp::Exists(var, body) => {
                        for item in items {
                            let mut inner = env.clone();
                            inner.insert(var.clone(), Value::Node(item.clone()));
                            if self.eval_bool(body, &inner)? {
                                self.note(format!("exists({var}) holds for {var} = {item}"));
                                return Ok(Value::Bool(true));
                            }
                        }
                        Ok(Value::Bool(false))
                    }
                }
            }
            Expr::Not(inner) => Ok(Value::Bool(!self.eval_bool(inner, env)?)),
            Expr::Binary(op, lhs, rhs) => {
                let result = match op {
                    BinOp::And => self.eval_bool(lhs, env)? && self.eval_bool(rhs, env)?,
                    BinOp::Or => self.eval_bool(lhs, env)? || self.eval_bool(rhs, env)?,
                    BinOp::Implies => !self.eval_bool(lhs, env)? || self.eval_bool(rhs, env)?,
                    BinOp::Eq => {
                        let (l, r) = (self.eval(lhs, env)?, self.eval(rhs, env)?);
                        let eq = l == r;
                        self.note(format!("{} = {} is {eq}", l.render(), r.render()));
                        eq
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        let (l, r) = (self.eval_int(lhs, env)?, self.eval_int(rhs, env)?);
                        let holds = match op {
                            BinOp::Lt => l < r,
                            BinOp::Le => l <= r,
                            BinOp::Gt => l > r,
                            _ => l >= r,
                        };
                        self.note(format!("{l} {} {r} is {holds}", op.symbol()));
                        holds
                    }
                };
                Ok(Value::Bool(result))
            }
            Expr::Let {
                name, value, body, ..
            } => {
                let v = self.eval(value, env)?;
                self.note(format!("let {name} = {}", v.render()));
                let mut inner = env.clone();
                inner.insert(name.clone(), v);
                self.eval(body, &inner)
            }
        }
    }
}

/// Outcome of one invariant on one context instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub node: String,
    pub passed: bool,
    /// Navigation steps recorded while evaluating; empty for passing instances.
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantOutcome {
    pub context: String,
    pub name: String,
    pub instances: Vec<InstanceOutcome>,
}

impl InvariantOutcome {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckResult {
    pub outcomes: Vec<InvariantOutcome>,
}

impl CheckResult {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(InvariantOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&InvariantOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// `(invariant, failing instance)` pairs.
    pub fn failures(&self) -> impl Iterator<Item = (&InvariantOutcome, &InstanceOutcome)> {
        self.outcomes.iter().flat_map(|o| {
            o.instances
                .iter()
                .filter(|i| !i.passed)
                .map(move |i| (o, i))
        })
    }
}

/// Type-checks `doc` and evaluates every invariant on every node whose type is
/// the context type or one of its subtypes.
pub fn evaluate(
    doc: &ConstraintDoc,
    g: &InstanceGraph,
    tg: &TypeGraph,
) -> Result<CheckResult, ConstraintError> {
    type_check(doc, tg)?;
    let adjacency = g.adjacency();
    let mut result = CheckResult::default();

    for inv in &doc.invariants {
        let mut outcome = InvariantOutcome {
            context: inv.context.clone(),
            name: inv.name.clone(),
            instances: Vec::new(),
        };
        let instances: Vec<&String> = g
            .nodes()
            .iter()
            .filter(|n| {
                g.node_type(n)
                    .is_some_and(|t| tg.conforms_to(t, &inv.context))
            })
            .collect();
        for node in instances {
            let mut ev = Evaluator {
                g,
                tg,
                adjacency: adjacency.clone(),
                trace: Vec::new(),
                invariant: format!("{}::{}", inv.context, inv.name),
                instance: node.clone(),
            };
            ev.note(format!("self = {node}"));
            let passed = ev.eval_bool(&inv.body, &BTreeMap::new())?;
            outcome.instances.push(InstanceOutcome {
                node: node.clone(),
                passed,
                trace: if passed { Vec::new() } else { ev.trace },
            });
        }
        result.outcomes.push(outcome);
    }
    Ok(result)
}
