use std::fmt;

/// A parsed constraint file: invariants grouped under `context` blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintDoc {
    pub invariants: Vec<Invariant>,
}

impl ConstraintDoc {
    pub fn contexts(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for inv in &self.invariants {
            if !out.contains(&inv.context.as_str()) {
                out.push(&inv.context);
            }
        }
        out
    }

    pub fn invariants_of<'a>(
        &'a self,
        context: &'a str,
    ) -> impl Iterator<Item = &'a Invariant> + 'a {
        self.invariants.iter().filter(move |i| i.context == context)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub context: String,
    pub name: String,
    pub body: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Implies => "implies",
            BinOp::Eq => "=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Eq | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollOp {
    Size,
    First,
    ForAll(String, Box<Expr>),
    Exists(String, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    SelfRef,
    Var(String),
    Int(i64),
    Bool(bool),
    /// `base.edgeType`
    Nav(Box<Expr>, String),
    IsTypeOf(Box<Expr>, String),
    AsType(Box<Expr>, String),
    /// `base->op(...)`
    Coll(Box<Expr>, CollOp),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Let {
        name: String,
        ty: Option<String>,
        value: Box<Expr>,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }
}

// Printing is fully parenthesized so that reparsing yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::SelfRef => f.write_str("self"),
            Expr::Var(v) => f.write_str(v),
            Expr::Int(i) => write!(f, "{i}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Nav(base, name) => write!(f, "{}.{name}", Postfix(base)),
            Expr::IsTypeOf(base, t) => write!(f, "{}.oclIsTypeOf({t})", Postfix(base)),
            Expr::AsType(base, t) => write!(f, "{}.oclAsType({t})", Postfix(base)),
            Expr::Coll(base, op) => {
                write!(f, "{}->", Postfix(base))?;
                match op {
                    CollOp::Size => f.write_str("size()"),
                    CollOp::First => f.write_str("first()"),
                    CollOp::ForAll(v, body) => write!(f, "forAll({v} | {body})"),
                    CollOp::Exists(v, body) => write!(f, "exists({v} | {body})"),
                }
            }
            Expr::Not(inner) => write!(f, "not {}", Postfix(inner)),
            Expr::Binary(op, lhs, rhs) if op.is_comparison() => {
                write!(f, "({} {} {})", Postfix(lhs), op.symbol(), Postfix(rhs))
            }
            Expr::Binary(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Let {
                name,
                ty,
                value,
                body,
            } => {
                write!(f, "(let {name}")?;
                if let Some(t) = ty {
                    write!(f, " : {t}")?;
                }
                write!(f, " = ({value}) {body})")
            }
        }
    }
}

/// Wraps operands that would otherwise bind differently in postfix position.
struct Postfix<'a>(&'a Expr);

impl fmt::Display for Postfix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Not(_) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for ConstraintDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut current: Option<&str> = None;
        for inv in &self.invariants {
            if current != Some(inv.context.as_str()) {
                writeln!(f, "context {}", inv.context)?;
                current = Some(&inv.context);
            }
            writeln!(f, "  inv {}:", inv.name)?;
            writeln!(f, "    {}", inv.body)?;
        }
        Ok(())
    }
}
