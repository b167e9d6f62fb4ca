use std::fmt;

/// Abstract syntax of a formal specification clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClauseExpr {
    Int(i64),
    Str(String),
    Bool(bool),
    Null,
    /// `\result`
    Result,
    Ident(String),
    /// `\old(e)`
    Old(Box<ClauseExpr>),
    /// `name(args)` or `target.name(args)`.
    Call { target: Option<Box<ClauseExpr>>, name: String, args: Vec<ClauseExpr> },
    Field { target: Box<ClauseExpr>, name: String },
    Index { target: Box<ClauseExpr>, index: Box<ClauseExpr> },
    Unary { op: UnaryOp, operand: Box<ClauseExpr> },
    Binary { op: BinaryOp, lhs: Box<ClauseExpr>, rhs: Box<ClauseExpr> },
    /// `\forall x: T | guard :: body` and friends.
    Quantified {
        quantifier: Quantifier,
        binder: Binder,
        guard: Option<Box<ClauseExpr>>,
        body: Box<ClauseExpr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub ty: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
    NumOf,
    Sum,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "\\forall",
            Quantifier::Exists => "\\exists",
            Quantifier::NumOf => "\\num_of",
            Quantifier::Sum => "\\sum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Equiv,
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Equiv => "<==>",
            BinaryOp::Implies => "==>",
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::Eq => "=",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
        }
    }

    pub fn is_relational(self) -> bool {
        matches!(
            self,
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge
        )
    }

    /// The operator with its operands swapped: `a < b` iff `b > a`.
    pub fn flipped(self) -> BinaryOp {
        match self {
            BinaryOp::Lt => BinaryOp::Gt,
            BinaryOp::Le => BinaryOp::Ge,
            BinaryOp::Gt => BinaryOp::Lt,
            BinaryOp::Ge => BinaryOp::Le,
            other => other,
        }
    }
}

impl ClauseExpr {
    pub fn ident(name: &str) -> Self {
        ClauseExpr::Ident(name.to_string())
    }

    pub fn call(name: &str, args: Vec<ClauseExpr>) -> Self {
        ClauseExpr::Call { target: None, name: name.to_string(), args }
    }

    pub fn old(e: ClauseExpr) -> Self {
        ClauseExpr::Old(Box::new(e))
    }

    pub fn binary(op: BinaryOp, lhs: ClauseExpr, rhs: ClauseExpr) -> Self {
        ClauseExpr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    /// True if `\old` occurs anywhere in the tree.
    pub fn mentions_old(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, ClauseExpr::Old(_)));
        found
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut dyn FnMut(&ClauseExpr)) {
        f(self);
        match self {
            ClauseExpr::Old(e) => e.visit(f),
            ClauseExpr::Call { target, args, .. } => {
                if let Some(t) = target {
                    t.visit(f);
                }
                for a in args {
                    a.visit(f);
                }
            }
            ClauseExpr::Field { target, .. } => target.visit(f),
            ClauseExpr::Index { target, index } => {
                target.visit(f);
                index.visit(f);
            }
            ClauseExpr::Unary { operand, .. } => operand.visit(f),
            ClauseExpr::Binary { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            ClauseExpr::Quantified { guard, body, .. } => {
                if let Some(g) = guard {
                    g.visit(f);
                }
                body.visit(f);
            }
            ClauseExpr::Int(_)
            | ClauseExpr::Str(_)
            | ClauseExpr::Bool(_)
            | ClauseExpr::Null
            | ClauseExpr::Result
            | ClauseExpr::Ident(_) => {}
        }
    }
}

/// Fully parenthesized rendering; used in messages and for term comparison.
impl fmt::Display for ClauseExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseExpr::Int(v) => write!(f, "{v}"),
            ClauseExpr::Str(s) => write!(f, "{s:?}"),
            ClauseExpr::Bool(b) => write!(f, "{b}"),
            ClauseExpr::Null => f.write_str("null"),
            ClauseExpr::Result => f.write_str("\\result"),
            ClauseExpr::Ident(name) => f.write_str(name),
            ClauseExpr::Old(e) => write!(f, "\\old({e})"),
            ClauseExpr::Call { target, name, args } => {
                if let Some(t) = target {
                    write!(f, "{t}.")?;
                }
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            ClauseExpr::Field { target, name } => write!(f, "{target}.{name}"),
            ClauseExpr::Index { target, index } => write!(f, "{target}[{index}]"),
            ClauseExpr::Unary { op: UnaryOp::Not, operand } => write!(f, "!{operand}"),
            ClauseExpr::Unary { op: UnaryOp::Neg, operand } => write!(f, "-{operand}"),
            ClauseExpr::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ClauseExpr::Quantified { quantifier, binder, guard, body } => {
                write!(f, "({} {}", quantifier.keyword(), binder.name)?;
                if let Some(ty) = &binder.ty {
                    write!(f, ": {ty}")?;
                }
                if let Some(g) = guard {
                    write!(f, " | {g}")?;
                }
                write!(f, " :: {body})")
            }
        }
    }
}
