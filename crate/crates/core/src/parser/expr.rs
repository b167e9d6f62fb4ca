//! Clause expression mini-grammar.
//!
//! Covers what formal clauses in the examples use: quantifiers
//! (`\forall`, `\exists`, `\num_of`, `\sum`) with `binder: Type | guard ::
//! body`, `\old(e)`, `\result`, boolean/relational/arithmetic operators
//! with chained comparisons (`0 <= i < n`), calls, field access and
//! indexing. `=` and `==` both mean equality.

use crate::model::{BinaryOp, Binder, Clause, ClauseExpr, Formality, Quantifier, UnaryOp};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Str(String),
    Ident(String),
    /// `\forall`, `\old`, ... without the backslash.
    Backslash(String),
    Op(&'static str),
}

const OPS: &[&str] = &[
    "<==>", "==>", "==", "!=", "<=", ">=", "&&", "||", "::", "=", "<", ">", "!", "+", "-", "*",
    "/", "%", "(", ")", "[", "]", ",", ".", ":", "|",
];

fn lex(src: &str) -> Option<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '\\' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j == start {
                return None;
            }
            out.push(Tok::Backslash(chars[start..j].iter().collect()));
            i = j;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                return None;
            }
            let text: String = chars[i..j].iter().collect();
            out.push(Tok::Int(text.parse().ok()?));
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            out.push(Tok::Ident(chars[i..j].iter().collect()));
            i = j;
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            let mut j = i + 1;
            while j < chars.len() {
                match chars[j] {
                    '"' => {
                        out.push(Tok::Str(s));
                        i = j + 1;
                        continue 'outer;
                    }
                    '\\' if j + 1 < chars.len() => {
                        s.push(chars[j + 1]);
                        j += 2;
                    }
                    ch => {
                        s.push(ch);
                        j += 1;
                    }
                }
            }
            return None;
        }
        for op in OPS {
            let len = op.chars().count();
            if i + len <= chars.len() && chars[i..i + len].iter().copied().eq(op.chars()) {
                out.push(Tok::Op(op));
                i += len;
                continue 'outer;
            }
        }
        return None;
    }
    Some(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_op(&self, op: &str) -> bool {
        matches!(self.peek(), Some(Tok::Op(o)) if *o == op)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.peek_op(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: &str) -> Option<()> {
        self.eat_op(op).then_some(())
    }

    fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Some(name)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Option<ClauseExpr> {
        let mut lhs = self.implies()?;
        while self.eat_op("<==>") {
            let rhs = self.implies()?;
            lhs = ClauseExpr::binary(BinaryOp::Equiv, lhs, rhs);
        }
        Some(lhs)
    }

    fn implies(&mut self) -> Option<ClauseExpr> {
        let lhs = self.or()?;
        if self.eat_op("==>") {
            let rhs = self.implies()?;
            return Some(ClauseExpr::binary(BinaryOp::Implies, lhs, rhs));
        }
        Some(lhs)
    }

    fn or(&mut self) -> Option<ClauseExpr> {
        let mut lhs = self.and()?;
        while self.eat_op("||") {
            let rhs = self.and()?;
            lhs = ClauseExpr::binary(BinaryOp::Or, lhs, rhs);
        }
        Some(lhs)
    }

    fn and(&mut self) -> Option<ClauseExpr> {
        let mut lhs = self.relational()?;
        while self.eat_op("&&") {
            let rhs = self.relational()?;
            lhs = ClauseExpr::binary(BinaryOp::And, lhs, rhs);
        }
        Some(lhs)
    }

    fn relop(&mut self) -> Option<BinaryOp> {
        let op = match self.peek() {
            Some(Tok::Op("=")) | Some(Tok::Op("==")) => BinaryOp::Eq,
            Some(Tok::Op("!=")) => BinaryOp::Ne,
            Some(Tok::Op("<")) => BinaryOp::Lt,
            Some(Tok::Op("<=")) => BinaryOp::Le,
            Some(Tok::Op(">")) => BinaryOp::Gt,
            Some(Tok::Op(">=")) => BinaryOp::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    /// `a < b <= c` becomes `(a < b) && (b <= c)`.
    fn relational(&mut self) -> Option<ClauseExpr> {
        let first = self.additive()?;
        let mut operands = vec![first];
        let mut ops = Vec::new();
        while let Some(op) = self.relop() {
            ops.push(op);
            operands.push(self.additive()?);
        }
        if ops.is_empty() {
            return operands.pop();
        }
        let mut result: Option<ClauseExpr> = None;
        for (k, op) in ops.into_iter().enumerate() {
            let cmp = ClauseExpr::binary(op, operands[k].clone(), operands[k + 1].clone());
            result = Some(match result {
                None => cmp,
                Some(acc) => ClauseExpr::binary(BinaryOp::And, acc, cmp),
            });
        }
        result
    }

    fn additive(&mut self) -> Option<ClauseExpr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = if self.eat_op("+") {
                BinaryOp::Add
            } else if self.eat_op("-") {
                BinaryOp::Sub
            } else {
                return Some(lhs);
            };
            let rhs = self.multiplicative()?;
            lhs = ClauseExpr::binary(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self) -> Option<ClauseExpr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_op("*") {
                BinaryOp::Mul
            } else if self.eat_op("/") {
                BinaryOp::Div
            } else if self.eat_op("%") {
                BinaryOp::Rem
            } else {
                return Some(lhs);
            };
            let rhs = self.unary()?;
            lhs = ClauseExpr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Option<ClauseExpr> {
        if self.eat_op("!") {
            let operand = self.unary()?;
            return Some(ClauseExpr::Unary { op: UnaryOp::Not, operand: Box::new(operand) });
        }
        if self.eat_op("-") {
            let operand = self.unary()?;
            return Some(ClauseExpr::Unary { op: UnaryOp::Neg, operand: Box::new(operand) });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Option<ClauseExpr> {
        let mut e = self.primary()?;
        loop {
            if self.eat_op(".") {
                let name = self.ident()?;
                if self.peek_op("(") {
                    let args = self.args()?;
                    e = ClauseExpr::Call { target: Some(Box::new(e)), name, args };
                } else {
                    e = ClauseExpr::Field { target: Box::new(e), name };
                }
            } else if self.eat_op("[") {
                let index = self.expr()?;
                self.expect_op("]")?;
                e = ClauseExpr::Index { target: Box::new(e), index: Box::new(index) };
            } else {
                return Some(e);
            }
        }
    }

    fn args(&mut self) -> Option<Vec<ClauseExpr>> {
        self.expect_op("(")?;
        let mut args = Vec::new();
        if self.eat_op(")") {
            return Some(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_op(")") {
                return Some(args);
            }
            self.expect_op(",")?;
        }
    }

    fn primary(&mut self) -> Option<ClauseExpr> {
        match self.peek()?.clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Some(ClauseExpr::Int(v))
            }
            Tok::Str(s) => {
                self.pos += 1;
                Some(ClauseExpr::Str(s))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "true" => return Some(ClauseExpr::Bool(true)),
                    "false" => return Some(ClauseExpr::Bool(false)),
                    "null" => return Some(ClauseExpr::Null),
                    _ => {}
                }
                if self.peek_op("(") {
                    let args = self.args()?;
                    Some(ClauseExpr::Call { target: None, name, args })
                } else {
                    Some(ClauseExpr::Ident(name))
                }
            }
            Tok::Backslash(word) => {
                self.pos += 1;
                match word.as_str() {
                    "result" => Some(ClauseExpr::Result),
                    "old" => {
                        self.expect_op("(")?;
                        let inner = self.expr()?;
                        self.expect_op(")")?;
                        Some(ClauseExpr::old(inner))
                    }
                    "forall" => self.quantified(Quantifier::Forall),
                    "exists" => self.quantified(Quantifier::Exists),
                    "num_of" => self.quantified(Quantifier::NumOf),
                    "sum" => self.quantified(Quantifier::Sum),
                    _ => None,
                }
            }
            Tok::Op("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(")")?;
                Some(e)
            }
            Tok::Op(_) => None,
        }
    }

    fn quantified(&mut self, quantifier: Quantifier) -> Option<ClauseExpr> {
        let name = self.ident()?;
        let ty = if self.eat_op(":") { Some(self.type_name()?) } else { None };
        let guard = if self.eat_op("|") { Some(Box::new(self.expr()?)) } else { None };
        self.expect_op("::")?;
        let body = self.expr()?;
        Some(ClauseExpr::Quantified {
            quantifier,
            binder: Binder { name, ty },
            guard,
            body: Box::new(body),
        })
    }

    fn type_name(&mut self) -> Option<String> {
        let mut text = self.ident()?;
        if self.eat_op("<") {
            text.push('<');
            loop {
                text.push_str(&self.type_name()?);
                if self.eat_op(">") {
                    break;
                }
                self.expect_op(",")?;
                text.push_str(", ");
            }
            text.push('>');
        }
        while self.peek_op("[") && matches!(self.toks.get(self.pos + 1), Some(Tok::Op("]"))) {
            self.pos += 2;
            text.push_str("[]");
        }
        Some(text)
    }
}

/// Parse a clause payload; `None` when it is not entirely in the grammar.
pub fn parse_clause_expression(raw: &str) -> Option<ClauseExpr> {
    let toks = lex(raw)?;
    if toks.is_empty() {
        return None;
    }
    let mut parser = Parser { toks, pos: 0 };
    let e = parser.expr()?;
    (parser.pos == parser.toks.len()).then_some(e)
}

fn has_backslash_form(raw: &str) -> bool {
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\\' && chars.peek().is_some_and(|n| n.is_alphabetic()) {
            return true;
        }
    }
    false
}

/// Build a clause with its formality decided: formal when the whole
/// payload parses, mixed when a backslash form sits in unparseable text,
/// informal otherwise.
pub fn classify_clause(raw: &str) -> Clause {
    match parse_clause_expression(raw) {
        Some(expr) => Clause::formal(raw, expr),
        None => Clause {
            raw: raw.to_string(),
            formality: if has_backslash_form(raw) { Formality::Mixed } else { Formality::Informal },
            expr: None,
        },
    }
}
