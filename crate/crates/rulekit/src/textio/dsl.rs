use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{AttrId, Attribute, Rule, RuleSystem, Schema, Value, ValueSet};
use crate::textio::lexer::{tokenize, Tok, Token};
use crate::textio::{Parsed, ParseDiagnostic};

const KEYWORDS: &[&str] = &["schema", "attribute", "classes", "rule", "ordered", "in"];

/// Parses the schema declarations of a document: either a `schema { ... }`
/// block or bare `attribute` / `classes` lines. Rule lines are ignored, so
/// a full system document is acceptable input.
pub fn parse_schema(text: &str) -> Result<Parsed<Schema>> {
    let tokens = tokenize(text).map_err(|d| Error::Syntax(vec![d]))?;
    let mut parser = Parser::new(&tokens);
    let mut attrs: Vec<(Attribute, usize, usize)> = Vec::new();
    let mut classes: Vec<(String, usize, usize)> = Vec::new();
    let mut saw_decl = false;

    while let Some(token) = parser.peek() {
        match &token.tok {
            Tok::Newline => {
                parser.advance();
            }
            Tok::Ident(word) if word == "schema" => {
                saw_decl = true;
                parser.advance();
                parser.schema_block(&mut attrs, &mut classes);
            }
            Tok::Ident(word) if word == "attribute" => {
                saw_decl = true;
                parser.advance();
                parser.attribute_decl(&mut attrs);
            }
            Tok::Ident(word) if word == "classes" => {
                saw_decl = true;
                parser.advance();
                parser.classes_decl(&mut classes);
            }
            Tok::Ident(word) if word == "rule" => {
                parser.skip_line();
            }
            other => {
                let msg = format!(
                    "expected 'schema', 'attribute', 'classes' or 'rule', found {}",
                    other.describe()
                );
                parser.error_here(msg);
                parser.skip_line();
            }
        }
    }

    if parser.has_errors() {
        return Err(Error::Syntax(parser.diags));
    }
    if !saw_decl {
        return Err(Error::Invariant(
            "no schema declarations in input".to_string(),
        ));
    }

    // Duplicates are caught here with positions; Schema::new re-checks.
    let mut seen = std::collections::HashSet::new();
    for (attr, line, col) in &attrs {
        if !seen.insert(attr.name().to_string()) {
            parser.diags.push(ParseDiagnostic::error(
                *line,
                *col,
                format!("duplicate attribute name: {}", attr.name()),
            ));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for (class, line, col) in &classes {
        if !seen.insert(class.clone()) {
            parser.diags.push(ParseDiagnostic::error(
                *line,
                *col,
                format!("duplicate class name: {class}"),
            ));
        }
    }
    if parser.has_errors() {
        return Err(Error::Syntax(parser.diags));
    }

    let schema = Schema::new(
        attrs.into_iter().map(|(a, _, _)| a).collect(),
        classes.into_iter().map(|(c, _, _)| c).collect(),
    )?;
    Ok(Parsed {
        value: schema,
        warnings: parser.diags,
    })
}

/// Parses the rule lines of a document against a schema.
///
/// A schema block in the document is allowed but must equal the provided
/// schema. Rules keep their textual order; a rule without an explicit id
/// is assigned `R<n>` from its 1-based position.
pub fn parse_system(text: &str, schema: &Schema) -> Result<Parsed<RuleSystem>> {
    let tokens = tokenize(text).map_err(|d| Error::Syntax(vec![d]))?;

    let has_schema_decls = {
        let mut at_line_start = true;
        tokens.iter().any(|t| {
            let hit = at_line_start
                && matches!(&t.tok, Tok::Ident(w) if w == "schema" || w == "attribute" || w == "classes");
            at_line_start = t.tok == Tok::Newline;
            hit
        })
    };
    if has_schema_decls {
        let embedded = parse_schema(text)?;
        if embedded.value != *schema {
            return Err(Error::SchemaMismatch(
                "embedded schema differs from the provided schema".to_string(),
            ));
        }
    }

    let mut parser = Parser::new(&tokens);
    let mut raw_rules: Vec<RawRule> = Vec::new();

    while let Some(token) = parser.peek() {
        match &token.tok {
            Tok::Newline => {
                parser.advance();
            }
            Tok::Ident(word) if word == "rule" => {
                parser.advance();
                if let Some(raw) = parser.rule_line(schema) {
                    raw_rules.push(raw);
                }
            }
            Tok::Ident(word) if word == "schema" || word == "attribute" || word == "classes" => {
                // Schema declarations were handled above.
                parser.skip_schema_decl(word.clone());
            }
            other => {
                let msg = format!("expected 'rule', found {}", other.describe());
                parser.error_here(msg);
                parser.skip_line();
            }
        }
    }

    if parser.has_errors() {
        return Err(Error::Syntax(parser.diags));
    }

    let mut rules = Vec::with_capacity(raw_rules.len());
    for (idx, raw) in raw_rules.into_iter().enumerate() {
        let class = schema.class_id(&raw.class_name)?;
        let id = raw.id.unwrap_or_else(|| format!("R{}", idx + 1));
        rules.push(Rule::new(schema, id, class, raw.conditions)?);
    }
    let system = RuleSystem::new(schema.clone(), rules)?;

    let mut warnings = parser.diags;
    for warning in system.warnings() {
        warnings.push(ParseDiagnostic::warning(0, 0, warning));
    }
    Ok(Parsed {
        value: system,
        warnings,
    })
}

struct RawRule {
    class_name: String,
    id: Option<String>,
    conditions: BTreeMap<AttrId, ValueSet>,
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    diags: Vec<ParseDiagnostic>,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token]) -> Parser<'t> {
        Parser {
            tokens,
            pos: 0,
            diags: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let token = self.tokens.get(self.pos);
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    fn last_pos(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((0, 0))
    }

    fn error_here(&mut self, message: String) {
        let (line, col) = self.last_pos();
        self.diags.push(ParseDiagnostic::error(line, col, message));
    }

    fn has_errors(&self) -> bool {
        self.diags.iter().any(ParseDiagnostic::is_error)
    }

    fn skip_line(&mut self) {
        while let Some(token) = self.advance() {
            if token.tok == Tok::Newline {
                break;
            }
        }
    }

    /// Skips a schema declaration that the schema pass already validated.
    /// Brace groups may span lines, so they are skipped as a unit.
    fn skip_schema_decl(&mut self, keyword: String) {
        if keyword == "schema" {
            let mut depth = 0usize;
            while let Some(token) = self.advance() {
                match token.tok {
                    Tok::LBrace => depth += 1,
                    Tok::RBrace => {
                        depth = depth.saturating_sub(1);
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
            }
        } else {
            while let Some(token) = self.advance() {
                match token.tok {
                    Tok::Newline => break,
                    Tok::LBrace => {
                        let mut depth = 1usize;
                        while let Some(inner) = self.advance() {
                            match inner.tok {
                                Tok::LBrace => depth += 1,
                                Tok::RBrace => {
                                    depth -= 1;
                                    if depth == 0 {
                                        break;
                                    }
                                }
                                _ => {}
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    fn expect_ident(&mut self, what: &str) -> Option<(String, usize, usize)> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                let out = (name.clone(), *line, *col);
                self.advance();
                Some(out)
            }
            Some(other) => {
                let msg = format!("expected {what}, found {}", other.tok.describe());
                self.error_here(msg);
                None
            }
            None => {
                self.error_here(format!("expected {what}, found end of input"));
                None
            }
        }
    }

    fn expect_tok(&mut self, tok: Tok) -> bool {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.advance();
                true
            }
            Some(other) => {
                let msg = format!("expected {}, found {}", tok.describe(), other.tok.describe());
                self.error_here(msg);
                false
            }
            None => {
                self.error_here(format!("expected {}, found end of input", tok.describe()));
                false
            }
        }
    }

    fn schema_block(
        &mut self,
        attrs: &mut Vec<(Attribute, usize, usize)>,
        classes: &mut Vec<(String, usize, usize)>,
    ) {
        if !self.expect_tok(Tok::LBrace) {
            self.skip_line();
            return;
        }
        loop {
            match self.peek() {
                Some(Token {
                    tok: Tok::Newline, ..
                }) => {
                    self.advance();
                }
                Some(Token {
                    tok: Tok::RBrace, ..
                }) => {
                    self.advance();
                    return;
                }
                Some(Token {
                    tok: Tok::Ident(word),
                    ..
                }) if word == "attribute" => {
                    self.advance();
                    self.attribute_decl(attrs);
                }
                Some(Token {
                    tok: Tok::Ident(word),
                    ..
                }) if word == "classes" => {
                    self.advance();
                    self.classes_decl(classes);
                }
                Some(other) => {
                    let msg = format!(
                        "expected 'attribute', 'classes' or '}}', found {}",
                        other.tok.describe()
                    );
                    self.error_here(msg);
                    self.skip_line();
                }
                None => {
                    self.error_here("unclosed schema block".to_string());
                    return;
                }
            }
        }
    }

    fn attribute_decl(&mut self, attrs: &mut Vec<(Attribute, usize, usize)>) {
        let Some((name, line, col)) = self.expect_ident("attribute name") else {
            self.skip_line();
            return;
        };
        if KEYWORDS.contains(&name.as_str()) {
            self.diags.push(ParseDiagnostic::error(
                line,
                col,
                format!("'{name}' is a reserved word"),
            ));
            self.skip_line();
            return;
        }
        if !self.expect_tok(Tok::Colon) {
            self.skip_line();
            return;
        }
        let Some((domain, ordered)) = self.domain(&name) else {
            self.skip_line();
            return;
        };
        attrs.push((Attribute::new(name, domain, ordered), line, col));
    }

    fn domain(&mut self, attr_name: &str) -> Option<(Vec<Value>, bool)> {
        let mut ordered = false;
        if let Some(Token {
            tok: Tok::Ident(word),
            ..
        }) = self.peek()
        {
            if word == "ordered" {
                ordered = true;
                self.advance();
            }
        }
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::LBrace) => {
                self.advance();
                let values = self.value_list(attr_name)?;
                Some((values, ordered))
            }
            Some(Tok::Int(lo)) => {
                self.advance();
                if !self.expect_tok(Tok::DotDot) {
                    return None;
                }
                let hi = match self.peek() {
                    Some(Token {
                        tok: Tok::Int(hi), ..
                    }) => {
                        let hi = *hi;
                        self.advance();
                        hi
                    }
                    _ => {
                        self.error_here("expected upper bound of range".to_string());
                        return None;
                    }
                };
                if hi < lo {
                    self.error_here(format!("malformed range {lo}..{hi}"));
                    return None;
                }
                let size = (hi - lo) as u128 + 1;
                if size > crate::model::DEFAULT_MAX_DOMAIN_SIZE as u128 {
                    self.error_here(format!(
                        "range {lo}..{hi} declares {size} values, above the bound of {}",
                        crate::model::DEFAULT_MAX_DOMAIN_SIZE
                    ));
                    return None;
                }
                // Integer ranges are inherently ordered.
                Some(((lo..=hi).map(Value::Int).collect(), true))
            }
            _ => {
                self.error_here(format!("expected domain for attribute {attr_name}"));
                None
            }
        }
    }

    fn value_list(&mut self, attr_name: &str) -> Option<Vec<Value>> {
        let mut values = Vec::new();
        loop {
            match self.peek() {
                Some(Token {
                    tok: Tok::RBrace, ..
                }) => {
                    self.advance();
                    if values.is_empty() {
                        self.error_here(format!("empty domain for attribute {attr_name}"));
                        return None;
                    }
                    return Some(values);
                }
                Some(Token {
                    tok: Tok::Newline, ..
                }) => {
                    self.advance();
                }
                _ => {
                    values.push(self.value_token()?);
                    match self.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Comma) => {
                            self.advance();
                        }
                        Some(Tok::RBrace) | Some(Tok::Newline) => {}
                        _ => {
                            self.error_here("expected ',' or '}' in value list".to_string());
                            return None;
                        }
                    }
                }
            }
        }
    }

    fn value_token(&mut self) -> Option<Value> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => {
                let v = Value::Sym(s.clone());
                self.advance();
                Some(v)
            }
            Some(Token {
                tok: Tok::Int(n), ..
            }) => {
                let v = Value::Int(*n);
                self.advance();
                Some(v)
            }
            Some(other) => {
                let msg = format!("expected a value, found {}", other.tok.describe());
                self.error_here(msg);
                None
            }
            None => {
                self.error_here("expected a value, found end of input".to_string());
                None
            }
        }
    }

    fn classes_decl(&mut self, classes: &mut Vec<(String, usize, usize)>) {
        if !self.expect_tok(Tok::LBrace) {
            self.skip_line();
            return;
        }
        loop {
            match self.peek() {
                Some(Token {
                    tok: Tok::RBrace, ..
                }) => {
                    self.advance();
                    return;
                }
                Some(Token {
                    tok: Tok::Newline, ..
                }) => {
                    self.advance();
                }
                _ => {
                    let Some((name, line, col)) = self.expect_ident("class name") else {
                        self.skip_line();
                        return;
                    };
                    if KEYWORDS.contains(&name.as_str()) {
                        self.diags.push(ParseDiagnostic::error(
                            line,
                            col,
                            format!("'{name}' is a reserved word"),
                        ));
                    }
                    classes.push((name, line, col));
                    if let Some(Token {
                        tok: Tok::Comma, ..
                    }) = self.peek()
                    {
                        self.advance();
                    }
                }
            }
        }
    }

    fn rule_line(&mut self, schema: &Schema) -> Option<RawRule> {
        let Some((class_name, ..)) = self.expect_ident("class name") else {
            self.skip_line();
            return None;
        };
        let mut id = None;
        if let Some(Token {
            tok: Tok::Colon, ..
        }) = self.peek()
        {
            self.advance();
            let Some((explicit, line, col)) = self.expect_ident("rule id") else {
                self.skip_line();
                return None;
            };
            if KEYWORDS.contains(&explicit.as_str()) {
                self.diags.push(ParseDiagnostic::error(
                    line,
                    col,
                    format!("'{explicit}' is a reserved word"),
                ));
                self.skip_line();
                return None;
            }
            id = Some(explicit);
        }
        if !self.expect_tok(Tok::ColonDash) {
            self.skip_line();
            return None;
        }

        let mut conditions: BTreeMap<AttrId, ValueSet> = BTreeMap::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Newline) | None => {
                    self.advance();
                    break;
                }
                _ => {}
            }
            let Some((attr, set, line, col)) = self.condition(schema) else {
                self.skip_line();
                return None;
            };
            if conditions.insert(attr, set).is_some() {
                self.diags.push(ParseDiagnostic::error(
                    line,
                    col,
                    format!(
                        "attribute {} constrained twice in one rule",
                        schema.attribute(attr).name()
                    ),
                ));
                self.skip_line();
                return None;
            }
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Comma) => {
                    self.advance();
                }
                Some(Tok::Newline) | None => {}
                Some(other) => {
                    self.error_here(format!(
                        "expected ',' or end of line, found {}",
                        other.describe()
                    ));
                    self.skip_line();
                    return None;
                }
            }
        }

        if conditions.is_empty() {
            self.error_here("rule has no conditions".to_string());
            return None;
        }
        Some(RawRule {
            class_name,
            id,
            conditions,
        })
    }

    fn condition(&mut self, schema: &Schema) -> Option<(AttrId, ValueSet, usize, usize)> {
        let (attr_name, line, col) = self.expect_ident("attribute name")?;
        let attr = match schema.attr_id(&attr_name) {
            Ok(attr) => attr,
            Err(_) => {
                self.diags.push(ParseDiagnostic::error(
                    line,
                    col,
                    format!("unknown attribute: {attr_name}"),
                ));
                return None;
            }
        };
        let universe = schema.attribute(attr).domain_size();

        let op = match self.advance() {
            Some(token) => token,
            None => {
                self.error_here("expected a condition operator".to_string());
                return None;
            }
        };

        let set = match &op.tok {
            Tok::Eq => {
                let idx = self.resolve_value(schema, attr)?;
                ValueSet::from_indices(universe, [idx])
            }
            Tok::Neq => {
                let idx = self.resolve_value(schema, attr)?;
                ValueSet::from_indices(universe, [idx]).complement()
            }
            Tok::Gt | Tok::Ge | Tok::Lt | Tok::Le => {
                if !schema.attribute(attr).ordered() {
                    self.diags.push(ParseDiagnostic::error(
                        op.line,
                        op.col,
                        format!(
                            "comparison requires an ordered domain, attribute {attr_name} is nominal"
                        ),
                    ));
                    return None;
                }
                let idx = self.resolve_value(schema, attr)?;
                let range: Vec<usize> = match op.tok {
                    Tok::Gt => ((idx + 1)..universe).collect(),
                    Tok::Ge => (idx..universe).collect(),
                    Tok::Lt => (0..idx).collect(),
                    Tok::Le => (0..=idx).collect(),
                    _ => unreachable!(),
                };
                ValueSet::from_indices(universe, range)
            }
            Tok::Ident(word) if word == "in" => {
                if !self.expect_tok(Tok::LBrace) {
                    return None;
                }
                let mut set = ValueSet::empty(universe);
                loop {
                    match self.peek().map(|t| t.tok.clone()) {
                        Some(Tok::RBrace) => {
                            self.advance();
                            break;
                        }
                        Some(Tok::Comma) => {
                            self.advance();
                        }
                        _ => {
                            let idx = self.resolve_value(schema, attr)?;
                            set.insert(idx);
                        }
                    }
                }
                set
            }
            other => {
                let msg = format!(
                    "expected '=', '!=', 'in' or a comparison, found {}",
                    other.describe()
                );
                self.diags
                    .push(ParseDiagnostic::error(op.line, op.col, msg));
                return None;
            }
        };

        if set.is_empty() {
            self.diags.push(ParseDiagnostic::error(
                line,
                col,
                format!("condition admits no values of attribute {attr_name}"),
            ));
            return None;
        }
        Some((attr, set, line, col))
    }

    fn resolve_value(&mut self, schema: &Schema, attr: AttrId) -> Option<usize> {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| self.last_pos());
        let value = self.value_token()?;
        match schema.value_index(attr, &value) {
            Ok(idx) => Some(idx),
            Err(_) => {
                self.diags.push(ParseDiagnostic::error(
                    line,
                    col,
                    format!(
                        "value {value} is not in the domain of attribute {}",
                        schema.attribute(attr).name()
                    ),
                ));
                None
            }
        }
    }
}

/// Renders a schema as a DSL block.
pub fn serialize_schema_dsl(schema: &Schema) -> String {
    let mut out = String::from("schema {\n");
    for attr in schema.attributes() {
        out.push_str(&format!(
            "  attribute {} : {}\n",
            attr.name(),
            domain_text(attr)
        ));
    }
    out.push_str(&format!("  classes {{ {} }}\n", schema.classes().join(", ")));
    out.push_str("}\n");
    out
}

fn domain_text(attr: &Attribute) -> String {
    if let Some((lo, hi)) = contiguous_int_range(attr.domain()) {
        if attr.ordered() {
            return format!("{lo}..{hi}");
        }
    }
    let values: Vec<String> = attr.domain().iter().map(|v| v.to_string()).collect();
    if attr.ordered() {
        format!("ordered {{ {} }}", values.join(", "))
    } else {
        format!("{{ {} }}", values.join(", "))
    }
}

fn contiguous_int_range(domain: &[Value]) -> Option<(i64, i64)> {
    let mut prev: Option<i64> = None;
    for value in domain {
        match value {
            Value::Int(n) => {
                if let Some(p) = prev {
                    if *n != p + 1 {
                        return None;
                    }
                }
                prev = Some(*n);
            }
            Value::Sym(_) => return None,
        }
    }
    match (domain.first(), prev) {
        (Some(Value::Int(lo)), Some(hi)) => Some((*lo, hi)),
        _ => None,
    }
}

/// Renders a full system document: schema block, warning annotations,
/// then one rule per line with explicit ids.
pub fn serialize_system_dsl(system: &RuleSystem) -> String {
    let schema = system.schema();
    let mut out = serialize_schema_dsl(schema);
    out.push('\n');
    for warning in system.warnings() {
        out.push_str(&format!("# warning: {warning}\n"));
    }
    for rule in system.rules() {
        let conds: Vec<String> = rule
            .conditions()
            .iter()
            .map(|(&attr, set)| condition_text(schema, attr, set))
            .collect();
        out.push_str(&format!(
            "rule {} : {} :- {}\n",
            schema.class_name(rule.class()),
            rule.id(),
            conds.join(", ")
        ));
    }
    out
}

fn condition_text(schema: &Schema, attr: AttrId, set: &ValueSet) -> String {
    let attribute = schema.attribute(attr);
    let domain = attribute.domain();
    let name = attribute.name();
    if set.len() == 1 {
        let idx = set.iter().next().unwrap();
        return format!("{name} = {}", domain[idx]);
    }
    if attribute.ordered() {
        if set.is_suffix_run() {
            let first = set.iter().next().unwrap();
            return format!("{name} >= {}", domain[first]);
        }
        if set.is_prefix_run() {
            let last = set.iter().last().unwrap();
            return format!("{name} <= {}", domain[last]);
        }
    }
    if set.len() == set.universe() - 1 {
        let missing = (0..set.universe()).find(|&i| !set.contains(i)).unwrap();
        return format!("{name} != {}", domain[missing]);
    }
    let values: Vec<String> = set.iter().map(|i| domain[i].to_string()).collect();
    format!("{name} in {{ {} }}", values.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
schema {
  attribute P : 1..20
  attribute W : { LE3, GE4 }
  classes { NotCar, Car }
}

rule NotCar : R1_1 :- P > 1, W = LE3
rule NotCar : R1_2 :- P > 10, W = GE4
rule Car : R2_1 :- P = 2, W = GE4
";

    #[test]
    fn parses_nominal_attribute() {
        let text = "attribute CO : {N, A, P}\nclasses { B, NB }\nattribute X : {Y, Z}";
        let schema = parse_schema(text).unwrap().value;
        let co = schema.attribute(schema.attr_id("CO").unwrap());
        assert_eq!(co.domain_size(), 3);
        assert!(!co.ordered());
        assert_eq!(co.domain()[2], Value::Sym("P".into()));
    }

    #[test]
    fn parses_ordered_range() {
        let text = "attribute P : ordered 1..20\nclasses { A, B }";
        let schema = parse_schema(text).unwrap().value;
        let p = schema.attribute(schema.attr_id("P").unwrap());
        assert_eq!(p.domain_size(), 20);
        assert!(p.ordered());
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse_schema("").is_err());
    }

    #[test]
    fn reports_position_of_bad_token() {
        let err = parse_schema("attribute P : 20..1\nclasses { A, B }").unwrap_err();
        match err {
            Error::Syntax(diags) => {
                assert!(diags[0].message.contains("malformed range"));
                assert_eq!(diags[0].line, 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parses_toy_system() {
        let schema = parse_schema(TOY).unwrap().value;
        let system = parse_system(TOY, &schema).unwrap().value;
        assert_eq!(system.rule_count(), 3);
        let r11 = system.rule_by_id("R1_1").unwrap();
        let p = schema.attr_id("P").unwrap();
        let w = schema.attr_id("W").unwrap();
        assert_eq!(r11.conditions()[&p].len(), 19);
        assert!(!r11.conditions()[&p].contains(0));
        assert_eq!(r11.conditions()[&w].iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(schema.class_name(r11.class()), "NotCar");
    }

    #[test]
    fn membership_and_negation_sugar() {
        let text = "\
attribute FF : {N, A, P}
attribute CO : {N, A, P}
classes { B, NB }
rule NB :- FF in {A, P}, CO != N
";
        let schema = parse_schema(text).unwrap().value;
        let system = parse_system(text, &schema).unwrap().value;
        let rule = &system.rules()[0];
        assert_eq!(rule.id(), "R1");
        let ff = schema.attr_id("FF").unwrap();
        let co = schema.attr_id("CO").unwrap();
        assert_eq!(rule.conditions()[&ff].iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(rule.conditions()[&co].iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_rules() {
        let schema = parse_schema(TOY).unwrap().value;
        for bad in [
            "rule NotCar :- W in {}\n",
            "rule NotCar :-\n",
            "rule NotCar :- Z = 1\n",
            "rule NotCar :- P = 21\n",
            "rule NotCar :- W > LE3\n",
            "rule NotCar :- P = 1, P = 2\n",
        ] {
            let err = parse_system(bad, &schema).unwrap_err();
            assert!(matches!(err, Error::Syntax(_)), "{bad} should be a syntax error");
        }
        // Unknown class is a semantic failure, not a syntax one.
        let err = parse_system("rule Bus :- P = 1\n", &schema).unwrap_err();
        assert!(matches!(err, Error::UnknownClass(_)));
    }

    #[test]
    fn embedded_schema_must_match() {
        let schema = parse_schema("attribute X : {a, b}\nclasses { C, D }").unwrap().value;
        assert!(matches!(
            parse_system(TOY, &schema),
            Err(Error::SchemaMismatch(_))
        ));
    }

    #[test]
    fn round_trips_toy_system() {
        let schema = parse_schema(TOY).unwrap().value;
        let system = parse_system(TOY, &schema).unwrap().value;
        let text = serialize_system_dsl(&system);
        let schema2 = parse_schema(&text).unwrap().value;
        let system2 = parse_system(&text, &schema2).unwrap().value;
        assert_eq!(system, system2);
        assert_eq!(text, serialize_system_dsl(&system2));
    }

    #[test]
    fn serializer_annotates_empty_classes() {
        let text = "attribute X : {a, b}\nclasses { C, D }\nrule C :- X = a\n";
        let schema = parse_schema(text).unwrap().value;
        let parsed = parse_system(text, &schema).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        let out = serialize_system_dsl(&parsed.value);
        assert!(out.contains("# warning: class D has no assignment rules"));
    }
}
