//! The input DSL: named bindings for rings, support families, ideals,
//! modules and valuations.
//!
//! Grammar (informal):
//!
//! ```text
//! stmt     := ring_stmt | supports_stmt | ideal_stmt | module_stmt | val_stmt ;
//! ring     := "ring" NAME "=" "QQ" "[" vars "]" [ "/" "(" polys ")" ] ";"
//! supports := "supports" NAME "on" NAME "=" "(" polys ")" { "," "(" polys ")" } ";"
//! ideal    := "ideal" NAME "=" "(" polys ")" ";"
//! module   := "module" NAME "=" "coker" "[" "[" polys "]" { "," "[" polys "]" } "]" ";"
//! val      := "valuation" NAME "on" NAME "=" int_matrix ";"
//! ```
//!
//! Rows of a module matrix are generators, columns are relations. Ideal and
//! module statements bind over the most recently declared ring; supports
//! and valuations name their ring explicitly.

use phiflat::cakernel::{AffineRing, MonomialOrder, Poly};
use phiflat::depth::PresentedModule;
use phiflat::philocal::ValuationData;
use phiflat::phiring::PhiRing;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unresolved name `{0}`")]
    Unresolved(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct NamedIdeal {
    pub ring_name: String,
    pub gens: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct NamedModule {
    pub ring_name: String,
    pub module: PresentedModule,
}

#[derive(Clone, Debug)]
pub struct NamedValuation {
    pub ring_name: String,
    pub data: ValuationData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum BindingKind {
    Ring,
    Supports,
    Ideal,
    Module,
    Valuation,
}

/// An ordered, name-unique collection of bindings.
#[derive(Clone, Debug, Default)]
pub struct Session {
    pub rings: BTreeMap<String, AffineRing>,
    pub supports: BTreeMap<String, (String, PhiRing)>,
    pub ideals: BTreeMap<String, NamedIdeal>,
    pub modules: BTreeMap<String, NamedModule>,
    pub valuations: BTreeMap<String, NamedValuation>,
    order: Vec<(BindingKind, String)>,
}

impl Session {
    pub fn ring(&self, name: &str) -> Result<&AffineRing, SessionError> {
        self.rings
            .get(name)
            .ok_or_else(|| SessionError::Unresolved(name.into()))
    }

    pub fn supports_ring(&self, name: &str) -> Result<&PhiRing, SessionError> {
        self.supports
            .get(name)
            .map(|(_, phi)| phi)
            .ok_or_else(|| SessionError::Unresolved(name.into()))
    }

    pub fn ideal(&self, name: &str) -> Result<&NamedIdeal, SessionError> {
        self.ideals
            .get(name)
            .ok_or_else(|| SessionError::Unresolved(name.into()))
    }

    pub fn module(&self, name: &str) -> Result<&NamedModule, SessionError> {
        self.modules
            .get(name)
            .ok_or_else(|| SessionError::Unresolved(name.into()))
    }

    pub fn valuation(&self, name: &str) -> Result<&NamedValuation, SessionError> {
        self.valuations
            .get(name)
            .ok_or_else(|| SessionError::Unresolved(name.into()))
    }

    /// The unique binding of a kind, for commands that omit the name.
    pub fn sole_supports(&self) -> Result<&PhiRing, SessionError> {
        if self.supports.len() == 1 {
            Ok(&self.supports.values().next().unwrap().1)
        } else {
            Err(SessionError::Invalid(format!(
                "expected exactly one supports binding, found {}",
                self.supports.len()
            )))
        }
    }

    pub fn sole_module(&self) -> Result<&NamedModule, SessionError> {
        if self.modules.len() == 1 {
            Ok(self.modules.values().next().unwrap())
        } else {
            Err(SessionError::Invalid(format!(
                "expected exactly one module binding, found {}",
                self.modules.len()
            )))
        }
    }

    /// Canonical text that reparses to an equal session.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for (kind, name) in &self.order {
            match kind {
                BindingKind::Ring => {
                    let ring = &self.rings[name];
                    write!(out, "ring {name} = QQ[{}]", ring.ambient().vars().join(",")).unwrap();
                    if !ring.defining().gens().is_empty() {
                        let gens: Vec<String> = ring
                            .defining()
                            .gens()
                            .iter()
                            .map(|p| p.to_string())
                            .collect();
                        write!(out, " / ({})", gens.join(", ")).unwrap();
                    }
                    out.push_str(";\n");
                }
                BindingKind::Supports => {
                    let (ring_name, phi) = &self.supports[name];
                    let members: Vec<String> = phi
                        .phi0()
                        .iter()
                        .map(|i| {
                            let gens: Vec<String> =
                                i.gens().iter().map(|p| p.to_string()).collect();
                            format!("({})", gens.join(", "))
                        })
                        .collect();
                    writeln!(
                        out,
                        "supports {name} on {ring_name} = {};",
                        members.join(", ")
                    )
                    .unwrap();
                }
                BindingKind::Ideal => {
                    let i = &self.ideals[name];
                    let gens: Vec<String> = i.gens.iter().map(|p| p.to_string()).collect();
                    writeln!(out, "ideal {name} = ({});", gens.join(", ")).unwrap();
                }
                BindingKind::Module => {
                    let m = &self.modules[name];
                    let cols = m.module.relation_strings();
                    let g = m.module.num_gens();
                    let rows: Vec<String> = (0..g)
                        .map(|r| {
                            let entries: Vec<String> = cols.iter().map(|c| c[r].clone()).collect();
                            format!("[{}]", entries.join(", "))
                        })
                        .collect();
                    writeln!(out, "module {name} = coker [{}];", rows.join(", ")).unwrap();
                }
                BindingKind::Valuation => {
                    let v = &self.valuations[name];
                    let rows: Vec<String> = v
                        .data
                        .weights()
                        .iter()
                        .map(|row| {
                            let entries: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                            format!("[{}]", entries.join(", "))
                        })
                        .collect();
                    writeln!(
                        out,
                        "valuation {name} on {} = [{}];",
                        v.ring_name,
                        rows.join(", ")
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}

/// Parse a session script. Ring statements use `default_order`; support
/// families with a vanishing product are rejected unless `degenerate_ok`.
pub fn parse_session(text: &str, default_order: MonomialOrder) -> Result<Session, SessionError> {
    parse_session_with(text, default_order, false)
}

pub fn parse_session_with(
    text: &str,
    default_order: MonomialOrder,
    degenerate_ok: bool,
) -> Result<Session, SessionError> {
    Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        default_order,
        degenerate_ok,
    }
    .parse()
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    default_order: MonomialOrder,
    degenerate_ok: bool,
}

impl<'a> Parser<'a> {
    fn err_at(&self, pos: usize, message: impl Into<String>) -> SessionError {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.bytes[..pos.min(self.bytes.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        SessionError::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> SessionError {
        self.err_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            // line comments
            if self.pos + 1 < self.bytes.len() && &self.bytes[self.pos..self.pos + 2] == b"//" {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), SessionError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{}`", c as char))),
        }
    }

    fn word(&mut self) -> Result<&'a str, SessionError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn integer(&mut self) -> Result<i64, SessionError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.err_at(start, "expected an integer"))
    }

    /// A balanced parenthesized group, split at top-level commas; each
    /// piece parsed as a polynomial of `ring`.
    fn poly_group(&mut self, ring: &AffineRing) -> Result<Vec<Poly>, SessionError> {
        self.expect(b'(')?;
        let mut pieces = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        loop {
            let Some(&b) = self.bytes.get(self.pos) else {
                return Err(self.err("unterminated `(`"));
            };
            match b {
                b'(' => depth += 1,
                b')' if depth > 0 => depth -= 1,
                b')' => {
                    pieces.push((start, self.pos));
                    self.pos += 1;
                    break;
                }
                b',' if depth == 0 => {
                    pieces.push((start, self.pos));
                    start = self.pos + 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        let mut out = Vec::new();
        for (s, e) in pieces {
            let chunk = &self.text[s..e];
            if chunk.trim().is_empty() {
                return Err(self.err_at(e, "empty polynomial"));
            }
            let poly = ring
                .ambient()
                .parse(chunk)
                .map_err(|err| self.err_at(s, err.to_string()))?;
            out.push(poly);
        }
        Ok(out)
    }

    fn parse(mut self) -> Result<Session, SessionError> {
        let mut session = Session::default();
        let mut current_ring: Option<String> = None;
        loop {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                break;
            }
            let keyword_pos = self.pos;
            let keyword = self.word()?;
            match keyword {
                "ring" => {
                    let name = self.bind_name(&mut session)?;
                    self.expect(b'=')?;
                    let qq = self.word()?;
                    if qq != "QQ" {
                        return Err(self.err("expected coefficient field `QQ`"));
                    }
                    self.expect(b'[')?;
                    let mut vars = Vec::new();
                    loop {
                        vars.push(self.word()?.to_string());
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b']') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `]`")),
                        }
                    }
                    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                    let plain = AffineRing::parse_ring(&var_refs, &[], self.default_order)
                        .map_err(|e| self.err(e.to_string()))?;
                    let ring = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let gens = self.poly_group(&plain)?;
                        let ideal = phiflat::cakernel::Ideal::new(plain.ambient(), gens)
                            .map_err(|e| self.err(e.to_string()))?;
                        AffineRing::quotient(plain.ambient().clone(), ideal)
                            .map_err(|e| self.err(e.to_string()))?
                    } else {
                        plain
                    };
                    self.expect(b';')?;
                    session.rings.insert(name.clone(), ring);
                    session.order.push((BindingKind::Ring, name.clone()));
                    current_ring = Some(name);
                }
                "supports" => {
                    let name = self.bind_name(&mut session)?;
                    self.keyword("on")?;
                    let ring_name = self.word()?.to_string();
                    let ring = session.ring(&ring_name)?.clone();
                    self.expect(b'=')?;
                    let mut members = Vec::new();
                    loop {
                        let gens = self.poly_group(&ring)?;
                        let ideal = phiflat::cakernel::Ideal::new(ring.ambient(), gens)
                            .map_err(|e| self.err(e.to_string()))?;
                        members.push(ideal);
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b';') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `;`")),
                        }
                    }
                    let phi = PhiRing::new(ring, members, self.degenerate_ok)
                        .map_err(|e| self.err(e.to_string()))?;
                    session.supports.insert(name.clone(), (ring_name, phi));
                    session.order.push((BindingKind::Supports, name));
                }
                "ideal" => {
                    let name = self.bind_name(&mut session)?;
                    self.expect(b'=')?;
                    let ring_name = current_ring
                        .clone()
                        .ok_or_else(|| self.err("no ring declared before `ideal`"))?;
                    let ring = session.ring(&ring_name)?.clone();
                    let gens = self.poly_group(&ring)?;
                    self.expect(b';')?;
                    session
                        .ideals
                        .insert(name.clone(), NamedIdeal { ring_name, gens });
                    session.order.push((BindingKind::Ideal, name));
                }
                "module" => {
                    let name = self.bind_name(&mut session)?;
                    self.expect(b'=')?;
                    self.keyword("coker")?;
                    let ring_name = current_ring
                        .clone()
                        .ok_or_else(|| self.err("no ring declared before `module`"))?;
                    let ring = session.ring(&ring_name)?.clone();
                    self.expect(b'[')?;
                    let mut rows: Vec<Vec<Poly>> = Vec::new();
                    loop {
                        self.skip_ws();
                        if self.bytes.get(self.pos) != Some(&b'[') {
                            return Err(self.err("expected `[` starting a matrix row"));
                        }
                        let row = self.bracket_group(&ring)?;
                        rows.push(row);
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b']') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `]`")),
                        }
                    }
                    self.expect(b';')?;
                    let g = rows.len();
                    let ncols = rows.first().map_or(0, |r| r.len());
                    for r in &rows {
                        if r.len() != ncols {
                            return Err(self.err("ragged module matrix"));
                        }
                    }
                    let cols: Vec<Vec<Poly>> = (0..ncols)
                        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
                        .collect();
                    let module = PresentedModule::new(&ring, g, cols)
                        .map_err(|e| self.err(e.to_string()))?;
                    session
                        .modules
                        .insert(name.clone(), NamedModule { ring_name, module });
                    session.order.push((BindingKind::Module, name));
                }
                "valuation" => {
                    let name = self.bind_name(&mut session)?;
                    self.keyword("on")?;
                    let ring_name = self.word()?.to_string();
                    let ring = session.ring(&ring_name)?.clone();
                    self.expect(b'=')?;
                    self.expect(b'[')?;
                    let mut weights: Vec<Vec<i64>> = Vec::new();
                    loop {
                        self.expect(b'[')?;
                        let mut row = Vec::new();
                        loop {
                            row.push(self.integer()?);
                            match self.peek() {
                                Some(b',') => {
                                    self.pos += 1;
                                }
                                Some(b']') => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return Err(self.err("expected `,` or `]`")),
                            }
                        }
                        weights.push(row);
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b']') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `]`")),
                        }
                    }
                    self.expect(b';')?;
                    let data = ValuationData::new(ring.ambient().num_vars(), weights)
                        .map_err(|e| self.err(e.to_string()))?;
                    session
                        .valuations
                        .insert(name.clone(), NamedValuation { ring_name, data });
                    session.order.push((BindingKind::Valuation, name));
                }
                other => {
                    return Err(self.err_at(keyword_pos, format!("unknown statement `{other}`")))
                }
            }
        }
        Ok(session)
    }

    fn bind_name(&mut self, session: &mut Session) -> Result<String, SessionError> {
        let name = self.word()?.to_string();
        let taken = session.rings.contains_key(&name)
            || session.supports.contains_key(&name)
            || session.ideals.contains_key(&name)
            || session.modules.contains_key(&name)
            || session.valuations.contains_key(&name);
        if taken {
            return Err(SessionError::Duplicate(name));
        }
        Ok(name)
    }

    fn keyword(&mut self, expected: &str) -> Result<(), SessionError> {
        let pos = self.pos;
        let w = self.word()?;
        if w != expected {
            return Err(self.err_at(pos, format!("expected `{expected}`")));
        }
        Ok(())
    }

    /// A bracketed row `[f, g, h]` of polynomials.
    fn bracket_group(&mut self, ring: &AffineRing) -> Result<Vec<Poly>, SessionError> {
        self.expect(b'[')?;
        let mut pieces = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        loop {
            let Some(&b) = self.bytes.get(self.pos) else {
                return Err(self.err("unterminated `[`"));
            };
            match b {
                b'(' => depth += 1,
                b')' if depth > 0 => depth -= 1,
                b']' if depth == 0 => {
                    pieces.push((start, self.pos));
                    self.pos += 1;
                    break;
                }
                b',' if depth == 0 => {
                    pieces.push((start, self.pos));
                    start = self.pos + 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        let mut out = Vec::new();
        for (s, e) in pieces {
            let chunk = &self.text[s..e];
            if chunk.trim().is_empty() {
                return Err(self.err_at(e, "empty matrix entry"));
            }
            let poly = ring
                .ambient()
                .parse(chunk)
                .map_err(|err| self.err_at(s, err.to_string()))?;
            out.push(poly);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAGSHIP: &str = "ring A = QQ[u,v];\nsupports S on A = (u, v);\nideal I = (u, v);\nmodule M = coker [[v], [-u]];\n";

    #[test]
    fn parses_the_flagship_session() {
        let s = parse_session(FLAGSHIP, MonomialOrder::GrevLex).unwrap();
        assert_eq!(s.rings.len(), 1);
        assert_eq!(s.supports.len(), 1);
        assert_eq!(s.ideals.len(), 1);
        assert_eq!(s.modules.len(), 1);
        let m = s.module("M").unwrap();
        assert_eq!(m.module.num_gens(), 2);
    }

    #[test]
    fn print_parse_round_trip() {
        let scripts = [
            FLAGSHIP,
            "ring B = QQ[s,t] / (s*t);\nsupports S on B = (s), (t);\n",
            "ring A = QQ[u,v];\nvaluation V on A = [[1,0],[0,1]];\nideal J = (u^2 - v, 1/2*u);\n",
        ];
        for script in scripts {
            let once = parse_session_with(script, MonomialOrder::GrevLex, true).unwrap();
            let printed = once.print();
            let twice = parse_session_with(&printed, MonomialOrder::GrevLex, true).unwrap();
            assert_eq!(printed, twice.print());
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_session("ideal I = (u,;", MonomialOrder::GrevLex).unwrap_err();
        match err {
            SessionError::Parse { line: 1, .. } => {}
            other => panic!("unexpected: {other:?}"),
        }
        let err =
            parse_session("ring A = QQ[u];\nideal I = (w);", MonomialOrder::GrevLex).unwrap_err();
        match err {
            SessionError::Parse { line: 2, .. } => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err =
            parse_session("ring A = QQ[u];\nideal A = (u);", MonomialOrder::GrevLex).unwrap_err();
        assert!(matches!(err, SessionError::Duplicate(_)));
    }
}
