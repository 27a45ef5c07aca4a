//! Family specs: `family:<domain>:<name>[(:|_)<params>]`.
//!
//! Domains `poset` and `graph` name combinatorial objects; `order`, `chain`,
//! `stable` and `edge` name the corresponding polytope. Names are matched by
//! longest prefix, so `gamma_5_3` is the name itself while `K_2,3` is `K`
//! with parameters `2,3`. Parameters are comma-separated nonnegative integers.

use std::fmt;

use toriclass::graph::families as gf;
use toriclass::graph::SimpleGraph;
use toriclass::poset::families as pf;
use toriclass::poset::Poset;

/// Parse failure at a 1-based column of the family string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Poset,
    Graph,
    Order,
    Chain,
    Stable,
    Edge,
}

impl Domain {
    const ALL: [(&'static str, Domain); 6] = [
        ("poset", Domain::Poset),
        ("graph", Domain::Graph),
        ("order", Domain::Order),
        ("chain", Domain::Chain),
        ("stable", Domain::Stable),
        ("edge", Domain::Edge),
    ];

    pub fn takes_poset(self) -> bool {
        matches!(self, Domain::Poset | Domain::Order | Domain::Chain)
    }
}

#[derive(Debug, Clone)]
pub enum Object {
    Poset(Poset),
    Graph(SimpleGraph),
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub domain: Domain,
    pub object: Object,
}

const POSET_NAMES: &[&str] = &["Pi1", "Pi2", "Pi3", "Pi4", "X", "X_pt", "chain", "antichain"];
const GRAPH_NAMES: &[&str] = &[
    "K", "P", "C", "Kst", "K1st", "KX", "K_prop53", "gamma", "gamma_5_3", "H", "H_5_2", "H_printed", "glued",
];

struct Cursor<'a> {
    s: &'a str,
    /// Byte offset into `s`.
    pos: usize,
    /// Column of `s[0]` in the original spec.
    base: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError { column: self.base + self.s[..at].chars().count(), message: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn expect(&mut self, lit: &str) -> Result<(), SpecError> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{lit}'"))
        }
    }

    /// Longest entry of `names` that is a prefix of the rest and is followed
    /// by the end, `:` or `_`.
    fn name(&mut self, names: &[&'static str], what: &str) -> Result<&'static str, SpecError> {
        let rest = self.rest();
        let hit = names
            .iter()
            .filter(|n| {
                rest.starts_with(**n) && matches!(rest[n.len()..].chars().next(), None | Some(':') | Some('_'))
            })
            .max_by_key(|n| n.len());
        match hit {
            Some(n) => {
                self.pos += n.len();
                Ok(n)
            }
            None => self.err(self.pos, format!("unknown {what} '{}'; expected one of {}", rest, names.join(", "))),
        }
    }

    fn params(&mut self) -> Result<Vec<(usize, usize)>, SpecError> {
        let mut out = Vec::new();
        match self.rest().chars().next() {
            None => return Ok(out),
            Some(':') | Some('_') => self.pos += 1,
            Some(_) => return self.err(self.pos, "expected ':' or '_' before parameters"),
        }
        loop {
            let start = self.pos;
            let digits = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
            if digits == 0 {
                return self.err(start, "expected a nonnegative integer");
            }
            self.pos += digits;
            match self.s[start..self.pos].parse() {
                Ok(v) => out.push((v, start)),
                Err(_) => return self.err(start, "integer out of range"),
            }
            match self.rest().chars().next() {
                None => return Ok(out),
                Some(',') => self.pos += 1,
                Some(_) => return self.err(self.pos, "expected ',' or end of spec"),
            }
        }
    }
}

fn values(p: &[(usize, usize)]) -> Vec<usize> {
    p.iter().map(|x| x.0).collect()
}

fn total(v: &[usize]) -> usize {
    v.iter().fold(0usize, |a, &b| a.saturating_add(b))
}

/// Column-tagged errors for arity and construction failures.
fn arity(c: &Cursor, name: &str, p: &[(usize, usize)], ok: &[usize], at: usize) -> Result<(), SpecError> {
    if ok.contains(&p.len()) {
        return Ok(());
    }
    let want: Vec<String> = ok.iter().map(|k| k.to_string()).collect();
    c.err(at, format!("{name} takes {} parameters, got {}", want.join(" or "), p.len()))
}

fn built<T>(c: &Cursor, at: usize, r: toriclass::Result<T>) -> Result<T, SpecError> {
    r.or_else(|e| c.err(at, e.to_string()))
}

fn poset_family(c: &mut Cursor) -> Result<Poset, SpecError> {
    let at = c.pos;
    let name = c.name(POSET_NAMES, "poset family")?;
    let ps = c.params()?;
    let v = values(&ps);
    // every Pi family has at most one element beyond its parameters
    if name.starts_with("Pi") && total(&v) >= 64 {
        return c.err(at, "posets are limited to 64 elements");
    }
    let p = match name {
        "Pi1" => {
            arity(c, name, &ps, &[2], at)?;
            built(c, at, pf::pi1(v[0], v[1]))?
        }
        "Pi2" => {
            arity(c, name, &ps, &[4], at)?;
            built(c, at, pf::pi2(v[0], v[1], v[2], v[3]))?
        }
        "Pi3" => {
            arity(c, name, &ps, &[5], at)?;
            built(c, at, pf::pi3(v[0], v[1], v[2], v[3], v[4]))?
        }
        "Pi4" => {
            arity(c, name, &ps, &[4], at)?;
            built(c, at, pf::pi4(v[0], v[1], v[2], v[3]))?
        }
        "X" => {
            arity(c, name, &ps, &[0], at)?;
            pf::x_shape()
        }
        "X_pt" => {
            arity(c, name, &ps, &[0], at)?;
            pf::x_shape().disjoint_union(&Poset::antichain(1))
        }
        "chain" => {
            arity(c, name, &ps, &[1], at)?;
            if v[0] > 64 {
                return c.err(at, "posets are limited to 64 elements");
            }
            Poset::chain(v[0])
        }
        "antichain" => {
            arity(c, name, &ps, &[1], at)?;
            if v[0] > 64 {
                return c.err(at, "posets are limited to 64 elements");
            }
            Poset::antichain(v[0])
        }
        _ => unreachable!("name list and match arms agree"),
    };
    if p.size() > 64 {
        return c.err(at, "posets are limited to 64 elements");
    }
    Ok(p)
}

fn graph_family(c: &mut Cursor) -> Result<SimpleGraph, SpecError> {
    let at = c.pos;
    if c.rest().starts_with("G_") {
        c.pos += 2;
        return Ok(poset_family(c)?.comparability_graph());
    }
    let name = c.name(GRAPH_NAMES, "graph family")?;
    let ps = c.params()?;
    let v = values(&ps);
    let limit = |n: usize| if n > 64 { c.err(at, "graphs are limited to 64 vertices") } else { Ok(()) };
    let g = match name {
        "K" => {
            if v.is_empty() {
                return c.err(at, "K needs at least one part size");
            }
            limit(total(&v))?;
            match v.len() {
                1 => gf::complete(v[0]),
                2 => built(c, at, gf::complete_bipartite(v[0], v[1]))?,
                _ => built(c, at, gf::complete_multipartite(&v))?,
            }
        }
        "P" => {
            arity(c, name, &ps, &[1], at)?;
            limit(v[0])?;
            gf::path(v[0])
        }
        "C" => {
            arity(c, name, &ps, &[1], at)?;
            limit(v[0])?;
            built(c, at, gf::cycle(v[0]))?
        }
        "Kst" | "K1st" | "KX" | "K_prop53" => {
            arity(c, name, &ps, &[4], at)?;
            limit(total(&v).saturating_add(3))?;
            let f = match name {
                "Kst" => gf::k_s1s2_t1t2,
                "K1st" => gf::k_1s1s2_t1t2,
                _ => gf::k_x_shape,
            };
            built(c, at, f(v[0], v[1], v[2], v[3]))?
        }
        "gamma" | "gamma_5_3" => {
            arity(c, name, &ps, &[0], at)?;
            gf::gamma()
        }
        "H" | "H_5_2" => {
            arity(c, name, &ps, &[0], at)?;
            gf::h_graph()
        }
        "H_printed" => {
            arity(c, name, &ps, &[0], at)?;
            gf::h_graph_printed()
        }
        "glued" => {
            if v.is_empty() {
                return c.err(at, "glued needs a case code followed by its parameters");
            }
            limit(total(&v[1..]))?;
            let case = built(c, ps[0].1, gf::GluedCase::from_code(v[0]))?;
            built(c, at, gf::glued(case, &v[1..]))?
        }
        _ => unreachable!("name list and match arms agree"),
    };
    Ok(g)
}

/// A bare family name such as `Pi2:1,1,1,2` or `gamma_5_3`.
pub fn parse_poset_family(s: &str) -> Result<Poset, SpecError> {
    let mut c = Cursor { s, pos: 0, base: 1 };
    poset_family(&mut c)
}

pub fn parse_graph_family(s: &str) -> Result<SimpleGraph, SpecError> {
    let mut c = Cursor { s, pos: 0, base: 1 };
    graph_family(&mut c)
}

pub fn is_family_spec(s: &str) -> bool {
    s.starts_with("family:")
}

/// A full `family:<domain>:<name>...` spec.
pub fn parse_spec(s: &str) -> Result<FamilySpec, SpecError> {
    let mut c = Cursor { s, pos: 0, base: 1 };
    c.expect("family:")?;
    let at = c.pos;
    let domain = Domain::ALL
        .iter()
        .find(|(n, _)| c.rest().starts_with(n) && c.rest()[n.len()..].starts_with(':'))
        .map(|&(n, d)| (n, d));
    let Some((dname, domain)) = domain else {
        let names: Vec<&str> = Domain::ALL.iter().map(|x| x.0).collect();
        return c.err(at, format!("unknown domain; expected one of {}", names.join(", ")));
    };
    c.pos += dname.len() + 1;
    let object = if domain.takes_poset() {
        Object::Poset(poset_family(&mut c)?)
    } else {
        Object::Graph(graph_family(&mut c)?)
    };
    Ok(FamilySpec { domain, object })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(s: &str) -> SimpleGraph {
        match parse_spec(s).unwrap().object {
            Object::Graph(g) => g,
            Object::Poset(_) => panic!("{s} is a poset"),
        }
    }

    #[test]
    fn names_match_by_longest_prefix() {
        assert_eq!(graph("family:edge:K_2,2").edge_count(), 4);
        assert_eq!(graph("family:stable:gamma_5_3").n(), 6);
        assert_eq!(graph("family:graph:K:2,2,2").edge_count(), 12);
        assert_eq!(graph("family:graph:H_printed").edge_count(), 8);
        assert_eq!(graph("family:graph:K1st:1,1,1,1").n(), 5);
        assert_eq!(graph("family:stable:G_Pi2:1,1,1,2").n(), 5);
        let s = parse_spec("family:order:Pi1:1,1").unwrap();
        assert_eq!(s.domain, Domain::Order);
        assert!(matches!(s.object, Object::Poset(ref p) if p.size() == 2));
        assert!(matches!(parse_spec("family:order:X_pt").unwrap().object, Object::Poset(ref p) if p.size() == 6));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_spec("family:edge:K_2,x").unwrap_err();
        assert_eq!(e.column, 17, "{e}");
        let e = parse_spec("family:ring:K_2").unwrap_err();
        assert_eq!(e.column, 8, "{e}");
        let e = parse_spec("family:order:Pi9:1").unwrap_err();
        assert_eq!(e.column, 14, "{e}");
        let e = parse_spec("family:order:Pi1:1").unwrap_err();
        assert!(e.message.contains("takes 2"), "{e}");
        assert_eq!(parse_spec("fam:edge:K_2").unwrap_err().column, 1);
        assert!(parse_spec("family:graph:glued:13,2,2,2").unwrap_err().message.contains("13"));
    }
}
