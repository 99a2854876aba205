//! Text formats.
//!
//! Configuration:
//!
//! ```text
//! configuration fano
//! points 7            # optional when a mod line is present
//! mod 7 : 1 2 4       # expands to the translates of the base line
//! line 1 2 4
//! ```
//!
//! Orbiconfiguration (`*c` defaults to 1):
//!
//! ```text
//! orbiconfiguration chain
//! point 1 a=2
//! point 2 a=1
//! line b=1 d=1 : 1 2
//! line b=2 d=1 : 2*2
//! ```
//!
//! Covering map: `cover <name>`, `base <name>`, then `map <p> -> <q>` for
//! every cover point. Group: `group <name>`, `on <configuration name>`,
//! optional `order <k>`, then `generator <cycles>` lines.
//!
//! Points are 1-based in files. `#` starts a comment. Errors carry the
//! 1-based file line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::covering::{verify_covering, CoveringMap};
use crate::incidence::{from_mod_notation, Configuration, IncidenceStructure};
use crate::orbi::{OrbiIncidenceStructure, OrbiLine};
use crate::perm::{Permutation, PermutationGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("{0}")]
    Whole(String),
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::At {
            line,
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError::Whole(message.into())
    }
}

/// Non-empty lines with comments stripped, paired with 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number(line: usize, word: &str, what: &str) -> Result<usize, ParseError> {
    word.parse()
        .map_err(|_| ParseError::at(line, format!("{what} must be a non-negative integer, got `{word}`")))
}

fn header<'a>(line: usize, words: &[&'a str], keyword: &str) -> Result<&'a str, ParseError> {
    match words {
        [_, name] => Ok(name),
        _ => Err(ParseError::at(line, format!("expected `{keyword} <name>`"))),
    }
}

/// A named incidence structure as read from a file; not yet validated as a
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationFile {
    pub name: String,
    pub structure: IncidenceStructure,
}

pub fn parse_configuration(text: &str) -> Result<ConfigurationFile, ParseError> {
    let mut name = None;
    let mut points: Option<(usize, usize)> = None;
    let mut modulus_max = 0;
    // sorted point set -> file line that introduced it
    let mut lines: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut origin: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut add = |set: Vec<usize>, at: usize| -> Result<(), ParseError> {
        if let Some(&first) = origin.get(&set) {
            return Err(ParseError::at(
                at,
                format!("duplicate line: same points as line {first}"),
            ));
        }
        origin.insert(set.clone(), at);
        lines.push((set, at));
        Ok(())
    };
    for (at, words) in content_lines(text) {
        match words[0] {
            "configuration" => {
                if name.is_some() {
                    return Err(ParseError::at(at, "second `configuration` header"));
                }
                name = Some(header(at, &words, "configuration")?.to_string());
            }
            _ if name.is_none() => {
                return Err(ParseError::at(at, "file must start with `configuration <name>`"));
            }
            "points" => {
                if words.len() != 2 {
                    return Err(ParseError::at(at, "expected `points <n>`"));
                }
                if let Some((_, first)) = points {
                    return Err(ParseError::at(at, format!("point count already given on line {first}")));
                }
                points = Some((number(at, words[1], "point count")?, at));
            }
            "line" => {
                let mut set = words[1..]
                    .iter()
                    .map(|w| number(at, w, "point"))
                    .collect::<Result<Vec<_>, _>>()?;
                if set.is_empty() {
                    return Err(ParseError::at(at, "line has no points"));
                }
                if set.contains(&0) {
                    return Err(ParseError::at(at, "points are numbered from 1"));
                }
                set.iter_mut().for_each(|p| *p -= 1);
                set.sort_unstable();
                if set.windows(2).any(|w| w[0] == w[1]) {
                    return Err(ParseError::at(at, "line repeats a point"));
                }
                add(set, at)?;
            }
            "mod" => {
                let colon = words.iter().position(|w| *w == ":");
                let (Some(2), true) = (colon, words.len() > 3) else {
                    return Err(ParseError::at(at, "expected `mod <modulus> : <r1> <r2> ...`"));
                };
                let modulus = number(at, words[1], "modulus")?;
                let base = words[3..]
                    .iter()
                    .map(|w| number(at, w, "residue"))
                    .collect::<Result<Vec<_>, _>>()?;
                let e = from_mod_notation(&base, modulus).map_err(|e| ParseError::at(at, e.to_string()))?;
                modulus_max = modulus_max.max(modulus);
                for l in e.structure.lines() {
                    add(l.clone(), at)?;
                }
            }
            other => return Err(ParseError::at(at, format!("unknown directive `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| ParseError::whole("empty file: expected `configuration <name>`"))?;
    let point_count = match points {
        Some((n, at)) if n < modulus_max => {
            return Err(ParseError::at(at, format!("{n} points but a mod line uses {modulus_max}")));
        }
        Some((n, _)) => n,
        None if modulus_max > 0 => modulus_max,
        None => return Err(ParseError::whole("missing `points <n>`")),
    };
    for (set, at) in &lines {
        if let Some(&p) = set.iter().find(|&&p| p >= point_count) {
            return Err(ParseError::at(*at, format!("point {} is outside 1..={point_count}", p + 1)));
        }
    }
    let structure = IncidenceStructure::new(point_count, lines.into_iter().map(|(s, _)| s).collect())
        .map_err(|e| ParseError::whole(e.to_string()))?;
    Ok(ConfigurationFile { name, structure })
}

/// Points ascending, lines in lexicographic order.
pub fn write_configuration(name: &str, s: &IncidenceStructure) -> String {
    let mut out = format!("configuration {name}\npoints {}\n", s.point_count());
    for line in s.canonical().lines() {
        let pts: Vec<String> = line.iter().map(|p| (p + 1).to_string()).collect();
        writeln!(out, "line {}", pts.join(" ")).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbiFile {
    pub name: String,
    pub structure: OrbiIncidenceStructure,
}

fn key_value(at: usize, word: &str, key: &str) -> Result<u64, ParseError> {
    let value = word
        .strip_prefix(key)
        .and_then(|w| w.strip_prefix('='))
        .ok_or_else(|| ParseError::at(at, format!("expected `{key}=<int>`, got `{word}`")))?;
    value
        .parse()
        .map_err(|_| ParseError::at(at, format!("`{key}` must be a positive integer, got `{value}`")))
}

pub fn parse_orbiconfiguration(text: &str) -> Result<OrbiFile, ParseError> {
    let mut name = None;
    let mut weights: BTreeMap<usize, (u64, usize)> = BTreeMap::new();
    let mut lines: Vec<(OrbiLine, usize)> = Vec::new();
    for (at, words) in content_lines(text) {
        match words[0] {
            "orbiconfiguration" => {
                if name.is_some() {
                    return Err(ParseError::at(at, "second `orbiconfiguration` header"));
                }
                name = Some(header(at, &words, "orbiconfiguration")?.to_string());
            }
            _ if name.is_none() => {
                return Err(ParseError::at(at, "file must start with `orbiconfiguration <name>`"));
            }
            "point" => {
                let [_, id, a] = words[..] else {
                    return Err(ParseError::at(at, "expected `point <id> a=<int>`"));
                };
                let id = number(at, id, "point id")?;
                if id == 0 {
                    return Err(ParseError::at(at, "points are numbered from 1"));
                }
                let a = key_value(at, a, "a")?;
                if let Some((_, first)) = weights.insert(id, (a, at)) {
                    return Err(ParseError::at(at, format!("point {id} already declared on line {first}")));
                }
            }
            "line" => {
                let [_, b, d, ":", ref rest @ ..] = words[..] else {
                    return Err(ParseError::at(at, "expected `line b=<int> d=<int> : <pid>*<c> ...`"));
                };
                let b = key_value(at, b, "b")?;
                let d = key_value(at, d, "d")?;
                let mut incidences = Vec::new();
                for w in rest {
                    let (p, c) = match w.split_once('*') {
                        Some((p, c)) => (p, number(at, c, "incidence multiplicity")? as u64),
                        None => (*w, 1),
                    };
                    let p = number(at, p, "point id")?;
                    if p == 0 {
                        return Err(ParseError::at(at, "points are numbered from 1"));
                    }
                    incidences.push((p - 1, c));
                }
                lines.push((OrbiLine::new(b, d, incidences), at));
            }
            other => return Err(ParseError::at(at, format!("unknown directive `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| ParseError::whole("empty file: expected `orbiconfiguration <name>`"))?;
    let n = weights.len();
    if let Some((&id, &(_, at))) = weights.iter().find(|(&id, _)| id > n) {
        return Err(ParseError::at(at, format!("point ids must be 1..={n}, found {id}")));
    }
    for (line, at) in &lines {
        if let Some(&(p, _)) = line.incidences().iter().find(|(p, _)| *p >= n) {
            return Err(ParseError::at(*at, format!("point {} is not declared", p + 1)));
        }
    }
    let a = weights.values().map(|&(w, _)| w).collect();
    let file_lines: Vec<usize> = lines.iter().map(|(_, at)| *at).collect();
    let structure = OrbiIncidenceStructure::new(a, lines.into_iter().map(|(l, _)| l).collect()).map_err(|e| {
        // structure errors number lines from 1 in declaration order
        match e {
            crate::orbi::OrbiError::DuplicateLine { first, second } => ParseError::at(
                file_lines[second - 1],
                format!("duplicate line: same data as line {}", file_lines[first - 1]),
            ),
            other => ParseError::whole(other.to_string()),
        }
    })?;
    Ok(OrbiFile { name, structure })
}

/// Points ascending, lines sorted.
pub fn write_orbiconfiguration(name: &str, o: &OrbiIncidenceStructure) -> String {
    let mut out = format!("orbiconfiguration {name}\n");
    for (i, a) in o.point_weights().iter().enumerate() {
        writeln!(out, "point {} a={a}", i + 1).unwrap();
    }
    for line in o.canonical().lines() {
        let inc: Vec<String> = line
            .incidences()
            .iter()
            .map(|&(p, c)| if c == 1 { (p + 1).to_string() } else { format!("{}*{c}", p + 1) })
            .collect();
        writeln!(out, "line b={} d={} : {}", line.b(), line.d(), inc.join(" ")).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringFile {
    pub cover: String,
    pub base: String,
    /// 0-based image of each cover point.
    pub point_map: Vec<usize>,
}

pub fn parse_covering(text: &str) -> Result<CoveringFile, ParseError> {
    let mut cover = None;
    let mut base = None;
    let mut map: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (at, words) in content_lines(text) {
        match words[0] {
            "cover" if cover.is_none() => cover = Some(header(at, &words, "cover")?.to_string()),
            "base" if base.is_none() => base = Some(header(at, &words, "base")?.to_string()),
            "cover" | "base" => return Err(ParseError::at(at, format!("second `{}` line", words[0]))),
            "map" => {
                let [_, p, "->", q] = words[..] else {
                    return Err(ParseError::at(at, "expected `map <cover point> -> <base point>`"));
                };
                let p = number(at, p, "cover point")?;
                let q = number(at, q, "base point")?;
                if p == 0 || q == 0 {
                    return Err(ParseError::at(at, "points are numbered from 1"));
                }
                if let Some((_, first)) = map.insert(p, (q - 1, at)) {
                    return Err(ParseError::at(at, format!("point {p} already mapped on line {first}")));
                }
            }
            other => return Err(ParseError::at(at, format!("unknown directive `{other}`"))),
        }
    }
    let cover = cover.ok_or_else(|| ParseError::whole("missing `cover <name>`"))?;
    let base = base.ok_or_else(|| ParseError::whole("missing `base <name>`"))?;
    let n = map.len();
    if let Some((&p, &(_, at))) = map.iter().find(|(&p, _)| p > n) {
        return Err(ParseError::at(at, format!("cover points must be 1..={n}, found {p}")));
    }
    Ok(CoveringFile {
        cover,
        base,
        point_map: map.values().map(|&(q, _)| q).collect(),
    })
}

pub fn write_covering(cover: &str, base: &str, point_map: &[usize]) -> String {
    let mut out = format!("cover {cover}\nbase {base}\n");
    for (p, q) in point_map.iter().enumerate() {
        writeln!(out, "map {} -> {}", p + 1, q + 1).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    /// Name of the configuration the group acts on.
    pub on: String,
    pub order: Option<usize>,
    /// Generators in cycle notation, with their file lines.
    pub generators: Vec<(String, usize)>,
}

impl GroupFile {
    /// Builds the group on `config`, checking each generator and the order.
    pub fn resolve(&self, config: &Configuration, max_order: usize) -> Result<PermutationGroup, ParseError> {
        let gens = self
            .generators
            .iter()
            .map(|(g, at)| Permutation::parse(config, g).map_err(|e| ParseError::at(*at, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let group = PermutationGroup::generate(config.point_count(), config.line_count(), gens, max_order)
            .map_err(|e| ParseError::whole(format!("group has more than {max_order} elements ({e})")))?;
        match self.order {
            Some(k) if k != group.order() => Err(ParseError::whole(format!(
                "file states order {k} but the generators give {}",
                group.order()
            ))),
            _ => Ok(group),
        }
    }
}

pub fn parse_group(text: &str) -> Result<GroupFile, ParseError> {
    let mut name = None;
    let mut on = None;
    let mut order = None;
    let mut generators = Vec::new();
    for (at, words) in content_lines(text) {
        match words[0] {
            "group" if name.is_none() => name = Some(header(at, &words, "group")?.to_string()),
            "on" if on.is_none() => on = Some(header(at, &words, "on")?.to_string()),
            "order" if order.is_none() => {
                if words.len() != 2 {
                    return Err(ParseError::at(at, "expected `order <k>`"));
                }
                order = Some(number(at, words[1], "order")?);
            }
            "group" | "on" | "order" => return Err(ParseError::at(at, format!("second `{}` line", words[0]))),
            "generator" => {
                let cycles = words[1..].join(" ");
                if cycles.is_empty() {
                    return Err(ParseError::at(at, "expected `generator <cycles>`"));
                }
                generators.push((cycles, at));
            }
            other => return Err(ParseError::at(at, format!("unknown directive `{other}`"))),
        }
    }
    Ok(GroupFile {
        name: name.ok_or_else(|| ParseError::whole("missing `group <name>`"))?,
        on: on.ok_or_else(|| ParseError::whole("missing `on <configuration>`"))?,
        order,
        generators,
    })
}

pub fn write_group(name: &str, on: &str, group: &PermutationGroup) -> String {
    let mut out = format!("group {name}\non {on}\norder {}\n", group.order());
    for g in group.generators() {
        writeln!(out, "generator {}", g.cycle_notation()).unwrap();
    }
    out
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("name `{0}` is already in the workspace")]
    DuplicateName(String),
    #[error("no {kind} named `{name}` in the workspace")]
    Missing { kind: &'static str, name: String },
}

/// Anything a file can hold.
#[derive(Debug, Clone)]
pub enum Entry {
    Configuration(Configuration),
    Orbi(OrbiIncidenceStructure),
    Group { on: String, group: PermutationGroup },
    Covering(CoveringMap),
}

/// Named, validated objects. Groups and coverings refer to configurations
/// by name, so those must be loaded first.
#[derive(Debug, Clone)]
pub struct Workspace {
    entries: BTreeMap<String, Entry>,
    group_budget: usize,
}

impl Default for Workspace {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
            group_budget: crate::DEFAULT_GROUP_BUDGET,
        }
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Groups read from files may have at most `max` elements.
    pub fn with_group_budget(max: usize) -> Self {
        Self {
            group_budget: max,
            ..Self::default()
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn insert(&mut self, name: &str, entry: Entry) -> Result<(), LoadError> {
        if self.entries.contains_key(name) {
            return Err(LoadError::DuplicateName(name.to_string()));
        }
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }

    pub fn configuration(&self, name: &str) -> Result<&Configuration, LoadError> {
        match self.entries.get(name) {
            Some(Entry::Configuration(c)) => Ok(c),
            _ => Err(LoadError::Missing {
                kind: "configuration",
                name: name.to_string(),
            }),
        }
    }

    /// Parses `text` by its first directive, validates it and stores it
    /// under the name it declares. Returns that name.
    pub fn load_str(&mut self, path: &str, text: &str) -> Result<String, LoadError> {
        let parse = |source| LoadError::Parse {
            path: path.to_string(),
            source,
        };
        let invalid = |message: String| LoadError::Invalid {
            path: path.to_string(),
            message,
        };
        let first = content_lines(text).next().map(|(_, w)| w[0].to_string()).unwrap_or_default();
        let (name, entry) = match first.as_str() {
            "configuration" => {
                let f = parse_configuration(text).map_err(parse)?;
                let c = Configuration::new(f.structure).map_err(|e| invalid(e.to_string()))?;
                (f.name, Entry::Configuration(c))
            }
            "orbiconfiguration" => {
                let f = parse_orbiconfiguration(text).map_err(parse)?;
                (f.name, Entry::Orbi(f.structure))
            }
            "group" => {
                let f = parse_group(text).map_err(parse)?;
                let c = self.configuration(&f.on)?;
                let group = f.resolve(c, self.group_budget).map_err(parse)?;
                (f.name, Entry::Group { on: f.on, group })
            }
            "cover" | "base" => {
                let f = parse_covering(text).map_err(parse)?;
                let cover = self.configuration(&f.cover)?.clone();
                let base = self.configuration(&f.base)?.clone();
                let cm = verify_covering(&cover, &base, f.point_map).map_err(|e| invalid(e.to_string()))?;
                (format!("{}->{}", f.cover, f.base), Entry::Covering(cm))
            }
            other => return Err(invalid(format!("unrecognised file type `{other}`"))),
        };
        self.insert(&name, entry)?;
        Ok(name)
    }

    pub fn load_file(&mut self, path: &Path) -> Result<String, LoadError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Read {
            path: shown.clone(),
            source,
        })?;
        self.load_str(&shown, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn fano_from_mod_line() {
        let f = parse_configuration("configuration fano\nmod 7 : 1 2 4\n").unwrap();
        assert_eq!(f.name, "fano");
        assert_eq!(f.structure.line_count(), 7);
        assert!(Configuration::new(f.structure).unwrap().is_isomorphic(&library::fano()));
    }

    #[test]
    fn duplicate_line_cites_both_lines() {
        let err = parse_configuration("configuration x\npoints 3\nline 1 2\n# note\nline 2 1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::At {
                line: 5,
                message: "duplicate line: same points as line 3".into()
            }
        );
    }

    #[test]
    fn unknown_directive_rejected() {
        let err = parse_configuration("configuration x\npoints 3\nlnie 1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::At { line: 3, .. }));
        assert!(parse_orbiconfiguration("orbiconfiguration y\nweight 1\n").is_err());
    }

    #[test]
    fn configuration_round_trip() {
        for (name, c) in library::bundled() {
            let text = write_configuration(&name, c.structure());
            let back = parse_configuration(&text).unwrap();
            assert_eq!(back.name, name);
            assert_eq!(back.structure.canonical(), c.structure().canonical());
            assert_eq!(write_configuration(&name, &back.structure), text);
        }
    }

    #[test]
    fn orbi_round_trip_is_byte_identical() {
        let text = write_orbiconfiguration("chain", &library::half_weight_chain());
        assert_eq!(
            text,
            "orbiconfiguration chain\npoint 1 a=2\npoint 2 a=1\nline b=1 d=1 : 1 2\nline b=2 d=1 : 2*2\n"
        );
        let back = parse_orbiconfiguration(&text).unwrap();
        assert_eq!(write_orbiconfiguration(&back.name, &back.structure), text);
    }

    #[test]
    fn orbi_duplicate_line_cites_file_lines() {
        let text = "orbiconfiguration b\npoint 1 a=1\npoint 2 a=1\nline b=1 d=1 : 1 2\nline b=1 d=1 : 2 1\n";
        let err = parse_orbiconfiguration(text).unwrap_err();
        assert!(matches!(err, ParseError::At { line: 5, .. }), "{err}");
    }

    #[test]
    fn workspace_checks_covering_file() {
        let mut ws = Workspace::new();
        ws.load_str("mod14.cfg", &write_configuration("mod14", library::mod14().structure()))
            .unwrap();
        ws.load_str("fano.cfg", "configuration fano\nmod 7 : 1 2 4\n").unwrap();
        let map: Vec<usize> = (0..14).map(|p| p % 7).collect();
        let name = ws.load_str("map.txt", &write_covering("mod14", "fano", &map)).unwrap();
        let Some(Entry::Covering(cm)) = ws.get(&name) else {
            panic!("covering expected");
        };
        assert_eq!(cm.degree(), 2);
        let bad: Vec<usize> = (0..14).map(|p| p % 7).rev().collect();
        assert!(ws.load_str("bad.txt", &write_covering("mod14", "fano", &bad)).is_err());
        assert!(matches!(
            ws.load_str("again.cfg", "configuration fano\nmod 7 : 1 2 4\n"),
            Err(LoadError::DuplicateName(_))
        ));
    }

    #[test]
    fn group_round_trip() {
        let sq = library::polygon(4);
        let g = PermutationGroup::from_cycle_notation(&sq, &["(1 3)(2 4)"]).unwrap();
        let text = write_group("rot180", "square", &g);
        let back = parse_group(&text).unwrap().resolve(&sq, 100).unwrap();
        assert_eq!(back.elements(), g.elements());
        let wrong = text.replace("order 2", "order 4");
        assert!(parse_group(&wrong).unwrap().resolve(&sq, 100).is_err());
    }
}
