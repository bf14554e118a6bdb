use std::collections::{BTreeSet, HashMap};

use crate::contraction::{parse_bindings, ContractionMatrix};
use crate::cyclo::Cyclo;

use super::CatalogError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tag {
    C,
    D,
}

impl Tag {
    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "C" => Some(Tag::C),
            "D" => Some(Tag::D),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::C => "C",
            Tag::D => "D",
        }
    }
}

/// A binding pattern of a conditional tag: `*` or a list like `a=1,b=1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BindingPattern {
    Any,
    Exact(Vec<(char, Cyclo)>),
}

impl BindingPattern {
    pub fn matches(&self, bindings: &HashMap<char, Cyclo>) -> bool {
        match self {
            BindingPattern::Any => true,
            BindingPattern::Exact(v) => v.iter().all(|(k, x)| bindings.get(k) == Some(x)),
        }
    }

    pub fn bindings(&self) -> HashMap<char, Cyclo> {
        match self {
            BindingPattern::Any => HashMap::new(),
            BindingPattern::Exact(v) => v.iter().cloned().collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TagRule {
    Fixed(Tag),
    /// First matching pattern wins.
    Conditional(Vec<(BindingPattern, Tag)>),
}

impl TagRule {
    pub fn resolve(&self, bindings: &HashMap<char, Cyclo>) -> Option<Tag> {
        match self {
            TagRule::Fixed(t) => Some(*t),
            TagRule::Conditional(rules) => rules.iter().find(|(p, _)| p.matches(bindings)).map(|(_, t)| *t),
        }
    }

    /// The explicit (non-wildcard) bindings named by the rule.
    pub fn special_bindings(&self) -> Vec<(HashMap<char, Cyclo>, Tag)> {
        match self {
            TagRule::Fixed(_) => Vec::new(),
            TagRule::Conditional(rules) => rules
                .iter()
                .filter(|(p, _)| *p != BindingPattern::Any)
                .map(|(p, t)| (p.bindings(), *t))
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Source {
    /// One of the inequivalent solutions.
    Solution,
    /// An intermediate family with the stage it belongs to and the indices of
    /// the non-equivalence systems it satisfies.
    Family { stage: u32, systems: Vec<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CatalogEntry {
    pub id: String,
    /// Zero count on relevant positions (solutions only).
    pub nu: Option<usize>,
    pub matrix: ContractionMatrix,
    pub tag: Option<TagRule>,
    pub source: Source,
    pub note: Option<String>,
}

impl CatalogEntry {
    /// `(nu, i)` for ids of the form `eps_<nu>_<i>`.
    pub fn index(&self) -> Option<(usize, usize)> {
        let rest = self.id.strip_prefix("eps_")?;
        let (a, b) = rest.split_once('_')?;
        Some((a.parse().ok()?, b.parse().ok()?))
    }

    pub fn is_parametric(&self) -> bool {
        !self.matrix.params().is_empty()
    }
}

fn parse_tag_rule(text: &str) -> Result<TagRule, String> {
    let mut rules = Vec::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (pat, tag) = part.rsplit_once(':').ok_or_else(|| format!("expected pattern:tag in {part:?}"))?;
        let tag = Tag::parse(tag.trim()).ok_or_else(|| format!("unknown tag in {part:?}"))?;
        let pattern = if pat.trim() == "*" {
            BindingPattern::Any
        } else {
            let mut v: Vec<(char, Cyclo)> = parse_bindings(pat)?.into_iter().collect();
            v.sort_by_key(|(k, _)| *k);
            BindingPattern::Exact(v)
        };
        rules.push((pattern, tag));
    }
    Ok(TagRule::Conditional(rules))
}

/// Parses a file of blank-line separated records: `key=value` header lines
/// followed by eight matrix rows. Lines starting with `#` are comments.
pub fn parse_entries(file: &str, text: &str, families: bool) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let blocks = text.split("\n\n").map(|b| {
        b.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect::<Vec<_>>()
    });
    for block in blocks.filter(|b| !b.is_empty()) {
        let mut header: HashMap<&str, &str> = HashMap::new();
        let mut rows = Vec::new();
        for line in &block {
            match line.split_once('=') {
                Some((k, v)) if rows.is_empty() && k.chars().all(|c| c.is_ascii_lowercase()) => {
                    header.insert(k, v);
                }
                _ => rows.push(*line),
            }
        }
        let id = header.get("id").copied().unwrap_or("?").to_string();
        let err = |msg: String| CatalogError::Parse { file: file.to_string(), entry: id.clone(), msg };
        if id == "?" {
            return Err(err("record without id=".into()));
        }
        if !seen.insert(id.clone()) {
            return Err(err("duplicate id".into()));
        }
        let declared: Vec<char> = header
            .get("params")
            .map(|p| p.split(',').filter_map(|s| s.trim().chars().next()).collect())
            .unwrap_or_default();
        let matrix = ContractionMatrix::parse(&rows.join("\n"))
            .and_then(|m| m.with_params(&declared))
            .map_err(|e| err(e.to_string()))?
            .with_side_condition(header.get("note").map(|s| s.to_string()));
        let note = header.get("note").map(|s| s.to_string());
        let entry = if families {
            let stage = header.get("stage").and_then(|s| s.parse().ok()).ok_or_else(|| err("missing stage=".into()))?;
            let systems = header
                .get("systems")
                .map(|s| s.split(',').filter(|x| !x.is_empty()).map(|x| x.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>())
                .transpose()
                .map_err(|e| err(e.to_string()))?
                .unwrap_or_default();
            CatalogEntry { id, nu: None, matrix, tag: None, source: Source::Family { stage, systems }, note }
        } else {
            let nu: usize = header.get("nu").and_then(|s| s.parse().ok()).ok_or_else(|| err("missing nu=".into()))?;
            if matrix.zero_count() != nu {
                return Err(err(format!("nu={nu} but the matrix has {} zeros", matrix.zero_count())));
            }
            let tag = match header.get("tag").copied() {
                Some("mixed") => {
                    let when = header.get("when").ok_or_else(|| err("tag=mixed without when=".into()))?;
                    parse_tag_rule(when).map_err(err)?
                }
                Some(t) => TagRule::Fixed(Tag::parse(t).ok_or_else(|| err(format!("unknown tag {t:?}")))?),
                None => return Err(err("missing tag=".into())),
            };
            CatalogEntry { id, nu: Some(nu), matrix, tag: Some(tag), source: Source::Solution, note }
        };
        out.push(entry);
    }
    Ok(out)
}
