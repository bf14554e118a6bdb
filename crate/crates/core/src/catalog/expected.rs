use std::collections::HashMap;
use std::fmt;

use crate::contraction::parse_bindings;
use crate::cyclo::Cyclo;
use crate::liecore::{LieAlgebra, LieError};
use crate::poly::{parse_basis_poly, ExprError, Poly};

use super::data::Tag;
use super::CatalogError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scope {
    /// Invariants of the algebra itself.
    Algebra,
    /// Invariants of its derivation algebra.
    Derivations,
}

/// Expected invariants of one contracted algebra, optionally at a special
/// parameter binding.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpectedRecord {
    pub algebra: String,
    pub scope: Scope,
    pub params: Vec<char>,
    pub bind: Option<Vec<(char, Cyclo)>>,
    pub derived: Vec<usize>,
    pub lower_central: Vec<usize>,
    pub upper_central: Vec<usize>,
    pub tau: Option<usize>,
    pub casimirs: Vec<String>,
    pub dim_der: Option<usize>,
    pub tag: Option<Tag>,
    pub nilradical: Option<String>,
    pub brackets: Option<String>,
    pub tower: Option<Vec<usize>>,
    /// Fields whose printed value is known to contradict the record's own
    /// brackets: `ds`, `lcs`, `ucs`, `tau`, `der` or `casimir<k>` (1-based).
    pub conflicts: Vec<String>,
}

impl ExpectedRecord {
    /// `(nu, i)` from `L<nu>,<i>` or `L'<nu>,<i>`.
    pub fn index(&self) -> Option<(usize, usize)> {
        let rest = self.algebra.strip_prefix('L')?;
        let rest = rest.strip_prefix('\'').unwrap_or(rest);
        let (a, b) = rest.split_once(',')?;
        Some((a.parse().ok()?, b.parse().ok()?))
    }

    /// The catalog id of the solution this algebra comes from.
    pub fn solution_id(&self) -> Option<String> {
        self.index().map(|(nu, i)| format!("eps_{nu}_{i}"))
    }

    /// Primed names denote the algebra after its central summand is split off.
    pub fn is_primed(&self) -> bool {
        self.algebra.starts_with("L'")
    }

    pub fn dim(&self) -> usize {
        self.derived[0]
    }

    /// τ, given directly or as the number of listed Casimir invariants.
    pub fn tau_value(&self) -> Option<usize> {
        self.tau.or((!self.casimirs.is_empty()).then_some(self.casimirs.len()))
    }

    /// Parameter values: the record's binding, with unbound parameters
    /// taken from `generic`.
    pub fn values(&self, generic: &HashMap<char, Cyclo>) -> HashMap<String, Cyclo> {
        let mut v: HashMap<String, Cyclo> = generic.iter().map(|(k, x)| (k.to_string(), x.clone())).collect();
        for (k, x) in self.bind.iter().flatten() {
            v.insert(k.to_string(), x.clone());
        }
        v
    }

    /// The algebra given by the listed brackets, if any.
    pub fn algebra(&self, generic: &HashMap<char, Cyclo>) -> Option<Result<LieAlgebra, LieError>> {
        let text = self.brackets.as_ref()?;
        Some(LieAlgebra::parse_brackets(3, self.dim(), text, &self.values(generic)))
    }

    pub fn casimir_polys(&self, generic: &HashMap<char, Cyclo>) -> Result<Vec<Poly>, ExprError> {
        let values = self.values(generic);
        self.casimirs.iter().map(|c| parse_basis_poly(3, self.dim(), c, &values)).collect()
    }

    /// Dimension implied by a nilradical label such as `6A1`, `L'23,1+4A1`
    /// or a series triple `(740)(7410)(147)`.
    pub fn nilradical_dim(&self, lookup: impl Fn(&str) -> Option<usize>) -> Option<usize> {
        let label = self.nilradical.as_ref()?;
        if let Some(rest) = label.strip_prefix('(') {
            return rest.chars().next()?.to_digit(10).map(|d| d as usize);
        }
        label
            .split('+')
            .map(|part| match part.strip_suffix("A1") {
                Some(k) => k.parse().ok(),
                None => lookup(part),
            })
            .sum()
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| format!("bad integer list {s:?}"))).collect()
}

pub fn parse_expected(file: &str, text: &str) -> Result<Vec<ExpectedRecord>, CatalogError> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| CatalogError::Parse {
                file: file.into(),
                entry: line.into(),
                msg: format!("expected key=value, found {tok:?}"),
            })?;
            fields.insert(k, v);
        }
        let algebra = fields.get("algebra").copied().unwrap_or("?").to_string();
        let err = |msg: String| CatalogError::Parse { file: file.into(), entry: algebra.clone(), msg };
        let list = |k: &str| -> Result<Vec<usize>, CatalogError> {
            parse_list(fields.get(k).ok_or_else(|| err(format!("missing {k}=")))?).map_err(err)
        };
        let num = |k: &str| -> Result<Option<usize>, CatalogError> {
            fields.get(k).map(|v| v.parse().map_err(|_| err(format!("bad {k}=")))).transpose()
        };
        let scope = match fields.get("scope").copied() {
            None => Scope::Algebra,
            Some("der") => Scope::Derivations,
            Some(s) => return Err(err(format!("unknown scope {s:?}"))),
        };
        let bind = fields
            .get("bind")
            .map(|b| {
                let mut v: Vec<(char, Cyclo)> = parse_bindings(b).map_err(err)?.into_iter().collect();
                v.sort_by_key(|(k, _)| *k);
                Ok::<_, CatalogError>(v)
            })
            .transpose()?;
        let derived = list("ds")?;
        if derived.is_empty() {
            return Err(err("empty derived series".into()));
        }
        let record = ExpectedRecord {
            algebra: algebra.clone(),
            scope,
            params: fields.get("params").map(|p| p.split(',').filter_map(|s| s.chars().next()).collect()).unwrap_or_default(),
            bind,
            derived,
            lower_central: list("lcs")?,
            upper_central: list("ucs")?,
            tau: num("tau")?,
            casimirs: fields.get("casimirs").map(|c| c.split(';').map(str::to_string).collect()).unwrap_or_default(),
            dim_der: num("der")?,
            tag: fields.get("tag").map(|t| Tag::parse(t).ok_or_else(|| err(format!("unknown tag {t:?}")))).transpose()?,
            nilradical: fields.get("nilradical").map(|s| s.to_string()),
            brackets: fields.get("brackets").map(|s| s.to_string()),
            tower: fields.get("tower").map(|t| parse_list(t).map_err(err)).transpose()?,
            conflicts: fields.get("conflict").map(|c| c.split(',').map(str::to_string).collect()).unwrap_or_default(),
        };
        out.push(record);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Relation {
    /// `algebra` is the direct sum of `parts`.
    Decomposition { algebra: String, parts: Vec<String> },
    /// All members are pairwise isomorphic.
    Isomorphism { members: Vec<String> },
    /// `algebra` at a boundary binding equals `target` (at `target_bind`).
    Extension {
        algebra: String,
        bind: Vec<(char, Cyclo)>,
        target: String,
        target_bind: Vec<(char, Cyclo)>,
    },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |v: &[(char, Cyclo)]| v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(",");
        match self {
            Relation::Decomposition { algebra, parts } => write!(f, "{algebra} = {}", parts.join(" + ")),
            Relation::Isomorphism { members } => write!(f, "{}", members.join(" ~ ")),
            Relation::Extension { algebra, bind, target, target_bind } => {
                write!(f, "{algebra}({}) = {target}", b(bind))?;
                if !target_bind.is_empty() {
                    write!(f, "({})", b(target_bind))?;
                }
                Ok(())
            }
        }
    }
}

pub fn parse_relations(file: &str, text: &str) -> Result<Vec<Relation>, CatalogError> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let err = |msg: String| CatalogError::Parse { file: file.into(), entry: line.into(), msg };
        let fields: HashMap<&str, &str> = line.split_whitespace().filter_map(|t| t.split_once('=')).collect();
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing {k}=")));
        let names = |s: &str| s.split(';').map(str::to_string).collect::<Vec<_>>();
        let binds = |s: Option<&str>| -> Result<Vec<(char, Cyclo)>, CatalogError> {
            let mut v: Vec<(char, Cyclo)> = match s {
                Some(s) => parse_bindings(s).map_err(err)?.into_iter().collect(),
                None => Vec::new(),
            };
            v.sort_by_key(|(k, _)| *k);
            Ok(v)
        };
        let rel = match get("kind")? {
            "decom" => Relation::Decomposition { algebra: get("algebra")?.into(), parts: names(get("parts")?) },
            "iso" => Relation::Isomorphism { members: names(get("members")?) },
            "ext" => Relation::Extension {
                algebra: get("algebra")?.into(),
                bind: binds(Some(get("bind")?))?,
                target: get("target")?.into(),
                target_bind: binds(fields.get("target_bind").copied())?,
            },
            k => return Err(err(format!("unknown kind {k:?}"))),
        };
        out.push(rel);
    }
    Ok(out)
}
