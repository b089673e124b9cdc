use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use triad_core::formula::{parse_formula, Environment, Formula, Signature};
use triad_core::relcore::{DomainSet, Relation, RelationFile};

/// A domain with the relations loaded onto it. Pluridentities and deltas
/// resolve through the environment without being listed.
pub struct Workspace {
    pub domain: Arc<DomainSet>,
    pub relations: BTreeMap<String, Relation>,
    /// Load order, so "the relation" means the first one given.
    order: Vec<String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `--domain` takes a JSON file (`["a","b"]` or an object with a `domain`
/// array) or an inline comma-separated list.
fn parse_domain(arg: &str) -> Result<Arc<DomainSet>> {
    let path = PathBuf::from(arg);
    let names: Vec<String> = if path.is_file() {
        let value: serde_json::Value =
            serde_json::from_str(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
        let list = match &value {
            serde_json::Value::Object(map) => map.get("domain").cloned().unwrap_or(serde_json::Value::Null),
            other => other.clone(),
        };
        serde_json::from_value(list).context("domain must be a list of strings")?
    } else {
        arg.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    };
    Ok(DomainSet::new(names)?)
}

impl Workspace {
    pub fn load(domain: Option<&str>, rel_files: &[PathBuf]) -> Result<Self> {
        let files: Vec<RelationFile> = rel_files
            .iter()
            .map(|p| serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())))
            .collect::<Result<_>>()?;
        let domain = match (domain, files.first()) {
            (Some(d), _) => parse_domain(d)?,
            (None, Some(f)) => DomainSet::new(f.domain.iter().cloned())?,
            (None, None) => DomainSet::new(["a", "b"])?,
        };
        let mut ws = Workspace {
            domain: domain.clone(),
            relations: BTreeMap::new(),
            order: Vec::new(),
        };
        for (file, path) in files.into_iter().zip(rel_files) {
            let load = file
                .into_relation_on(&domain)
                .with_context(|| format!("{}: relations must share the workspace domain", path.display()))?;
            let name = load.relation.name().to_string();
            if ws.relations.insert(name.clone(), load.relation).is_some() {
                bail!("relation {name} is loaded twice");
            }
            ws.order.push(name);
        }
        log::debug!(
            "workspace: {} elements, {} relations",
            domain.len(),
            ws.order.len()
        );
        Ok(ws)
    }

    pub fn env(&self) -> Result<Environment> {
        let mut env = Environment::new(self.domain.clone());
        for (n, r) in &self.relations {
            env.bind(n.clone(), r.clone())?;
        }
        Ok(env)
    }

    pub fn parse(&self, text: &str) -> Result<Formula> {
        let mut sig = Signature::inferring();
        for (n, r) in &self.relations {
            sig.declare(n.clone(), r.arity());
        }
        Ok(parse_formula(text, &sig)?)
    }

    /// The named relation, or the first one loaded.
    pub fn target(&self, name: Option<&str>) -> Result<&Relation> {
        let name = match name {
            Some(n) => n,
            None => self
                .order
                .first()
                .ok_or_else(|| anyhow!("no relation given (use --rel FILE)"))?,
        };
        self.relations
            .get(name)
            .ok_or_else(|| anyhow!("no relation named {name}"))
    }
}
