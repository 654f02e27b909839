//! Instance files: an Artin algebra, one object (DGLA, semicosimplicial DGLA,
//! cover or bundled name) and command inputs.

use std::sync::Arc;

use defcalc::artin::{make_dual_numbers, small_extension_chain, ArtinAlgebra, SmallExtension};
use defcalc::cech::{augment_cover, CoverData};
use defcalc::dgla::{Dgla, DglaMorphism};
use defcalc::instances::bundled;
use defcalc::io;
use defcalc::tw::{AugmentedScDgla, ScDgla};
use defcalc::{Error, Result};
use serde_json::{json, Value};

use crate::Cli;

pub const DEFAULT_DUAL_NUMBERS: usize = 3;

pub enum Body {
    Dgla(Arc<Dgla>),
    Sc {
        g: Arc<ScDgla>,
        cover: Option<(CoverData, Vec<String>)>,
        augmentation: Option<AugmentedScDgla>,
    },
}

pub struct Instance {
    pub name: String,
    pub artin: Arc<ArtinAlgebra>,
    /// `n` when the algebra is `ℚ[ε]/εⁿ` given by the shorthand.
    pub dual_numbers: Option<usize>,
    pub body: Body,
    pub inputs: Value,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn read_file(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{} is not valid JSON: {e}", path.display())))
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn load(cli: &Cli) -> Result<Instance> {
    let raw = match &cli.instance {
        Some(p) => read_file(p)?,
        None => json!({}),
    };
    let (artin, dual_numbers) = match (cli.dual_numbers, raw.get("artin")) {
        (Some(n), _) => (make_dual_numbers(n)?, Some(n)),
        (None, Some(v)) => (io::artin_from_json(v)?, v.get("dual_numbers").and_then(Value::as_u64).map(|n| n as usize)),
        (None, None) => (make_dual_numbers(DEFAULT_DUAL_NUMBERS)?, Some(DEFAULT_DUAL_NUMBERS)),
    };
    let inputs = raw.get("inputs").cloned().unwrap_or(json!({}));
    let named = cli.bundled.clone().or_else(|| raw.get("bundled").and_then(Value::as_str).map(str::to_string));
    let (name, body) = if let Some(n) = named {
        let b = bundled(&n)?;
        let cover = b.cover.map(|c| {
            let l = labels(c.opens());
            (c, l)
        });
        (n, Body::Sc { g: Arc::new(b.g), cover, augmentation: None })
    } else if let Some(v) = raw.get("dgla") {
        ("dgla".to_string(), Body::Dgla(Arc::new(io::dgla_from_json(v)?)))
    } else if let Some(v) = raw.get("scdgla") {
        let augmentation = if v.get("augmentation").is_some() { Some(io::augmented_from_json(v)?) } else { None };
        ("scdgla".to_string(), Body::Sc { g: Arc::new(io::scdgla_from_json(v)?), cover: None, augmentation })
    } else if let Some(v) = raw.get("cover") {
        let (c, l) = io::cover_from_json(v)?;
        let augmentation = match raw.get("global") {
            Some(gl) => Some(global_sections(&c, gl)?),
            None => None,
        };
        let g = defcalc::cech::cech_scdgla(&c)?;
        ("cover".to_string(), Body::Sc { g: Arc::new(g), cover: Some((c, l)), augmentation })
    } else {
        return Err(bad("instance needs one of \"bundled\", \"dgla\", \"scdgla\", \"cover\""));
    };
    let name = raw.get("name").and_then(Value::as_str).map(str::to_string).unwrap_or(name);
    Ok(Instance { name, artin: Arc::new(artin), dual_numbers, body, inputs })
}

/// `{"dgla": …, "restrictions": [matrix per open]}`.
fn global_sections(c: &CoverData, v: &Value) -> Result<AugmentedScDgla> {
    let global = io::dgla_from_json(v.get("dgla").ok_or_else(|| bad("global needs \"dgla\""))?)?;
    let maps = v.get("restrictions").and_then(Value::as_array).ok_or_else(|| bad("global needs \"restrictions\""))?;
    let to_opens = maps
        .iter()
        .enumerate()
        .map(|(i, m)| io::mat_from_json(m, c.local(&[i]).dim(), global.dim()).map(|matrix| DglaMorphism { matrix }))
        .collect::<Result<Vec<_>>>()?;
    augment_cover(c, global, &to_opens)
}

impl Instance {
    pub fn r(&self) -> usize {
        self.artin.dim()
    }

    pub fn sc(&self) -> Result<&Arc<ScDgla>> {
        match &self.body {
            Body::Sc { g, .. } => Ok(g),
            Body::Dgla(_) => Err(bad("this command needs a semicosimplicial DGLA (scdgla, cover or bundled)")),
        }
    }

    /// The DGLA itself, or level `inputs.level` (default 0) of a semicosimplicial one.
    pub fn dgla(&self) -> Result<Arc<Dgla>> {
        match &self.body {
            Body::Dgla(l) => Ok(l.clone()),
            Body::Sc { g, .. } => {
                let i = self.inputs.get("level").and_then(Value::as_u64).unwrap_or(0) as usize;
                if i > g.top() {
                    return Err(bad(format!("no level {i}")));
                }
                Ok(g.level(i).clone())
            }
        }
    }

    pub fn cover(&self) -> Result<&(CoverData, Vec<String>)> {
        match &self.body {
            Body::Sc { cover: Some(c), .. } => Ok(c),
            _ => Err(bad("this command needs a cover")),
        }
    }

    pub fn input(&self, key: &str) -> Result<&Value> {
        self.inputs.get(key).ok_or_else(|| bad(format!("inputs.{key} is required")))
    }

    /// `B → A` from `inputs.base` and `inputs.projection`, or
    /// `ℚ[ε]/εⁿ → ℚ[ε]/εⁿ⁻¹` for the dual-number shorthand.
    pub fn extension(&self) -> Result<SmallExtension> {
        if let Some(b) = self.inputs.get("base") {
            let base = io::artin_from_json(b)?;
            let p = io::mat_from_json(self.input("projection")?, base.dim(), self.artin.dim())?;
            return SmallExtension::new((*self.artin).clone(), base, p);
        }
        match self.dual_numbers {
            Some(n) if n >= 3 => Ok(small_extension_chain(n)?.remove(0)),
            _ => Err(bad("give inputs.base and inputs.projection, or use dual numbers with n >= 3")),
        }
    }
}
