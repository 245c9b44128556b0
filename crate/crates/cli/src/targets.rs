//! Resolving code and product names given on the command line.

use std::path::Path;

use anyhow::{bail, Context, Result};
use homolattice::codes::catalog::{self, NamedCode};
use homolattice::complex::{boundary_from_css, ChainComplex, CssCode};
use homolattice::hprod::{homological_product, ProductCode};

/// Aliases for the products used throughout the docs.
pub const PRODUCT_ALIASES: &[(&str, &str, &str)] = &[("prod147", "steane", "rm15-padded"), ("prod422", "422", "422")];

pub enum Target {
    Code(NamedCode),
    Product { name: String, product: ProductCode },
}

impl Target {
    pub fn name(&self) -> &str {
        match self {
            Target::Code(c) => &c.name,
            Target::Product { name, .. } => name,
        }
    }

    pub fn complex(&self) -> Result<&ChainComplex> {
        match self {
            Target::Code(c) => Ok(c.complex()?),
            Target::Product { product, .. } => Ok(product.complex()),
        }
    }

    pub fn css(&self) -> CssCode {
        match self {
            Target::Code(c) => c.code.clone(),
            Target::Product { product, .. } => product.css(),
        }
    }
}

/// A catalog name, a `.json` CSS code or a GF(2) text boundary file.
pub fn load_code(spec: &str) -> Result<NamedCode> {
    let path = Path::new(spec);
    if !path.exists() {
        return Ok(catalog::by_name(spec)?);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    let name = path
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    if path.extension().is_some_and(|e| e == "json") {
        let code = CssCode::from_json(&text).with_context(|| format!("parsing {spec}"))?;
        let complex = boundary_from_css(&code).ok();
        Ok(NamedCode { name, code, complex })
    } else {
        let complex = ChainComplex::parse_text(&text).with_context(|| format!("parsing {spec}"))?;
        Ok(NamedCode {
            name,
            code: homolattice::complex::css_from_boundary(&complex),
            complex: Some(complex),
        })
    }
}

pub fn load_product(a: &str, b: &str) -> Result<ProductCode> {
    let c1 = load_code(a)?;
    let c2 = load_code(b)?;
    Ok(homological_product(
        c1.complex().with_context(|| format!("{a} has no boundary operator"))?,
        c2.complex().with_context(|| format!("{b} has no boundary operator"))?,
    ))
}

/// `prod147`, `prod422` or `a*b` name a product; anything else a single code.
pub fn load_target(spec: &str) -> Result<Target> {
    if let Some(&(alias, a, b)) = PRODUCT_ALIASES.iter().find(|(alias, _, _)| *alias == spec) {
        return Ok(Target::Product {
            name: alias.to_string(),
            product: load_product(a, b)?,
        });
    }
    if let Some((a, b)) = spec.split_once('*') {
        return Ok(Target::Product {
            name: spec.to_string(),
            product: load_product(a, b)?,
        });
    }
    Ok(Target::Code(load_code(spec)?))
}

pub fn require_product(spec: &str) -> Result<(String, ProductCode)> {
    match load_target(spec)? {
        Target::Product { name, product } => Ok((name, product)),
        Target::Code(_) => bail!("`{spec}` is not a product; use `a*b`, prod147 or prod422"),
    }
}
