//! Declarative JSON recipes: base code, optional weight reduction,
//! concatenation, product and Tanner transform.

use std::path::{Path, PathBuf};

use lresc_core::alist::from_alist;
use lresc_core::classical::{
    concatenate, decompose_checks, hadamard_family, min_distance, random_ldpc, rebalance_attachments, repetition,
    ClassicalCode, ConcatSpec,
};
use lresc_core::css::{css_parameters, hgp, quantum_tanner_transform};
use serde::{Deserialize, Serialize};

use crate::bundle::BundlePayload;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseCode {
    Repetition { n: usize },
    /// Simplex-dual family; `k = 2` is the `[3,2,2]` parity code.
    Hadamard { k: usize },
    /// Rows separated by `;`, e.g. `"110;011"`.
    ParityCheck { h: String },
    RandomLdpc { n: usize, m: usize, col_weight: usize, seed: u64 },
    /// Path relative to the recipe file.
    Alist { path: PathBuf },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalRecipe {
    pub base: BaseCode,
    /// Repetition length of the inner code.
    #[serde(default = "one")]
    pub concat: usize,
    /// Spread outer attachments over the segments.
    #[serde(default)]
    pub rebalance: bool,
    /// Split outer checks to weight at most three before concatenating.
    #[serde(default)]
    pub decompose: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Product {
    #[default]
    Hgp,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    #[serde(default)]
    pub name: Option<String>,
    pub code1: ClassicalRecipe,
    /// Second factor of the product; the first one again when absent.
    #[serde(default)]
    pub code2: Option<ClassicalRecipe>,
    #[serde(default)]
    pub product: Product,
    #[serde(default)]
    pub tanner_transform: bool,
    /// Fail when the guaranteed distance falls below this value.
    #[serde(default)]
    pub min_distance: Option<usize>,
}

impl Recipe {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read recipe {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid recipe: {e}")))
    }
}

fn base_code(base: &BaseCode, dir: &Path) -> Result<ClassicalCode, CliError> {
    Ok(match base {
        BaseCode::Repetition { n } => repetition(*n)?,
        BaseCode::Hadamard { k } => hadamard_family(*k)?,
        BaseCode::ParityCheck { h } => {
            let m = h
                .parse()
                .map_err(|e| CliError::Usage(format!("invalid parity-check matrix: {e}")))?;
            ClassicalCode::from_parity_check(format!("H[{h}]"), m)
        }
        BaseCode::RandomLdpc {
            n,
            m,
            col_weight,
            seed,
        } => random_ldpc(*n, *m, *col_weight, *seed)?,
        BaseCode::Alist { path } => {
            let full = dir.join(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", full.display())))?;
            ClassicalCode::from_parity_check(path.display().to_string(), from_alist(&text)?)
        }
    })
}

pub fn build_classical(r: &ClassicalRecipe, dir: &Path) -> Result<ClassicalCode, CliError> {
    let mut outer = base_code(&r.base, dir)?;
    if r.decompose {
        outer = decompose_checks(&outer, 3)?;
    }
    if r.concat == 1 && !r.rebalance {
        return Ok(outer);
    }
    let mut spec = ConcatSpec::new(outer, r.concat);
    if r.rebalance {
        spec = rebalance_attachments(&spec)?;
    }
    Ok(concatenate(&spec)?)
}

/// Builds the code a recipe describes. `dir` resolves relative file paths.
pub fn build(recipe: &Recipe, dir: &Path) -> Result<BundlePayload, CliError> {
    let c1 = build_classical(&recipe.code1, dir)?;
    let payload = match recipe.product {
        Product::None => {
            if recipe.tanner_transform || recipe.code2.is_some() {
                return Err(CliError::Usage("a classical recipe takes no second code or transform".into()));
            }
            if let Some(target) = recipe.min_distance {
                let d = min_distance(&c1)?;
                if d < target {
                    return Err(CliError::Usage(format!("infeasible distance request: d = {d} < {target}")));
                }
            }
            BundlePayload::Classical(c1)
        }
        Product::Hgp => {
            let c2 = match &recipe.code2 {
                Some(r) => build_classical(r, dir)?,
                None => c1.clone(),
            };
            let mut code = hgp(&c1, &c2);
            if let Some(target) = recipe.min_distance {
                match css_parameters(&code).d_formula {
                    Some(d) if d >= target => {}
                    Some(d) => {
                        return Err(CliError::Usage(format!("infeasible distance request: D = {d} < {target}")))
                    }
                    None => return Err(CliError::Usage("distance formula unavailable".into())),
                }
            }
            if recipe.tanner_transform {
                code = quantum_tanner_transform(&code)?;
            }
            if let Some(name) = &recipe.name {
                code.name = name.clone();
            }
            BundlePayload::Css(code)
        }
    };
    Ok(payload)
}
