//! Check transcripts for code bundles.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use lresc_core::classical::{min_distance, ClassicalCode};
use lresc_core::css::{CssCode, Sector, Violation};
use lresc_core::gates::{
    compose, extract_logical_action, lift_to_concat, lift_to_hgp, verify_codespace_transform, Axis, CssGadget,
    ElementaryOp, LogicalAction,
};
use lresc_core::logical::{
    distance_lower_bound_exhaustive, logical_weight_search, tunneling_check, StringAxis, DEFAULT_RESTARTS,
};
use lresc_core::CodeError;
use serde::{Deserialize, Serialize};

use crate::bundle::{BundlePayload, CodeBundle};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Orthogonality,
    Logicals,
    Tunneling,
    Distance,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Orthogonality, Check::Logicals, Check::Tunneling, Check::Distance];
}

impl FromStr for Check {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "orthogonality" => Ok(Check::Orthogonality),
            "logicals" => Ok(Check::Logicals),
            "tunneling" => Ok(Check::Tunneling),
            "distance" => Ok(Check::Distance),
            other => Err(CliError::Usage(format!("unknown check {other:?}"))),
        }
    }
}

/// A classical transform lifted onto one axis of a product code. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetSpec {
    pub axis: Axis,
    pub ops: Vec<ElementaryOp>,
}

impl GadgetSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read gadget {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid gadget: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub checks: Vec<Check>,
    /// Exhaustive bound: no logical of weight `<= distance`.
    pub distance: Option<usize>,
    pub gadget: Option<GadgetSpec>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            checks: Check::ALL.to_vec(),
            distance: None,
            gadget: None,
            seed: 0,
        }
    }
}

/// Runs the requested checks. Budget overruns abort with [`CliError::Budget`];
/// failed checks are reported in the transcript.
pub fn verify_bundle(bundle: &CodeBundle, opts: &VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
    let intact = bundle.intact()?;
    let mut out = vec![CheckResult::new(
        "integrity",
        intact,
        if intact {
            format!("sha256 {}", bundle.sha256)
        } else {
            "content hash does not match the payload".to_string()
        },
    )];
    match &bundle.payload {
        BundlePayload::Css(code) => out.extend(verify_css(code, opts)?),
        BundlePayload::Classical(code) => out.extend(verify_classical(code, opts)?),
    }
    Ok(out)
}

fn verify_classical(code: &ClassicalCode, opts: &VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
    if opts.gadget.is_some() {
        return Err(CliError::Usage("gadgets act on product codes".into()));
    }
    let mut out = Vec::new();
    for check in &opts.checks {
        match check {
            Check::Orthogonality | Check::Logicals => {
                let ok = code.validate().is_ok();
                out.push(CheckResult::new(
                    if *check == Check::Orthogonality { "orthogonality" } else { "logicals" },
                    ok,
                    format!("H·Gᵀ = 0 for [{}, {}]", code.n(), code.k()),
                ));
            }
            Check::Tunneling => out.push(CheckResult::new("tunneling", true, "not applicable to classical codes")),
            Check::Distance => {
                let d = min_distance(code)?;
                let ok = opts.distance.is_none_or(|w| d > w);
                out.push(CheckResult::new("distance", ok, format!("d = {d}")));
            }
        }
    }
    Ok(out)
}

fn verify_css(code: &CssCode, opts: &VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
    let violations = code.validate();
    let mut out = Vec::new();
    for check in &opts.checks {
        match check {
            Check::Orthogonality => {
                let bad = violations
                    .iter()
                    .filter(|v| matches!(v, Violation::Shape(_) | Violation::Anticommuting { .. }))
                    .count();
                out.push(CheckResult::new(
                    "orthogonality",
                    bad == 0,
                    format!("HX·HZᵀ = 0 ({bad} violations)"),
                ));
            }
            Check::Logicals => out.push(logicals_check(code, &violations)),
            Check::Tunneling => out.push(tunneling(code)?),
            Check::Distance => out.extend(distance(code, opts)?),
        }
    }
    if let Some(spec) = &opts.gadget {
        out.push(match gadget_action(code, spec) {
            Ok((_, action)) => {
                let detail = match logical_cnots(&action) {
                    Some(cnots) if cnots.is_empty() => "logical identity".to_string(),
                    Some(cnots) => cnots
                        .iter()
                        .map(|(c, t)| format!("CNOT {}->{}", c + 1, t + 1))
                        .collect::<Vec<_>>()
                        .join(", "),
                    None => match logical_permutation(&action) {
                        Some(perm) => format!(
                            "logical permutation [{}]",
                            perm.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
                        ),
                        None => format!("logical X action {:?}", action.x.supports()),
                    },
                };
                CheckResult::new("gadget", true, detail)
            }
            Err(CliError::Budget(e)) => return Err(CliError::Budget(e)),
            Err(e) => CheckResult::new("gadget", false, e.to_string()),
        });
    }
    Ok(out)
}

fn logicals_check(code: &CssCode, violations: &[Violation]) -> CheckResult {
    let stored = violations
        .iter()
        .filter(|v| matches!(v, Violation::Logical { .. } | Violation::Pairing { .. }))
        .count();
    match code.logical_basis() {
        Ok(basis) => {
            let commute = code.hz.mul(&basis.of(Sector::X).transpose()).is_zero()
                && code.hx.mul(&basis.of(Sector::Z).transpose()).is_zero();
            let paired = basis.k() == 0 || basis.pairing().inverse().is_some();
            let ok = stored == 0 && commute && paired && basis.k() == code.k();
            CheckResult::new(
                "logicals",
                ok,
                format!("K = {}, basis of {} pairs, invertible pairing: {paired}", code.k(), basis.k()),
            )
        }
        Err(e) => CheckResult::new("logicals", false, e.to_string()),
    }
}

fn tunneling(code: &CssCode) -> Result<CheckResult, CliError> {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut any = false;
    for (sector, axis) in [(Sector::X, StringAxis::Horizontal), (Sector::Z, StringAxis::Vertical)] {
        match tunneling_check(code, sector, axis, 0) {
            Ok(r) if r.is_empty() => {}
            Ok(r) => {
                any = true;
                ok &= r.passed();
                lines.push(format!(
                    "{sector:?}: {} segments, {} codewords, {} relocations",
                    r.segments.len(),
                    r.codewords.len(),
                    r.relocations.len()
                ));
            }
            Err(CodeError::MissingProvenance(_)) => {
                return Ok(CheckResult::new("tunneling", true, "no product structure"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if !any {
        return Ok(CheckResult::new("tunneling", true, "no concatenated parent"));
    }
    Ok(CheckResult::new("tunneling", ok, lines.join("; ")))
}

fn distance(code: &CssCode, opts: &VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
    let mut out = Vec::new();
    if code.k() == 0 {
        out.push(CheckResult::new("distance", true, "K = 0"));
        return Ok(out);
    }
    let mut upper = usize::MAX;
    let mut verified = true;
    for sector in [Sector::X, Sector::Z] {
        let w = logical_weight_search(code, sector, DEFAULT_RESTARTS, opts.seed)?;
        verified &= w.verified();
        upper = upper.min(w.weight);
    }
    out.push(CheckResult::new(
        "distance-upper",
        verified,
        format!("logical of weight {upper} found (seed {})", opts.seed),
    ));
    if let Some(w) = opts.distance {
        let mut ok = true;
        let mut detail = Vec::new();
        for sector in [Sector::X, Sector::Z] {
            let cert = distance_lower_bound_exhaustive(code, sector, w)?;
            ok &= cert.certified;
            detail.push(match &cert.counterexample {
                None => format!("{sector:?}: none of weight <= {w} ({} candidates)", cert.candidates),
                Some(s) => format!("{sector:?}: logical on {s:?}"),
            });
        }
        out.push(CheckResult::new("distance-lower", ok, detail.join("; ")));
    }
    Ok(out)
}

/// Verifies the classical transform on the outer code of the parent on
/// `spec.axis`, lifts it through concatenation and the product, and extracts
/// the induced logical action.
pub fn gadget_action(code: &CssCode, spec: &GadgetSpec) -> Result<(CssGadget, LogicalAction), CliError> {
    let (code1, code2) = code
        .provenance
        .as_ref()
        .map(|p| p.parents())
        .ok_or_else(|| CliError::Usage("gadgets need a product code".into()))?;
    let parent = match spec.axis {
        Axis::Rows => code1,
        Axis::Columns => code2,
    };
    let outer = parent.concat.as_ref().map_or(parent, |info| info.outer.as_ref());
    if let Some(bad) = spec.ops.iter().find(|op| match **op {
        ElementaryOp::Swap(a, b) | ElementaryOp::Add { src: a, dst: b } => a.max(b) >= outer.n(),
    }) {
        return Err(CliError::Usage(format!("{bad:?} is out of range for length {}", outer.n())));
    }
    let u = compose(outer.n(), &spec.ops);
    let base = verify_codespace_transform(outer, &u)?;
    let lifted = lift_to_concat(&base, parent)?;
    let gadget = lift_to_hgp(&lifted, code, spec.axis)?;
    if !gadget.preserves(code)? {
        return Err(CliError::Verification("gadget does not preserve the stabilizer group".into()));
    }
    let action = extract_logical_action(&gadget, code)?;
    Ok((gadget, action))
}

/// Reads the action as a product of commuting CNOTs, 0-indexed `(control, target)`.
pub fn logical_cnots(action: &LogicalAction) -> Option<Vec<(usize, usize)>> {
    let k = action.x.nrows();
    let cnots: Vec<(usize, usize)> = (0..k)
        .flat_map(|c| (0..k).filter(move |&t| t != c).map(move |t| (c, t)))
        .filter(|&(c, t)| action.x.get(c, t))
        .collect();
    (LogicalAction::from_cnots(k, &cnots) == *action).then_some(cnots)
}

/// Image of each logical under a permutation action, 0-indexed.
pub fn logical_permutation(action: &LogicalAction) -> Option<Vec<usize>> {
    action
        .x
        .supports()
        .into_iter()
        .map(|s| (s.len() == 1).then(|| s[0]))
        .collect()
}
