//! File formats and reports.
//!
//! Input documents are UTF-8 JSON. Permutations may be written as cycle
//! strings ("(1 2 3)(4 5)", "id") or as 1-based image arrays; output is
//! always image arrays, and every machine-readable report carries the
//! explicit `"convention": "left-to-right"` marker so the composition
//! order is unambiguous at the file boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::famforge::{
    family_invariants, quotient_checks, verify_axioms, EquippedFamily,
};
use crate::permcore::Permutation;
use crate::realcover::{ComponentCover, RealBase};
use crate::survey::{check_corollaries, FormRelation};

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CONVENTION: &str = "left-to-right";

/// A permutation in a document: cycle notation or a 1-based image array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermSpec {
    Cycles(String),
    Images(Vec<usize>),
}

impl PermSpec {
    pub fn to_permutation(&self, degree: usize) -> Result<Permutation> {
        match self {
            PermSpec::Cycles(s) => Permutation::from_cycles(s, degree)
                .map_err(|e| Error::Parse(format!("bad cycle string '{s}': {e}"))),
            PermSpec::Images(images) => {
                if images.len() != degree {
                    return Err(Error::Parse(format!(
                        "image array of length {} for degree {degree}",
                        images.len()
                    )));
                }
                Permutation::from_images(images.clone())
                    .map_err(|e| Error::Parse(format!("bad image array: {e}")))
            }
        }
    }
}

/// A lift in a document: `"auto"` or an explicit image array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LiftSpec {
    Keyword(String),
    Images(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDoc {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub name: String,
    pub degree: usize,
    pub monodromy: Vec<PermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_cap: Option<usize>,
}

/// The top-level input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    pub base: BaseDoc,
    pub components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitsDoc>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable document")
    }

    pub fn base(&self) -> RealBase {
        RealBase::new(self.base.n)
    }

    /// Semantic conversion: parse permutations, check degrees, resolve
    /// `"auto"` lifts to absent lifts (selected later by policy).
    pub fn to_components(&self) -> Result<Vec<ComponentCover>> {
        let mut out = Vec::new();
        for cd in &self.components {
            if cd.monodromy.len() != self.base.n {
                return Err(Error::InvalidInput(format!(
                    "component '{}' lists {} branch permutations, base has {}",
                    cd.name,
                    cd.monodromy.len(),
                    self.base.n
                )));
            }
            let monodromy: Vec<Permutation> = cd
                .monodromy
                .iter()
                .map(|m| m.to_permutation(cd.degree))
                .collect::<Result<_>>()?;
            let mut c = ComponentCover::new(cd.name.clone(), cd.degree, monodromy);
            match &cd.lift {
                None => {}
                Some(LiftSpec::Keyword(k)) if k == "auto" => {}
                Some(LiftSpec::Keyword(k)) => {
                    return Err(Error::Parse(format!(
                        "component '{}': unknown lift keyword '{k}' (expected \"auto\")",
                        cd.name
                    )))
                }
                Some(LiftSpec::Images(images)) => {
                    if images.len() != cd.degree {
                        return Err(Error::DegreeMismatch(images.len(), cd.degree));
                    }
                    c = c.with_lift(Permutation::from_images(images.clone())?);
                }
            }
            out.push(c);
        }
        Ok(out)
    }
}

/// Machine-readable family report.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub version: String,
    pub convention: String,
    pub base_points: usize,
    pub r: usize,
    pub group_order: usize,
    pub subgroup_orders: Vec<usize>,
    pub hat_genus: usize,
    pub hat_ovals: Vec<usize>,
    pub components: Vec<ComponentReport>,
    pub axioms: AxiomReport,
    pub quotient_bounds: QuotientBoundReport,
    pub corollaries: Vec<CorollaryReport>,
    pub real_form_relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub name: String,
    pub degree: usize,
    pub genus: usize,
    pub ovals: usize,
    pub lift: Vec<usize>,
    pub quotient_orientable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub group_normalized: bool,
    pub subgroups_normalized: Vec<bool>,
    pub generated: bool,
    pub involutive: Vec<bool>,
    pub admissible: Vec<bool>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientBoundReport {
    pub applicable: bool,
    pub genus_bound_holds: Vec<bool>,
    pub oval_bound_holds: Vec<bool>,
    pub genus_equality: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub name: String,
    pub applicable: bool,
    pub reason: String,
    pub lhs: i64,
    pub rhs: String,
    pub holds: bool,
}

fn relation_label(r: FormRelation) -> &'static str {
    match r {
        FormRelation::Equal => "equal",
        FormRelation::Conjugate => "conjugate",
        FormRelation::NonConjugate => "non-conjugate",
    }
}

/// Builds the full report for a constructed family.
pub fn family_report(f: &EquippedFamily) -> Result<FamilyReport> {
    let inv = family_invariants(f);
    let axioms = verify_axioms(f);
    let quotient = quotient_checks(f)?;
    let bounds = check_corollaries(f)?;
    let components = f
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(ComponentReport {
                name: c.name.clone(),
                degree: c.degree,
                genus: f.component_genus[i],
                ovals: f.component_ovals[i],
                lift: c
                    .lift
                    .as_ref()
                    .map(|t| t.images().to_vec())
                    .unwrap_or_default(),
                quotient_orientable: bounds.quotients_orientable[i],
            })
        })
        .collect::<Result<_>>()?;
    Ok(FamilyReport {
        version: FORMAT_VERSION.to_string(),
        convention: CONVENTION.to_string(),
        base_points: f.base.n,
        r: inv.r,
        group_order: inv.group_order,
        subgroup_orders: inv.subgroup_orders,
        hat_genus: inv.hat_genus,
        hat_ovals: inv.hat_ovals,
        components,
        axioms: AxiomReport {
            all_pass: axioms.all_pass(),
            group_normalized: axioms.group_normalized,
            subgroups_normalized: axioms.subgroups_normalized,
            generated: axioms.generated,
            involutive: axioms.involutive,
            admissible: axioms.admissible,
        },
        quotient_bounds: QuotientBoundReport {
            applicable: quotient.applicable,
            genus_bound_holds: quotient.per_component.iter().map(|&(a, _)| a).collect(),
            oval_bound_holds: quotient.per_component.iter().map(|&(_, b)| b).collect(),
            genus_equality: quotient.genus_equality,
        },
        corollaries: bounds
            .records
            .iter()
            .map(|r| CorollaryReport {
                name: r.name.to_string(),
                applicable: r.applicable,
                reason: r.reason.clone(),
                lhs: r.lhs,
                rhs: r.rhs_display.clone(),
                holds: r.holds,
            })
            .collect(),
        real_form_relations: bounds
            .relations
            .iter()
            .map(|row| row.iter().map(|&r| relation_label(r).to_string()).collect())
            .collect(),
    })
}

/// Plain-text rendering of a family report.
pub fn render_family_text(rep: &FamilyReport) -> String {
    let mut s = String::new();
    use std::fmt::Write;
    let _ = writeln!(s, "equipped family over a base with {} branch points", rep.base_points);
    let _ = writeln!(s, "  components: r = {}", rep.r);
    let _ = writeln!(s, "  |G| = {}", rep.group_order);
    let _ = writeln!(
        s,
        "  |G_i| = {}",
        rep.subgroup_orders
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(s, "  hat_g = {}", rep.hat_genus);
    for (i, c) in rep.components.iter().enumerate() {
        let _ = writeln!(
            s,
            "  component '{}': d = {}, g = {}, k = {}, k_hat = {}, quotient {}",
            c.name,
            c.degree,
            c.genus,
            c.ovals,
            rep.hat_ovals[i],
            if c.quotient_orientable {
                "orientable"
            } else {
                "non-orientable"
            }
        );
    }
    let _ = writeln!(
        s,
        "  axioms: {}",
        if rep.axioms.all_pass { "all pass" } else { "FAILURES present" }
    );
    if !rep.axioms.generated {
        let _ = writeln!(s, "    generation by G_1..G_r FAILS");
    }
    let _ = writeln!(
        s,
        "  quotient bounds: {}",
        if rep.quotient_bounds.applicable {
            "applicable"
        } else {
            "not applicable (hat_g <= 1)"
        }
    );
    for c in &rep.corollaries {
        let status = if !c.applicable {
            format!("not applicable ({})", c.reason)
        } else if c.holds {
            "holds".to_string()
        } else {
            "VIOLATED".to_string()
        };
        let _ = writeln!(s, "  {}: lhs = {}, rhs = {} -> {}", c.name, c.lhs, c.rhs, status);
    }
    s
}

/// Validation report for the `validate` command.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub version: String,
    pub convention: String,
    pub components: Vec<ComponentValidation>,
    pub foam: Option<FoamValidation>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentValidation {
    pub name: String,
    pub monodromy_valid: bool,
    pub failures: Vec<String>,
    pub lift_count: Option<usize>,
    pub lift_valid: Option<bool>,
    pub admissible: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoamValidation {
    pub classification: String,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    pub connected: bool,
}

impl ValidationReport {
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for c in &self.components {
            let _ = writeln!(
                s,
                "component '{}': monodromy {}",
                c.name,
                if c.monodromy_valid { "valid" } else { "INVALID" }
            );
            for f in &c.failures {
                let _ = writeln!(s, "    {f}");
            }
            if let Some(nc) = c.lift_count {
                let _ = writeln!(s, "    involution lifts available: {nc}");
            }
            if let Some(v) = c.lift_valid {
                let _ = writeln!(s, "    lift: {}", if v { "valid" } else { "INVALID" });
            }
            if let Some(a) = c.admissible {
                let _ = writeln!(
                    s,
                    "    admissible: {}",
                    if a { "yes" } else { "no (oval misses or repeats an arc)" }
                );
            }
        }
        if let Some(foam) = &self.foam {
            let _ = writeln!(
                s,
                "foam: conditions (a)-(d) {}; classification: {}",
                if foam.cond_a && foam.cond_b && foam.cond_c && foam.cond_d {
                    "pass"
                } else {
                    "FAIL"
                },
                foam.classification
            );
        }
        let _ = writeln!(s, "result: {}", if self.all_pass { "PASS" } else { "FAIL" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E9_DOC: &str = r#"{
        "base": { "n": 4 },
        "components": [
            { "name": "A", "degree": 3,
              "monodromy": ["(1 2 3)", "(1 3 2)", "(1 2 3)", "(1 3 2)"],
              "lift": "auto" },
            { "name": "B", "degree": 3,
              "monodromy": [[2,3,1], [2,3,1], [3,1,2], [3,1,2]],
              "lift": [1,3,2] }
        ]
    }"#;

    #[test]
    fn parse_and_roundtrip() {
        let doc = InputDocument::parse(E9_DOC).unwrap();
        assert_eq!(doc.base.n, 4);
        let comps = doc.to_components().unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].lift.is_none());
        assert_eq!(
            comps[1].lift,
            Some(Permutation::from_cycles("(2 3)", 3).unwrap())
        );
        // Cycle string and image array agree.
        assert_eq!(comps[0].monodromy[0], comps[1].monodromy[0]);

        let text = doc.to_json();
        let again = InputDocument::parse(&text).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn malformed_cycle_string_is_a_parse_class_error() {
        let doc = InputDocument::parse(
            r#"{ "base": { "n": 1 },
                 "components": [ { "name": "x", "degree": 2, "monodromy": ["(1"] } ] }"#,
        )
        .unwrap();
        assert!(doc.to_components().is_err());
    }

    #[test]
    fn bad_json_is_a_parse_error() {
        assert!(matches!(
            InputDocument::parse("{ not json"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn family_report_is_deterministic() {
        let doc = InputDocument::parse(E9_DOC).unwrap();
        let comps = doc.to_components().unwrap();
        let f = crate::famforge::build_family(
            doc.base(),
            &comps,
            crate::famforge::LiftPolicy::FirstValid,
        )
        .unwrap();
        let r1 = serde_json::to_string(&family_report(&f).unwrap()).unwrap();
        let r2 = serde_json::to_string(&family_report(&f).unwrap()).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.contains("\"convention\":\"left-to-right\""));
        assert!(r1.contains("\"group_order\":9"));
    }
}
