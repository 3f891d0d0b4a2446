use serde::Serialize;
use serde_json::Value;

use rht_core::linalg::Matrix;
use rht_core::scalar::{self, Scalar};
use rht_core::sep_symplectic::Verdict;

/// Top-level report. Field order is the serialization order.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub command: CommandEcho,
    pub result: Payload,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub flags: FlagEcho,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FlagEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub criterion: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Check(CheckPayload),
    Cohomology(CohomologyPayload),
    FsModel(FsModelPayload),
    Kappa(KappaPayload),
    Extendable(ExtendablePayload),
    ModuliDim(ModuliDimPayload),
    NilExtendable(NilExtendablePayload),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckPayload {
    pub ok: bool,
    pub d_squared: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilmanifold: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalgebra: Option<CoalgebraChecks>,
    pub random_laws: RandomLaws,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoalgebraChecks {
    pub dimension: usize,
    pub coassociativity: Vec<String>,
    pub counit: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomLaws {
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyPayload {
    pub groups: Vec<GroupEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupEntry {
    pub degree: i32,
    pub dimension: usize,
    pub representatives: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FsModelPayload {
    pub degree_one_basis: Vec<String>,
    pub degree_two_basis: Vec<String>,
    /// Rows indexed by `degree_two_basis`, columns by `degree_one_basis`.
    pub delta: Vec<Vec<String>>,
    pub h1_basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaPayload {
    pub source: Vec<String>,
    pub w2_basis: Vec<String>,
    /// Rows indexed by `w2_basis`, columns by `source`.
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub image_support: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    pub class: String,
    pub image: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendablePayload {
    pub extendable: bool,
    pub witness: Option<WitnessEntry>,
    pub w2_basis: Vec<String>,
    pub base_basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliDimPayload {
    pub w2_dimension: usize,
    pub torus_rank: usize,
    pub moduli_dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NilExtendablePayload {
    pub generators: Vec<String>,
    pub extendable: bool,
    pub witness: Option<WitnessEntry>,
    pub base_basis: Vec<String>,
}

pub fn render_vec(v: &[Scalar]) -> Vec<String> {
    v.iter().map(scalar::render).collect()
}

pub fn render_matrix(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| render_vec(m.row(r))).collect()
}

pub fn witness(v: &Verdict) -> Option<WitnessEntry> {
    v.witness.as_ref().map(|w| WitnessEntry {
        class: w.class.clone(),
        image: render_vec(&w.image),
    })
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Indented `key: value` listing of the same content as the JSON.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        text(&value, 0, &mut out);
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a)
            if a.iter()
                .all(|x| matches!(x, Value::String(_) | Value::Number(_))) =>
        {
            Some(
                a.iter()
                    .map(|x| scalar_text(x).unwrap())
                    .collect::<Vec<_>>()
                    .join("  "),
            )
        }
        _ => None,
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!(
            "{pad}{}\n",
            scalar_text(other).unwrap_or_default()
        )),
    }
}
