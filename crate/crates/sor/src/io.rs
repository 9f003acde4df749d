//! Versioned JSON instance schema (`sor-v1`), the only serialization of
//! problem instances. Fields mirror the in-memory problem; component
//! functions are tagged objects such as
//! `{"type": "exp_affine", "c": 1.0, "eta": 0.7, "kappa": -0.2}`.
//! Unknown fields are rejected.

use crate::error::{Error, Result};
use crate::problem::{ConstraintSet, Family, Objective, RatioSense, RatioTerm, SorProblem};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "sor-v1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceV1 {
    version: String,
    family: Family,
    m: usize,
    #[serde(rename = "T")]
    t: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: ObjectiveV1,
    terms: Vec<RatioTerm>,
    constraints: ConstraintSet,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveV1 {
    offset: f64,
    sense: RatioSense,
}

pub fn to_json(problem: &SorProblem) -> String {
    let dto = InstanceV1 {
        version: SCHEMA_VERSION.to_string(),
        family: problem.family,
        m: problem.m,
        t: problem.t,
        lower: problem.lower.clone(),
        upper: problem.upper.clone(),
        objective: ObjectiveV1 {
            offset: problem.objective.offset,
            sense: problem.objective.sense,
        },
        terms: problem.terms.clone(),
        constraints: problem.constraints.clone(),
    };
    serde_json::to_string_pretty(&dto).expect("instance serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<SorProblem> {
    let dto: InstanceV1 = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if dto.version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version {:?}, expected {SCHEMA_VERSION:?}",
            dto.version
        )));
    }
    let problem = SorProblem {
        m: dto.m,
        t: dto.t,
        lower: dto.lower,
        upper: dto.upper,
        terms: dto.terms,
        constraints: dto.constraints,
        objective: Objective {
            offset: dto.objective.offset,
            sense: dto.objective.sense,
        },
        family: dto.family,
    };
    problem
        .validate()
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::{ap_to_sor, gen_ap, gen_mcp, mcp_to_sor};

    #[test]
    fn round_trip_preserves_evaluation() {
        let p = mcp_to_sor(&gen_mcp(3, 4, 8.0, 3, 11)).unwrap();
        let text = to_json(&p);
        let q = from_json(&text).unwrap();
        assert_eq!(p.m, q.m);
        assert_eq!(p.t, q.t);
        assert_eq!(p.family, q.family);
        let y = vec![true, false, true, true];
        let x = vec![0.5, 1.0, 0.2, 0.8];
        assert_eq!(
            p.objective_value(&y, &x).unwrap(),
            q.objective_value(&y, &x).unwrap()
        );
        // serialization is stable
        assert_eq!(text, to_json(&q));
    }

    #[test]
    fn unknown_fields_rejected() {
        let p = ap_to_sor(&gen_ap(1, 2, 3.0, 1, 1)).unwrap();
        let mut text = to_json(&p);
        text = text.replacen("\"version\"", "\"surprise\": 1,\n  \"version\"", 1);
        assert!(matches!(from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn version_gate() {
        let p = ap_to_sor(&gen_ap(1, 2, 3.0, 1, 1)).unwrap();
        let text = to_json(&p).replace("sor-v1", "sor-v2");
        assert!(matches!(from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_text_is_a_parse_error() {
        assert!(matches!(from_json("{ not json"), Err(Error::Parse(_))));
    }
}
