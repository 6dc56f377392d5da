use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{AxisPoints, CurveComponent, HypersurfaceConfig, Incidence, IsolatedPoint, SpecialPoint};
use crate::lattice::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown field at line {line}, column {column}: {message}")]
    UnknownField {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("type mismatch at line {line}, column {column}: {message}")]
    TypeMismatch {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Schema { location: String, message: String },
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let (line, column) = (e.line(), e.column());
        let message = e.to_string();
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => Self::Syntax {
                line,
                column,
                message,
            },
            Category::Data if message.starts_with("unknown field") => Self::UnknownField {
                line,
                column,
                message,
            },
            Category::Data => Self::TypeMismatch {
                line,
                column,
                message,
            },
        }
    }
}

type Rows = Vec<Vec<i64>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    n: u32,
    d: u32,
    #[serde(default)]
    label: String,
    #[serde(default)]
    components: Vec<ComponentDocument>,
    #[serde(default)]
    special_points: Vec<SpecialPointDocument>,
    #[serde(default)]
    isolated_points: Vec<IsolatedDocument>,
    #[serde(
        rename = "num_irreducible_components_of_V",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    num_irreducible_components_of_v: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDocument {
    id: String,
    genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u64>,
    mu_perp: usize,
    #[serde(default)]
    genus_loop_monodromies: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IncidenceDocument {
    component: String,
    branch_monodromies: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecialPointDocument {
    id: String,
    incidences: Vec<IncidenceDocument>,
    chi_fiber: i64,
    b_fiber_free: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relative_cycle_lattice: Option<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsolatedDocument {
    id: String,
    milnor_number: u64,
}

fn matrix(rows: &Rows, location: impl FnOnce() -> String) -> Result<IntMatrix, ParseError> {
    IntMatrix::from_rows(rows).map_err(|e| ParseError::Schema {
        location: location(),
        message: e.to_string(),
    })
}

fn rows_of(m: &IntMatrix) -> Result<Rows, serde_json::Error> {
    m.to_i64_rows()
        .ok_or_else(|| serde::ser::Error::custom("matrix entry does not fit in 64 bits"))
}

/// Parses a JSON configuration document. The result is not yet validated.
pub fn parse_config(document: &str) -> Result<HypersurfaceConfig, ParseError> {
    let doc: ConfigDocument = serde_json::from_str(document)?;
    let components = doc
        .components
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let axis_points = match (c.nu, c.degree) {
                (Some(nu), None) => AxisPoints::Count(nu),
                (None, Some(deg)) => AxisPoints::CurveDegree(deg),
                _ => {
                    return Err(ParseError::Schema {
                        location: format!("components[{ci}]"),
                        message: "exactly one of `nu` and `degree` must be given".into(),
                    })
                }
            };
            let genus_loop_monodromies = c
                .genus_loop_monodromies
                .iter()
                .enumerate()
                .map(|(j, m)| matrix(m, || format!("components[{ci}].genus_loop_monodromies[{j}]")))
                .collect::<Result<_, _>>()?;
            Ok(CurveComponent {
                id: c.id.clone(),
                genus: c.genus,
                axis_points,
                mu_perp: c.mu_perp,
                genus_loop_monodromies,
            })
        })
        .collect::<Result<_, _>>()?;

    let special_points = doc
        .special_points
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            let incidences = q
                .incidences
                .iter()
                .enumerate()
                .map(|(ii, inc)| {
                    let branch_monodromies = inc
                        .branch_monodromies
                        .iter()
                        .enumerate()
                        .map(|(s, m)| {
                            matrix(m, || {
                                format!("special_points[{qi}].incidences[{ii}].branch_monodromies[{s}]")
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    Ok(Incidence {
                        component: inc.component.clone(),
                        branch_monodromies,
                    })
                })
                .collect::<Result<_, ParseError>>()?;
            Ok(SpecialPoint {
                id: q.id.clone(),
                incidences,
                chi_fiber: q.chi_fiber,
                b_fiber_free: q.b_fiber_free,
                relative_cycle_lattice: q.relative_cycle_lattice.as_ref().map(|rows| {
                    rows.iter()
                        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                        .collect()
                }),
            })
        })
        .collect::<Result<_, ParseError>>()?;

    Ok(HypersurfaceConfig {
        n: doc.n,
        d: doc.d,
        label: doc.label,
        components,
        special_points,
        isolated_points: doc
            .isolated_points
            .into_iter()
            .map(|r| IsolatedPoint {
                id: r.id,
                milnor_number: r.milnor_number,
            })
            .collect(),
        num_irreducible_components: doc.num_irreducible_components_of_v,
    })
}

fn to_document(config: &HypersurfaceConfig) -> Result<ConfigDocument, serde_json::Error> {
    let components = config
        .components
        .iter()
        .map(|c| {
            let (nu, degree) = match c.axis_points {
                AxisPoints::Count(nu) => (Some(nu), None),
                AxisPoints::CurveDegree(deg) => (None, Some(deg)),
            };
            Ok(ComponentDocument {
                id: c.id.clone(),
                genus: c.genus,
                nu,
                degree,
                mu_perp: c.mu_perp,
                genus_loop_monodromies: c.genus_loop_monodromies.iter().map(rows_of).collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<_, serde_json::Error>>()?;
    let special_points = config
        .special_points
        .iter()
        .map(|q| {
            let incidences = q
                .incidences
                .iter()
                .map(|inc| {
                    Ok(IncidenceDocument {
                        component: inc.component.clone(),
                        branch_monodromies: inc.branch_monodromies.iter().map(rows_of).collect::<Result<_, _>>()?,
                    })
                })
                .collect::<Result<_, serde_json::Error>>()?;
            let relative_cycle_lattice = q
                .relative_cycle_lattice
                .as_ref()
                .map(|rows| {
                    rows.iter()
                        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| serde::ser::Error::custom("lattice entry does not fit in 64 bits"))
                })
                .transpose()?;
            Ok(SpecialPointDocument {
                id: q.id.clone(),
                incidences,
                chi_fiber: q.chi_fiber,
                b_fiber_free: q.b_fiber_free,
                relative_cycle_lattice,
            })
        })
        .collect::<Result<_, serde_json::Error>>()?;
    Ok(ConfigDocument {
        n: config.n,
        d: config.d,
        label: config.label.clone(),
        components,
        special_points,
        isolated_points: config
            .isolated_points
            .iter()
            .map(|r| IsolatedDocument {
                id: r.id.clone(),
                milnor_number: r.milnor_number,
            })
            .collect(),
        num_irreducible_components_of_v: config.num_irreducible_components,
    })
}

/// Inverse of [`parse_config`].
pub fn serialize_config(config: &HypersurfaceConfig) -> Result<String, serde_json::Error> {
    serde_json::to_string_pretty(&to_document(config)?)
}

/// The configuration as a JSON value, for embedding in reports.
pub(crate) fn config_value(config: &HypersurfaceConfig) -> Result<serde_json::Value, serde_json::Error> {
    serde_json::to_value(to_document(config)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = r#"{
        "n": 2, "d": 3, "label": "x^2 z + y^2 w",
        "components": [{"id": "line", "genus": 0, "nu": 3, "mu_perp": 1}],
        "special_points": [
            {"id": "q1", "incidences": [{"component": "line", "branch_monodromies": [[[-1]]]}],
             "chi_fiber": 2, "b_fiber_free": 0},
            {"id": "q2", "incidences": [{"component": "line", "branch_monodromies": [[[-1]]]}],
             "chi_fiber": 2, "b_fiber_free": 0}
        ]
    }"#;

    #[test]
    fn parses_two_special_points_on_a_line() {
        let c = parse_config(CUBIC).unwrap();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.special_points.len(), 2);
        assert_eq!(c.components[0].axis_points, AxisPoints::Count(3));
        assert_eq!(
            c.special_points[0].incidences[0].branch_monodromies[0],
            IntMatrix::from_rows(&[[-1]]).unwrap()
        );
    }

    #[test]
    fn isolated_only_document() {
        let c = parse_config(r#"{"n": 2, "d": 4, "isolated_points": [{"id": "r", "milnor_number": 1}]}"#)
            .unwrap();
        assert!(c.components.is_empty());
        assert!(c.special_points.is_empty());
        assert_eq!(c.isolated_points[0].milnor_number, 1);
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_config("{\"n\": 2,\n \"d\": }").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(r#"{"n": 2, "d": 3, "colour": "red"}"#).unwrap_err();
        assert!(matches!(err, ParseError::UnknownField { .. }), "{err:?}");
        let err = parse_config(
            r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 0, "nu": 3, "mu_perp": 1, "extra": 1}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::UnknownField { .. }), "{err:?}");
    }

    #[test]
    fn wrong_types_are_rejected() {
        let err = parse_config(r#"{"n": "two", "d": 3}"#).unwrap_err();
        assert!(matches!(err, ParseError::TypeMismatch { .. }), "{err:?}");
        let err = parse_config(r#"{"n": -2, "d": 3}"#).unwrap_err();
        assert!(matches!(err, ParseError::TypeMismatch { .. }), "{err:?}");
    }

    #[test]
    fn nu_and_degree_are_exclusive() {
        let both = r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 0, "nu": 3, "degree": 1, "mu_perp": 1}]}"#;
        assert!(matches!(parse_config(both), Err(ParseError::Schema { .. })));
        let neither = r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 0, "mu_perp": 1}]}"#;
        assert!(matches!(parse_config(neither), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn ragged_matrix_is_a_schema_error() {
        let doc = r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 1, "nu": 3, "mu_perp": 2,
            "genus_loop_monodromies": [[[1, 0], [0]], [[1, 0], [0, 1]]]}]}"#;
        assert!(matches!(parse_config(doc), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn round_trip() {
        let c = parse_config(CUBIC).unwrap();
        let again = parse_config(&serialize_config(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }
}
