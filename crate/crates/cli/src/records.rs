//! Input records and output rows for the batch `div` command, with CSV and
//! JSON codecs. Numbers are serialized with their shortest round-trip
//! representation in both formats; no tolerance is ever applied at
//! serialization time.

use serde::{Deserialize, Serialize};

use gaussdiv::gaussian::{Gaussian1D, GaussianND};
use gaussdiv::multivariate::psi_multivariate;
use gaussdiv::report::divergence_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Univariate,
    Multivariate,
}

/// Parameter payload of one measure; shape must match the record family.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Params {
    Univariate { mu: f64, sigma: f64 },
    Multivariate { mu: Vec<f64>, sigma: Vec<Vec<f64>> },
}

/// One input pair.
#[derive(Debug, Clone, Deserialize)]
pub struct PairRecord {
    pub id: String,
    pub family: Family,
    pub p: Params,
    pub q: Params,
}

/// One output row. Metric fields are absent when they could not be computed
/// (or do not apply to the family); `psi` is absent whenever `psi_valid` is
/// false, and `error` carries the failure kind.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportRow {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hellinger_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bhattacharyya_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fisher_rao: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_plane: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    pub psi_valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportRow {
    fn failed(id: String, error: String) -> Self {
        ReportRow {
            id,
            hellinger_sq: None,
            bhattacharyya_angle: None,
            fisher_rao: None,
            half_plane: None,
            disc: None,
            psi: None,
            psi_valid: false,
            error: Some(error),
        }
    }
}

fn univariate_row(id: String, p: &Gaussian1D, q: &Gaussian1D) -> ReportRow {
    match divergence_report(p, q) {
        Ok(r) => ReportRow {
            id,
            hellinger_sq: Some(r.hellinger_sq),
            bhattacharyya_angle: Some(r.bhattacharyya_angle),
            fisher_rao: Some(r.fisher_rao),
            half_plane: Some(r.half_plane),
            disc: Some(r.disc),
            psi: r.psi,
            psi_valid: r.psi_valid,
            error: r.psi_error.map(|e| e.name().to_string()),
        },
        Err(e) => ReportRow::failed(id, e.name().to_string()),
    }
}

fn build_nd(params: &Params) -> Result<GaussianND, String> {
    match params {
        Params::Multivariate { mu, sigma } => {
            let n = mu.len();
            let mut flat = Vec::with_capacity(n * n);
            for row in sigma {
                if row.len() != n {
                    return Err("ParseError".to_string());
                }
                flat.extend_from_slice(row);
            }
            if sigma.len() != n {
                return Err("ParseError".to_string());
            }
            GaussianND::from_parts(mu, &flat).map_err(|e| e.name().to_string())
        }
        Params::Univariate { .. } => Err("ParseError".to_string()),
    }
}

fn multivariate_row(id: String, p: &Params, q: &Params) -> ReportRow {
    let (p, q) = match (build_nd(p), build_nd(q)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) => return ReportRow::failed(id, e),
    };
    // only the embedded invariant applies to multivariate pairs; the
    // spherical and manifold metrics here are defined for univariate
    // measures
    match psi_multivariate(&p, &q) {
        Ok(r) => ReportRow {
            id,
            hellinger_sq: None,
            bhattacharyya_angle: None,
            fisher_rao: None,
            half_plane: None,
            disc: None,
            psi: Some(r.psi),
            psi_valid: true,
            error: None,
        },
        Err(e) => ReportRow {
            id,
            hellinger_sq: None,
            bhattacharyya_angle: None,
            fisher_rao: None,
            half_plane: None,
            disc: None,
            psi: None,
            psi_valid: false,
            error: Some(e.name().to_string()),
        },
    }
}

/// Compute the report row for one record; malformed rows yield an error
/// field rather than aborting the batch.
pub fn compute_row(rec: &PairRecord) -> ReportRow {
    match rec.family {
        Family::Univariate => match (&rec.p, &rec.q) {
            (
                Params::Univariate { mu: mu_p, sigma: sigma_p },
                Params::Univariate { mu: mu_q, sigma: sigma_q },
            ) => {
                let p = Gaussian1D::new(*mu_p, *sigma_p);
                let q = Gaussian1D::new(*mu_q, *sigma_q);
                match (p, q) {
                    (Ok(p), Ok(q)) => univariate_row(rec.id.clone(), &p, &q),
                    (Err(e), _) | (_, Err(e)) => {
                        ReportRow::failed(rec.id.clone(), e.name().to_string())
                    }
                }
            }
            _ => ReportRow::failed(rec.id.clone(), "ParseError".to_string()),
        },
        Family::Multivariate => multivariate_row(rec.id.clone(), &rec.p, &rec.q),
    }
}

/// Parse a JSON batch: a top-level array of pair records. A syntactically
/// broken file is a file-level error; a structurally broken element becomes
/// a row-level error carrying whatever id can be salvaged.
pub fn parse_json(bytes: &[u8]) -> Result<Vec<Result<PairRecord, Box<ReportRow>>>, String> {
    let values: Vec<serde_json::Value> =
        serde_json::from_slice(bytes).map_err(|e| format!("JSON parse error: {e}"))?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let fallback_id = value
                .get("id")
                .and_then(|v| v.as_str())
                .map(str::to_string)
                .unwrap_or_else(|| format!("row{i}"));
            serde_json::from_value::<PairRecord>(value)
                .map_err(|_| Box::new(ReportRow::failed(fallback_id, "ParseError".to_string())))
        })
        .collect())
}

/// Parse a CSV batch with columns id,mu_p,sigma_p,mu_q,sigma_q (univariate
/// pairs only; multivariate input uses JSON).
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<Result<PairRecord, Box<ReportRow>>>, String> {
    #[derive(Deserialize)]
    struct CsvRow {
        id: String,
        mu_p: f64,
        sigma_p: f64,
        mu_q: f64,
        sigma_q: f64,
    }
    let mut reader = csv::Reader::from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| format!("CSV parse error: {e}"))?
        .clone();
    let expected = ["id", "mu_p", "sigma_p", "mu_q", "sigma_q"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(format!(
            "CSV parse error: expected header {}, got {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    Ok(reader
        .deserialize::<CsvRow>()
        .enumerate()
        .map(|(i, row)| match row {
            Ok(r) => Ok(PairRecord {
                id: r.id,
                family: Family::Univariate,
                p: Params::Univariate { mu: r.mu_p, sigma: r.sigma_p },
                q: Params::Univariate { mu: r.mu_q, sigma: r.sigma_q },
            }),
            Err(_) => Err(Box::new(ReportRow::failed(format!("row{i}"), "ParseError".to_string()))),
        })
        .collect())
}

/// Encode rows as pretty-printed JSON (newline-terminated).
pub fn write_json(rows: &[ReportRow]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(rows).expect("report rows serialize");
    out.push(b'\n');
    out
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Encode rows as CSV with a fixed header; absent fields are empty cells.
pub fn write_csv(rows: &[ReportRow]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "id",
            "hellinger_sq",
            "bhattacharyya_angle",
            "fisher_rao",
            "half_plane",
            "disc",
            "psi",
            "psi_valid",
            "error",
        ])
        .expect("in-memory write");
    for row in rows {
        writer
            .write_record([
                row.id.clone(),
                cell(row.hellinger_sq),
                cell(row.bhattacharyya_angle),
                cell(row.fisher_rao),
                cell(row.half_plane),
                cell(row.disc),
                cell(row.psi),
                row.psi_valid.to_string(),
                row.error.clone().unwrap_or_default(),
            ])
            .expect("in-memory write");
    }
    writer.flush().expect("in-memory flush");
    writer.into_inner().expect("in-memory writer")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_univariate() {
        let input = br#"[{"id":"a","family":"univariate","p":{"mu":0.0,"sigma":1.0},"q":{"mu":1.0,"sigma":1.0}}]"#;
        let records = parse_json(input).unwrap();
        assert_eq!(records.len(), 1);
        let row = compute_row(records[0].as_ref().unwrap());
        assert!(row.psi_valid);
        assert!((row.psi.unwrap() - 0.4842888123147816).abs() < 1e-13);
        assert!(row.error.is_none());
    }

    #[test]
    fn json_bad_element_is_row_error() {
        let input = br#"[{"id":"bad","family":"univariate","p":{"mu":0.0},"q":{"mu":1.0,"sigma":1.0}}]"#;
        let records = parse_json(input).unwrap();
        let err_row = records[0].as_ref().unwrap_err();
        assert_eq!(err_row.id, "bad");
        assert_eq!(err_row.error.as_deref(), Some("ParseError"));
    }

    #[test]
    fn json_file_level_error() {
        assert!(parse_json(b"{not json").is_err());
    }

    #[test]
    fn invalid_norm_keeps_other_metrics() {
        let rec = PairRecord {
            id: "narrow".into(),
            family: Family::Univariate,
            p: Params::Univariate { mu: 0.0, sigma: 0.2 },
            q: Params::Univariate { mu: 1.0, sigma: 1.0 },
        };
        let row = compute_row(&rec);
        assert!(!row.psi_valid);
        assert!(row.psi.is_none());
        assert_eq!(row.error.as_deref(), Some("InvalidNorm"));
        assert!(row.hellinger_sq.is_some() && row.fisher_rao.is_some());
    }

    #[test]
    fn multivariate_row_has_psi_only() {
        let rec = PairRecord {
            id: "m".into(),
            family: Family::Multivariate,
            p: Params::Multivariate {
                mu: vec![0.0, 0.0],
                sigma: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
            q: Params::Multivariate {
                mu: vec![1.0, 0.0],
                sigma: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
        };
        let row = compute_row(&rec);
        assert!(row.psi_valid);
        assert!((row.psi.unwrap() - 0.08311113867686637).abs() < 1e-14);
        assert!(row.hellinger_sq.is_none());
    }

    #[test]
    fn family_payload_mismatch() {
        let rec = PairRecord {
            id: "x".into(),
            family: Family::Multivariate,
            p: Params::Univariate { mu: 0.0, sigma: 1.0 },
            q: Params::Univariate { mu: 0.0, sigma: 1.0 },
        };
        assert_eq!(compute_row(&rec).error.as_deref(), Some("ParseError"));
    }

    #[test]
    fn csv_parses_and_rejects() {
        let input = b"id,mu_p,sigma_p,mu_q,sigma_q\nr1,0.0,1.0,1.0,1.0\nr2,oops,1.0,1.0,1.0\n";
        let records = parse_csv(input).unwrap();
        assert!(records[0].is_ok());
        assert!(records[1].is_err());
        let bad_header = b"id,a,b\nr1,0,1\n";
        assert!(parse_csv(bad_header).is_err());
    }

    #[test]
    fn empty_batches() {
        assert_eq!(parse_json(b"[]").unwrap().len(), 0);
        assert_eq!(write_json(&[]), b"[]\n");
        let csv_out = write_csv(&[]);
        assert!(csv_out.starts_with(b"id,hellinger_sq"));
    }

    #[test]
    fn csv_and_json_encode_identical_numbers() {
        let rec = PairRecord {
            id: "a".into(),
            family: Family::Univariate,
            p: Params::Univariate { mu: 0.0, sigma: 1.0 },
            q: Params::Univariate { mu: 1.0, sigma: 1.0 },
        };
        let row = compute_row(&rec);
        let json = write_json(std::slice::from_ref(&row));
        let csv_bytes = write_csv(std::slice::from_ref(&row));
        let from_json: Vec<ReportRow> = serde_json::from_slice(&json).unwrap();
        let mut reader = csv::Reader::from_reader(csv_bytes.as_slice());
        let from_csv: Vec<ReportRow> =
            reader.deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(from_json[0].psi.unwrap().to_bits(), from_csv[0].psi.unwrap().to_bits());
        assert_eq!(
            from_json[0].hellinger_sq.unwrap().to_bits(),
            from_csv[0].hellinger_sq.unwrap().to_bits()
        );
        assert_eq!(
            from_json[0].fisher_rao.unwrap().to_bits(),
            from_csv[0].fisher_rao.unwrap().to_bits()
        );
    }
}
