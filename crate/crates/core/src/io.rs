//! The on-disk JSON formats: matrices (`qmat-1`), spectra (`qspec-1`), and
//! Drazin results (`qdrz-1`).
//!
//! Writers emit exactly the documented shapes, compact, with `"format"`
//! first; floats print in shortest round-trip form, so re-parsing an emitted
//! document recovers bit-identical values.  Readers reject anything else
//! with a line or field diagnostic.  [`FormatError`] is deliberately a
//! different type from [`crate::error::Error`]: a malformed file and a
//! mathematical failure call for different exit paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drazin::{DrazinReport, DrazinResult};
use crate::hmat::HMatrix;
use crate::quat::{EigenSphere, Quaternion};
use crate::sspec::Spectrum;

/// Format tag of a serialized matrix.
pub const MATRIX_FORMAT: &str = "qmat-1";
/// Format tag of a serialized spectrum.
pub const SPECTRUM_FORMAT: &str = "qspec-1";
/// Format tag of a serialized Drazin result.
pub const DRAZIN_FORMAT: &str = "qdrz-1";

/// A document failed to parse or violated its declared shape.
#[derive(Debug, Error)]
pub enum FormatError {
    /// Not valid JSON, or a field has the wrong type or length; the message
    /// carries the line and column.
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),

    /// Valid JSON whose content breaks the format contract.
    #[error("{field}: {what}")]
    Shape { field: String, what: String },
}

fn shape(field: impl Into<String>, what: impl Into<String>) -> FormatError {
    FormatError::Shape {
        field: field.into(),
        what: what.into(),
    }
}

fn sub(at: &str, field: &str) -> String {
    if at.is_empty() {
        field.to_owned()
    } else {
        format!("{at}.{field}")
    }
}

// ── qmat-1 ──────────────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QmatDoc {
    format: String,
    n: usize,
    entries: Vec<Vec<[f64; 4]>>,
}

fn matrix_to_doc(a: &HMatrix, at: &str) -> Result<QmatDoc, FormatError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(shape(
            sub(at, "n"),
            format!("matrix is {n}×{}; the format holds square matrices only", a.ncols()),
        ));
    }
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let q = a[(i, j)];
            let e = [q.a, q.b, q.c, q.d];
            if e.iter().any(|x| !x.is_finite()) {
                return Err(shape(
                    format!("{}[{i}][{j}]", sub(at, "entries")),
                    "not a finite number",
                ));
            }
            row.push(e);
        }
        entries.push(row);
    }
    Ok(QmatDoc {
        format: MATRIX_FORMAT.to_owned(),
        n,
        entries,
    })
}

fn matrix_from_doc(doc: &QmatDoc, at: &str) -> Result<HMatrix, FormatError> {
    if doc.format != MATRIX_FORMAT {
        return Err(shape(
            sub(at, "format"),
            format!("expected \"{MATRIX_FORMAT}\", found \"{}\"", doc.format),
        ));
    }
    let n = doc.n;
    if doc.entries.len() != n {
        return Err(shape(
            sub(at, "entries"),
            format!("expected {n} rows, found {}", doc.entries.len()),
        ));
    }
    for (i, row) in doc.entries.iter().enumerate() {
        if row.len() != n {
            return Err(shape(
                format!("{}[{i}]", sub(at, "entries")),
                format!("expected {n} columns, found {}", row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            if e.iter().any(|x| !x.is_finite()) {
                return Err(shape(
                    format!("{}[{i}][{j}]", sub(at, "entries")),
                    "not a finite number",
                ));
            }
        }
    }
    Ok(HMatrix::from_fn(n, n, |i, j| {
        let e = doc.entries[i][j];
        Quaternion::new(e[0], e[1], e[2], e[3])
    }))
}

/// Serializes a square matrix as a `qmat-1` document.
pub fn write_matrix(a: &HMatrix) -> Result<String, FormatError> {
    let doc = matrix_to_doc(a, "")?;
    Ok(serde_json::to_string(&doc).expect("finite numbers and string keys"))
}

/// Parses a `qmat-1` document.
pub fn read_matrix(text: &str) -> Result<HMatrix, FormatError> {
    let doc: QmatDoc = serde_json::from_str(text)?;
    matrix_from_doc(&doc, "")
}

// ── qspec-1 ─────────────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QspecDoc {
    format: String,
    spheres: Vec<QspecSphere>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QspecSphere {
    u: f64,
    v: f64,
    mult: usize,
}

/// Serializes a spectrum as a `qspec-1` document.
pub fn write_spectrum(s: &Spectrum) -> Result<String, FormatError> {
    let mut spheres = Vec::with_capacity(s.len());
    for (idx, (sphere, mult)) in s.spheres().iter().enumerate() {
        if !sphere.u.is_finite() || !sphere.v.is_finite() {
            return Err(shape(format!("spheres[{idx}]"), "not a finite number"));
        }
        spheres.push(QspecSphere {
            u: sphere.u,
            v: sphere.v,
            mult: *mult,
        });
    }
    let doc = QspecDoc {
        format: SPECTRUM_FORMAT.to_owned(),
        spheres,
    };
    Ok(serde_json::to_string(&doc).expect("finite numbers and string keys"))
}

/// Parses a `qspec-1` document.
pub fn read_spectrum(text: &str) -> Result<Spectrum, FormatError> {
    let doc: QspecDoc = serde_json::from_str(text)?;
    if doc.format != SPECTRUM_FORMAT {
        return Err(shape(
            "format",
            format!("expected \"{SPECTRUM_FORMAT}\", found \"{}\"", doc.format),
        ));
    }
    let mut pairs = Vec::with_capacity(doc.spheres.len());
    for (idx, s) in doc.spheres.iter().enumerate() {
        if !s.u.is_finite() || !s.v.is_finite() {
            return Err(shape(format!("spheres[{idx}]"), "not a finite number"));
        }
        if s.mult == 0 {
            return Err(shape(
                format!("spheres[{idx}].mult"),
                "multiplicity must be positive",
            ));
        }
        let sphere = EigenSphere::new(s.u, s.v).map_err(|_| {
            shape(
                format!("spheres[{idx}].v"),
                format!("imaginary magnitude {} is negative", s.v),
            )
        })?;
        pairs.push((sphere, s.mult));
    }
    Ok(Spectrum::new(pairs))
}

// ── qdrz-1 ──────────────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QdrzDoc {
    format: String,
    index: usize,
    inverse: QmatDoc,
    projection: QmatDoc,
    residuals: QdrzResiduals,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QdrzResiduals {
    commute: f64,
    absorption: f64,
    chain: f64,
    nilpotency: f64,
    tolerance: f64,
}

/// The parsed content of a `qdrz-1` document: the Drazin data, the residuals
/// of its defining equations, and the tolerance those residuals were checked
/// against when the document was written.
#[derive(Clone, Debug)]
pub struct DrazinRecord {
    pub result: DrazinResult,
    pub residuals: DrazinReport,
    pub tolerance: f64,
}

/// Serializes a Drazin result with its verification residuals as a `qdrz-1`
/// document.  `tolerance` is the bound the residuals were checked against;
/// embedding it makes the document self-describing.
pub fn write_drazin(
    result: &DrazinResult,
    residuals: &DrazinReport,
    tolerance: f64,
) -> Result<String, FormatError> {
    let values = [
        ("residuals.commute", residuals.commute),
        ("residuals.absorption", residuals.absorption),
        ("residuals.chain", residuals.chain),
        ("residuals.nilpotency", residuals.nilpotency),
        ("residuals.tolerance", tolerance),
    ];
    for (field, x) in values {
        if !x.is_finite() {
            return Err(shape(field, "not a finite number"));
        }
    }
    let doc = QdrzDoc {
        format: DRAZIN_FORMAT.to_owned(),
        index: result.index,
        inverse: matrix_to_doc(&result.inverse, "inverse")?,
        projection: matrix_to_doc(&result.projection, "projection")?,
        residuals: QdrzResiduals {
            commute: residuals.commute,
            absorption: residuals.absorption,
            chain: residuals.chain,
            nilpotency: residuals.nilpotency,
            tolerance,
        },
    };
    Ok(serde_json::to_string(&doc).expect("finite numbers and string keys"))
}

/// Parses a `qdrz-1` document.
pub fn read_drazin(text: &str) -> Result<DrazinRecord, FormatError> {
    let doc: QdrzDoc = serde_json::from_str(text)?;
    if doc.format != DRAZIN_FORMAT {
        return Err(shape(
            "format",
            format!("expected \"{DRAZIN_FORMAT}\", found \"{}\"", doc.format),
        ));
    }
    let inverse = matrix_from_doc(&doc.inverse, "inverse")?;
    let projection = matrix_from_doc(&doc.projection, "projection")?;
    if projection.nrows() != inverse.nrows() {
        return Err(shape(
            "projection.n",
            format!(
                "dimension {} does not match inverse dimension {}",
                projection.nrows(),
                inverse.nrows()
            ),
        ));
    }
    let values = [
        ("residuals.commute", doc.residuals.commute),
        ("residuals.absorption", doc.residuals.absorption),
        ("residuals.chain", doc.residuals.chain),
        ("residuals.nilpotency", doc.residuals.nilpotency),
        ("residuals.tolerance", doc.residuals.tolerance),
    ];
    for (field, x) in values {
        if !x.is_finite() {
            return Err(shape(field, "not a finite number"));
        }
    }
    Ok(DrazinRecord {
        result: DrazinResult {
            inverse,
            index: doc.index,
            projection,
        },
        residuals: DrazinReport {
            commute: doc.residuals.commute,
            absorption: doc.residuals.absorption,
            chain: doc.residuals.chain,
            nilpotency: doc.residuals.nilpotency,
        },
        tolerance: doc.residuals.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_bit_identical(a: &HMatrix, b: &HMatrix) {
        assert_eq!(a.nrows(), b.nrows());
        assert_eq!(a.ncols(), b.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let (p, q) = (a[(i, j)], b[(i, j)]);
                assert_eq!(p.a.to_bits(), q.a.to_bits());
                assert_eq!(p.b.to_bits(), q.b.to_bits());
                assert_eq!(p.c.to_bits(), q.c.to_bits());
                assert_eq!(p.d.to_bits(), q.d.to_bits());
            }
        }
    }

    fn finite() -> impl Strategy<Value = f64> {
        use proptest::num::f64::*;
        POSITIVE | NEGATIVE | NORMAL | SUBNORMAL | ZERO
    }

    fn matrix() -> impl Strategy<Value = HMatrix> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec(proptest::array::uniform4(finite()), n * n).prop_map(
                move |v| {
                    HMatrix::from_fn(n, n, |i, j| {
                        let e = v[i * n + j];
                        Quaternion::new(e[0], e[1], e[2], e[3])
                    })
                },
            )
        })
    }

    #[test]
    fn matrix_document_shape_is_exact() {
        let a = HMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Quaternion::new(1.0, 2.0, 3.0, 4.0)
            } else {
                Quaternion::ZERO
            }
        });
        let text = write_matrix(&a).unwrap();
        assert_eq!(
            text,
            "{\"format\":\"qmat-1\",\"n\":2,\"entries\":[[[1.0,2.0,3.0,4.0],\
             [0.0,0.0,0.0,0.0]],[[0.0,0.0,0.0,0.0],[1.0,2.0,3.0,4.0]]]}"
        );
    }

    #[test]
    fn spectrum_document_shape_is_exact() {
        let s = Spectrum::new(vec![(EigenSphere { u: 0.0, v: 1.0 }, 2)]);
        let text = write_spectrum(&s).unwrap();
        assert_eq!(
            text,
            "{\"format\":\"qspec-1\",\"spheres\":[{\"u\":0.0,\"v\":1.0,\"mult\":2}]}"
        );
    }

    #[test]
    fn matrix_reader_accepts_integer_valued_floats() {
        let a = read_matrix("{\"format\":\"qmat-1\",\"n\":1,\"entries\":[[[1,0,0,-2]]]}").unwrap();
        assert_eq!(a[(0, 0)], Quaternion::new(1.0, 0.0, 0.0, -2.0));
    }

    #[test]
    fn matrix_reader_rejects_bad_documents() {
        let wrong_tag = read_matrix("{\"format\":\"qmat-2\",\"n\":0,\"entries\":[]}");
        assert!(wrong_tag.unwrap_err().to_string().contains("format"));

        let missing_field = read_matrix("{\"format\":\"qmat-1\",\"entries\":[]}");
        assert!(missing_field.unwrap_err().to_string().contains("line"));

        let short_entry =
            read_matrix("{\"format\":\"qmat-1\",\"n\":1,\"entries\":[[[1.0,2.0,3.0]]]}");
        assert!(short_entry.unwrap_err().to_string().contains("line"));

        let row_count = read_matrix("{\"format\":\"qmat-1\",\"n\":2,\"entries\":[[[0,0,0,0],[0,0,0,0]]]}");
        let msg = row_count.unwrap_err().to_string();
        assert!(msg.contains("entries") && msg.contains("rows"), "{msg}");

        let column_count = read_matrix("{\"format\":\"qmat-1\",\"n\":2,\"entries\":[[[0,0,0,0],[0,0,0,0]],[[0,0,0,0]]]}");
        let msg = column_count.unwrap_err().to_string();
        assert!(msg.contains("entries[1]") && msg.contains("columns"), "{msg}");

        let unknown_field =
            read_matrix("{\"format\":\"qmat-1\",\"n\":0,\"entries\":[],\"extra\":1}");
        assert!(unknown_field.unwrap_err().to_string().contains("extra"));

        let not_json = read_matrix("{\"format\": \"qmat-1\",");
        assert!(not_json.unwrap_err().to_string().contains("line"));
    }

    #[test]
    fn writer_rejects_non_finite_and_non_square() {
        let mut a = HMatrix::identity(2);
        a[(0, 1)] = Quaternion::new(f64::NAN, 0.0, 0.0, 0.0);
        let msg = write_matrix(&a).unwrap_err().to_string();
        assert!(msg.contains("entries[0][1]") && msg.contains("finite"), "{msg}");

        let rect = HMatrix::from_fn(2, 3, |_, _| Quaternion::ONE);
        let msg = write_matrix(&rect).unwrap_err().to_string();
        assert!(msg.contains("square"), "{msg}");
    }

    #[test]
    fn spectrum_reader_rejects_bad_documents() {
        let neg_v =
            read_spectrum("{\"format\":\"qspec-1\",\"spheres\":[{\"u\":0,\"v\":-1,\"mult\":1}]}");
        let msg = neg_v.unwrap_err().to_string();
        assert!(msg.contains("spheres[0].v"), "{msg}");

        let zero_mult =
            read_spectrum("{\"format\":\"qspec-1\",\"spheres\":[{\"u\":0,\"v\":1,\"mult\":0}]}");
        let msg = zero_mult.unwrap_err().to_string();
        assert!(msg.contains("spheres[0].mult"), "{msg}");

        let wrong_tag = read_spectrum("{\"format\":\"qmat-1\",\"spheres\":[]}");
        assert!(wrong_tag.unwrap_err().to_string().contains("format"));
    }

    #[test]
    fn drazin_reader_rejects_mismatched_blocks() {
        let result = DrazinResult {
            inverse: HMatrix::identity(2),
            index: 0,
            projection: HMatrix::identity(2),
        };
        let report = DrazinReport {
            commute: 0.0,
            absorption: 0.0,
            chain: 0.0,
            nilpotency: 0.0,
        };
        let text = write_drazin(&result, &report, 1e-8).unwrap();

        let smaller = text.replacen(
            "\"projection\":{\"format\":\"qmat-1\",\"n\":2,\"entries\":[[[1.0,0.0,0.0,0.0],[0.0,0.0,0.0,0.0]],[[0.0,0.0,0.0,0.0],[1.0,0.0,0.0,0.0]]]}",
            "\"projection\":{\"format\":\"qmat-1\",\"n\":1,\"entries\":[[[1.0,0.0,0.0,0.0]]]}",
            1,
        );
        assert_ne!(smaller, text);
        let msg = read_drazin(&smaller).unwrap_err().to_string();
        assert!(msg.contains("projection"), "{msg}");

        let wrong_inner_tag = text.replacen(
            "\"inverse\":{\"format\":\"qmat-1\"",
            "\"inverse\":{\"format\":\"qspec-1\"",
            1,
        );
        let msg = read_drazin(&wrong_inner_tag).unwrap_err().to_string();
        assert!(msg.contains("inverse.format"), "{msg}");
    }

    #[test]
    fn drazin_document_from_a_computation_round_trips() {
        let a = HMatrix::from_fn(3, 3, |i, j| {
            if j == i + 1 {
                Quaternion::new(0.0, 1.0, 0.0, 0.0)
            } else {
                Quaternion::ZERO
            }
        });
        let result = crate::drazin::drazin_algebraic(&a).unwrap();
        let report = crate::drazin::verify_drazin(&a, &result.inverse, result.index).unwrap();
        let text = write_drazin(&result, &report, 1e-8).unwrap();
        let record = read_drazin(&text).unwrap();
        assert_eq!(record.result.index, result.index);
        assert_bit_identical(&record.result.inverse, &result.inverse);
        assert_bit_identical(&record.result.projection, &result.projection);
        assert_eq!(record.residuals.commute.to_bits(), report.commute.to_bits());
        assert_eq!(record.tolerance.to_bits(), 1e-8f64.to_bits());
    }

    proptest! {
        #[test]
        fn matrix_round_trip_is_bit_identical(a in matrix()) {
            let text = write_matrix(&a).unwrap();
            let back = read_matrix(&text).unwrap();
            assert_bit_identical(&a, &back);
            prop_assert_eq!(write_matrix(&back).unwrap(), text);
        }

        #[test]
        fn spectrum_round_trip_is_bit_identical(
            raw in proptest::collection::vec((finite(), finite(), 1usize..=usize::MAX), 0..6)
        ) {
            let pairs: Vec<(EigenSphere, usize)> = raw
                .iter()
                .map(|&(u, v, m)| (EigenSphere { u, v: v.abs() }, m))
                .collect();
            let s = Spectrum::new(pairs);
            let text = write_spectrum(&s).unwrap();
            let back = read_spectrum(&text).unwrap();
            prop_assert_eq!(back.len(), s.len());
            for ((sa, ma), (sb, mb)) in s.spheres().iter().zip(back.spheres()) {
                prop_assert_eq!(sa.u.to_bits(), sb.u.to_bits());
                prop_assert_eq!(sa.v.to_bits(), sb.v.to_bits());
                prop_assert_eq!(ma, mb);
            }
            prop_assert_eq!(write_spectrum(&back).unwrap(), text);
        }

        #[test]
        fn drazin_round_trip_is_bit_identical(
            inverse in matrix(),
            index in 0usize..9,
            residuals in proptest::array::uniform5(finite())
        ) {
            let result = DrazinResult {
                projection: HMatrix::identity(inverse.nrows()),
                inverse,
                index,
            };
            let report = DrazinReport {
                commute: residuals[0].abs(),
                absorption: residuals[1].abs(),
                chain: residuals[2].abs(),
                nilpotency: residuals[3].abs(),
            };
            let text = write_drazin(&result, &report, residuals[4].abs()).unwrap();
            let record = read_drazin(&text).unwrap();
            prop_assert_eq!(record.result.index, index);
            assert_bit_identical(&record.result.inverse, &result.inverse);
            assert_bit_identical(&record.result.projection, &result.projection);
            prop_assert_eq!(record.residuals.commute.to_bits(), report.commute.to_bits());
            prop_assert_eq!(record.residuals.absorption.to_bits(), report.absorption.to_bits());
            prop_assert_eq!(record.residuals.chain.to_bits(), report.chain.to_bits());
            prop_assert_eq!(record.residuals.nilpotency.to_bits(), report.nilpotency.to_bits());
            prop_assert_eq!(record.tolerance.to_bits(), residuals[4].abs().to_bits());
            prop_assert_eq!(write_drazin(&record.result, &record.residuals, record.tolerance).unwrap(), text);
        }
    }
}
