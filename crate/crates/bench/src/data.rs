//! CSV ingestion.

use std::path::Path;

use probit_bf::Data;

use crate::error::{BenchError, Result};

/// Covariates of the larger benchmark model.
pub const PIMA_COVARIATES: [&str; 3] = ["glu", "bp", "ped"];

/// Response column; `Yes`, `yes` or `1` code a case.
pub const RESPONSE_COLUMN: &str = "type";

/// Load the Pima test set: `glu`, `bp`, `ped` and `type`, in any column
/// order, extra columns ignored.
pub fn load_pima_csv(path: impl AsRef<Path>) -> Result<Data> {
    load_csv(path, &PIMA_COVARIATES)
}

/// Load the named covariates and the `type` response from a headed CSV.
pub fn load_csv(path: impl AsRef<Path>, covariates: &[&str]) -> Result<Data> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| BenchError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, covariates)
}

pub fn read_csv<R: std::io::Read>(input: R, covariates: &[&str]) -> Result<Data> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::MissingColumn(name.to_string()))
    };
    let response = find(RESPONSE_COLUMN)?;
    let indices = covariates
        .iter()
        .map(|c| find(c))
        .collect::<Result<Vec<_>>>()?;

    let mut y = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); covariates.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let cell = |k: usize| record.get(k).unwrap_or("");
        y.push(match cell(response) {
            "Yes" | "yes" | "1" => 1,
            "No" | "no" | "0" => 0,
            other => {
                return Err(BenchError::BadResponse {
                    row,
                    value: other.to_string(),
                })
            }
        });
        for ((col, &k), name) in columns.iter_mut().zip(&indices).zip(covariates) {
            let raw = cell(k);
            let v: f64 = raw
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| BenchError::BadCell {
                    row,
                    column: name.to_string(),
                    value: raw.to_string(),
                })?;
            col.push(v);
        }
    }
    let named = covariates
        .iter()
        .map(|c| c.to_string())
        .zip(columns)
        .collect();
    Data::new(y, named).map_err(BenchError::Data)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "\"\",\"npreg\",\"glu\",\"bp\",\"skin\",\"bmi\",\"ped\",\"age\",\"type\"\n\
                        \"1\",6,148,72,35,33.6,0.627,50,\"Yes\"\n\
                        \"2\",1,85,66,29,26.6,0.351,31,\"No\"\n\
                        \"3\",1,89,66,23,28.1,0.167,21,\"No\"\n";

    #[test]
    fn three_row_file() {
        let d = read_csv(TINY.as_bytes(), &PIMA_COVARIATES).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.y(), &[true, false, false]);
        assert_eq!(d.column("glu").unwrap(), &[148.0, 85.0, 89.0]);
        assert_eq!(d.column("bp").unwrap(), &[72.0, 66.0, 66.0]);
        assert_eq!(d.column("ped").unwrap(), &[0.627, 0.351, 0.167]);
    }

    #[test]
    fn column_order_is_free() {
        let text = "type,ped,glu,bp\n1,0.5,100,70\n0,0.2,90,60\n";
        let d = read_csv(text.as_bytes(), &PIMA_COVARIATES).unwrap();
        assert_eq!(d.y(), &[true, false]);
        assert_eq!(d.column("ped").unwrap(), &[0.5, 0.2]);
    }

    #[test]
    fn errors_name_their_location() {
        let missing = "glu,bp,type\n1,2,Yes\n";
        assert!(
            matches!(read_csv(missing.as_bytes(), &PIMA_COVARIATES), Err(BenchError::MissingColumn(c)) if c == "ped")
        );
        let maybe = "glu,bp,ped,type\n1,2,0.1,Yes\n1,2,0.1,Maybe\n";
        assert!(matches!(
            read_csv(maybe.as_bytes(), &PIMA_COVARIATES),
            Err(BenchError::BadResponse { row: 2, .. })
        ));
        let bad = "glu,bp,ped,type\n1,x,0.1,Yes\n";
        match read_csv(bad.as_bytes(), &PIMA_COVARIATES) {
            Err(BenchError::BadCell { row, column, value }) => {
                assert_eq!((row, column.as_str(), value.as_str()), (1, "bp", "x"));
            }
            other => panic!("{other:?}"),
        }
        let nan = "glu,bp,ped,type\n1,NaN,0.1,Yes\n";
        assert!(matches!(
            read_csv(nan.as_bytes(), &PIMA_COVARIATES),
            Err(BenchError::BadCell { .. })
        ));
    }
}
