//! CSV and JSON artifact writers.
//!
//! Every CSV starts with a header row. JSON documents are pretty-printed with
//! sorted keys where maps are involved, so identical inputs give identical bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::Serialize;

use crate::error::Result;
use crate::maxwellian::{assemble_matrix, build_column};
use crate::model::{CoefficientFns, GridSpec};

/// Row of `snapshot.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotRow {
    pub v: f64,
    pub w: f64,
    pub p: f64,
}

/// Row of a matrix dump: one nonzero of the voltage system of weight column `column`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixEntry {
    pub column: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Flattens a density into `(v, w, p)` rows, weight index fastest.
pub fn snapshot_rows(grid: &GridSpec, p: &Array2<f64>) -> Vec<SnapshotRow> {
    p.indexed_iter()
        .map(|((i, j), &x)| SnapshotRow {
            v: grid.v(i),
            w: grid.w(j),
            p: x,
        })
        .collect()
}

/// Nonzeros of `εI + (aΔt/Δv²) M_j` for every weight column, built from `n_bar`.
pub fn matrix_entries(grid: &GridSpec, coeffs: &CoefficientFns, n_bar: f64, guard: f64) -> Result<Vec<MatrixEntry>> {
    let lambda = grid.implicit_scale(coeffs.a);
    let mut out = Vec::new();
    for j in 0..=grid.n_w {
        let column = build_column(grid, coeffs, j, n_bar, guard)?;
        let matrix = assemble_matrix(&column, coeffs.epsilon, lambda);
        out.extend(matrix.triplets().into_iter().map(|(row, col, value)| MatrixEntry {
            column: j,
            row,
            col,
            value,
        }));
    }
    Ok(out)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Output directory that records the names of the files written into it.
#[derive(Debug)]
pub struct ArtifactDir {
    root: PathBuf,
    written: Vec<String>,
}

impl ArtifactDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<PathBuf> {
        let path = self.root.join(name);
        write_csv(&path, rows)?;
        self.written.push(name.to_owned());
        Ok(path)
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.root.join(name);
        write_json(&path, value)?;
        self.written.push(name.to_owned());
        Ok(path)
    }

    /// Names written so far, in order.
    pub fn files(&self) -> &[String] {
        &self.written
    }
}
