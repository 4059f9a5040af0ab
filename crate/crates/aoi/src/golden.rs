//! Published ratio tables and their regeneration.

use aoi_core::analytic::{ratio_table_basic, ratio_table_hybrid};
use serde::Deserialize;

use crate::error::{AppError, Result};

pub const GOLDEN_TOML: &str = include_str!("../data/golden_tables.toml");

/// Allowed gap between a computed ratio and a published cell, on the
/// fraction scale (0.05 percentage points).
pub const CELL_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Clone, Deserialize)]
pub struct BasicTable {
    pub n: Vec<usize>,
    pub percent: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HybridTable {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub percent: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenTables {
    pub version: u32,
    pub basic: BasicTable,
    pub hybrid: HybridTable,
}

impl GoldenTables {
    pub fn parse(text: &str) -> Result<Self> {
        let t: GoldenTables = toml::from_str(text)?;
        let bad_shape = t.basic.n.len() != t.basic.percent.len()
            || t.hybrid.percent.len() != t.hybrid.n.len()
            || t.hybrid
                .percent
                .iter()
                .any(|row| row.len() != t.hybrid.m.len());
        if bad_shape {
            return Err(AppError::CheckFailed(
                "reference table shapes do not match".into(),
            ));
        }
        Ok(t)
    }

    pub fn embedded() -> Result<Self> {
        Self::parse(GOLDEN_TOML)
    }
}

/// One regenerated cell next to its published value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    pub table: &'static str,
    pub n: usize,
    /// Type-2 device count; `None` in the basic table.
    pub m: Option<usize>,
    pub percent: f64,
    pub published_percent: f64,
}

impl TableCell {
    /// Absolute gap on the fraction scale.
    pub fn deviation(&self) -> f64 {
        (self.percent - self.published_percent).abs() / 100.0
    }

    pub fn passes(&self) -> bool {
        self.deviation() <= CELL_TOLERANCE
    }
}

/// Recomputes every published cell.
pub fn reproduce(golden: &GoldenTables) -> Result<Vec<TableCell>> {
    let mut cells = Vec::new();
    let basic = ratio_table_basic(&golden.basic.n)?;
    for (row, published) in basic.iter().zip(&golden.basic.percent) {
        cells.push(TableCell {
            table: "basic",
            n: row.n,
            m: None,
            percent: row.ratio * 100.0,
            published_percent: *published,
        });
    }
    let hybrid = ratio_table_hybrid(&golden.hybrid.n, &golden.hybrid.m)?;
    let published = golden.hybrid.percent.iter().flatten();
    for (row, published) in hybrid.iter().zip(published) {
        cells.push(TableCell {
            table: "hybrid",
            n: row.n,
            m: Some(row.m),
            percent: row.ratio * 100.0,
            published_percent: *published,
        });
    }
    Ok(cells)
}

/// Fails with a list of offending cells.
pub fn check(cells: &[TableCell]) -> Result<()> {
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.passes())
        .map(|c| {
            let m = c.m.map_or(String::new(), |m| format!(" M={m}"));
            format!(
                "  {} N={}{m}: computed {:.4}%, published {:.2}%",
                c.table, c.n, c.percent, c.published_percent
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(AppError::CheckFailed(bad.join("\n")))
    }
}
