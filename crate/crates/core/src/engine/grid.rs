use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_pairwise, Cell, ExperimentGrid};
use crate::error::Result;
use crate::metrics::{aggregate_batch, BatchSummary, RunResult};
use crate::mobility::generate_profile;

/// Both policies on one profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub profile: usize,
    pub max_stability: RunResult,
    pub mst_dg: RunResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: Cell,
    /// Ordered by profile index.
    pub runs: Vec<PairRecord>,
    pub max_stability: BatchSummary,
    pub mst_dg: BatchSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub grid: ExperimentGrid,
    /// In [`ExperimentGrid::cells`] order.
    pub cells: Vec<CellReport>,
}

impl GridReport {
    pub fn cell(&self, cell: &Cell) -> Option<&CellReport> {
        self.cells.iter().find(|c| &c.cell == cell)
    }
}

/// Runs every cell of the grid.
///
/// Each `(v_max, static_count, profile index)` profile is generated once
/// and replayed for every transmission range. Work items run in parallel;
/// seeds come from cell values, so results do not depend on scheduling or
/// on the order of the grid axes.
pub fn run_grid(grid: &ExperimentGrid) -> Result<GridReport> {
    grid.validate()?;
    let cells = grid.cells();
    let mut jobs = Vec::new();
    for &v_max in &grid.v_max {
        for &static_count in &grid.static_counts {
            for profile in 0..grid.profiles_per_cell {
                jobs.push((v_max, static_count, profile));
            }
        }
    }
    jobs.dedup();

    let finished: Vec<Vec<(Cell, PairRecord)>> = jobs
        .par_iter()
        .map(|&(v_max, static_count, index)| {
            let first = Cell {
                tx_range: grid.tx_ranges[0],
                v_max,
                static_count,
            };
            let mobility = grid.mobility_for(&first, index);
            let profile = generate_profile(grid.base.field, mobility)?;
            grid.tx_ranges
                .iter()
                .map(|&tx_range| {
                    let cell = Cell { tx_range, ..first };
                    let cfg = grid.config_for(&cell, grid.base.policy, index);
                    let (max_stability, mst_dg) = run_pairwise(&cfg, &profile)?;
                    Ok((
                        cell,
                        PairRecord {
                            profile: index,
                            max_stability,
                            mst_dg,
                        },
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut by_cell: Vec<Vec<PairRecord>> = vec![Vec::new(); cells.len()];
    for (cell, record) in finished.into_iter().flatten() {
        // Duplicate axis values map onto the first matching cell.
        let slot = cells.iter().position(|c| c == &cell).expect("cell from grid axes");
        if !by_cell[slot].iter().any(|r| r.profile == record.profile) {
            by_cell[slot].push(record);
        }
    }

    let reports = cells
        .into_iter()
        .zip(by_cell)
        .map(|(cell, mut runs)| {
            runs.sort_by_key(|r| r.profile);
            let max: Vec<RunResult> = runs.iter().map(|r| r.max_stability.clone()).collect();
            let mst: Vec<RunResult> = runs.iter().map(|r| r.mst_dg.clone()).collect();
            Ok(CellReport {
                cell,
                max_stability: aggregate_batch(&max)?,
                mst_dg: aggregate_batch(&mst)?,
                runs,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GridReport {
        grid: grid.clone(),
        cells: reports,
    })
}
