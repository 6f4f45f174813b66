//! Elimination of quantified variables from a free-connex query.

use crate::engine::bound::{BoundQuery, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EliminationStep {
    /// `var` is quantified and occurs only in `table`; it is projected away.
    ProjectOut { table: usize, var: VarId },
    /// The variables of `table` are contained in those of `into`; `into` is
    /// semijoined with `table` and `table` is removed.
    Absorb { table: usize, into: usize },
}

fn next_step(bq: &BoundQuery) -> Option<EliminationStep> {
    for var in bq.quantified() {
        let mut holders = bq.tables.iter().enumerate().filter(|(_, t)| t.vars.contains(&var));
        if let (Some((table, _)), None) = (holders.next(), holders.next()) {
            return Some(EliminationStep::ProjectOut { table, var });
        }
    }
    for (table, a) in bq.tables.iter().enumerate() {
        for (into, b) in bq.tables.iter().enumerate() {
            if table != into && a.vars.iter().all(|v| b.vars.contains(v)) {
                return Some(EliminationStep::Absorb { table, into });
            }
        }
    }
    None
}

/// Rewrites `bq` into an equivalent query over its free variables only,
/// applying steps until none is left so that no table's variables are
/// contained in another's. Fails with [`Error::StuckNotFreeConnex`] if no step applies while
/// quantified variables remain.
pub fn eliminate_quantified(bq: BoundQuery) -> Result<BoundQuery> {
    eliminate_quantified_with(bq, |_, _| {})
}

/// Like [`eliminate_quantified`], calling `observe` after every step.
pub fn eliminate_quantified_with(
    mut bq: BoundQuery,
    mut observe: impl FnMut(&EliminationStep, &BoundQuery),
) -> Result<BoundQuery> {
    while let Some(step) = next_step(&bq) {
        match step {
            EliminationStep::ProjectOut { table, var } => {
                bq.tables[table] = bq.tables[table].project_out(var);
            }
            EliminationStep::Absorb { table, into } => {
                bq.tables[into] = bq.tables[into].semijoin(&bq.tables[table]);
                bq.tables.remove(table);
            }
        }
        observe(&step, &bq);
    }
    let stuck = bq.quantified();
    if !stuck.is_empty() {
        return Err(Error::StuckNotFreeConnex(bq.var_names(&stuck)));
    }
    Ok(bq)
}
