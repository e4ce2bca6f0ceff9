use std::path::PathBuf;

use clap::Subcommand;
use hypermirror::group::{
    count_m16_subgroups, generate_b4, identify, identify_table, subgroups_up_to_conjugacy, CayleyTable, Fingerprint,
};
use serde::Serialize;

use crate::cache::{CacheKind, ClassRecord};
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::{row, Context};

#[derive(Clone, Debug, Subcommand)]
pub enum GroupsAction {
    /// Conjugacy classes of subgroups of B4 of the given order.
    Enumerate {
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Label a group given by generator matrices (a JSON array of square
    /// integer matrices).
    Identify {
        #[arg(long)]
        generators: PathBuf,
    },
    /// Census of subgroups isomorphic to the modular group of order 16.
    M16,
}

pub fn load_classes(ctx: &Context, order: usize) -> Result<Vec<ClassRecord>> {
    let (records, status) = ctx.cache.load_or_build(
        CacheKind::SubgroupClasses,
        &format!("b4-order{order}"),
        |rs: &Vec<ClassRecord>| rs.iter().all(|r| r.subgroup().is_some_and(|h| h.order() == order)),
        || {
            let classes = subgroups_up_to_conjugacy(&generate_b4(), order)?;
            Ok(classes
                .iter()
                .map(|c| ClassRecord {
                    generators: c.representative.generators().iter().map(|w| w.rows()).collect(),
                    class_size: c.class_size,
                    normalizer_order: c.normalizer_order,
                })
                .collect())
        },
    )?;
    log::info!("subgroup classes of order {order}: cache {status:?}");
    Ok(records)
}

#[derive(Serialize)]
struct ClassRow {
    index: usize,
    gap_index: Option<usize>,
    class_size: usize,
    normalizer_order: usize,
    generators: Vec<[[i64; 4]; 4]>,
}

#[derive(Serialize)]
struct Enumeration {
    order: usize,
    classes: usize,
    subgroups: usize,
    rows: Vec<ClassRow>,
}

#[derive(Serialize)]
struct Identification {
    order: usize,
    gap_index: usize,
    fingerprint: Fingerprint,
}

#[derive(Serialize)]
struct M16Census {
    subgroups: usize,
    all_conjugate: bool,
}

pub fn groups(ctx: &Context, action: GroupsAction) -> Result<Report> {
    match action {
        GroupsAction::Enumerate { order } => {
            if order == 0 || 384 % order != 0 {
                return Err(CliError::Usage(format!("order {order} does not divide 384")));
            }
            let records = load_classes(ctx, order)?;
            let mut rows = Vec::new();
            for (i, r) in records.iter().enumerate() {
                let h = r.subgroup().expect("validated on load");
                let gap_index = match identify(&h) {
                    Ok(l) => Some(l.gap_id),
                    Err(hypermirror::Error::UnsupportedOrder(_)) => None,
                    Err(e) => return Err(e.into()),
                };
                rows.push(ClassRow {
                    index: i + 1,
                    gap_index,
                    class_size: r.class_size,
                    normalizer_order: r.normalizer_order,
                    generators: r.generators.clone(),
                });
            }
            let table = rows
                .iter()
                .map(|r| {
                    let label = r.gap_index.map_or("-".to_string(), |g| format!("({order},{g})"));
                    row![r.index, label, r.class_size, r.normalizer_order]
                })
                .collect();
            let data = Enumeration { order, classes: rows.len(), subgroups: rows.iter().map(|r| r.class_size).sum(), rows };
            Ok(Report::new(format!("{} classes of subgroups of order {order}", data.classes), &data)?
                .table(&["class", "label", "class_size", "normalizer_order"], table))
        }
        GroupsAction::Identify { generators } => {
            let text = std::fs::read_to_string(&generators)?;
            let gens: Vec<Vec<Vec<i64>>> = serde_json::from_str(&text)?;
            let table = CayleyTable::from_matrix_generators(&gens)?;
            let l = identify_table(&table)?;
            let data = Identification { order: l.order, gap_index: l.gap_id, fingerprint: l.fingerprint };
            Ok(Report::new(format!("group ({},{})", data.order, data.gap_index), &data)?
                .table(&["order", "gap_index"], vec![row![data.order, data.gap_index]]))
        }
        GroupsAction::M16 => {
            let (subgroups, all_conjugate) = count_m16_subgroups(&generate_b4())?;
            let data = M16Census { subgroups, all_conjugate };
            Ok(Report::new("modular subgroups of order 16", &data)?
                .table(&["subgroups", "all_conjugate"], vec![row![subgroups, all_conjugate]]))
        }
    }
}
