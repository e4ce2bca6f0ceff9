use hypermirror::invariants::{compare_rows, flag_context, invariant_report, TableComparison, TableRow};
use serde::Serialize;

use crate::cache::{CacheKind, TableRecord};
use crate::commands::groups::load_classes;
use crate::error::Result;
use crate::report::Report;
use crate::{row, Context};

fn load_table(ctx: &Context) -> Result<Vec<TableRecord>> {
    let classes = load_classes(ctx, 16)?;
    let (records, status) = ctx.cache.load_or_build(
        CacheKind::Table,
        "b4-order16",
        |rs: &Vec<TableRecord>| {
            rs.len() == classes.len()
                && rs.iter().zip(&classes).all(|(r, c)| r.generators == c.generators && r.pic == r.q80 - r.q4)
        },
        || {
            let (seq, kernel) = flag_context()?;
            classes
                .iter()
                .map(|c| {
                    let h = c.subgroup().expect("validated on load");
                    let r = invariant_report(&h, &seq, &kernel)?;
                    Ok(TableRecord {
                        generators: c.generators.clone(),
                        gap_index: r.gap_id(),
                        q4: r.dims.q4,
                        q80: r.dims.q80,
                        pic: r.dims.pic,
                        ker: r.dims.ker,
                        pic_y: r.dims.pic_y,
                    })
                })
                .collect()
        },
    )?;
    log::info!("invariant table: cache {status:?}");
    Ok(records)
}

#[derive(Serialize)]
struct Row {
    row: usize,
    #[serde(flatten)]
    record: TableRecord,
}

#[derive(Serialize)]
struct TableReport {
    rows: Vec<Row>,
    matches_expected: bool,
    comparison: TableComparison,
}

fn describe(rows: &[TableRow]) -> String {
    rows.iter()
        .map(|(g, d)| format!("{}:{d:?}", g.map_or("-".to_string(), |g| g.to_string())))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn table(ctx: &Context) -> Result<Report> {
    let records = load_table(ctx)?;
    let comparison = compare_rows(records.iter().map(|r| (r.gap_index, [r.q4, r.q80, r.pic, r.ker, r.pic_y])));
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| row![r.gap_index.map_or("-".to_string(), |g| g.to_string()), r.q4, r.q80, r.pic, r.ker, r.pic_y])
        .collect();
    let data = TableReport {
        matches_expected: comparison.matches(),
        comparison,
        rows: records.into_iter().enumerate().map(|(i, record)| Row { row: i + 1, record }).collect(),
    };
    let mut report = Report::new(format!("invariants of the {} order-16 subgroup classes", data.rows.len()), &data)?
        .table(&["gap_index", "q4", "q80", "pic", "ker", "picY"], rows);
    if !data.comparison.matches() {
        report.mismatch = Some(format!(
            "missing [{}], unexpected [{}]",
            describe(&data.comparison.missing),
            describe(&data.comparison.unexpected)
        ));
    }
    Ok(report)
}
