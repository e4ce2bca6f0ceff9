use clap::Subcommand;
use hypermirror::fan::flag_subdivision;
use hypermirror::group::{named, IsoLabel, SignedPerm, Subgroup};
use hypermirror::invariants::{
    flag_context, free_quotient_hodge, invariant_h21_poly, invariant_report, mirror_targets, HodgePair,
};
use hypermirror::orbifold::{mirror_orbifold_report, quotient_fundamental_group, MirrorOrbifoldReport};
use hypermirror::sections::{freeness_certificate, generic_invariant_section, MonomialAutomorphism};
use serde::Serialize;

use crate::error::Result;
use crate::names::{parse_group, word_names};
use crate::report::Report;
use crate::row;

#[derive(Clone, Debug, Subcommand)]
pub enum HodgeAction {
    /// Hodge pairs of free quotients of the generic invariant section.
    Quotient {
        /// Group name (`g`, `g2`, `g4`, `l1`, ...); all three cyclic groups
        /// when omitted.
        #[arg(long)]
        group: Option<String>,
    },
    /// Orbifold Hodge pair of the quotient by the untwisted lift group.
    Orbifold,
    /// Match computed pairs against the known mirror partners.
    MirrorCheck,
}

#[derive(Clone, Debug, Serialize)]
struct QuotientRow {
    group: String,
    order: usize,
    h11: i64,
    h12: i64,
    euler: i64,
    h12_from_invariant_sections: i64,
    routes_agree: bool,
    fundamental_group: IsoLabel,
}

fn lattice_image(k: &Subgroup<MonomialAutomorphism>) -> Subgroup<SignedPerm> {
    Subgroup::generate(&k.generators().iter().map(|x| *x.lattice_part()).collect::<Vec<_>>())
}

fn free_quotient(name: &str) -> Result<QuotientRow> {
    let k = parse_group(name)?;
    let verdicts = freeness_certificate(&generic_invariant_section(), &k, &flag_subdivision())?;
    let names = word_names(&k);
    if let Some(v) = verdicts.iter().find(|v| !v.free) {
        let who = names.get(&v.element).cloned().unwrap_or_else(|| format!("{:?}", v.element));
        return Err(hypermirror::Error::NotFree(format!("{who} has fixed points on the generic invariant section")).into());
    }
    let (seq, kernel) = flag_context()?;
    let report = invariant_report(&lattice_image(&k), &seq, &kernel)?;
    let hp = free_quotient_hodge(&k, &verdicts, &report)?;
    let by_sections = invariant_h21_poly(&k)?;
    if by_sections != hp.h12 {
        return Err(hypermirror::Error::Invariant(format!(
            "h12 is {} from the Euler characteristic but {by_sections} from invariant sections",
            hp.h12
        ))
        .into());
    }
    let pi1 = quotient_fundamental_group(&k, &[])?;
    Ok(QuotientRow {
        group: name.to_string(),
        order: k.order(),
        h11: hp.h11,
        h12: hp.h12,
        euler: hp.euler(),
        h12_from_invariant_sections: by_sections,
        routes_agree: true,
        fundamental_group: pi1.label,
    })
}

#[derive(Serialize)]
struct OrbifoldOutput {
    fixed_point_elements: Vec<String>,
    report: MirrorOrbifoldReport,
}

#[derive(Serialize)]
struct MirrorRow {
    target: String,
    target_pair: HodgePair,
    source: String,
    computed_pair: HodgePair,
    transposed_match: bool,
}

pub fn hodge(action: HodgeAction) -> Result<Report> {
    match action {
        HodgeAction::Quotient { group } => {
            let names: Vec<String> = match group {
                Some(g) => vec![g],
                None => ["g", "g2", "g4"].map(String::from).to_vec(),
            };
            let rows = names.iter().map(|n| free_quotient(n)).collect::<Result<Vec<_>>>()?;
            let table = rows
                .iter()
                .map(|r| row![r.group, r.order, r.h11, r.h12, r.euler, r.h12_from_invariant_sections, r.fundamental_group])
                .collect();
            Ok(Report::new("free quotients", &rows)?
                .table(&["group", "order", "h11", "h12", "euler", "h12_sections", "pi1"], table))
        }
        HodgeAction::Orbifold => {
            let report = mirror_orbifold_report()?;
            let names = word_names(&hypermirror::sections::lifts::l1());
            let fixed = report.fixed_point_elements.iter().map(|x| names[x].clone()).collect();
            let h = &report.hodge;
            let table = vec![
                row!["invariant", h.invariant.h11, h.invariant.h12],
                row!["twisted", h.twisted_components, h.twisted_genus_sum],
                row!["total", h.h11, h.h12],
            ];
            let title = format!(
                "orbifold Hodge numbers: h11 = {}+{}, h12 = {}+{}",
                h.invariant.h11, h.twisted_components, h.invariant.h12, h.twisted_genus_sum
            );
            Ok(Report::new(title, OrbifoldOutput { fixed_point_elements: fixed, report })?
                .table(&["part", "h11", "h12"], table))
        }
        HodgeAction::MirrorCheck => {
            let mut computed: Vec<(String, HodgePair)> = Vec::new();
            for g in ["g", "g2", "g4"] {
                let r = free_quotient(g)?;
                computed.push((format!("free quotient by <{g}>"), HodgePair { h11: r.h11, h12: r.h12 }));
            }
            let (seq, kernel) = flag_context()?;
            let lifts = hypermirror::sections::lifts::l1();
            let pic_y = invariant_report(&named::m16(), &seq, &kernel)?.dims.pic_y;
            let invariant = HodgePair::new(pic_y, invariant_h21_poly(&lifts)?)?;
            computed.push(("invariant part for the order-16 lift group".into(), invariant));
            computed.push(("orbifold quotient by the order-16 lift group".into(), mirror_orbifold_report()?.hodge.pair()));
            let rows: Vec<MirrorRow> = mirror_targets()
                .into_iter()
                .zip(computed)
                .map(|(t, (source, pair))| MirrorRow {
                    target: t.name.to_string(),
                    target_pair: t.hodge,
                    source,
                    computed_pair: pair,
                    transposed_match: pair.mirror() == t.hodge,
                })
                .collect();
            let table = rows
                .iter()
                .map(|r| {
                    row![
                        r.target,
                        format!("({},{})", r.target_pair.h11, r.target_pair.h12),
                        format!("({},{})", r.computed_pair.h11, r.computed_pair.h12),
                        r.transposed_match
                    ]
                })
                .collect();
            let failed: Vec<String> = rows.iter().filter(|r| !r.transposed_match).map(|r| r.target.clone()).collect();
            let mut report = Report::new("mirror matching", &rows)?.table(&["target", "target_pair", "computed_pair", "matched"], table);
            if !failed.is_empty() {
                report.mismatch = Some(format!("unmatched targets: {}", failed.join(", ")));
            }
            Ok(report)
        }
    }
}

