use std::collections::BTreeMap;

use clap::Subcommand;
use hypermirror::fan::{
    classify_involution_intersections, fan_invariant_under, find_symmetric_heights, flag_subdivision,
    regularity_certificate, stabilizer_orbits, Cone, Fan,
};
use hypermirror::group::{generate_b4, named, SignedPerm, Subgroup};
use serde::Serialize;

use crate::cache::{cone_payload, fan_from_payload, CacheKind, Matrix};
use crate::error::{CliError, Result};
use crate::names::parse_lattice_element;
use crate::report::Report;
use crate::{row, Context};

#[derive(Clone, Debug, Subcommand)]
pub enum FanAction {
    /// Build (or load) the flag subdivision of the hypercube's face fan.
    BuildFlag,
    /// Smoothness, ray count, invariance and projectivity checks.
    Check {
        /// `b4`, `m16`, or an element name.
        #[arg(long, default_value = "b4")]
        invariance: String,
    },
    /// Intersections `sigma ∩ w(sigma)` over maximal cones for an involution.
    Intersections {
        #[arg(long, default_value = "h1")]
        element: String,
    },
}

pub fn load_flag_fan(ctx: &Context) -> Result<Fan> {
    let (cones, status) = ctx.cache.load_or_build(
        CacheKind::Fan,
        "flag",
        |c: &Vec<Matrix>| fan_from_payload(c).is_some(),
        || Ok(cone_payload(&flag_subdivision())),
    )?;
    log::info!("flag fan: cache {status:?}");
    fan_from_payload(&cones).ok_or_else(|| CliError::Core(hypermirror::Error::Invariant("cached fan is invalid".into())))
}

#[derive(Serialize)]
struct BuildReport {
    cones: usize,
    rays: usize,
    walls: usize,
    smooth: bool,
    closed_pseudomanifold: bool,
}

#[derive(Serialize)]
struct CheckReport {
    cones: usize,
    rays: usize,
    smooth: bool,
    group: String,
    group_order: usize,
    invariant: bool,
    regular: bool,
    /// Heights of the projectivity certificate by number of nonzero ray
    /// coordinates.
    heights_by_support: BTreeMap<usize, String>,
}

#[derive(Serialize)]
struct IntersectionsReport {
    element: String,
    counts_by_dim: BTreeMap<usize, usize>,
    ray_intersections: usize,
    plane_intersections: usize,
    plane_orbits: usize,
    orbit_sizes: Vec<usize>,
    planes: Vec<Cone>,
}

fn group_by_name(name: &str) -> Result<Subgroup<SignedPerm>> {
    match name.to_ascii_lowercase().as_str() {
        "b4" => Ok(generate_b4()),
        "m16" => Ok(named::m16()),
        other => Ok(Subgroup::generate(&[parse_lattice_element(other)?])),
    }
}

pub fn fan(ctx: &Context, action: FanAction) -> Result<Report> {
    let f = load_flag_fan(ctx)?;
    match action {
        FanAction::BuildFlag => {
            let data = BuildReport {
                cones: f.cones().len(),
                rays: f.rays().len(),
                walls: f.walls()?.0.len(),
                smooth: f.is_smooth(),
                closed_pseudomanifold: f.is_closed_pseudomanifold()?,
            };
            let rows = vec![
                row!["cones", data.cones],
                row!["rays", data.rays],
                row!["walls", data.walls],
                row!["smooth", data.smooth],
                row!["closed_pseudomanifold", data.closed_pseudomanifold],
            ];
            Ok(Report::new("flag subdivision", &data)?.table(&["property", "value"], rows))
        }
        FanAction::Check { invariance } => {
            let group = group_by_name(&invariance)?;
            let invariant = group.elements().iter().all(|w| fan_invariant_under(&f, w));
            let heights = find_symmetric_heights(&f, generate_b4().elements(), 12)?;
            let regular = match &heights {
                Some(h) => regularity_certificate(&f, h)?,
                None => false,
            };
            let heights_by_support = heights
                .iter()
                .flatten()
                .map(|(r, h)| (r.iter().filter(|&&x| x != 0).count(), h.to_string()))
                .collect();
            let data = CheckReport {
                cones: f.cones().len(),
                rays: f.rays().len(),
                smooth: f.is_smooth(),
                group: invariance,
                group_order: group.order(),
                invariant,
                regular,
                heights_by_support,
            };
            let rows = vec![
                row!["cones", data.cones],
                row!["rays", data.rays],
                row!["smooth", data.smooth],
                row!["group_order", data.group_order],
                row!["invariant", data.invariant],
                row!["regular", data.regular],
            ];
            Ok(Report::new(format!("flag subdivision checks ({})", data.group), &data)?.table(&["property", "value"], rows))
        }
        FanAction::Intersections { element } => {
            let w = parse_lattice_element(&element)?;
            let r = classify_involution_intersections(&f, &w)?;
            let planes: Vec<Cone> = r.distinct_of_dim(2).into_iter().cloned().collect();
            let (_, orbits) = stabilizer_orbits(&planes, named::m16().elements(), |w, c| c.image(w))?;
            let rows = planes.iter().map(|c| row![c.dim(), format!("{:?}", c.generators())]).collect();
            let data = IntersectionsReport {
                element,
                ray_intersections: r.distinct_of_dim(1).len(),
                plane_intersections: planes.len(),
                plane_orbits: if planes.is_empty() { 0 } else { orbits.len() },
                orbit_sizes: orbits.iter().map(Vec::len).collect(),
                counts_by_dim: r.counts_by_dim,
                planes,
            };
            Ok(Report::new(format!("intersections for {}", data.element), &data)?.table(&["dim", "generators"], rows))
        }
    }
}
