use clap::ValueEnum;
use hypermirror::polytope::LatticePolytope;
use serde::Serialize;

use crate::error::Result;
use crate::report::Report;
use crate::row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolytopeName {
    Hypercube,
    Cross,
}

impl PolytopeName {
    fn build(self) -> LatticePolytope {
        match self {
            Self::Hypercube => LatticePolytope::hypercube(4),
            Self::Cross => LatticePolytope::cross_polytope(4),
        }
    }

    fn other(self) -> Self {
        match self {
            Self::Hypercube => Self::Cross,
            Self::Cross => Self::Hypercube,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Hypercube => "hypercube",
            Self::Cross => "cross",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolytopeAction {
    Info,
    Census,
    Faces,
}

#[derive(Serialize)]
struct Info {
    polytope: &'static str,
    dim: usize,
    vertices: usize,
    facets: usize,
    lattice_points: usize,
    interior_points: usize,
    f_vector: Vec<usize>,
    reflexive: bool,
    dual: &'static str,
    dual_matches: bool,
    double_dual_identity: bool,
    root_count: usize,
    deformation_defect: i64,
}

#[derive(Serialize)]
struct Census {
    polytope: &'static str,
    /// Lattice points by dimension of their smallest face; the last entry
    /// counts interior points.
    by_dim: Vec<usize>,
    total: usize,
}

#[derive(Serialize)]
struct Faces {
    polytope: &'static str,
    f_vector: Vec<usize>,
}

fn stratum(d: usize, dim: usize) -> String {
    match d {
        _ if d == dim => "interior".into(),
        0 => "vertex".into(),
        1 => "edge".into(),
        _ if d + 1 == dim => "facet".into(),
        _ => format!("{d}-face"),
    }
}

pub fn polytope(which: PolytopeName, action: PolytopeAction) -> Result<Report> {
    let p = which.build();
    let name = which.name();
    match action {
        PolytopeAction::Info => {
            let dual = p.dual()?;
            let census = p.census();
            let info = Info {
                polytope: name,
                dim: p.dim(),
                vertices: p.vertices().len(),
                facets: p.halfspaces().len(),
                lattice_points: census.total(),
                interior_points: census.interior(),
                f_vector: p.f_vector(),
                reflexive: p.is_reflexive(),
                dual: which.other().name(),
                dual_matches: dual == which.other().build(),
                double_dual_identity: dual.dual()? == p,
                root_count: p.root_count(),
                deformation_defect: p.deformation_defect()?,
            };
            let rows = vec![
                row!["dim", info.dim],
                row!["vertices", info.vertices],
                row!["facets", info.facets],
                row!["lattice_points", info.lattice_points],
                row!["interior_points", info.interior_points],
                row!["reflexive", info.reflexive],
                row!["dual", info.dual],
                row!["dual_matches", info.dual_matches],
                row!["double_dual_identity", info.double_dual_identity],
                row!["root_count", info.root_count],
                row!["deformation_defect", info.deformation_defect],
            ];
            Ok(Report::new(format!("{name}: summary"), &info)?.table(&["property", "value"], rows))
        }
        PolytopeAction::Census => {
            let c = p.census();
            let rows = c.by_dim.iter().enumerate().map(|(d, n)| row![stratum(d, p.dim()), n]).collect();
            let data = Census { polytope: name, total: c.total(), by_dim: c.by_dim };
            Ok(Report::new(format!("{name}: lattice points, total {}", data.total), &data)?.table(&["stratum", "points"], rows))
        }
        PolytopeAction::Faces => {
            let f = p.f_vector();
            let rows = f.iter().enumerate().map(|(d, n)| row![d, n]).collect();
            Ok(Report::new(format!("{name}: faces"), Faces { polytope: name, f_vector: f })?.table(&["dim", "faces"], rows))
        }
    }
}
