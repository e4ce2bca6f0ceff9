use clap::Subcommand;
use hypermirror::fan::flag_subdivision;
use hypermirror::group::GroupElement;
use hypermirror::linalg::GaussianRational;
use hypermirror::sections::{
    eigen_decomposition, fixed_locus_on_torus, freeness_certificate, generic_invariant_section, lifts, section_basis,
    singular_points, twisted_eigen_section, unit_grid, CoordinateValue, RootOfUnity, SubtorusComponent,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::names::{parse_element, parse_group, word_names};
use crate::report::Report;
use crate::row;

#[derive(Clone, Debug, Subcommand)]
pub enum SectionsAction {
    /// Joint eigenspaces of the section space for `l1` or `l2`.
    Decompose {
        #[arg(long, default_value = "l1")]
        group: String,
    },
    /// Fixed locus of an element on the torus.
    FixedLocus {
        #[arg(long)]
        element: String,
    },
    /// Singular points of an eigen-section on the grid of fourth roots of
    /// unity.
    SingularScan {
        /// `s_1_-1`, `s_i_-1`, `s_-1_-1` or `s_-i_-1`.
        #[arg(long)]
        section: String,
    },
    /// Per-element freeness verdicts on the generic invariant section.
    Freeness {
        #[arg(long, default_value = "l1")]
        group: String,
    },
}

#[derive(Serialize)]
struct Space {
    rotation: String,
    reflection: String,
    dim: usize,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct Decomposition {
    group: String,
    spaces: Vec<Space>,
    residual_dim: usize,
    total_dim: usize,
    spans_all: bool,
}

#[derive(Serialize)]
struct Component {
    dimension: usize,
    coordinates: Vec<String>,
}

#[derive(Serialize)]
struct FixedLocus {
    element: String,
    components: Vec<Component>,
    isolated_points: usize,
}

#[derive(Serialize)]
struct SingularScan {
    section: String,
    polynomial: String,
    candidates: usize,
    singular_points: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct Verdict {
    element: String,
    fixed_components: usize,
    meets_section_on_torus: bool,
    torus_exit_power: Option<u32>,
    free: bool,
}

/// A constant-coefficient combination of the section monomials, written
/// as `c*x1^-1 + ...` in basis order.
fn as_poly(v: &[GaussianRational]) -> String {
    let one = GaussianRational::from(1);
    let terms: Vec<String> = section_basis()
        .iter()
        .zip(v)
        .filter(|(_, c)| **c != GaussianRational::from(0))
        .map(|(m, c)| {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            match (mono.is_empty(), *c == one) {
                (true, _) => c.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("({c})*{}", mono.join("*")),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn coordinate(c: &CoordinateValue) -> String {
    match c {
        CoordinateValue::Fixed(r) => r.to_string(),
        CoordinateValue::Free { parameter, scale, exponent } => {
            let t = if *exponent == 1 { format!("t{parameter}") } else { format!("t{parameter}^{exponent}") };
            if *scale == RootOfUnity::one() {
                t
            } else {
                format!("{scale}*{t}")
            }
        }
    }
}

fn component(c: &SubtorusComponent) -> Component {
    Component { dimension: c.dimension(), coordinates: c.coordinates().iter().map(coordinate).collect() }
}

fn eigen_section(name: &str) -> Result<u32> {
    match name {
        "s_1_-1" => Ok(0),
        "s_i_-1" => Ok(1),
        "s_-1_-1" => Ok(2),
        "s_-i_-1" => Ok(3),
        _ => Err(CliError::Usage(format!("unknown section {name:?}; expected s_1_-1, s_i_-1, s_-1_-1 or s_-i_-1"))),
    }
}

pub fn sections(action: SectionsAction) -> Result<Report> {
    match action {
        SectionsAction::Decompose { group } => {
            let involution = match group.to_ascii_lowercase().as_str() {
                "l1" => lifts::h1(),
                "l2" => lifts::h2(),
                _ => return Err(CliError::Usage(format!("unknown group {group:?}; expected l1 or l2"))),
            };
            let d = eigen_decomposition(&lifts::g(), &involution)?;
            let spaces: Vec<Space> = d
                .spaces
                .iter()
                .map(|s| Space {
                    rotation: s.rotation.to_string(),
                    reflection: s.reflection.to_string(),
                    dim: s.dim,
                    basis: s.basis.iter().map(|v| as_poly(v)).collect(),
                })
                .collect();
            let mut rows: Vec<Vec<String>> =
                spaces.iter().map(|s| row![s.rotation, s.reflection, s.dim, s.basis.join("; ")]).collect();
            rows.push(row!["W", "W", d.residual_dim, ""]);
            let data = Decomposition {
                group,
                total_dim: spaces.iter().map(|s| s.dim).sum::<usize>() + d.residual_dim,
                spaces,
                residual_dim: d.residual_dim,
                spans_all: d.spans_all,
            };
            Ok(Report::new(format!("section space decomposition for {}", data.group), &data)?
                .table(&["rotation", "reflection", "dim", "basis"], rows))
        }
        SectionsAction::FixedLocus { element } => {
            let a = parse_element(&element)?;
            if a.is_identity() {
                return Err(CliError::Usage("the identity fixes the whole torus".into()));
            }
            let components: Vec<Component> = fixed_locus_on_torus(&a)?.iter().map(component).collect();
            let rows = components.iter().map(|c| row![c.dimension, c.coordinates.join(", ")]).collect();
            let data = FixedLocus {
                isolated_points: components.iter().filter(|c| c.dimension == 0).count(),
                element,
                components,
            };
            Ok(Report::new(format!("fixed locus of {} on the torus", data.element), &data)?
                .table(&["dimension", "coordinates"], rows))
        }
        SectionsAction::SingularScan { section } => {
            let s = twisted_eigen_section(eigen_section(&section)?);
            let grid = unit_grid();
            let points: Vec<Vec<String>> = singular_points(&s, &grid)?
                .iter()
                .map(|x| x.iter().map(ToString::to_string).collect())
                .collect();
            let rows = points.iter().map(|p| row![format!("({})", p.join(","))]).collect();
            let data = SingularScan { polynomial: as_poly(&s.to_vector(&section_basis())?), section, candidates: grid.len(), singular_points: points };
            Ok(Report::new(format!("singular points of V({})", data.section), &data)?.table(&["point"], rows))
        }
        SectionsAction::Freeness { group } => {
            let k = parse_group(&group)?;
            let names = word_names(&k);
            let verdicts = freeness_certificate(&generic_invariant_section(), &k, &flag_subdivision())?;
            let mut out: Vec<Verdict> = verdicts
                .iter()
                .map(|v| Verdict {
                    element: names.get(&v.element).cloned().unwrap_or_else(|| format!("{:?}", v.element)),
                    fixed_components: v.components.len(),
                    meets_section_on_torus: v.meets_section_on_torus,
                    torus_exit_power: v.torus_exit_power,
                    free: v.free,
                })
                .collect();
            out.sort_by(|a, b| (a.element.len(), &a.element).cmp(&(b.element.len(), &b.element)));
            let rows = out
                .iter()
                .map(|v| {
                    let exit = v.torus_exit_power.map_or("-".to_string(), |j| j.to_string());
                    row![v.element, v.fixed_components, v.meets_section_on_torus, exit, v.free]
                })
                .collect();
            Ok(Report::new(format!("freeness on the generic invariant section ({group})"), &out)?
                .table(&["element", "fixed_components", "meets_section", "exit_power", "free"], rows))
        }
    }
}
