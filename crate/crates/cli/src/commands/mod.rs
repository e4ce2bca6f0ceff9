mod fan;
pub mod groups;
mod hodge;
mod polytope;
mod sections;
mod table;

pub use fan::{fan, FanAction};
pub use groups::{groups, GroupsAction};
pub use hodge::{hodge, HodgeAction};
pub use polytope::{polytope, PolytopeAction, PolytopeName};
pub use sections::{sections, SectionsAction};
pub use table::table;
