//! Circle-bundle connections and their holonomy over the model surfaces.

mod connection;
mod curve;
mod hol;

pub use connection::{Connection, Potential, CHERN_TOL};
pub use curve::{homology_class, orbit_curve, Cap, Curve, Loop, Orbit, CLOSURE_TOL};
pub use hol::{
    catalog_loop, equivariant_holonomy, holonomy, holonomy_via, latitude_loop,
    latitude_loop_south_capped, line_integral, patch_flux, route_applies, Route,
};
