//! States, the GNS construction and superselection-sector machinery.

mod gns;
mod sectors;
mod state;

pub use gns::{gns, GnsData};
pub use sectors::{
    central_decomposition, central_support, central_witness, decompose_with, disjointness_routes,
    folia_agree_on_probes, folium_contains, is_disjoint, is_quasi_equivalent, reassembly_error, sector_vector,
    DisjointnessRoutes, SectorComponent, SectorDecomposition,
};
pub use state::{evaluate, mix_states, StateFunctional};
