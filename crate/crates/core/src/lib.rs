//! Region-based component decomposition numbers (RBCDN) for networks laid
//! out in the plane, minimum-cost link augmentation that lowers the RBCDN,
//! and an executable reduction from Hamiltonian Cycle in planar graphs.

pub mod fault;
pub mod generate;
pub mod geom;
pub mod graph;
pub mod planar;
pub mod reduction;
pub mod solver;

pub use fault::{rbcdn, CatalogSpec, FailureCatalog, FailureEvent, RbcdnResult, SemanticsTag};
pub use geom::{Layout, PlanePoint, PlaneSegment};
pub use graph::{EdgeCost, Graph, GraphError, LinkId, NodeId};
pub use planar::{fpp_embed, GridLayout, RotationSystem};
pub use reduction::{build_rbcdn_instance, extract_hamiltonian_cycle, CostTable, RbcdnRpInstance};
pub use solver::{solve_exact, solve_greedy, verify_augmentation, Augmentation, SolveReport, SolveStatus};
