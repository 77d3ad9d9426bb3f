//! Exact event-driven graphical-representation simulation of spin systems
//! and pathwise duality verification.

pub mod exchangeable;
pub mod graphical;
pub mod mechanism;
pub mod qvalue;
pub mod verify;

pub use exchangeable::{hypergeometric_duality_value, mc_exchangeable_duality, ExchangeableConfig};
pub use graphical::{
    evolve_backward, evolve_forward, sample_graphical_representation, ArrowEvent,
    GraphicalRepresentation, RateTable, SpinConfiguration, Trajectory, TrajectoryStep,
};
pub use mechanism::{
    is_q_dual_mechanism, mechanism_generator, mechanism_monotone, standard_mechanisms,
    BasicMechanism, MonotoneMechanismReport, QDualReport, RandomizedMechanism,
};
pub use qvalue::{QParameter, QPower};
pub use verify::{
    conditional_duality_check, rw_siegmund_pathwise, verify_strong_pathwise,
    ConditionalDualityConfig, RwPathwiseReport, StrongPathwiseReport,
};
