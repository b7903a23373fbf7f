//! Manufactured solutions, error norms, convergence studies and consistency
//! residuals.

pub mod cases;
pub mod consistency;
pub mod convergence;
pub mod norms;

pub use cases::{builtin_case, standing_wave_case, ManufacturedCase, StandingWave, BUILTIN_CASES};
pub use consistency::{consistency_residuals, ConsistencyReport};
pub use convergence::{convergence_study, Coupling, EocLevel, EocReport, StudyOptions};
pub use norms::{error_h1, error_l2, error_l2_with_points, fe_l2_norm, field_l2_norm};
