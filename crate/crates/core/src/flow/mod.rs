//! Geodesic flow metrics and entropy estimators.

pub mod bowen;
pub mod dfmetric;
pub mod estimators;
pub mod fentropy;
pub mod path;
pub mod report;
pub mod schedule;
pub mod weight;

pub use bowen::{bowen_cover_estimate, bucket_count, separated_set_check, BowenConfig, BowenStrategy, SeparationCheck};
pub use estimators::{covering_entropy_estimate, critical_exponent_estimate, geodesic_covering_entropy_estimate};
pub use fentropy::f_entropy_estimate;
pub use dfmetric::{bowen_distance, d_f, d_f_dyn, quotient_d_f, Interval, QuotientDistance};
pub use path::{extend_word, BiWord, GeodesicPath};
pub use schedule::{integer_returns, k_tau_check, limit_schedule, Schedule, WindowCondition};
pub use report::{fit_slope, EntropyReport, FitModel, ReportConfig, ReportRow};
pub use weight::WeightFunction;
