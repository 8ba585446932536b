//! Front normalization, IGD, exact three-objective hypervolume, COI-family
//! aggregation, reference fronts, Friedman ranking, and front/report files.

mod coi;
mod front;
mod indicators;
mod ranking;
mod report;

pub use coi::{coi_family, CoiMode, CoiSummary};
pub use front::{read_front_csv, write_front_csv, FrontMatrix, FrontRow};
pub use indicators::{build_reference_front, hv3, igd, normalize_fronts, Bounds};
pub use ranking::{friedman_ranks, Direction, RankTable};
pub use report::{write_report_csv, write_report_json, MetricsRow};
