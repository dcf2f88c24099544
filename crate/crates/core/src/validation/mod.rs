//! Survey ingestion, the mean-score baseline, ROC analysis and the
//! engine-vs-baseline comparison report.

mod compare;
mod roc;
mod survey;
mod svg;
pub mod synthetic;

pub use compare::{compare, ComparisonReport, DimensionReport, OVERALL};
pub use roc::{auc_trapezoid, roc_points, RocCurve};
pub use survey::{load_survey, lrf_score, lrf_score_over, survey_to_csv, SurveyRecord, SURVEY_MAX};
pub use svg::roc_svg;
