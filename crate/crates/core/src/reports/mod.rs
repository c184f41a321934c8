//! Tables, JSON reports, plots and the reproduction suite.

mod density;
mod reproduce;
mod svg;
mod tables;

pub use density::{density_curve, DensityCurve, Monotonicity, DENSITY_QUADRATURE_INTERVALS};
pub use reproduce::{reproduce, CriterionRow, ReproduceOptions, CRITERIA};
pub use svg::{line_plot_svg, PlotSpec};
pub use tables::{
    classification_report, complexity_report, eigs_table, format_number, oracle_table, parse_csv, to_csv,
    ClassificationRow, ComplexityRow, EigenRow, OracleRow, Tabular,
};
