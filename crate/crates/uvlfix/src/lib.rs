//! Filesystem side of uvlfix: corpus discovery, report files, the fixed
//! mirror, and the pieces the `uvlfix` binary is built from.
//!
//! Parsing, analysis and fixing of single files live in [`uvlfix_core`].

pub mod emit;
pub mod report;
pub mod scan;

pub use emit::{
    before_after, changed_files, fix_records, mirror_dataset, Emission, EmitError, FileFix,
};
pub use report::{build_analysis_report, build_structured_report, render_change_log};
pub use scan::{analyze_records, discover, scan_tree, Scan, ScanError, ScanRecord};
pub use uvlfix_core;
