//! Certified lower bounds for `|Lambda(A)|` and empirical exponent scans.

mod certify;
mod choose;
mod scan;

pub use certify::{certify_lower_bound, Certificate, CertifyConfig};
pub use choose::{choose_parameters, n0_for, ChosenParameters};
pub use scan::{exponent_scan, ExponentScanReport, ScanRow, ScanStrategy};
