//! Character sums over discriminant families, the certificate
//! `max |D_N| >= sqrt(S2 / S1)`, and the square-condition main term.

mod family;
mod main_term;
mod scan;

pub use family::{
    dyadic_family, family_average, max_partial_sum, partial_char_sum, FamilyAverageReport, ZETA_2,
};
pub use main_term::{resonated_main_term, MainTermReport, MAIN_TERM_TOLERANCE};
pub use scan::{
    benchmark_curve, certificate, certify, coeff_char_sum, compute_s1, compute_s2,
    CertificateReport, CharSumReport, Scanner, CERTIFICATE_TOLERANCE,
};
