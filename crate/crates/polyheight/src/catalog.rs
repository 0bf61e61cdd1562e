//! Built-in corpus of polynomials with hand-derived heights, exponents and
//! case tags; shared by the CLI `catalog` subcommand and the acceptance
//! suite.

use crate::adapt::CaseTag;

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Expected height as (numerator, denominator).
    pub h: (i64, i64),
    pub nu: u8,
    pub case: CaseTag,
}

pub fn catalog() -> Vec<CatalogEntry> {
    use CaseTag::*;
    vec![
        CatalogEntry { name: "x1^2", text: "x1^2", h: (2, 1), nu: 0, case: OneVar },
        CatalogEntry { name: "x1^3", text: "x1^3", h: (3, 1), nu: 0, case: OneVar },
        CatalogEntry { name: "x1^4", text: "x1^4", h: (4, 1), nu: 0, case: OneVar },
        CatalogEntry { name: "x1^5", text: "x1^5", h: (5, 1), nu: 0, case: OneVar },
        CatalogEntry { name: "x1^2*x2^2", text: "x1^2*x2^2", h: (2, 1), nu: 1, case: TwoVar },
        CatalogEntry { name: "x1^2+x2^3", text: "x1^2+x2^3", h: (6, 5), nu: 0, case: TwoVar },
        CatalogEntry {
            name: "(x2-x1^2)^2",
            text: "x2^2-2*x1^2*x2+x1^4",
            h: (2, 1),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "(x2-x1^2)^2+x1^5",
            text: "x2^2-2*x1^2*x2+x1^4+x1^5",
            h: (10, 7),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "(x2-x1^2)^2+x1^6",
            text: "x2^2-2*x1^2*x2+x1^4+x1^6",
            h: (3, 2),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "(x2-x1^2)^2+x1^7",
            text: "x2^2-2*x1^2*x2+x1^4+x1^7",
            h: (14, 9),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "(x2-x1^2)^2+x1^8",
            text: "x2^2-2*x1^2*x2+x1^4+x1^8",
            h: (8, 5),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "(x2-x1^2)^2+x1^9",
            text: "x2^2-2*x1^2*x2+x1^4+x1^9",
            h: (18, 11),
            nu: 0,
            case: TwoVar,
        },
        CatalogEntry {
            name: "x1^3+x1^2*x2+x1^4*x3",
            text: "x1^3+x1^2*x2+x1^4*x3",
            h: (2, 1),
            nu: 0,
            case: FormCase2,
        },
        CatalogEntry {
            name: "x1^2+x1^3*x2+x1^4*x3",
            text: "x1^2+x1^3*x2+x1^4*x3",
            h: (2, 1),
            nu: 0,
            case: FormCase1,
        },
        CatalogEntry {
            name: "x1^3+x1^4*x2+x1^5*x3",
            text: "x1^3+x1^4*x2+x1^5*x3",
            h: (3, 1),
            nu: 0,
            case: FormCase1,
        },
    ]
}

#[derive(Clone, Copy, Debug)]
pub struct DecayEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Expected decay exponent −1/h.
    pub beta: f64,
    pub log_flag: u8,
}

/// Entries with numerically verified normal-direction decay.
pub fn decay_catalog() -> Vec<DecayEntry> {
    vec![
        DecayEntry { name: "x1^3", text: "x1^3", beta: -1.0 / 3.0, log_flag: 0 },
        DecayEntry { name: "x1^4", text: "x1^4", beta: -0.25, log_flag: 0 },
        DecayEntry {
            name: "x1^3+x1^2*x2+x1^4*x3",
            text: "x1^3+x1^2*x2+x1^4*x3",
            beta: -0.5,
            log_flag: 0,
        },
        DecayEntry { name: "x1^2*x2^2", text: "x1^2*x2^2", beta: -0.5, log_flag: 1 },
    ]
}
