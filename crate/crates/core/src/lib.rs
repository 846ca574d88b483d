//! Exact symbolic computation of unramified local data for Rankin-Selberg
//! integrals on GL(n+1) x GL(n) and GL(n) x GL(n-1): local L-factors,
//! spherical Whittaker values, local zeta integrals, local weight functions
//! and the algebraic identities behind the reciprocity parameter map.

pub mod cli;
pub mod exactalg;
pub mod localrep;
pub mod reciprocity;
pub mod report;
pub mod symfunc;
pub mod whittaker;
pub mod zeta;
