//! Named verification suites. Each suite is a list of independent jobs; jobs
//! run on the worker pool and their checks are merged in id order.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::CliError;
use crate::exactalg::{rational, LaurentPoly, RationalFunction};
use crate::localrep::{self, LocalFieldData, UnramifiedRep};
use crate::report::{Check, SuiteReport};
use crate::whittaker::{self, TorusCocharacter};
use crate::zeta::{self, Verdict, WeightValue};
use crate::{reciprocity, symfunc};

pub const SUITES: &[&str] = &[
    "involution",
    "exponents",
    "weyl",
    "cusp",
    "unramified",
    "cauchy",
    "schur",
    "weight-unramified",
    "weight-l",
    "weight-q",
    "index",
    "charsum",
    "contragredient",
];

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteParams {
    pub n_max: Option<usize>,
    pub order: Option<usize>,
    pub seed: u64,
}

type Job = Box<dyn Fn() -> Vec<Check> + Send + Sync>;

fn job(f: impl Fn() -> Vec<Check> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

fn timed_check(id: String, desc: String, f: impl FnOnce() -> Result<Option<String>, String>) -> Check {
    let start = Instant::now();
    match f() {
        Ok(w) => Check::from_witness(id, desc, w),
        Err(e) => Check::error(id, desc, e),
    }
    .timed(start)
}

fn sym(prefix: &str, n: usize) -> UnramifiedRep {
    UnramifiedRep::symbolic(prefix, n).expect("rank >= 1")
}

fn jobs_for(suite: &str, p: SuiteParams) -> Result<Vec<Job>, CliError> {
    let upto = |default: usize| p.n_max.unwrap_or(default);
    let order = p.order;
    let order_or = move |default: usize| order.unwrap_or(default);
    let seed = p.seed;
    let jobs: Vec<Job> = match suite {
        "involution" => (2..=upto(10))
            .map(|n| {
                job(move || {
                    reciprocity::verify_involution_and_exponents(n)
                        .checks
                        .into_iter()
                        .filter(|c| c.id.starts_with("involution/"))
                        .collect()
                })
            })
            .collect(),
        "exponents" => (2..=upto(10))
            .map(|n| {
                job(move || {
                    reciprocity::verify_involution_and_exponents(n)
                        .checks
                        .into_iter()
                        .filter(|c| c.id.starts_with("exponents/"))
                        .collect()
                })
            })
            .collect(),
        "weyl" => (2..=upto(6)).map(|n| job(move || reciprocity::weyl_conjugation_identity(n).checks)).collect(),
        "cusp" => (2..=upto(4)).map(|n| job(move || reciprocity::cusp_invariance_factorization(n).checks)).collect(),
        "unramified" => (1..=upto(3))
            .map(|n| {
                let order = order_or(if n >= 3 { 5 } else { 6 });
                job(move || zeta::verify_unramified_identity(n, order).checks)
            })
            .collect(),
        "cauchy" => {
            let top = upto(3);
            let order = order_or(6);
            (1..=top)
                .flat_map(|n| (1..=top).map(move |m| (n, m)))
                .map(|(n, m)| job(move || symfunc::cauchy_check(n, m, order).checks))
                .collect()
        }
        "schur" => (1..=upto(4)).map(|n| job(move || symfunc::schur_checks(n, 6, 4))).collect(),
        "weight-unramified" => (2..=upto(4))
            .map(|n| {
                let order = order_or(match n {
                    2 => 6,
                    3 => 5,
                    _ => 4,
                });
                job(move || vec![weight_unramified_check(n, order)])
            })
            .collect(),
        "weight-l" => {
            let mut v: Vec<Job> = Vec::new();
            for n in 2..=upto(3) {
                v.push(job(move || vec![weight_l_unit_check(n, order_or(6))]));
                for m in 1..=2u32 {
                    v.push(job(move || vec![weight_l_paths_check(n, m, order_or(6))]));
                    v.push(job(move || vec![weight_l_rationality_check(n, m, order_or(8))]));
                }
            }
            v.push(job(move || vec![weight_l_rank_two_check(order_or(6))]));
            v
        }
        "weight-q" => {
            let mut v: Vec<Job> = (0..=4u32).map(|n0| job(move || vec![weight_q_vanishing_check(n0)])).collect();
            for n in 2..=upto(3) {
                for field in ["2", "3", "symbolic"] {
                    v.push(job(move || vec![weight_q_single_term_check(n, field)]));
                }
            }
            v
        }
        "index" => {
            let mut v: Vec<Job> = Vec::new();
            for n in 1..=upto(3) {
                for pr in [2u64, 3] {
                    for m in 0..=2u32 {
                        v.push(job(move || vec![index_check(n, pr, m)]));
                    }
                }
            }
            v
        }
        "charsum" => {
            let mut v: Vec<Job> = Vec::new();
            for pr in [2u64, 3, 5] {
                for m in 0..=2u32 {
                    for r in 1..=3usize {
                        v.push(job(move || vec![charsum_check(pr, m, r, seed)]));
                    }
                }
            }
            v
        }
        "contragredient" => (2..=upto(4)).map(|n| job(move || vec![contragredient_check(n, 20, seed)])).collect(),
        "all" => {
            let mut v = Vec::new();
            for s in SUITES {
                v.extend(jobs_for(s, p)?);
            }
            v
        }
        other => {
            return Err(CliError::Invalid(format!(
                "unknown suite {other:?}; expected one of: all, {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(jobs)
}

/// Runs a suite on the current rayon pool.
pub fn run_suite(suite: &str, params: SuiteParams) -> Result<SuiteReport, CliError> {
    let jobs = jobs_for(suite, params)?;
    let checks: Vec<Check> = jobs.par_iter().flat_map_iter(|j| j()).collect();
    Ok(SuiteReport::from_checks(suite, checks))
}

fn weight_unramified_check(n: usize, order: usize) -> Check {
    timed_check(
        format!("weight-unramified/n={n:02}/N={order:02}"),
        format!("H_v = 1 for symbolic ranks ({}, {n}, {}) to order {order}", n + 1, n - 1),
        || {
            let h = zeta::weight_unramified(&sym("a", n + 1), &sym("b", n), &sym("c", n - 1), order)
                .map_err(|e| e.to_string())?;
            Ok((!h.value.is_one()).then(|| format!("value {:?}", h.value)))
        },
    )
}

fn weight_l_unit_check(n: usize, order: usize) -> Check {
    timed_check(
        format!("weight-l/n={n:02}/m=0/unit"),
        format!("H_v = 1 at level 0 for ranks ({n}, {})", n - 1),
        || {
            let h = zeta::weight_at_l(&sym("b", n), &sym("c", n - 1), 0, "Y", order, &LocalFieldData::symbolic())
                .map_err(|e| e.to_string())?;
            Ok((!h.value.is_one()).then(|| format!("value {:?}", h.value)))
        },
    )
}

fn weight_l_paths_check(n: usize, m: u32, order: usize) -> Check {
    timed_check(
        format!("weight-l/n={n:02}/m={m}/paths"),
        format!(
            "direct tail sum equals 1 - L^-1 * partial sum, and the printed-constant path differs by the reported ratio (ranks ({n}, {}), order {order})",
            n - 1
        ),
        || {
            let paths =
                zeta::weight_at_l_paths(&sym("b", n), &sym("c", n - 1), m, "Y", order, &LocalFieldData::symbolic())
                    .map_err(|e| e.to_string())?;
            if let Some(k) = paths.direct.first_difference(&paths.tail).map_err(|e| e.to_string())? {
                return Ok(Some(format!(
                    "Y^{k}: direct {} vs tail {}",
                    paths.direct.coeffs()[k],
                    paths.tail.coeffs()[k]
                )));
            }
            let ratio = paths.comparison.ratio.as_poly().ok_or("ratio is not a monomial")?;
            let rescaled = paths.paper.scale(&ratio).map_err(|e| e.to_string())?;
            Ok(rescaled.first_difference(&paths.direct).map_err(|e| e.to_string())?.map(|k| {
                format!("Y^{k}: printed path times ratio {} vs direct {}", rescaled.coeffs()[k], paths.direct.coeffs()[k])
            }))
        },
    )
}

fn weight_l_rationality_check(n: usize, m: u32, order: usize) -> Check {
    let bound = n * m as usize;
    timed_check(
        format!("weight-l/n={n:02}/m={m}/rationality"),
        format!("Psi^(m) * prod(1 - b_i c_j Y) has no terms above Y^{bound} (order {order})"),
        || {
            let h = zeta::weight_at_l(&sym("b", n), &sym("c", n - 1), m, "Y", order, &LocalFieldData::symbolic())
                .map_err(|e| e.to_string())?;
            let WeightValue::Series(s) = &h.value else { return Err("value is not a series".into()) };
            Ok(zeta::degree_excess(s, bound).map(|k| format!("Y^{k} coefficient {}", s.coeffs()[k])))
        },
    )
}

fn weight_l_rank_two_check(order: usize) -> Check {
    timed_check(
        "weight-l/n=02/m=1/closed-form".into(),
        "H_v = (b1 + b2) c1 Y - b1 b2 c1^2 Y^2 for ranks (2, 1) at level 1".into(),
        || {
            let h = zeta::weight_at_l(&sym("b", 2), &sym("c", 1), 1, "Y", order, &LocalFieldData::symbolic())
                .map_err(|e| e.to_string())?;
            let expected: LaurentPoly = "b1*c1*Y + b2*c1*Y - b1*b2*c1^2*Y^2".parse().expect("literal");
            let WeightValue::Series(s) = &h.value else { return Err("value is not a series".into()) };
            let got = s.to_poly();
            Ok((got != expected).then(|| format!("got {got}")))
        },
    )
}

fn weight_q_vanishing_check(n0: u32) -> Check {
    timed_check(
        format!("weight-q/vanishing/n0={n0}"),
        format!("vanishing verdict exactly when the conductor {n0} exceeds the level (levels 0..=4, ranks 2..=3)"),
        || {
            for n in 2..=3 {
                for m in 0..=4u32 {
                    let h = zeta::weight_at_q_structural(n0, m, n, &LocalFieldData::symbolic())
                        .map_err(|e| e.to_string())?;
                    let vanishes = h.verdict == Some(Verdict::Vanishes);
                    let empty = h.index_set.as_ref().is_some_and(Vec::is_empty);
                    if vanishes != (n0 > m) || empty != (n0 > m) {
                        return Ok(Some(format!("n={n} m={m}: verdict {:?}, index set empty {empty}", h.verdict)));
                    }
                }
            }
            Ok(None)
        },
    )
}

fn parse_field(p: &str) -> LocalFieldData {
    match p {
        "symbolic" => LocalFieldData::symbolic(),
        s => LocalFieldData::numeric(s.parse().expect("literal prime")).expect("p >= 2"),
    }
}

fn weight_q_single_term_check(n: usize, p: &'static str) -> Check {
    timed_check(
        format!("weight-q/single-term/n={n:02}/p={p}"),
        format!("at conductor = level the surviving term is 1/[K : K_0] (levels 0..=3, rank {n}, p = {p}); the printed constant is reported alongside"),
        || {
            let field = parse_field(p);
            for m in 0..=3u32 {
                let h = zeta::weight_at_q_structural(m, m, n, &field).map_err(|e| e.to_string())?;
                let index = localrep::congruence_index_poly(n, &field, m);
                let expected = RationalFunction::new(LaurentPoly::one(), index).map_err(|e| e.to_string())?;
                let Some(cmp) = &h.paper_comparison else { return Ok(Some(format!("m={m}: no comparison"))) };
                let paper = RationalFunction::from_poly(field.power(-(n as i64 - 1) * m as i64));
                let ratio = expected.div(&paper).map_err(|e| e.to_string())?;
                if h.value != WeightValue::Rational(expected.clone()) {
                    return Ok(Some(format!("m={m}: value {:?}, expected {expected}", h.value)));
                }
                if RationalFunction::from_poly(cmp.paper_constant.clone()) != paper || cmp.ratio != ratio {
                    return Ok(Some(format!("m={m}: comparison {cmp:?}")));
                }
                if h.index_set.as_ref().map(Vec::len) != Some(1) {
                    return Ok(Some(format!("m={m}: index set {:?}", h.index_set)));
                }
            }
            Ok(None)
        },
    )
}

fn within_enumeration_bound(n: usize, p: u64, m: u32) -> bool {
    let bits = (n * n) as f64 * m as f64 * (p as f64).log2();
    bits <= 24.0
}

fn index_check(n: usize, p: u64, m: u32) -> Check {
    timed_check(
        format!("index/n={n}/p={p}/m={m}"),
        format!(
            "closed-form index of K_0(w^{m}) in GL({n}) matches {} mod {p}^{m}",
            if within_enumeration_bound(n, p, m) { "matrix enumeration" } else { "primitive row counting" }
        ),
        || {
            let closed = localrep::congruence_index(n, p, m);
            let brute = localrep::congruence_index_bruteforce(n, p, m).map_err(|e| e.to_string())?;
            Ok((closed != brute).then(|| format!("closed form {closed}, enumeration {brute}")))
        },
    )
}

/// `sum_{b in (Z/p^m)^r} exp(2 pi i sum b_i h_i / p^m)` with `h_i = p^{v_i} u_i`.
fn charsum_oracle(p: u64, m: u32, vals: &[u32], units: &[u64]) -> Complex64 {
    let modulus = p.pow(m);
    let h: Vec<u64> = vals
        .iter()
        .zip(units)
        .map(|(&v, &u)| p.pow(v.min(m)) % modulus * u % modulus)
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let count = modulus.pow(vals.len() as u32);
    for code in 0..count {
        let mut c = code;
        let mut phase = 0u64;
        for hi in &h {
            let b = c % modulus;
            c /= modulus;
            phase = (phase + b * hi) % modulus;
        }
        total += Complex64::from_polar(1.0, 2.0 * PI * phase as f64 / modulus as f64);
    }
    total
}

fn tuples(r: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    (0..r).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

pub const CHARSUM_TOLERANCE: f64 = 1e-9;

fn charsum_check(p: u64, m: u32, r: usize, seed: u64) -> Check {
    timed_check(
        format!("charsum/p={p}/m={m}/r={r}"),
        format!("orthogonality value matches the root-of-unity sum to {CHARSUM_TOLERANCE:e} for all valuations in [0, 3]^{r}"),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p * 100 + m as u64 * 10 + r as u64);
            let field = LocalFieldData::numeric(p).map_err(|e| e.to_string())?;
            for vals in tuples(r, 0, 3) {
                let units: Vec<u64> = (0..r)
                    .map(|_| loop {
                        let u = rng.gen_range(1..p.pow(m + 1));
                        if u % p != 0 {
                            break u;
                        }
                    })
                    .collect();
                let vi: Vec<i64> = vals.iter().map(|&v| v as i64).collect();
                let exact = localrep::character_sum(&field, m, &vi).map_err(|e| e.to_string())?;
                let exact = rational::to_f64(&exact.constant_value().ok_or("non-constant character sum")?);
                let oracle = charsum_oracle(p, m, &vals, &units);
                if (oracle - Complex64::new(exact, 0.0)).norm() > CHARSUM_TOLERANCE {
                    return Ok(Some(format!("valuations {vals:?} units {units:?}: exact {exact}, oracle {oracle}")));
                }
            }
            Ok(None)
        },
    )
}

fn random_dominant(rng: &mut ChaCha8Rng, n: usize) -> TorusCocharacter {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    TorusCocharacter::new(v)
}

fn contragredient_check(n: usize, samples: usize, seed: u64) -> Check {
    timed_check(
        format!("contragredient/n={n}"),
        format!("matrix definition equals parameter inversion on {samples} random dominant cocharacters"),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1000 + n as u64);
            let rep = sym("a", n);
            let dual = localrep::contragredient(&rep).map_err(|e| e.to_string())?;
            for _ in 0..samples {
                let mu = random_dominant(&mut rng, n);
                let a = whittaker::contragredient_value(&rep, &mu).map_err(|e| e.to_string())?;
                let b = whittaker::spherical_value(&dual, &mu).map_err(|e| e.to_string())?;
                if a != b {
                    return Ok(Some(format!("mu = {mu}: matrix path {a}, inversion path {b}")));
                }
            }
            Ok(None)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_oracle_values() {
        // r=2, p=3, m=1, valuations (1, 2) gives 9
        let v = charsum_oracle(3, 1, &[1, 2], &[1, 2]);
        assert!((v - Complex64::new(9.0, 0.0)).norm() < 1e-9);
        let v = charsum_oracle(2, 1, &[0], &[1]);
        assert!(v.norm() < 1e-9);
    }

    #[test]
    fn enumeration_bound() {
        assert!(within_enumeration_bound(3, 2, 2));
        assert!(within_enumeration_bound(3, 3, 1));
        assert!(!within_enumeration_bound(3, 3, 2));
    }

    #[test]
    fn unknown_suite_is_invalid() {
        assert!(matches!(run_suite("nope", SuiteParams::default()), Err(CliError::Invalid(_))));
    }
}
