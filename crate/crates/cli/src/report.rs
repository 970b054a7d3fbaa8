//! The full acceptance run behind `pdcalc report`.

use pdcalc::senhom::BokstedtVariant;

use crate::checks::{cartier, fgl, sen, witt, Check};
use crate::config::RunConfig;
use crate::document::ReportDocument;
use crate::targets::{parse_eisenstein, Targets};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>);

/// One entry per acceptance criterion, each a list of checks.
pub fn criteria(t: &Targets) -> Vec<Criterion<'_>> {
    let w = &t.witt;
    let f = &t.fgl;
    let s = &t.sen;
    let c = &t.cartier;
    vec![
        ("gabber-identity", Box::new(move || w.gabber_primes.iter().map(|&p| witt::gabber(p, w.gabber_length)).collect())),
        (
            "frobenius-preimage",
            Box::new(move || {
                let mut primes = vec![w.solve_frobenius_failure.p];
                primes.extend(&w.solve_frobenius_unit_primes);
                primes
                    .into_iter()
                    .map(|p| {
                        witt::solve_frobenius_trichotomy(
                            p,
                            w.gabber_length,
                            &w.solve_frobenius_failure,
                            &w.solve_frobenius_twists,
                        )
                    })
                    .collect()
            }),
        ),
        (
            "pn-vanishing",
            Box::new(move || w.pn_primes.iter().map(|&p| witt::pn_vanishing(p, w.pn_max, w.pn_length)).collect()),
        ),
        (
            "bokstedt",
            Box::new(move || {
                let j = s.bokstedt_j_max as i64;
                let mut out = Vec::new();
                for &p in &s.bokstedt_primes {
                    out.push(sen::bokstedt(p, BokstedtVariant::T1, 2 * p as i64 * j - 1));
                    out.push(sen::bokstedt(p, BokstedtVariant::Jp, 2 * j - 1));
                }
                out
            }),
        ),
        (
            "serre-cmn",
            Box::new(move || {
                s.cmn_cases
                    .iter()
                    .map(|&(p, n)| sen::cmn(p, n, 2 * s.cmn_k_max as i64 * p.pow(n) as i64 - 1))
                    .collect()
            }),
        ),
        (
            "perfectoid",
            Box::new(move || {
                s.perfectoid_primes.iter().map(|&p| sen::perfectoid(p, s.perfectoid_factor * p as i64)).collect()
            }),
        ),
        (
            "omega2yn",
            Box::new(move || {
                let bound = 2 * s.omega2yn_k_max as i64;
                let mut out: Vec<Check> =
                    s.omega2yn_heights.iter().map(|&n| sen::omega2yn(s.omega2yn_p, n, bound)).collect();
                out.push(sen::omega2yn_independence(s.omega2yn_p, &s.omega2yn_heights, bound));
                out
            }),
        ),
        (
            "dvr",
            Box::new(move || {
                s.dvr_cases
                    .iter()
                    .map(|case| match parse_eisenstein(&case.polynomial) {
                        Ok(e) => sen::dvr(case.p, &e, 2 * s.dvr_j_max as i64 - 1, 1),
                        Err(msg) => Check::error(format!("sen.dvr[E={}]", case.polynomial), msg),
                    })
                    .collect()
            }),
        ),
        (
            "n-series",
            Box::new(move || {
                let mut out = vec![fgl::q_identity(f.q_identity_max, f.q_identity_max as u32 + 1)];
                for &p in &f.honda_primes {
                    let mut n = 1;
                    while p.pow(n) <= f.honda_max_power {
                        out.push(fgl::honda(p, n, f.honda_max_power));
                        n += 1;
                    }
                }
                out
            }),
        ),
        ("right-unit", Box::new(move || vec![fgl::right_unit(2, 2, &f.right_unit), fgl::b4(&f.right_unit)])),
        (
            "psi-calculus",
            Box::new(move || {
                let mut out: Vec<Check> =
                    c.psi_primes.iter().map(|&p| cartier::psi_range(p, c.psi_length, c.psi_m_max)).collect();
                out.extend(c.psi_primes.iter().map(|&p| {
                    cartier::psi_tensor(p, c.psi_length, c.psi_tensor_pairs, c.psi_tensor_range, w.seed)
                }));
                out
            }),
        ),
        (
            "weyl",
            Box::new(move || c.weyl_primes.iter().map(|&p| cartier::weyl(p, c.weyl_j_max + 1, c.weyl_m_max)).collect()),
        ),
        (
            "delta-divisibility",
            Box::new(move || {
                vec![cartier::delta(c.delta_p, c.delta_height, c.delta_k_max, c.delta_precision, c.delta_truncation)]
            }),
        ),
        (
            "dwork-cartier",
            Box::new(move || {
                let mut out: Vec<Check> = w
                    .cartier_primes
                    .iter()
                    .map(|&p| witt::cartier(p, w.cartier_samples, w.cartier_length, w.cartier_degree, w.seed))
                    .collect();
                out.push(witt::dwork(w.dwork_instances, w.dwork_degree, w.seed));
                out
            }),
        ),
    ]
}

/// Every criterion, run in parallel and assembled in a fixed order. Check
/// names are prefixed with the criterion number.
pub fn cmd_report(config: &RunConfig, targets: &Targets) -> ReportDocument {
    let list = criteria(targets);
    let results: Vec<Vec<Check>> = std::thread::scope(|scope| {
        let handles: Vec<_> = list.iter().map(|(_, run)| scope.spawn(move || run())).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    let mut checks = Vec::new();
    for (i, ((label, _), group)) in list.iter().zip(results).enumerate() {
        for mut check in group {
            check.name = format!("{:02}-{label}/{}", i + 1, check.name);
            checks.push(check);
        }
    }
    ReportDocument::new("report", config, checks)
}
