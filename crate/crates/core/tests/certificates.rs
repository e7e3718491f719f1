use bnglue_core::audit::{self, AuditGrid, AuditKind, GenusCap, NodeMode};
use bnglue_core::certificate::{Case, Node};
use bnglue_core::hypotheses::{check_main, check_small_hyp, check_small_mid};
use bnglue_core::numerics::{self, CurveSpec};
use bnglue_core::{
    certify_main, certify_small_hyp, certify_small_mid, verify, GluingInstance, HyperplaneInstance,
    Instance, SmallMidQuery,
};

fn gi(d1: u32, g1: u32, d2: u32, g2: u32, r: u32, n: u32) -> GluingInstance {
    GluingInstance::from_parts(d1, g1, d2, g2, r, n).unwrap()
}

#[test]
fn worked_example_tree() {
    let cert = certify_main(&gi(4, 1, 5, 2, 3, 6)).unwrap();
    assert_eq!(cert.case, Case::LinearlyNormalLine);
    assert_eq!(cert.depth(), 3);
    let Node::Split { inner, outer, .. } = &cert.node else {
        panic!()
    };
    assert_eq!(inner.instance, Instance::Gluing(gi(1, 0, 5, 2, 3, 2)));
    assert_eq!(outer.instance, Instance::Gluing(gi(3, 0, 6, 3, 3, 6)));
    let rnc = outer.through_swaps();
    assert_eq!(rnc.case, Case::LinearlyNormalRnc);
    let Node::Split {
        plan, inner, outer, ..
    } = &rnc.node
    else {
        panic!()
    };
    assert_eq!((plan.n0, plan.n_prime, plan.n_dprime), (4, 1, 5));
    assert_eq!(inner.instance, Instance::Gluing(gi(3, 0, 3, 0, 3, 5)));
    assert_eq!(outer.instance, Instance::Gluing(gi(3, 0, 6, 4, 3, 5)));
    assert!(verify(&cert).ok);
}

#[test]
fn refusal_carries_the_failing_verdict() {
    let refusal = certify_main(&gi(4, 1, 5, 2, 3, 7)).unwrap_err();
    let verdict = refusal.verdict.expect("hypothesis refusal");
    let failing: Vec<_> = verdict.failures().map(|c| c.slack).collect();
    assert_eq!(failing, [-3]);
}

/// At `r = 5` the exchange for the margin-2 equality at `(8, 2, 5)` lands on a
/// side with margin 0, and no split of either side applies. The hypotheses
/// hold, so this is the one place the dispatch is incomplete.
#[test]
fn eleven_node_exchange_gap_at_r5() {
    let inst = gi(8, 2, 7, 0, 5, 11);
    assert!(check_main(&inst).passed());
    assert_eq!(numerics::margin(inst.left(), 11), 2);
    assert_eq!(numerics::margin(inst.right(), 11), 0);
    let refusal = certify_main(&inst).unwrap_err();
    assert!(!refusal.is_hypothesis_failure());
    assert!(certify_main(&inst.swapped()).is_err());
    // at r = 3 the exchanged side keeps margin >= 2
    for d2 in 3..=20 {
        for g2 in 0..=d2 - 3 {
            let inst = gi(6, 2, d2, g2, 3, 11);
            if check_main(&inst).passed() {
                assert!(certify_main(&inst).is_ok(), "{inst}");
            }
        }
    }
}

#[test]
fn exceptional_routes_verify() {
    let ten = certify_main(&gi(6, 3, 7, 0, 3, 10)).unwrap();
    assert!(matches!(ten.node, Node::Swap { .. }));
    assert_eq!(ten.case, Case::ExceptionalTen);
    assert!(verify(&ten).ok);
    let eleven = certify_main(&gi(6, 2, 6, 0, 3, 11)).unwrap();
    assert_eq!(eleven.case, Case::ExceptionalEleven);
    assert!(verify(&eleven).ok);
}

#[test]
fn coverage_refuses_beyond_the_node_bound() {
    let grid = AuditGrid {
        r_min: 3,
        r_max: 5,
        genus_cap: GenusCap::TimesR(2),
        d_cap: None,
        n_mode: NodeMode::AllAdmissible,
    };
    let mut beyond = 0;
    for cell in grid.cells() {
        for inst in grid.instances(cell) {
            let lln =
                inst.left().is_limit_linearly_normal() && inst.right().is_limit_linearly_normal();
            if lln && !audit::within_node_bound(&inst) {
                beyond += 1;
                assert!(certify_main(&inst).is_err(), "{inst}");
            }
        }
    }
    assert!(beyond > 0);
    assert!(audit::audit(AuditKind::Coverage, &grid).passed());
}

#[test]
fn agreement_and_termination_on_small_ambient() {
    let grid = AuditGrid {
        r_min: 3,
        r_max: 4,
        genus_cap: GenusCap::TimesR(3),
        d_cap: Some(24),
        n_mode: NodeMode::AllAdmissible,
    };
    let agreement = audit::audit(AuditKind::Agreement, &grid);
    assert!(agreement.passed(), "{:?}", agreement.disagreements);
    let termination = audit::audit(AuditKind::Termination, &grid);
    assert!(
        termination.passed(),
        "{:?}",
        termination.termination_violations
    );
    assert_eq!(agreement.instances_checked, termination.instances_checked);
}

#[test]
fn small_mid_certificates_verify() {
    for r in 2..=6 {
        for g in 0..=10 {
            for d in g + 1..=g + 3 * r {
                for a in 0..=r {
                    let q = SmallMidQuery::new(CurveSpec::new(d, g, r).unwrap(), a).unwrap();
                    match certify_small_mid(&q) {
                        Ok(cert) => {
                            let report = verify(&cert);
                            assert!(report.ok, "{q}: {:?}", report.failures);
                        }
                        Err(_) => assert!(!check_small_mid(&q).passed(), "{q}"),
                    }
                }
            }
        }
    }
}

/// The dispatch refuses only when one of the two curves has negative
/// Brill-Noether number, which the numeric hypotheses do not exclude.
#[test]
fn small_hyp_refuses_only_without_brill_noether_curves() {
    let mut certified = 0;
    for r in 3..=5 {
        for d1 in 1..=12 {
            for g1 in 0..=d1 {
                for d2 in 1..=9 {
                    for g2 in 0..=d2 {
                        for n in 1..=r + 2 {
                            let h = HyperplaneInstance::from_parts(d1, g1, d2, g2, r, n).unwrap();
                            if !check_small_hyp(&h).passed() {
                                assert!(certify_small_hyp(&h).is_err());
                                continue;
                            }
                            let curves_exist =
                                numerics::rho(h.inner()) >= 0 && numerics::rho(h.hyper()) >= 0;
                            match certify_small_hyp(&h) {
                                Ok(cert) => {
                                    certified += 1;
                                    let report = verify(&cert);
                                    assert!(report.ok, "{h}: {:?}", report.failures);
                                }
                                Err(refusal) => assert!(!curves_exist, "{h}: {}", refusal.reason),
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(certified > 1000);
}

#[test]
fn tampering_is_detected() {
    let mut cert = certify_main(&gi(4, 1, 5, 2, 3, 6)).unwrap();
    let Node::Split { inner, .. } = &mut cert.node else {
        panic!()
    };
    let Node::BaseMainSp { verdict } = &mut inner.node else {
        panic!()
    };
    verdict.checks.clear();
    verdict.outcome = bnglue_core::hypotheses::Outcome::Fail;
    let report = verify(&cert);
    assert!(!report.ok);
    assert!(report
        .failures
        .iter()
        .any(|f| f.path == "root/inner" && f.label == "stored verdict agrees"));
}
