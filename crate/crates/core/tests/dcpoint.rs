use distchaos::dcpoint::*;
use distchaos::dynamics::{default_t_grid, DcClass, HorizonWindow};
use distchaos::interval::IntervalMap1D;
use distchaos::symbolic::*;

fn family() -> ScrambledFamily {
    build_dc1_family(4, SegmentSchedule::registered(2).unwrap()).unwrap()
}

#[test]
fn shift_certificate_is_exact() {
    let x0: ShiftPoint = "1|01".parse().unwrap();
    let cert = verify_dc_point(&x0, Radius::new(1, 3).unwrap(), &family(), 70, CertificateSettings::default()).unwrap();
    assert!(cert.pass, "{:?}", cert.failed_checks());
    assert_eq!(cert.mode, CheckMode::Exact);
    assert_eq!(cert.space, "shift-binary");
    let names: Vec<&str> = cert.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, [CHECK_S_IN_A, CHECK_A_IN_IMAGE, CHECK_IMAGE_IN_BALL, CHECK_SCRAMBLED]);
}

#[test]
fn member_outside_the_envelope_fails_the_first_check() {
    let eps = Radius::new(1, 2).unwrap();
    let x0: ShiftPoint = "|1".parse().unwrap();
    let psi = psi_transform(&x0, eps).unwrap();
    let mut scrambled = psi.image_family(&family());
    // an untransformed member starts with 0 and so leaves [1111]
    scrambled.push(ShiftPoint::member(family().members[0].clone()));
    let claim = DcPointClaim::<ShiftSystem> {
        x0,
        epsilon: eps.value(),
        class: DcClass::Dc1,
        scrambled,
        envelope: CylinderEnvelope { cylinder: psi.cylinder(), radius: eps },
        return_iterate: 2,
        plan: StatisticsPlan { t_grid: default_t_grid(), horizons: vec![1000], window: HorizonWindow::All },
    };
    let cert = verify_claim(&ShiftSystem::default(), &claim, 0.05).unwrap();
    let first = cert.check(CHECK_S_IN_A).unwrap();
    assert!(!first.pass);
    assert!(first.witness.is_some());
    assert!(!cert.pass);
}

#[test]
fn ball_membership_examples() {
    let shift = ShiftSystem::default();
    let x0: ShiftPoint = "|01".parse().unwrap();
    let m = ball_membership(&shift, &x0, 0.25, &x0).unwrap();
    assert!(m.inside);
    assert_eq!(m.margin, 0.25);
    // agreeing on m(ε) = 4 symbols puts the first difference at 5 or later
    let eps = Radius::new(1, 4).unwrap();
    let depth = ball_depth(eps) as usize;
    let y = ShiftPoint::Periodic(SymbolSequence::new(x0.prefix(depth).unwrap(), vec![1]).unwrap());
    let first = shift_metric(
        &SymbolSequence::new(vec![], vec![0, 1]).unwrap(),
        &SymbolSequence::new(x0.prefix(depth).unwrap(), vec![1]).unwrap(),
    )
    .unwrap();
    assert!(first > depth as u64);
    assert!(ball_membership(&shift, &x0, eps.value(), &y).unwrap().inside);

    let f = IntervalMap1D::tent(2.0).unwrap();
    assert!(!ball_membership(&f, &0.5, 0.25, &0.75).unwrap().inside);
    assert!(ball_membership(&f, &0.5, 0.25, &0.7).unwrap().inside);
}

#[test]
fn malformed_claims_are_rejected() {
    let eps = Radius::new(1, 2).unwrap();
    let x0: ShiftPoint = "|1".parse().unwrap();
    let psi = psi_transform(&x0, eps).unwrap();
    let base = DcPointClaim::<ShiftSystem> {
        x0,
        epsilon: eps.value(),
        class: DcClass::Dc1,
        scrambled: psi.image_family(&family()),
        envelope: CylinderEnvelope { cylinder: psi.cylinder(), radius: eps },
        return_iterate: 2,
        plan: StatisticsPlan { t_grid: default_t_grid(), horizons: vec![1000], window: HorizonWindow::All },
    };
    let shift = ShiftSystem::default();
    let mut c = base.clone();
    c.return_iterate = 0;
    assert!(verify_claim(&shift, &c, 0.05).is_err());
    let mut c = base.clone();
    c.class = DcClass::None;
    assert!(verify_claim(&shift, &c, 0.05).is_err());
    let mut c = base;
    c.epsilon = 0.0;
    assert!(verify_claim(&shift, &c, 0.05).is_err());
}
