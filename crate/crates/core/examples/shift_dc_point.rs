//! Certifies that an eventually periodic sequence is a DC1 point of the shift.

use distchaos::symbolic::{build_dc1_family, verify_dc_point, CertificateSettings, Radius, SegmentSchedule, ShiftPoint};

fn main() -> distchaos::Result<()> {
    let family = build_dc1_family(4, SegmentSchedule::registered(2)?)?;
    let x0: ShiftPoint = "10|011".parse()?;
    let eps = Radius::new(1, 3)?;
    let cert = verify_dc_point(&x0, eps, &family, 70, CertificateSettings::default())?;
    for c in &cert.checks {
        println!("{:<20} {:<5} {}", c.name, c.pass, c.detail);
    }
    println!("x0 = {}, return iterate {}, pass = {}", cert.x0, cert.return_iterate, cert.pass);
    Ok(())
}
