use num_complex::Complex64;
use rootiso::real::*;
use rootiso::*;
fn main() {
    let z = Complex64::new(0.6774291078835252, -0.7761029756944635);
    let p = Polynomial::from_roots(&[Complex64::new(1.8572480415915036, 0.0), z, z.conj()]);
    println!("{:?}", p.coeffs());
    let est = refined_radii(&p, 1e-3).unwrap();
    println!("{:?}", est);
    let c = candidate_intervals(&est);
    println!("{:?}", c);
    println!("{:?}", narrow_root_ranges(&p));
    let s = select_sign_change_intervals(&p, &c);
    println!("{:?}", s);
    println!("{:?}", isolate_real_roots(&p, &IsolatorConfig::default()));
}
