use ffgauss::affine::*;
use ffgauss::ffq::*;
use ffgauss::gamma::*;
use ffgauss::localv::*;

fn main() {
    let fqid = fq_field(3).unwrap();
    let v = Poly::theta(fqid);
    let fid = build_field(3, 1).unwrap();
    let ring = LocalRing::unramified(fid, &v, field(fid).zero(), 10).unwrap();
    let eng = GammaEngine::new(&ring);
    let y = QAdicDigits::new(3, 1, 2).unwrap();
    let g = eng.gamma_ari(&y).unwrap();
    println!("gamma_ari(1/2) = {:?}", g);
    // digits of -1/2
    let mut s = QAdicDigits::new(3, -1, 2).unwrap();
    print!("digits of -1/2: ");
    for _ in 0..6 { print!("{} ", s.next_digit()); }
    println!();
    // digits of -1/8 and -3/8
    let mut a = QAdicDigits::new(3, -1, 8).unwrap();
    let mut b = QAdicDigits::new(3, -3, 8).unwrap();
    print!("digits -1/8: "); for _ in 0..6 { print!("{} ", a.next_digit()); } println!();
    print!("digits -3/8: "); for _ in 0..6 { print!("{} ", b.next_digit()); } println!();
    for i in 0..6 {
        let n = eng.monic_flat(i).unwrap();
        println!("monic_flat({}) = {:?}", i, n);
    }
}
