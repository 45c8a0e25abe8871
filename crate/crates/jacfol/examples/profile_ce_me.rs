use jacfol::branch::Branch;
use jacfol::foliation::FoliationModel;
use jacfol::jac::Analysis;
use jacfol::scalar::Scalar;
use std::time::Instant;

fn s(n: i64) -> Scalar { Scalar::from_int(n) }

fn main() {
    let c = vec![
        Branch::smooth(vec![(1, s(1))], 16, "C1").unwrap(),
        Branch::smooth(vec![(2, s(-1))], 16, "C2").unwrap(),
        Branch::smooth(vec![(2, s(1))], 16, "C3").unwrap(),
        Branch::smooth(vec![(2, s(-2))], 16, "C4").unwrap(),
    ];
    let lambda = vec![s(1), s(1), s(1), s(3)];
    let d = vec![
        Branch::smooth(vec![(1, s(-1))], 16, "D1").unwrap(),
        Branch::smooth(vec![(2, s(-1)), (3, s(-1))], 16, "D2").unwrap(),
        Branch::smooth(vec![(2, s(1)), (3, s(-1))], 16, "D3").unwrap(),
    ];
    let mu = vec![s(3), s(3), s(1)];
    let f = FoliationModel::logarithmic(c, lambda).unwrap();
    let g = FoliationModel::logarithmic(d, mu).unwrap();
    let t0 = Instant::now();
    let a = Analysis::new(f, g).unwrap();
    println!("analysis: {:?}", t0.elapsed());
    let t1 = Instant::now();
    let dec = a.decompose().unwrap();
    println!("decompose: {:?}", t1.elapsed());
    let t2 = Instant::now();
    let mf = a.milnor_f().unwrap();
    println!("milnor_f: {:?} = {}", t2.elapsed(), mf);
    let t3 = Instant::now();
    let mg = a.milnor_g().unwrap();
    println!("milnor_g: {:?} = {}", t3.elapsed(), mg);
    let t4 = Instant::now();
    let checks = a.intersection_checks(&dec).unwrap();
    println!("checks: {:?} ({} records)", t4.elapsed(), checks.len());
}
