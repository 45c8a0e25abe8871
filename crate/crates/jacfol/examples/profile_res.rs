use jacfol::branch::Branch;
use jacfol::foliation::FoliationModel;
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
    let f = FoliationModel::logarithmic(c, lambda).unwrap();
    let form = f.form().unwrap();
    println!("deg A = {:?} ({} terms), deg B = {:?} ({} terms)", form.a.degree(), form.a.terms.len(), form.b.degree(), form.b.terms.len());
    println!("deg_y A = {:?}, deg_x A = {:?}", form.a.deg_y(), form.a.deg_x());
    let t0 = Instant::now();
    let sat = form.saturate();
    println!("saturate: {:?}", t0.elapsed());
    let t1 = Instant::now();
    let r = sat.a.resultant_y(&sat.b).unwrap();
    println!("resultant: {:?}, ord = {:?}", t1.elapsed(), r.coeffs.iter().position(|c| !c.is_zero()));
}
