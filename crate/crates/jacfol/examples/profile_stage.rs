use jacfol::branch::Branch;
use jacfol::foliation::{assemble_logarithmic, FoliationModel};
use jacfol::scalar::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn random_smooth_branch(rng: &mut ChaCha8Rng, label: &str) -> Branch {
    let n_terms = rng.gen_range(1..=3usize);
    let mut exps: Vec<u32> = Vec::new();
    while exps.len() < n_terms {
        let e = rng.gen_range(1..=6u32);
        if !exps.contains(&e) {
            exps.push(e);
        }
    }
    exps.sort_unstable();
    let terms: Vec<(u32, Scalar)> = exps
        .into_iter()
        .map(|e| {
            let mut c = 0i64;
            while c == 0 {
                c = rng.gen_range(-5..=5i64);
            }
            (e, s(c))
        })
        .collect();
    Branch::smooth(terms, 16, label).unwrap()
}

fn random_curve(rng: &mut ChaCha8Rng, prefix: &str, count: usize) -> Vec<Branch> {
    let mut out: Vec<Branch> = Vec::new();
    while out.len() < count {
        let b = random_smooth_branch(rng, &format!("{}{}", prefix, out.len() + 1));
        if out.iter().all(|o| o.terms != b.terms) {
            out.push(b);
        }
    }
    out
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let rc = rng.gen_range(1..=5usize);
    let sc = rng.gen_range(1..=5usize);
    let c = random_curve(&mut rng, "C", rc);
    let d = random_curve(&mut rng, "D", sc);
    eprintln!("curves: {} and {} branches", rc, sc);
    let wl: Vec<Scalar> = (0..rc).map(|_| s(rng.gen_range(1..=5i64))).collect();
    let wm: Vec<Scalar> = (0..sc).map(|_| s(rng.gen_range(1..=5i64))).collect();
    let t0 = Instant::now();
    let fa = assemble_logarithmic(&c, &wl).unwrap();
    let ga = assemble_logarithmic(&d, &wm).unwrap();
    eprintln!(
        "assemble: {:?}  |A_f|={} |B_f|={} deg_f={:?} |A_g|={} deg_g={:?}",
        t0.elapsed(),
        fa.a.terms.len(),
        fa.b.terms.len(),
        fa.a.degree(),
        ga.a.terms.len(),
        ga.a.degree()
    );
    let t1 = Instant::now();
    let _fs = fa.saturate();
    eprintln!("saturate f: {:?}", t1.elapsed());
    let t2 = Instant::now();
    let _gs = ga.saturate();
    eprintln!("saturate g: {:?}", t2.elapsed());
    let t3 = Instant::now();
    let f = FoliationModel::logarithmic(c, wl).unwrap();
    let g = FoliationModel::logarithmic(d, wm).unwrap();
    let a = jacfol::jac::Analysis::with_options(f, g, None, false).unwrap();
    eprintln!("analysis total: {:?} (j terms {})", t3.elapsed(), a.jacobian.terms.len());
}
