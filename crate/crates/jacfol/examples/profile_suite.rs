use jacfol::branch::Branch;
use jacfol::foliation::FoliationModel;
use jacfol::jac::Analysis;
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
    let mut total_analysis = std::time::Duration::ZERO;
    let mut total_verify = std::time::Duration::ZERO;
    let mut total_checks = std::time::Duration::ZERO;
    for k in 0..20 {
        let rc = rng.gen_range(1..=5usize);
        let sc = rng.gen_range(1..=5usize);
        let c = random_curve(&mut rng, "C", rc);
        let d = random_curve(&mut rng, "D", sc);
        if c.iter().any(|cb| d.iter().any(|db| cb.terms == db.terms)) {
            continue;
        }
        let wl: Vec<Scalar> = (0..rc).map(|_| s(rng.gen_range(1..=5i64))).collect();
        let wm: Vec<Scalar> = (0..sc).map(|_| s(rng.gen_range(1..=5i64))).collect();
        let f = FoliationModel::logarithmic(c, wl).unwrap();
        let g = FoliationModel::logarithmic(d, wm).unwrap();
        eprintln!("pair {} start (|C|={} |D|={})", k, rc, sc);
        let t0 = Instant::now();
        let a = Analysis::with_options(f, g, None, k % 10 == 0).unwrap();
        eprintln!("  analysis done {:?}", t0.elapsed());
        let t1 = Instant::now();
        total_analysis += t1 - t0;
        for dv in a.res.upstairs.bifurcation_divisors() {
            if a.delta.row(dv).is_non_collinear() {
                let _ = a.verify_divisor(dv).unwrap();
            }
        }
        eprintln!("  verify done");
        let t2 = Instant::now();
        total_verify += t2 - t1;
        let dec = a.decompose().unwrap();
        eprintln!("  decompose done");
        let _ = a.intersection_checks(&dec).unwrap();
        eprintln!("  checks done");
        total_checks += t2.elapsed();
        println!(
            "pair {}: j has {} terms | analysis {:?} verify {:?} checks {:?}",
            k,
            a.jacobian.terms.len(),
            t1 - t0,
            t2 - t1,
            t2.elapsed()
        );
    }
    println!(
        "TOTALS analysis: {:?}, verify: {:?}, checks: {:?}",
        total_analysis, total_verify, total_checks
    );
}
