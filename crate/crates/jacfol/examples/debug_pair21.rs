use jacfol::branch::Branch;
use jacfol::foliation::FoliationModel;
use jacfol::jac::Analysis;
use jacfol::scalar::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

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

fn random_log_pair(rng: &mut ChaCha8Rng, hamiltonian: bool) -> (FoliationModel, FoliationModel) {
    loop {
        let rc = rng.gen_range(1..=5usize);
        let sc = rng.gen_range(1..=5usize);
        let c = random_curve(rng, "C", rc);
        let d = random_curve(rng, "D", sc);
        let clash = c.iter().any(|cb| d.iter().any(|db| cb.terms == db.terms));
        if clash {
            continue;
        }
        let weights = |n: usize, rng: &mut ChaCha8Rng| -> Vec<Scalar> {
            (0..n)
                .map(|_| {
                    if hamiltonian {
                        Scalar::one()
                    } else {
                        s(rng.gen_range(1..=5i64))
                    }
                })
                .collect()
        };
        let wl = weights(rc, rng);
        let wm = weights(sc, rng);
        return (
            FoliationModel::logarithmic(c, wl).unwrap(),
            FoliationModel::logarithmic(d, wm).unwrap(),
        );
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(40608);
    for k in 0..=21 {
        let hamiltonian = k % 2 == 0;
        let (f, g) = random_log_pair(&mut rng, hamiltonian);
        if k < 21 {
            continue;
        }
        for b in f.separatrices() {
            println!("C branch {}: {:?}", b.label, b.terms);
        }
        println!("lambda: {:?}", f.weights());
        for b in g.separatrices() {
            println!("D branch {}: {:?}", b.label, b.terms);
        }
        println!("mu: {:?}", g.weights());
        let a = Analysis::with_options(f, g, None, false).unwrap();
        let dec = a.decompose().unwrap();
        println!("m0(J) = {}, residual = {}", dec.jacobian_multiplicity, dec.residual_multiplicity);
        for p in &dec.packets {
            println!(
                "packet v={} nc={} c={}",
                p.valuation, p.nc_multiplicity, p.c_multiplicity
            );
            let nu_c = a.curvette_intersection(p.base_divisor, 0).unwrap();
            let nu_d = a.curvette_intersection(p.base_divisor, 1).unwrap();
            println!("  nu_C = {}, nu_D = {}", nu_c, nu_d);
        }
        println!("mu_F = {}, mu_G = {}", a.milnor_f().unwrap(), a.milnor_g().unwrap());
        // (J, C) and (J, D)
        let mut jc = 0u64;
        for b in a.f.separatrices() {
            let v = a.jacobian_intersection(b).unwrap();
            println!("(J, {}) = {}", b.label, v);
            jc += v;
        }
        let mut jd = 0u64;
        for b in a.g.separatrices() {
            let v = a.jacobian_intersection(b).unwrap();
            println!("(J, {}) = {}", b.label, v);
            jd += v;
        }
        println!("(J,C) - (J,D) = {} - {} = {}", jc, jd, jc as i64 - jd as i64);
        // per-divisor delta table summary
        for d in &a.res.upstairs.divisors {
            let row = a.delta.row(d.id);
            println!(
                "divisor v={} b={} class={:?} t*={}",
                d.valuation,
                d.b(),
                row.class(),
                a.me[d.id].t_star
            );
        }
    }
}
