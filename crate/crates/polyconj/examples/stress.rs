//! Timing probe: planted conjugate pairs shaped like the round-trip
//! acceptance criterion, per field, with verdict and witness verification.

use polyconj::conjugacy::{decide, verify_witness, Matrix2, Verdict};
use polyconj::gf::Field;
use polyconj::poly::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn rand_poly(f: &Field, max_deg: i64, rng: &mut ChaCha8Rng) -> Poly {
    let els: Vec<_> = f.elements().collect();
    let coeffs = (0..=max_deg).map(|_| els[rng.gen_range(0..els.len())]).collect();
    Poly::from_coeffs(f, coeffs)
}

fn rand_factor(f: &Field, rng: &mut ChaCha8Rng) -> Matrix2 {
    let one = Poly::one(f);
    let zero = Poly::zero(f);
    match rng.gen_range(0..4) {
        0 => Matrix2::new([
            one.clone(),
            rand_poly(f, 2, rng),
            zero.clone(),
            one.clone(),
        ]),
        1 => Matrix2::new([
            one.clone(),
            zero.clone(),
            rand_poly(f, 2, rng),
            one.clone(),
        ]),
        2 => Matrix2::new([zero.clone(), one.clone(), one.clone(), zero.clone()]),
        _ => {
            let els: Vec<_> = f.elements().collect();
            let c = els[rng.gen_range(1..els.len())];
            Matrix2::new([
                Poly::constant(f, c),
                zero.clone(),
                zero.clone(),
                one.clone(),
            ])
        }
    }
}

fn main() {
    let budget: u64 = 1 << 32;
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    for (p, k) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f = Field::new(p, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE + (p * 10 + k) as u64);
        let start = Instant::now();
        let mut worst = std::time::Duration::ZERO;
        let mut cases = std::collections::BTreeMap::new();
        for i in 0..n {
            let a = Matrix2::new([
                rand_poly(&f, 2, &mut rng),
                rand_poly(&f, 2, &mut rng),
                rand_poly(&f, 2, &mut rng),
                rand_poly(&f, 2, &mut rng),
            ]);
            let mut u = Matrix2::identity(&f);
            for _ in 0..rng.gen_range(1..=4) {
                u = &u * &rand_factor(&f, &mut rng);
            }
            let b = &(&u * &a) * &u.inverse().unwrap();
            let t0 = Instant::now();
            let cert = match decide(&a, &b, budget) {
                Ok(c) => c,
                Err(e) => {
                    println!("q={} case {i}: ERROR {e}", f.q());
                    println!("  a={a}\n  b={b}\n  planted u={u}");
                    continue;
                }
            };
            let dt = t0.elapsed();
            if dt > worst {
                worst = dt;
            }
            *cases.entry(cert.case_label).or_insert(0u32) += 1;
            if cert.verdict != Verdict::Conjugate {
                println!("q={} case {i}: WRONG VERDICT", f.q());
                println!("  a={a}\n  b={b}\n  planted u={u}");
                continue;
            }
            let w = cert.witness.unwrap();
            assert!(verify_witness(&a, &b, &w));
        }
        println!(
            "q={}: {n} pairs in {:?} (worst single {:?}), cases {:?}",
            f.q(),
            start.elapsed(),
            worst,
            cases
        );
    }
}
