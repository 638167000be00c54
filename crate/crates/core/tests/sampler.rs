//! Offspring sampler against the generating function.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gwbound::pgf::{phi_nb, phi_nb_standard, Params};
use gwbound::simulate::{empirical_pgf, NbSampler, DIRECT_LIMIT};

const DRAWS: usize = 1_000_000;

fn draws(r: u32, zeta: f64, seed: u64) -> (Params<f64>, NbSampler, Vec<u64>) {
    let p = Params::new(r, zeta).unwrap();
    let s = NbSampler::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ks = (0..DRAWS).map(|_| s.sample(&mut rng)).collect();
    (p, s, ks)
}

#[test]
fn mean_within_four_sigma() {
    for (r, z) in [(2, 0.5), (3, 0.7), (5, 0.9), (12, 0.2)] {
        let (p, s, ks) = draws(r, z, 11);
        let n = ks.len() as f64;
        let mean = ks.iter().sum::<u64>() as f64 / n;
        let q = s.success();
        let sigma = (r as f64 * (1.0 - q) / (q * q) / n).sqrt();
        assert!((mean - p.nb_mean()).abs() < 4.0 * sigma, "r={r} ζ={z}: {mean} vs {}", p.nb_mean());
    }
}

#[test]
fn zero_class_matches_both_forms() {
    for (r, z) in [(2, 0.5), (3, 0.7), (5, 0.9)] {
        let (p, s, ks) = draws(r, z, 12);
        let want = s.success().powi(r as i32);
        assert!((want - phi_nb(&p, &0.0).unwrap()).abs() < 1e-14);
        assert!((want - phi_nb_standard(&p, &0.0).unwrap()).abs() < 1e-14);
        let n = ks.len() as f64;
        let freq = ks.iter().filter(|&&k| k == 0).count() as f64 / n;
        let sigma = (want * (1.0 - want) / n).sqrt();
        assert!((freq - want).abs() < 4.0 * sigma, "r={r} ζ={z}: {freq} vs {want}");
    }
}

#[test]
fn empirical_pgf_tracks_phi_nb() {
    for (r, z) in [(2, 0.5), (4, 0.3), (7, 0.8)] {
        let p = Params::new(r, z).unwrap();
        let s = NbSampler::new(&p);
        for sample in empirical_pgf(&p, &s, 13, DRAWS as u64).unwrap() {
            let dev = (sample.empirical - sample.phi_nb).abs() / sample.std_err;
            assert!(dev < 4.0, "r={r} ζ={z} x={}: {dev}σ", sample.x);
        }
    }
}

#[test]
fn mixture_path_matches_pgf_power() {
    // totals of z individuals have pgf φ_NB(x)^z; z r is above the direct limit
    let p = Params::new(3, 0.6).unwrap();
    let s = NbSampler::new(&p);
    let z = 40u64;
    assert!(z * 3 > DIRECT_LIMIT);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 200_000;
    let totals: Vec<u64> = (0..n).map(|_| s.total(z, &mut rng)).collect();
    for x in [0.9, 0.95, 0.98, 0.99] {
        let want = phi_nb(&p, &x).unwrap().powi(z as i32);
        let vals: Vec<f64> = totals.iter().map(|&k| x.powf(k as f64)).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let dev = (mean - want).abs() / (var / n as f64).sqrt();
        assert!(dev < 5.0, "x={x}: {mean} vs {want} ({dev}σ)");
    }
}
