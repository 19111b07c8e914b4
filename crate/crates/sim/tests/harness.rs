use lresc_core::classical::{concatenate, hadamard_family, repetition, ConcatSpec};
use lresc_core::css::{hgp, CssCode, Sector};
use lresc_core::BitVec;
use lresc_decode::{sector_failure, DecoderConfig, MatchingDecoder};
use lresc_sim::{
    break_even, break_even_bracket, run, run_code_capacity, run_phenomenological, trial_seed, write_csv, write_json,
    Experiment, SimReport,
};

fn surface(d: usize) -> CssCode {
    let rep = repetition(d).unwrap();
    hgp(&rep, &rep)
}

fn lresc(c: usize) -> CssCode {
    let parent = concatenate(&ConcatSpec::new(hadamard_family(2).unwrap(), c)).unwrap();
    hgp(&parent, &parent)
}

fn csv_bytes(reports: &[SimReport]) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(reports, &mut out).unwrap();
    out
}

#[test]
fn zero_noise_never_fails() {
    let cc = Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.0], 200, 1);
    let r = run_code_capacity(&surface(3), &cc, None).unwrap();
    assert_eq!(r.points[0].failures, 0);
    let ph = Experiment::phenomenological(DecoderConfig::default().with_window(2), vec![0.0], 20, 5, 1);
    let r = run_phenomenological(&lresc(2), &ph, None).unwrap();
    assert_eq!(r.points[0].failures, 0);
    assert_eq!(r.points[0].surviving_cycles, 100);
    let be = break_even(&r);
    assert!(!be[0].below);
}

#[test]
fn experiment_validation() {
    let code = surface(3);
    let bad = [
        Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.1, 0.05], 10, 0),
        Experiment::code_capacity(DecoderConfig::mwpm(), vec![], 10, 0),
        Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.1], 0, 0),
        Experiment::phenomenological(DecoderConfig::mwpm(), vec![0.1], 10, 0, 0),
        Experiment::code_capacity(DecoderConfig::mwpm().with_window(0), vec![0.1], 10, 0),
    ];
    for exp in bad {
        assert!(run(&code, &exp, None).is_err(), "{exp:?}");
    }
    let ph = Experiment::phenomenological(DecoderConfig::mwpm(), vec![0.1], 10, 2, 0);
    assert!(run_code_capacity(&code, &ph, None).is_err());
}

#[test]
fn seeds_are_distinct_and_stable() {
    let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| trial_seed(42, i)).collect();
    assert_eq!(seeds.len(), 10_000);
    assert_eq!(trial_seed(42, 7), trial_seed(42, 7));
    assert_ne!(trial_seed(42, 7), trial_seed(43, 7));
}

#[test]
fn reruns_and_thread_counts_give_identical_csv() {
    let exp = Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.03, 0.08], 3000, 99);
    let a = run(&surface(5), &exp, Some(1)).unwrap();
    let b = run(&surface(5), &exp, Some(3)).unwrap();
    let c = run(&surface(5), &exp, None).unwrap();
    assert_eq!(csv_bytes(&[a.clone()]), csv_bytes(&[b]));
    assert_eq!(csv_bytes(&[a.clone()]), csv_bytes(&[c]));
    let other = Experiment { seed: 100, ..exp };
    let d = run(&surface(5), &other, None).unwrap();
    assert_ne!(a.config_hash, d.config_hash);

    let ph = Experiment::phenomenological(DecoderConfig::default().with_window(2), vec![0.004], 40, 6, 5);
    let x = run(&lresc(2), &ph, Some(1)).unwrap();
    let y = run(&lresc(2), &ph, Some(2)).unwrap();
    assert_eq!(csv_bytes(&[x]), csv_bytes(&[y]));
}

#[test]
fn report_files() {
    let exp = Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.01, 0.05], 500, 3);
    let reports = vec![run(&surface(3), &exp, None).unwrap(), run(&surface(5), &exp, None).unwrap()];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    write_csv(&reports, std::fs::File::create(&path).unwrap()).unwrap();
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let headers = rd.headers().unwrap().clone();
    for col in ["code", "model", "decoder", "p", "window", "failures", "failure_rate", "std_error", "seed", "config_hash"] {
        assert!(headers.iter().any(|h| h == col), "{col}");
    }
    assert_eq!(rd.records().count(), 4);
    let json = dir.path().join("r.json");
    write_json(&reports, std::fs::File::create(&json).unwrap()).unwrap();
    let back: Vec<SimReport> = serde_json::from_reader(std::fs::File::open(&json).unwrap()).unwrap();
    assert_eq!(back, reports);
    for r in &reports {
        for pt in &r.points {
            assert!(pt.failures <= pt.trials);
            let f = pt.failures as f64 / pt.trials as f64;
            assert!((pt.std_error - (f * (1.0 - f) / pt.trials as f64).sqrt()).abs() < 1e-15);
        }
    }
}

/// Probability that a depolarizing pattern on the d = 3 surface code defeats
/// matching, from the exhaustive weight-2 failure count; weight >= 3 mass is
/// returned separately as an upper bound on the remainder.
fn weight_two_prediction(code: &CssCode, p: f64) -> (f64, f64) {
    let n = code.n();
    let basis = code.logical_basis().unwrap();
    let decs: Vec<MatchingDecoder> = [Sector::X, Sector::Z]
        .iter()
        .map(|&s| MatchingDecoder::unweighted(code.detector(s)).unwrap())
        .collect();
    let fails = |x: &BitVec, z: &BitVec| {
        [(Sector::X, x, &decs[0]), (Sector::Z, z, &decs[1])].iter().any(|&(s, e, d)| {
            let c = d.decode(&code.detector(s).mul_vec(e)).unwrap().correction;
            sector_failure(code, &basis, s, &e.xor(&c)).unwrap()
        })
    };
    let pauli = |q: usize, t: u8, x: &mut BitVec, z: &mut BitVec| {
        if t != 2 {
            x.flip(q);
        }
        if t != 0 {
            z.flip(q);
        }
    };
    for q in 0..n {
        for t in 0..3 {
            let (mut x, mut z) = (BitVec::zeros(n), BitVec::zeros(n));
            pauli(q, t, &mut x, &mut z);
            assert!(!fails(&x, &z));
        }
    }
    let mut count = 0u32;
    for a in 0..n {
        for b in a + 1..n {
            for ta in 0..3 {
                for tb in 0..3 {
                    let (mut x, mut z) = (BitVec::zeros(n), BitVec::zeros(n));
                    pauli(a, ta, &mut x, &mut z);
                    pauli(b, tb, &mut x, &mut z);
                    if fails(&x, &z) {
                        count += 1;
                    }
                }
            }
        }
    }
    assert!(count > 0);
    let nf = n as f64;
    let p2 = count as f64 * (p / 3.0).powi(2) * (1.0 - p).powi(n as i32 - 2);
    let tail = 1.0
        - (1.0 - p).powi(n as i32)
        - nf * p * (1.0 - p).powi(n as i32 - 1)
        - nf * (nf - 1.0) / 2.0 * p * p * (1.0 - p).powi(n as i32 - 2);
    (p2, tail)
}

#[test]
fn distance_three_rate_matches_weight_two_enumeration() {
    let code = surface(3);
    let p = 0.01;
    let (p2, tail) = weight_two_prediction(&code, p);
    let exp = Experiment::code_capacity(DecoderConfig::mwpm(), vec![p], 400_000, 17);
    let pt = run(&code, &exp, None).unwrap().points[0].clone();
    let sigma = (p2 * (1.0 - p2) / pt.trials as f64).sqrt();
    assert!(pt.failure_rate >= p2 - 3.0 * sigma, "{} < {p2}", pt.failure_rate);
    assert!(pt.failure_rate <= p2 + tail + 3.0 * sigma, "{} > {p2} + {tail}", pt.failure_rate);
}

#[test]
fn larger_surface_code_fails_less() {
    let exp = Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.05], 20_000, 8);
    let r3 = run(&surface(3), &exp, None).unwrap().points[0].clone();
    let r5 = run(&surface(5), &exp, None).unwrap().points[0].clone();
    let gap = r3.failure_rate - r5.failure_rate;
    assert!(gap > 2.0 * (r3.std_error.powi(2) + r5.std_error.powi(2)).sqrt());
}

#[test]
fn failure_rate_grows_with_p() {
    let exp = Experiment::code_capacity(DecoderConfig::mwpm(), vec![0.02, 0.05, 0.08, 0.11], 20_000, 4);
    let r = run(&surface(5), &exp, None).unwrap();
    for w in r.points.windows(2) {
        assert!(w[1].failure_rate + 2.0 * w[1].std_error >= w[0].failure_rate);
    }
    let bp = Experiment::code_capacity(DecoderConfig::default(), vec![0.02, 0.06, 0.1], 2000, 4);
    let r = run(&lresc(2), &bp, None).unwrap();
    for w in r.points.windows(2) {
        assert!(w[1].failure_rate + 2.0 * w[1].std_error >= w[0].failure_rate);
    }
    let be = break_even(&r);
    assert_eq!(be.len(), 3);
    if let Some((lo, hi)) = break_even_bracket(&be) {
        assert!(lo < hi);
    }
}

#[test]
fn phenomenological_accounting() {
    let exp = Experiment::phenomenological(DecoderConfig::mwpm().with_window(2), vec![0.01, 0.03], 200, 8, 2);
    let r = run(&surface(5), &exp, None).unwrap();
    for pt in &r.points {
        assert!(pt.failures <= pt.trials);
        assert!(pt.surviving_cycles <= pt.trials * 8);
        assert!(pt.surviving_cycles >= (pt.trials - pt.failures) * 8);
        assert!(pt.per_cycle_rate <= pt.failure_rate);
    }
    assert!(r.points[1].failures >= r.points[0].failures);
}
