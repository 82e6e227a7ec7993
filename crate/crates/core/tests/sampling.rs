use cyclespin::mc::{self, CycleStats, McConfig};

/// Transition matrix of the cycle-type chain on S_3 (identity, transposition,
/// 3-cycle) after time `t`, by a Taylor series of the generator exponential.
fn s3_law(t: f64) -> [f64; 3] {
    let q = [[-3.0, 3.0, 0.0], [1.0, -3.0, 2.0], [0.0, 3.0, -3.0]];
    let mut row = [1.0, 0.0, 0.0];
    let mut term = row;
    for k in 1..60 {
        let mut next = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                next[j] += term[i] * q[i][j] * t / k as f64;
            }
        }
        term = next;
        for j in 0..3 {
            row[j] += term[j];
        }
    }
    row
}

#[test]
fn s3_cycle_type_frequencies() {
    let cfg = McConfig::new(3, 1.0, 2.0, 100_000, 31);
    let mut counts = [0usize; 3];
    for chunk in 0..cfg.chunk_count() {
        mc::for_each_sample(&cfg, 1.0, chunk, |_, sigma| {
            let idx = match CycleStats::of(sigma).ell() {
                3 => 0,
                2 => 1,
                _ => 2,
            };
            counts[idx] += 1;
        });
    }
    let law = s3_law(2.0 / 3.0);
    let total = cfg.samples as f64;
    for i in 0..3 {
        let sd = (total * law[i] * (1.0 - law[i])).sqrt();
        assert!(
            (counts[i] as f64 - total * law[i]).abs() <= 4.0 * sd,
            "class {i}"
        );
    }
}

#[test]
fn estimates_are_reproducible_and_chunk_stable() {
    let mut cfg = McConfig::new(6, 2.0, 1.0, 20_000, 99);
    cfg.chunk_size = 1000;
    let a = mc::estimate_z(&cfg).unwrap();
    let b = mc::estimate_z(&cfg).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    // chunks reduced out of order but concatenated in index order give the same draws
    let mut parts: Vec<(usize, Vec<mc::Draw>)> = (0..cfg.chunk_count())
        .rev()
        .map(|c| (c, mc::draws_for_chunk(&cfg, 1.0, c, None)))
        .collect();
    parts.sort_by_key(|p| p.0);
    let draws: Vec<mc::Draw> = parts.into_iter().flat_map(|p| p.1).collect();
    assert_eq!(mc::reduce_z(&draws, 2.0), a);
}

#[test]
fn mean_event_count_matches() {
    let mut rng = mc::chunk_rng(8, 0);
    let trials = 20_000;
    let total: usize = (0..trials)
        .map(|_| mc::sample_events(12, 1.5, &mut rng).len())
        .sum();
    let mean = total as f64 / trials as f64;
    // Poisson with mean (n-1) beta / 2 = 8.25
    let sd = (8.25f64 / trials as f64).sqrt();
    assert!((mean - 8.25).abs() < 4.0 * sd);
}

#[test]
fn subcritical_tail_is_small() {
    let cfg = McConfig::new(400, 2.0, 1.0, 20_000, 2024);
    let tail = mc::weighted_tail(&cfg, 20, 0.5).unwrap();
    assert!(tail.estimate <= 0.01);
    assert!(tail.ess >= 100.0 && tail.reliable);
}

#[test]
fn tilted_and_plain_sampling_agree() {
    let mut cfg = McConfig::new(8, 2.0, 1.0, 100_000, 5);
    let plain = mc::estimate_z(&cfg).unwrap();
    cfg.proposal_rate = Some(0.5);
    let tilted = mc::estimate_z(&cfg).unwrap();
    let se = (plain.std_error.powi(2) + tilted.std_error.powi(2)).sqrt();
    assert!((plain.mean - tilted.mean).abs() <= 4.0 * se);
}
