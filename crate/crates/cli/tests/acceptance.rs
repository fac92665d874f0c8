//! Acceptance criteria 1–8. Each test prints one `criterion N: PASS|FAIL`
//! line and fails when the criterion is not met.
//!
//! Run with `cargo test -p duplex-cli --test acceptance -- --nocapture`.

use duplex_cli::{dispatch, output::to_csv, params::Params, resolve, run_experiment};
use duplex_core::capacity::*;
use duplex_core::experiments::*;
use duplex_core::linalg::{sample_gaussian_matrix, sample_haar_unitary, ComplexMatrix};
use duplex_core::rates::{downlink_rate_floor, downlink_rate_floor_weighted};
use duplex_core::scheduler::BeamGains;
use duplex_core::streams::StreamKey;
use duplex_core::{Cell, EpsilonSchedule, NetworkConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

const SEED: u64 = 2024;

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn verdict(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_gap_shrinks_with_n() {
    let cfg = NetworkConfig { n: 16, antennas: 2, downlink_power: 10.0, uplink_power: 10.0, seed: SEED, ..Default::default() };
    assert_eq!(cfg.epsilon, EpsilonSchedule::Decaying { c: 1.0 });
    let t = run_gap_vs_n(&cfg, &[16, 64, 256, 1024], 500, 1.0, workers()).unwrap();
    let b = t.column_index("benchmark").unwrap();
    assert!(t.rows.iter().all(|row| row[b] == Cell::Text("exact".into())));
    let p = t.floats("p_gap_exceeds_delta");
    let se = t.floats("se_p_gap_exceeds_delta");
    let mean = t.floats("mean_gap");
    let monotone = (1..p.len()).all(|i| p[i] <= p[i - 1] + se[i].max(se[i - 1]));
    let shrink = mean[3] < 0.6 * mean[0];
    verdict(
        1,
        monotone && shrink,
        format!("P(gap>1)={p:?} mean_gap={mean:?} ratio={:.4} (need < 0.6)", mean[3] / mean[0]),
    );
}

#[test]
fn criterion_2_candidate_probabilities() {
    let t = run_candidate_prob_check(3, 0.5, 4, 100_000, SEED, workers()).unwrap();
    let z = t.floats("z");
    let emp = t.floats("empirical");
    let ana = t.floats("analytic");
    verdict(2, z.iter().all(|z| z.abs() <= 3.0), format!("empirical={emp:?} analytic={ana:?} z={z:?}"));
}

#[test]
fn criterion_3_per_stream_rate_stabilizes() {
    let cfg = NetworkConfig {
        n: 64,
        antennas: 2,
        downlink_power: 10.0,
        uplink_power: 10.0,
        epsilon: EpsilonSchedule::Constant { eps: 4.0 },
        seed: SEED,
        ..Default::default()
    };
    let t = run_antenna_scaling(&cfg, 0.5, &[64, 256, 1024, 4096], 200, workers()).unwrap();
    let r = t.floats("mean_rate_per_stream");
    let change = (r[3] - r[2]).abs() / r[2];
    verdict(
        3,
        r.iter().all(|&v| v > 0.0) && change < 0.15,
        format!("rate/stream={r:?} M={:?} last relative change={change:.4} (need < 0.15)", t.floats("M")),
    );
}

#[test]
fn criterion_4_clustered_gap_slope() {
    let mut slopes = Vec::new();
    for m in [1, 2, 4] {
        let t = run_clustered_snr_sweep(1.0, 1.0, m, &[1e2, 1e3, 1e4, 1e5, 1e6], SweepOptions::default()).unwrap();
        slopes.push(t.floats("topdecade_slope")[0]);
    }
    verdict(4, slopes.iter().all(|s| (0.95..=1.05).contains(s)), format!("slopes={slopes:?}"));
}

#[test]
fn criterion_5_jensen_oracle() {
    let inputs = ClusteredBoundInputs { clusters: 2, h: 1.0, g: 1.0, downlink_power: 4.0, uplink_power: 4.0 };
    let grid = 64;
    let mut best = (f64::NEG_INFINITY, [0usize; 2], [0.0f64; 2]);
    for k0 in 0..=2usize {
        for k1 in 0..=2 - k0 {
            for i in 0..=grid {
                for j in 0..=grid - i {
                    let pm = [4.0 * i as f64 / grid as f64, 4.0 * j as f64 / grid as f64];
                    let v = clustered_time_objective(&[k0, k1], &pm, &inputs).unwrap();
                    if v > best.0 {
                        best = (v, [k0, k1], pm);
                    }
                }
            }
        }
    }
    let bound = clustered_fd_upper_bound(&inputs);
    let pass = best.1 == [1, 1] && best.2 == [2.0, 2.0] && (best.0 - bound).abs() <= 1e-2;
    verdict(5, pass, format!("argmax k={:?} Pm={:?} value={} bound={bound}", best.1, best.2, best.0));
}

#[test]
fn criterion_6_sidechannel_bound() {
    let mut rng = StreamKey::new(SEED, 0, "acceptance/sidechannel").rng();
    let log_uniform = |rng: &mut duplex_core::streams::StreamRng| 10f64.powf(rng.random_range(-1.0..=3.0));
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let m = rng.random_range(1..=8usize);
        let (h, p, pbar) = (log_uniform(&mut rng), log_uniform(&mut rng), log_uniform(&mut rng));
        let d = run_sidechannel_check(&[m], h, p, pbar).unwrap().floats("difference")[0];
        worst = worst.max(d - 2.0 * m as f64 * std::f64::consts::LN_2);
    }
    let mut rel = Vec::new();
    for m in 1..=8usize {
        let d = run_sidechannel_check(&[m], 1.0, 1e6 * m as f64, 1e6).unwrap().floats("difference")[0];
        let target = 2.0 * m as f64 * std::f64::consts::LN_2;
        rel.push((d - target).abs() / target);
    }
    let pass = worst <= 1e-12 && rel.iter().all(|&r| r < 0.01);
    verdict(6, pass, format!("max(diff - 2M ln2)={worst:.3e} high-SNR relative error={rel:.4?}"));
}

fn gaussian(rows: usize, cols: usize, seed: u64, label: &str) -> ComplexMatrix {
    sample_gaussian_matrix(rows, cols, &mut StreamKey::new(seed, 0, label).rng())
}

fn eigen_logdet(a: &ComplexMatrix, cols: &[usize], c: f64) -> f64 {
    let sub = DMatrix::from_fn(a.rows(), cols.len(), |r, k| a[(r, cols[k])]);
    let herm = DMatrix::<Complex64>::identity(a.rows(), a.rows()) + (&sub * sub.adjoint()) * Complex64::new(c, 0.0);
    herm.symmetric_eigen().eigenvalues.iter().map(|l| l.ln()).sum()
}

fn bc_grid(h: &ComplexMatrix, p: f64) -> f64 {
    let steps = 100;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        for j in 0..=steps - i {
            let q = [i, j, steps - i - j].map(|s| p * s as f64 / steps as f64);
            // I + Σ q_k h_k h_k*, with h_k* the k-th row.
            let (mut a, mut b, mut d) = (1.0, Complex64::new(0.0, 0.0), 1.0);
            for (k, &qk) in q.iter().enumerate() {
                let (x, y) = (h[(k, 0)].conj(), h[(k, 1)].conj());
                a += qk * x.norm_sqr();
                d += qk * y.norm_sqr();
                b += x * y.conj() * qk;
            }
            best = best.max((a * d - b.norm_sqr()).ln());
        }
    }
    best
}

#[test]
fn criterion_7_capacity_oracles() {
    let mut bc_err: f64 = 0.0;
    for s in 0..20 {
        let h = gaussian(3, 2, s, "acceptance/bc");
        let dpc = bc_sum_capacity_dpc(&h, 5.0, DEFAULT_BC_TOL, DEFAULT_BC_MAX_ITERS).unwrap();
        bc_err = bc_err.max((dpc - bc_grid(&h, 5.0)).abs());
    }
    let mut mac_err: f64 = 0.0;
    for s in 0..20 {
        let h = gaussian(2, 6, s, "acceptance/mac");
        let exact = mac_m_sum_capacity_exact(&h, 3.0, 2, DEFAULT_SUBSET_CAP).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for i in 0..6 {
            for j in i + 1..6 {
                oracle = oracle.max(eigen_logdet(&h, &[i, j], 3.0));
            }
        }
        mac_err = mac_err.max((exact - oracle).abs());
    }
    let mut rng = StreamKey::new(SEED, 0, "acceptance/ordering").rng();
    let mut violations = 0;
    for s in 0..1000u64 {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(m..=8usize);
        let power = 10f64.powf(rng.random_range(-1.0..=2.0));
        let up = gaussian(m, n, s, "acceptance/ordering-mac");
        let down = gaussian(n, m, s, "acceptance/ordering-bc");
        if mac_m_sum_capacity_exact(&up, power, m, DEFAULT_SUBSET_CAP).unwrap() > mac_m_capacity_bound(&up, power, m) + 1e-12 {
            violations += 1;
        }
        if bc_sum_capacity_dpc(&down, power, DEFAULT_BC_TOL, DEFAULT_BC_MAX_ITERS).unwrap()
            > bc_capacity_bound(&down, power, m) + DEFAULT_BC_TOL
        {
            violations += 1;
        }
    }
    let pass = bc_err < 1e-3 && mac_err < 1e-9 && violations == 0;
    verdict(7, pass, format!("bc vs grid max err={bc_err:.3e} mac vs eigen max err={mac_err:.3e} ordering violations={violations}"));
}

fn structural_checks(cfg: &NetworkConfig, trials: u64, literal_floor: bool) -> (usize, usize, usize, f64) {
    let (mut infeasible, mut floor_violations, mut checked) = (0, 0, 0);
    let mut min_gap = f64::INFINITY;
    let m = cfg.antennas;
    for trial in 0..trials {
        let r = run_trial(cfg, trial, BenchmarkPolicy::Auto { subset_cap: DEFAULT_SUBSET_CAP }).unwrap();
        let s = &r.schedule;
        let eps = s.epsilon_used;
        min_gap = min_gap.min(r.rates.uplink_gap.unwrap()).min(r.rates.downlink_gap.unwrap());
        let ug = BeamGains::uplink(r.realization.uplink(), &r.uplink_beams).unwrap();
        let dg = BeamGains::downlink(r.realization.downlink(), &r.downlink_beams).unwrap();
        for stream in 0..m {
            if !s.uplink_fallback_flags[stream] && !ug.cross_beams_within(stream, s.uplink_users[stream], eps) {
                infeasible += 1;
            }
            if !s.downlink_fallback_flags[stream] {
                let k = s.downlink_users[stream];
                let quiet = s.uplink_users.iter().all(|&j| r.realization.interference_column(j).unwrap()[k].norm_sqr() <= eps);
                if !dg.cross_beams_within(stream, k, eps) || !quiet {
                    infeasible += 1;
                }
            }
        }
        if !s.any_fallback() {
            for stream in 0..m {
                let proj = dg.get(stream, s.downlink_users[stream]);
                let floor = if literal_floor {
                    downlink_rate_floor(proj, cfg.downlink_power, m, eps)
                } else {
                    downlink_rate_floor_weighted(proj, cfg.downlink_power, cfg.uplink_power, m, eps)
                };
                checked += 1;
                if r.rates.downlink_stream_rates[stream] < floor - 1e-12 {
                    floor_violations += 1;
                }
            }
        }
    }
    (infeasible, floor_violations, checked, min_gap)
}

fn run_cli(dir: &std::path::Path, tag: &str, args: &[&str]) -> (Vec<u8>, serde_json::Value) {
    let out = dir.join(tag);
    let mut argv = vec!["duplexsim".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.extend(["--out".into(), out.display().to_string()]);
    assert_eq!(dispatch(argv), 0);
    let csv = std::fs::read(dir.join(format!("{tag}.csv"))).unwrap();
    let mut manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join(format!("{tag}.manifest.json"))).unwrap()).unwrap();
    let obj = manifest.as_object_mut().unwrap();
    obj.remove("wall_clock_seconds");
    obj.remove("outputs");
    (csv, manifest)
}

#[test]
fn criterion_8_structural_invariants() {
    let mut unitarity: f64 = 0.0;
    for dim in [1, 2, 3, 4, 8, 16, 32, 64] {
        for s in 0..10 {
            let u = sample_haar_unitary(dim, &mut StreamKey::new(SEED, s, "acceptance/haar").rng());
            unitarity = unitarity.max(u.adjoint_mul(&u).unwrap().max_abs_diff(&ComplexMatrix::identity(dim)));
        }
    }

    // Literal floor where its derivation holds (P = M, P̄ = 1); weighted floor elsewhere.
    let cases = [
        (NetworkConfig { n: 64, antennas: 2, downlink_power: 2.0, uplink_power: 1.0, seed: SEED, ..Default::default() }, true),
        (NetworkConfig { n: 64, antennas: 3, downlink_power: 3.0, uplink_power: 1.0, seed: SEED, ..Default::default() }, true),
        (NetworkConfig { n: 64, antennas: 2, downlink_power: 10.0, uplink_power: 10.0, seed: SEED, ..Default::default() }, false),
        (NetworkConfig { n: 16, antennas: 3, downlink_power: 10.0, uplink_power: 10.0, seed: SEED, ..Default::default() }, false),
    ];
    let (mut infeasible, mut floor_violations, mut checked, mut min_gap) = (0, 0, 0, f64::INFINITY);
    for (cfg, literal) in &cases {
        let (a, b, c, g) = structural_checks(cfg, 200, *literal);
        infeasible += a;
        floor_violations += b;
        checked += c;
        min_gap = min_gap.min(g);
    }

    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["gap-vs-n", "--n-list", "8,16,32", "--trials", "24", "--seed", "5"],
        &["antenna-scaling", "--n-list", "16,64", "--trials", "24", "--seed", "5"],
        &["candidate-prob", "--draws", "10000", "--seed", "5"],
    ];
    let mut identical = true;
    for (i, args) in runs.iter().enumerate() {
        let one = run_cli(dir.path(), &format!("r{i}-w1"), &[*args, &["--workers", "1"][..]].concat());
        let eight = run_cli(dir.path(), &format!("r{i}-w8"), &[*args, &["--workers", "8"][..]].concat());
        identical &= one == eight;
    }
    let resolved = resolve("gap-vs-n", &Params { n_list: Some(vec![8, 32]), trials: Some(16), ..Default::default() });
    identical &= to_csv(&run_experiment("gap-vs-n", &resolved, 1).unwrap())
        == to_csv(&run_experiment("gap-vs-n", &resolved, 8).unwrap());

    let pass = unitarity <= 1e-10 && infeasible == 0 && min_gap >= -1e-6 && floor_violations == 0 && identical;
    verdict(
        8,
        pass,
        format!(
            "unitarity={unitarity:.2e} infeasible={infeasible} min_gap={min_gap:.4} floor violations={floor_violations}/{checked} workers 1 vs 8 identical={identical}"
        ),
    );
}
