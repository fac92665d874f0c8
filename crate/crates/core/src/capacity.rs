//! Benchmark capacities of the isolated uplink and downlink, and the
//! clustered-network bounds.
//!
//! All values are in nats.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{chol_quadratic_form, cholesky_in_place, logdet_hpd_in_place, ComplexMatrix};

/// Default cap on the number of subsets the exact MAC-M enumeration visits.
pub const DEFAULT_SUBSET_CAP: u128 = 1_000_000;
pub const DEFAULT_BC_TOL: f64 = 1e-8;
pub const DEFAULT_BC_MAX_ITERS: usize = 10_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Best size-`active` user subset and its sum rate.
#[derive(Debug, Clone, PartialEq)]
pub struct MacSubset {
    pub capacity: f64,
    /// Lexicographically smallest maximizing subset.
    pub users: Vec<usize>,
}

/// Sum capacity of the uplink when at most `active` users transmit at power
/// `P̄` each: `max_{|A| = active} log det(I + P̄·H̄_A·H̄_A*)` by enumeration.
pub fn mac_m_sum_capacity_exact(uplink: &ComplexMatrix, uplink_power: f64, active: usize, subset_cap: u128) -> Result<f64> {
    mac_m_best_subset(uplink, uplink_power, active, subset_cap).map(|s| s.capacity)
}

pub fn mac_m_best_subset(uplink: &ComplexMatrix, uplink_power: f64, active: usize, subset_cap: u128) -> Result<MacSubset> {
    let (dim, n) = (uplink.rows(), uplink.cols());
    if active < 1 || active > n {
        return Err(Error::TooFewUsers { streams: active, users: n });
    }
    if !(uplink_power >= 0.0) {
        return Err(Error::InvalidParameter(format!("P_bar must be >= 0, got {uplink_power}")));
    }
    let subsets = binomial(n, active);
    if subsets > subset_cap {
        return Err(Error::SubsetCapExceeded { subsets, cap: subset_cap });
    }

    let d2 = dim * dim;
    // Scaled outer products P̄·h̄_u·h̄_u*, one dim×dim block per user.
    let mut outer = vec![Complex64::new(0.0, 0.0); n * d2];
    for u in 0..n {
        for a in 0..dim {
            for b in 0..dim {
                outer[u * d2 + a * dim + b] = uplink[(a, u)] * uplink[(b, u)].conj() * uplink_power;
            }
        }
    }

    let mut search = SubsetSearch {
        dim,
        n,
        active,
        outer: &outer,
        partial: vec![Complex64::new(0.0, 0.0); (active + 1) * d2],
        scratch: vec![Complex64::new(0.0, 0.0); d2],
        current: Vec::with_capacity(active),
        best: MacSubset { capacity: f64::NEG_INFINITY, users: Vec::new() },
        error: None,
    };
    for i in 0..dim {
        search.partial[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    search.descend(0, 0);
    match search.error {
        Some(e) => Err(e),
        None => Ok(search.best),
    }
}

struct SubsetSearch<'a> {
    dim: usize,
    n: usize,
    active: usize,
    outer: &'a [Complex64],
    /// `partial[d]` holds `I + Σ` over the first `d` chosen users.
    partial: Vec<Complex64>,
    scratch: Vec<Complex64>,
    current: Vec<usize>,
    best: MacSubset,
    error: Option<Error>,
}

impl SubsetSearch<'_> {
    fn descend(&mut self, start: usize, depth: usize) {
        let d2 = self.dim * self.dim;
        if depth == self.active {
            self.scratch.copy_from_slice(&self.partial[depth * d2..(depth + 1) * d2]);
            match logdet_hpd_in_place(&mut self.scratch, self.dim) {
                // Strict comparison keeps the lexicographically first maximizer.
                Ok(v) if v > self.best.capacity => {
                    self.best.capacity = v;
                    self.best.users.clone_from(&self.current);
                }
                Ok(_) => {}
                Err(e) => self.error = Some(e),
            }
            return;
        }
        for u in start..=self.n - (self.active - depth) {
            if self.error.is_some() {
                return;
            }
            let (head, tail) = self.partial.split_at_mut((depth + 1) * d2);
            let src = &head[depth * d2..];
            let dst = &mut tail[..d2];
            for ((d, s), o) in dst.iter_mut().zip(src).zip(&self.outer[u * d2..(u + 1) * d2]) {
                *d = s + o;
            }
            self.current.push(u);
            self.descend(u + 1, depth + 1);
            self.current.pop();
        }
    }
}

/// `M·log(1 + P̄·max_k ‖h̄_k‖²)`.
pub fn mac_m_capacity_bound(uplink: &ComplexMatrix, uplink_power: f64, active: usize) -> f64 {
    let best = (0..uplink.cols())
        .map(|k| (0..uplink.rows()).map(|r| uplink[(r, k)].norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    active as f64 * (1.0 + uplink_power * best).ln()
}

/// `M·log(1 + (P/M)·max_k ‖h_k‖²)` for a downlink matrix with rows `h_k*`.
pub fn bc_capacity_bound(downlink: &ComplexMatrix, downlink_power: f64, streams: usize) -> f64 {
    let best = (0..downlink.rows())
        .map(|k| downlink.row(k).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    let m = streams as f64;
    m * (1.0 + downlink_power / m * best).ln()
}

/// Result of the sum-power iterative waterfilling solver.
#[derive(Debug, Clone, PartialEq)]
pub struct BcSolution {
    pub capacity: f64,
    /// Dual-MAC user powers, summing to `P`.
    pub powers: Vec<f64>,
    pub iterations: usize,
    /// Objective after every iteration, starting with the initial point.
    pub history: Vec<f64>,
    /// Frank–Wolfe certificate: `capacity ≥ optimum − duality_gap`.
    pub duality_gap: f64,
}

/// DPC sum capacity of the downlink, `max_{q ≥ 0, Σq ≤ P} log det(I + Σ_k q_k h_k h_k*)`.
pub fn bc_sum_capacity_dpc(downlink: &ComplexMatrix, downlink_power: f64, tol: f64, max_iters: usize) -> Result<f64> {
    bc_sum_capacity_solve(downlink, downlink_power, tol, max_iters).map(|s| s.capacity)
}

/// Sum-power iterative waterfilling on the dual MAC.
///
/// Each iteration waterfills every user against the effective noise created
/// by the others, then moves from the current powers toward the waterfilling
/// solution. The step is the best of `1, 1/2, 1/4, …` down to `1/n`; the
/// `1/n` step alone already guarantees ascent, so the objective never drops.
pub fn bc_sum_capacity_solve(downlink: &ComplexMatrix, downlink_power: f64, tol: f64, max_iters: usize) -> Result<BcSolution> {
    if !(downlink_power > 0.0) || !downlink_power.is_finite() {
        return Err(Error::InvalidParameter(format!("P must be > 0, got {downlink_power}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {tol}")));
    }
    let (n, dim) = (downlink.rows(), downlink.cols());
    if n == 0 {
        return Err(Error::InvalidParameter("no users".into()));
    }
    // Dual-MAC channel of user k is h_k = conj(row k).
    let users: Vec<Vec<Complex64>> = (0..n).map(|k| downlink.row(k).iter().map(|z| z.conj()).collect()).collect();
    let mut solver = DualMac { dim, users, chol: vec![Complex64::new(0.0, 0.0); dim * dim], work: vec![Complex64::new(0.0, 0.0); dim] };

    let mut powers = vec![downlink_power / n as f64; n];
    let mut objective = solver.objective(&powers)?;
    let mut history = vec![objective];
    let mut gains = vec![0.0; n];
    let mut candidate = vec![0.0; n];
    let min_step = 1.0 / n as f64;

    for iteration in 1..=max_iters {
        solver.quadratic_forms(&powers, &mut gains)?;
        let target = waterfill(&powers, &gains, downlink_power);

        let mut best = (objective, None::<f64>);
        let mut step: f64 = 1.0;
        loop {
            let step_now = step.max(min_step);
            for ((c, p), t) in candidate.iter_mut().zip(&powers).zip(&target) {
                *c = p + step_now * (t - p);
            }
            let value = solver.objective(&candidate)?;
            if value > best.0 {
                best = (value, Some(step_now));
            }
            if step_now <= min_step {
                break;
            }
            step *= 0.5;
        }

        let improvement = best.0 - objective;
        if let Some(step) = best.1 {
            for (p, t) in powers.iter_mut().zip(&target) {
                *p += step * (t - *p);
            }
            objective = best.0;
        }
        history.push(objective);
        if improvement < tol {
            solver.quadratic_forms(&powers, &mut gains)?;
            let duality_gap = frank_wolfe_gap(&powers, &gains, downlink_power);
            return Ok(BcSolution { capacity: objective, powers, iterations: iteration, history, duality_gap });
        }
    }
    Err(Error::NoConvergence { iterations: max_iters, last_objective: objective })
}

struct DualMac {
    dim: usize,
    users: Vec<Vec<Complex64>>,
    chol: Vec<Complex64>,
    work: Vec<Complex64>,
}

impl DualMac {
    fn accumulate(&mut self, powers: &[f64]) {
        let dim = self.dim;
        self.chol.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for i in 0..dim {
            self.chol[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        for (h, &q) in self.users.iter().zip(powers) {
            if q == 0.0 {
                continue;
            }
            for a in 0..dim {
                for b in 0..=a {
                    self.chol[a * dim + b] += h[a] * h[b].conj() * q;
                }
            }
        }
        // Cholesky only reads the lower triangle; the diagonal must be real.
        for a in 0..dim {
            self.chol[a * dim + a].im = 0.0;
        }
    }

    fn objective(&mut self, powers: &[f64]) -> Result<f64> {
        self.accumulate(powers);
        let dim = self.dim;
        cholesky_in_place(&mut self.chol, dim)?;
        Ok((0..dim).map(|j| self.chol[j * dim + j].re.ln()).sum::<f64>() * 2.0)
    }

    /// `out[k] = h_k* S⁻¹ h_k` with `S = I + Σ q_j h_j h_j*`.
    fn quadratic_forms(&mut self, powers: &[f64], out: &mut [f64]) -> Result<()> {
        self.accumulate(powers);
        cholesky_in_place(&mut self.chol, self.dim)?;
        for (o, h) in out.iter_mut().zip(&self.users) {
            *o = chol_quadratic_form(&self.chol, self.dim, h, &mut self.work);
        }
        Ok(())
    }
}

/// Waterfilling of `total` power over users whose effective gain, with the
/// other users treated as noise, is `a_k / (1 − q_k a_k)`.
fn waterfill(powers: &[f64], forms: &[f64], total: f64) -> Vec<f64> {
    let floors: Vec<f64> = powers
        .iter()
        .zip(forms)
        .map(|(&q, &a)| {
            let effective = a / (1.0 - q * a).max(f64::MIN_POSITIVE);
            if effective > 0.0 { 1.0 / effective } else { f64::INFINITY }
        })
        .collect();
    let mut order: Vec<usize> = (0..floors.len()).collect();
    order.sort_by(|&a, &b| floors[a].total_cmp(&floors[b]).then(a.cmp(&b)));

    let mut level = 0.0;
    let mut prefix = 0.0;
    for (count, &k) in order.iter().enumerate() {
        if !floors[k].is_finite() {
            break;
        }
        prefix += floors[k];
        let candidate = (total + prefix) / (count + 1) as f64;
        let next = order.get(count + 1).map_or(f64::INFINITY, |&j| floors[j]);
        level = candidate;
        if candidate <= next {
            break;
        }
    }
    floors.iter().map(|&f| (level - f).max(0.0)).collect()
}

/// `P·max_k ∇_k − Σ q_k ∇_k`, an upper bound on the distance to the optimum
/// since the objective is concave and `∇_k = h_k* S⁻¹ h_k`.
fn frank_wolfe_gap(powers: &[f64], forms: &[f64], total: f64) -> f64 {
    let max = forms.iter().cloned().fold(0.0, f64::max);
    let inner: f64 = powers.iter().zip(forms).map(|(q, a)| q * a).sum();
    (total * max - inner).max(0.0)
}

/// Parameters of the `(M, h, g)`-clustered bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusteredBoundInputs {
    pub clusters: usize,
    pub h: f64,
    pub g: f64,
    pub downlink_power: f64,
    pub uplink_power: f64,
}

impl ClusteredBoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.clusters < 1 {
            return Err(Error::InvalidParameter("cluster count must be >= 1".into()));
        }
        let finite_nonneg = |x: f64| x >= 0.0 && x.is_finite();
        if !finite_nonneg(self.h) || !finite_nonneg(self.g) || !finite_nonneg(self.downlink_power) || !finite_nonneg(self.uplink_power) {
            return Err(Error::InvalidParameter(format!("clustered bound inputs must be finite and >= 0: {self:?}")));
        }
        Ok(())
    }
}

/// Sum of isolated uplink and downlink capacities of a clustered network:
/// `M·log(1 + h²P/M) + M·log(1 + h²P̄)`.
pub fn clustered_isolated_capacity(inputs: &ClusteredBoundInputs) -> f64 {
    let m = inputs.clusters as f64;
    let h2 = inputs.h * inputs.h;
    m * (1.0 + h2 * inputs.downlink_power / m).ln() + m * (1.0 + h2 * inputs.uplink_power).ln()
}

/// Upper bound on the full-duplex sum rate of a clustered network:
/// `M·log(1 + h²P̄/(1 + g²P̄)) + M·log(1 + h²P/M + g²P̄ + 2gh·√(P̄P/M))`.
pub fn clustered_fd_upper_bound(inputs: &ClusteredBoundInputs) -> f64 {
    let m = inputs.clusters as f64;
    let (h, g) = (inputs.h, inputs.g);
    let (p, pbar) = (inputs.downlink_power, inputs.uplink_power);
    let uplink = (1.0 + h * h * pbar / (1.0 + g * g * pbar)).ln();
    let downlink = (1.0 + h * h * p / m + g * g * pbar + 2.0 * g * h * (pbar * p / m).sqrt()).ln();
    m * (uplink + downlink)
}

/// Per-slot objective of the clustered genie bound for `k[m]` uplink users
/// scheduled in cluster `m` and downlink power `powers[m]` on cluster `m`.
pub fn clustered_time_objective(k: &[usize], powers: &[f64], inputs: &ClusteredBoundInputs) -> Result<f64> {
    let m = inputs.clusters;
    if k.len() != m || powers.len() != m {
        return Err(Error::ShapeMismatch(format!("need {m} allocations, got k={} powers={}", k.len(), powers.len())));
    }
    if k.iter().sum::<usize>() > m {
        return Err(Error::InvalidParameter(format!("at most {m} uplink users may be active")));
    }
    let total: f64 = powers.iter().sum();
    if powers.iter().any(|&p| !(p >= 0.0)) || total > inputs.downlink_power * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!("powers must be >= 0 and sum to at most {}", inputs.downlink_power)));
    }
    let (h, g, pbar) = (inputs.h, inputs.g, inputs.uplink_power);
    Ok(k.iter()
        .zip(powers)
        .map(|(&k, &pm)| {
            let k = k as f64;
            let downlink = (1.0 + h * h * pm + k * g * g * pbar + 2.0 * g * h * (k * pm * pbar).sqrt()).ln();
            let uplink = (1.0 + k * h * h * pbar / (1.0 + k * g * g * pbar)).ln();
            downlink + uplink
        })
        .sum())
}

/// SNR exponents of a clustered sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrParams {
    pub snr: f64,
    pub alpha: f64,
    pub beta: f64,
    pub clusters: usize,
}

/// Maps `(SNR, α, β)` to bound inputs with `h = 1`: `SNR = h²P/M`,
/// `SNR^α = g²P̄`, `SNR^β = h²P̄`.
pub fn snr_parameterization(sp: &SnrParams) -> Result<ClusteredBoundInputs> {
    if !(sp.snr > 0.0) || !sp.snr.is_finite() {
        return Err(Error::InvalidParameter(format!("SNR must be > 0, got {}", sp.snr)));
    }
    if sp.clusters < 1 {
        return Err(Error::InvalidParameter("cluster count must be >= 1".into()));
    }
    let g2 = sp.snr.powf(sp.alpha - sp.beta);
    let pbar = sp.snr.powf(sp.beta);
    if !g2.is_finite() || !pbar.is_finite() {
        return Err(Error::InvalidParameter(format!("SNR exponents overflow at SNR={}", sp.snr)));
    }
    Ok(ClusteredBoundInputs {
        clusters: sp.clusters,
        h: 1.0,
        g: g2.sqrt(),
        downlink_power: sp.clusters as f64 * sp.snr,
        uplink_power: pbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{logdet_id_plus_gram, sample_gaussian_matrix};
    use crate::streams::StreamKey;

    fn gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        sample_gaussian_matrix(rows, cols, &mut StreamKey::new(seed, 0, "capacity-test").rng())
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(1024, 2), 523_776);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(10_000, 5000), u128::MAX);
    }

    #[test]
    fn mac_forced_subset() {
        let h = gaussian(2, 2, 1);
        let exact = mac_m_sum_capacity_exact(&h, 3.0, 2, DEFAULT_SUBSET_CAP).unwrap();
        assert!((exact - logdet_id_plus_gram(&h, 3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mac_single_active_user() {
        let h = gaussian(3, 9, 2);
        let exact = mac_m_sum_capacity_exact(&h, 2.0, 1, DEFAULT_SUBSET_CAP).unwrap();
        let best = (0..9).map(|k| h.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>()).fold(0.0, f64::max);
        assert!((exact - (1.0 + 2.0 * best).ln()).abs() < 1e-12);
    }

    #[test]
    fn mac_subset_cap() {
        let h = gaussian(2, 50, 3);
        assert_eq!(
            mac_m_sum_capacity_exact(&h, 1.0, 2, 100),
            Err(Error::SubsetCapExceeded { subsets: 1225, cap: 100 })
        );
    }

    #[test]
    fn mac_orthonormal_meets_bound() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.6], &[0.0, 1.0, 0.0]]).unwrap();
        let exact = mac_m_sum_capacity_exact(&h, 1.0, 2, DEFAULT_SUBSET_CAP).unwrap();
        assert!((exact - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((mac_m_capacity_bound(&h, 1.0, 2) - 2.0 * 2f64.ln()).abs() < 1e-12);
        let best = mac_m_best_subset(&h, 1.0, 2, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(best.users, vec![0, 1]);
    }

    #[test]
    fn bc_single_user() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0]]).unwrap();
        let c = bc_sum_capacity_dpc(&h, 3.0, DEFAULT_BC_TOL, DEFAULT_BC_MAX_ITERS).unwrap();
        assert!((c - 16f64.ln()).abs() < 1e-12);
        let single = ComplexMatrix::from_real_rows(&[&[1.5]]).unwrap();
        let c1 = bc_sum_capacity_dpc(&single, 2.0, DEFAULT_BC_TOL, DEFAULT_BC_MAX_ITERS).unwrap();
        assert!((c1 - bc_capacity_bound(&single, 2.0, 1)).abs() < 1e-12);
    }

    #[test]
    fn bc_duplicate_user_does_not_help() {
        let h = ComplexMatrix::from_real_rows(&[&[0.3, -1.0]]).unwrap();
        let dup = ComplexMatrix::from_real_rows(&[&[0.3, -1.0], &[0.3, -1.0]]).unwrap();
        let a = bc_sum_capacity_dpc(&h, 4.0, 1e-12, DEFAULT_BC_MAX_ITERS).unwrap();
        let b = bc_sum_capacity_dpc(&dup, 4.0, 1e-12, DEFAULT_BC_MAX_ITERS).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn bc_history_is_monotone_and_certified() {
        for seed in 0..10 {
            let h = gaussian(40, 3, seed);
            let sol = bc_sum_capacity_solve(&h, 10.0, 1e-10, DEFAULT_BC_MAX_ITERS).unwrap();
            assert!(sol.history.windows(2).all(|w| w[1] >= w[0]));
            assert!((sol.powers.iter().sum::<f64>() - 10.0).abs() < 1e-9);
            assert!(sol.duality_gap < 1e-4, "gap {}", sol.duality_gap);
            assert!(sol.capacity <= bc_capacity_bound(&h, 10.0, 3) + 1e-9);
        }
    }

    #[test]
    fn bc_non_convergence_reports_last_iterate() {
        let h = gaussian(30, 2, 4);
        match bc_sum_capacity_solve(&h, 10.0, 1e-300, 1) {
            Err(Error::NoConvergence { iterations: 1, last_objective }) => assert!(last_objective > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn waterfill_examples() {
        // Zero current power: floors are 1/a_k.
        let q = waterfill(&[0.0, 0.0, 0.0], &[1.0, 0.5, 0.1], 2.0);
        // Levels 1, 2, 10: mu = (2 + 1 + 2)/2 = 2.5 < 10.
        assert!((q[0] - 1.5).abs() < 1e-14 && (q[1] - 0.5).abs() < 1e-14 && q[2] == 0.0);
        let q = waterfill(&[0.0, 0.0], &[1.0, 0.5], 0.5);
        assert_eq!(q, vec![0.5, 0.0]);
    }

    #[test]
    fn clustered_formulas() {
        let unit = ClusteredBoundInputs { clusters: 1, h: 1.0, g: 1.0, downlink_power: 1.0, uplink_power: 1.0 };
        assert!((clustered_isolated_capacity(&unit) - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((clustered_fd_upper_bound(&unit) - (1.5f64.ln() + 5f64.ln())).abs() < 1e-14);
        let two = ClusteredBoundInputs { clusters: 2, h: 1.0, g: 0.3, downlink_power: 2.0, uplink_power: 1.0 };
        assert!((clustered_isolated_capacity(&two) - 4.0 * 2f64.ln()).abs() < 1e-14);
        let zero_h = ClusteredBoundInputs { h: 0.0, ..two };
        assert_eq!(clustered_isolated_capacity(&zero_h), 0.0);
        let no_g = ClusteredBoundInputs { g: 0.0, ..two };
        assert!((clustered_fd_upper_bound(&no_g) - clustered_isolated_capacity(&no_g)).abs() < 1e-14);
    }

    #[test]
    fn time_objective_special_points() {
        let inputs = ClusteredBoundInputs { clusters: 3, h: 1.2, g: 0.7, downlink_power: 6.0, uplink_power: 2.0 };
        let even = [2.0, 2.0, 2.0];
        let jensen = clustered_time_objective(&[1, 1, 1], &even, &inputs).unwrap();
        assert!((jensen - clustered_fd_upper_bound(&inputs)).abs() < 1e-12);
        let off = clustered_time_objective(&[0, 0, 0], &even, &inputs).unwrap();
        assert!((off - 3.0 * (1.0 + 1.44 * 2.0f64).ln()).abs() < 1e-12);
        assert!(clustered_time_objective(&[2, 1, 1], &even, &inputs).is_err());
        assert!(clustered_time_objective(&[1, 1, 1], &[3.0, 3.0, 3.0], &inputs).is_err());
        assert!(clustered_time_objective(&[1, 1], &[3.0, 3.0], &inputs).is_err());
    }

    #[test]
    fn snr_examples() {
        let a = snr_parameterization(&SnrParams { snr: 100.0, alpha: 1.0, beta: 1.0, clusters: 2 }).unwrap();
        assert_eq!((a.h, a.downlink_power, a.uplink_power, a.g), (1.0, 200.0, 100.0, 1.0));
        let b = snr_parameterization(&SnrParams { snr: 1e4, alpha: 1.0, beta: 0.5, clusters: 1 }).unwrap();
        assert!((b.uplink_power - 100.0).abs() < 1e-9 && (b.g - 10.0).abs() < 1e-9);
        for snr in [2.0, 37.0, 1e5] {
            let c = snr_parameterization(&SnrParams { snr, alpha: 0.3, beta: 0.3, clusters: 4 }).unwrap();
            assert_eq!(c.g, 1.0);
        }
        assert!(snr_parameterization(&SnrParams { snr: 1e300, alpha: 3.0, beta: 0.0, clusters: 1 }).is_err());
        assert!(snr_parameterization(&SnrParams { snr: 0.0, alpha: 1.0, beta: 1.0, clusters: 1 }).is_err());
    }
}
