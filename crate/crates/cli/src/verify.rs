//! Self-verification: every closed form recomputed against its independent
//! numerical route, with per-check maximum errors and the offending
//! parameters on failure.

use gaussdiv::gaussian::{pdf_1d, Gaussian1D, GaussianND};
use gaussdiv::hyperbolic::{
    apply_disc_automorphism, disc_distance, embed_half_plane, fisher_rao_zeta, psi_geometric,
    DiscAutomorphism, HalfPlanePoint, MobiusMap,
};
use gaussdiv::multivariate::{direct_product_integrals, product_integrals, psi_multivariate};
use gaussdiv::oracle::{
    integrate_1d, oracle_psi_1d, oracle_psi_nd, oracle_sqrt_cross, support_interval,
    MonteCarloSettings, QuadratureSettings,
};
use gaussdiv::psi::{brownian_psi, l2_norm_squared, lambda_term, psi_closed_form, BrownianPair};
use gaussdiv::spherical::bhattacharyya_coefficient;
use gaussdiv::testutil::{random_disc_point, random_gaussian, random_spd, TestRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSize {
    Small,
    Full,
}

/// Outcome of one named check.
pub struct CheckResult {
    pub name: &'static str,
    pub max_err: f64,
    pub bound: f64,
    pub worst: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_err <= self.bound
    }
}

struct Tracker {
    max_err: f64,
    worst: String,
}

impl Tracker {
    fn new() -> Self {
        Tracker { max_err: 0.0, worst: String::new() }
    }

    fn update(&mut self, err: f64, params: impl Fn() -> String) {
        if err > self.max_err {
            self.max_err = err;
            self.worst = params();
        }
    }

    fn finish(self, name: &'static str, bound: f64) -> CheckResult {
        CheckResult { name, max_err: self.max_err, bound, worst: self.worst }
    }
}

fn rel_disc(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn mu_grid(grid: GridSize) -> &'static [f64] {
    match grid {
        GridSize::Small => &[-1.0, 0.0, 1.0],
        GridSize::Full => &[-3.0, -1.0, 0.0, 1.0, 3.0],
    }
}

fn sigma_grid(grid: GridSize) -> &'static [f64] {
    match grid {
        GridSize::Small => &[0.5, 1.0, 2.0],
        GridSize::Full => &[0.3, 0.5, 1.0, 2.0, 5.0],
    }
}

fn count(grid: GridSize, small: usize, full: usize) -> usize {
    match grid {
        GridSize::Small => small,
        GridSize::Full => full,
    }
}

fn oracle_settings() -> QuadratureSettings {
    QuadratureSettings::new(1e-13, 60, 12.0).unwrap()
}

fn grid_pairs(grid: GridSize) -> Vec<(Gaussian1D, Gaussian1D)> {
    let mut pairs = Vec::new();
    for &mu_p in mu_grid(grid) {
        for &sig_p in sigma_grid(grid) {
            for &mu_q in mu_grid(grid) {
                for &sig_q in sigma_grid(grid) {
                    pairs.push((
                        Gaussian1D::new(mu_p, sig_p).unwrap(),
                        Gaussian1D::new(mu_q, sig_q).unwrap(),
                    ));
                }
            }
        }
    }
    pairs
}

fn pair_label(p: &Gaussian1D, q: &Gaussian1D) -> String {
    format!(
        "mu_p={} sigma_p={} mu_q={} sigma_q={}",
        p.mu(),
        p.sigma(),
        q.mu(),
        q.sigma()
    )
}

fn check_bc_vs_oracle(grid: GridSize) -> CheckResult {
    let s = oracle_settings();
    let mut t = Tracker::new();
    for (p, q) in grid_pairs(grid) {
        let closed = bhattacharyya_coefficient(&p, &q);
        let oracle = oracle_sqrt_cross(&p, &q, &s).unwrap();
        t.update((closed - oracle).abs(), || pair_label(&p, &q));
    }
    t.finish("bhattacharyya-closed-vs-oracle", 1e-9)
}

fn check_lambda_cross_identity(grid: GridSize, perturb_lambda: f64) -> CheckResult {
    let s = oracle_settings();
    let mut rng = TestRng::new(101);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 40, 200) {
        let p = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 5.0);
        let q = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 5.0);
        let (lo, hi) = support_interval(&[&p, &q], &s);
        let int_pq = integrate_1d(
            |x| pdf_1d(&p, x).value() * pdf_1d(&q, x).value(),
            lo,
            hi,
            &s,
        )
        .unwrap();
        let lambda = lambda_term(&p, &q) + perturb_lambda;
        let gap = (4.0 * int_pq - 2.0 * std::f64::consts::SQRT_2 * lambda).abs();
        t.update(gap, || pair_label(&p, &q));
    }
    t.finish("lambda-cross-identity", 1e-10)
}

fn check_l2_norm_vs_oracle(grid: GridSize) -> CheckResult {
    let s = oracle_settings();
    let mut rng = TestRng::new(103);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 40, 200) {
        let p = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 5.0);
        let (lo, hi) = support_interval(&[&p], &s);
        let oracle = integrate_1d(|x| pdf_1d(&p, x).value().powi(2), lo, hi, &s).unwrap();
        t.update((l2_norm_squared(&p) - oracle).abs(), || {
            format!("mu={} sigma={}", p.mu(), p.sigma())
        });
    }
    t.finish("l2-norm-closed-vs-oracle", 1e-10)
}

fn check_psi_vs_oracle(grid: GridSize) -> CheckResult {
    let s = oracle_settings();
    let mut t = Tracker::new();
    for (p, q) in grid_pairs(grid) {
        let closed = psi_closed_form(&p, &q).unwrap().psi;
        let oracle = oracle_psi_1d(&p, &q, &s).unwrap();
        t.update(rel_disc(closed, oracle), || pair_label(&p, &q));
    }
    t.finish("psi-closed-vs-oracle", 1e-9)
}

fn check_hyperbolic_chain(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(107);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 100, 1000) {
        let p = random_gaussian(&mut rng, -3.0, 3.0, 0.5, 2.0);
        let q = random_gaussian(&mut rng, -3.0, 3.0, 0.5, 2.0);
        let m = MobiusMap::new(
            HalfPlanePoint::new(rng.range(-2.0, 2.0), rng.range(0.5, 2.0)).unwrap(),
            rng.range(0.0, std::f64::consts::TAU),
        )
        .unwrap();
        let x = m.to_disc(embed_half_plane(&p)).unwrap();
        let y = m.to_disc(embed_half_plane(&q)).unwrap();
        let chained = disc_distance(x, y);
        let direct = 2.0 * fisher_rao_zeta(&p, &q).atanh();
        t.update((chained - direct).abs(), || pair_label(&p, &q));
    }
    t.finish("hyperbolic-chain", 1e-11)
}

fn check_cosh_identity(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(109);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 100, 1000) {
        let x = random_disc_point(&mut rng, 0.9);
        let y = random_disc_point(&mut rng, 0.9);
        let gap = (psi_geometric(x, y) - (disc_distance(x, y).cosh() - 1.0)).abs();
        t.update(gap, || format!("x={} y={}", x.z(), y.z()));
    }
    t.finish("cosh-identity", 1e-11)
}

fn check_mobius_invariance(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(113);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 20, 100) {
        let eta =
            DiscAutomorphism::new(random_disc_point(&mut rng, 0.7), rng.range(0.0, std::f64::consts::TAU))
                .unwrap();
        let x = random_disc_point(&mut rng, 0.8);
        let y = random_disc_point(&mut rng, 0.8);
        let gap = (psi_geometric(x, y)
            - psi_geometric(
                apply_disc_automorphism(&eta, x),
                apply_disc_automorphism(&eta, y),
            ))
        .abs();
        t.update(gap, || format!("x={} y={}", x.z(), y.z()));
    }
    t.finish("mobius-invariance", 1e-12)
}

fn check_multivariate_reduction(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(127);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 40, 200) {
        let mu_p = rng.range(-2.0, 0.0);
        let mu_q = mu_p + rng.range(0.5, 2.5);
        let sig_p = rng.range(0.35, 2.0);
        let sig_q = sig_p * rng.range(1.1, 2.0);
        let closed = psi_closed_form(
            &Gaussian1D::new(mu_p, sig_p).unwrap(),
            &Gaussian1D::new(mu_q, sig_q).unwrap(),
        )
        .unwrap()
        .psi;
        let multi = psi_multivariate(
            &GaussianND::from_parts(&[mu_p], &[sig_p * sig_p]).unwrap(),
            &GaussianND::from_parts(&[mu_q], &[sig_q * sig_q]).unwrap(),
        )
        .unwrap()
        .psi;
        t.update(rel_disc(multi, closed), || {
            format!("mu_p={mu_p} sigma_p={sig_p} mu_q={mu_q} sigma_q={sig_q}")
        });
    }
    t.finish("multivariate-univariate-reduction", 1e-12)
}

fn check_integral_routes(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(131);
    let mut t = Tracker::new();
    for n in [1usize, 2, 3] {
        for _ in 0..count(grid, 10, 50) {
            let p = random_spd(&mut rng, n);
            let q = random_spd(&mut rng, n);
            let terms = product_integrals(&p, &q).unwrap();
            let (d_p2, d_q2, d_pq) = direct_product_integrals(&p, &q).unwrap();
            let err = rel_disc(terms.int_p2, d_p2)
                .max(rel_disc(terms.int_q2, d_q2))
                .max(rel_disc(terms.int_pq, d_pq));
            t.update(err, || format!("n={n}"));
        }
    }
    t.finish("integral-route-agreement", 1e-11)
}

fn check_multivariate_grid_oracle() -> CheckResult {
    let eye = [1.0, 0.0, 0.0, 1.0];
    let cases: [(&[f64], &[f64]); 3] = [
        (&eye, &eye),
        (&[1.0, 0.0, 0.0, 4.0], &eye),
        (&[1.5, 0.7, 0.7, 1.2], &[1.0, -0.3, -0.3, 2.0]),
    ];
    let mc = MonteCarloSettings::default();
    let mut t = Tracker::new();
    for (i, (sp, sq)) in cases.into_iter().enumerate() {
        let p = GaussianND::from_parts(&[0.0, 0.0], sp).unwrap();
        let q = GaussianND::from_parts(&[1.0, 0.0], sq).unwrap();
        let closed = psi_multivariate(&p, &q).unwrap().psi;
        let oracle = oracle_psi_nd(&p, &q, &mc).unwrap().value;
        t.update(rel_disc(closed, oracle), || format!("case {i}"));
    }
    t.finish("multivariate-grid-oracle", 1e-3)
}

fn check_brownian_substitution(grid: GridSize) -> CheckResult {
    let mut rng = TestRng::new(137);
    let mut t = Tracker::new();
    for _ in 0..count(grid, 20, 100) {
        let bp = BrownianPair::new(
            rng.range(-2.0, -0.2),
            rng.range(0.5, 1.5),
            rng.range(0.2, 2.0),
            rng.range(1.7, 3.0),
        )
        .unwrap();
        let time = rng.range(1.5 * bp.t_min() + 0.05, 4.0);
        let direct = brownian_psi(&bp, time).unwrap();
        let substituted = psi_closed_form(&bp.law_p(time).unwrap(), &bp.law_q(time).unwrap())
            .unwrap()
            .psi;
        t.update(rel_disc(direct, substituted), || format!("t={time}"));
    }
    t.finish("brownian-substitution", 1e-12)
}

/// Run every check at the chosen grid size. `perturb_lambda` is a debug
/// hook that offsets the cross term inside the lambda identity check, for
/// exercising the failure path.
pub fn run_all(grid: GridSize, perturb_lambda: f64) -> Vec<CheckResult> {
    vec![
        check_bc_vs_oracle(grid),
        check_lambda_cross_identity(grid, perturb_lambda),
        check_l2_norm_vs_oracle(grid),
        check_psi_vs_oracle(grid),
        check_hyperbolic_chain(grid),
        check_cosh_identity(grid),
        check_mobius_invariance(grid),
        check_multivariate_reduction(grid),
        check_integral_routes(grid),
        check_multivariate_grid_oracle(),
        check_brownian_substitution(grid),
    ]
}
