//! Weak-form residuals of piecewise-constant solutions against smooth bumps,
//! level-set interface speeds and moving-domain mass audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::{FluidState, GasModel};
use crate::error::{Error, Result};
use crate::quadrature::CompositeGauss;
use crate::shock1d::PiecewiseShockSolution;

/// `b(xi) = exp(1 - 1/(1 - xi^2))` on `|xi| < 1`, zero elsewhere.
pub fn bump(xi: f64) -> f64 {
    if xi.abs() >= 1.0 {
        return 0.0;
    }
    (1.0 - 1.0 / (1.0 - xi * xi)).exp()
}

pub fn bump_derivative(xi: f64) -> f64 {
    if xi.abs() >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - xi * xi;
    -2.0 * xi / (q * q) * bump(xi)
}

/// Tensorized bump centered at `(t0, x0)` with half-widths `(r_t, r_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub center: (f64, f64),
    pub radii: (f64, f64),
}

impl TestFunction {
    pub fn new(center: (f64, f64), radii: (f64, f64)) -> Result<Self> {
        let h = TestFunction { center, radii };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.radii.0) && ok(self.radii.1) && self.center.0.is_finite() && self.center.1.is_finite()) {
            return Err(Error::InvalidSolution(format!("bad test function {self:?}")));
        }
        Ok(())
    }

    fn xi(&self, t: f64, x: f64) -> (f64, f64) {
        ((t - self.center.0) / self.radii.0, (x - self.center.1) / self.radii.1)
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let (a, b) = self.xi(t, x);
        bump(a) * bump(b)
    }

    /// `(h_t, h_x)`.
    pub fn gradient(&self, t: f64, x: f64) -> (f64, f64) {
        let (a, b) = self.xi(t, x);
        (
            bump_derivative(a) * bump(b) / self.radii.0,
            bump(a) * bump_derivative(b) / self.radii.1,
        )
    }

    /// `((t_min, t_max), (x_min, x_max))`.
    pub fn support(&self) -> ((f64, f64), (f64, f64)) {
        let (t0, x0) = self.center;
        let (rt, rx) = self.radii;
        ((t0 - rt, t0 + rt), (x0 - rx, x0 + rx))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeQuadrature {
    pub order: usize,
    pub panels: usize,
    pub shock_aligned: bool,
}

impl Default for SpacetimeQuadrature {
    fn default() -> Self {
        SpacetimeQuadrature { order: 8, panels: 48, shock_aligned: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Mass,
    Momentum,
    Energy,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Mass, Component::Momentum, Component::Energy];

    /// Conserved density and flux of this component.
    pub fn density_and_flux(self, model: &GasModel, state: &FluidState) -> Result<(f64, f64)> {
        Ok(match self {
            Component::Mass => (state.rho, state.momentum()),
            Component::Momentum => (state.momentum(), state.momentum() * state.u + model.pressure(state)?),
            Component::Energy => {
                let e = model.energy_density(state)?;
                (e, (e + model.pressure(state)?) * state.u)
            }
        })
    }
}

/// Smooth compactly supported spacetime function.
pub trait TestField {
    fn value(&self, t: f64, x: f64) -> f64;
    /// `(h_t, h_x)`.
    fn gradient(&self, t: f64, x: f64) -> (f64, f64);
    /// Boxes whose union contains the support; their edges are quadrature
    /// breakpoints.
    fn supports(&self) -> Vec<((f64, f64), (f64, f64))>;
}

impl TestField for TestFunction {
    fn value(&self, t: f64, x: f64) -> f64 {
        TestFunction::value(self, t, x)
    }

    fn gradient(&self, t: f64, x: f64) -> (f64, f64) {
        TestFunction::gradient(self, t, x)
    }

    fn supports(&self) -> Vec<((f64, f64), (f64, f64))> {
        vec![self.support()]
    }
}

/// `sum_i a_i h_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCombination {
    pub terms: Vec<(f64, TestFunction)>,
}

impl TestField for LinearCombination {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.terms.iter().map(|(a, h)| a * h.value(t, x)).sum()
    }

    fn gradient(&self, t: f64, x: f64) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(gt, gx), (a, h)| {
            let (ht, hx) = h.gradient(t, x);
            (gt + a * ht, gx + a * hx)
        })
    }

    fn supports(&self) -> Vec<((f64, f64), (f64, f64))> {
        self.terms.iter().map(|(_, h)| h.support()).collect()
    }
}

/// `int int (U h_t + F h_x) dx dt`.
pub fn weak_residual<H: TestField>(
    sol: &PiecewiseShockSolution,
    component: Component,
    h: &H,
    quad: &SpacetimeQuadrature,
) -> Result<f64> {
    let boxes = h.supports();
    if boxes.is_empty() {
        return Ok(0.0);
    }
    for b in &boxes {
        check_support(sol, *b)?;
    }
    let model = sol.model();
    let pairs: Vec<(f64, f64)> = sol
        .states()
        .iter()
        .map(|s| component.density_and_flux(model, s))
        .collect::<Result<_>>()?;
    let rule = CompositeGauss::new(quad.order, quad.panels);
    let edges_x: Vec<f64> = boxes.iter().flat_map(|(_, (xa, xb))| [*xa, *xb]).collect();
    let (xa, xb) = (
        edges_x.iter().copied().fold(f64::INFINITY, f64::min),
        edges_x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );

    let mut t_breaks: Vec<f64> = boxes.iter().flat_map(|((ta, tb), _)| [*ta, *tb]).collect();
    let (ta, tb) = (
        t_breaks.iter().copied().fold(f64::INFINITY, f64::min),
        t_breaks.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    if quad.shock_aligned {
        for i in 0..sol.shock_count() {
            let speed = sol.shock_speeds()[i];
            if speed != 0.0 {
                for edge in &edges_x {
                    let tc = (edge - sol.shock_positions()[i]) / speed;
                    if tc > ta && tc < tb {
                        t_breaks.push(tc);
                    }
                }
            }
        }
    }
    sort_dedup(&mut t_breaks);

    let inner = |t: f64| -> f64 {
        let mut x_breaks = edges_x.clone();
        if quad.shock_aligned {
            for i in 0..sol.shock_count() {
                let xs = sol.shock_position(i, t);
                if xs > xa && xs < xb {
                    x_breaks.push(xs);
                }
            }
        }
        sort_dedup(&mut x_breaks);
        let mut sum = 0.0;
        for w in x_breaks.windows(2) {
            sum += rule.integrate(w[0], w[1], |x| {
                let (u, f) = pairs[sol.region_index(t, x)];
                let (ht, hx) = h.gradient(t, x);
                u * ht + f * hx
            });
        }
        sum
    };
    Ok(t_breaks.windows(2).map(|w| rule.integrate(w[0], w[1], inner)).sum())
}

/// Residual predicted by the divergence theorem:
/// `sum_i int h(t, x_i(t)) (v_i [[U]] - [[F]]) dt`.
pub fn predicted_weak_residual<H: TestField>(
    sol: &PiecewiseShockSolution,
    component: Component,
    h: &H,
) -> Result<f64> {
    let model = sol.model();
    let mut t_breaks: Vec<f64> = h.supports().iter().flat_map(|((ta, tb), _)| [*ta, *tb]).collect();
    sort_dedup(&mut t_breaks);
    let rule = CompositeGauss::new(16, 16);
    let mut total = 0.0;
    for i in 0..sol.shock_count() {
        let (ul, fl) = component.density_and_flux(model, &sol.states()[i])?;
        let (ur, fr) = component.density_and_flux(model, &sol.states()[i + 1])?;
        let jump = sol.shock_speeds()[i] * (ur - ul) - (fr - fl);
        let along: f64 = t_breaks
            .windows(2)
            .map(|w| rule.integrate(w[0], w[1], |t| h.value(t, sol.shock_position(i, t))))
            .sum();
        total += jump * along;
    }
    Ok(total)
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

fn check_support(sol: &PiecewiseShockSolution, support: ((f64, f64), (f64, f64))) -> Result<()> {
    let ((ta, tb), (xa, xb)) = support;
    if !(ta < tb && xa < xb && ta.is_finite() && tb.is_finite() && xa.is_finite() && xb.is_finite()) {
        return Err(Error::InvalidSolution(format!("degenerate test-function support {support:?}")));
    }
    let (lo, hi) = sol.validity();
    if ta < lo || tb > hi {
        return Err(Error::SupportEscapes(format!(
            "time support [{ta}, {tb}] leaves the validity window [{lo}, {hi}]"
        )));
    }
    for t in [ta, tb] {
        let (a, b) = sol.domain_at(t);
        if xa < a || xb > b {
            return Err(Error::SupportEscapes(format!(
                "space support [{xa}, {xb}] leaves the domain [{a}, {b}] at t = {t}"
            )));
        }
    }
    Ok(())
}

/// Normal speed `-f_t / |f_x|` of the zero level set of `f` by central
/// differences with step `1e-6`.
pub fn normal_speed_levelset<F: Fn(f64, f64) -> f64>(f: F, t: f64, x: f64) -> Result<f64> {
    let h = 1e-6;
    let ft = (f(t + h, x) - f(t - h, x)) / (2.0 * h);
    let fx = (f(t, x + h) - f(t, x - h)) / (2.0 * h);
    normal_speed_from_gradient(ft, fx)
}

pub fn normal_speed_from_gradient(f_t: f64, f_x: f64) -> Result<f64> {
    if !(f_x.abs() > 1e-12) {
        return Err(Error::DegenerateGradient(f_x));
    }
    Ok(-f_t / f_x.abs())
}

/// `int_a^b rho dx` at time `t`, exact for piecewise-constant density.
pub fn mass_between(sol: &PiecewiseShockSolution, a: f64, b: f64, t: f64) -> f64 {
    let m = sol.shock_count();
    let mut total = 0.0;
    for (region, state) in sol.states().iter().enumerate() {
        let lo = if region == 0 { a } else { a.max(sol.shock_position(region - 1, t)) };
        let hi = if region == m { b } else { b.min(sol.shock_position(region, t)) };
        if hi > lo {
            total += state.rho * (hi - lo);
        }
    }
    total
}

/// Finite-difference step of the mass-rate audit.
pub const MASS_RATE_STEP: f64 = 1e-5;

/// `d/dt int_{a(t)}^{b(t)} rho dx` by central differences.
pub fn moving_domain_mass_rate<A, B>(sol: &PiecewiseShockSolution, a: A, b: B, t: f64) -> Result<f64>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let step = MASS_RATE_STEP;
    for edge in [t - step, t + step] {
        if !sol.in_validity(edge) {
            return Err(Error::OutOfDomain { t: edge, x: f64::NAN });
        }
    }
    for (name, end) in [("left", &a as &dyn Fn(f64) -> f64), ("right", &b)] {
        let (early, late) = (end(t - step), end(t + step));
        for i in 0..sol.shock_count() {
            let before = early - sol.shock_position(i, t - step);
            let after = late - sol.shock_position(i, t + step);
            let now = end(t) - sol.shock_position(i, t);
            if before.signum() != after.signum() || now == 0.0 || before == 0.0 || after == 0.0 {
                return Err(Error::EndpointCollision(format!(
                    "{name} endpoint meets shock {i} near t = {t}"
                )));
            }
        }
    }
    if a(t) >= b(t) {
        return Err(Error::EndpointCollision("endpoints cross".into()));
    }
    let mass = |s: f64| mass_between(sol, a(s), b(s), s);
    Ok((mass(t + step) - mass(t - step)) / (2.0 * step))
}

/// `sum [[rho (u - v_s)]]` over the shocks, the mass rate of a material
/// interval enclosing them all.
pub fn predicted_mass_rate(sol: &PiecewiseShockSolution) -> f64 {
    (0..sol.shock_count())
        .map(|i| {
            let (l, r) = (sol.states()[i], sol.states()[i + 1]);
            let v = sol.shock_speeds()[i];
            r.rho * (r.u - v) - l.rho * (l.u - v)
        })
        .sum()
}

/// Reproducible battery of bumps inside the solution domain, half of them
/// centered on a shock trajectory.
pub fn standard_battery(sol: &PiecewiseShockSolution, seed: u64, count: usize) -> Result<Vec<TestFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = sol.validity();
    let t_end = hi.min(lo.max(0.0) + 1.0);
    let t_start = lo.max(0.0);
    let span = t_end - t_start;
    let mut battery = Vec::with_capacity(count);
    let mut attempts = 0;
    while battery.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(Error::SupportEscapes("could not place the test functions".into()));
        }
        let rt = span * rng.gen_range(0.05..0.25);
        let t0 = rng.gen_range(t_start + rt..t_end - rt);
        let (a, b) = sol.domain_at(t0);
        let rx = (b - a) * rng.gen_range(0.05..0.3);
        let on_shock = sol.shock_count() > 0 && battery.len() % 2 == 0;
        let x0 = if on_shock {
            let i = rng.gen_range(0..sol.shock_count());
            sol.shock_position(i, t0) + rx * rng.gen_range(-0.5..0.5)
        } else {
            rng.gen_range(a + rx..b - rx)
        };
        let h = TestFunction { center: (t0, x0), radii: (rt, rx) };
        if check_support(sol, h.support()).is_ok() {
            battery.push(h);
        }
    }
    Ok(battery)
}
