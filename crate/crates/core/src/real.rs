//! Real-root isolation from root radii.
//!
//! Every real root `x` with `|x|` close to some radius estimate `r` lies in
//! `±[r/(1+δ), r(1+δ)]`. Those intervals are screened by sign changes of `p`
//! at their ends and the survivors are refined by Newton steps kept inside
//! a shrinking bracket.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::radii::{refined_radii, RadiiEstimate};
use crate::scalar::Ext;

/// Endpoints closer than this (relative) are treated as one point.
pub const ENDPOINT_MERGE_REL: f64 = 1e-12;

const NEWTON_ROUND: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatorConfig {
    /// Refined roots are accurate to relative `2^-precision_bits`.
    pub precision_bits: u32,
    /// First-pass isolation ratio is `1 + isolation_c / n^isolation_d`.
    pub isolation_c: f64,
    pub isolation_d: f64,
    /// Stop once this many distinct roots are refined; `None` means the degree.
    pub max_real_roots: Option<usize>,
    /// Refinement effort in polynomial evaluations, shared by all intervals.
    pub work_budget: u64,
    /// Extra passes with a 16 times smaller ratio over suspect intervals.
    pub max_retries: u32,
}

impl Default for IsolatorConfig {
    fn default() -> Self {
        IsolatorConfig {
            precision_bits: 27,
            isolation_c: 1e-3,
            isolation_d: 0.0,
            max_real_roots: None,
            work_budget: 100_000,
            max_retries: 2,
        }
    }
}

impl IsolatorConfig {
    pub fn isolation_tolerance(&self, n: usize) -> f64 {
        self.isolation_c / (n.max(1) as f64).powf(self.isolation_d)
    }

    /// Half the admissible refined width at `y`.
    pub fn tolerance_at(&self, y: f64) -> f64 {
        0.5f64.powi(self.precision_bits as i32) * y.abs().max(1.0)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.precision_bits == 0 || self.precision_bits > 52 {
            return bad("precision bits must lie in 1..=52");
        }
        if !(self.isolation_c > 0.0) || !self.isolation_d.is_finite() {
            return bad("isolation ratio needs c > 0 and finite d");
        }
        if let Some(r) = self.max_real_roots {
            if r == 0 || r > n.max(1) {
                return bad("max real roots must lie in 1..=degree");
            }
        }
        if self.work_budget == 0 {
            return bad("work budget must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalStatus {
    Candidate,
    SignChange,
    Refined,
    SuspectIllConditioned,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsolationInterval {
    pub lo: f64,
    pub hi: f64,
    pub status: IntervalStatus,
}

impl IsolationInterval {
    pub fn new(lo: f64, hi: f64, status: IntervalStatus) -> Self {
        debug_assert!(lo <= hi);
        IsolationInterval { lo, hi, status }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn overlaps(&self, other: &IsolationInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    pub width: f64,
    pub residual: f64,
    /// Final bracket, status `Refined`.
    pub interval: IsolationInterval,
    /// The sign-change interval refinement started from.
    pub source: IsolationInterval,
    pub newton_rounds: usize,
    /// Last Newton correction, zero for exact hits.
    pub last_step: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IsolationStats {
    pub squarings: u32,
    pub candidates: usize,
    pub sign_evals: usize,
    pub selected: usize,
    pub newton_steps: usize,
    pub bisections: usize,
    pub evaluations: u64,
    pub max_newton_rounds: usize,
    /// Complex-coefficient intervals where only one part vanished.
    pub rejected: usize,
    pub retries: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealIsolation {
    pub roots: Vec<RealRoot>,
    pub suspects: Vec<IsolationInterval>,
    pub stats: IsolationStats,
}

/// Which of the real and imaginary parts of `p` are not identically zero.
#[derive(Clone, Copy, Debug)]
struct Parts {
    re: bool,
    im: bool,
}

impl Parts {
    fn of(p: &Polynomial) -> Self {
        Parts {
            re: p.coeffs().iter().any(|c| c.re != 0.0),
            im: p.coeffs().iter().any(|c| c.im != 0.0),
        }
    }

    fn both(&self) -> bool {
        self.re && self.im
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Signs {
    re: i8,
    im: i8,
    finite: bool,
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

impl Signs {
    fn of(v: &Ext<f64>) -> Self {
        Signs {
            re: sgn(v.m.re),
            im: sgn(v.m.im),
            finite: v.is_finite(),
        }
    }

    fn part(&self, use_re: bool) -> i8 {
        if use_re {
            self.re
        } else {
            self.im
        }
    }

    fn vanishes(&self, parts: Parts) -> bool {
        (!parts.re || self.re == 0) && (!parts.im || self.im == 0)
    }

    /// Every nonzero part of `p` changes sign between the two points.
    fn changes(&self, other: &Signs, parts: Parts) -> bool {
        (!parts.re || self.re * other.re < 0) && (!parts.im || self.im * other.im < 0)
    }

    /// Some nonzero part of `p` changes sign between the two points.
    fn changes_any(&self, other: &Signs, parts: Parts) -> bool {
        (parts.re && self.re * other.re < 0) || (parts.im && self.im * other.im < 0)
    }
}

fn real_point(t: f64) -> Complex64 {
    Complex64::new(t, 0.0)
}

fn signs_at(p: &Polynomial, t: f64) -> Signs {
    Signs::of(&p.evaluate_ext(real_point(t)))
}

/// `p(y)` and `p'(y)` up to the common factor `2^scale_log2`.
fn eval_with_derivative(p: &Polynomial, y: f64) -> (Ext<f64>, Ext<f64>) {
    let z = Ext::<f64>::from_c64(real_point(y));
    let mut b = Ext::<f64>::zero();
    let mut d = Ext::<f64>::zero();
    for &c in p.coeffs().iter().rev() {
        d = d.mul(&z).add(&b);
        b = b.mul(&z).add(&Ext::from_c64(c));
    }
    (b, d)
}

fn newton_step(v: &Ext<f64>, d: &Ext<f64>) -> Option<f64> {
    if d.is_zero() {
        return None;
    }
    let s = v.ratio(d).re;
    s.is_finite().then_some(s)
}

fn residual(p: &Polynomial, t: f64) -> f64 {
    p.evaluate_ext(real_point(t)).to_c64().norm()
}

/// Stage 1: `±[r/(1+δ), r(1+δ)]` for every distinct radius, sorted by `lo`.
pub fn candidate_intervals(radii: &RadiiEstimate) -> Vec<IsolationInterval> {
    let f = radii.rel_factor;
    let mut distinct: Vec<f64> = Vec::new();
    for &r in &radii.radii {
        let dup = distinct
            .iter()
            .any(|&s| (s - r).abs() <= ENDPOINT_MERGE_REL * s.abs().max(r.abs()));
        if !dup {
            distinct.push(r);
        }
    }
    let mut out = Vec::with_capacity(2 * distinct.len());
    for r in distinct {
        if r == 0.0 {
            out.push(IsolationInterval::new(0.0, 0.0, IntervalStatus::Candidate));
        } else {
            out.push(IsolationInterval::new(r / f, r * f, IntervalStatus::Candidate));
            out.push(IsolationInterval::new(-r * f, -r / f, IntervalStatus::Candidate));
        }
    }
    out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    out
}

/// Ranges that contain all positive and all negative real roots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootRanges {
    /// `[lo, hi]` with `0 <= lo`, or `None` if there is no positive root.
    pub positive: Option<(f64, f64)>,
    /// `[lo, hi]` with `hi <= 0`, or `None` if there is no negative root.
    pub negative: Option<(f64, f64)>,
}

impl RootRanges {
    fn admits(&self, iv: &IsolationInterval) -> bool {
        let slack = |x: f64| x.abs() * 1e-9;
        let pos = self
            .positive
            .is_some_and(|(l, u)| iv.hi >= l - slack(l) && iv.lo <= u + slack(u));
        let neg = self
            .negative
            .is_some_and(|(l, u)| iv.hi >= l - slack(l) && iv.lo <= u + slack(u));
        if iv.lo <= 0.0 && iv.hi >= 0.0 {
            return true;
        }
        if iv.lo > 0.0 {
            pos
        } else {
            neg
        }
    }
}

/// Upper bound on the positive roots of a real polynomial, `None` if it has none.
///
/// Only coefficients whose sign differs from the leading one can push a
/// root to the right, so the maximum runs over those alone.
fn positive_root_bound(c: &[f64]) -> Option<f64> {
    let n = c.len() - 1;
    let lead = c[n];
    (1..=n)
        .filter_map(|i| {
            let a = c[n - i] / lead;
            (a < 0.0).then(|| (-a).powf(1.0 / i as f64))
        })
        .reduce(f64::max)
        .map(|m| 2.0 * m)
}

/// Range of positive roots of the polynomial with real coefficients `c`.
fn positive_range(c: &[f64]) -> Option<(f64, f64)> {
    let hi = positive_root_bound(c)?;
    if c[0] == 0.0 {
        return Some((0.0, hi));
    }
    let rev: Vec<f64> = c.iter().rev().copied().collect();
    let lo = positive_root_bound(&rev).map_or(0.0, |u| 1.0 / u);
    Some((lo, hi))
}

/// Bounds on the positive and negative roots from `p`, `p(-x)` and their reversals.
pub fn narrow_root_ranges(p: &Polynomial) -> RootRanges {
    if p.degree() == 0 {
        return RootRanges {
            positive: None,
            negative: None,
        };
    }
    if !p.is_real() {
        let hi = p.root_radius_upper_bound();
        let lo = p
            .reverse()
            .map(|r| 1.0 / r.root_radius_upper_bound())
            .unwrap_or(0.0);
        return RootRanges {
            positive: Some((lo, hi)),
            negative: Some((-hi, -lo)),
        };
    }
    let c: Vec<f64> = p.coeffs().iter().map(|z| z.re).collect();
    let neg: Vec<f64> = p.negate_arg().coeffs().iter().map(|z| z.re).collect();
    RootRanges {
        positive: positive_range(&c),
        negative: positive_range(&neg).map(|(l, u)| (-u, -l)),
    }
}

/// Outcome of the sign screening.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignStage {
    pub selected: Vec<IsolationInterval>,
    /// Points where `p` evaluated to exactly zero.
    pub exact_roots: Vec<f64>,
    /// Intervals whose endpoint values were not finite.
    pub suspects: Vec<IsolationInterval>,
    pub endpoints_evaluated: usize,
}

/// Stage 2: keep the candidates with a sign change of `p` between their ends.
///
/// Distinct endpoints are evaluated once each; endpoints that agree to
/// within [`ENDPOINT_MERGE_REL`] share an evaluation. With complex
/// coefficients a sign change of either part is enough here, since the
/// other part may have a zero of its own nearby; refinement sorts it out.
pub fn select_sign_change_intervals(p: &Polynomial, candidates: &[IsolationInterval]) -> SignStage {
    let parts = Parts::of(p);
    let ranges = narrow_root_ranges(p);
    let kept: Vec<IsolationInterval> = candidates.iter().copied().filter(|iv| ranges.admits(iv)).collect();

    let mut ends: Vec<f64> = kept.iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
    ends.sort_by(f64::total_cmp);
    let mut points: Vec<f64> = Vec::with_capacity(ends.len());
    for t in ends {
        match points.last() {
            Some(&s) if (t - s).abs() <= ENDPOINT_MERGE_REL * s.abs().max(t.abs()) => {}
            _ => points.push(t),
        }
    }
    let signs: Vec<Signs> = points.iter().map(|&t| signs_at(p, t)).collect();
    let lookup = |t: f64| -> (f64, Signs) {
        let i = points.partition_point(|&s| s < t - ENDPOINT_MERGE_REL * t.abs());
        let i = i.min(points.len() - 1);
        (points[i], signs[i])
    };

    let mut stage = SignStage {
        selected: Vec::new(),
        exact_roots: Vec::new(),
        suspects: Vec::new(),
        endpoints_evaluated: points.len(),
    };
    for (t, s) in points.iter().zip(&signs) {
        if s.finite && s.vanishes(parts) {
            stage.exact_roots.push(*t);
        }
    }
    for iv in &kept {
        let (lo, slo) = lookup(iv.lo);
        let (hi, shi) = lookup(iv.hi);
        if !slo.finite || !shi.finite {
            stage
                .suspects
                .push(IsolationInterval::new(iv.lo, iv.hi, IntervalStatus::SuspectIllConditioned));
        } else if lo < hi && slo.changes_any(&shi, parts) {
            stage
                .selected
                .push(IsolationInterval::new(lo, hi, IntervalStatus::SignChange));
        }
    }
    stage
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Refinement {
    Root(RealRoot),
    Suspect(IsolationInterval),
    /// Only one part of a complex-coefficient `p` vanishes in the interval.
    NoRoot,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RefineCounters {
    pub newton_steps: usize,
    pub bisections: usize,
    pub rounds: usize,
    pub evaluations: u64,
}

/// Stage 3 on one interval with the whole `cfg.work_budget`.
pub fn refine_interval(p: &Polynomial, iv: &IsolationInterval, cfg: &IsolatorConfig) -> Refinement {
    refine_with_budget(p, iv, cfg, cfg.work_budget).0
}

struct Refiner<'a> {
    p: &'a Polynomial,
    cfg: &'a IsolatorConfig,
    parts: Parts,
    /// Bracket on the real part, else on the imaginary part.
    use_re: bool,
    budget: u64,
    source: IsolationInterval,
    c: RefineCounters,
}

impl Refiner<'_> {
    fn spend(&mut self, k: u64) -> bool {
        if self.c.evaluations + k > self.budget {
            return false;
        }
        self.c.evaluations += k;
        true
    }

    fn root(&self, value: f64, half: f64, step: f64) -> RealRoot {
        RealRoot {
            value,
            width: 2.0 * half,
            residual: residual(self.p, value),
            interval: IsolationInterval::new(value - half, value + half, IntervalStatus::Refined),
            source: self.source,
            newton_rounds: self.c.rounds,
            last_step: step,
        }
    }

    /// Accept `[lo, hi]` as the final bracket if every part changes sign on it.
    fn accept(&mut self, lo: f64, hi: f64, step: f64) -> Refinement {
        let mid = 0.5 * (lo + hi);
        if !self.parts.both() {
            return Refinement::Root(self.root(mid, 0.5 * (hi - lo), step));
        }
        if !self.spend(2) {
            return self.suspect(lo, hi);
        }
        let (a, b) = (signs_at(self.p, lo), signs_at(self.p, hi));
        if a.changes(&b, self.parts) || a.vanishes(self.parts) || b.vanishes(self.parts) {
            Refinement::Root(self.root(mid, 0.5 * (hi - lo), step))
        } else {
            Refinement::NoRoot
        }
    }

    fn suspect(&self, lo: f64, hi: f64) -> Refinement {
        Refinement::Suspect(IsolationInterval::new(lo, hi, IntervalStatus::SuspectIllConditioned))
    }

    /// Confirm a converged iterate with a sign change across `y ± s`.
    fn verify(&mut self, y: f64, step: f64, lo: f64, hi: f64) -> Refinement {
        let tol = self.cfg.tolerance_at(y);
        // the error after a converged step is far below the step itself
        let mut s = (tol * 2f64.powi(-20)).max(y.abs() * 2f64.powi(-51));
        while s <= tol {
            if !self.spend(2) {
                return self.suspect(lo, hi);
            }
            let a = signs_at(self.p, y - s);
            let b = signs_at(self.p, y + s);
            if a.changes(&b, self.parts) {
                return Refinement::Root(self.root(y, s, step));
            }
            s *= 4.0;
        }
        if self.parts.both() {
            // the bracketing part vanishes here, the other one does not
            return Refinement::NoRoot;
        }
        // noisy neighbourhood; the bracket itself may still be narrow enough
        if hi - lo <= 2.0 * self.cfg.tolerance_at(0.5 * (lo + hi)) {
            self.accept(lo, hi, step)
        } else {
            self.suspect(lo, hi)
        }
    }

    fn run(&mut self) -> Refinement {
        let (mut lo, mut hi) = (self.source.lo, self.source.hi);
        let mut s_lo = signs_at(self.p, lo);
        let key = self.use_re;
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * self.cfg.tolerance_at(mid) {
                return self.accept(lo, hi, 0.0);
            }
            self.c.rounds += 1;
            let mut y = mid;
            for _ in 0..NEWTON_ROUND {
                if !self.spend(2) {
                    return self.suspect(lo, hi);
                }
                self.c.newton_steps += 1;
                let (v, d) = eval_with_derivative(self.p, y);
                let sv = Signs::of(&v);
                if sv.vanishes(self.parts) {
                    return Refinement::Root(self.root(y, 0.0, 0.0));
                }
                let pv = sv.part(key);
                if pv != 0 && y > lo && y < hi {
                    if pv * s_lo.part(key) < 0 {
                        hi = y;
                    } else {
                        lo = y;
                        s_lo = sv;
                    }
                }
                let Some(step) = newton_step(&v, &d) else { break };
                let next = y - step;
                if !(next >= lo && next <= hi) {
                    break;
                }
                if (next - y).abs() < self.cfg.tolerance_at(next) {
                    return self.verify(next, next - y, lo, hi);
                }
                y = next;
            }
            if !self.spend(1) {
                return self.suspect(lo, hi);
            }
            self.c.bisections += 1;
            let m = 0.5 * (lo + hi);
            let sm = signs_at(self.p, m);
            if sm.vanishes(self.parts) {
                return Refinement::Root(self.root(m, 0.0, 0.0));
            }
            if sm.part(key) * s_lo.part(key) < 0 {
                hi = m;
            } else {
                lo = m;
                s_lo = sm;
            }
        }
    }
}

/// Refinement with an explicit evaluation budget.
pub fn refine_with_budget(
    p: &Polynomial,
    iv: &IsolationInterval,
    cfg: &IsolatorConfig,
    budget: u64,
) -> (Refinement, RefineCounters) {
    let parts = Parts::of(p);
    let (a, b) = (signs_at(p, iv.lo), signs_at(p, iv.hi));
    let re_changes = parts.re && a.re * b.re < 0;
    let im_changes = parts.im && a.im * b.im < 0;
    let mut r = Refiner {
        p,
        cfg,
        parts,
        use_re: re_changes,
        budget,
        source: *iv,
        c: RefineCounters::default(),
    };
    let out = r.run();
    if out == Refinement::NoRoot && re_changes && im_changes {
        // the real part led to a zero of its own; follow the imaginary part
        r.use_re = false;
        let again = r.run();
        return (again, r.c);
    }
    (out, r.c)
}

/// Plain Newton iterates `y_0, y_1, ..., y_steps` on the real line.
pub fn newton_iterates(p: &Polynomial, y0: f64, steps: usize) -> Vec<f64> {
    let mut ys = vec![y0];
    let mut y = y0;
    for _ in 0..steps {
        let (v, d) = eval_with_derivative(p, y);
        match newton_step(&v, &d) {
            Some(s) => y -= s,
            None => break,
        }
        ys.push(y);
    }
    ys
}

struct Driver<'a> {
    p: &'a Polynomial,
    cfg: &'a IsolatorConfig,
    limit: usize,
    roots: Vec<RealRoot>,
    stats: IsolationStats,
}

impl Driver<'_> {
    fn push(&mut self, r: RealRoot) {
        let tol = 2.0 * self.cfg.tolerance_at(r.value);
        if let Some(q) = self.roots.iter_mut().find(|q| (q.value - r.value).abs() <= tol) {
            if r.residual < q.residual {
                *q = r;
            }
        } else {
            self.roots.push(r);
        }
    }

    fn full(&self) -> bool {
        self.roots.len() >= self.limit
    }

    /// Stages 2 and 3 over `candidates`; returns the suspect intervals.
    fn pass(&mut self, candidates: &[IsolationInterval]) -> Vec<IsolationInterval> {
        let stage = select_sign_change_intervals(self.p, candidates);
        self.stats.sign_evals += stage.endpoints_evaluated;
        for &t in &stage.exact_roots {
            let r = RealRoot {
                value: t,
                width: 0.0,
                residual: 0.0,
                interval: IsolationInterval::new(t, t, IntervalStatus::Refined),
                source: IsolationInterval::new(t, t, IntervalStatus::SignChange),
                newton_rounds: 0,
                last_step: 0.0,
            };
            self.push(r);
        }
        let mut suspects = stage.suspects;
        let selected = stage.selected;
        let share = self.cfg.work_budget.div_ceil(selected.len().max(1) as u64);
        for iv in &selected {
            if self.full() {
                break;
            }
            let (out, c) = refine_with_budget(self.p, iv, self.cfg, share);
            self.stats.newton_steps += c.newton_steps;
            self.stats.bisections += c.bisections;
            self.stats.evaluations += c.evaluations;
            self.stats.max_newton_rounds = self.stats.max_newton_rounds.max(c.rounds);
            match out {
                Refinement::Root(r) => self.push(r),
                Refinement::Suspect(s) => suspects.push(s),
                Refinement::NoRoot => self.stats.rejected += 1,
            }
        }
        if self.stats.selected == 0 {
            self.stats.selected = selected.len();
        }
        suspects
    }
}

/// One pass of screening and refinement over the candidates from `radii`.
pub fn isolate_with_radii(p: &Polynomial, cfg: &IsolatorConfig, radii: &RadiiEstimate) -> Result<RealIsolation> {
    let n = p.degree();
    cfg.validate(n)?;
    let mut d = Driver {
        p,
        cfg,
        limit: cfg.max_real_roots.unwrap_or(n),
        roots: Vec::new(),
        stats: IsolationStats::default(),
    };
    d.stats.squarings = radii.squarings_used;
    let cands = candidate_intervals(radii);
    d.stats.candidates = cands.len();
    let mut suspects = d.pass(&cands);
    d.roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    suspects.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(RealIsolation {
        roots: d.roots,
        suspects,
        stats: d.stats,
    })
}

/// Algorithm driver: radii, sign screening, refinement, adaptive retries.
pub fn isolate_real_roots(p: &Polynomial, cfg: &IsolatorConfig) -> Result<RealIsolation> {
    let n = p.degree();
    cfg.validate(n)?;
    let mut d = Driver {
        p,
        cfg,
        limit: cfg.max_real_roots.unwrap_or(n),
        roots: Vec::new(),
        stats: IsolationStats::default(),
    };
    if n == 0 {
        return Ok(RealIsolation {
            roots: vec![],
            suspects: vec![],
            stats: d.stats,
        });
    }

    let mut target = cfg.isolation_tolerance(n);
    let radii = refined_radii(p, target)?;
    d.stats.squarings = radii.squarings_used;
    let cands = candidate_intervals(&radii);
    d.stats.candidates = cands.len();
    let mut suspects = d.pass(&cands);

    while !suspects.is_empty() && d.stats.retries < cfg.max_retries && !d.full() {
        target /= 16.0;
        let Ok(radii) = refined_radii(p, target) else { break };
        d.stats.retries += 1;
        let mut still = Vec::new();
        for s in suspects {
            let inside: Vec<IsolationInterval> = candidate_intervals(&radii)
                .into_iter()
                .filter(|c| c.overlaps(&s))
                .collect();
            let found_before = d.roots.len();
            let again = d.pass(&inside);
            if again.is_empty() && d.roots.len() == found_before {
                // nothing new inside: keep the original report
                still.push(s);
            } else {
                still.extend(again);
            }
        }
        suspects = still;
    }

    d.roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    suspects.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    suspects.dedup();
    Ok(RealIsolation {
        roots: d.roots,
        suspects,
        stats: d.stats,
    })
}
