//! Sets without popular corners in `[N]^3` and without popular five-point
//! patterns in `[N]`, and their lifts to general patterns.
//!
//! Both constructions pull back `F = {n : frac(nα) ∈ B}` through a
//! quadratic form: `f(x,y,z) = (x-y)(x+y-2z)` for corners, `x²` for
//! five-point patterns. `B` is a union of short intervals indexed by a
//! relation-free `Λ ⊆ {0..L-1}`, and `α` has denominators `q` coprime to
//! `lcm(1..L)`, with `N = q`.

mod lift;
mod oracle;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use lift::{affine_frame, lattice_map, lift_avoider, phi_projection, PhiProjection};
pub use oracle::{norm_below_exact, rational_norm, FracOracle};

use crate::behrend::{behrend_qc_free, behrend_sum_free, QcSystem};
use crate::contfrac::{build_alpha_hard, verify_alpha, AlphaReport, AlphaSequence};
use crate::mandache::counter_u64;
use crate::patterns::GridSet;
use crate::text::{format_rational, serde_big};
use crate::{Error, Rational, Result};

/// Largest side for which sets are materialized as bit grids.
pub const MATERIALIZE_LIMIT: u64 = 2000;

/// `c` in `L = ⌈exp(c·ln(1/δ)²)⌉`. With this value `|Λ|/(9L) ≥ 2δ` holds for
/// every `δ ≤ 1/40` that we have checked.
pub const DEFAULT_C: f64 = 0.05;

/// `(x - y)(x + y - 2z)`.
pub fn f_quad(x: i128, y: i128, z: i128) -> i128 {
    (x - y) * (x + y - 2 * z)
}

/// Intervals `I_j = [j/(Θ₁L), j/(Θ₁L) + 1/(Θ₁²L))` for `j ∈ Λ`.
///
/// On a grid of `G = Θ₁²L` cells, `I_j` is exactly cell `jΘ₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSystem {
    #[serde(rename = "L")]
    l: u64,
    theta1: u64,
    lambda: Vec<u64>,
}

impl IntervalSystem {
    pub fn new(l: u64, theta1: u64, mut lambda: Vec<u64>) -> Result<Self> {
        if l == 0 || theta1 == 0 {
            return Err(Error::Invalid("L and Θ₁ must be positive".into()));
        }
        lambda.sort_unstable();
        lambda.dedup();
        if let Some(&j) = lambda.iter().find(|&&j| j >= l) {
            return Err(Error::Invalid(format!("Λ element {j} outside [0, {l})")));
        }
        theta1.checked_mul(theta1).and_then(|t| t.checked_mul(l)).ok_or(Error::Overflow("interval grid"))?;
        Ok(IntervalSystem { l, theta1, lambda })
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn theta1(&self) -> u64 {
        self.theta1
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    /// `G = Θ₁²L`.
    pub fn grid(&self) -> u64 {
        self.theta1 * self.theta1 * self.l
    }

    pub fn cell_in_b(&self, cell: u64) -> bool {
        cell.is_multiple_of(self.theta1) && self.lambda.binary_search(&(cell / self.theta1)).is_ok()
    }

    /// `[lo, hi)` of `I_j`.
    pub fn interval(&self, j: u64) -> (Rational, Rational) {
        let g = BigInt::from(self.grid());
        let lo = Rational::new(BigInt::from(j * self.theta1), g.clone());
        let hi = Rational::new(BigInt::from(j * self.theta1 + 1), g);
        (lo, hi)
    }

    /// Whether a point of `[0, 1)` lies in `B`.
    pub fn contains(&self, x: &Rational) -> bool {
        let frac = x - x.floor();
        let cell = (frac * Rational::from_integer(self.grid().into())).floor().to_integer();
        self.cell_in_b(cell.to_u64().expect("within grid"))
    }

    /// `m(B) = |Λ|/(Θ₁²L)`.
    pub fn measure(&self) -> Rational {
        Rational::new(self.lambda.len().into(), self.grid().into())
    }
}

/// `(Θ₁, Θ₂, Θ₃)` for a five-point configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thetas {
    pub theta1: u64,
    pub theta2: u64,
    pub theta3: u64,
}

/// `Θ₁ = 4 max|γ|`, `Θ₂ = |2(a₁-a₂)(a₂-a₃)(a₃-a₁)|`,
/// `Θ₃ = ⌈3 max_{i≤3} a_i² / Θ₁²⌉`.
pub fn theta_constants(a: &[i64], sys: &QcSystem) -> Result<Thetas> {
    if a.len() < 3 {
        return Err(Error::Invalid("need at least three coordinates".into()));
    }
    let theta1 = 4 * sys.max_abs_gamma();
    if theta1 == 0 {
        return Err(Error::Invalid("QC system has no coefficients".into()));
    }
    let (a1, a2, a3) = (a[0] as i128, a[1] as i128, a[2] as i128);
    let theta2 = (2 * (a1 - a2) * (a2 - a3) * (a3 - a1)).unsigned_abs();
    let max_sq = a[..3].iter().map(|&v| (v as i128 * v as i128) as u128).max().unwrap_or(0);
    let t1sq = theta1 as u128 * theta1 as u128;
    let theta3 = (3 * max_sq).div_ceil(t1sq);
    Ok(Thetas {
        theta1,
        theta2: theta2.try_into().map_err(|_| Error::Overflow("Θ₂"))?,
        theta3: theta3.try_into().map_err(|_| Error::Overflow("Θ₃"))?,
    })
}

/// `L = ⌈exp(c·ln(1/δ)²)⌉`, at least 2.
pub fn choose_l(delta: &Rational, c: f64) -> Result<u64> {
    let d = delta.numer().to_f64().unwrap_or(f64::NAN) / delta.denom().to_f64().unwrap_or(f64::NAN);
    if !(d > 0.0 && d < 0.5) {
        return Err(Error::Invalid("δ must lie in (0, 1/2)".into()));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Invalid("c must be positive".into()));
    }
    let l = (c * (1.0 / d).ln().powi(2)).exp().ceil();
    if !l.is_finite() || l > 1e12 {
        return Err(Error::Overflow("L"));
    }
    Ok((l as u64).max(2))
}

/// A chosen approximant `p/q` of `α_j` (built with `r = 2^j`) at index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaChoice {
    pub j: u32,
    pub i: u32,
    #[serde(with = "serde_big")]
    pub p: BigInt,
    #[serde(with = "serde_big")]
    pub q: BigInt,
    pub alpha: AlphaSequence,
    pub report: AlphaReport,
}

/// Searches `r = 2^j`, `1 ≤ j ≤ 2L+1`, and indices `i ≥ K` for the
/// denominator `q_{j,i}` closest to `n` (in ratio), within a factor of 4.
pub fn select_alpha(l: u64, n: u64) -> Result<AlphaChoice> {
    if n == 0 {
        return Err(Error::Invalid("requested N must be positive".into()));
    }
    let upper = BigInt::from(n) * 4;
    let lower = BigInt::from(n);
    let mut best: Option<(f64, u32, u32, AlphaSequence)> = None;
    for j in 1..=(2 * l + 1).min(u32::MAX as u64) as u32 {
        // q_{j,i} > 2^j, so larger j cannot land within a factor of 4 of n
        if BigInt::from(1u8) << j >= upper {
            break;
        }
        let alpha = build_alpha_hard(l, Rational::from_integer(BigInt::from(1u8) << j))?;
        for (i, (_, q)) in (alpha.k()..).zip(alpha.convergents().skip(alpha.t())) {
            if q > upper {
                break;
            }
            if &q * 4 >= lower {
                let score = (q.to_f64().unwrap_or(f64::INFINITY) / n as f64).ln().abs();
                if best.as_ref().is_none_or(|b| score < b.0) {
                    best = Some((score, j, i, alpha.clone()));
                }
            }
        }
    }
    let (_, j, i, alpha) =
        best.ok_or_else(|| Error::Invalid(format!("no approximant denominator within a factor of 4 of N = {n}")))?;
    let (p, q) = alpha.pq(i).expect("i >= K");
    let report = verify_alpha(&alpha, i)?;
    Ok(AlphaChoice { j, i, p, q, alpha, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// `A = {x ∈ [N]^3 : f(x) ∈ F}`.
    Corner,
    /// `A = {x ∈ [N] : x² ∈ F}`.
    Square,
}

/// How to size a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AvoiderConfig {
    pub delta: Option<Rational>,
    pub c: f64,
    /// Overrides the `L` derived from `δ` and `c`.
    pub l: Option<u64>,
    /// Target side; the actual side is the nearest `q_{j,i}`.
    pub n: u64,
}

impl AvoiderConfig {
    pub fn resolve_l(&self) -> Result<u64> {
        match (self.l, &self.delta) {
            (Some(l), _) if l >= 2 => Ok(l),
            (Some(_), _) => Err(Error::Invalid("L must be at least 2".into())),
            (None, Some(d)) => choose_l(d, self.c),
            (None, None) => Err(Error::Invalid("either δ or L is required".into())),
        }
    }
}

/// Everything needed to rebuild an avoider bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvoiderParams {
    pub form: Form,
    pub delta: Option<String>,
    pub c: f64,
    #[serde(rename = "L")]
    pub l: u64,
    pub lambda_size: usize,
    pub system: IntervalSystem,
    /// `m(B)`, the limiting density.
    pub target_density: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub j: u32,
    pub i: u32,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(with = "serde_big")]
    pub p: BigInt,
    #[serde(with = "serde_big")]
    pub q: BigInt,
    pub a: Option<Vec<i64>>,
    pub qc: Option<QcSystem>,
    pub thetas: Option<Thetas>,
    pub alpha: AlphaSequence,
    pub alpha_report: AlphaReport,
}

/// Outcome of a transfer-lemma check for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferCheck {
    /// All values of the configuration land in `B`.
    pub premise: bool,
    /// The lemma's norm bound.
    pub conclusion: bool,
}

impl TransferCheck {
    /// False only when the premise holds and the conclusion fails.
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

#[derive(Debug, Clone)]
pub struct Avoider {
    params: AvoiderParams,
    oracle: FracOracle,
}

impl Avoider {
    pub fn from_params(params: AvoiderParams) -> Result<Self> {
        if params.q != BigInt::from(params.n) {
            return Err(Error::Invalid("N must equal the approximant denominator".into()));
        }
        let oracle = FracOracle::new(params.alpha.clone(), params.system.grid());
        Ok(Avoider { params, oracle })
    }

    pub fn params(&self) -> &AvoiderParams {
        &self.params
    }

    pub fn system(&self) -> &IntervalSystem {
        &self.params.system
    }

    pub fn oracle(&self) -> &FracOracle {
        &self.oracle
    }

    pub fn side(&self) -> u64 {
        self.params.n
    }

    pub fn dim(&self) -> usize {
        match self.params.form {
            Form::Corner => 3,
            Form::Square => 1,
        }
    }

    /// `v ∈ F`, i.e. `frac(vα) ∈ B`.
    pub fn value_in_f(&self, v: i128) -> bool {
        self.params.system.cell_in_b(self.oracle.cell(v))
    }

    fn form_value(&self, x: &[i64]) -> i128 {
        match self.params.form {
            Form::Corner => f_quad(x[0] as i128, x[1] as i128, x[2] as i128),
            Form::Square => x[0] as i128 * x[0] as i128,
        }
    }

    /// Membership for a point of `[N]^dim` (1-based).
    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && x.iter().all(|&c| c >= 1 && c as u64 <= self.side()) && self.value_in_f(self.form_value(x))
    }

    pub fn materialize(&self) -> Result<GridSet> {
        if self.side() > MATERIALIZE_LIMIT {
            return Err(Error::Invalid(format!(
                "N = {} exceeds the materialization limit {MATERIALIZE_LIMIT}; use the predicate",
                self.side()
            )));
        }
        let n = self.side() as i64;
        if self.params.form == Form::Square {
            return GridSet::from_predicate(1, n as usize, |x| self.contains(x));
        }
        // f-values lie in (-2N², 2N²); decide each once
        let span = 2 * (n as i128) * (n as i128);
        let table: Vec<bool> = (-span..=span).into_par_iter().map(|v| self.value_in_f(v)).collect();
        GridSet::from_predicate(3, n as usize, |x| {
            table[(f_quad(x[0] as i128, x[1] as i128, x[2] as i128) + span) as usize]
        })
    }

    /// `|A|`, exactly. For corners this runs over `(u, w) = (x-y, x+y-2z)`
    /// with their multiplicities, `O(N²)` membership decisions.
    pub fn count(&self) -> u128 {
        let n = self.side() as i64;
        match self.params.form {
            Form::Square => (1..=n).into_par_iter().filter(|&x| self.value_in_f(x as i128 * x as i128)).count() as u128,
            Form::Corner => (1 - n..n)
                .into_par_iter()
                .map(|u| {
                    let mut total = 0u128;
                    let mut w = -2 * n + 1;
                    if (w - u).rem_euclid(2) != 0 {
                        w += 1;
                    }
                    while w < 2 * n {
                        let m = corner_multiplicity(n, u, w);
                        if m > 0 && self.value_in_f(u as i128 * w as i128) {
                            total += m as u128;
                        }
                        w += 2;
                    }
                    total
                })
                .sum(),
        }
    }

    /// `|A| / N^dim`, exactly.
    pub fn density(&self) -> Rational {
        let total = BigInt::from(self.side()).pow(self.dim() as u32);
        Rational::new(BigInt::from(self.count()), total)
    }

    /// Fraction of `samples` uniform points that are members, and its
    /// standard error. Points come from the counter generator under `seed`.
    pub fn sample_density(&self, samples: u64, seed: u64) -> (f64, f64) {
        let n = self.side();
        let dim = self.dim();
        let hits = (0..samples)
            .into_par_iter()
            .filter(|&s| {
                let x: Vec<i64> = (0..dim)
                    .map(|r| (((counter_u64(seed, r as u64, s) as u128 * n as u128) >> 64) + 1) as i64)
                    .collect();
                self.contains(&x)
            })
            .count() as f64;
        let p = hits / samples as f64;
        (p, (p * (1.0 - p) / samples as f64).sqrt())
    }

    /// For a corner anchored at `a` with difference `s`: premise = all four
    /// points in `A`, conclusion = `‖2α(a₁-a₂)s‖ < 1/(9L)`.
    pub fn corner_transfer(&self, a: [i64; 3], s: i64) -> TransferCheck {
        let pts = [a, [a[0] + s, a[1], a[2]], [a[0], a[1] + s, a[2]], [a[0], a[1], a[2] + s]];
        let premise = pts.iter().all(|p| self.contains(p));
        // 1/(9L) is exactly one cell when Θ₁ = 3
        let cells = self.params.system.grid() / (9 * self.params.l);
        let conclusion = cells > 0 && self.oracle.norm_below(2 * (a[0] - a[1]) as i128 * s as i128, cells);
        TransferCheck { premise, conclusion }
    }

    /// `‖2s(a₁-a₂)p/q‖ ≤ 3/L`, the rational step after the transfer lemma.
    pub fn corner_downstream(&self, a: [i64; 3], s: i64) -> bool {
        let q = &self.params.q;
        let r = BigInt::from(2 * s as i128 * (a[0] - a[1]) as i128) * &self.params.p;
        let norm = rational_norm(&Rational::new(r, q.clone()));
        norm * Rational::from_integer(self.params.l.into()) <= Rational::from_integer(3.into())
    }

    /// For `x + a_i d` (`i = 1..5`): premise = all five in `A`, conclusion
    /// = `‖Θ₂ α x d‖ < Θ₃/L`.
    pub fn five_point_transfer(&self, x: i64, d: i64) -> Result<TransferCheck> {
        let a = self.params.a.as_ref().ok_or_else(|| Error::Invalid("not a five-point avoider".into()))?;
        let th = self.params.thetas.ok_or_else(|| Error::Invalid("not a five-point avoider".into()))?;
        let premise = a.iter().all(|&ai| self.contains(&[x + ai * d]));
        let cells = th.theta3 as u128 * th.theta1 as u128 * th.theta1 as u128;
        let v = th.theta2 as i128 * x as i128 * d as i128;
        let conclusion = if cells >= self.params.system.grid() as u128 {
            true
        } else {
            self.oracle.norm_below(v, cells as u64)
        };
        Ok(TransferCheck { premise, conclusion })
    }

    /// The proof's cap `14N³/L` on corners with any fixed difference.
    pub fn corner_count_bound(&self) -> Rational {
        Rational::new(BigInt::from(14) * BigInt::from(self.side()).pow(3), BigInt::from(self.params.l))
    }
}

/// `#{(x, y, z) ∈ [N]^3 : x - y = u, x + y - 2z = w}`.
pub fn corner_multiplicity(n: i64, u: i64, w: i64) -> u64 {
    if (w - u).rem_euclid(2) != 0 {
        return 0;
    }
    // y ranges over [1, N] ∩ [1-u, N-u]; z = y - (w-u)/2 ∈ [1, N]
    let h = (w - u) / 2;
    let lo = 1.max(1 - u).max(1 + h);
    let hi = n.min(n - u).min(n + h);
    (hi - lo + 1).max(0) as u64
}

fn alpha_params(
    form: Form,
    cfg: &AvoiderConfig,
    l: u64,
    system: IntervalSystem,
    a: Option<Vec<i64>>,
    qc: Option<QcSystem>,
    thetas: Option<Thetas>,
) -> Result<AvoiderParams> {
    let choice = select_alpha(l, cfg.n)?;
    let n = choice.q.to_u64().ok_or(Error::Overflow("N"))?;
    Ok(AvoiderParams {
        form,
        delta: cfg.delta.as_ref().map(format_rational),
        c: cfg.c,
        l,
        lambda_size: system.lambda().len(),
        target_density: format_rational(&system.measure()),
        system,
        n,
        j: choice.j,
        i: choice.i,
        k: choice.alpha.k(),
        p: choice.p,
        q: choice.q,
        a,
        qc,
        thetas,
        alpha: choice.alpha,
        alpha_report: choice.report,
    })
}

/// `A = {x ∈ [N]^3 : f(x) ∈ F}` with `Λ` free of nontrivial `x+y+z = 3w`.
pub fn build_corner_avoider(cfg: &AvoiderConfig) -> Result<Avoider> {
    let l = cfg.resolve_l()?;
    let lambda = behrend_sum_free(l)?.elements;
    let system = IntervalSystem::new(l, 3, lambda)?;
    Avoider::from_params(alpha_params(Form::Corner, cfg, l, system, None, None, None)?)
}

/// Like [`build_corner_avoider`] with an explicit `Λ`, for experiments on
/// sets that are not relation-free.
pub fn build_corner_avoider_with(cfg: &AvoiderConfig, lambda: Vec<u64>) -> Result<Avoider> {
    let l = cfg.resolve_l()?;
    let system = IntervalSystem::new(l, 3, lambda)?;
    Avoider::from_params(alpha_params(Form::Corner, cfg, l, system, None, None, None)?)
}

/// `A = {x ∈ [N] : x² ∈ F}` with `Λ` free of `QC(a)`.
pub fn build_five_point_avoider(a: &[i64], cfg: &AvoiderConfig) -> Result<Avoider> {
    let l = cfg.resolve_l()?;
    let (lambda, sys) = behrend_qc_free(a, l)?;
    let thetas = theta_constants(a, &sys)?;
    let system = IntervalSystem::new(l, thetas.theta1, lambda.elements)?;
    Avoider::from_params(alpha_params(Form::Square, cfg, l, system, Some(a.to_vec()), Some(sys), Some(thetas))?)
}

/// The corner transfer lemma decided purely from enclosures of `α`: the
/// premise asks that `frac(α f(·))` lie in `B` at all four corner points.
pub fn check_corner_transfer(system: &IntervalSystem, alpha: &AlphaSequence, n: [i64; 3], d: i64) -> TransferCheck {
    let vals = [
        f_quad(n[0] as i128, n[1] as i128, n[2] as i128),
        f_quad((n[0] + d) as i128, n[1] as i128, n[2] as i128),
        f_quad(n[0] as i128, (n[1] + d) as i128, n[2] as i128),
        f_quad(n[0] as i128, n[1] as i128, (n[2] + d) as i128),
    ];
    let premise = vals.iter().all(|&v| exact_in_b(system, alpha, v));
    let tau = Rational::new(1.into(), BigInt::from(9 * system.l()));
    let conclusion = norm_below_exact(alpha, &BigInt::from(2 * (n[0] - n[1]) as i128 * d as i128), &tau);
    TransferCheck { premise, conclusion }
}

/// The five-point transfer lemma decided from enclosures of `α`.
pub fn check_five_point_transfer(
    system: &IntervalSystem,
    alpha: &AlphaSequence,
    thetas: &Thetas,
    a: &[i64],
    n: i64,
    d: i64,
) -> TransferCheck {
    let premise = a.iter().all(|&ai| {
        let x = (n + ai * d) as i128;
        exact_in_b(system, alpha, x * x)
    });
    let tau = Rational::new(BigInt::from(thetas.theta3), BigInt::from(system.l()));
    let conclusion = norm_below_exact(alpha, &BigInt::from(thetas.theta2 as i128 * n as i128 * d as i128), &tau);
    TransferCheck { premise, conclusion }
}

fn exact_in_b(system: &IntervalSystem, alpha: &AlphaSequence, v: i128) -> bool {
    let g = BigInt::from(system.grid());
    if v == 0 {
        return system.cell_in_b(0);
    }
    let scale = Rational::from_integer(BigInt::from(v) * &g);
    let cell = alpha.decide(0, |e| {
        let (x, y) = (&e.lo * &scale, &e.hi * &scale);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let f = lo.floor().to_integer();
        (hi.ceil().to_integer() - 1 == f).then_some(f)
    });
    let cell = num_integer::Integer::mod_floor(&cell, &g);
    debug_assert!(!cell.is_negative() && cell < g);
    system.cell_in_b(cell.to_u64().expect("below grid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: u64, n: u64) -> AvoiderConfig {
        AvoiderConfig { delta: None, c: DEFAULT_C, l: Some(l), n }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_quad(1, 1, 1), 0);
        assert_eq!(f_quad(2, 1, 0), 3);
        assert_eq!(f_quad(3, 1, 0) + f_quad(2, 2, 0) + f_quad(2, 1, 1), 9);
    }

    #[test]
    fn interval_system_cells() {
        let s = IntervalSystem::new(4, 3, vec![0, 2]).unwrap();
        assert_eq!(s.grid(), 36);
        assert!(s.cell_in_b(0) && s.cell_in_b(6));
        assert!(!s.cell_in_b(3) && !s.cell_in_b(1) && !s.cell_in_b(7));
        assert_eq!(s.measure(), Rational::new(2.into(), 36.into()));
        let (lo, hi) = s.interval(2);
        assert_eq!((lo.clone(), hi.clone()), (Rational::new(1.into(), 6.into()), Rational::new(7.into(), 36.into())));
        assert!(s.contains(&lo));
        assert!(!s.contains(&hi));
        assert!(s.contains(&(Rational::from_integer(5.into()) + &lo)));
        assert!(IntervalSystem::new(4, 3, vec![4]).is_err());
    }

    #[test]
    fn thetas_for_five_ap() {
        let sys = crate::behrend::qc_coefficients(&[0, 1, 2, 3, 4]).unwrap();
        let th = theta_constants(&[0, 1, 2, 3, 4], &sys).unwrap();
        assert_eq!((th.theta1, th.theta2, th.theta3), (12, 4, 1));
    }

    #[test]
    fn default_c_meets_density_target() {
        for inv in [40u64, 100, 1000, 10_000, 100_000] {
            let delta = Rational::new(1.into(), inv.into());
            let l = choose_l(&delta, DEFAULT_C).unwrap();
            let lam = behrend_sum_free(l).unwrap().len();
            let measure = Rational::new(lam.into(), (9 * l).into());
            assert!(measure >= &delta * Rational::from_integer(2.into()), "1/δ = {inv}, L = {l}");
        }
    }

    #[test]
    fn selects_expected_denominator() {
        let choice = select_alpha(8, 200).unwrap();
        assert_eq!((choice.q.clone(), choice.j, choice.i), (BigInt::from(257), 8, 0));
        assert!(choice.report.passed());
        assert!(select_alpha(8, 0).is_err());
    }

    #[test]
    fn multiplicities_partition_the_cube() {
        for n in 1..8i64 {
            let mut total = 0;
            for u in 1 - n..n {
                for w in 1 - 2 * n..2 * n {
                    let m = corner_multiplicity(n, u, w);
                    let naive = (1..=n)
                        .flat_map(|x| (1..=n).flat_map(move |y| (1..=n).map(move |z| (x, y, z))))
                        .filter(|&(x, y, z)| x - y == u && x + y - 2 * z == w)
                        .count() as u64;
                    assert_eq!(m, naive);
                    total += m;
                }
            }
            assert_eq!(total, (n * n * n) as u64);
        }
    }

    #[test]
    fn small_corner_pipeline() {
        let av = build_corner_avoider(&cfg(8, 40)).unwrap();
        let n = av.side() as i64;
        let set = av.materialize().unwrap();
        assert_eq!(set.len() as u128, av.count());
        for p in set.points() {
            let v = f_quad(p[0] as i128, p[1] as i128, p[2] as i128);
            assert!(exact_in_b(av.system(), &av.params().alpha, v), "{p:?}");
        }
        // spot-check non-members as well
        for x in 1..=n.min(12) {
            for y in 1..=n.min(12) {
                let p = [x, y, 3];
                assert_eq!(set.contains(&p), exact_in_b(av.system(), &av.params().alpha, f_quad(x as i128, y as i128, 3)));
            }
        }
    }

    #[test]
    fn full_lambda_density_is_about_one_ninth() {
        let av = build_corner_avoider_with(&cfg(8, 300), (0..8).collect()).unwrap();
        assert_eq!(av.system().measure(), Rational::new(1.into(), 9.into()));
        let d = av.density();
        let d = d.numer().to_f64().unwrap() / d.denom().to_f64().unwrap();
        assert!((d - 1.0 / 9.0).abs() < 0.02, "density {d}");
        let (est, se) = av.sample_density(20_000, 7);
        assert!((est - d).abs() < 5.0 * se + 1e-9, "{est} vs {d}");
    }

    #[test]
    fn params_round_trip() {
        let av = build_five_point_avoider(&[0, 1, 2, 3, 4], &cfg(8, 100)).unwrap();
        let json = serde_json::to_string(av.params()).unwrap();
        let back: AvoiderParams = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, av.params());
        let rebuilt = Avoider::from_params(back).unwrap();
        assert_eq!(rebuilt.materialize().unwrap(), av.materialize().unwrap());
    }

    #[test]
    fn transfer_lemma_fails_for_solution_rich_lambda() {
        // 0 + 1 + 2 = 3·1, so Λ = {0, 1, 2} is not relation-free
        let av = build_corner_avoider_with(&cfg(3, 60), vec![0, 1, 2]).unwrap();
        let n = av.side() as i64;
        let mut violation = None;
        'search: for s in 1..n {
            for x in 1..=n - s {
                for y in 1..=n - s {
                    for z in 1..=n - s {
                        let t = av.corner_transfer([x, y, z], s);
                        if !t.holds() {
                            violation = Some(([x, y, z], s));
                            break 'search;
                        }
                    }
                }
            }
        }
        let (p, s) = violation.expect("a violating corner exists");
        let exact = check_corner_transfer(av.system(), &av.params().alpha, p, s);
        assert!(exact.premise && !exact.conclusion);
    }
}
