//! Closed-form generating functions, expanded exactly to a fixed order.
//!
//! Every identity has the shape `F(q) * (sum over k of terms)` where
//! `F = (-q;q)_inf / (q;q)_inf`. Writing `e_k = A*C(k,2) + k*a` for the
//! weight of the progression `a, a+A, ..., (k-1)A+a`, every `k`-th term has
//! q-degree at least `e_k`, so only `k` with `e_k <= N` contribute.
//!
//! Bivariate identities record the coefficient of `z^{kA+a} q^n` in a
//! [`BivariateTable`]; the rest produce a [`TruncatedSeries`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::overpartitions::{StatParams, Statistic};
use crate::qseries::{overpartition_gf, pochhammer, PochSpec, Sign, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremKind {
    /// Coefficients of `z^{kA+a} q^n`.
    Bivariate,
    /// Sum of a statistic over all overpartitions of `n`.
    Sigma,
    /// Count of overpartitions whose statistic is at least `kA+a`.
    Survivor,
    /// A univariate count of some class of overpartitions.
    Corollary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    GenMes,
    GenSigmaMes,
    GenNmes,
    GenOmes,
    CorOverlinedExists,
    CorNonOverlinedExists,
    GenOverMes,
    GenSigmaOverMes,
    GenOverNmes,
    CorGenO,
    GenTildeMes,
    GenSigmaTildeMes,
    GenTildeNmes,
    GenTildeOmes,
    CorTildeOverlinedExists,
    CorTildeNonOverlinedExists,
    MGen,
    OverMGen,
    TildeMGen,
}

impl TheoremId {
    pub const ALL: [TheoremId; 19] = [
        TheoremId::GenMes,
        TheoremId::GenSigmaMes,
        TheoremId::GenNmes,
        TheoremId::GenOmes,
        TheoremId::CorOverlinedExists,
        TheoremId::CorNonOverlinedExists,
        TheoremId::GenOverMes,
        TheoremId::GenSigmaOverMes,
        TheoremId::GenOverNmes,
        TheoremId::CorGenO,
        TheoremId::GenTildeMes,
        TheoremId::GenSigmaTildeMes,
        TheoremId::GenTildeNmes,
        TheoremId::GenTildeOmes,
        TheoremId::CorTildeOverlinedExists,
        TheoremId::CorTildeNonOverlinedExists,
        TheoremId::MGen,
        TheoremId::OverMGen,
        TheoremId::TildeMGen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::GenMes => "gen-mes",
            TheoremId::GenSigmaMes => "gen-sigma-mes",
            TheoremId::GenNmes => "gen-nmes",
            TheoremId::GenOmes => "gen-omes",
            TheoremId::CorOverlinedExists => "cor-overlined-exists",
            TheoremId::CorNonOverlinedExists => "cor-nonoverlined-exists",
            TheoremId::GenOverMes => "gen-overmes",
            TheoremId::GenSigmaOverMes => "gen-sigma-overmes",
            TheoremId::GenOverNmes => "gen-over-nmes",
            TheoremId::CorGenO => "cor-gen-o",
            TheoremId::GenTildeMes => "gen-tildemes",
            TheoremId::GenSigmaTildeMes => "gen-sigma-tildemes",
            TheoremId::GenTildeNmes => "gen-tilde-nmes",
            TheoremId::GenTildeOmes => "gen-tilde-omes",
            TheoremId::CorTildeOverlinedExists => "cor-tilde-overlined-exists",
            TheoremId::CorTildeNonOverlinedExists => "cor-tilde-nonoverlined-exists",
            TheoremId::MGen => "m-gen",
            TheoremId::OverMGen => "over-m-gen",
            TheoremId::TildeMGen => "tilde-m-gen",
        }
    }

    pub fn kind(self) -> TheoremKind {
        use TheoremId::*;
        match self {
            GenMes | GenNmes | GenOmes | GenOverMes | GenOverNmes | GenTildeMes | GenTildeNmes
            | GenTildeOmes => TheoremKind::Bivariate,
            GenSigmaMes | GenSigmaOverMes | GenSigmaTildeMes => TheoremKind::Sigma,
            MGen | OverMGen | TildeMGen => TheoremKind::Survivor,
            CorOverlinedExists | CorNonOverlinedExists | CorGenO | CorTildeOverlinedExists
            | CorTildeNonOverlinedExists => TheoremKind::Corollary,
        }
    }

    /// The statistic the identity is about.
    pub fn statistic(self) -> Statistic {
        use TheoremId::*;
        match self {
            GenMes | GenSigmaMes | GenNmes | GenOmes | CorOverlinedExists
            | CorNonOverlinedExists | MGen => Statistic::Mes,
            GenOverMes | GenSigmaOverMes | GenOverNmes | CorGenO | OverMGen => {
                Statistic::OverMes
            }
            GenTildeMes | GenSigmaTildeMes | GenTildeNmes | GenTildeOmes
            | CorTildeOverlinedExists | CorTildeNonOverlinedExists | TildeMGen => {
                Statistic::TildeMes
            }
        }
    }

    pub fn accepts_r(self, r: u32) -> bool {
        match self {
            TheoremId::GenOmes | TheoremId::CorNonOverlinedExists => r == 1,
            _ => r >= self.statistic().min_r(),
        }
    }

    pub fn r_requirement(self) -> &'static str {
        match self {
            TheoremId::GenOmes | TheoremId::CorNonOverlinedExists => "r=1",
            _ if self.statistic() == Statistic::Mes => "r>=1",
            _ => "r>=2",
        }
    }

    pub fn check_r(self, r: u32) -> Result<()> {
        if self.accepts_r(r) {
            Ok(())
        } else {
            Err(Error::RDomain {
                theorem: self,
                requirement: self.r_requirement(),
                r,
            })
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

/// Sparse table of coefficients of `z^{kA+a} q^n`, `0 <= n <= order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateTable {
    order: usize,
    modulus: u32,
    residue: u32,
    rows: Vec<Vec<BigInt>>,
}

impl BivariateTable {
    pub fn new(params: &StatParams, order: usize) -> Self {
        Self {
            order,
            modulus: params.modulus(),
            residue: params.residue(),
            rows: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// One past the largest `k` that may hold a nonzero entry.
    pub fn k_bound(&self) -> usize {
        self.rows.len()
    }

    /// The `z` exponent `kA + a` of row `k`.
    pub fn z_exponent(&self, k: usize) -> u64 {
        k as u64 * u64::from(self.modulus) + u64::from(self.residue)
    }

    pub fn get(&self, k: usize, n: usize) -> BigInt {
        self.rows
            .get(k)
            .and_then(|row| row.get(n))
            .cloned()
            .unwrap_or_default()
    }

    fn row_mut(&mut self, k: usize) -> &mut Vec<BigInt> {
        if self.rows.len() <= k {
            self.rows
                .resize_with(k + 1, || vec![BigInt::zero(); self.order + 1]);
        }
        &mut self.rows[k]
    }

    /// Adds `delta` to entry `(k, n)`; `n` must not exceed the order.
    pub fn add_to(&mut self, k: usize, n: usize, delta: impl Into<BigInt>) {
        assert!(n <= self.order, "n={n} beyond order {}", self.order);
        self.row_mut(k)[n] += delta.into();
    }

    pub fn set_row(&mut self, k: usize, series: &TruncatedSeries) {
        assert_eq!(series.order(), self.order);
        *self.row_mut(k) = series.coeffs().to_vec();
    }

    /// Drops trailing rows that are identically zero.
    pub fn trim(&mut self) {
        while self
            .rows
            .last()
            .is_some_and(|row| row.iter().all(Zero::is_zero))
        {
            self.rows.pop();
        }
    }

    /// Nonzero entries as `(k, n, value)`, ordered by `k` then `n`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.rows.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(n, v)| (k, n, v))
        })
    }

    /// Specialization `z = 1`: the column sums.
    pub fn at_z_one(&self) -> TruncatedSeries {
        let coeffs = (0..=self.order).map(|n| self.rows.iter().map(|row| &row[n]).sum::<BigInt>());
        TruncatedSeries::from_coeffs(coeffs, self.order).expect("exactly order+1 coefficients")
    }

    /// Derivative in `z` at `z = 1`: each row weighted by `kA + a`.
    pub fn z_derivative_at_one(&self) -> TruncatedSeries {
        let coeffs = (0..=self.order).map(|n| {
            self.rows
                .iter()
                .enumerate()
                .map(|(k, row)| BigInt::from(self.z_exponent(k)) * &row[n])
                .sum::<BigInt>()
        });
        TruncatedSeries::from_coeffs(coeffs, self.order).expect("exactly order+1 coefficients")
    }
}

/// Expansion context for one parameter triple and truncation order.
///
/// Caches the overpartition prefactor and the Pochhammer factors
/// `1/(-q^a;q^A)_k` and `(q^a;q^A)_k` for every `k` that can contribute.
#[derive(Debug, Clone)]
pub struct Formulas {
    params: StatParams,
    order: usize,
    prefactor: TruncatedSeries,
    inv_neg: Vec<TruncatedSeries>,
    pos: Vec<TruncatedSeries>,
    tilde: Vec<TruncatedSeries>,
}

impl Formulas {
    pub fn new(params: StatParams, order: usize) -> Result<Self> {
        let a = u64::from(params.residue());
        let m = u64::from(params.modulus());
        let k_max = max_k(&params, order);
        let finite = |sign, offset, step, k| pochhammer(PochSpec::finite(sign, offset, step, k), order);
        let mut inv_neg = Vec::with_capacity(k_max + 2);
        let mut pos = Vec::with_capacity(k_max + 2);
        for k in 0..=k_max as u64 + 1 {
            inv_neg.push(finite(Sign::Minus, a, m, k)?.invert()?);
            pos.push(finite(Sign::Plus, a, m, k)?);
        }
        // (-q^{(r-2)a}; q^{(r-2)A})_k, defined for r >= 2; at r = 2 each
        // factor degenerates to the constant 2.
        let mut tilde = Vec::new();
        if params.r() >= 2 {
            let s = u64::from(params.r() - 2);
            for k in 0..=k_max as u64 + 1 {
                tilde.push(finite(Sign::Minus, s * a, s * m, k)?);
            }
        }
        Ok(Self {
            params,
            order,
            prefactor: overpartition_gf(order),
            inv_neg,
            pos,
            tilde,
        })
    }

    pub fn params(&self) -> &StatParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest `k` whose term can reach degree `<= N`.
    pub fn k_max(&self) -> usize {
        self.inv_neg.len() - 2
    }

    fn e(&self, k: u64) -> u64 {
        progression_weight(&self.params, k)
    }

    fn r(&self) -> u64 {
        u64::from(self.params.r())
    }

    fn size(&self, k: u64) -> u64 {
        self.params.size_at(k)
    }

    /// `coeff * q^exp * factors...`, all truncated to the context order.
    fn term(&self, coeff: impl Into<BigInt>, exp: u64, factors: &[&TruncatedSeries]) -> TruncatedSeries {
        let mut t = TruncatedSeries::monomial(coeff, exp, self.order);
        if t.is_zero() {
            return t;
        }
        for f in factors {
            t = t.mul(f).expect("shared order");
        }
        t
    }

    fn pow2(k: u64) -> BigInt {
        BigInt::from(1) << k
    }

    fn finish(&self, inner: &TruncatedSeries) -> TruncatedSeries {
        self.prefactor.mul(inner).expect("shared order")
    }

    fn check(&self, id: TheoremId, kind: TheoremKind) -> Result<()> {
        if id.kind() != kind {
            return Err(Error::WrongKind(id));
        }
        id.check_r(self.params.r())
    }

    /// The bracketed `k`-th summand of a bivariate identity (without `F`).
    fn bivariate_term(&self, id: TheoremId, k: usize) -> TruncatedSeries {
        let kk = k as u64;
        let r = self.r();
        let (e0, e1) = (self.e(kk), self.e(kk + 1));
        let inv = &self.inv_neg;
        let first_second = match id {
            TheoremId::GenMes => (
                self.term(Self::pow2(kk), r * e0, &[&inv[k]]),
                self.term(Self::pow2(kk + 1), r * e1, &[&inv[k + 1]]),
            ),
            TheoremId::GenNmes => (
                self.term(1, r * e0, &[&inv[k]]),
                self.term(2, r * e1, &[&inv[k + 1]]),
            ),
            TheoremId::GenOmes => (
                self.term(1, e0, &[&self.pos[k], &inv[k]]),
                self.term(2, e1, &[&self.pos[k], &inv[k + 1]]),
            ),
            TheoremId::GenOverMes => (
                self.term(1, r * e0, &[&inv[k]]),
                self.term(1, r * e1, &[&inv[k + 1]]),
            ),
            TheoremId::GenOverNmes => (
                self.term(1, r * e0, &[&inv[k]]),
                self.term(1, r * e0 + (r - 1) * self.size(kk), &[&inv[k]]),
            ),
            TheoremId::GenTildeMes => (
                self.term(1, e0, &[&self.tilde[k], &inv[k]]),
                self.term(1, e1, &[&self.tilde[k + 1], &inv[k + 1]]),
            ),
            TheoremId::GenTildeNmes => (
                self.term(1, (r - 1) * e0, &[&inv[k + 1]]),
                self.term(1, (r - 1) * e1, &[&inv[k + 1]]),
            ),
            TheoremId::GenTildeOmes => (
                self.term(1, e0, &[&self.pos[k], &inv[k + 1]]),
                self.term(1, e0 + (r - 1) * self.size(kk), &[&self.pos[k], &inv[k + 1]]),
            ),
            _ => unreachable!("checked bivariate"),
        };
        first_second.0.sub(&first_second.1).expect("shared order")
    }

    pub fn rhs_bivariate(&self, id: TheoremId) -> Result<BivariateTable> {
        self.check(id, TheoremKind::Bivariate)?;
        let mut table = BivariateTable::new(&self.params, self.order);
        for k in 0..=self.k_max() {
            let row = self.finish(&self.bivariate_term(id, k));
            table.set_row(k, &row);
        }
        table.trim();
        Ok(table)
    }

    /// Survivor generating function without the prefactor; the summand of
    /// the sigma identities.
    fn survivor_term(&self, stat: Statistic, k: usize) -> TruncatedSeries {
        let kk = k as u64;
        let r = self.r();
        match stat {
            Statistic::Mes => self.term(Self::pow2(kk), r * self.e(kk), &[&self.inv_neg[k]]),
            Statistic::OverMes => self.term(1, r * self.e(kk), &[&self.inv_neg[k]]),
            Statistic::TildeMes => self.term(1, self.e(kk), &[&self.tilde[k], &self.inv_neg[k]]),
        }
    }

    pub fn rhs_sigma(&self, id: TheoremId) -> Result<TruncatedSeries> {
        self.check(id, TheoremKind::Sigma)?;
        let stat = id.statistic();
        let mut inner = TruncatedSeries::constant(self.params.residue(), self.order);
        let modulus = BigInt::from(self.params.modulus());
        for k in 1..=self.k_max() {
            let t = self.survivor_term(stat, k).scale(&modulus);
            inner = inner.add(&t)?;
        }
        Ok(self.finish(&inner))
    }

    /// Generating function of `#{pi : statistic(pi) >= kA + a}`.
    pub fn rhs_survivor(&self, id: TheoremId, k: u64) -> Result<TruncatedSeries> {
        self.check(id, TheoremKind::Survivor)?;
        match usize::try_from(k).ok().filter(|&k| k <= self.k_max()) {
            Some(k) => Ok(self.finish(&self.survivor_term(id.statistic(), k))),
            // e_k > N, so the series vanishes to this order
            None => Ok(TruncatedSeries::zero(self.order)),
        }
    }

    pub fn rhs_corollary(&self, id: TheoremId) -> Result<TruncatedSeries> {
        self.check(id, TheoremKind::Corollary)?;
        let r = self.r();
        let inv = &self.inv_neg;
        let mut inner = TruncatedSeries::zero(self.order);
        for k in 0..=self.k_max() {
            let kk = k as u64;
            let e = self.e(kk);
            let t = match id {
                TheoremId::CorOverlinedExists if k >= 1 => self.term(1, r * e, &[&inv[k]]),
                TheoremId::CorNonOverlinedExists if k >= 1 => {
                    self.term(1, e, &[&self.pos[k - 1], &inv[k - 1]])
                }
                TheoremId::CorGenO => self.term(1, r * e + (r - 1) * self.size(kk), &[&inv[k + 1]]),
                TheoremId::CorTildeOverlinedExists => {
                    self.term(1, (r - 1) * e + self.size(kk), &[&inv[k + 1]])
                }
                TheoremId::CorTildeNonOverlinedExists if k >= 1 => {
                    // q^{(k-1)A+a} + q^{(r-2)((k-1)A+a)}; at r = 2 the second
                    // monomial is the constant 1
                    let prev = self.size(kk - 1);
                    let pair = TruncatedSeries::monomial(1, prev, self.order)
                        .add(&TruncatedSeries::monomial(1, (r - 2) * prev, self.order))?;
                    self.term(1, e, &[&self.pos[k - 1], &inv[k], &pair])
                }
                _ => continue,
            };
            inner = inner.add(&t)?;
        }
        Ok(self.finish(&inner))
    }
}

/// `A*C(k,2) + k*a`, the total size of `a, a+A, ..., (k-1)A + a`.
pub fn progression_weight(params: &StatParams, k: u64) -> u64 {
    let binom = if k < 2 { 0 } else { k * (k - 1) / 2 };
    u64::from(params.modulus()) * binom + k * u64::from(params.residue())
}

fn max_k(params: &StatParams, order: usize) -> usize {
    let mut k = 0u64;
    while progression_weight(params, k + 1) <= order as u64 {
        k += 1;
    }
    k as usize
}

pub fn rhs_bivariate(id: TheoremId, params: StatParams, order: usize) -> Result<BivariateTable> {
    id.check_r(params.r())?;
    Formulas::new(params, order)?.rhs_bivariate(id)
}

pub fn rhs_sigma(id: TheoremId, params: StatParams, order: usize) -> Result<TruncatedSeries> {
    id.check_r(params.r())?;
    Formulas::new(params, order)?.rhs_sigma(id)
}

pub fn rhs_survivor(
    id: TheoremId,
    params: StatParams,
    k: u64,
    order: usize,
) -> Result<TruncatedSeries> {
    id.check_r(params.r())?;
    Formulas::new(params, order)?.rhs_survivor(id, k)
}

pub fn rhs_corollary(id: TheoremId, params: StatParams, order: usize) -> Result<TruncatedSeries> {
    id.check_r(params.r())?;
    Formulas::new(params, order)?.rhs_corollary(id)
}
