//! Brute-force ground truth and identity checking.
//!
//! A [`Census`] enumerates every overpartition up to the truncation order once
//! for a parameter triple and records everything the identities count:
//! statistic histograms per class, statistic sums, survivor counts and the
//! "exists a part below the statistic" classes. [`verify_identity`] then
//! compares those counts with the expanded formula, entry by entry, with exact
//! integer equality.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formulas::{BivariateTable, Formulas, TheoremId, TheoremKind};
use crate::overpartitions::{enumerate, ClassFamily, Overpartition, StatParams, Statistic};
use crate::qseries::TruncatedSeries;

/// Which overpartitions a statistic table ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subset {
    All,
    /// Parts below the statistic are non-overlined (`N` classes).
    NClass,
    /// The `O` classes; see [`Subset::class`].
    OClass,
}

impl Subset {
    pub const ALL: [Subset; 3] = [Subset::All, Subset::NClass, Subset::OClass];

    pub fn class(self, stat: Statistic) -> Option<ClassFamily> {
        match (stat, self) {
            (_, Subset::All) => None,
            (Statistic::Mes, Subset::NClass) => Some(ClassFamily::Nmes),
            (Statistic::Mes, Subset::OClass) => Some(ClassFamily::Omes),
            (Statistic::OverMes, Subset::NClass) => Some(ClassFamily::NOverMes),
            (Statistic::OverMes, Subset::OClass) => Some(ClassFamily::OOverMes),
            (Statistic::TildeMes, Subset::NClass) => Some(ClassFamily::NTildeMes),
            (Statistic::TildeMes, Subset::OClass) => Some(ClassFamily::OTildeMes),
        }
    }

    fn accepts_r(self, stat: Statistic, r: u32) -> bool {
        r >= stat.min_r() && self.class(stat).is_none_or(|c| c.accepts_r(r))
    }
}

/// The table a bivariate identity is about.
pub fn table_target(id: TheoremId) -> Option<(Statistic, Subset)> {
    use TheoremId::*;
    Some(match id {
        GenMes => (Statistic::Mes, Subset::All),
        GenNmes => (Statistic::Mes, Subset::NClass),
        GenOmes => (Statistic::Mes, Subset::OClass),
        GenOverMes => (Statistic::OverMes, Subset::All),
        GenOverNmes => (Statistic::OverMes, Subset::NClass),
        GenTildeMes => (Statistic::TildeMes, Subset::All),
        GenTildeNmes => (Statistic::TildeMes, Subset::NClass),
        GenTildeOmes => (Statistic::TildeMes, Subset::OClass),
        _ => return None,
    })
}

fn check_subset(stat: Statistic, subset: Subset, p: &StatParams) -> Result<()> {
    if subset.accepts_r(stat, p.r()) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "{} with {subset:?} is not defined for r={}",
            stat.name(),
            p.r()
        )))
    }
}

/// Tabulates `#{pi : statistic(pi) = kA + a, pi in subset}` by weight from an
/// arbitrary collection of overpartitions. Entries with weight above `order`
/// are ignored.
pub fn table_from<I>(
    overpartitions: I,
    stat: Statistic,
    subset: Subset,
    p: &StatParams,
    order: usize,
) -> Result<BivariateTable>
where
    I: IntoIterator<Item = Overpartition>,
{
    check_subset(stat, subset, p)?;
    let mut table = BivariateTable::new(p, order);
    for pi in overpartitions {
        let n = pi.weight() as usize;
        if n > order {
            continue;
        }
        if let Some(class) = subset.class(stat) {
            if !pi.in_class(p, class)? {
                continue;
            }
        }
        let s = pi.statistic(p, stat)?;
        let k = p.index_of(s).expect("statistics lie in the progression") as usize;
        table.add_to(k, n, 1);
    }
    table.trim();
    Ok(table)
}

/// Ground-truth table by full enumeration of every weight `n <= order`.
pub fn enumerate_table(
    stat: Statistic,
    subset: Subset,
    p: &StatParams,
    order: usize,
) -> Result<BivariateTable> {
    check_subset(stat, subset, p)?;
    let all = (0..=order as u64).flat_map(enumerate);
    table_from(all, stat, subset, p, order)
}

#[derive(Debug, Clone, Default)]
struct StatCounts {
    /// `[subset][k][n]`
    hist: [Vec<Vec<u64>>; 3],
    sigma: Vec<u64>,
    /// `[k][n]`: statistic at least `kA + a`
    survivors: Vec<Vec<u64>>,
    overlined_below: Vec<u64>,
    plain_below: Vec<u64>,
}

fn bump(grid: &mut Vec<Vec<u64>>, k: usize, n: usize, width: usize) {
    if grid.len() <= k {
        grid.resize_with(k + 1, || vec![0; width]);
    }
    grid[k][n] += 1;
}

fn merge_grid(into: &mut Vec<Vec<u64>>, from: &[Vec<u64>]) {
    if into.len() < from.len() {
        let width = from[0].len();
        into.resize_with(from.len(), || vec![0; width]);
    }
    for (dst, src) in into.iter_mut().zip(from) {
        dst.iter_mut().zip(src).for_each(|(d, s)| *d += s);
    }
}

fn merge_vec(into: &mut [u64], from: &[u64]) {
    into.iter_mut().zip(from).for_each(|(d, s)| *d += s);
}

/// Exhaustive enumeration-side counts for one parameter triple.
#[derive(Debug, Clone)]
pub struct Census {
    params: StatParams,
    order: usize,
    totals: Vec<u64>,
    stats: [Option<StatCounts>; 3],
}

impl Census {
    pub fn build(params: StatParams, order: usize) -> Self {
        let width = order + 1;
        let empty = || Census {
            params,
            order,
            totals: vec![0; width],
            stats: Statistic::ALL.map(|s| {
                (params.r() >= s.min_r()).then(|| StatCounts {
                    sigma: vec![0; width],
                    overlined_below: vec![0; width],
                    plain_below: vec![0; width],
                    ..StatCounts::default()
                })
            }),
        };
        (0..=order)
            .into_par_iter()
            .map(|n| {
                let mut c = empty();
                for pi in enumerate(n as u64) {
                    c.record(&pi, n);
                }
                c
            })
            .reduce(empty, |mut a, b| {
                a.merge(&b);
                a
            })
    }

    fn record(&mut self, pi: &Overpartition, n: usize) {
        let p = self.params;
        let width = self.order + 1;
        self.totals[n] += 1;
        for (stat, counts) in Statistic::ALL.iter().zip(self.stats.iter_mut()) {
            let Some(c) = counts else { continue };
            let s = pi.search(&p, *stat);
            let k = p.index_of(s).expect("statistics lie in the progression") as usize;
            c.sigma[n] += s;
            for j in 0..=k {
                bump(&mut c.survivors, j, n, width);
            }
            for (slot, subset) in Subset::ALL.iter().enumerate() {
                let member = match subset.class(*stat) {
                    None => true,
                    Some(class) if class.accepts_r(p.r()) => {
                        pi.in_class(&p, class).expect("r checked")
                    }
                    Some(_) => continue,
                };
                if member {
                    bump(&mut c.hist[slot], k, n, width);
                }
            }
            if pi.has_overlined_below(&p, *stat).expect("r checked") {
                c.overlined_below[n] += 1;
            }
            if pi.has_plain_below(&p, *stat).expect("r checked") {
                c.plain_below[n] += 1;
            }
        }
    }

    fn merge(&mut self, other: &Census) {
        merge_vec(&mut self.totals, &other.totals);
        for (dst, src) in self.stats.iter_mut().zip(&other.stats) {
            if let (Some(d), Some(s)) = (dst, src) {
                for (dh, sh) in d.hist.iter_mut().zip(&s.hist) {
                    merge_grid(dh, sh);
                }
                merge_grid(&mut d.survivors, &s.survivors);
                merge_vec(&mut d.sigma, &s.sigma);
                merge_vec(&mut d.overlined_below, &s.overlined_below);
                merge_vec(&mut d.plain_below, &s.plain_below);
            }
        }
    }

    pub fn params(&self) -> &StatParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn counts(&self, stat: Statistic) -> Result<&StatCounts> {
        self.stats[stat as usize].as_ref().ok_or_else(|| {
            Error::InvalidParams(format!("{} needs r >= {}", stat.name(), stat.min_r()))
        })
    }

    fn series(&self, values: &[u64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(values.iter().copied(), self.order).expect("order+1 values")
    }

    /// `pbar(n)` for `n <= order`, counted.
    pub fn totals(&self) -> TruncatedSeries {
        self.series(&self.totals)
    }

    pub fn table(&self, stat: Statistic, subset: Subset) -> Result<BivariateTable> {
        check_subset(stat, subset, &self.params)?;
        let hist = &self.counts(stat)?.hist[subset as usize];
        let mut t = BivariateTable::new(&self.params, self.order);
        for (k, row) in hist.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                if v > 0 {
                    t.add_to(k, n, v);
                }
            }
        }
        t.trim();
        Ok(t)
    }

    /// `n -> sum of the statistic over overpartitions of n`.
    pub fn sigma(&self, stat: Statistic) -> Result<TruncatedSeries> {
        Ok(self.series(&self.counts(stat)?.sigma))
    }

    /// `n -> #{pi of n : statistic(pi) >= kA + a}`.
    pub fn survivors(&self, stat: Statistic, k: usize) -> Result<TruncatedSeries> {
        let c = self.counts(stat)?;
        Ok(match c.survivors.get(k) {
            Some(row) => self.series(row),
            None => TruncatedSeries::zero(self.order),
        })
    }

    /// Number of survivor rows that may be nonzero.
    pub fn survivor_rows(&self, stat: Statistic) -> Result<usize> {
        Ok(self.counts(stat)?.survivors.len())
    }

    pub fn overlined_below(&self, stat: Statistic) -> Result<TruncatedSeries> {
        Ok(self.series(&self.counts(stat)?.overlined_below))
    }

    pub fn plain_below(&self, stat: Statistic) -> Result<TruncatedSeries> {
        Ok(self.series(&self.counts(stat)?.plain_below))
    }

    /// The overpartitions a corollary counts, by weight.
    pub fn corollary(&self, id: TheoremId) -> Result<TruncatedSeries> {
        id.check_r(self.params.r())?;
        match id {
            TheoremId::CorOverlinedExists => self.overlined_below(Statistic::Mes),
            TheoremId::CorNonOverlinedExists => self.plain_below(Statistic::Mes),
            TheoremId::CorGenO => Ok(self.table(Statistic::OverMes, Subset::OClass)?.at_z_one()),
            TheoremId::CorTildeOverlinedExists => self.overlined_below(Statistic::TildeMes),
            TheoremId::CorTildeNonOverlinedExists => self.plain_below(Statistic::TildeMes),
            _ => Err(Error::WrongKind(id)),
        }
    }
}

/// What a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Theorem(TheoremId),
    /// `sigma(n) = A * sum_{k>=1} M(k, n) + a * pbar(n)` for one statistic.
    SigmaRelation(Statistic),
    /// The pointwise statistic properties over a parameter grid.
    Structural,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::Theorem(id) => f.write_str(id.name()),
            CheckId::SigmaRelation(stat) => write!(f, "relation-sigma-{}", stat.name()),
            CheckId::Structural => f.write_str("structural-properties"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// First disagreement found. `expected` is always the enumeration side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub k: Option<usize>,
    pub n: usize,
    pub expected: BigInt,
    pub actual: BigInt,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub check: CheckId,
    /// `None` for checks spanning a parameter grid.
    pub params: Option<StatParams>,
    pub order: usize,
    pub first_mismatch: Option<Mismatch>,
    pub entries_checked: u64,
    pub elapsed: Duration,
    /// Extra context for failures of grid-wide checks.
    pub detail: Option<String>,
    /// Compared values `(k, n, value)` that agreed and were nonzero.
    pub matched: Vec<(Option<usize>, usize, BigInt)>,
}

impl VerificationReport {
    pub fn status(&self) -> Status {
        if self.first_mismatch.is_none() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }
}

/// Adds 1 to one formula-side coefficient, to prove the harness can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub theorem: TheoremId,
    pub k: Option<usize>,
    pub n: usize,
}

impl Fault {
    fn hits(&self, id: TheoremId, k: Option<usize>, n: usize) -> bool {
        self.theorem == id && self.n == n && (self.k == k || k.is_none())
    }
}

struct Comparison {
    id: TheoremId,
    fault: Option<Fault>,
    first: Option<Mismatch>,
    checked: u64,
    matched: Vec<(Option<usize>, usize, BigInt)>,
}

impl Comparison {
    fn new(id: TheoremId, fault: Option<Fault>) -> Self {
        Self {
            id,
            fault,
            first: None,
            checked: 0,
            matched: Vec::new(),
        }
    }

    fn compare(&mut self, k: Option<usize>, n: usize, expected: BigInt, mut actual: BigInt) {
        if self.fault.is_some_and(|f| f.hits(self.id, k, n)) {
            actual += 1;
        }
        self.checked += 1;
        if expected != actual {
            if self.first.is_none() {
                self.first = Some(Mismatch {
                    k,
                    n,
                    expected,
                    actual,
                });
            }
        } else if expected != BigInt::ZERO {
            self.matched.push((k, n, expected));
        }
    }

    fn series(&mut self, k: Option<usize>, expected: &TruncatedSeries, actual: &TruncatedSeries) {
        for n in 0..=expected.order() {
            self.compare(k, n, expected.coeff(n), actual.coeff(n));
        }
    }
}

/// Checks one identity against a prebuilt census and formula context, which
/// must share parameters and order.
pub fn verify_against(
    census: &Census,
    formulas: &Formulas,
    id: TheoremId,
    fault: Option<Fault>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = *census.params();
    assert_eq!(&p, formulas.params(), "census and formulas disagree on parameters");
    assert_eq!(census.order(), formulas.order(), "census and formulas disagree on order");
    id.check_r(p.r())?;
    let order = census.order();
    let mut cmp = Comparison::new(id, fault);
    match id.kind() {
        TheoremKind::Bivariate => {
            let (stat, subset) = table_target(id).expect("bivariate ids have a table");
            let expected = census.table(stat, subset)?;
            let mut actual = formulas.rhs_bivariate(id)?;
            if let Some(f) = fault.filter(|f| f.theorem == id) {
                // faults may land outside the formula's nonzero rows
                actual.add_to(f.k.unwrap_or(0), f.n, 0);
            }
            let rows = expected.k_bound().max(actual.k_bound());
            for n in 0..=order {
                for k in 0..rows {
                    cmp.compare(Some(k), n, expected.get(k, n), actual.get(k, n));
                }
            }
        }
        TheoremKind::Sigma => {
            let expected = census.sigma(id.statistic())?;
            let actual = formulas.rhs_sigma(id)?;
            cmp.series(None, &expected, &actual);
        }
        TheoremKind::Survivor => {
            // kA + a <= N + A + a bounds every statistic of weight <= N
            let k_limit = order / p.modulus() as usize + 1;
            let mut rows = Vec::with_capacity(k_limit + 1);
            for k in 0..=k_limit {
                rows.push((
                    census.survivors(id.statistic(), k)?,
                    formulas.rhs_survivor(id, k as u64)?,
                ));
            }
            for n in 0..=order {
                for (k, (exp, act)) in rows.iter().enumerate() {
                    cmp.compare(Some(k), n, exp.coeff(n), act.coeff(n));
                }
            }
        }
        TheoremKind::Corollary => {
            let expected = census.corollary(id)?;
            let actual = formulas.rhs_corollary(id)?;
            cmp.series(None, &expected, &actual);
        }
    }
    Ok(VerificationReport {
        check: CheckId::Theorem(id),
        params: Some(p),
        order,
        first_mismatch: cmp.first,
        entries_checked: cmp.checked,
        elapsed: start.elapsed(),
        detail: None,
        matched: cmp.matched,
    })
}

/// Verifies one identity from scratch: enumeration versus expanded formula.
pub fn verify_identity(id: TheoremId, p: StatParams, order: usize) -> Result<VerificationReport> {
    verify_identity_with_fault(id, p, order, None)
}

pub fn verify_identity_with_fault(
    id: TheoremId,
    p: StatParams,
    order: usize,
    fault: Option<Fault>,
) -> Result<VerificationReport> {
    id.check_r(p.r())?;
    let start = Instant::now();
    let census = Census::build(p, order);
    let formulas = Formulas::new(p, order)?;
    let mut report = verify_against(&census, &formulas, id, fault)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Checks `sigma(n) = A * sum_{k>=1} M(k,n) + a * pbar(n)` for all
/// `n <= order` using enumeration-side quantities only.
pub fn verify_sigma_relation(
    stat: Statistic,
    p: StatParams,
    order: usize,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let census = Census::build(p, order);
    let mut report = sigma_relation_from(&census, stat)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn sigma_relation_from(census: &Census, stat: Statistic) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = *census.params();
    let order = census.order();
    let sigma = census.sigma(stat)?;
    let totals = census.totals();
    let rows = census.survivor_rows(stat)?;
    let modulus = BigInt::from(p.modulus());
    let residue = BigInt::from(p.residue());
    let mut first = None;
    let mut matched = Vec::new();
    for n in 0..=order {
        let mut survivors = BigInt::ZERO;
        for k in 1..rows {
            survivors += census.survivors(stat, k)?.coeff(n);
        }
        let rhs = &modulus * survivors + &residue * totals.coeff(n);
        let lhs = sigma.coeff(n);
        if lhs != rhs {
            first.get_or_insert(Mismatch {
                k: None,
                n,
                expected: lhs,
                actual: rhs,
            });
        } else {
            matched.push((None, n, lhs));
        }
    }
    Ok(VerificationReport {
        check: CheckId::SigmaRelation(stat),
        params: Some(p),
        order,
        first_mismatch: first,
        entries_checked: order as u64 + 1,
        elapsed: start.elapsed(),
        detail: None,
        matched,
    })
}

/// Characterization of `statistic(pi) = kA + a` by the frequencies of the
/// sizes `a, a+A, ..., kA+a`, written independently of the statistic search.
pub fn characterizes(pi: &Overpartition, p: &StatParams, stat: Statistic, k: u64) -> bool {
    let r = i64::from(p.r());
    let freq = |i: u64| {
        let t = p.size_at(i);
        (pi.is_overlined(t), pi.plain_count(t) as i64)
    };
    type Rule = fn(bool, i64, i64) -> bool;
    let (below, at): (Rule, Rule) = match stat {
        Statistic::Mes => (
            |o, f, r| (!o && f >= r) || (o && f >= r - 1),
            |o, f, r| (!o && f < r) || (o && f <= r - 2),
        ),
        Statistic::OverMes => (|o, f, r| o && f >= r - 1, |o, f, r| !o || f <= r - 2),
        Statistic::TildeMes => (|o, f, r| o || f >= r - 1, |o, f, r| !o && f <= r - 2),
    };
    (0..k).all(|i| {
        let (o, f) = freq(i);
        below(o, f, r)
    }) && {
        let (o, f) = freq(k);
        at(o, f, r)
    }
}

/// All `(r, A, a)` with `1 <= r <= r_max`, `1 <= a <= A <= a_max`.
pub fn parameter_grid(r_max: u32, modulus_max: u32) -> Vec<StatParams> {
    let mut grid = Vec::new();
    for r in 1..=r_max {
        for m in 1..=modulus_max {
            for a in 1..=m {
                grid.push(StatParams::new(r, m, a).expect("a in 1..=A"));
            }
        }
    }
    grid
}

struct PropertyFailure {
    n: usize,
    expected: i64,
    actual: i64,
    detail: String,
}

fn check_properties(pi: &Overpartition, p: &StatParams, checked: &mut u64) -> Option<PropertyFailure> {
    let n = pi.weight() as usize;
    let fail = |expected: u64, actual: u64, what: &str| PropertyFailure {
        n,
        expected: expected as i64,
        actual: actual as i64,
        detail: format!("{what} fails for {pi} at {p}"),
    };
    let stats: Vec<(Statistic, u64)> = Statistic::ALL
        .into_iter()
        .filter(|s| p.r() >= s.min_r())
        .map(|s| (s, pi.search(p, s)))
        .collect();

    if let [(_, mes), (_, over), (_, tilde)] = stats[..] {
        *checked += 2;
        if over > mes {
            return Some(fail(over, mes, "overmes <= mes"));
        }
        if mes > tilde {
            return Some(fail(mes, tilde, "mes <= tildemes"));
        }
    }

    let next = p.with_r(p.r() + 1).expect("r + 1 is valid");
    for &(stat, value) in &stats {
        *checked += 1;
        let bigger = pi.search(&next, stat);
        if bigger > value {
            return Some(fail(bigger, value, &format!("{} non-increasing in r", stat.name())));
        }
    }

    if p.r() == 2 {
        *checked += 1;
        let tilde = pi.search(p, Statistic::TildeMes);
        let mes = pi.search(&p.with_r(1).expect("r = 1"), Statistic::Mes);
        if tilde != mes {
            return Some(fail(tilde, mes, "tildemes at r=2 equals mes at r=1"));
        }
    }

    for &(stat, value) in &stats {
        let k_value = p.index_of(value).expect("in progression");
        let k_limit = (pi.weight() / u64::from(p.modulus())) + 2;
        for k in 0..=k_limit.max(k_value) {
            *checked += 1;
            if characterizes(pi, p, stat, k) != (k == k_value) {
                return Some(fail(
                    value,
                    p.size_at(k),
                    &format!("frequency characterization of {}", stat.name()),
                ));
            }
        }
    }

    if p.r() >= 2 {
        *checked += 1;
        let n_class = pi.in_class(p, ClassFamily::NOverMes).expect("r >= 2");
        let o_class = pi.in_class(p, ClassFamily::OOverMes).expect("r >= 2");
        if n_class == o_class {
            return Some(fail(1, u64::from(n_class) + u64::from(o_class), "NOverMes/OOverMes partition"));
        }
    }

    *checked += 1;
    let n_class = pi.in_class(p, ClassFamily::Nmes).expect("r >= 1");
    let exists = pi.has_overlined_below(p, Statistic::Mes).expect("r >= 1");
    if n_class == exists {
        return Some(fail(1, u64::from(n_class) + u64::from(exists), "Nmes complements overlined-exists"));
    }
    None
}

/// Exhaustively checks the pointwise properties of the three statistics on
/// every overpartition of weight `<= n_max` for every parameter in `grid`:
/// ordering, monotonicity in `r`, the `r = 2` collapse, the frequency
/// characterizations, and the class partitions.
pub fn verify_structural_properties(grid: &[StatParams], n_max: usize) -> VerificationReport {
    let start = Instant::now();
    let per_weight: Vec<(u64, Option<PropertyFailure>)> = (0..=n_max as u64)
        .into_par_iter()
        .map(|n| {
            let mut checked = 0;
            for pi in enumerate(n) {
                for p in grid {
                    if let Some(f) = check_properties(&pi, p, &mut checked) {
                        return (checked, Some(f));
                    }
                }
            }
            (checked, None)
        })
        .collect();
    let entries_checked = per_weight.iter().map(|(c, _)| c).sum();
    let failure = per_weight.into_iter().find_map(|(_, f)| f);
    let (first_mismatch, detail) = match failure {
        Some(f) => (
            Some(Mismatch {
                k: None,
                n: f.n,
                expected: f.expected.into(),
                actual: f.actual.into(),
            }),
            Some(f.detail),
        ),
        None => (None, None),
    };
    VerificationReport {
        check: CheckId::Structural,
        params: None,
        order: n_max,
        first_mismatch,
        entries_checked,
        elapsed: start.elapsed(),
        detail,
        matched: Vec::new(),
    }
}

/// Runs every applicable identity and the three sigma relations for every
/// parameter triple in `grid`. Reports come back grouped by parameters in
/// grid order, identities in [`TheoremId::ALL`] order.
pub fn verify_grid(
    grid: &[StatParams],
    order: usize,
    fault: Option<Fault>,
) -> Result<Vec<VerificationReport>> {
    let per_cell: Vec<Result<Vec<VerificationReport>>> = grid
        .par_iter()
        .map(|&p| {
            let census = Census::build(p, order);
            let formulas = Formulas::new(p, order)?;
            let mut reports = Vec::new();
            for id in TheoremId::ALL.into_iter().filter(|id| id.accepts_r(p.r())) {
                reports.push(verify_against(&census, &formulas, id, fault)?);
            }
            for stat in Statistic::ALL.into_iter().filter(|s| p.r() >= s.min_r()) {
                reports.push(sigma_relation_from(&census, stat)?);
            }
            Ok(reports)
        })
        .collect();
    let mut out = Vec::new();
    for cell in per_cell {
        out.extend(cell?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::overpartition_gf;

    fn p(r: u32, m: u32, a: u32) -> StatParams {
        StatParams::new(r, m, a).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn enumerate_table_examples() {
        let q = p(2, 2, 1);
        let mes = enumerate_table(Statistic::Mes, Subset::All, &q, 4).unwrap();
        assert_eq!(mes.get(0, 4), big(8));
        assert_eq!(mes.get(1, 4), big(6));
        let tilde = enumerate_table(Statistic::TildeMes, Subset::All, &q, 4).unwrap();
        assert_eq!(tilde.get(2, 4), big(4));
        for q in [p(1, 1, 1), p(3, 3, 2)] {
            assert_eq!(enumerate_table(Statistic::Mes, Subset::All, &q, 3).unwrap().get(0, 0), big(1));
        }
    }

    #[test]
    fn enumerate_table_rejects_bad_subset() {
        assert!(enumerate_table(Statistic::Mes, Subset::OClass, &p(2, 1, 1), 3).is_err());
        assert!(enumerate_table(Statistic::OverMes, Subset::All, &p(1, 1, 1), 3).is_err());
    }

    #[test]
    fn census_agrees_with_direct_tables() {
        let q = p(2, 3, 2);
        let census = Census::build(q, 12);
        for stat in Statistic::ALL {
            for subset in Subset::ALL {
                if subset == Subset::OClass && stat == Statistic::Mes {
                    assert!(census.table(stat, subset).is_err());
                    continue;
                }
                assert_eq!(
                    census.table(stat, subset).unwrap(),
                    enumerate_table(stat, subset, &q, 12).unwrap(),
                    "{stat:?} {subset:?}"
                );
            }
        }
        assert_eq!(census.totals(), overpartition_gf(12));
    }

    #[test]
    fn table_sums_are_overpartition_counts() {
        let q = p(3, 2, 1);
        let census = Census::build(q, 15);
        for stat in Statistic::ALL {
            assert_eq!(census.table(stat, Subset::All).unwrap().at_z_one(), overpartition_gf(15));
        }
    }

    #[test]
    fn table_is_insensitive_to_enumeration_order() {
        let q = p(2, 2, 2);
        let mut all: Vec<_> = (0..=10).flat_map(enumerate).collect();
        let forward = table_from(all.clone(), Statistic::TildeMes, Subset::OClass, &q, 10).unwrap();
        all.reverse();
        let backward = table_from(all.clone(), Statistic::TildeMes, Subset::OClass, &q, 10).unwrap();
        all.sort();
        let sorted = table_from(all, Statistic::TildeMes, Subset::OClass, &q, 10).unwrap();
        assert_eq!(forward, backward);
        assert_eq!(forward, sorted);
    }

    #[test]
    fn verify_examples() {
        let r = verify_identity(TheoremId::GenMes, p(1, 1, 1), 20).unwrap();
        assert!(r.passed());
        let s = verify_identity(TheoremId::GenSigmaMes, p(2, 2, 1), 4).unwrap();
        assert!(s.passed());
        assert!(s.matched.contains(&(None, 4, big(26))));
        assert_eq!(s.entries_checked, 5);
    }

    #[test]
    fn perturbed_formula_fails() {
        let fault = Fault {
            theorem: TheoremId::GenMes,
            k: Some(0),
            n: 1,
        };
        let r = verify_identity_with_fault(TheoremId::GenMes, p(2, 2, 1), 6, Some(fault)).unwrap();
        assert_eq!(r.status(), Status::Fail);
        assert_eq!(
            r.first_mismatch,
            Some(Mismatch {
                k: Some(0),
                n: 1,
                expected: big(2),
                actual: big(3)
            })
        );
    }

    #[test]
    fn fault_outside_formula_rows_is_still_seen() {
        let fault = Fault {
            theorem: TheoremId::GenOverMes,
            k: Some(9),
            n: 3,
        };
        let r = verify_identity_with_fault(TheoremId::GenOverMes, p(2, 1, 1), 5, Some(fault)).unwrap();
        assert_eq!(r.first_mismatch.unwrap().k, Some(9));
    }

    #[test]
    fn r_domain_is_an_error_not_a_fail() {
        assert!(verify_identity(TheoremId::GenOmes, p(2, 1, 1), 5).is_err());
    }

    #[test]
    fn sigma_relation_examples() {
        let q = p(2, 2, 1);
        let census = Census::build(q, 4);
        assert_eq!(census.sigma(Statistic::Mes).unwrap().coeff(4), big(26));
        assert_eq!(census.survivors(Statistic::Mes, 1).unwrap().coeff(4), big(6));
        assert_eq!(census.survivors(Statistic::Mes, 2).unwrap().coeff(4), big(0));
        assert_eq!(census.survivors(Statistic::TildeMes, 1).unwrap().coeff(4), big(10));
        assert_eq!(census.survivors(Statistic::TildeMes, 2).unwrap().coeff(4), big(4));
        for stat in Statistic::ALL {
            assert!(verify_sigma_relation(stat, q, 4).unwrap().passed());
        }
    }

    #[test]
    fn characterization_of_table_rows() {
        let q = p(2, 2, 1);
        let pi: Overpartition = "(3,1)".parse().unwrap();
        assert!(characterizes(&pi, &q, Statistic::TildeMes, 2));
        assert!(!characterizes(&pi, &q, Statistic::TildeMes, 1));
        assert!(characterizes(&pi, &q, Statistic::Mes, 0));
        assert!(characterizes(&pi, &q, Statistic::OverMes, 0));
    }

    #[test]
    fn structural_properties_small() {
        let r = verify_structural_properties(&parameter_grid(3, 3), 8);
        assert!(r.passed(), "{:?}", r.detail);
        assert!(r.entries_checked > 0);
        let trivial = verify_structural_properties(&[p(1, 1, 1)], 0);
        assert!(trivial.passed());
    }

    #[test]
    fn grid_has_expected_shape() {
        let grid = parameter_grid(3, 3);
        assert_eq!(grid.len(), 18);
        let reports = verify_grid(&grid[..2], 6, None).unwrap();
        // r = 1 cells: 7 mes-family ids + 1 sigma relation
        assert_eq!(reports.len(), 16);
        assert!(reports.iter().all(VerificationReport::passed));
    }

    #[test]
    fn check_names() {
        assert_eq!(CheckId::SigmaRelation(Statistic::OverMes).to_string(), "relation-sigma-overmes");
        assert_eq!(CheckId::Theorem(TheoremId::CorGenO).to_string(), "cor-gen-o");
        assert_eq!(CheckId::Structural.to_string(), "structural-properties");
    }
}
