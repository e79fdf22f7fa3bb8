//! Overpartitions, their enumeration, and the three minimal excludant size
//! statistics.
//!
//! An overpartition is a partition in which the first occurrence of each part
//! size may be overlined. For a size `t` we write `f_t` for the number of
//! non-overlined parts equal to `t` and `fbar_t ∈ {0, 1}` for the overlined
//! one. Everything in this module works on those two frequency functions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parameters `(r, A, a)` shared by every statistic, with `A >= a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatParams {
    r: u32,
    modulus: u32,
    residue: u32,
}

impl StatParams {
    pub fn new(r: u32, modulus: u32, residue: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        if residue == 0 || residue > modulus {
            return Err(Error::InvalidParams(format!(
                "need A >= a >= 1, got A={modulus}, a={residue}"
            )));
        }
        Ok(Self {
            r,
            modulus,
            residue,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The modulus `A`.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The residue `a`.
    pub fn residue(&self) -> u32 {
        self.residue
    }

    /// The `k`-th candidate size `kA + a`.
    pub fn size_at(&self, k: u64) -> u64 {
        k * u64::from(self.modulus) + u64::from(self.residue)
    }

    /// Inverse of [`size_at`](Self::size_at) for sizes in the progression.
    pub fn index_of(&self, size: u64) -> Option<u64> {
        let (a, m) = (u64::from(self.residue), u64::from(self.modulus));
        (size >= a && (size - a).is_multiple_of(m)).then(|| (size - a) / m)
    }

    pub fn in_progression(&self, size: u64) -> bool {
        self.index_of(size).is_some()
    }

    pub fn with_r(&self, r: u32) -> Result<Self> {
        Self::new(r, self.modulus, self.residue)
    }
}

impl fmt::Display for StatParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} A={} a={}", self.r, self.modulus, self.residue)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    /// Fewer than `r` parts of size `m`, overlined and plain combined.
    Mes,
    /// No overlined `m`, or fewer than `r - 1` plain `m`s.
    OverMes,
    /// No overlined `m`, and fewer than `r - 1` plain `m`s.
    TildeMes,
}

impl Statistic {
    pub const ALL: [Statistic; 3] = [Statistic::Mes, Statistic::OverMes, Statistic::TildeMes];

    pub fn min_r(self) -> u32 {
        match self {
            Statistic::Mes => 1,
            Statistic::OverMes | Statistic::TildeMes => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Mes => "mes",
            Statistic::OverMes => "overmes",
            Statistic::TildeMes => "tildemes",
        }
    }

    fn check(self, p: &StatParams) -> Result<()> {
        if p.r < self.min_r() {
            Err(Error::InvalidParams(format!(
                "{} requires r >= {}, got r={}",
                self.name(),
                self.min_r(),
                p.r
            )))
        } else {
            Ok(())
        }
    }

    /// Whether size `m` with the given frequencies ends the search.
    pub(crate) fn accepts(self, r: u32, overlined: bool, plain: u64) -> bool {
        let r = u64::from(r);
        match self {
            Statistic::Mes => u64::from(overlined) + plain < r,
            Statistic::OverMes => !overlined || plain + 2 <= r,
            Statistic::TildeMes => !overlined && plain + 2 <= r,
        }
    }
}

/// The restricted classes appearing in the refined generating functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassFamily {
    /// Every part `≡ a (mod A)` below `mes` is non-overlined.
    Nmes,
    /// Every part `≡ a (mod A)` below `mes` is overlined (`r = 1` only).
    Omes,
    /// Fewer than `r - 1` non-overlined parts of size `overmes`.
    NOverMes,
    /// At least `r - 1` non-overlined parts of size `overmes`.
    OOverMes,
    /// Every part `≡ a (mod A)` below `tildemes` is non-overlined.
    NTildeMes,
    /// Every part `≡ a (mod A)` below `tildemes` is overlined.
    OTildeMes,
}

impl ClassFamily {
    pub const ALL: [ClassFamily; 6] = [
        ClassFamily::Nmes,
        ClassFamily::Omes,
        ClassFamily::NOverMes,
        ClassFamily::OOverMes,
        ClassFamily::NTildeMes,
        ClassFamily::OTildeMes,
    ];

    pub fn statistic(self) -> Statistic {
        match self {
            ClassFamily::Nmes | ClassFamily::Omes => Statistic::Mes,
            ClassFamily::NOverMes | ClassFamily::OOverMes => Statistic::OverMes,
            ClassFamily::NTildeMes | ClassFamily::OTildeMes => Statistic::TildeMes,
        }
    }

    pub fn accepts_r(self, r: u32) -> bool {
        match self {
            ClassFamily::Nmes => r >= 1,
            ClassFamily::Omes => r == 1,
            _ => r >= 2,
        }
    }
}

/// One part size together with its plain multiplicity and overline flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Block {
    size: u64,
    plain: u64,
    overlined: bool,
}

/// An overpartition in canonical form: one entry per distinct part size,
/// sorted by decreasing size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Overpartition {
    blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    /// Overlined parts carry a trailing `~`, e.g. `(2,1~,1)`.
    #[default]
    Ascii,
    /// Overlined parts use a combining macron, e.g. `(2,1̄,1)`.
    Unicode,
}

impl Overpartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an overpartition from its plain parts (with repetition) and its
    /// overlined sizes (each at most once).
    pub fn from_parts(plain: &[u64], overlined: &[u64]) -> Result<Self> {
        let mut blocks: Vec<Block> = Vec::new();
        let mut sizes: Vec<u64> = plain.iter().chain(overlined).copied().collect();
        if sizes.contains(&0) {
            return Err(Error::InvalidParams("part sizes must be positive".into()));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes.dedup();
        for size in sizes {
            let count = overlined.iter().filter(|&&t| t == size).count();
            if count > 1 {
                return Err(Error::InvalidParams(format!(
                    "size {size} is overlined more than once"
                )));
            }
            blocks.push(Block {
                size,
                plain: plain.iter().filter(|&&t| t == size).count() as u64,
                overlined: count == 1,
            });
        }
        Ok(Self { blocks })
    }

    fn block(&self, size: u64) -> Option<&Block> {
        self.blocks
            .binary_search_by(|b| size.cmp(&b.size))
            .ok()
            .map(|i| &self.blocks[i])
    }

    /// `f_t`: number of non-overlined parts equal to `t`.
    pub fn plain_count(&self, size: u64) -> u64 {
        self.block(size).map_or(0, |b| b.plain)
    }

    /// `fbar_t`: whether an overlined part of size `t` is present.
    pub fn is_overlined(&self, size: u64) -> bool {
        self.block(size).is_some_and(|b| b.overlined)
    }

    /// Number of parts of size `t`, overlined or not.
    pub fn frequency(&self, size: u64) -> u64 {
        self.block(size)
            .map_or(0, |b| b.plain + u64::from(b.overlined))
    }

    pub fn weight(&self) -> u64 {
        self.blocks
            .iter()
            .map(|b| b.size * (b.plain + u64::from(b.overlined)))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn largest_part(&self) -> Option<u64> {
        self.blocks.first().map(|b| b.size)
    }

    pub fn num_parts(&self) -> u64 {
        self.blocks
            .iter()
            .map(|b| b.plain + u64::from(b.overlined))
            .sum()
    }

    /// Distinct part sizes, largest first, as `(size, f_t, fbar_t)`.
    pub fn sizes(&self) -> impl Iterator<Item = (u64, u64, bool)> + '_ {
        self.blocks.iter().map(|b| (b.size, b.plain, b.overlined))
    }

    pub fn render(&self, style: RenderStyle) -> String {
        if self.blocks.is_empty() {
            return match style {
                RenderStyle::Ascii => "()".to_string(),
                RenderStyle::Unicode => "∅".to_string(),
            };
        }
        let mut parts: Vec<String> = Vec::with_capacity(self.num_parts() as usize);
        for b in &self.blocks {
            if b.overlined {
                parts.push(match style {
                    RenderStyle::Ascii => format!("{}~", b.size),
                    RenderStyle::Unicode => overline_digits(b.size),
                });
            }
            for _ in 0..b.plain {
                parts.push(b.size.to_string());
            }
        }
        format!("({})", parts.join(","))
    }

    /// `mes_{r,A,a}`: the least `m ≡ a (mod A)` with fewer than `r` parts of
    /// size `m`.
    pub fn mes(&self, p: &StatParams) -> u64 {
        self.search(p, Statistic::Mes)
    }

    /// `overmes_{r,A,a}`; requires `r >= 2`.
    pub fn overmes(&self, p: &StatParams) -> Result<u64> {
        self.statistic(p, Statistic::OverMes)
    }

    /// `tildemes_{r,A,a}`; requires `r >= 2`.
    pub fn tildemes(&self, p: &StatParams) -> Result<u64> {
        self.statistic(p, Statistic::TildeMes)
    }

    pub fn statistic(&self, p: &StatParams, stat: Statistic) -> Result<u64> {
        stat.check(p)?;
        Ok(self.search(p, stat))
    }

    // Terminates by the largest part plus A: past it every frequency is zero
    // and each acceptance condition holds for zero frequencies.
    pub(crate) fn search(&self, p: &StatParams, stat: Statistic) -> u64 {
        let mut m = u64::from(p.residue);
        loop {
            let (overlined, plain) = self
                .block(m)
                .map_or((false, 0), |b| (b.overlined, b.plain));
            if stat.accepts(p.r, overlined, plain) {
                return m;
            }
            m += u64::from(p.modulus);
        }
    }

    pub fn in_class(&self, p: &StatParams, family: ClassFamily) -> Result<bool> {
        if !family.accepts_r(p.r) {
            return Err(Error::InvalidParams(format!(
                "{family:?} is not defined for r={}",
                p.r
            )));
        }
        let m = self.search(p, family.statistic());
        let r = u64::from(p.r);
        let mut below = self
            .blocks
            .iter()
            .filter(|b| b.size < m && p.in_progression(b.size));
        Ok(match family {
            ClassFamily::Nmes | ClassFamily::NTildeMes => below.all(|b| !b.overlined),
            ClassFamily::Omes | ClassFamily::OTildeMes => below.all(|b| b.plain == 0),
            ClassFamily::NOverMes => self.plain_count(m) + 2 <= r,
            ClassFamily::OOverMes => self.plain_count(m) + 1 >= r,
        })
    }

    /// Whether some overlined part `≡ a (mod A)` lies strictly below
    /// the given statistic.
    pub fn has_overlined_below(&self, p: &StatParams, stat: Statistic) -> Result<bool> {
        let m = self.statistic(p, stat)?;
        Ok(self
            .blocks
            .iter()
            .any(|b| b.overlined && b.size < m && p.in_progression(b.size)))
    }

    /// Whether some non-overlined part `≡ a (mod A)` lies strictly below
    /// the given statistic.
    pub fn has_plain_below(&self, p: &StatParams, stat: Statistic) -> Result<bool> {
        let m = self.statistic(p, stat)?;
        Ok(self
            .blocks
            .iter()
            .any(|b| b.plain > 0 && b.size < m && p.in_progression(b.size)))
    }
}

/// Free-function form of [`Overpartition::in_class`].
pub fn class_membership(pi: &Overpartition, p: &StatParams, family: ClassFamily) -> Result<bool> {
    pi.in_class(p, family)
}

fn overline_digits(n: u64) -> String {
    n.to_string().chars().flat_map(|c| [c, '\u{0304}']).collect()
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Ascii))
    }
}

impl FromStr for Overpartition {
    type Err = Error;

    /// Parses either rendering style, e.g. `(3~,1)`, `(3̄,1)`, `()` or `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot parse overpartition `{s}`"));
        let s = s.trim();
        if s == "∅" {
            return Ok(Self::empty());
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (mut plain, mut overlined) = (Vec::new(), Vec::new());
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let is_over = tok.contains(['~', '\u{0304}']);
            let digits: String = tok.chars().filter(char::is_ascii_digit).collect();
            let size: u64 = digits.parse().map_err(|_| bad())?;
            if is_over {
                overlined.push(size);
            } else {
                plain.push(size);
            }
        }
        Self::from_parts(&plain, &overlined)
    }
}

/// Iterator over the overpartitions of a fixed weight.
///
/// Partitions are produced in reverse-lexicographic order (`(n)` first,
/// `(1,...,1)` last). For each partition with `d` distinct sizes the overline
/// choices run through a `d`-bit counter whose lowest bit belongs to the
/// largest size.
#[derive(Debug, Clone)]
pub struct Overpartitions {
    /// Current partition as (size, multiplicity), sizes decreasing.
    partition: Vec<(u64, u64)>,
    mask: u64,
    done: bool,
}

impl Overpartitions {
    pub fn new(n: u64) -> Self {
        let partition = if n == 0 { Vec::new() } else { vec![(n, 1)] };
        Self {
            partition,
            mask: 0,
            done: false,
        }
    }

    fn advance_partition(&mut self) -> bool {
        let mut rem = match self.partition.last() {
            Some(&(1, m)) => {
                self.partition.pop();
                m
            }
            _ => 0,
        };
        let Some(last) = self.partition.last_mut() else {
            return false;
        };
        let x = last.0;
        last.1 -= 1;
        if last.1 == 0 {
            self.partition.pop();
        }
        rem += x;
        let y = x - 1;
        self.partition.push((y, rem / y));
        if rem % y > 0 {
            self.partition.push((rem % y, 1));
        }
        true
    }
}

impl Iterator for Overpartitions {
    type Item = Overpartition;

    fn next(&mut self) -> Option<Overpartition> {
        if self.done {
            return None;
        }
        let blocks = self
            .partition
            .iter()
            .enumerate()
            .map(|(bit, &(size, mult))| {
                let overlined = self.mask >> bit & 1 == 1;
                Block {
                    size,
                    plain: mult - u64::from(overlined),
                    overlined,
                }
            })
            .collect();
        self.mask += 1;
        if self.mask >> self.partition.len() != 0 {
            self.mask = 0;
            if !self.advance_partition() {
                self.done = true;
            }
        }
        Some(Overpartition { blocks })
    }
}

/// All overpartitions of `n`, each exactly once.
pub fn enumerate(n: u64) -> Overpartitions {
    Overpartitions::new(n)
}
