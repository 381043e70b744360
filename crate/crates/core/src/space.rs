//! Codomains: the rational line and explicit finite spaces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Finite spaces are limited to this many points so that open sets fit in a
/// `u64` mask.
pub const MAX_FINITE_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    /// The rationals with the absolute-value metric.
    MetricLine,
    /// Explicit points and open sets; bit `i` of a mask stands for `points[i]`.
    FiniteTop { points: Vec<Rational>, opens: Vec<u64> },
    /// Finite points, every subset open.
    Discrete { points: Vec<Rational> },
}

/// An open set of a [`Space`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpenSet {
    /// Open interval `(center - radius, center + radius)` on the line.
    Ball { center: Rational, radius: Rational },
    /// Subset of a finite space's points.
    Mask(u64),
}

fn full_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn check_points(points: &[Rational]) -> Result<()> {
    if points.is_empty() || points.len() > MAX_FINITE_POINTS {
        return Err(Error::InvalidSpace(format!(
            "finite spaces need 1..={MAX_FINITE_POINTS} points, got {}",
            points.len()
        )));
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::InvalidSpace(format!("duplicate point {p}")));
        }
    }
    Ok(())
}

impl Space {
    pub fn metric_line() -> Space {
        Space::MetricLine
    }

    /// Validates the topology axioms. The open sets are stored sorted and
    /// deduplicated.
    pub fn finite_top(points: Vec<Rational>, opens: impl IntoIterator<Item = u64>) -> Result<Space> {
        check_points(&points)?;
        let full = full_mask(points.len());
        let mut opens: Vec<u64> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        if let Some(bad) = opens.iter().find(|&&o| o & !full != 0) {
            return Err(Error::InvalidSpace(format!("open set {bad:#b} names points outside the space")));
        }
        if opens.binary_search(&0).is_err() || opens.binary_search(&full).is_err() {
            return Err(Error::InvalidSpace(String::from("open sets must include the empty set and the whole space")));
        }
        for &a in &opens {
            for &b in &opens {
                if opens.binary_search(&(a | b)).is_err() || opens.binary_search(&(a & b)).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "open sets {a:#b} and {b:#b} are not closed under union and intersection"
                    )));
                }
            }
        }
        Ok(Space::FiniteTop { points, opens })
    }

    pub fn discrete(points: Vec<Rational>) -> Result<Space> {
        check_points(&points)?;
        Ok(Space::Discrete { points })
    }

    /// `{∅, X}` on the given points.
    pub fn indiscrete(points: Vec<Rational>) -> Result<Space> {
        let full = full_mask(points.len());
        Space::finite_top(points, [0, full])
    }

    pub fn name(&self) -> &'static str {
        match self {
            Space::MetricLine => "metric_line",
            Space::FiniteTop { .. } => "finite_top",
            Space::Discrete { .. } => "discrete",
        }
    }

    pub fn points(&self) -> Option<&[Rational]> {
        match self {
            Space::MetricLine => None,
            Space::FiniteTop { points, .. } | Space::Discrete { points } => Some(points),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Space::MetricLine)
    }

    pub fn index_of(&self, x: Rational) -> Option<usize> {
        self.points().and_then(|ps| ps.iter().position(|&p| p == x))
    }

    pub fn contains_point(&self, x: Rational) -> bool {
        match self {
            Space::MetricLine => true,
            _ => self.index_of(x).is_some(),
        }
    }

    pub(crate) fn require_point(&self, x: Rational) -> Result<()> {
        if self.contains_point(x) {
            Ok(())
        } else {
            Err(Error::PointNotInSpace(format!("{x}")))
        }
    }

    /// Whether `mask` is open. Only meaningful for finite spaces.
    pub fn is_open_mask(&self, mask: u64) -> bool {
        match self {
            Space::MetricLine => false,
            Space::FiniteTop { points, opens } => mask & !full_mask(points.len()) == 0 && opens.binary_search(&mask).is_ok(),
            Space::Discrete { points } => mask & !full_mask(points.len()) == 0,
        }
    }

    pub fn is_open(&self, u: &OpenSet) -> bool {
        match (self, u) {
            (Space::MetricLine, OpenSet::Ball { radius, .. }) => radius.is_positive(),
            (Space::MetricLine, OpenSet::Mask(_)) => false,
            (_, OpenSet::Mask(m)) => self.is_open_mask(*m),
            (_, OpenSet::Ball { .. }) => false,
        }
    }

    /// The open sets of a finite space (for discrete spaces, every subset).
    pub fn open_masks(&self) -> Vec<u64> {
        match self {
            Space::MetricLine => Vec::new(),
            Space::FiniteTop { opens, .. } => opens.clone(),
            Space::Discrete { points } => (0..=full_mask(points.len())).collect(),
        }
    }

    /// Intersection of all open sets containing `x`, when it is open.
    pub fn smallest_neighborhood(&self, x: Rational) -> Option<OpenSet> {
        let i = self.index_of(x)?;
        match self {
            Space::MetricLine => None,
            Space::Discrete { .. } => Some(OpenSet::Mask(1 << i)),
            Space::FiniteTop { opens, .. } => Some(OpenSet::Mask(
                opens.iter().filter(|&&o| o >> i & 1 == 1).fold(u64::MAX, |acc, &o| acc & o),
            )),
        }
    }

    pub fn is_hausdorff(&self) -> bool {
        match self {
            Space::MetricLine | Space::Discrete { .. } => true,
            Space::FiniteTop { points, opens } => {
                let k = points.len();
                (0..k).all(|i| {
                    (0..k).filter(|&j| j != i).all(|j| {
                        opens.iter().any(|&u| {
                            u >> i & 1 == 1 && opens.iter().any(|&v| v >> j & 1 == 1 && u & v == 0)
                        })
                    })
                })
            }
        }
    }

    /// Only the empty set and the whole space are open.
    pub fn is_indiscrete(&self) -> bool {
        match self {
            Space::MetricLine => false,
            Space::Discrete { points } => points.len() == 1,
            Space::FiniteTop { opens, .. } => opens.len() <= 2,
        }
    }
}

impl OpenSet {
    pub fn ball(center: Rational, radius: Rational) -> OpenSet {
        OpenSet::Ball { center, radius }
    }

    /// Membership of `y`, a point of `space`.
    pub fn contains(&self, space: &Space, y: Rational) -> bool {
        match self {
            OpenSet::Ball { center, radius } => (y - center).abs() < *radius,
            OpenSet::Mask(m) => space.index_of(y).is_some_and(|i| m >> i & 1 == 1),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts = |f: &mut fmt::Formatter<'_>, ps: &[Rational]| -> fmt::Result {
            for (k, p) in ps.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        };
        match self {
            Space::MetricLine => f.write_str("metric_line"),
            Space::Discrete { points } => {
                f.write_str("discrete{")?;
                pts(f, points)?;
                f.write_str("}")
            }
            Space::FiniteTop { points, opens } => {
                f.write_str("finite_top{")?;
                pts(f, points)?;
                f.write_str("; opens ")?;
                for (k, o) in opens.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{o:#b}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// A continuous map between codomains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContinuousMap {
    /// Point-by-point table between finite spaces: `images[i]` is the image
    /// of the domain's `i`-th point.
    Table { domain: Space, codomain: Space, images: Vec<Rational> },
    /// `x ↦ slope * x + offset` on the line.
    Affine { slope: Rational, offset: Rational },
}

impl ContinuousMap {
    /// Checks that the preimage of every open set is open.
    pub fn table(domain: Space, codomain: Space, images: Vec<Rational>) -> Result<ContinuousMap> {
        let (Some(dp), Some(_)) = (domain.points(), codomain.points()) else {
            return Err(Error::NotContinuous(String::from("tables need finite spaces on both sides")));
        };
        if dp.len() != images.len() {
            return Err(Error::NotContinuous(format!(
                "table has {} images for {} points",
                images.len(),
                dp.len()
            )));
        }
        let idx = images
            .iter()
            .map(|&y| codomain.index_of(y).ok_or_else(|| Error::PointNotInSpace(format!("{y}"))))
            .collect::<Result<Vec<usize>>>()?;
        let test_sets: Vec<u64> = match &codomain {
            Space::Discrete { points } => (0..points.len()).map(|j| 1u64 << j).collect(),
            other => other.open_masks(),
        };
        for v in test_sets {
            let pre = idx
                .iter()
                .enumerate()
                .filter(|(_, &j)| v >> j & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            if !domain.is_open_mask(pre) {
                return Err(Error::NotContinuous(format!("preimage of open set {v:#b} is {pre:#b}")));
            }
        }
        Ok(ContinuousMap::Table { domain, codomain, images })
    }

    pub fn affine(slope: Rational, offset: Rational) -> ContinuousMap {
        ContinuousMap::Affine { slope, offset }
    }

    pub fn identity(space: &Space) -> ContinuousMap {
        match space.points() {
            None => ContinuousMap::affine(Rational::from_integer(1), Rational::zero()),
            Some(ps) => ContinuousMap::Table { domain: space.clone(), codomain: space.clone(), images: ps.to_vec() },
        }
    }

    /// The map sending everything to `c`.
    pub fn constant(domain: &Space, codomain: &Space, c: Rational) -> Result<ContinuousMap> {
        codomain.require_point(c)?;
        match (domain.points(), codomain.points()) {
            (None, None) => Ok(ContinuousMap::affine(Rational::zero(), c)),
            (Some(ps), Some(_)) => ContinuousMap::table(domain.clone(), codomain.clone(), alloc::vec![c; ps.len()]),
            _ => Err(Error::NotContinuous(String::from("mixed line and finite spaces"))),
        }
    }

    pub fn domain(&self) -> Space {
        match self {
            ContinuousMap::Table { domain, .. } => domain.clone(),
            ContinuousMap::Affine { .. } => Space::MetricLine,
        }
    }

    pub fn codomain(&self) -> Space {
        match self {
            ContinuousMap::Table { codomain, .. } => codomain.clone(),
            ContinuousMap::Affine { .. } => Space::MetricLine,
        }
    }

    pub fn apply(&self, x: Rational) -> Result<Rational> {
        match self {
            ContinuousMap::Affine { slope, offset } => Ok(slope * x + offset),
            ContinuousMap::Table { domain, images, .. } => domain
                .index_of(x)
                .map(|i| images[i])
                .ok_or_else(|| Error::PointNotInSpace(format!("{x}"))),
        }
    }
}
