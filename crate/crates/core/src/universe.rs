use core::fmt;

/// The countable index sets terms and ideals live on. Indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Universe {
    /// `{1, 2, 3, ...}`
    Nat,
    /// `{1, 2, ...} x {1, 2, ...}`
    NatPair,
}

impl Universe {
    pub fn other(self) -> Universe {
        match self {
            Universe::Nat => Universe::NatPair,
            Universe::NatPair => Universe::Nat,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Universe::Nat => "nat",
            Universe::NatPair => "natpair",
        }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Nat(u64),
    Pair(u64, u64),
}

impl Element {
    pub fn universe(self) -> Universe {
        match self {
            Element::Nat(_) => Universe::Nat,
            Element::Pair(..) => Universe::NatPair,
        }
    }

    /// All coordinates are at least 1.
    pub fn is_valid(self) -> bool {
        match self {
            Element::Nat(n) => n >= 1,
            Element::Pair(a, b) => a >= 1 && b >= 1,
        }
    }

    /// Largest coordinate; truncation keeps elements with `max_coord <= bound`.
    pub fn max_coord(self) -> u64 {
        match self {
            Element::Nat(n) => n,
            Element::Pair(a, b) => a.max(b),
        }
    }

    /// Position in the canonical enumeration of the universe (1-based).
    pub fn rank(self) -> u64 {
        match self {
            Element::Nat(n) => n,
            Element::Pair(a, b) => pair_decode(a, b),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// Catalog bijections between `N` and `N x N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bijection {
    /// Diagonal (Cantor) enumeration: `(1,1), (2,1), (1,2), (3,1), ...`.
    Cantor,
    /// Square-shell enumeration: shell `k` holds the pairs with `max(a,b) = k`,
    /// listed `(1,k), ..., (k-1,k), (k,1), ..., (k,k)`.
    Shell,
}

impl Bijection {
    pub const ALL: [Bijection; 2] = [Bijection::Cantor, Bijection::Shell];

    pub fn name(self) -> &'static str {
        match self {
            Bijection::Cantor => "cantor",
            Bijection::Shell => "shell",
        }
    }

    /// `N -> N x N`.
    pub fn encode(self, n: u64) -> (u64, u64) {
        debug_assert!(n >= 1);
        let m = n - 1;
        match self {
            Bijection::Cantor => {
                let w = ((8 * m + 1).isqrt() - 1) / 2;
                let t = w * (w + 1) / 2;
                let y = m - t;
                (w - y + 1, y + 1)
            }
            Bijection::Shell => {
                let s = m.isqrt();
                let r = m - s * s;
                if r < s {
                    (r + 1, s + 1)
                } else {
                    (s + 1, r - s + 1)
                }
            }
        }
    }

    /// `N x N -> N`, inverse of [`Bijection::encode`].
    pub fn decode(self, a: u64, b: u64) -> u64 {
        debug_assert!(a >= 1 && b >= 1);
        let (x, y) = (a - 1, b - 1);
        let m = match self {
            Bijection::Cantor => (x + y) * (x + y + 1) / 2 + y,
            Bijection::Shell => {
                if x < y {
                    y * y + x
                } else {
                    x * x + x + y
                }
            }
        };
        m + 1
    }

    /// Maps an element to the other universe.
    pub fn apply(self, e: Element) -> Element {
        match e {
            Element::Nat(n) => {
                let (a, b) = self.encode(n);
                Element::Pair(a, b)
            }
            Element::Pair(a, b) => Element::Nat(self.decode(a, b)),
        }
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The fixed pairing `N -> N x N` (Cantor enumeration).
pub fn pair_encode(n: u64) -> (u64, u64) {
    Bijection::Cantor.encode(n)
}

pub fn pair_decode(a: u64, b: u64) -> u64 {
    Bijection::Cantor.decode(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_starts_on_the_diagonal() {
        let got: Vec<_> = (1..=6).map(pair_encode).collect();
        assert_eq!(got, vec![(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3)]);
    }

    #[test]
    fn shell_walks_square_shells() {
        let got: Vec<_> = (1..=9).map(|n| Bijection::Shell.encode(n)).collect();
        assert_eq!(
            got,
            vec![(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 1), (3, 2), (3, 3)]
        );
    }

    #[test]
    fn encode_decode_round_trip() {
        for b in Bijection::ALL {
            for n in 1..=10_000 {
                let (x, y) = b.encode(n);
                assert_eq!(b.decode(x, y), n, "{b} at {n}");
            }
            for x in 1..=60 {
                for y in 1..=60 {
                    let n = b.decode(x, y);
                    assert_eq!(b.encode(n), (x, y));
                }
            }
        }
    }
}
