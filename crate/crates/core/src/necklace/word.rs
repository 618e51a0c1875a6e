use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// A bead of a necklace: large (radius 1) or small (radius r).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Bead {
    L,
    S,
}

/// Cyclic word over `{L, S}` stored in canonical form: the lexicographically
/// least coding over all rotations and reflections, with `L < S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NecklaceWord {
    letters: Vec<Bead>,
}

/// Number of adjacent `LL`, mixed and `SS` pairs around a cyclic word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TripleCount {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl TripleCount {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        TripleCount { i, j, k }
    }

    pub fn total(&self) -> u32 {
        self.i + self.j + self.k
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.i, self.j, self.k]
    }
}

impl fmt::Display for TripleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

fn canonical(letters: &[Bead]) -> Vec<Bead> {
    let n = letters.len();
    let mut best = letters.to_vec();
    let rev: Vec<Bead> = letters.iter().rev().copied().collect();
    for base in [letters, &rev[..]] {
        for s in 0..n {
            let cand: Vec<Bead> = (0..n).map(|i| base[(s + i) % n]).collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

impl NecklaceWord {
    /// Canonicalizes an arbitrary coding of a necklace.
    pub fn new(letters: &[Bead]) -> Self {
        NecklaceWord {
            letters: canonical(letters),
        }
    }

    pub fn letters(&self) -> &[Bead] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, b: Bead) -> usize {
        self.letters.iter().filter(|&&x| x == b).count()
    }

    /// Adjacent-pair counts around the cycle.
    pub fn triple(&self) -> TripleCount {
        let n = self.letters.len();
        let mut t = TripleCount::new(0, 0, 0);
        for a in 0..n {
            match (self.letters[a], self.letters[(a + 1) % n]) {
                (Bead::L, Bead::L) => t.i += 1,
                (Bead::S, Bead::S) => t.k += 1,
                _ => t.j += 1,
            }
        }
        t
    }

    /// Coding with `1` for large and `r` for small beads, e.g. `111rr`.
    pub fn radius_code(&self) -> String {
        self.letters
            .iter()
            .map(|b| if *b == Bead::L { '1' } else { 'r' })
            .collect()
    }

    /// Every rotation and reflection of the coding (with repetitions).
    pub fn codings(&self) -> Vec<Vec<Bead>> {
        let n = self.letters.len();
        let rev: Vec<Bead> = self.letters.iter().rev().copied().collect();
        let mut out = Vec::with_capacity(2 * n);
        for base in [&self.letters[..], &rev[..]] {
            for s in 0..n {
                out.push((0..n).map(|i| base[(s + i) % n]).collect());
            }
        }
        out
    }
}

impl fmt::Display for NecklaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.letters {
            write!(f, "{}", if *b == Bead::L { 'L' } else { 'S' })?;
        }
        Ok(())
    }
}

impl FromStr for NecklaceWord {
    type Err = Error;

    /// Accepts `L`/`S` or `1`/`r` codings (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Error> {
        let letters = s
            .chars()
            .map(|c| match c {
                'L' | 'l' | '1' => Ok(Bead::L),
                'S' | 's' | 'r' | 'R' => Ok(Bead::S),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidWord(s.to_string()));
        }
        Ok(NecklaceWord::new(&letters))
    }
}

impl Serialize for NecklaceWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All canonical words of length `n`, in lexicographic order.
pub fn words_of_length(n: usize) -> Vec<NecklaceWord> {
    let mut out: Vec<NecklaceWord> = (0u32..1 << n)
        .map(|bits| {
            let letters: Vec<Bead> = (0..n)
                .map(|i| {
                    if bits >> (n - 1 - i) & 1 == 0 {
                        Bead::L
                    } else {
                        Bead::S
                    }
                })
                .collect();
            NecklaceWord::new(&letters)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Candidate skew necklaces: canonical words of length 3 to 5, by length
/// then lexicographically.
pub fn enumerate_skew_candidates() -> Vec<NecklaceWord> {
    (3..=5).flat_map(words_of_length).collect()
}

/// Canonical words whose adjacent-pair counts equal `t`.
pub fn realize_words(t: TripleCount) -> Vec<NecklaceWord> {
    if t.j % 2 == 1 || t.total() == 0 || t.total() > 24 {
        return Vec::new();
    }
    words_of_length(t.total() as usize)
        .into_iter()
        .filter(|w| w.triple() == t)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn w(s: &str) -> NecklaceWord {
        s.parse().unwrap()
    }

    #[test]
    fn eighteen_candidates() {
        let all = enumerate_skew_candidates();
        assert_eq!(all.len(), 18);
        let three: Vec<String> = all
            .iter()
            .filter(|x| x.len() == 3)
            .map(|x| x.to_string())
            .collect();
        assert_eq!(three, ["LLL", "LLS", "LSS", "SSS"]);
        let four: Vec<String> = all
            .iter()
            .filter(|x| x.len() == 4)
            .map(|x| x.to_string())
            .collect();
        assert_eq!(four, ["LLLL", "LLLS", "LLSS", "LSLS", "LSSS", "SSSS"]);
    }

    #[test]
    fn enumeration_matches_brute_force_orbits() {
        // orbit counting through explicit string sets, independent of `canonical`
        for n in 3..=5 {
            let mut orbits: BTreeSet<BTreeSet<String>> = BTreeSet::new();
            for bits in 0u32..1 << n {
                let s: String = (0..n)
                    .map(|i| if bits >> i & 1 == 0 { 'L' } else { 'S' })
                    .collect();
                let mut orbit = BTreeSet::new();
                for rot in 0..n {
                    let r: String = s[rot..].to_string() + &s[..rot];
                    orbit.insert(r.chars().rev().collect());
                    orbit.insert(r);
                }
                orbits.insert(orbit);
            }
            let mine = words_of_length(n);
            assert_eq!(mine.len(), orbits.len());
            for word in mine {
                let first = orbits
                    .iter()
                    .find(|o| o.contains(&word.to_string()))
                    .unwrap();
                assert_eq!(first.iter().next().unwrap(), &word.to_string());
            }
        }
    }

    #[test]
    fn canonical_form_is_invariant() {
        assert_eq!(w("SLLLS"), w("LLLSS"));
        assert_eq!(w("rr111"), w("LLLSS"));
        assert_eq!(w("LSLLS").to_string(), "LLSLS");
        assert_eq!(w("111rr").radius_code(), "111rr");
    }

    #[test]
    fn triples() {
        assert_eq!(w("LLLSS").triple(), TripleCount::new(2, 2, 1));
        assert_eq!(w("LSLS").triple(), TripleCount::new(0, 4, 0));
        assert_eq!(w("SSS").triple(), TripleCount::new(0, 0, 3));
    }

    #[test]
    fn realizations() {
        let names = |t| {
            realize_words(t)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(TripleCount::new(2, 4, 0)), ["LLLSLS", "LLSLLS"]);
        assert_eq!(names(TripleCount::new(1, 2, 1)), ["LLSS"]);
        assert_eq!(names(TripleCount::new(0, 0, 3)), ["SSS"]);
        assert!(names(TripleCount::new(1, 3, 0)).is_empty());
    }

    #[test]
    fn rejects_bad_letters() {
        assert!("LXS".parse::<NecklaceWord>().is_err());
        assert!("".parse::<NecklaceWord>().is_err());
    }
}
