use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// Position of a triangular-grid layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    A,
    B,
    C,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::A, Layer::B, Layer::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Layer::ALL[i % 3]
    }
}

/// Periodic stacking word over `{A, B, C}`; cyclically consecutive layers differ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackingSequence {
    letters: Vec<Layer>,
}

impl StackingSequence {
    pub fn new(letters: Vec<Layer>) -> Result<Self, Error> {
        let s = StackingSequence { letters };
        let n = s.letters.len();
        if n < 2 {
            return Err(Error::InvalidStacking(
                s.to_string(),
                "period must be at least 2".into(),
            ));
        }
        if (0..n).any(|i| s.letters[i] == s.letters[(i + 1) % n]) {
            return Err(Error::InvalidStacking(
                s.to_string(),
                "consecutive layers coincide".into(),
            ));
        }
        Ok(s)
    }

    pub fn letters(&self) -> &[Layer] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Shortest word whose repetition gives this one.
    pub fn primitive(&self) -> StackingSequence {
        let n = self.letters.len();
        let p = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.letters[i] == self.letters[i % p]))
            .unwrap_or(n);
        StackingSequence {
            letters: self.letters[..p].to_vec(),
        }
    }

    /// Least representative of the primitive word under relabeling of the
    /// three positions, cyclic shift and reversal.
    pub fn canonical(&self) -> StackingSequence {
        let base = self.primitive().letters;
        let n = base.len();
        let rev: Vec<Layer> = base.iter().rev().copied().collect();
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut best: Option<Vec<Layer>> = None;
        for w in [&base, &rev] {
            for s in 0..n {
                for p in &perms {
                    let cand: Vec<Layer> = (0..n)
                        .map(|i| Layer::from_index(p[w[(s + i) % n].index()]))
                        .collect();
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
        StackingSequence {
            letters: best.expect("nonempty"),
        }
    }

    pub fn equivalent(&self, other: &StackingSequence) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for StackingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl FromStr for StackingSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'A' => Ok(Layer::A),
                'B' => Ok(Layer::B),
                'C' => Ok(Layer::C),
                _ => Err(Error::InvalidStacking(
                    s.to_string(),
                    format!("unexpected letter {c:?}"),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?;
        StackingSequence::new(letters)
    }
}

impl Serialize for StackingSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Every valid word of length 2..=`max_period`, in lexicographic order.
pub fn all_stackings(max_period: usize) -> Vec<StackingSequence> {
    let mut out = Vec::new();
    for n in 2..=max_period {
        for code in 0..3usize.pow(n as u32) {
            let letters: Vec<Layer> = (0..n)
                .map(|i| Layer::from_index(code / 3usize.pow((n - 1 - i) as u32)))
                .collect();
            if let Ok(s) = StackingSequence::new(letters) {
                out.push(s);
            }
        }
    }
    out
}

/// Stacking classes of period at most `max_period`, up to symmetry,
/// as canonical primitive words.
pub fn stacking_classes(max_period: usize) -> Vec<StackingSequence> {
    let set: BTreeSet<StackingSequence> = all_stackings(max_period)
        .iter()
        .map(|s| s.canonical())
        .collect();
    let mut v: Vec<StackingSequence> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> StackingSequence {
        x.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!("AA".parse::<StackingSequence>().is_err());
        assert!("ABA".parse::<StackingSequence>().is_err());
        assert!("A".parse::<StackingSequence>().is_err());
        assert!("ABX".parse::<StackingSequence>().is_err());
        assert_eq!(s("abc").to_string(), "ABC");
    }

    #[test]
    fn symmetry_classes() {
        assert!(s("ACB").equivalent(&s("ABC")));
        assert!(s("CACB").equivalent(&s("ABAC")));
        assert!(s("BCBC").equivalent(&s("AB")));
        assert_eq!(s("ABCABC").canonical(), s("ABC"));
        assert!(!s("ABAC").equivalent(&s("ABC")));
    }

    #[test]
    fn class_count_matches_brute_force_orbits() {
        // orbit count by closing each word under the generators, independent of `canonical`
        let words: BTreeSet<String> = all_stackings(6).iter().map(|w| w.to_string()).collect();
        let prim = |w: &str| -> String {
            let n = w.len();
            let p = (1..=n)
                .find(|&p| n.is_multiple_of(p) && w.as_bytes().chunks(p).all(|c| c == &w.as_bytes()[..p]))
                .unwrap();
            w[..p].to_string()
        };
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut orbits = 0;
        for w in &words {
            let p = prim(w);
            if seen.contains(&p) {
                continue;
            }
            orbits += 1;
            let mut stack = vec![p.clone()];
            seen.insert(p);
            while let Some(x) = stack.pop() {
                let mut next = vec![x[1..].to_string() + &x[..1], x.chars().rev().collect()];
                next.push(
                    x.chars()
                        .map(|c| match c {
                            'A' => 'B',
                            'B' => 'A',
                            c => c,
                        })
                        .collect(),
                );
                next.push(
                    x.chars()
                        .map(|c| match c {
                            'A' => 'B',
                            'B' => 'C',
                            _ => 'A',
                        })
                        .collect(),
                );
                for y in next {
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
        }
        assert_eq!(stacking_classes(6).len(), orbits);
        let names: Vec<String> = stacking_classes(6).iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["AB", "ABC", "ABAC", "ABABC", "ABABAC", "ABACBC"]);
        assert_eq!(all_stackings(6).len(), 126);
    }
}
