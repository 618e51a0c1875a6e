//! Combinatorial shells: labeled triangulations of the sphere of contacts
//! around a central large sphere.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::necklace::{Bead, NecklaceWord};

/// Kissing number of unit spheres: at most 12 large spheres touch a large one.
pub const KISSING_BOUND: usize = 12;

/// Node budget used when the caller does not supply one.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShellStatus {
    Partial,
    Complete,
}

/// Spheres tangent to a central large sphere, as a labeled face complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellComplex {
    labels: Vec<Bead>,
    faces: Vec<[usize; 3]>,
    status: ShellStatus,
}

/// Shape of the link of a vertex in a partial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Link {
    Empty,
    Paths(Vec<Vec<usize>>),
    Cycle(Vec<usize>),
    Broken,
}

fn link_of(faces: &[[usize; 3]], v: usize) -> Link {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for f in faces.iter().filter(|f| f.contains(&v)) {
        let others: Vec<usize> = f.iter().copied().filter(|&x| x != v).collect();
        let (a, b) = (others[0].min(others[1]), others[0].max(others[1]));
        if !seen.insert((a, b)) {
            return Link::Broken;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.is_empty() {
        return Link::Empty;
    }
    if adj.values().any(|n| n.len() > 2) {
        return Link::Broken;
    }
    let mut visited = BTreeSet::new();
    let mut paths = Vec::new();
    // paths start at degree-1 vertices
    for (&s, n) in &adj {
        if n.len() != 1 || visited.contains(&s) {
            continue;
        }
        let mut path = vec![s];
        visited.insert(s);
        let mut cur = s;
        while let Some(&nx) = adj[&cur].iter().find(|x| !visited.contains(x)) {
            path.push(nx);
            visited.insert(nx);
            cur = nx;
        }
        paths.push(path);
    }
    if visited.len() == adj.len() {
        return Link::Paths(paths);
    }
    // remaining vertices lie on cycles; a cycle is only valid alone
    if !paths.is_empty() {
        return Link::Broken;
    }
    let &s = adj.keys().next().expect("nonempty");
    let mut cycle = vec![s];
    let mut prev = usize::MAX;
    let mut cur = s;
    loop {
        let nx = *adj[&cur].iter().find(|&&x| x != prev).expect("degree 2");
        if nx == s {
            break;
        }
        cycle.push(nx);
        prev = cur;
        cur = nx;
    }
    if cycle.len() == adj.len() {
        Link::Cycle(cycle)
    } else {
        Link::Broken
    }
}

/// Allowed cyclic words with all their linear codings.
struct WordSet {
    words: BTreeSet<NecklaceWord>,
    codings: Vec<Vec<Bead>>,
    max_len: usize,
}

impl WordSet {
    fn new(words: &BTreeSet<NecklaceWord>) -> Self {
        WordSet {
            words: words.clone(),
            codings: words.iter().flat_map(|w| w.codings()).collect(),
            max_len: words.iter().map(|w| w.len()).max().unwrap_or(0),
        }
    }

    /// A path read along the link must be a factor of some allowed word.
    fn admits_path(&self, p: &[Bead]) -> bool {
        self.codings
            .iter()
            .any(|c| c.len() >= p.len() && c[..p.len()] == *p)
    }

    fn admits_cycle(&self, c: &[Bead]) -> bool {
        self.words.contains(&NecklaceWord::new(c))
    }
}

struct Rules {
    large: WordSet,
    small: WordSet,
    kissing_bound: usize,
}

impl Rules {
    fn set(&self, b: Bead) -> &WordSet {
        match b {
            Bead::L => &self.large,
            Bead::S => &self.small,
        }
    }
}

#[derive(Clone)]
struct State {
    labels: Vec<Bead>,
    faces: Vec<[usize; 3]>,
}

impl State {
    fn link_ok(&self, rules: &Rules, v: usize) -> bool {
        let set = rules.set(self.labels[v]);
        let read = |xs: &[usize]| xs.iter().map(|&x| self.labels[x]).collect::<Vec<_>>();
        match link_of(&self.faces, v) {
            Link::Empty => true,
            Link::Broken => false,
            Link::Cycle(c) => set.admits_cycle(&read(&c)),
            Link::Paths(ps) => {
                let total: usize = ps.iter().map(Vec::len).sum();
                total <= set.max_len && ps.iter().all(|p| set.admits_path(&read(p)))
            }
        }
    }

    fn valid_after(&self, rules: &Rules, touched: &[usize]) -> bool {
        let large = self.labels.iter().filter(|&&b| b == Bead::L).count();
        if large > rules.kissing_bound {
            return false;
        }
        let f = self.faces.last().expect("a face was added");
        for i in 0..3 {
            if self.labels[f[i]] == Bead::S && self.labels[f[(i + 1) % 3]] == Bead::S {
                return false;
            }
        }
        touched.iter().all(|&v| self.link_ok(rules, v))
    }

    /// Link endpoints `(v, b)`: edges `vb` that still lack their second face.
    fn open_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.labels.len() {
            if let Link::Paths(ps) = link_of(&self.faces, v) {
                for p in ps {
                    out.push((v, p[0]));
                    if p.len() > 1 {
                        out.push((v, p[p.len() - 1]));
                    }
                }
            }
        }
        out
    }

    /// Every state obtained by putting a face on the open edge `vb`.
    fn extensions(&self, rules: &Rules, v: usize, b: usize) -> Vec<State> {
        let mut out = Vec::new();
        let n = self.labels.len();
        let mut candidates: Vec<(usize, Option<Bead>)> = (0..n)
            .filter(|&x| x != v && x != b)
            .map(|x| (x, None))
            .collect();
        candidates.push((n, Some(Bead::L)));
        candidates.push((n, Some(Bead::S)));
        for (x, fresh) in candidates {
            let mut next = self.clone();
            if let Some(label) = fresh {
                next.labels.push(label);
            }
            next.faces.push([v, b, x]);
            if next.valid_after(rules, &[v, b, x]) {
                out.push(next);
            }
        }
        out
    }
}

/// Outcome of the exhaustive shell search with its bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct ShellSearch {
    pub shells: Vec<ShellComplex>,
    /// Search states visited.
    pub nodes: u64,
    /// States where the most constrained open edge had two or more choices.
    pub branch_points: u64,
    /// States with an open edge admitting no face.
    pub dead_ends: u64,
}

struct Searcher<'a> {
    rules: &'a Rules,
    budget: u64,
    nodes: u64,
    branch_points: u64,
    dead_ends: u64,
    found: BTreeMap<Vec<u32>, ShellComplex>,
}

impl Searcher<'_> {
    fn run(&mut self, state: State) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::NodeBudgetExceeded(self.budget));
        }
        let open = state.open_edges();
        if open.is_empty() {
            let shell = ShellComplex {
                labels: state.labels,
                faces: state.faces,
                status: ShellStatus::Complete,
            };
            if shell.is_sphere() {
                let (code, canon) = shell.canonical();
                self.found.entry(code).or_insert(canon);
            }
            return Ok(());
        }
        // most constrained open edge first
        let mut best: Option<Vec<State>> = None;
        for (v, b) in open {
            let ext = state.extensions(self.rules, v, b);
            if best.as_ref().is_none_or(|e| ext.len() < e.len()) {
                let stop = ext.len() <= 1;
                best = Some(ext);
                if stop {
                    break;
                }
            }
        }
        let choices = best.expect("open edges exist");
        match choices.len() {
            0 => self.dead_ends += 1,
            1 => {}
            _ => self.branch_points += 1,
        }
        for next in choices {
            self.run(next)?;
        }
        Ok(())
    }
}

/// Exhaustive completion of shells from a small sphere surrounded by one of
/// the allowed small links (and, when an all-large word is allowed, from a
/// large sphere surrounded by it). Shells are returned up to isomorphism in
/// canonical order.
pub fn search_shells(
    allowed_large: &BTreeSet<NecklaceWord>,
    allowed_small: &BTreeSet<NecklaceWord>,
    kissing_bound: usize,
    node_budget: u64,
) -> Result<ShellSearch> {
    let rules = Rules {
        large: WordSet::new(allowed_large),
        small: WordSet::new(allowed_small),
        kissing_bound,
    };
    let mut seeds = Vec::new();
    let all_large = |w: &&NecklaceWord| w.count(Bead::S) == 0;
    for (center, w) in allowed_small
        .iter()
        .map(|w| (Bead::S, w))
        .chain(allowed_large.iter().filter(all_large).map(|w| (Bead::L, w)))
    {
        let n = w.len();
        let mut labels = vec![center];
        labels.extend_from_slice(w.letters());
        let faces: Vec<[usize; 3]> = (0..n).map(|i| [0, 1 + i, 1 + (i + 1) % n]).collect();
        let state = State { labels, faces };
        let ok = (0..state.labels.len()).all(|v| state.link_ok(&rules, v))
            && state.labels.iter().filter(|&&b| b == Bead::L).count() <= kissing_bound
            && !(center == Bead::S && w.count(Bead::S) > 0);
        if ok {
            seeds.push(state);
        }
    }
    let mut s = Searcher {
        rules: &rules,
        budget: node_budget,
        nodes: 0,
        branch_points: 0,
        dead_ends: 0,
        found: BTreeMap::new(),
    };
    for seed in seeds {
        s.run(seed)?;
    }
    Ok(ShellSearch {
        shells: s.found.into_values().collect(),
        nodes: s.nodes,
        branch_points: s.branch_points,
        dead_ends: s.dead_ends,
    })
}

/// All complete shells up to isomorphism, in canonical order.
pub fn complete_shells(
    allowed_large: &BTreeSet<NecklaceWord>,
    allowed_small: &BTreeSet<NecklaceWord>,
    kissing_bound: usize,
    node_budget: u64,
) -> Result<Vec<ShellComplex>> {
    search_shells(allowed_large, allowed_small, kissing_bound, node_budget).map(|s| s.shells)
}

/// The large and skew necklaces admitted at r = √2 − 1.
pub fn shell_word_sets() -> (BTreeSet<NecklaceWord>, BTreeSet<NecklaceWord>) {
    let w = |s: &str| s.parse::<NecklaceWord>().expect("valid word");
    (
        BTreeSet::from([w("LLLSLS"), w("LLSLLS")]),
        BTreeSet::from([w("LLLL")]),
    )
}

impl ShellComplex {
    /// Builds a complex from explicit data; status is derived.
    pub fn new(labels: Vec<Bead>, faces: Vec<[usize; 3]>) -> Self {
        let mut s = ShellComplex {
            labels,
            faces,
            status: ShellStatus::Partial,
        };
        if (0..s.labels.len()).all(|v| matches!(link_of(&s.faces, v), Link::Cycle(_))) {
            s.status = ShellStatus::Complete;
        }
        s
    }

    pub fn labels(&self) -> &[Bead] {
        &self.labels
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn status(&self) -> ShellStatus {
        self.status
    }

    /// The central sphere is always large.
    pub fn center_label(&self) -> Bead {
        Bead::L
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn count(&self, b: Bead) -> usize {
        self.labels.iter().filter(|&&x| x == b).count()
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut e = BTreeSet::new();
        for f in &self.faces {
            for i in 0..3 {
                let (a, b) = (f[i], f[(i + 1) % 3]);
                e.insert((a.min(b), a.max(b)));
            }
        }
        e
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.faces
            .iter()
            .any(|f| f.contains(&a) && f.contains(&b) && a != b)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels.len() as i64 - self.edges().len() as i64 + self.faces.len() as i64
    }

    /// Every edge in exactly two faces, χ = 2 and connected.
    pub fn is_sphere(&self) -> bool {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for i in 0..3 {
                let (a, b) = (f[i], f[(i + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        count.values().all(|&c| c == 2) && self.euler_characteristic() == 2 && self.is_connected()
    }

    fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let edges = self.edges();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Neighbors of `v` in cyclic order around it, if its link is closed.
    pub fn link_cycle(&self, v: usize) -> Option<Vec<usize>> {
        match link_of(&self.faces, v) {
            Link::Cycle(c) => Some(c),
            _ => None,
        }
    }

    pub fn link_word(&self, v: usize) -> Option<NecklaceWord> {
        self.link_cycle(v)
            .map(|c| NecklaceWord::new(&c.iter().map(|&x| self.labels[x]).collect::<Vec<_>>()))
    }

    /// Direct check of the link conditions, independent of the search.
    pub fn satisfies(
        &self,
        allowed_large: &BTreeSet<NecklaceWord>,
        allowed_small: &BTreeSet<NecklaceWord>,
    ) -> bool {
        self.is_sphere()
            && self.count(Bead::L) <= KISSING_BOUND
            && self
                .edges()
                .iter()
                .all(|&(a, b)| !(self.labels[a] == Bead::S && self.labels[b] == Bead::S))
            && (0..self.labels.len()).all(|v| {
                let set = if self.labels[v] == Bead::L {
                    allowed_large
                } else {
                    allowed_small
                };
                self.link_word(v).is_some_and(|w| set.contains(&w))
            })
    }

    /// Successor maps of a coherent orientation: `rot[v][a]` is the
    /// neighbor after `a` around `v`.
    fn rotation(&self) -> Vec<HashMap<usize, usize>> {
        let mut oriented: Vec<Option<[usize; 3]>> = vec![None; self.faces.len()];
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
            }
        }
        oriented[0] = Some(self.faces[0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let f = oriented[i].expect("oriented");
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                for &j in &by_edge[&(a.min(b), a.max(b))] {
                    if oriented[j].is_some() {
                        continue;
                    }
                    // the neighbor must traverse the shared edge as b → a
                    let g = self.faces[j];
                    let c = *g.iter().find(|&&x| x != a && x != b).expect("triangle");
                    oriented[j] = Some([b, a, c]);
                    queue.push_back(j);
                }
            }
        }
        let mut rot = vec![HashMap::new(); self.labels.len()];
        for f in oriented.into_iter().flatten() {
            for k in 0..3 {
                rot[f[k]].insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
        }
        rot
    }

    /// Breadth-first code from the directed edge `v0 → u0`.
    fn bfs_code(
        &self,
        rot: &[HashMap<usize, usize>],
        v0: usize,
        u0: usize,
    ) -> (Vec<u32>, Vec<usize>) {
        let n = self.labels.len();
        let mut number = vec![u32::MAX; n];
        let mut order = vec![v0];
        let mut first = vec![usize::MAX; n];
        number[v0] = 0;
        first[v0] = u0;
        let mut code = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            code.push(self.labels[v] as u32);
            let start = first[v];
            let mut w = start;
            loop {
                if number[w] == u32::MAX {
                    number[w] = order.len() as u32;
                    first[w] = v;
                    order.push(w);
                }
                code.push(2 + number[w]);
                w = rot[v][&w];
                if w == start {
                    break;
                }
            }
            code.push(1 << 30);
        }
        (code, order)
    }

    /// Minimal BFS code over all directed edges and both orientations,
    /// together with the complex relabeled in that BFS order.
    pub fn canonical(&self) -> (Vec<u32>, ShellComplex) {
        let fwd = self.rotation();
        let bwd: Vec<HashMap<usize, usize>> = fwd
            .iter()
            .map(|m| m.iter().map(|(&a, &b)| (b, a)).collect())
            .collect();
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        for rot in [&fwd, &bwd] {
            for (a, b) in self.edges() {
                for (v0, u0) in [(a, b), (b, a)] {
                    let cand = self.bfs_code(rot, v0, u0);
                    if best.as_ref().is_none_or(|x| cand.0 < x.0) {
                        best = Some(cand);
                    }
                }
            }
        }
        let (code, order) = best.expect("nonempty complex");
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let labels = order.iter().map(|&v| self.labels[v]).collect();
        let mut faces: Vec<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| {
                let mut g = f.map(|x| pos[x]);
                g.sort_unstable();
                g
            })
            .collect();
        faces.sort_unstable();
        (
            code,
            ShellComplex {
                labels,
                faces,
                status: self.status,
            },
        )
    }

    /// Isomorphism of labeled complexes (orientation reversal allowed).
    pub fn is_isomorphic(&self, other: &ShellComplex) -> bool {
        self.labels.len() == other.labels.len() && self.canonical().0 == other.canonical().0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(xs: &[&str]) -> BTreeSet<NecklaceWord> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn octahedron() -> ShellComplex {
        // all-large octahedron: poles 0 and 5 around the square 1..4
        let mut faces = Vec::new();
        for i in 0..4 {
            faces.push([0, 1 + i, 1 + (i + 1) % 4]);
            faces.push([5, 1 + i, 1 + (i + 1) % 4]);
        }
        ShellComplex::new(vec![Bead::L; 6], faces)
    }

    #[test]
    fn link_shapes() {
        let faces = [[0, 1, 2], [0, 2, 3]];
        assert_eq!(link_of(&faces, 0), Link::Paths(vec![vec![1, 2, 3]]));
        assert_eq!(link_of(&faces, 4), Link::Empty);
        let oct = octahedron();
        assert_eq!(oct.link_cycle(0).unwrap().len(), 4);
        assert!(oct.is_sphere());
        assert_eq!(oct.status(), ShellStatus::Complete);
    }

    #[test]
    fn canonical_form_ignores_labelling() {
        let oct = octahedron();
        let perm = [3, 5, 0, 1, 4, 2];
        let faces = oct.faces().iter().map(|f| f.map(|x| perm[x])).collect();
        let relabeled = ShellComplex::new(vec![Bead::L; 6], faces);
        assert!(oct.is_isomorphic(&relabeled));
        let mut labels = vec![Bead::L; 6];
        labels[0] = Bead::S;
        assert!(!oct.is_isomorphic(&ShellComplex::new(labels, oct.faces().to_vec())));
    }

    #[test]
    fn two_shells_at_sqrt2_minus_1() {
        let (large, small) = shell_word_sets();
        let res = search_shells(&large, &small, KISSING_BOUND, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.shells.len(), 2);
        for s in &res.shells {
            assert_eq!((s.count(Bead::L), s.count(Bead::S)), (12, 6));
            assert!(s.satisfies(&large, &small));
        }
        assert!(!res.shells[0].is_isomorphic(&res.shells[1]));
    }

    #[test]
    fn first_case_only() {
        let (_, small) = shell_word_sets();
        let shells = complete_shells(&words(&["LLSLLS"]), &small, 12, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(shells.len(), 1);
        assert!((0..18)
            .filter(|&v| shells[0].labels()[v] == Bead::L)
            .all(|v| { shells[0].link_word(v).unwrap().to_string() == "LLSLLS" }));
    }

    #[test]
    fn no_small_words_no_shell() {
        let (large, _) = shell_word_sets();
        assert!(
            complete_shells(&large, &BTreeSet::new(), 12, DEFAULT_NODE_BUDGET)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn octahedral_links_give_the_octahedron() {
        // sanity check of the search on an all-large seed
        let shells = complete_shells(&words(&["LLLL"]), &BTreeSet::new(), 12, 10_000).unwrap();
        assert_eq!(shells.len(), 1);
        assert!(shells[0].is_isomorphic(&octahedron()));
    }

    #[test]
    fn budget_is_enforced() {
        let (large, small) = shell_word_sets();
        assert_eq!(
            complete_shells(&large, &small, 12, 3),
            Err(Error::NodeBudgetExceeded(3))
        );
    }
}
