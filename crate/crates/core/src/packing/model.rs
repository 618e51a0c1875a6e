//! Periodic sphere packings with exact coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Vec3, Q23};
use crate::necklace::Bead;

use super::stacking::StackingSequence;

/// Squared interaction range: twice the largest diameter sum, squared.
pub const RANGE2: i64 = 16;

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Translation by an integer combination of the basis vectors.
pub type Translate = [i64; 3];

/// A sphere of the motif, in fractional coordinates in `[0, 1)³`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sphere {
    #[serde(serialize_with = "frac_strings")]
    pub frac: [BigRational; 3],
    pub kind: Bead,
}

fn frac_strings<S: serde::Serializer>(
    f: &[BigRational; 3],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    f.clone().map(|x| x.to_string()).serialize(s)
}

/// Lattice basis plus motif; radii are 1 (large) and √2 − 1 (small).
#[derive(Clone, Debug, Serialize)]
pub struct PackingModel {
    pub basis: [Vec3; 3],
    pub motif: Vec<Sphere>,
    /// Stacking word the model was built from, if any.
    pub stacking: Option<StackingSequence>,
    #[serde(skip)]
    gram: [[Q23; 3]; 3],
    #[serde(skip)]
    gram_f64: [[f64; 3]; 3],
    #[serde(skip)]
    reach: [i64; 3],
}

/// Another sphere within interaction range of a motif sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub index: usize,
    pub translate: Translate,
    pub dist2: Q23,
}

pub fn small_radius() -> Q23 {
    Q23::from_ints(-1, 1, 0, 0)
}

pub fn radius_of(kind: Bead) -> Q23 {
    match kind {
        Bead::L => Q23::one(),
        Bead::S => small_radius(),
    }
}

pub(crate) fn contact2(a: Bead, b: Bead) -> Q23 {
    (&radius_of(a) + &radius_of(b)).square()
}

/// Reduces a rational into `[0, 1)`.
pub(crate) fn wrap(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

fn inverse3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            *x = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
        }
    }
    inv
}

impl PackingModel {
    pub fn new(basis: [Vec3; 3], motif: Vec<Sphere>) -> Result<Self> {
        let gram: [[Q23; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| basis[i].dot(&basis[j])));
        if Vec3::triple(&basis[0], &basis[1], &basis[2]).is_zero() {
            return Err(Error::DegenerateInput(
                "basis vectors are linearly dependent".into(),
            ));
        }
        let gram_f64 = gram.clone().map(|row| row.map(|x| x.to_f64()));
        // a vector of length ≤ 4 has fractional coordinate k at most 4·|b*_k|
        let ginv = inverse3(&gram_f64);
        let reach = std::array::from_fn(|k| (4.0 * ginv[k][k].sqrt()).ceil() as i64 + 1);
        let motif = motif
            .into_iter()
            .map(|s| Sphere {
                frac: s.frac.map(|x| wrap(&x)),
                kind: s.kind,
            })
            .collect();
        Ok(PackingModel {
            basis,
            motif,
            stacking: None,
            gram,
            gram_f64,
            reach,
        })
    }

    pub fn len(&self) -> usize {
        self.motif.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motif.is_empty()
    }

    pub fn count(&self, kind: Bead) -> usize {
        self.motif.iter().filter(|s| s.kind == kind).count()
    }

    pub fn cell_volume(&self) -> Q23 {
        let v = Vec3::triple(&self.basis[0], &self.basis[1], &self.basis[2]);
        if v.sign() < 0 {
            -v
        } else {
            v
        }
    }

    /// Exact squared length of the vector with fractional coordinates `d`.
    pub fn frac_norm2(&self, d: &[BigRational; 3]) -> Q23 {
        let mut s = Q23::zero();
        for i in 0..3 {
            for j in 0..3 {
                if d[i].is_zero() || d[j].is_zero() {
                    continue;
                }
                s = &s + &self.gram[i][j].scale(&(&d[i] * &d[j]));
            }
        }
        s
    }

    fn frac_norm2_f64(&self, d: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.gram_f64[i][j] * d[i] * d[j];
            }
        }
        s
    }

    pub fn cartesian(&self, frac: &[BigRational; 3]) -> Vec3 {
        let mut p = Vec3::zero();
        for (k, f) in frac.iter().enumerate() {
            if !f.is_zero() {
                p = &p + &self.basis[k].scale_q(f);
            }
        }
        p
    }

    pub fn position(&self, index: usize, t: &Translate) -> [BigRational; 3] {
        std::array::from_fn(|k| &self.motif[index].frac[k] + BigRational::from_integer(t[k].into()))
    }

    /// Spheres whose centers lie within squared distance `RANGE2` of the point
    /// with fractional coordinates `from` (the point itself excluded).
    pub fn near(&self, from: &[BigRational; 3]) -> Vec<Neighbor> {
        let from_f = from.clone().map(|x| x.to_f64().unwrap_or(f64::NAN));
        let mut out = Vec::new();
        let [ra, rb, rc] = self.reach;
        for (index, s) in self.motif.iter().enumerate() {
            let sf = s.frac.clone().map(|x| x.to_f64().unwrap_or(f64::NAN));
            for i in -ra..=ra {
                for j in -rb..=rb {
                    for k in -rc..=rc {
                        let t = [i, j, k];
                        let df = std::array::from_fn(|m| sf[m] + t[m] as f64 - from_f[m]);
                        // coarse float screen; every survivor is decided exactly
                        if self.frac_norm2_f64(&df) > RANGE2 as f64 + 1e-6 {
                            continue;
                        }
                        let d: [BigRational; 3] = std::array::from_fn(|m| {
                            &s.frac[m] + BigRational::from_integer(t[m].into()) - &from[m]
                        });
                        let dist2 = self.frac_norm2(&d);
                        if dist2.is_zero() || dist2 > Q23::int(RANGE2) {
                            continue;
                        }
                        out.push(Neighbor {
                            index,
                            translate: t,
                            dist2,
                        });
                    }
                }
            }
        }
        out
    }

    /// Neighbor lists of every motif sphere.
    pub fn neighborhoods(&self) -> Vec<Vec<Neighbor>> {
        use rayon::prelude::*;
        (0..self.motif.len())
            .into_par_iter()
            .map(|i| self.near(&self.motif[i].frac))
            .collect()
    }

    /// Spheres tangent to motif sphere `i`.
    pub fn tangent_neighbors(&self, i: usize, near: &[Neighbor]) -> Vec<Neighbor> {
        let ki = self.motif[i].kind;
        near.iter()
            .filter(|n| n.dist2 == contact2(ki, self.motif[n.index].kind))
            .cloned()
            .collect()
    }

    /// Every pair of spheres is interior-disjoint.
    pub fn check_disjoint(&self, hoods: &[Vec<Neighbor>]) -> Result<()> {
        for (i, hood) in hoods.iter().enumerate() {
            for n in hood {
                if n.dist2 < contact2(self.motif[i].kind, self.motif[n.index].kind) {
                    return Err(Error::DegenerateInput(format!(
                        "spheres {i} and {} {:?} overlap",
                        n.index, n.translate
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Layer spacing of close-packed unit spheres, 2√6/3.
pub fn layer_spacing() -> Q23 {
    Q23::sqrt6().scale(&q(2, 3))
}

/// Unit spheres on triangular-grid layers at positions A, B, C.
pub fn build_close_packing(seq: &StackingSequence) -> PackingModel {
    let n = seq.len() as i64;
    let basis = [
        Vec3::new(Q23::int(2), Q23::zero(), Q23::zero()),
        Vec3::new(Q23::int(1), Q23::sqrt3(), Q23::zero()),
        Vec3::new(Q23::zero(), Q23::zero(), layer_spacing().scale(&q(n, 1))),
    ];
    let motif = seq
        .letters()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let p = l.index() as i64;
            Sphere {
                frac: [q(p, 3), q(p, 3), q(k as i64, n)],
                kind: Bead::L,
            }
        })
        .collect();
    let mut m = PackingModel::new(basis, motif).expect("independent basis");
    m.stacking = Some(seq.clone());
    m
}

/// Face-centered cubic packing in its conventional cubic cell of side 2√2.
pub fn fcc_conventional() -> PackingModel {
    let side = Q23::from_ints(0, 2, 0, 0);
    let basis = std::array::from_fn(|i| {
        let mut v = [Q23::zero(), Q23::zero(), Q23::zero()];
        v[i] = side.clone();
        Vec3(v)
    });
    let h = q(1, 2);
    let z = q(0, 1);
    let motif = [[&z, &z, &z], [&h, &h, &z], [&h, &z, &h], [&z, &h, &h]]
        .into_iter()
        .map(|f| Sphere {
            frac: f.map(|x| x.clone()),
            kind: Bead::L,
        })
        .collect();
    let mut m = PackingModel::new(basis, motif).expect("independent basis");
    m.stacking = Some("ABC".parse().expect("valid"));
    m
}

fn frac_key(f: &[BigRational; 3]) -> [BigRational; 3] {
    f.clone().map(|x| wrap(&x))
}

/// Adds a small sphere at each octahedral hole: the midpoint of two large
/// spheres at distance 2√2 that is tangent to exactly six large spheres.
pub fn fill_octahedral_holes(p: &PackingModel) -> Result<PackingModel> {
    if p.motif.iter().any(|s| s.kind != Bead::L) {
        return Err(Error::NotClosePacking(
            "motif already contains small spheres".into(),
        ));
    }
    let hoods = p.neighborhoods();
    p.check_disjoint(&hoods)
        .map_err(|e| Error::NotClosePacking(e.to_string()))?;
    for (i, hood) in hoods.iter().enumerate() {
        let c = p.tangent_neighbors(i, hood).len();
        if c != 12 {
            return Err(Error::NotClosePacking(format!(
                "sphere {i} has {c} contacts, not 12"
            )));
        }
    }
    let two = BigRational::from_integer(2.into());
    let mut holes: BTreeMap<[BigRational; 3], ()> = BTreeMap::new();
    for (i, hood) in hoods.iter().enumerate() {
        for n in hood.iter().filter(|n| n.dist2 == Q23::int(8)) {
            let other = p.position(n.index, &n.translate);
            let mid: [BigRational; 3] =
                std::array::from_fn(|k| (&p.motif[i].frac[k] + &other[k]) / &two);
            let key = frac_key(&mid);
            if holes.contains_key(&key) {
                continue;
            }
            let around = p.near(&mid);
            let touching = around
                .iter()
                .filter(|m| m.dist2 == contact2(Bead::L, Bead::S))
                .count();
            let clear = around.iter().all(|m| m.dist2 >= contact2(Bead::L, Bead::S));
            if touching == 6 && clear {
                holes.insert(key, ());
            }
        }
    }
    let mut motif = p.motif.clone();
    motif.extend(holes.into_keys().map(|frac| Sphere {
        frac,
        kind: Bead::S,
    }));
    let mut out = PackingModel::new(p.basis.clone(), motif)?;
    out.stacking = p.stacking.clone();
    out.check_disjoint(&out.neighborhoods())?;
    Ok(out)
}

/// Degree of every motif sphere in the contact graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactGraph {
    /// Tangent neighbors of each motif sphere, with translates.
    pub edges: Vec<Vec<(usize, Translate)>>,
    pub kinds: Vec<Bead>,
}

impl ContactGraph {
    pub fn degree(&self, i: usize) -> usize {
        self.edges[i].len()
    }

    /// Degrees of large and of small spheres, each as a sorted set.
    pub fn degree_census(&self) -> BTreeMap<(Bead, usize), usize> {
        let mut m = BTreeMap::new();
        for i in 0..self.edges.len() {
            *m.entry((self.kinds[i], self.degree(i))).or_insert(0) += 1;
        }
        m
    }

    /// Number of large and small neighbors of sphere `i`.
    pub fn neighbor_kinds(&self, i: usize) -> (usize, usize) {
        let l = self.edges[i]
            .iter()
            .filter(|(j, _)| self.kinds[*j] == Bead::L)
            .count();
        (l, self.edges[i].len() - l)
    }
}

pub fn contact_graph(p: &PackingModel) -> ContactGraph {
    let hoods = p.neighborhoods();
    let edges = (0..p.len())
        .map(|i| {
            p.tangent_neighbors(i, &hoods[i])
                .into_iter()
                .map(|n| (n.index, n.translate))
                .collect()
        })
        .collect();
    ContactGraph {
        edges,
        kinds: p.motif.iter().map(|s| s.kind).collect(),
    }
}

/// Greatest common divisor of integers, ignoring zeros.
pub(crate) fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> StackingSequence {
        s.parse().unwrap()
    }

    #[test]
    fn every_sphere_has_twelve_contacts() {
        for w in ["AB", "ABC", "ABAC", "ABCB", "ABCACB"] {
            let p = build_close_packing(&seq(w));
            let g = contact_graph(&p);
            assert!((0..p.len()).all(|i| g.degree(i) == 12), "{w}");
            p.check_disjoint(&p.neighborhoods()).unwrap();
        }
        let g = contact_graph(&fcc_conventional());
        assert!((0..4).all(|i| g.degree(i) == 12));
    }

    #[test]
    fn rock_salt_from_fcc() {
        let f = fill_octahedral_holes(&fcc_conventional()).unwrap();
        assert_eq!((f.count(Bead::L), f.count(Bead::S)), (4, 4));
        let g = contact_graph(&f);
        for i in 0..f.len() {
            match f.motif[i].kind {
                Bead::L => assert_eq!(g.neighbor_kinds(i), (12, 6)),
                Bead::S => assert_eq!(g.neighbor_kinds(i), (6, 0)),
            }
        }
        // the holes sit at the cube center and edge midpoints
        let smalls: Vec<String> = f
            .motif
            .iter()
            .filter(|s| s.kind == Bead::S)
            .map(|s| format!("{:?}", s.frac.clone().map(|x| x.to_string())))
            .collect();
        assert!(smalls.contains(&format!("{:?}", ["1/2", "1/2", "1/2"])));
    }

    #[test]
    fn one_small_per_large_in_any_stacking() {
        for w in ["AB", "ABC", "ABAC"] {
            let f = fill_octahedral_holes(&build_close_packing(&seq(w))).unwrap();
            assert_eq!(f.count(Bead::S), f.count(Bead::L), "{w}");
            let g = contact_graph(&f);
            for i in 0..f.len() {
                let expect = if f.motif[i].kind == Bead::L { 18 } else { 6 };
                assert_eq!(g.degree(i), expect, "{w} sphere {i}");
            }
        }
    }

    #[test]
    fn refuses_non_close_packing() {
        let p = fcc_conventional();
        let mut motif = p.motif.clone();
        motif.pop();
        let sparse = PackingModel::new(p.basis.clone(), motif).unwrap();
        assert!(matches!(
            fill_octahedral_holes(&sparse),
            Err(Error::NotClosePacking(_))
        ));
    }

    #[test]
    fn cell_volumes() {
        assert_eq!(
            fcc_conventional().cell_volume(),
            Q23::from_ints(0, 16, 0, 0)
        );
        // 4√2 per sphere in any close-packing
        assert_eq!(
            build_close_packing(&seq("ABAC")).cell_volume(),
            Q23::from_ints(0, 16, 0, 0)
        );
    }
}
