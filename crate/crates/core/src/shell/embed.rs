//! Exact embedding of complete shells in Q(√2, √3)³.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::AlgebraicReal;
use crate::geom::{Vec3, Q23};
use crate::necklace::Bead;

use super::complex::{ShellComplex, ShellStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ShapeClass {
    Cuboctahedron,
    TriangularOrthobicupola,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeClass::Cuboctahedron => "cuboctahedron",
            ShapeClass::TriangularOrthobicupola => "triangular_orthobicupola",
        })
    }
}

/// A shell with exact sphere centers; the central sphere sits at the origin.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedShell {
    pub complex: ShellComplex,
    pub radius: Q23,
    pub coordinates: Vec<Vec3>,
    pub shape_class: ShapeClass,
}

/// Six large neighbors coplanar with the center, consecutive ones tangent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ring {
    /// Vertex indices in cyclic order.
    pub vertices: Vec<usize>,
    pub normal: Vec3,
}

/// The radius as an element of Q(√2, √3), when it lies there.
pub fn radius_in_field(r: &AlgebraicReal) -> Option<Q23> {
    if let Some(q) = r.as_rational() {
        return Some(Q23::rational(q));
    }
    let p = r.minpoly();
    if p.degree() != Some(2) {
        return None;
    }
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = Q23::rational(&b * &b - BigRational::from_integer(4.into()) * &a * &c);
    let root = disc.sqrt()?;
    let two_a = BigRational::from_integer(2.into()) * &a;
    let inv = BigRational::from_integer(1.into()) / two_a;
    let (lo, hi) = r.isolating_interval();
    let (lo, hi) = (Q23::rational(lo.clone()), Q23::rational(hi.clone()));
    [root.clone(), -root]
        .into_iter()
        .map(|s| (&Q23::rational(-b.clone()) + &s).scale(&inv))
        .find(|x| lo <= *x && *x <= hi)
}

struct Geometry {
    r: Q23,
}

impl Geometry {
    fn radius(&self, b: Bead) -> Q23 {
        match b {
            Bead::L => Q23::one(),
            Bead::S => self.r.clone(),
        }
    }

    /// Squared center distance of tangent spheres.
    fn contact2(&self, a: Bead, b: Bead) -> Q23 {
        (&self.radius(a) + &self.radius(b)).square()
    }

    fn center2(&self, b: Bead) -> Q23 {
        self.contact2(Bead::L, b)
    }
}

/// Point at squared norm `d0` with prescribed dot products against `p` and
/// `q`, on the side of the plane `Opq` with sign `side` (±1).
fn fold(p: &Vec3, q: &Vec3, d0: &Q23, alpha: &Q23, beta: &Q23, side: i32) -> Option<Vec3> {
    let (pp, pq, qq) = (p.norm2(), p.dot(q), q.norm2());
    let det = &(&pp * &qq) - &(&pq * &pq);
    let lam = (&(alpha * &qq) - &(beta * &pq)).div(&det)?;
    let mu = (&(beta * &pp) - &(alpha * &pq)).div(&det)?;
    let base = &p.scale(&lam) + &q.scale(&mu);
    let n = p.cross(q);
    // |n|² = det
    let g2 = (d0 - &base.norm2()).div(&det)?;
    let g = g2.sqrt()?;
    let g = if side < 0 { -g } else { g };
    Some(&base + &n.scale(&g))
}

/// Dot product of two centers from their norms and mutual distance.
fn dot_from(d_a: &Q23, d_b: &Q23, d_ab: &Q23) -> Q23 {
    (&(d_a + d_b) - d_ab).scale(&BigRational::new(1.into(), 2.into()))
}

/// Places the first face and folds across edges; every fold that reaches an
/// already placed vertex must land on it exactly.
pub fn embed_shell(s: &ShellComplex, r: &AlgebraicReal) -> Result<EmbeddedShell> {
    if s.status() != ShellStatus::Complete || !s.is_sphere() {
        return Err(Error::DegenerateInput(
            "shell is not a complete triangulation".into(),
        ));
    }
    let r = radius_in_field(r)
        .ok_or_else(|| Error::DegenerateInput("radius outside Q(√2, √3)".into()))?;
    let geo = Geometry { r };
    let labels = s.labels();
    let faces = s.faces();
    let n = labels.len();
    let mut pos: Vec<Option<Vec3>> = vec![None; n];

    let first = faces
        .iter()
        .position(|f| f.iter().any(|&v| labels[v] == Bead::S))
        .unwrap_or(0);
    let f0 = {
        let mut f = faces[first];
        // a small vertex first, when there is one
        while labels[f[0]] != Bead::S && f.iter().any(|&v| labels[v] == Bead::S) {
            f.rotate_left(1);
        }
        f
    };
    let [a, b, c] = f0;
    let da = geo
        .center2(labels[a])
        .sqrt()
        .ok_or_else(|| fold_err("first vertex", &[a]))?;
    pos[a] = Some(Vec3::new(da.clone(), Q23::zero(), Q23::zero()));
    let ab = dot_from(
        &geo.center2(labels[a]),
        &geo.center2(labels[b]),
        &geo.contact2(labels[a], labels[b]),
    );
    let bx = ab.div(&da).expect("nonzero");
    let by = (&geo.center2(labels[b]) - &bx.square())
        .sqrt()
        .ok_or_else(|| fold_err("second vertex", &[a, b]))?;
    pos[b] = Some(Vec3::new(bx, by, Q23::zero()));
    let place = |pos: &[Option<Vec3>], p: usize, q: usize, x: usize, side: i32| -> Option<Vec3> {
        let (pp, qq) = (pos[p].as_ref()?, pos[q].as_ref()?);
        let d0 = geo.center2(labels[x]);
        let alpha = dot_from(
            &d0,
            &geo.center2(labels[p]),
            &geo.contact2(labels[x], labels[p]),
        );
        let beta = dot_from(
            &d0,
            &geo.center2(labels[q]),
            &geo.contact2(labels[x], labels[q]),
        );
        fold(pp, qq, &d0, &alpha, &beta, side)
    };
    pos[c] = Some(place(&pos, a, b, c, 1).ok_or_else(|| fold_err("third vertex", &[a, b, c]))?);

    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (x, y) = (f[k], f[(k + 1) % 3]);
            by_edge.entry((x.min(y), x.max(y))).or_default().push(i);
        }
    }
    let mut done = vec![false; faces.len()];
    done[first] = true;
    let mut stack = vec![first];
    while let Some(i) = stack.pop() {
        let f = faces[i];
        for k in 0..3 {
            let (p, q, w) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            for &j in &by_edge[&(p.min(q), p.max(q))] {
                if done[j] {
                    continue;
                }
                let x = *faces[j]
                    .iter()
                    .find(|&&v| v != p && v != q)
                    .expect("triangle");
                let (pp, qq, ww) = (
                    pos[p].clone().unwrap(),
                    pos[q].clone().unwrap(),
                    pos[w].clone().unwrap(),
                );
                let side = -Vec3::triple(&ww, &pp, &qq).sign();
                let cand =
                    place(&pos, p, q, x, side).ok_or_else(|| fold_err("fold", &[w, p, q, x]))?;
                match &pos[x] {
                    None => pos[x] = Some(cand),
                    Some(old) if *old == cand => {}
                    Some(_) => return Err(fold_err("closure", &[w, p, q, x])),
                }
                done[j] = true;
                stack.push(j);
            }
        }
    }
    let coordinates: Vec<Vec3> = pos
        .into_iter()
        .map(|p| p.expect("connected complex"))
        .collect();
    check_distances(s, &geo, &coordinates)?;
    let shape_class = classify_points(labels, &coordinates)
        .ok_or_else(|| Error::FoldInconsistency("embedding matches neither shell shape".into()))?;
    Ok(EmbeddedShell {
        complex: s.clone(),
        radius: geo.r,
        coordinates,
        shape_class,
    })
}

fn fold_err(stage: &str, cycle: &[usize]) -> Error {
    Error::FoldInconsistency(format!("{stage} around vertices {cycle:?}"))
}

fn check_distances(s: &ShellComplex, geo: &Geometry, xs: &[Vec3]) -> Result<()> {
    let labels = s.labels();
    for (v, x) in xs.iter().enumerate() {
        if x.norm2() != geo.center2(labels[v]) {
            return Err(fold_err("distance to center", &[v]));
        }
    }
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            let d = xs[a].dist2(&xs[b]);
            let c = geo.contact2(labels[a], labels[b]);
            let ok = if s.is_edge(a, b) { d == c } else { d >= c };
            if !ok {
                return Err(fold_err("pair distance", &[a, b]));
            }
        }
    }
    Ok(())
}

fn large_distance_multiset(labels: &[Bead], xs: &[Vec3]) -> Vec<Q23> {
    let large: Vec<&Vec3> = xs
        .iter()
        .zip(labels)
        .filter(|(_, &b)| b == Bead::L)
        .map(|(x, _)| x)
        .collect();
    let mut d = Vec::new();
    for i in 0..large.len() {
        for j in i + 1..large.len() {
            d.push(large[i].dist2(large[j]));
        }
    }
    d.sort();
    d
}

/// Twelve unit-sphere centers of each reference polyhedron at radius 2:
/// a hexagon in the plane z = 0 plus triangles above and below.
pub fn reference_polyhedron(class: ShapeClass) -> Vec<Vec3> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let s3 = Q23::sqrt3();
    let h = Q23::sqrt6().scale(&q(2, 3));
    let mut pts = Vec::new();
    for (x, y) in [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)] {
        pts.push(Vec3::new(Q23::int(x), s3.scale(&q(y, 1)), Q23::zero()));
    }
    let up = [(1, 1), (-1, 1), (0, -2)];
    for (x, y) in up {
        pts.push(Vec3::new(Q23::int(x), s3.scale(&q(y, 3)), h.clone()));
    }
    // the lower triangle is the mirror image or the half-turn of the upper one
    let sgn = if class == ShapeClass::Cuboctahedron {
        -1
    } else {
        1
    };
    for (x, y) in up {
        pts.push(Vec3::new(
            Q23::int(sgn * x),
            s3.scale(&q(sgn * y, 3)),
            -h.clone(),
        ));
    }
    pts
}

fn classify_points(labels: &[Bead], xs: &[Vec3]) -> Option<ShapeClass> {
    let mine = large_distance_multiset(labels, xs);
    [
        ShapeClass::Cuboctahedron,
        ShapeClass::TriangularOrthobicupola,
    ]
    .into_iter()
    .find(|&c| {
        let refs = reference_polyhedron(c);
        mine == large_distance_multiset(&vec![Bead::L; refs.len()], &refs)
    })
}

/// All rings of six coplanar large neighbors around the center.
pub fn shell_ring_property(s: &EmbeddedShell) -> Vec<Ring> {
    let labels = s.complex.labels();
    let xs = &s.coordinates;
    let large: Vec<usize> = (0..xs.len()).filter(|&v| labels[v] == Bead::L).collect();
    let tangent = |a: usize, b: usize| xs[a].dist2(&xs[b]) == Q23::int(4);
    let mut seen = BTreeSet::new();
    let mut rings = Vec::new();
    for &a in &large {
        for &b in &large {
            if a >= b || !tangent(a, b) {
                continue;
            }
            let normal = xs[a].cross(&xs[b]);
            let plane: Vec<usize> = large
                .iter()
                .copied()
                .filter(|&v| xs[v].dot(&normal).is_zero())
                .collect();
            if plane.len() != 6 || !seen.insert(plane.clone()) {
                continue;
            }
            if let Some(cycle) = hexagon(&plane, &tangent) {
                rings.push(Ring {
                    vertices: cycle,
                    normal,
                });
            }
        }
    }
    rings
}

/// Orders six vertices into a cycle of tangent neighbors, if they form one.
fn hexagon(vs: &[usize], tangent: &impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    if vs
        .iter()
        .any(|&v| vs.iter().filter(|&&w| w != v && tangent(v, w)).count() != 2)
    {
        return None;
    }
    let mut cycle = vec![vs[0]];
    while cycle.len() < vs.len() {
        let last = *cycle.last().unwrap();
        let next = vs
            .iter()
            .copied()
            .find(|&w| w != last && tangent(last, w) && !cycle.contains(&w))?;
        cycle.push(next);
    }
    tangent(cycle[0], *cycle.last().unwrap()).then_some(cycle)
}

/// Largest number of rings through a single large neighbor.
pub fn rings_per_vertex(s: &EmbeddedShell, rings: &[Ring]) -> usize {
    (0..s.coordinates.len())
        .map(|v| rings.iter().filter(|r| r.vertices.contains(&v)).count())
        .max()
        .unwrap_or(0)
}

impl EmbeddedShell {
    /// Cosine of the angle at the center between two neighbors, squared
    /// with its sign kept: `sign(c)·c²`.
    pub fn central_cos_signed_square(&self, a: usize, b: usize) -> Q23 {
        let (x, y) = (&self.coordinates[a], &self.coordinates[b]);
        let d = x.dot(y);
        let c2 = d
            .square()
            .div(&(&x.norm2() * &y.norm2()))
            .expect("nonzero centers");
        if d.sign() < 0 {
            -c2
        } else {
            c2
        }
    }

    pub fn approx_coordinates(&self) -> Vec<[f64; 3]> {
        self.coordinates.iter().map(Vec3::to_f64).collect()
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64()
    }

    pub fn sphere_radius(&self, v: usize) -> Q23 {
        match self.complex.labels()[v] {
            Bead::L => Q23::one(),
            Bead::S => self.radius.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RationalPoly;
    use crate::shell::complex::{
        complete_shells, shell_word_sets, DEFAULT_NODE_BUDGET, KISSING_BOUND,
    };

    fn r_star() -> AlgebraicReal {
        let p = RationalPoly::from_ints(&[-1, 2, 1]);
        AlgebraicReal::roots_in(
            &p,
            &BigRational::from_integer(0.into()),
            &BigRational::from_integer(1.into()),
        )[0]
        .clone()
    }

    fn embedded() -> Vec<EmbeddedShell> {
        let (l, s) = shell_word_sets();
        complete_shells(&l, &s, KISSING_BOUND, DEFAULT_NODE_BUDGET)
            .unwrap()
            .iter()
            .map(|x| embed_shell(x, &r_star()).unwrap())
            .collect()
    }

    #[test]
    fn radius_is_sqrt2_minus_1() {
        assert_eq!(
            radius_in_field(&r_star()),
            Some(Q23::from_ints(-1, 1, 0, 0))
        );
        let r3 = AlgebraicReal::roots_in(
            &RationalPoly::from_ints(&[1, -6, 1]),
            &BigRational::from_integer(0.into()),
            &BigRational::from_integer(1.into()),
        )[0]
        .clone();
        assert_eq!(radius_in_field(&r3), Some(Q23::from_ints(3, -2, 0, 0)));
    }

    #[test]
    fn reference_polyhedra_are_unit_contact_sets() {
        for c in [
            ShapeClass::Cuboctahedron,
            ShapeClass::TriangularOrthobicupola,
        ] {
            let pts = reference_polyhedron(c);
            for p in &pts {
                assert_eq!(p.norm2(), Q23::int(4));
            }
            let d = large_distance_multiset(&[Bead::L; 12], &pts);
            assert!(d.iter().all(|x| *x >= Q23::int(4)));
            assert_eq!(d.iter().filter(|x| **x == Q23::int(4)).count(), 24);
        }
    }

    #[test]
    fn two_classes() {
        let e = embedded();
        let classes: BTreeSet<ShapeClass> = e.iter().map(|x| x.shape_class).collect();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn cuboctahedral_shell_is_the_permutation_polytope() {
        let e = embedded();
        let cub = e
            .iter()
            .find(|x| x.shape_class == ShapeClass::Cuboctahedron)
            .unwrap();
        let s2 = Q23::sqrt2();
        let mut expected_large = BTreeSet::new();
        let mut expected_small = BTreeSet::new();
        for i in 0..3 {
            for sa in [1, -1] {
                let mut p = [Q23::zero(), Q23::zero(), Q23::zero()];
                p[i] = s2.scale(&BigRational::from_integer(sa.into()));
                expected_small.insert(format!("{}", Vec3(p.clone())));
                for sb in [1, -1] {
                    let mut q = p.clone();
                    q[(i + 1) % 3] = s2.scale(&BigRational::from_integer(sb.into()));
                    expected_large.insert(format!("{}", Vec3(q)));
                }
            }
        }
        let labels = cub.complex.labels();
        let got_large: BTreeSet<String> = (0..18)
            .filter(|&v| labels[v] == Bead::L)
            .map(|v| cub.coordinates[v].to_string())
            .collect();
        let got_small: BTreeSet<String> = (0..18)
            .filter(|&v| labels[v] == Bead::S)
            .map(|v| cub.coordinates[v].to_string())
            .collect();
        assert_eq!(got_large, expected_large);
        assert_eq!(got_small, expected_small);
    }

    #[test]
    fn central_angles() {
        for e in embedded() {
            for (a, b) in e.complex.edges() {
                let c = e.central_cos_signed_square(a, b);
                let labels = e.complex.labels();
                match (labels[a], labels[b]) {
                    // cos 60° = 1/2, cos 45° = 1/√2
                    (Bead::L, Bead::L) => {
                        assert_eq!(c, Q23::rational(BigRational::new(1.into(), 4.into())))
                    }
                    _ => assert_eq!(c, Q23::rational(BigRational::new(1.into(), 2.into()))),
                }
            }
        }
    }

    #[test]
    fn orthobicupola_smalls_form_a_prism() {
        let e = embedded();
        let o = e
            .iter()
            .find(|x| x.shape_class == ShapeClass::TriangularOrthobicupola)
            .unwrap();
        let small: Vec<&Vec3> = (0..18)
            .filter(|&v| o.complex.labels()[v] == Bead::S)
            .map(|v| &o.coordinates[v])
            .collect();
        // a triangular prism: each vertex has two equal triangle edges and one
        // shorter or longer lateral edge, all other distances larger
        let mut d: Vec<Q23> = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                d.push(small[i].dist2(small[j]));
            }
        }
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn ring_counts() {
        for e in embedded() {
            let rings = shell_ring_property(&e);
            for ring in &rings {
                for v in &ring.vertices {
                    assert!(e.coordinates[*v].dot(&ring.normal).is_zero());
                }
            }
            match e.shape_class {
                ShapeClass::Cuboctahedron => {
                    assert_eq!(rings.len(), 4);
                    assert_eq!(rings_per_vertex(&e, &rings), 2);
                }
                ShapeClass::TriangularOrthobicupola => assert_eq!(rings.len(), 1),
            }
        }
    }

    #[test]
    fn closure_failure_is_reported() {
        // octahedron of large spheres around a large center cannot close
        let mut faces = Vec::new();
        for i in 0..4 {
            faces.push([0, 1 + i, 1 + (i + 1) % 4]);
            faces.push([5, 1 + i, 1 + (i + 1) % 4]);
        }
        let s = ShellComplex::new(vec![Bead::L; 6], faces);
        assert!(matches!(
            embed_shell(&s, &r_star()),
            Err(Error::FoldInconsistency(_))
        ));
    }
}
