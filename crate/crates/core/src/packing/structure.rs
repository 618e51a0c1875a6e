//! Shell classes of large spheres and recovery of the stacking sequence.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{AlgebraicReal, RationalPoly};
use crate::geom::{Vec3, Q23};
use crate::necklace::Bead;
use crate::shell::{
    complete_shells, embed_shell, shell_word_sets, EmbeddedShell, ShapeClass, DEFAULT_NODE_BUDGET,
    KISSING_BOUND,
};

use super::model::{gcd_all, Neighbor, PackingModel, Translate};
use super::stacking::{Layer, StackingSequence};

/// Labeled points around the origin with their Gram matrix.
struct PointSet {
    labels: Vec<Bead>,
    dots: Vec<Vec<Q23>>,
}

impl PointSet {
    fn new(labels: Vec<Bead>, pts: &[Vec3]) -> Self {
        let dots = pts
            .iter()
            .map(|a| pts.iter().map(|b| a.dot(b)).collect())
            .collect();
        PointSet { labels, dots }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Three indices of linearly independent points (a face of the shell).
fn frame(s: &EmbeddedShell) -> [usize; 3] {
    s.complex.faces()[0]
}

/// Whether an orthogonal map carries `reference` onto `target`, labels
/// included. Images of a spanning frame fix the map; every other point is
/// then located by its dot products with the frame.
fn isometric(reference: &PointSet, frame: [usize; 3], target: &PointSet) -> bool {
    let n = reference.len();
    if target.len() != n {
        return false;
    }
    let lc = |set: &PointSet, b: Bead| set.labels.iter().filter(|&&x| x == b).count();
    if lc(reference, Bead::L) != lc(target, Bead::L) {
        return false;
    }
    let [a, b, c] = frame;
    let fits = |x: usize, r: usize| target.labels[x] == reference.labels[r];
    for x in (0..n).filter(|&x| fits(x, a)) {
        for y in
            (0..n).filter(|&y| y != x && fits(y, b) && target.dots[x][y] == reference.dots[a][b])
        {
            for z in (0..n).filter(|&z| {
                z != x
                    && z != y
                    && fits(z, c)
                    && target.dots[x][z] == reference.dots[a][c]
                    && target.dots[y][z] == reference.dots[b][c]
            }) {
                let mut image = vec![usize::MAX; n];
                let mut used = vec![false; n];
                let mut ok = true;
                for p in 0..n {
                    let found = (0..n).find(|&q| {
                        !used[q]
                            && fits(q, p)
                            && target.dots[q][q] == reference.dots[p][p]
                            && target.dots[q][x] == reference.dots[p][a]
                            && target.dots[q][y] == reference.dots[p][b]
                            && target.dots[q][z] == reference.dots[p][c]
                    });
                    match found {
                        Some(q) => {
                            image[p] = q;
                            used[q] = true;
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok
                    && (0..n).all(|p| {
                        (0..n).all(|q| target.dots[image[p]][image[q]] == reference.dots[p][q])
                    })
                {
                    return true;
                }
            }
        }
    }
    false
}

/// The two shells at r = √2 − 1, computed once.
pub fn reference_shells() -> &'static [EmbeddedShell] {
    static SHELLS: OnceLock<Vec<EmbeddedShell>> = OnceLock::new();
    SHELLS.get_or_init(|| {
        let (large, small) = shell_word_sets();
        let r = AlgebraicReal::roots_in(
            &RationalPoly::from_ints(&[-1, 2, 1]),
            &BigRational::zero(),
            &BigRational::from_integer(1.into()),
        )[0]
        .clone();
        complete_shells(&large, &small, KISSING_BOUND, DEFAULT_NODE_BUDGET)
            .expect("shell search at default budget")
            .iter()
            .map(|s| embed_shell(s, &r).expect("reference shells embed"))
            .collect()
    })
}

fn relative(p: &PackingModel, i: usize, n: &Neighbor) -> Vec3 {
    let d: [BigRational; 3] = std::array::from_fn(|k| {
        &p.motif[n.index].frac[k] + BigRational::from_integer(n.translate[k].into())
            - &p.motif[i].frac[k]
    });
    p.cartesian(&d)
}

/// Shell class of every large motif sphere, by exact isometry with the two
/// embedded reference shells.
pub fn classify_shells(p: &PackingModel) -> Result<BTreeMap<usize, ShapeClass>> {
    use rayon::prelude::*;
    let refs: Vec<(PointSet, [usize; 3], ShapeClass)> = reference_shells()
        .iter()
        .map(|s| {
            (
                PointSet::new(s.complex.labels().to_vec(), &s.coordinates),
                frame(s),
                s.shape_class,
            )
        })
        .collect();
    let hoods = p.neighborhoods();
    let large: Vec<usize> = (0..p.len())
        .filter(|&i| p.motif[i].kind == Bead::L)
        .collect();
    large
        .par_iter()
        .map(|&i| {
            let tangent = p.tangent_neighbors(i, &hoods[i]);
            let pts: Vec<Vec3> = tangent.iter().map(|n| relative(p, i, n)).collect();
            let labels = tangent.iter().map(|n| p.motif[n.index].kind).collect();
            let target = PointSet::new(labels, &pts);
            refs.iter()
                .find(|(r, f, _)| isometric(r, *f, &target))
                .map(|(_, _, c)| (i, *c))
                .ok_or(Error::ShellUnmatched { index: i })
        })
        .collect()
}

/// Normals of the planes through `center` holding six coplanar large
/// neighbors with consecutive ones tangent.
fn ring_normals(vs: &[Vec3]) -> Vec<Vec3> {
    let mut out: Vec<Vec3> = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            if vs[a].dist2(&vs[b]) != Q23::int(4) {
                continue;
            }
            let n = vs[a].cross(&vs[b]);
            let plane: Vec<usize> = (0..vs.len()).filter(|&v| vs[v].dot(&n).is_zero()).collect();
            let hex = plane.len() == 6
                && plane.iter().all(|&v| {
                    plane
                        .iter()
                        .filter(|&&w| vs[v].dist2(&vs[w]) == Q23::int(4))
                        .count()
                        == 2
                });
            if hex && !out.iter().any(|m| m.cross(&n) == Vec3::zero()) {
                out.push(n);
            }
        }
    }
    out
}

fn parallel(a: &Vec3, b: &Vec3) -> bool {
    a.cross(b) == Vec3::zero()
}

/// Coefficients of the in-plane vector `d` on the basis `u, v`.
fn plane_coords(u: &Vec3, v: &Vec3, d: &Vec3) -> Option<(BigRational, BigRational)> {
    let (uu, uv, vv) = (u.norm2(), u.dot(v), v.norm2());
    let (du, dv) = (d.dot(u), d.dot(v));
    let det = &(&uu * &vv) - &(&uv * &uv);
    let a = (&(&du * &vv) - &(&dv * &uv)).div(&det)?;
    let b = (&(&dv * &uu) - &(&du * &uv)).div(&det)?;
    let recon = &u.scale(&a) + &v.scale(&b);
    (recon == *d).then_some(())?;
    Some((a.as_rational()?, b.as_rational()?))
}

/// Groups the large spheres into triangular-grid layers, assigns A/B/C
/// positions and returns the periodic sequence in canonical form.
pub fn recover_stacking(p: &PackingModel) -> Result<StackingSequence> {
    let fail = |m: &str| Error::LayerStructureNotFound(m.to_string());
    let hoods = p.neighborhoods();
    let large: Vec<usize> = (0..p.len())
        .filter(|&i| p.motif[i].kind == Bead::L)
        .collect();
    if large.is_empty() {
        return Err(fail("no large spheres"));
    }
    let shells: BTreeMap<usize, Vec<(Neighbor, Vec3)>> = large
        .iter()
        .map(|&i| {
            let nb: Vec<(Neighbor, Vec3)> = p
                .tangent_neighbors(i, &hoods[i])
                .into_iter()
                .filter(|n| p.motif[n.index].kind == Bead::L)
                .map(|n| {
                    let v = relative(p, i, &n);
                    (n, v)
                })
                .collect();
            (i, nb)
        })
        .collect();
    // a layer plane must hold a ring around every large sphere
    let mut normals = ring_normals(
        &shells[&large[0]]
            .iter()
            .map(|x| x.1.clone())
            .collect::<Vec<_>>(),
    );
    for i in &large[1..] {
        let here = ring_normals(&shells[i].iter().map(|x| x.1.clone()).collect::<Vec<_>>());
        normals.retain(|n| here.iter().any(|m| parallel(n, m)));
    }
    let n = normals
        .into_iter()
        .next()
        .ok_or_else(|| fail("no ring plane common to all large spheres"))?;

    let i0 = large[0];
    let ring: Vec<&Vec3> = shells[&i0]
        .iter()
        .map(|x| &x.1)
        .filter(|v| v.dot(&n).is_zero())
        .collect();
    let u = ring[0].clone();
    let v = ring
        .iter()
        .copied()
        .find(|w| u.dist2(w) == Q23::int(4))
        .ok_or_else(|| fail("ring is not a hexagon"))?
        .clone();
    let n2 = n.norm2();

    let up_from = |at: &(usize, Translate)| {
        shells[&at.0]
            .iter()
            .filter(|(_, d)| d.dot(&n).sign() > 0)
            .min_by(|a, b| (a.0.index, a.0.translate).cmp(&(b.0.index, b.0.translate)))
            .ok_or_else(|| fail("no sphere above a layer"))
    };
    let spacing = up_from(&(i0, [0, 0, 0]))?.1.dot(&n);
    // a lattice vector climbs a whole number of layers; translating by it
    // shifts the grid positions cyclically, so the sequence has period
    // dividing three times the gcd of the climbs
    let mut climbs = Vec::new();
    for b in &p.basis {
        let m = b
            .dot(&n)
            .div(&spacing)
            .and_then(|x| x.as_rational())
            .ok_or_else(|| fail("lattice not layered"))?;
        if !m.is_integer() {
            return Err(fail("lattice vector between layers"));
        }
        climbs.push(m.to_integer());
    }
    let bound = 3 * gcd_all(&climbs)
        .abs()
        .to_usize()
        .filter(|&g| g > 0)
        .ok_or_else(|| fail("flat lattice"))?;

    // walk upward: each layer has three tangent spheres in the next one
    let mut cur: (usize, Translate) = (i0, [0, 0, 0]);
    let mut offset = Vec3::zero();
    let mut classes: Vec<usize> = vec![0];
    for _ in 0..2 * bound {
        let up = up_from(&cur)?;
        if up.1.dot(&n) != spacing {
            return Err(fail("layers are not equally spaced"));
        }
        offset = &offset + &up.1;
        let t = [0, 1, 2].map(|k| cur.1[k] + up.0.translate[k]);
        cur = (up.0.index, t);
        let h = offset.dot(&n);
        let inplane = &offset - &n.scale(&h.div(&n2).expect("nonzero normal"));
        let (a, b) = plane_coords(&u, &v, &inplane)
            .ok_or_else(|| fail("layer offset off the triangular grid"))?;
        let a3 = &a * BigRational::from_integer(3.into());
        if !(&a - &b).is_integer() || !a3.is_integer() {
            return Err(fail("layer offset is not a grid position"));
        }
        classes.push(a3.to_integer().mod_floor3());
    }
    let period = (2..=bound)
        .find(|&q| bound % q == 0 && (q..classes.len()).all(|k| classes[k] == classes[k - q]))
        .ok_or_else(|| fail("layer sequence is not periodic"))?;
    let letters = classes[..period]
        .iter()
        .map(|&c| Layer::from_index(c))
        .collect();
    Ok(StackingSequence::new(letters)?.canonical())
}

trait Mod3 {
    fn mod_floor3(&self) -> usize;
}

impl Mod3 for BigInt {
    fn mod_floor3(&self) -> usize {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(3)).to_usize().expect("small")
    }
}
