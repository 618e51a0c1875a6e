//! Tetrahedral tilings, densities and solid angles.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    AlgebraicReal, DyadicInterval, NumberField, NumberFieldElem, OrderedScalar, RatFunc,
    RationalPoly, Ring,
};
use crate::geom::Q23;
use crate::necklace::Bead;

use super::model::{radius_of, PackingModel, Translate};

type Vertex = (usize, Translate);

/// Four mutually tangent spheres, normalized modulo the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tetrahedron {
    pub vertices: [Vertex; 4],
}

fn shift(v: &Vertex, by: &Translate) -> Vertex {
    (v.0, [v.1[0] - by[0], v.1[1] - by[1], v.1[2] - by[2]])
}

/// Least sorted representative over the translations that bring one of the
/// vertices into the reference cell.
fn normalize<const N: usize>(vs: &[Vertex; N]) -> [Vertex; N] {
    let mut best: Option<[Vertex; N]> = None;
    for v in vs {
        let mut c: [Vertex; N] = (*vs).map(|x| shift(&x, &v.1));
        c.sort();
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    best.expect("nonempty")
}

fn det3(m: [[BigRational; 3]; 3]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn orient(p: &PackingModel, a: &Vertex, b: &Vertex, c: &Vertex, d: &Vertex) -> BigRational {
    let pa = p.position(a.0, &a.1);
    let rows = [b, c, d].map(|x| {
        let px = p.position(x.0, &x.1);
        std::array::from_fn(|k| &px[k] - &pa[k])
    });
    det3(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum CompactVerdict {
    Compact,
    NotCompact(String),
}

impl fmt::Display for CompactVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactVerdict::Compact => f.write_str("compact"),
            CompactVerdict::NotCompact(r) => write!(f, "not_compact ({r})"),
        }
    }
}

/// Outcome of the tiling check with its exact bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct CompactReport {
    pub verdict: CompactVerdict,
    pub tetrahedra: Vec<Tetrahedron>,
    /// Tetrahedra per cell by number of small vertices, e.g. `LLLL`, `SLLL`.
    pub census: BTreeMap<String, usize>,
    pub cell_volume: Q23,
    pub tetra_volume: Q23,
    pub uncovered_volume: Q23,
    /// Faces not shared by exactly two tetrahedra on opposite sides.
    pub unmatched_faces: usize,
}

impl CompactReport {
    pub fn is_compact(&self) -> bool {
        self.verdict == CompactVerdict::Compact
    }
}

fn census_key(p: &PackingModel, t: &Tetrahedron) -> String {
    let s = t
        .vertices
        .iter()
        .filter(|v| p.motif[v.0].kind == Bead::S)
        .count();
    "S".repeat(s) + &"L".repeat(4 - s)
}

/// Certifies a face-to-face tiling by the tetrahedra of mutually tangent
/// quadruples: every triangle is shared by exactly two of them from opposite
/// sides, and their volumes add up to the cell volume. Local pairing makes
/// the covering multiplicity constant and the volume makes it one.
pub fn verify_compact(p: &PackingModel) -> CompactReport {
    let hoods = p.neighborhoods();
    let tangent: Vec<Vec<Vertex>> = (0..p.len())
        .map(|i| {
            p.tangent_neighbors(i, &hoods[i])
                .into_iter()
                .map(|n| (n.index, n.translate))
                .collect()
        })
        .collect();
    let lookup: Vec<HashSet<Vertex>> = tangent
        .iter()
        .map(|t| t.iter().cloned().collect())
        .collect();
    let touches = |a: &Vertex, b: &Vertex| lookup[a.0].contains(&shift(b, &a.1));

    let mut tets: HashSet<[Vertex; 4]> = HashSet::new();
    for i in 0..p.len() {
        let o: Vertex = (i, [0, 0, 0]);
        let nb = &tangent[i];
        for x in 0..nb.len() {
            for y in x + 1..nb.len() {
                if !touches(&nb[x], &nb[y]) {
                    continue;
                }
                for z in y + 1..nb.len() {
                    if touches(&nb[x], &nb[z]) && touches(&nb[y], &nb[z]) {
                        tets.insert(normalize(&[
                            o,
                            nb[x],
                            nb[y],
                            nb[z],
                        ]));
                    }
                }
            }
        }
    }
    let mut tetrahedra: Vec<Tetrahedron> = tets
        .into_iter()
        .map(|vertices| Tetrahedron { vertices })
        .collect();
    tetrahedra.sort();

    let mut frac_total = BigRational::zero();
    let mut faces: HashMap<[Vertex; 3], Vec<i32>> = HashMap::new();
    for t in &tetrahedra {
        let v = &t.vertices;
        frac_total +=
            orient(p, &v[0], &v[1], &v[2], &v[3]).abs() / BigRational::from_integer(6.into());
        for skip in 0..4 {
            let face: Vec<Vertex> = (0..4)
                .filter(|&k| k != skip)
                .map(|k| v[k])
                .collect();
            let face = [face[0], face[1], face[2]];
            let key = normalize(&face);
            // the same translation carries the opposite vertex along
            let by = {
                let mut best = None;
                for f in &face {
                    let mut c = face.map(|x| shift(&x, &f.1));
                    c.sort();
                    if c == key {
                        best = Some(f.1);
                        break;
                    }
                }
                best.expect("key comes from a shift")
            };
            let apex = shift(&v[skip], &by);
            let side = orient(p, &key[0], &key[1], &key[2], &apex);
            faces
                .entry(key)
                .or_default()
                .push(if side.is_positive() { 1 } else { -1 });
        }
    }
    let unmatched_faces = faces
        .values()
        .filter(|s| !(s.len() == 2 && s[0] + s[1] == 0))
        .count();

    let cell_volume = p.cell_volume();
    let tetra_volume = cell_volume.scale(&frac_total);
    let uncovered_volume = &cell_volume - &tetra_volume;
    let verdict = if tetrahedra.is_empty() {
        CompactVerdict::NotCompact("no tetrahedra of mutually tangent spheres".into())
    } else if unmatched_faces > 0 {
        CompactVerdict::NotCompact(format!(
            "{unmatched_faces} triangles not shared face-to-face; uncovered volume {uncovered_volume}"
        ))
    } else if !frac_total.is_one() {
        CompactVerdict::NotCompact(format!("tetrahedra cover {frac_total} of the cell"))
    } else {
        CompactVerdict::Compact
    };
    let mut census = BTreeMap::new();
    for t in &tetrahedra {
        *census.entry(census_key(p, t)).or_insert(0) += 1;
    }
    CompactReport {
        verdict,
        tetrahedra,
        census,
        cell_volume,
        tetra_volume,
        uncovered_volume,
        unmatched_faces,
    }
}

/// Exact density as a multiple of π, with an enclosure.
#[derive(Clone, Debug, Serialize)]
pub struct PackingMetrics {
    /// Density divided by π.
    pub density_over_pi: Q23,
    pub density_exact: String,
    /// Enclosure of the density with endpoints rounded outward to 15 decimals.
    pub density_interval: [String; 2],
    pub large_per_cell: usize,
    pub small_per_cell: usize,
}

pub fn density(p: &PackingModel, prec: u32) -> PackingMetrics {
    let mut vol = Q23::zero();
    for s in &p.motif {
        let r = radius_of(s.kind);
        vol = &vol + &(&r.square() * &r);
    }
    let q = vol
        .scale(&BigRational::new(4.into(), 3.into()))
        .div(&p.cell_volume())
        .expect("nonzero cell");
    let enc = q.enclose(prec).mul(&DyadicInterval::pi(prec + 8));
    let (lo, hi) = enc.to_decimal(15);
    PackingMetrics {
        density_exact: format!("({q})·π"),
        density_interval: [lo, hi],
        density_over_pi: q,
        large_per_cell: p.count(Bead::L),
        small_per_cell: p.count(Bead::S),
    }
}

/// Solid angle `3A − π` of a spherical equilateral triangle whose dihedral
/// angles `A` have the exact cosine `cos_dihedral`.
#[derive(Clone, Debug)]
pub struct SolidAngle {
    pub cos_dihedral: NumberFieldElem,
}

impl SolidAngle {
    /// The angle as a rational multiple of π, when it is one. By Niven's
    /// theorem acos of a rational is a rational multiple of π only for
    /// cosines 0, ±1/2, ±1.
    pub fn pi_fraction(&self) -> Option<BigRational> {
        let c = self.cos_dihedral.as_rational()?;
        let table = [
            (0, 1, 1, 2),
            (1, 2, 1, 3),
            (-1, 2, 2, 3),
            (1, 1, 0, 1),
            (-1, 1, 1, 1),
        ];
        table
            .iter()
            .find(|(n, d, _, _)| c == BigRational::new((*n).into(), (*d).into()))
            .map(|&(_, _, an, ad)| {
                BigRational::new((3 * an).into(), ad.into()) - BigRational::one()
            })
    }

    pub fn enclosure(&self, prec: u32) -> Result<DyadicInterval> {
        let c = self.cos_dihedral.enclose(prec + 16);
        let a = c.acos().ok_or_else(|| Error::PrecisionExhausted {
            stage: "solid angle".into(),
            bits: prec,
        })?;
        Ok(a.mul_int(3).sub(&DyadicInterval::pi(prec + 16)))
    }

    /// `4π / Ω` is certified not to be an integer.
    pub fn certified_not_dividing_sphere(&self, max_bits: u32) -> Result<bool> {
        if let Some(f) = self.pi_fraction() {
            let ratio = BigRational::from_integer(4.into()) / f;
            return Ok(!ratio.is_integer());
        }
        let mut bits = 64;
        while bits <= max_bits {
            let om = self.enclosure(bits)?;
            if let Some(ratio) = DyadicInterval::pi(bits + 16).mul_int(4).div(&om) {
                if !ratio.contains_integer() {
                    return Ok(true);
                }
            }
            bits *= 2;
        }
        Err(Error::PrecisionExhausted {
            stage: "solid angle divisibility".into(),
            bits: max_bits,
        })
    }

    /// `4π / Ω` as an interval.
    pub fn sphere_ratio(&self, prec: u32) -> Result<DyadicInterval> {
        let om = self.enclosure(prec)?;
        DyadicInterval::pi(prec + 16)
            .mul_int(4)
            .div(&om)
            .ok_or_else(|| Error::PrecisionExhausted {
                stage: "solid angle ratio".into(),
                bits: prec,
            })
    }
}

/// Solid angle at the apex of a tetrahedron whose apex is the center of a
/// sphere of radius `r` and whose base joins three mutually tangent unit
/// spheres it touches. With apex edges `1 + r` the face angle θ at the apex
/// has `cos θ = 1 − 2/(1 + r)²` and the dihedral angle `A` along the apex
/// edges has `cos A = cos θ / (1 + cos θ) = (r² + 2r − 1) / (2r(r + 2))`.
pub fn solid_angle_at_small(r: &AlgebraicReal) -> Result<SolidAngle> {
    let num = RationalPoly::from_ints(&[-1, 2, 1]);
    let den = RationalPoly::from_ints(&[0, 4, 2]);
    let field = NumberField::new(r.clone());
    let den_val = NumberFieldElem::new(&field, &den);
    if den_val.sign() == 0 {
        return Err(Error::DegenerateTetrahedron(
            "apex radius makes the face angles vanish".into(),
        ));
    }
    let cos = NumberFieldElem::from_ratfunc(&field, &RatFunc::new(num, den))
        .ok_or_else(|| Error::DegenerateTetrahedron("zero denominator".into()))?;
    // a real spherical triangle needs |cos A| < 1
    let one = cos.one_like();
    if cos.sub(&one).sign() >= 0 || cos.add(&one).sign() <= 0 {
        return Err(Error::DegenerateTetrahedron(format!(
            "cos A ≈ {} outside (−1, 1)",
            cos.to_f64()
        )));
    }
    Ok(SolidAngle { cos_dihedral: cos })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::model::{build_close_packing, fcc_conventional, fill_octahedral_holes};

    fn tetra_volume_oracle(p: &PackingModel, t: &Tetrahedron) -> f64 {
        let pts: Vec<[f64; 3]> = t
            .vertices
            .iter()
            .map(|v| p.cartesian(&p.position(v.0, &v.1)).to_f64())
            .collect();
        let d = |k: usize| {
            [
                pts[k][0] - pts[0][0],
                pts[k][1] - pts[0][1],
                pts[k][2] - pts[0][2],
            ]
        };
        let (a, b, c) = (d(1), d(2), d(3));
        (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))
            .abs()
            / 6.0
    }

    #[test]
    fn filled_fcc_census() {
        let p = fill_octahedral_holes(&fcc_conventional()).unwrap();
        let rep = verify_compact(&p);
        assert!(rep.is_compact(), "{}", rep.verdict);
        assert_eq!(rep.census.get("LLLL"), Some(&8));
        assert_eq!(rep.census.get("SLLL"), Some(&32));
        assert_eq!(rep.tetra_volume, Q23::from_ints(0, 16, 0, 0));
        for t in &rep.tetrahedra {
            let expect = if census_key(&p, t) == "LLLL" {
                2.0 * 2f64.sqrt() / 3.0
            } else {
                2f64.sqrt() / 3.0
            };
            assert!((tetra_volume_oracle(&p, t) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn unfilled_fcc_deficit_is_four_octahedra() {
        let rep = verify_compact(&fcc_conventional());
        assert!(!rep.is_compact());
        assert_eq!(rep.census.get("LLLL"), Some(&8));
        assert_eq!(
            rep.uncovered_volume,
            Q23::from_ints(0, 32, 0, 0).scale(&BigRational::new(1.into(), 3.into()))
        );
    }

    #[test]
    fn verdict_is_cell_independent() {
        let a = verify_compact(&fill_octahedral_holes(&fcc_conventional()).unwrap());
        let b = verify_compact(
            &fill_octahedral_holes(&build_close_packing(&"ABC".parse().unwrap())).unwrap(),
        );
        assert_eq!(a.verdict, b.verdict);
        // per large sphere: 2 LLLL and 8 SLLL
        assert_eq!(b.census.get("LLLL"), Some(&6));
        assert_eq!(b.census.get("SLLL"), Some(&24));
    }

    #[test]
    fn densities() {
        let filled = density(&fill_octahedral_holes(&fcc_conventional()).unwrap(), 64);
        let bare = density(&fcc_conventional(), 64);
        assert_eq!(
            filled.density_over_pi,
            Q23::from_ints(5, -3, 0, 0).scale(&BigRational::new(1.into(), 3.into()))
        );
        assert_eq!(
            bare.density_over_pi,
            Q23::sqrt2().scale(&BigRational::new(1.into(), 6.into()))
        );
        let ratio = filled.density_over_pi.div(&bare.density_over_pi).unwrap();
        assert_eq!(ratio, Q23::from_ints(-6, 5, 0, 0));
        // π/√18 = 0.74048048969306104116...
        assert_eq!(
            bare.density_interval,
            ["0.740480489693061", "0.740480489693062"]
        );
        assert!(filled.density_interval[0].starts_with("0.79310"));
    }

    fn root(c: &[i64]) -> AlgebraicReal {
        AlgebraicReal::roots_in(
            &RationalPoly::from_ints(c),
            &BigRational::zero(),
            &BigRational::one(),
        )[0]
        .clone()
    }

    #[test]
    fn solid_angle_is_quarter_sphere_at_sqrt2_minus_1() {
        let om = solid_angle_at_small(&root(&[-1, 2, 1])).unwrap();
        assert_eq!(om.pi_fraction(), Some(BigRational::new(1.into(), 2.into())));
        let e = om.enclosure(80).unwrap();
        assert!((e.mid_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(!om.certified_not_dividing_sphere(256).unwrap());
    }

    #[test]
    fn equal_spheres_do_not_tile_around_a_point() {
        let om = solid_angle_at_small(&AlgebraicReal::from_int(1)).unwrap();
        assert_eq!(
            om.cos_dihedral.as_rational(),
            Some(BigRational::new(1.into(), 3.into()))
        );
        assert_eq!(om.pi_fraction(), None);
        let e = om.enclosure(64).unwrap();
        assert!((e.mid_f64() - (3.0 * (1.0f64 / 3.0).acos() - std::f64::consts::PI)).abs() < 1e-12);
        assert!((e.mid_f64() - 0.55129).abs() < 1e-5);
        assert!(om.certified_not_dividing_sphere(256).unwrap());
    }

    #[test]
    fn degenerate_apex() {
        assert!(matches!(
            solid_angle_at_small(&AlgebraicReal::from_int(0)),
            Err(Error::DegenerateTetrahedron(_))
        ));
    }
}
