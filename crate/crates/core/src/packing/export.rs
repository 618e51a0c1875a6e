use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::json;

use crate::necklace::Bead;

use super::compact::{CompactReport, PackingMetrics};
use super::model::{radius_of, PackingModel};

/// Extended XYZ: one sphere per line with decimal center and radius, the
/// exact coordinates over (1, √2, √3, √6) in a trailing comment.
pub fn packing_to_xyz(p: &PackingModel, digits: usize) -> String {
    let mut out = String::new();
    writeln!(out, "{}", p.len()).unwrap();
    let lattice: Vec<String> = p.basis.iter().map(|b| b.to_string()).collect();
    writeln!(
        out,
        "Lattice=\"{}\" Properties=species:S:1:pos:R:3:radius:R:1",
        lattice.join(" ")
    )
    .unwrap();
    for s in &p.motif {
        let c = p.cartesian(&s.frac);
        let f = c.to_f64();
        let r = radius_of(s.kind);
        let name = if s.kind == Bead::L { "L" } else { "S" };
        let exact: Vec<String> =
            c.0.iter()
                .map(|x| format!("[{}]", x.coord_strings().join(",")))
                .collect();
        writeln!(
            out,
            "{name} {:.d$} {:.d$} {:.d$} {:.d$} # {} r={}",
            f[0],
            f[1],
            f[2],
            r.to_f64(),
            exact.join(" "),
            r,
            d = digits
        )
        .unwrap();
    }
    out
}

/// OFF mesh of the tetrahedra of one cell: four triangles per tetrahedron.
pub fn tiling_to_off(p: &PackingModel, rep: &CompactReport) -> String {
    let mut index: BTreeMap<(usize, [i64; 3]), usize> = BTreeMap::new();
    for t in &rep.tetrahedra {
        for v in &t.vertices {
            let n = index.len();
            index.entry(*v).or_insert(n);
        }
    }
    let mut verts: Vec<(usize, [i64; 3])> = vec![(0, [0; 3]); index.len()];
    for (v, &i) in &index {
        verts[i] = *v;
    }
    let mut out = String::from("OFF\n");
    writeln!(
        out,
        "# {} tetrahedra, verdict {}",
        rep.tetrahedra.len(),
        rep.verdict
    )
    .unwrap();
    writeln!(out, "{} {} 0", verts.len(), 4 * rep.tetrahedra.len()).unwrap();
    for (i, t) in &verts {
        let f = p.cartesian(&p.position(*i, t)).to_f64();
        writeln!(out, "{:.12} {:.12} {:.12}", f[0], f[1], f[2]).unwrap();
    }
    for t in &rep.tetrahedra {
        let ids: Vec<usize> = t.vertices.iter().map(|v| index[v]).collect();
        for skip in 0..4 {
            let f: Vec<String> = (0..4)
                .filter(|&k| k != skip)
                .map(|k| ids[k].to_string())
                .collect();
            writeln!(out, "3 {}", f.join(" ")).unwrap();
        }
    }
    out
}

pub fn metrics_json(m: &PackingMetrics, rep: &CompactReport) -> serde_json::Value {
    json!({
        "density_exact": m.density_exact,
        "density_over_pi": m.density_over_pi,
        "density_interval": m.density_interval,
        "counts": {"large": m.large_per_cell, "small": m.small_per_cell},
        "simplex_census": rep.census,
        "verdict": rep.verdict,
        "cell_volume": rep.cell_volume.to_string(),
        "tetra_volume": rep.tetra_volume.to_string(),
        "uncovered_volume": rep.uncovered_volume.to_string(),
    })
}
