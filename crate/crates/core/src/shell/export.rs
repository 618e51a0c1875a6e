use std::fmt::Write;

use serde::Serialize;

use crate::necklace::Bead;

use super::embed::EmbeddedShell;

/// OFF mesh with one comment line per vertex giving its label.
pub fn shell_to_off(s: &EmbeddedShell) -> String {
    let labels = s.complex.labels();
    let mut out = String::from("OFF\n");
    writeln!(
        out,
        "# shell of a large sphere: {} ({})",
        s.shape_class, s.radius
    )
    .unwrap();
    writeln!(out, "{} {} 0", labels.len(), s.complex.faces().len()).unwrap();
    for (v, x) in s.approx_coordinates().iter().enumerate() {
        let l = if labels[v] == Bead::L { 'L' } else { 'S' };
        writeln!(out, "# {v} {l} {}", s.coordinates[v]).unwrap();
        writeln!(out, "{:.12} {:.12} {:.12}", x[0], x[1], x[2]).unwrap();
    }
    for f in s.complex.faces() {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
    }
    out
}

#[derive(Serialize)]
struct ShellJson<'a> {
    shape_class: String,
    radius: [String; 4],
    labels: Vec<char>,
    faces: &'a [[usize; 3]],
    /// Each coordinate as a 4-tuple over the basis (1, √2, √3, √6).
    coordinates: Vec<[[String; 4]; 3]>,
}

pub fn shell_to_json(s: &EmbeddedShell) -> serde_json::Value {
    let j = ShellJson {
        shape_class: s.shape_class.to_string(),
        radius: s.radius.coord_strings(),
        labels: s
            .complex
            .labels()
            .iter()
            .map(|&b| if b == Bead::L { 'L' } else { 'S' })
            .collect(),
        faces: s.complex.faces(),
        coordinates: s
            .coordinates
            .iter()
            .map(|p| p.0.clone().map(|c| c.coord_strings()))
            .collect(),
    };
    serde_json::to_value(j).expect("plain data")
}
