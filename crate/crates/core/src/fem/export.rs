use std::io::Write;

use super::tensor::MaterialTensor;
use crate::error::Result;

pub fn write_coords_csv<W: Write>(coords: &[[f64; 3]], mut w: W) -> Result<()> {
    writeln!(w, "node_id,x,y,z")?;
    for (i, x) in coords.iter().enumerate() {
        writeln!(w, "{i},{},{},{}", x[0], x[1], x[2])?;
    }
    Ok(())
}

/// Lower triangle per node: `s00,s10,s11` in 2D, plus `s20,s21,s22` in 3D.
pub fn write_materials_csv<W: Write>(materials: &[MaterialTensor], mut w: W) -> Result<()> {
    let dim = materials.first().map_or(2, MaterialTensor::dim);
    let names: Vec<String> = (0..dim).flat_map(|i| (0..=i).map(move |j| format!("s{i}{j}"))).collect();
    writeln!(w, "node_id,{}", names.join(","))?;
    for (i, t) in materials.iter().enumerate() {
        let comps: Vec<String> = t.lower_triangle().iter().map(f64::to_string).collect();
        writeln!(w, "{i},{}", comps.join(","))?;
    }
    Ok(())
}

pub fn write_dirichlet_csv<W: Write>(dirichlet: &[bool], mut w: W) -> Result<()> {
    writeln!(w, "node_id,dirichlet")?;
    for (i, d) in dirichlet.iter().enumerate() {
        writeln!(w, "{i},{}", u8::from(*d))?;
    }
    Ok(())
}
