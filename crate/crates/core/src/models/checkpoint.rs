//! Binary model checkpoints.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic bytes "ALBM"
//! 4       1     format version (1)
//! 5       1     model kind (0 = logreg, 1 = mlp)
//! 6       4     feature_dim (u32)
//! 10      4     num_classes (u32)
//! 14      1     layer count L (u8)
//! 15      8*L   per layer: in_dim (u32), out_dim (u32)
//! ...           per layer: weights row-major then biases, f64 LE
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::models::net::{Layer, Network};
use crate::models::{ModelKind, TrainedModel};

const MAGIC: &[u8; 4] = b"ALBM";
const VERSION: u8 = 1;

pub fn save_checkpoint(model: &TrainedModel, path: &Path) -> Result<()> {
    let net = model.net();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_u8(VERSION)?;
    w.write_u8(match model.kind() {
        ModelKind::Logreg => 0,
        ModelKind::Mlp => 1,
    })?;
    w.write_u32::<LittleEndian>(model.feature_dim() as u32)?;
    w.write_u32::<LittleEndian>(model.num_classes() as u32)?;
    w.write_u8(net.layers.len() as u8)?;
    for layer in &net.layers {
        w.write_u32::<LittleEndian>(layer.in_dim as u32)?;
        w.write_u32::<LittleEndian>(layer.out_dim as u32)?;
    }
    for layer in &net.layers {
        for &v in &layer.w {
            w.write_f64::<LittleEndian>(v)?;
        }
        for &v in &layer.b {
            w.write_f64::<LittleEndian>(v)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<TrainedModel> {
    let err = |detail: &str| Error::Checkpoint {
        path: path.display().to_string(),
        detail: detail.to_string(),
    };
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(err("bad magic bytes"));
    }
    if r.read_u8()? != VERSION {
        return Err(err("unsupported version"));
    }
    let kind = match r.read_u8()? {
        0 => ModelKind::Logreg,
        1 => ModelKind::Mlp,
        _ => return Err(err("unknown model kind")),
    };
    let feature_dim = r.read_u32::<LittleEndian>()? as usize;
    let num_classes = r.read_u32::<LittleEndian>()? as usize;
    let n_layers = r.read_u8()? as usize;
    if n_layers == 0 {
        return Err(err("zero layers"));
    }
    let mut shapes = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let in_dim = r.read_u32::<LittleEndian>()? as usize;
        let out_dim = r.read_u32::<LittleEndian>()? as usize;
        shapes.push((in_dim, out_dim));
    }
    if shapes[0].0 != feature_dim || shapes[n_layers - 1].1 != num_classes {
        return Err(err("layer shapes inconsistent with header"));
    }
    for w in shapes.windows(2) {
        if w[0].1 != w[1].0 {
            return Err(err("layer shapes do not chain"));
        }
    }
    let mut layers = Vec::with_capacity(n_layers);
    for &(in_dim, out_dim) in &shapes {
        let mut w = vec![0.0; in_dim * out_dim];
        for v in w.iter_mut() {
            *v = r.read_f64::<LittleEndian>()?;
        }
        let mut b = vec![0.0; out_dim];
        for v in b.iter_mut() {
            *v = r.read_f64::<LittleEndian>()?;
        }
        layers.push(Layer {
            w,
            b,
            in_dim,
            out_dim,
        });
    }
    Ok(TrainedModel::from_net(kind, Network { layers }))
}
