//! Parameter registry with seeded initialization and a flat binary
//! save/load format.
//!
//! The save format is two files: `<path>.manifest` lists `name shape...`
//! per line in registry order, and `<path>.bin` holds every value as
//! little-endian f64 in the same order.

use rand::Rng;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub usize);

#[derive(Debug, Clone)]
struct Param {
    name: String,
    value: Tensor,
}

/// All trainable parameters of a learner. Target networks are plain clones.
#[derive(Debug, Clone, Default)]
pub struct ParamStore {
    params: Vec<Param>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, value: Tensor) -> ParamId {
        self.params.push(Param { name: name.into(), value });
        ParamId(self.params.len() - 1)
    }

    /// Xavier-style uniform init scaled by fan-in: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    pub fn add_xavier(
        &mut self,
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        rng: &mut impl Rng,
    ) -> ParamId {
        let bound = 1.0 / (cols as f64).sqrt();
        let data = (0..rows * cols).map(|_| rng.gen_range(-bound..bound)).collect();
        self.add(name, Tensor::matrix(rows, cols, data))
    }

    pub fn add_zeros(&mut self, name: impl Into<String>, shape: Vec<usize>) -> ParamId {
        self.add(name, Tensor::zeros(shape))
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn get(&self, id: ParamId) -> &Tensor {
        &self.params[id.0].value
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Tensor {
        &mut self.params[id.0].value
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.params[id.0].name
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    /// Total number of scalar coordinates.
    pub fn num_values(&self) -> usize {
        self.params.iter().map(|p| p.value.len()).sum()
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let mut manifest = String::new();
        let mut bin: Vec<u8> = Vec::with_capacity(self.num_values() * 8);
        for p in &self.params {
            manifest.push_str(&p.name);
            for d in &p.value.shape {
                manifest.push(' ');
                manifest.push_str(&d.to_string());
            }
            manifest.push('\n');
            for v in &p.value.data {
                bin.extend_from_slice(&v.to_le_bytes());
            }
        }
        std::fs::write(path.with_extension("manifest"), manifest)?;
        std::fs::write(path.with_extension("bin"), bin)
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let manifest = std::fs::read_to_string(path.with_extension("manifest"))?;
        let mut bin = std::fs::File::open(path.with_extension("bin"))?;
        let mut store = Self::new();
        for line in manifest.lines() {
            let mut parts = line.split(' ');
            let name = parts
                .next()
                .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "empty manifest line"))?;
            let shape: Vec<usize> = parts
                .map(|p| p.parse().map_err(|_| io::Error::new(io::ErrorKind::InvalidData, "bad shape")))
                .collect::<Result<_, _>>()?;
            let n: usize = shape.iter().product();
            let mut data = vec![0.0; n];
            let mut buf = [0u8; 8];
            for v in &mut data {
                bin.read_exact(&mut buf)?;
                *v = f64::from_le_bytes(buf);
            }
            store.add(name, Tensor::new(shape, data));
        }
        // the binary must be fully consumed
        let mut rest = Vec::new();
        bin.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "trailing bytes in parameter file"));
        }
        Ok(store)
    }

    /// Write all parameters into a flat vector (gradcheck helper).
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_values());
        for p in &self.params {
            out.extend_from_slice(&p.value.data);
        }
        out
    }

    pub fn unflatten(&mut self, flat: &[f64]) {
        let mut k = 0;
        for p in &mut self.params {
            for v in &mut p.value.data {
                *v = flat[k];
                k += 1;
            }
        }
        assert_eq!(k, flat.len());
    }
}

// keep Write import used on all platforms
#[allow(unused)]
fn _assert_write_used(w: &mut dyn Write) -> io::Result<()> {
    w.flush()
}
