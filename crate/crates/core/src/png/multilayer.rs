//! Multi-layer PNG: height lost when two steps of a layer collide is
//! nucleated on the layer below.
//!
//! Layer `ℓ ≥ 1` grows by the single-layer rule with nucleations
//! `ω_ℓ(r, t+1) = max(0, min(h_{ℓ-1}(r-1, t), h_{ℓ-1}(r+1, t)) - h_{ℓ-1}(r, t))`,
//! the overlap of the two fronts that meet above `r`.

use rand::Rng;

use super::growth::{draw_noise, evolve_with_noise, HeightField};
use super::PngParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiLayerField {
    layers: Vec<HeightField>,
}

impl MultiLayerField {
    /// `layers` flat layers at `t = 0`.
    pub fn initial(layers: usize) -> Result<Self> {
        if layers == 0 {
            return Err(Error::Config("need at least one layer".into()));
        }
        Ok(Self {
            layers: vec![HeightField::initial(); layers],
        })
    }

    /// Fields must share the time and be ordered top to bottom.
    pub fn from_layers(layers: Vec<HeightField>) -> Result<Self> {
        if layers.is_empty() || layers.iter().any(|l| l.t() != layers[0].t()) {
            return Err(Error::Config("layers must be nonempty and share the time".into()));
        }
        let f = Self { layers };
        f.check_order()?;
        Ok(f)
    }

    pub fn t(&self) -> usize {
        self.layers[0].t()
    }

    pub fn layers(&self) -> &[HeightField] {
        &self.layers
    }

    /// Number of layers with a nonzero height somewhere.
    pub fn nonempty_layers(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.heights().iter().any(|&h| h > 0))
            .count()
    }

    fn check_order(&self) -> Result<()> {
        for (l, pair) in self.layers.windows(2).enumerate() {
            if let Some(i) = (0..pair[0].heights().len())
                .find(|&i| pair[0].heights()[i] < pair[1].heights()[i])
            {
                return Err(Error::Consistency(format!(
                    "layer {} exceeds layer {l} at index {i}, t = {}",
                    l + 1,
                    self.t()
                )));
            }
        }
        Ok(())
    }
}

/// Collision overlaps of `above` at time `t + 1`.
fn absorbed(above: &HeightField) -> Vec<i64> {
    let t1 = above.t() as i64 + 1;
    (-t1..=t1)
        .map(|r| (above.get(r - 1).min(above.get(r + 1)) - above.get(r)).max(0))
        .collect()
}

/// One step with the top-layer nucleations given.
pub fn evolve_multilayer_with_noise(field: &MultiLayerField, noise: &[i64]) -> Result<MultiLayerField> {
    let mut layers = Vec::with_capacity(field.layers.len());
    layers.push(evolve_with_noise(&field.layers[0], noise));
    for pair in field.layers.windows(2) {
        layers.push(evolve_with_noise(&pair[1], &absorbed(&pair[0])));
    }
    let next = MultiLayerField { layers };
    next.check_order()?;
    Ok(next)
}

/// One step with fresh top-layer noise (drawn exactly as in the single-layer
/// [`super::evolve`], so layer 0 reproduces it).
pub fn evolve_multilayer<R: Rng + ?Sized>(
    field: &MultiLayerField,
    params: &PngParams,
    rng: &mut R,
) -> Result<MultiLayerField> {
    let noise = draw_noise(field.t(), params, rng);
    evolve_multilayer_with_noise(field, &noise)
}
