use crate::error::{Error, Result};
use crate::network::{Layer, LayerwiseNetwork};

/// Positions `(layer, row, col)` of the `count` smallest-magnitude weight
/// entries, in removal order. Ties keep layer-then-row-major order.
pub fn pruned_positions(full: &LayerwiseNetwork, count: usize) -> Result<Vec<(usize, usize, usize)>> {
    let total = full.weight_count();
    if count > total {
        return Err(Error::InvalidOptions(format!("prune count {count} exceeds the {total} weight entries")));
    }
    let mut entries: Vec<(f64, usize, usize, usize)> = Vec::with_capacity(total);
    for (k, layer) in full.layers().iter().enumerate() {
        let w = &layer.weight;
        for r in 0..w.nrows() {
            for c in 0..w.ncols() {
                entries.push((w[(r, c)].abs(), k, r, c));
            }
        }
    }
    // Stable sort keeps the enumeration order among equal magnitudes.
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(entries.into_iter().take(count).map(|(_, k, r, c)| (k, r, c)).collect())
}

/// Zeroes the `count` smallest-magnitude weight entries; biases are kept.
pub fn prune_magnitude(full: &LayerwiseNetwork, count: usize) -> Result<LayerwiseNetwork> {
    let mut layers: Vec<Layer> = full.layers().to_vec();
    for (k, r, c) in pruned_positions(full, count)? {
        layers[k].weight[(r, c)] = 0.0;
    }
    LayerwiseNetwork::new(layers, full.activation())
}
