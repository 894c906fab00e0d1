//! Inputs shared by the benchmarks.

use tropmod::{Graph, GraphicMatroid, WeightVector};

pub fn weights(s: &str) -> WeightVector {
    s.parse().expect("benchmark weights are valid")
}

/// A heavy/light vector with `h` heavy entries and `l` light ones.
pub fn heavy_light(h: usize, l: usize) -> WeightVector {
    let light = format!("1/{}", 2 * l.max(1));
    let mut entries = vec!["1".to_string(); h];
    entries.extend(vec![light; l]);
    weights(&entries.join(","))
}

pub fn complete(k: i64) -> GraphicMatroid {
    GraphicMatroid::from_graph(Graph::complete(1..=k))
}
