//! File formats and rendering: versioned JSON graph/drawing files that
//! round-trip losslessly, and deterministic SVG output.

mod files;
mod svg;

pub use files::{
    parse_drawing, parse_graph, serialize_drawing, serialize_graph, DrawingFile, GraphFile,
    GraphModel, SCHEMA_VERSION,
};
pub use svg::{render_svg, SvgOptions};

/// FNV-1a 64-bit hash, used to tie drawing files to their graph files.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
