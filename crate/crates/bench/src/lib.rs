//! Inputs shared by the criterion benches.

use std::path::Path;

use rocks::model::{parse_document, to_layout_tree, InputFormat};
use rocks::synth::{code_like_tree, rng};
use rocks::{LayoutTree, Metrics};

/// The bundled corpus with every wrap padded by `padding`.
pub fn corpus(padding: f64) -> Vec<(String, LayoutTree)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/trees");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let bytes = std::fs::read(&p).expect("readable corpus file");
            let doc = parse_document(&bytes, InputFormat::Json, &Metrics::default())
                .expect("corpus parses");
            let tree = to_layout_tree(&doc).expect("corpus converts");
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, tree.with_uniform_padding(padding))
        })
        .collect()
}

/// A generated code-shaped document of about `fragments` atoms.
pub fn synthetic(fragments: usize, seed: u64) -> LayoutTree {
    code_like_tree(&mut rng(seed), fragments, &Metrics::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_load() {
        assert_eq!(corpus(2.0).len(), 6);
        assert!(synthetic(500, 1).fragments().len() >= 400);
    }
}
