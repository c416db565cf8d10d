use std::path::Path;

use clbench::ExperimentConfig;

fn toml_blocks(text: &str) -> Vec<String> {
    text.split("```toml").skip(1).map(|b| b.split("```").next().unwrap().to_string()).collect()
}

#[test]
fn readme_config_parses_to_defaults() {
    let readme = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let blocks = toml_blocks(&readme);
    assert_eq!(blocks.len(), 1);
    let mut cfg = ExperimentConfig::from_toml(&blocks[0]).unwrap();
    assert_eq!(cfg.strategy.kind, strategies::StrategyKind::Er);
    cfg.strategy = ExperimentConfig::default().strategy;
    assert_eq!(cfg, ExperimentConfig::default());
}

#[test]
fn presets_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
