//! Regenerate the bundled chain files under `chains/`.

use std::path::Path;

fn main() -> wordrank::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("chains");
    std::fs::create_dir_all(&dir)?;
    for (name, spec) in wordrank::figures::bundled() {
        let path = dir.join(format!("{name}.json"));
        spec.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}
