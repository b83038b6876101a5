//! Writes every corpus complex to `<dir>/<name>.json` (default `corpus/`).

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("corpus"));
    std::fs::create_dir_all(&dir)?;
    for (name, tri) in hdw_core::corpus::all() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, tri.to_json() + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
