//! Writes every figure's CSV and SVG files into a directory.
//!
//! Usage: cargo run --example figures [out_dir]

use firstorder::cli::figures::{generate, FigureId, FigureParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    for id in FigureId::ALL {
        for art in generate(id, &FigureParams::default())? {
            let path = std::path::Path::new(&dir).join(&art.name);
            std::fs::write(&path, &art.contents)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
