//! Writes the bundled sample table: `cargo run -p featnet-core --example gen_synthetic [out.csv]`.

use featnet_core::synthetic::planted_blocks;

fn main() -> std::io::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "data/synthetic_mixed.csv".into());
    let data = planted_blocks(600, 4, 4, 2024);
    std::fs::write(&out, data.csv)?;
    eprintln!("wrote {out} ({} features, 600 records)", data.names.len());
    Ok(())
}
