//! Default frequency × amplitude sweep, written as `sweep.csv` and
//! `sweep_meta.json`, with the superradiance boundaries extracted.
//!
//! cargo run --release --example sweep_contours -- [output-dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use nlcscatter::cli::config::RunConfig;
use nlcscatter::cli::output::{write_sweep_csv, write_sweep_meta, SweepMeta};
use nlcscatter::sweep::{run_sweep, superradiance_contour};
use nlcscatter::Port;

fn main() -> nlcscatter::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let cfg = RunConfig::biased_cavity();
    let grid = run_sweep(&cfg.params()?, &cfg.grid, cfg.branch_policy, 4)?;
    write_sweep_csv(BufWriter::new(File::create(dir.join("sweep.csv"))?), &grid)?;
    write_sweep_meta(
        BufWriter::new(File::create(dir.join("sweep_meta.json"))?),
        &SweepMeta::new(&cfg, &grid),
    )?;
    println!("{} cells written to {}", grid.cells.len(), dir.display());

    for port in Port::BOTH {
        let field = grid.alpha_field(port);
        let negative = field.iter().filter(|a| **a < 0.0).count();
        println!("alpha_{}: {negative} of {} cells superradiant", port.number(), field.len());
        match superradiance_contour(&grid, port) {
            Ok(lines) => {
                for line in &lines {
                    let (first, last) = (line[0], line[line.len() - 1]);
                    println!(
                        "  boundary of {} vertices from ({:.1} Hz, s~ {:.3}) to ({:.1} Hz, s~ {:.3})",
                        line.len(),
                        first[0],
                        first[1],
                        last[0],
                        last[1]
                    );
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
