//! Save a channel as JSON and check it the way `kraus-sphere validate` does.

use kraus_sphere::experiment::{validate_channel_file, write_channel};
use kraus_sphere::{build_depolarizing, KrausSet};

fn main() -> kraus_sphere::Result<()> {
    let dir = std::env::temp_dir().join("kraus-sphere-validate-example");
    std::fs::create_dir_all(&dir).map_err(|e| kraus_sphere::Error::Config(e.to_string()))?;

    let good = dir.join("depolarizing.json");
    write_channel(&good, &build_depolarizing(0.3)?)?;
    println!("{}\n{}\n", good.display(), validate_channel_file(&good)?);

    // Drop one operator: no longer trace preserving.
    let mut ops = build_depolarizing(0.3)?.into_operators();
    ops.pop();
    let bad = dir.join("truncated.json");
    write_channel(&bad, &KrausSet::new(ops)?)?;
    println!("{}\n{}", bad.display(), validate_channel_file(&bad)?);
    Ok(())
}
