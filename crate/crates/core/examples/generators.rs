//! The constraint-preserving generator basis and its closed-form rotations.

use std::f64::consts::PI;

use kraus_sphere::{build_symplectic_form, finite_transform, generator_basis, matrix_exp_oracle};

fn main() -> kraus_sphere::Result<()> {
    let dk = 8;
    let basis = generator_basis(dk)?;
    let s = build_symplectic_form(dk)?;
    println!("{} generators for d_k = {dk}", basis.len());

    let mut worst_commutator = 0.0f64;
    let mut worst_cube = 0.0f64;
    let mut worst_exp = 0.0f64;
    for g in basis.generators() {
        let j = g.matrix();
        let commutator = &(s.matrix() * &j) - &(&j * s.matrix());
        worst_commutator = worst_commutator.max(commutator.max_abs());
        let cube = &(&(&j * &j) * &j) + &j;
        worst_cube = worst_cube.max(cube.max_abs());
        for theta in [0.1, 1.0, PI, 5.0] {
            let closed = finite_transform(g, theta);
            worst_exp = worst_exp.max(closed.max_abs_diff(&matrix_exp_oracle(&j, theta)?));
        }
    }
    println!("max |[S, J]|      = {worst_commutator:.1e}");
    println!("max |J³ + J|      = {worst_cube:.1e}");
    println!("max |M(θ) - e^θJ| = {worst_exp:.1e}");

    let g = &basis.generators()[0];
    let m = finite_transform(g, PI / 2.0);
    println!("M(π/2) for the first generator:");
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| format!("{:5.2}", m.get(r, c) + 0.0)).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
