//! Kraus operators as a frame of real vectors, and back.

use kraus_sphere::{
    build_flip_channel, build_symplectic_form, completeness_gram, frame_to_kraus, kraus_to_frame, ChannelKind,
    SymplecticForm,
};

fn main() -> kraus_sphere::Result<()> {
    let set = build_flip_channel(ChannelKind::BitFlip, 0.8)?;
    let frame = kraus_to_frame(&set)?;
    println!("d = {}, m = {}, vector length {}", frame.dim(), frame.count(), frame.vector_dim());
    for (i, v) in frame.vectors().iter().enumerate() {
        println!("v{} = {:.4?}", i + 1, v);
    }

    let (v1, v2) = (&frame.vectors()[0], &frame.vectors()[1]);
    let dot: f64 = v1.iter().zip(v2).map(|(a, b)| a * b).sum();
    println!("v1·v2 = {dot:.2e}, v1·S v2 = {:.2e}", SymplecticForm::pairing(v1, v2));
    println!("Gram matrix deviation from I: {:.2e}", frame.invariant_deviation());
    println!("{:?}", completeness_gram(&frame));

    let s = build_symplectic_form(frame.vector_dim())?;
    println!("S is {}x{}", s.matrix().rows(), s.matrix().cols());

    let back = frame_to_kraus(&frame)?;
    println!("round trip exact: {}", back == set);
    Ok(())
}
