//! Factor a transfer function, check stability, and recombine.

use firstorder::ct::{hpf, lpf};
use firstorder::rational::{RationalTf, Stability};

fn main() -> firstorder::Result<()> {
    let tf = RationalTf::continuous([2.0, 1.0], [2.0, 3.0, 1.0])?;
    let pzg = tf.to_pzg()?;
    println!("H(s) = ({}) / ({})", tf.num(), tf.den());
    for z in &pzg.zeros {
        println!("zero {:.6} (x{})", z.value, z.multiplicity);
    }
    for p in &pzg.poles {
        println!("pole {:.6} (x{})", p.value, p.multiplicity);
    }
    println!("gain {}  stability {:?}", pzg.gain, pzg.stability());
    assert_eq!(pzg.stability(), Stability::Stable);

    let back = pzg.to_tf()?;
    println!("recombined den: {}", back.den());

    // complementary first-order pair
    let sum = lpf(0.25)?.add(&hpf(0.25)?)?;
    println!("lpf + hpf = ({}) / ({})", sum.num(), sum.den());
    Ok(())
}
