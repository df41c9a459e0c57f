//! Elementary block diagrams, composition, flattening and netlists.

use firstorder::blocks::{compose, flatten, simulate_graph, Architecture, BlockGraph, Composition};
use firstorder::dt::Sequence;

fn main() -> firstorder::Result<()> {
    let archs = [
        Architecture::FirDifferentiator(1.0),
        Architecture::MovingSum(1.0),
        Architecture::Accumulator(1.0),
        Architecture::Oscillator(1.0),
    ];
    let imp = Sequence::impulse(6, 1.0)?;
    for arch in archs {
        let g = BlockGraph::canonical(arch)?;
        let de = flatten(&g)?;
        let y = simulate_graph(&g, &imp, 6)?;
        println!("{arch:?}: b {:?} a {:?} h {:?}", de.b(), de.a(), y.samples());
    }

    // differentiator then leaky accumulator gives the DT high-pass
    let hpf = compose(
        &[
            BlockGraph::canonical(Architecture::FirDifferentiator(1.0))?,
            BlockGraph::canonical(Architecture::Accumulator(0.6))?,
        ],
        &Composition::Series,
    )?;
    let de = flatten(&hpf)?;
    println!("series: b {:?} a {:?}", de.b(), de.a());
    print!("{}", hpf.to_netlist());
    Ok(())
}
