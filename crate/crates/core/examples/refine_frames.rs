// Refines a noisy frame sequence with event-derived residuals, comparing
// the exact tridiagonal solve against fixed-step gradient descent.

use ecir::refine::{descend, objective, refine, surrogate_residuals, RefineProblem, RefineSolver};
use ecir::repr::{Event, EventStream, ExposureInterval, Frame, Polarity};

fn main() -> ecir::Result<()> {
    let exposure = ExposureInterval::centered(0.12)?;
    let timestamps = exposure.uniform_timestamps(6);
    // One pixel brightens by a threshold step between every pair of frames.
    let c = 0.2;
    let events = timestamps
        .windows(2)
        .map(|w| Event::new(0, 0, 0.5 * (w[0] + w[1]), Polarity::Positive))
        .collect();
    let events = EventStream::new(events, exposure, 1, 1)?;
    let noisy: Vec<Frame> = [0.30, 0.41, 0.42, 0.58, 0.61, 0.80]
        .iter()
        .map(|&v| Frame::filled(1, 1, v))
        .collect();

    let residuals = surrogate_residuals(&noisy, &events, c, &timestamps)?;
    let problem = RefineProblem::new(noisy.clone(), residuals, 0.5)?;
    let exact = refine(&problem, RefineSolver::Tridiagonal)?;
    let run = descend(&problem)?;

    println!("objective: start {:.6}", objective(&problem, &noisy)?);
    println!(
        "objective: exact {:.6}  after {} steps {:.6}",
        objective(&problem, &exact)?,
        problem.max_iterations,
        run.objectives.last().copied().unwrap_or_default()
    );
    for ((a, b), n) in exact.iter().zip(&run.frames).zip(&noisy) {
        println!(
            "  {:.4} -> exact {:.4}  descent {:.4}",
            n.values()[0],
            a.values()[0],
            b.values()[0]
        );
    }
    Ok(())
}
