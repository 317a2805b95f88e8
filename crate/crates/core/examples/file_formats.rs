// Writes and reads every on-disk format: text events, PGM and raw-float
// frames, polynomial fields and frame directories.

use ecir::io::{
    read_events, read_frame, read_polys, read_video, write_events, write_frame, write_polys,
    write_video, FrameFormat,
};
use ecir::repr::{
    Event, EventStream, ExposureInterval, Frame, IntensityPoly, KeypointSet, Polarity, PolyField,
};
use ecir::sim::SharpVideo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path();
    let exposure = ExposureInterval::centered(0.12)?;

    let stream = EventStream::new(
        vec![
            Event::new(1, 0, -0.031, Polarity::Positive),
            Event::new(0, 1, 0.002, Polarity::Negative),
            Event::new(1, 1, 0.044, Polarity::Positive),
        ],
        exposure,
        2,
        2,
    )?;
    write_events(&root.join("events.txt"), &stream)?;
    print!("{}", std::fs::read_to_string(root.join("events.txt"))?);
    assert_eq!(
        read_events(&root.join("events.txt"), None)?.events(),
        stream.events()
    );

    let frame = Frame::from_fn(4, 3, |x, y| (x + 4 * y) as f64 / 11.0);
    write_frame(&root.join("frame.pgm"), &frame)?;
    write_frame(&root.join("frame.f32"), &frame)?;
    let pgm = read_frame(&root.join("frame.pgm"))?;
    let raw = read_frame(&root.join("frame.f32"))?;
    println!(
        "pgm row 0 {:.4?}, raw row 0 {:.4?}",
        &pgm.values()[..4],
        &raw.values()[..4]
    );

    let keypoints = KeypointSet::pivots(exposure, 3)?;
    let polys = (0..4)
        .map(|i| IntensityPoly::new(keypoints.clone(), vec![1.0, -2.0, i as f64], 0.3))
        .collect::<ecir::Result<_>>()?;
    let field = PolyField::new(2, 2, polys)?;
    write_polys(&root.join("field.polys"), &field)?;
    let back = read_polys(&root.join("field.polys"))?;
    println!(
        "poly (1, 1) at t=0.05: {:.6}",
        back.get(1, 1).eval_primitive(0.05)
    );

    let video = SharpVideo::uniform(vec![frame.clone(), frame.map(|v| 1.0 - v)], exposure)?;
    write_video(&root.join("video"), &video, FrameFormat::F32)?;
    let reread = read_video(&root.join("video"), exposure)?;
    println!(
        "video: {} frames at {:?}",
        reread.len(),
        reread.timestamps()
    );
    Ok(())
}
