use crate::repr::{BlurryFrame, Frame};
use crate::sim::SharpVideo;

/// Trapezoidal temporal average of the video over its exposure.
pub fn synthesize_blur(video: &SharpVideo) -> BlurryFrame {
    let ts = video.timestamps();
    let frames = video.frames();
    let span = ts[ts.len() - 1] - ts[0];
    let mut acc = vec![0.0; frames[0].len()];
    for k in 1..frames.len() {
        let half_dt = 0.5 * (ts[k] - ts[k - 1]);
        for ((a, &u), &v) in acc
            .iter_mut()
            .zip(frames[k - 1].values())
            .zip(frames[k].values())
        {
            *a += half_dt * (u + v);
        }
    }
    acc.iter_mut().for_each(|a| *a /= span);
    let frame = Frame::new(video.width(), video.height(), acc).expect("shape preserved");
    BlurryFrame::new(frame, video.interval())
}
