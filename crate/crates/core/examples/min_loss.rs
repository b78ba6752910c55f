//! Scores a list of two lines on a handful of points under the min-loss
//! objective and shows which line each point picks.

use mixlr::objective::{min_loss, min_loss_dataset};
use mixlr::{Dataset, ModelSet};

fn main() -> mixlr::Result<()> {
    let data = Dataset::new(
        vec![vec![1.0], vec![2.0], vec![1.0], vec![3.0]],
        vec![1.1, 2.0, -0.9, -3.2],
    )?;
    let models = ModelSet::new(vec![vec![1.0], vec![-1.0]])?;

    let report = min_loss_dataset(&data, &models)?;
    for (i, (loss, j)) in report.per_point_loss.iter().zip(&report.per_point_argmin).enumerate() {
        println!("point {i}: y = {:5.2}, best line {j}, loss {loss:.4}", data.y(i));
    }
    println!("min-loss over both lines: {:.4}", report.total);

    let single = ModelSet::new(vec![vec![0.0]])?;
    println!("best single line through 0 would score {:.4}", min_loss(&data, &single)?);
    Ok(())
}
