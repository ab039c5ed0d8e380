//! Generate a small rollout dataset, train the 4096-36-4096 autoencoder on it
//! and save the model.
//!
//! cargo run --release --example train_autoencoder -- [frames] [epochs] [model path]

use lenia_evolab::autoencoder::{generate_dataset, history_csv, train, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let frames = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let epochs = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let path = args.next().unwrap_or_else(|| "toy.aev1".into());

    let dataset = generate_dataset(frames, 0)?;
    let cfg = TrainConfig { epochs, ..Default::default() };
    let (model, history) = train(&dataset, &cfg)?;
    for e in history.iter().filter(|e| e.epoch % 10 == 0 || e.epoch == 1) {
        println!("epoch {:>4}  train {:.6}  test {:.6}", e.epoch, e.train_loss, e.test_loss.unwrap_or(f64::NAN));
    }
    model.save(path.as_ref())?;
    std::fs::write(format!("{path}.history.csv"), history_csv(&history))?;
    println!("saved {path}");
    Ok(())
}
