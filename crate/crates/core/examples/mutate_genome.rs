//! Mutate a genome repeatedly and report how many genes change each time.

use lenia_evolab::genome::random_genome;

fn main() -> lenia_evolab::Result<()> {
    let parent = random_genome(3);
    let mut total = 0;
    for i in 0..10u64 {
        let child = parent.mutate(0.02, i)?;
        let changed: Vec<(usize, f64, f64)> = parent
            .genes()
            .iter()
            .zip(child.genes())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(k, (a, b))| (k, *a, *b))
            .collect();
        total += changed.len();
        let shown: Vec<String> = changed.iter().map(|(k, a, b)| format!("{k}:{a:.3}->{b:.3}")).collect();
        println!("mutation {i}: {} changed  {}", changed.len(), shown.join(" "));
    }
    println!("mean {:.2} (expected about 5.1 of 256 at rate 0.02)", total as f64 / 10.0);
    Ok(())
}
