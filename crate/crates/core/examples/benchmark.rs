//! Runs the `bench` command on a generated two-line dataset through the
//! same entry point as the `mixlr` binary.

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join(format!("mixlr-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let data = dir.join("two_lines.csv").display().to_string();

    let run = |args: &str| mixlr::cli::run(std::iter::once("mixlr").chain(args.split_whitespace()));
    run(&format!("gen mixture --k 2 --d 2 --n 1000 --noise 1 --bias 20,0 --seed 4 -o {data}"))?;
    print!("{}", run(&format!("bench --data {data} --repeats 5 --A 60 --h 300"))?);

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
