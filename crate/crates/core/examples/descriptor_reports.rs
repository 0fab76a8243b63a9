//! Generates the bundled descriptors and prints their verdict summaries, as
//! the `monodromy` binary does.

use monodromy::cli::format::DescriptorFile;
use monodromy::cli::{build_report, generate_example, ExampleName, Questions};

fn main() -> monodromy::Result<()> {
    let corpus = [(ExampleName::INn, 6, 1, 1), (ExampleName::GoodReduction, 3, 1, 1), (ExampleName::TwoComponents, 3, 2, 3)];
    for (name, n, g, s) in corpus {
        let text = generate_example(name, n, g, s)?.to_json();
        let file = DescriptorFile::parse(&text)?;
        let report = build_report(text.as_bytes(), &file, &Questions { ell: Some(3), ..Default::default() })?;
        print!("{}", report.to_text());
        println!();
    }
    Ok(())
}
