use clap::Parser;
use qtoeplitz_cli::commands::{
    cmd_apply, cmd_embed, cmd_info, cmd_laplacian, cmd_solve_circulant, ApplyArgs, EmbedArgs,
    InfoArgs, LaplacianArgs, SolveArgs,
};

#[derive(Parser)]
#[command(
    name = "qtoeplitz",
    version,
    about = "Apply sparse and frequency-sparse Toeplitz, Hankel and circulant matrices \
             through a simulated quantum pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Apply a structured matrix to a vector, exactly or with shot sampling.
    Apply(ApplyArgs),
    /// Solve C x = b for a non-singular circulant C.
    SolveCirculant(SolveArgs),
    /// Acceleration -(1/h^2) L2 u of a displacement vector u.
    Laplacian(LaplacianArgs),
    /// Sparsity, spectrum and circuit-resource summary of a matrix file.
    Info(InfoArgs),
    /// Dump the dense circulant embedding, unitary dilation, or Hermitian embedding.
    Embed(EmbedArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Apply(args) => cmd_apply(args),
        Command::SolveCirculant(args) => cmd_solve_circulant(args),
        Command::Laplacian(args) => cmd_laplacian(args),
        Command::Info(args) => cmd_info(args),
        Command::Embed(args) => cmd_embed(args),
    };
    match outcome {
        Ok(report) => print!("{report}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
