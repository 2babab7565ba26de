use clap::Parser;

fn main() -> anyhow::Result<()> {
    qldpc_cli::run(qldpc_cli::Cli::parse())
}
