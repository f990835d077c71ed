use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use fca_service::{router, Store};

#[derive(Parser)]
#[command(name = "fca-service", version, about = "Attribute exploration HTTP service")]
struct Args {
    /// Address to bind.
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    bind: IpAddr,
    /// Port; falls back to the FCA_PORT environment variable, then 8080.
    #[arg(long, env = "FCA_PORT", default_value_t = 8080)]
    port: u16,
    /// Append-only session journal, replayed on start.
    #[arg(long)]
    journal: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let store = match &args.journal {
        Some(p) => Store::open(p)?,
        None => Store::in_memory(),
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
