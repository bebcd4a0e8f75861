use std::path::PathBuf;
use std::sync::Arc;

use pondwatch_telemetry::{serve, Store, DATA_DIR_ENV};
use tokio::net::TcpListener;

use super::feed::feed_labels;
use crate::cli::ServeArgs;
use crate::config::FileConfig;
use crate::error::{io_context, CliError, Result};
use crate::output::Context;

pub const DEFAULT_BIND: &str = "127.0.0.1:3000";
pub const DEFAULT_DATA_DIR: &str = "pondwatch-data";
pub const DEFAULT_CHANNEL: &str = "Fish Farm Monitoring System";

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}

pub fn run(args: ServeArgs, cfg: &FileConfig, _ctx: &Context) -> Result<()> {
    let bind: String = cfg.or(args.bind, "bind")?.unwrap_or_else(|| DEFAULT_BIND.to_string());
    let data_dir: PathBuf = match cfg.or(args.data_dir, "data_dir")? {
        Some(d) => d,
        None => std::env::var_os(DATA_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR)),
    };
    let store = Store::open(&data_dir)
        .map_err(|e| CliError::Failed(format!("cannot open data dir {}: {e}", data_dir.display())))?;
    if store.channels().is_empty() {
        let name: String = cfg.or(args.channel_name, "channel_name")?.unwrap_or_else(|| DEFAULT_CHANNEL.to_string());
        let c = store.create_channel(&name, feed_labels())?;
        eprintln!("pondwatch: created channel {} with write key {}", c.channel_id, c.write_key);
    }
    let store = Arc::new(store);

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(io_context("starting runtime"))?;
    runtime.block_on(async move {
        let listener = TcpListener::bind(&bind).await.map_err(io_context(format!("binding {bind}")))?;
        let addr = listener.local_addr().map_err(io_context("reading bound address"))?;
        eprintln!("pondwatch: listening on http://{addr} (data in {})", data_dir.display());
        serve(listener, store, shutdown_signal()).await.map_err(io_context("serving"))?;
        eprintln!("pondwatch: shut down");
        Ok(())
    })
}
