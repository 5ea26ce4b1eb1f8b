//! Price paths and the threshold-triggered rebalancing backtest.

mod backtest;
mod path;
mod report;

pub use backtest::{
    annualize, run_backtest, threshold_scan, BacktestReport, ScanRow, TriggerPolicy, SCAN_WEALTH,
};
pub use path::{gen_gbm, gen_zigzag, load_path_csv, PricePath};
pub use report::{Annualization, ReportJson, TradeJson};
