use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{annualize, BacktestReport};
use crate::rule::rel_diff;
use crate::{Result, Scalar};

/// Wire form of a [`BacktestReport`].
///
/// Numbers are written by `serde_json` in shortest round-trip form, so every
/// value parses back to the identical `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub initial_utility: f64,
    pub final_utility: f64,
    pub growth_ratio_total: f64,
    pub trade_count: usize,
    pub trades: Vec<TradeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annualization: Option<Annualization>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeJson {
    /// Path index of the executing tick.
    pub index: usize,
    pub exec_price: f64,
    pub delta_q: f64,
    pub delta_m: f64,
    pub fee_paid: f64,
    pub utility_after: f64,
}

/// Compounded yearly rate derived from the mean per-trade growth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annualization {
    pub trades_per_year: u32,
    pub per_trade_pct_du: f64,
    pub annual_rate: f64,
    /// Spells out the assumption that trades arrive at exactly
    /// `trades_per_year` evenly compounded events.
    pub convention: String,
}

impl<S: Scalar> BacktestReport<S> {
    pub fn to_json(&self) -> ReportJson {
        let trades = self
            .trades
            .iter()
            .zip(&self.trade_ticks)
            .zip(&self.utility_series)
            .map(|((t, &index), &u)| TradeJson {
                index,
                exec_price: t.exec_price.as_f64(),
                delta_q: t.delta_q.as_f64(),
                delta_m: t.delta_m.as_f64(),
                fee_paid: t.fee_paid.as_f64(),
                utility_after: u.as_f64(),
            })
            .collect();
        ReportJson {
            initial_utility: self.initial_utility.as_f64(),
            final_utility: self.final_utility.as_f64(),
            growth_ratio_total: self.growth_ratio_total.as_f64(),
            trade_count: self.trade_count,
            trades,
            path: None,
            annualization: None,
        }
    }

    /// Annual rate if the report's mean per-trade growth repeated
    /// `trades_per_year` times a year.
    pub fn annualization(&self, trades_per_year: u32) -> Result<Annualization> {
        let per_trade_pct_du = rel_diff(S::one(), self.mean_trade_ratio())?;
        let annual_rate = annualize(per_trade_pct_du, trades_per_year)?;
        Ok(Annualization {
            trades_per_year,
            per_trade_pct_du: per_trade_pct_du.as_f64(),
            annual_rate: annual_rate.as_f64(),
            convention: format!(
                "compounded per trade, exactly {trades_per_year} evenly spaced trades per year"
            ),
        })
    }
}

impl ReportJson {
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(std::io::Error::from)?;
        Ok(())
    }
}
