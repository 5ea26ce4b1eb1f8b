//! Aggregated order-book snapshots and a local depth-slope estimate.

use std::io::Read;

use serde::Deserialize;

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bid,
    Ask,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level<S> {
    pub price: S,
    pub quantity: S,
}

/// Price levels aggregated per price. Bids best (highest) first, asks best
/// (lowest) first. Either side may be empty; when both are present the book
/// is not crossed.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderBookSnapshot<S> {
    bids: Vec<Level<S>>,
    asks: Vec<Level<S>>,
}

impl<S: Scalar> OrderBookSnapshot<S> {
    /// Builds a snapshot from already ordered sides.
    pub fn new(bids: Vec<Level<S>>, asks: Vec<Level<S>>) -> Result<Self> {
        for level in bids.iter().chain(&asks) {
            check_level(level)?;
        }
        if bids.windows(2).any(|w| w[1].price >= w[0].price) {
            return Err(Error::InvalidBook(
                "bid prices must strictly decrease".into(),
            ));
        }
        if asks.windows(2).any(|w| w[1].price <= w[0].price) {
            return Err(Error::InvalidBook(
                "ask prices must strictly increase".into(),
            ));
        }
        if let (Some(bid), Some(ask)) = (bids.first(), asks.first()) {
            if bid.price >= ask.price {
                return Err(Error::InvalidBook(format!(
                    "crossed book: best bid {} >= best ask {}",
                    bid.price, ask.price
                )));
            }
        }
        Ok(Self { bids, asks })
    }

    /// Builds a snapshot from unordered side-tagged levels, summing
    /// quantities that share a price.
    pub fn from_levels(levels: impl IntoIterator<Item = (Side, Level<S>)>) -> Result<Self> {
        let mut bids: Vec<Level<S>> = Vec::new();
        let mut asks: Vec<Level<S>> = Vec::new();
        for (side, level) in levels {
            check_level(&level)?;
            match side {
                Side::Bid => bids.push(level),
                Side::Ask => asks.push(level),
            }
        }
        let aggregate = |mut side: Vec<Level<S>>, descending: bool| {
            side.sort_by(|a, b| {
                let ord = a.price.partial_cmp(&b.price).expect("prices are finite");
                if descending {
                    ord.reverse()
                } else {
                    ord
                }
            });
            let mut out: Vec<Level<S>> = Vec::with_capacity(side.len());
            for level in side {
                match out.last_mut() {
                    Some(last) if last.price == level.price => {
                        last.quantity = last.quantity + level.quantity;
                    }
                    _ => out.push(level),
                }
            }
            out
        };
        Self::new(aggregate(bids, true), aggregate(asks, false))
    }

    pub fn bids(&self) -> &[Level<S>] {
        &self.bids
    }

    pub fn asks(&self) -> &[Level<S>] {
        &self.asks
    }

    pub fn best_bid(&self) -> Option<S> {
        self.bids.first().map(|l| l.price)
    }

    pub fn best_ask(&self) -> Option<S> {
        self.asks.first().map(|l| l.price)
    }
}

fn check_level<S: Scalar>(level: &Level<S>) -> Result<()> {
    Error::ensure(
        level.price > S::zero() && level.price.is_finite(),
        "level price",
        level.price,
        "finite price > 0",
    )?;
    Error::ensure(
        level.quantity > S::zero() && level.quantity.is_finite(),
        "level quantity",
        level.quantity,
        "finite quantity > 0",
    )?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct BookRow {
    side: Side,
    price: f64,
    quantity: f64,
}

/// Reads a `side,price,quantity` CSV. Sides may be interleaved.
pub fn read_book_csv<S: Scalar, R: Read>(source: R) -> Result<OrderBookSnapshot<S>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["side", "price", "quantity"] {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `side,price,quantity`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut levels = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let row: BookRow = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        let level = Level {
            price: S::lit(row.price),
            quantity: S::lit(row.quantity),
        };
        check_level(&level).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        levels.push((row.side, level));
    }
    OrderBookSnapshot::from_levels(levels)
}

/// Local depth around the mid price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthEstimate<S> {
    pub mid: S,
    /// Bid quantity within the window, per unit of price.
    pub bid_slope: S,
    /// Ask quantity within the window, per unit of price.
    pub ask_slope: S,
    /// Mean of the two sides, an estimate of `|dq/dp|` near the mid.
    pub slope: S,
}

/// Two-sided secant estimate of `|dq/dp|`.
///
/// Each side contributes the cumulative quantity resting within `window` of
/// the mid price, divided by `window`. Both sides must have at least one level
/// inside the window.
pub fn estimate_depth_slope<S: Scalar>(
    book: &OrderBookSnapshot<S>,
    window: S,
) -> Result<DepthEstimate<S>> {
    Error::ensure(
        window > S::zero() && window.is_finite(),
        "window",
        window,
        "finite window > 0",
    )?;
    let insufficient = |side| Error::InsufficientDepth {
        side,
        window: window.as_f64(),
    };
    let best_bid = book.best_bid().ok_or_else(|| insufficient("bid"))?;
    let best_ask = book.best_ask().ok_or_else(|| insufficient("ask"))?;
    let mid = (best_bid + best_ask) / S::two();

    let cumulative = |levels: &[Level<S>]| {
        levels
            .iter()
            .take_while(|l| (l.price - mid).abs() <= window)
            .fold(S::zero(), |acc, l| acc + l.quantity)
    };
    let bid_qty = cumulative(book.bids());
    let ask_qty = cumulative(book.asks());
    if bid_qty == S::zero() {
        return Err(insufficient("bid"));
    }
    if ask_qty == S::zero() {
        return Err(insufficient("ask"));
    }
    let bid_slope = bid_qty / window;
    let ask_slope = ask_qty / window;
    Ok(DepthEstimate {
        mid,
        bid_slope,
        ask_slope,
        slope: (bid_slope + ask_slope) / S::two(),
    })
}

/// Mid price, depth and the equivalent equal-weight budget in one step.
pub fn depth_budget<S: Scalar>(
    book: &OrderBookSnapshot<S>,
    window: S,
) -> Result<(DepthEstimate<S>, S)> {
    let est = estimate_depth_slope(book, window)?;
    let budget = crate::curves::budget_from_depth(est.mid, est.slope)?;
    Ok((est, budget))
}
