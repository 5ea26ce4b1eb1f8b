use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::rule::ratio_from_rel_diff;
use crate::{Error, Result, Scalar};

/// Chronological sequence of positive prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePath<S> {
    prices: Vec<S>,
    meta: String,
}

impl<S: Scalar> PricePath<S> {
    pub fn new(prices: Vec<S>, meta: impl Into<String>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::Empty("price path"));
        }
        for &p in &prices {
            Error::ensure(
                p > S::zero() && p.is_finite(),
                "price",
                p,
                "finite price > 0",
            )?;
        }
        Ok(Self {
            prices,
            meta: meta.into(),
        })
    }

    pub fn prices(&self) -> &[S] {
        &self.prices
    }

    pub fn start(&self) -> S {
        self.prices[0]
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Free-text description of where the path came from.
    pub fn meta(&self) -> &str {
        &self.meta
    }
}

/// Alternates `p0, p1, p0, p1, ...` for `n_legs` moves, where `p1` sits
/// `pct_dp` above `p0` in relative-difference terms.
pub fn gen_zigzag<S: Scalar>(p0: S, pct_dp: S, n_legs: usize) -> Result<PricePath<S>> {
    Error::ensure(p0 > S::zero() && p0.is_finite(), "p0", p0, "finite p0 > 0")?;
    Error::ensure(
        pct_dp > S::zero() && pct_dp < S::two(),
        "pct_dp",
        pct_dp,
        "0 < pct_dp < 2",
    )?;
    if n_legs == 0 {
        return Err(Error::domain("n_legs", S::zero(), "n_legs >= 1"));
    }
    let p1 = p0 * ratio_from_rel_diff(pct_dp)?;
    let prices = (0..=n_legs)
        .map(|i| if i % 2 == 0 { p0 } else { p1 })
        .collect();
    PricePath::new(
        prices,
        format!("zigzag p0={p0} pct_dp={pct_dp} legs={n_legs}"),
    )
}

/// Geometric Brownian motion with per-step drift `mu` and volatility `sigma`:
/// `p[k+1] = p[k] * exp(mu - sigma^2 / 2 + sigma * z[k])`.
///
/// The normals come from a ChaCha8 stream seeded with `seed`, so a given seed
/// always reproduces the same path. Returns `n + 1` prices.
pub fn gen_gbm<S: Scalar>(p0: S, mu: S, sigma: S, n: usize, seed: u64) -> Result<PricePath<S>> {
    Error::ensure(p0 > S::zero() && p0.is_finite(), "p0", p0, "finite p0 > 0")?;
    Error::ensure(mu.is_finite(), "mu", mu, "finite drift")?;
    Error::ensure(
        sigma >= S::zero() && sigma.is_finite(),
        "sigma",
        sigma,
        "finite sigma >= 0",
    )?;
    if n == 0 {
        return Err(Error::domain("n", S::zero(), "n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drift = mu - sigma * sigma / S::two();
    let mut prices = Vec::with_capacity(n + 1);
    let mut p = p0;
    prices.push(p);
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        p = p * (drift + sigma * S::lit(z)).exp();
        prices.push(p);
    }
    PricePath::new(
        prices,
        format!("gbm p0={p0} mu={mu} sigma={sigma} n={n} seed={seed}"),
    )
}

/// Reads a single-column `price` CSV in file order.
pub fn load_path_csv<S: Scalar, R: Read>(source: R) -> Result<PricePath<S>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(Error::Empty("price file"));
    }
    if headers.len() != 1 || &headers[0] != "price" {
        return Err(Error::Parse {
            line: 1,
            message: "expected header `price`".into(),
        });
    }
    let mut prices = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = &record[0];
        let price: f64 = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{field}` is not a number"),
        })?;
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::Parse {
                line,
                message: format!("price {field} must be positive and finite"),
            });
        }
        prices.push(S::lit(price));
    }
    if prices.is_empty() {
        return Err(Error::Empty("price path"));
    }
    PricePath::new(prices, "csv")
}
