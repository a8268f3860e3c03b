//! Storage cost of anchoring data on an Ethereum-like chain.
//!
//! Storage is charged per 32-byte word. Ether and dollar amounts are exact
//! decimals; gas and wei are integers.

use crate::decimal::Decimal;

/// Wei per ether is 10^18.
const WEI_DECIMALS: u32 = 18;
const WEI_PER_GWEI: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct CostModel {
    pub gas_per_word: u128,
    pub word_bytes: u64,
    pub gas_price_wei: u128,
    /// No default: the exchange rate is not a property of the chain.
    pub usd_per_eth: Option<Decimal>,
}

impl Default for CostModel {
    fn default() -> Self {
        Self { gas_per_word: 20_000, word_bytes: 32, gas_price_wei: 20 * WEI_PER_GWEI, usd_per_eth: None }
    }
}

impl CostModel {
    /// A gas price given in gwei, possibly fractional.
    pub fn with_gas_price_gwei(mut self, gwei: &Decimal) -> Result<Self, CostError> {
        let wei = gwei.shift_left(9);
        self.gas_price_wei = wei.to_u128().filter(|_| wei.is_integer()).ok_or(CostError::InvalidModel("gas price must be a whole number of wei"))?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CostError> {
        if self.gas_per_word == 0 {
            return Err(CostError::InvalidModel("gas per word must be positive"));
        }
        if self.word_bytes == 0 {
            return Err(CostError::InvalidModel("word size must be positive"));
        }
        if self.gas_price_wei == 0 {
            return Err(CostError::InvalidModel("gas price must be positive"));
        }
        if self.usd_per_eth.as_ref().is_some_and(|r| !r.is_positive()) {
            return Err(CostError::InvalidModel("usd per eth must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct CostEstimate {
    pub bytes: u64,
    pub words: u64,
    pub gas: u128,
    pub wei: u128,
    pub eth: Decimal,
    pub usd: Option<Decimal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CostError {
    #[error("invalid cost model: {0}")]
    InvalidModel(&'static str),
    #[error("cost exceeds the representable range")]
    Overflow,
}

pub fn estimate_storage_cost(n_bytes: u64, m: &CostModel) -> Result<CostEstimate, CostError> {
    m.validate()?;
    let words = n_bytes.div_ceil(m.word_bytes);
    let gas = (words as u128).checked_mul(m.gas_per_word).ok_or(CostError::Overflow)?;
    let wei = gas.checked_mul(m.gas_price_wei).ok_or(CostError::Overflow)?;
    let eth = Decimal::from(wei).shift_right(WEI_DECIMALS);
    let usd = m.usd_per_eth.as_ref().map(|rate| eth.mul(rate));
    Ok(CostEstimate { bytes: n_bytes, words, gas, wei, eth, usd })
}
