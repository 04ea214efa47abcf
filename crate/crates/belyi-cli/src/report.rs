use belyi_core::{MinusOneReport, NewtonPolygon, ValuationProfile};
use serde::{Deserialize, Serialize};

/// Everything the newton subcommand prints: the polygon and valuation
/// profile at the chosen prime, plus the comparison against B - 1 when
/// requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub prime: u64,
    pub polygon: NewtonPolygon,
    pub profile: ValuationProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_one: Option<MinusOneReport>,
}
