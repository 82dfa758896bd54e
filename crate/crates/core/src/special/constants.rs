//! Stored constants, 30 significant digits.
//!
//! `ζ′(−1) = 1/12 − log A` with `A` the Glaisher–Kinkelin constant, and
//! `ζ′(−2) = −ζ(3)/(4π²)`; the tests recheck both relations.

pub const ZETA3: f64 = 1.202_056_903_159_594_285_399_738_161_51;
pub const GLAISHER: f64 = 1.282_427_129_100_622_636_875_342_568_87;
pub const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_929_213_919_660_243;
pub const ZETA_PRIME_M2: f64 = -0.030_448_457_058_393_270_780_251_530_471_2;
pub const LOG_2PI: f64 = 1.837_877_066_409_345_483_560_659_472_81;
