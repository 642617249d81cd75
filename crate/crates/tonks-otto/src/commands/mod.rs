pub mod adiabatic;
pub mod dynamics;
pub mod oracle;
pub mod spectrum;
pub mod sta;
