pub mod error;
pub mod fock;
pub mod special;
pub mod states;
pub mod quasi;
pub mod amplifier;
pub mod oracle;
pub mod verify;
