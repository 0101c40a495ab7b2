pub mod characters;
pub mod error;
pub mod numkernel;
pub mod powerseries;
pub mod qfamily;
pub mod verify;
pub mod cli;
pub mod classical;
