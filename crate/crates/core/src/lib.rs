pub mod charops;
pub mod chartable;
pub mod cli;
pub mod cyclo;
pub mod gflin;
pub mod groupkit;
pub mod verify;
