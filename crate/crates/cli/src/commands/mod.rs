pub mod audit;
pub mod dump;
pub mod run;
pub mod table;
pub mod verify;
