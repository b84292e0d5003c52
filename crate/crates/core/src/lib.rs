pub mod fresh;
pub mod syntax;
pub mod types;
pub mod reduction;
pub mod typing;
pub mod unify;
pub mod target;
pub mod search;
pub mod spectrum;
pub mod cps;
pub mod secondorder;
pub mod verify;
