pub mod evaluate;
pub mod export;
pub mod feed;
pub mod serve;
pub mod simulate;
pub mod verdict;
