pub mod ballgraphs;
pub mod balls;
pub mod concat;
pub mod cover;
pub mod eig;
pub mod induction;
pub mod synthesis;
pub mod words;
