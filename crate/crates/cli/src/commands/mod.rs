pub mod bayes;
pub mod bootstrap;
pub mod knapsack;
pub mod pi;
