pub mod dual_oracle;
pub mod tfidf_cases;
