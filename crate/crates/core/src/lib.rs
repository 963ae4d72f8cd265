pub mod criteria;
pub mod diagram;
pub mod homcount;
pub mod ksinv;
pub mod permgroup;
pub mod presentation;
