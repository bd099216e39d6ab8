//! Rate regions: representation, point rules, search and constructions.

pub mod aux;
pub mod bsbc;
pub mod eval;
pub mod rate;
pub mod theorem3;

pub use aux::{example1_aux, example1_alphas, AuxCoding, AuxMeasures, AuxParams, InputPmf};
pub use bsbc::{eval_bsbc_example, example_bounds, gain_curve, half_grid, ExampleBounds, GainCurve};
pub use eval::{
    cor1_point, enh_point, eval_corollary1, eval_enh, eval_enh_aux, eval_nofb, eval_nofb_aux, eval_thm1, eval_thm2,
    nofb_point, sample_aux, search_corollary1, search_thm1, search_thm2, thm1_point, thm2_points, SearchConfig,
    Thm2Bounds,
};
pub use rate::{frontier, includes, max_vertical_gain, RatePoint, RateRegion};
pub use theorem3::{find_dominating_enh, mixture_aux, theorem3_construct, Theorem3Result};
