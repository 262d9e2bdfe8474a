//! Homothety detection and the criteria built on it: `‖c‖³` constancy, the
//! flotation/illumination duality, equal affine cuts, affine spheres, the
//! Petty and Radon conditions, the intersection-body limit and carousels.

pub mod carousel;
pub mod criteria;
pub mod fit;
pub mod limits;

pub use carousel::{build_carousel, solve_carousel_delta, thm07_diagnostics, Carousel, Thm07Diagnostics};
pub use criteria::{
    affine_cut_length_report, check_thm1, duality_parameters, duality_pointwise_check, eq13_residual,
    intersection_body_polar, petty_condition_report, proper_affine_sphere_residual, radon_check, Eq13Residual,
    Thm1Report,
};
pub use fit::{fit_homothety, fit_points, ConstancyReport, HomothetyFit};
pub use limits::{hausdorff_distance, hausdorff_distance_polygons};
