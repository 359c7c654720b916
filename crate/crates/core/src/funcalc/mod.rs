//! Functional calculi of several Hermitian variables and the identification
//! between the tensor and the variant calculus.

mod calculus;
mod phi;
mod spec;

#[cfg(test)]
pub(crate) use calculus::mat_vec;
pub use calculus::{
    func_calc_tensor, func_calc_tensor_with, func_calc_variant, func_calc_variant_with, trace_form,
    TENSOR_DIM_CAP,
};
pub use phi::{
    conjugate_space_calculus, intertwine_check, phi_inverse, phi_map, tensor_expectation,
    TensorVector,
};
pub use spec::{CustomFunction, FunctionKind, FunctionSpec, FunctionSpecJson};

#[cfg(test)]
mod tests;
