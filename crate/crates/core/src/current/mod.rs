//! Current algebra `𝔤[t]`: Chevalley data, Weyl modules and contravariant forms.

pub mod chevalley;
pub mod module;
pub mod shapovalov;

pub use chevalley::{ChevalleyData, LieVec};
pub use module::{
    freeness_check, local_from_global_check, lowering_words, tensor_character, weyl_graded_char, weyl_vector,
    weyl_vectors_span, Character, CurrentGen, CurrentModule, LoweringWord, ModVec, ModuleKind, Mono, Stabilization,
    TensorModule, TensorVec,
};
pub use shapovalov::{
    is_positive_semidefinite, shapovalov_pair, simple_character, simple_weight_dim, stendhal_vector, words_of_content,
    ShapovalovForm,
};
