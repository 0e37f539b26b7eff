//! Links bilingual-dictionary noun entries to synsets of a WordNet-style
//! taxonomy.
//!
//! Two complementary routes are implemented:
//!
//! * an entry-level pipeline that disambiguates each dictionary subentry on
//!   its own information (monosemous translations, multiple translations,
//!   cue words), scoring candidate senses by subtree semantic density;
//! * a structural merge of a two-direction bilingual dictionary that attaches
//!   source-language nouns to synsets through four precision-ranked cases.
//!
//! Both routes produce sense links (`source lemma -> synset`) plus coverage
//! and ratio statistics. The `lexlink` binary exposes them as batch commands.

pub mod bidict;
pub mod density;
pub mod linker;
pub mod normalizer;
pub mod render;
pub mod taxonomy;

pub use taxonomy::{SynsetId, TaxonomyIndex};
