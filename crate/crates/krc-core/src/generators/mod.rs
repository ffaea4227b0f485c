//! Instance generators: lower-bound gadgets and reductions, random graphs
//! and random clique-width expressions.

mod builder;
pub mod cnf;
pub mod gadgets;
pub mod mis;
pub mod random;
pub mod sat_td;
pub mod seth;

pub use cnf::Cnf;
pub use gadgets::{gadget_size, gen_assignment_gadget, gen_clique_gadget, gen_guard_gadget, GadgetHandle, GadgetKind};
pub use mis::{gen_mis_vc_instance, MisInstance, MisMode};
pub use random::{
    gen_random_cnf, gen_random_cw_expression, gen_random_instance, gen_random_tree, mark_random_irrelevant, seeded_rng,
};
pub use sat_td::{gen_sat_td_instance, SatTdInstance, SatTdMode};
pub use seth::{canonical_pairs, gen_seth_cw_instance, seth_witness_from_assignment, BlockIds, SethInstance};
