//! Circuit synthesis for Szegedy walks.

mod families;
mod framework;
mod prep;
mod shift;
mod verify;
mod walk_spec;

pub use families::{
    bipartite_segments, circulant_diagonalizer, crown_diagonalizer, directed8_segments,
    k2_diagonalizer, partitioned_diagonalizer, synth_bipartite, synth_circulant, synth_crown,
    synth_directed8, synth_k2, synth_wheel, synth_win_cycles, wheel_chain, wheel_segments,
    win_segments, CirculantColumn,
};
pub use framework::{
    assemble, assemble_partitioned, partitioned_segments, register_swap, segments_diagonalizer,
    synth_partitioned, synth_single_reference, synth_tensor, Diagonalizer, Partition, Segment,
    PRECONDITION_TOL,
};
pub use prep::{
    kb_complete, kb_complete_angles, kb_complete_with_angles, kb_cycle, state_prep, Preparation,
    NORM_TOL,
};
pub use shift::{controlled_shift_transform, shift_circuit, Direction};
pub use verify::{verify, verify_with_tolerance, VerifyReport, DEFAULT_TOLERANCE};
pub use walk_spec::{WalkSpec, DEFAULT_ALPHA};
