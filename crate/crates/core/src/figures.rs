//! Reference chains: five two-state graphs covering every regime, a
//! four-state graph with two components on one path, and small building
//! blocks. The same chains ship as JSON under `chains/`.

use crate::chain::ChainSpec;

fn build(rows: Vec<Vec<f64>>, initial: Vec<f64>) -> ChainSpec {
    ChainSpec::new(rows, initial, None).expect("reference chain dimensions")
}

/// Acyclic: arcs 1→2, 1→0, 2→0.
pub fn acyclic() -> ChainSpec {
    build(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![1.0, 0.0, 0.0],
        ],
        vec![0.5, 0.5],
    )
}

/// Loop at 1 plus the 2-cycle 1⇄2, absorption from 2. Power regime.
pub fn shared_vertex() -> ChainSpec {
    build(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.5, 0.0],
        ],
        vec![0.5, 0.5],
    )
}

/// Loops at 1 and 2 on one path 1→2→0. Intermediate regime.
pub fn loops_in_series() -> ChainSpec {
    build(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
        ],
        vec![0.5, 0.5],
    )
}

/// Two independent loops. Exponential regime.
pub fn parallel_loops() -> ChainSpec {
    build(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.0],
            vec![0.5, 0.0, 0.5],
        ],
        vec![0.5, 0.5],
    )
}

/// The 2-cycle 1⇄2 with absorption from both states. Exponential regime.
pub fn two_cycle() -> ChainSpec {
    build(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ],
        vec![0.5, 0.5],
    )
}

/// Two complete 2-vertex components H1 = {1,2} and H2 = {3,4} on one path,
/// every transition 1/3.
pub fn coupled_pairs() -> ChainSpec {
    let t = 1.0 / 3.0;
    build(
        vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, t, t, t, 0.0],
            vec![0.0, t, t, 0.0, t],
            vec![t, 0.0, 0.0, t, t],
            vec![t, 0.0, 0.0, t, t],
        ],
        vec![0.5, 0.5, 0.0, 0.0],
    )
}

/// One transient state with a self-loop of probability 1/2.
pub fn loop_chain() -> ChainSpec {
    build(vec![vec![1.0, 0.0], vec![0.5, 0.5]], vec![1.0])
}

/// One transient state absorbed with probability 1.
pub fn single_state() -> ChainSpec {
    build(vec![vec![1.0, 0.0], vec![1.0, 0.0]], vec![1.0])
}

/// Every bundled chain with the file stem it ships under.
pub fn bundled() -> Vec<(&'static str, ChainSpec)> {
    vec![
        ("acyclic", acyclic()),
        ("shared_vertex", shared_vertex()),
        ("loops_in_series", loops_in_series()),
        ("parallel_loops", parallel_loops()),
        ("two_cycle", two_cycle()),
        (
            "two_cycle_one_entry",
            two_cycle()
                .with_initial(vec![1.0, 0.0])
                .expect("two states"),
        ),
        ("coupled_pairs", coupled_pairs()),
    ]
}
