//! Reference cycle lengths for the all-right run from the origin heading +x.

/// The published table of the first 180 cycle lengths, row by row.
pub const REFERENCE_LENGTHS: [u32; 180] = [
    6, 18, 6, 42, 6, 18, 6, 6, 66, 6, 18, 14, 10, 30, 30, //
    10, 14, 18, 6, 78, 6, 6, 18, 6, 78, 22, 10, 22, 18, 54, //
    18, 6, 42, 22, 122, 30, 30, 10, 14, 18, 6, 18, 6, 6, 18, //
    6, 18, 14, 10, 126, 30, 34, 14, 42, 6, 114, 6, 6, 18, 6, //
    90, 38, 10, 22, 18, 134, 110, 6, 6, 14, 130, 6, 10, 54, 38, //
    22, 6, 158, 6, 6, 34, 6, 74, 6, 42, 6, 6, 150, 6, 34, //
    46, 38, 10, 38, 18, 6, 298, 6, 6, 42, 6, 114, 62, 126, 22, //
    22, 22, 174, 6, 22, 6, 6, 18, 6, 58, 6, 18, 6, 6, 18, //
    6, 82, 22, 10, 22, 18, 118, 54, 6, 6, 14, 38, 6, 6, 210, //
    54, 170, 30, 202, 30, 6, 6, 38, 226, 6, 266, 22, 18, 6, 130, //
    22, 6, 6, 14, 26, 6, 18, 30, 126, 6, 6, 14, 38, 6, 6, //
    218, 54, 230, 30, 14, 10, 6, 38, 6, 6, 34, 6, 170, 6, 42, //
];

/// First `n` cycle lengths of the all-right rotator run from the origin
/// heading +x.
pub fn all_right_lengths(n: usize, step_budget: usize) -> crate::Result<alloc::vec::Vec<usize>> {
    use crate::blocking::recurrence_probe;
    use crate::config::Configuration;
    use crate::dynamics::InitialCondition;

    let r = recurrence_probe(
        InitialCondition::default(),
        &Configuration::all_right(),
        n,
        step_budget,
    );
    if !r.found(n) {
        return Err(crate::Error::Budget {
            what: "all-right cycle replay",
            limit: step_budget as u64,
        });
    }
    let mut prev = 0;
    Ok(r.return_times
        .iter()
        .map(|&t| {
            let l = t - prev;
            prev = t;
            l
        })
        .collect())
}
