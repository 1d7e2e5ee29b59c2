use super::CustomerGroup;
use crate::stats::ContingencyTable;

/// Purchases of samples S1–S8 (rows) by the eight customer groups (columns,
/// male teen/young/adult/senior then female teen/young/adult/senior).
pub const TABLE2_COUNTS: [[u64; 8]; 8] = [
    [35, 1, 1, 1, 3, 1, 1, 1],
    [6, 25, 1, 1, 3, 14, 1, 1],
    [1, 1, 6, 0, 1, 1, 2, 0],
    [1, 0, 1, 9, 1, 0, 1, 3],
    [3, 1, 1, 0, 55, 1, 4, 0],
    [2, 7, 1, 2, 13, 29, 4, 2],
    [1, 0, 0, 0, 1, 1, 40, 0],
    [1, 1, 1, 3, 1, 0, 2, 7],
];

/// The 308-purchase evaluation table.
pub fn table2() -> ContingencyTable {
    ContingencyTable::new(
        TABLE2_COUNTS.iter().map(|r| r.to_vec()).collect(),
        (1..=8).map(|k| format!("S{k}")).collect(),
        CustomerGroup::all().iter().map(|g| g.code()).collect(),
    )
    .expect("fixture is rectangular")
}
