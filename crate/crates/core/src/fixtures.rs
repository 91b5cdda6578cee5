//! Worked arrays with known parameters, used as golden references.

use crate::array::{parse_rows, CodedArray};

/// The 4-regular `(3,4,4,1,3)` MAPDA.
pub fn example_one() -> CodedArray {
    parse_rows(&["* 1 2 3", "1 * 3 2", "2 3 * 1", "3 2 1 *"])
}

/// The 3-regular `(4,6,3,4)` MN PDA with rows in lexicographic subset order.
pub fn mn_pda_4_2() -> CodedArray {
    parse_rows(&[
        "* * 1 2", //
        "* 1 * 3", "* 2 3 *", "1 * * 4", "2 * 4 *", "3 4 * *",
    ])
}

/// `U`: every row of [`mn_pda_4_2`] with its integers right-shifted once.
pub fn lift_u() -> CodedArray {
    parse_rows(&[
        "* * 2 1", //
        "* 3 * 1", "* 3 2 *", "4 * * 1", "4 * 2 *", "4 3 * *",
    ])
}

/// `U0`: two horizontal copies of [`lift_u`].
pub fn lift_u0() -> CodedArray {
    parse_rows(&[
        "* * 2 1 * * 2 1",
        "* 3 * 1 * 3 * 1",
        "* 3 2 * * 3 2 *",
        "4 * * 1 4 * * 1",
        "4 * 2 * 4 * 2 *",
        "4 3 * * 4 3 * *",
    ])
}

/// `P2` for `m = 2`, `L = 3` on [`mn_pda_4_2`].
pub fn lift_p2() -> CodedArray {
    parse_rows(&[
        "* * 2 1 * * 6 5",
        "* 3 * 9 * 7 * 13",
        "* 11 10 * * 15 14 *",
        "4 * * 17 8 * * 21",
        "12 * 18 * 16 * 22 *",
        "20 19 * * 24 23 * *",
    ])
}

/// `P^(1)` of the lifted `(3,8,42,21,24)` array.
pub fn lifted_subarray_of_one() -> CodedArray {
    parse_rows(&[
        "* * 1 2 * * 1",
        "* 1 * 3 * 1 *",
        "1 * * 4 1 * *",
        "* * 2 1 * * 6",
    ])
}

/// The cyclic Latin square of order 5.
pub fn latin_square_5() -> CodedArray {
    parse_rows(&[
        "1 2 3 4 5",
        "2 3 4 5 1",
        "3 4 5 1 2",
        "4 5 1 2 3",
        "5 1 2 3 4",
    ])
}

/// Order-5 Latin square with 3, 4 and 5 starred, rows permuted to show the
/// cyclic placement.
pub fn latin_mapda_5_2_display() -> CodedArray {
    parse_rows(&[
        "1 2 * * *",
        "* 1 2 * *",
        "* * 1 2 *",
        "* * * 1 2",
        "2 * * * 1",
    ])
}
