//! Published partition tables, transcribed as-is.
#![allow(dead_code)]

/// (n, g(n)) for odd n in 9..=37.
pub const SMALL_COUNTS: [(u64, u64); 15] = [
    (9, 2),
    (11, 2),
    (13, 2),
    (15, 3),
    (17, 4),
    (19, 3),
    (21, 5),
    (23, 5),
    (25, 5),
    (27, 7),
    (29, 7),
    (31, 6),
    (33, 9),
    (35, 8),
    (37, 9),
];

/// (n, g(n)) for odd n in 1925..=1999.
pub const LARGE_COUNTS: [(u64, u64); 38] = [
    (1925, 2807),
    (1927, 3016),
    (1929, 2093),
    (1931, 3131),
    (1933, 3030),
    (1935, 2008),
    (1937, 3180),
    (1939, 2920),
    (1941, 2124),
    (1943, 3209),
    (1945, 2836),
    (1947, 2127),
    (1949, 3183),
    (1951, 3033),
    (1953, 2121),
    (1955, 2979),
    (1957, 3090),
    (1959, 2132),
    (1961, 3211),
    (1963, 3096),
    (1965, 2055),
    (1967, 3159),
    (1969, 3024),
    (1971, 2166),
    (1973, 3249),
    (1975, 2866),
    (1977, 2210),
    (1979, 3255),
    (1981, 3017),
    (1983, 2225),
    (1985, 3068),
    (1987, 3171),
    (1989, 2164),
    (1991, 3286),
    (1993, 3182),
    (1995, 2029),
    (1997, 3310),
    (1999, 3105),
];

/// Triangular triples for odd n in 9..=49.
pub const TRIANGULAR_LISTING: [(u64, &[[u64; 3]]); 21] = [
    (9, &[[3, 3, 3]]),
    (11, &[[3, 3, 5]]),
    (13, &[[3, 5, 5]]),
    (15, &[[3, 5, 7], [5, 5, 5]]),
    (17, &[[3, 7, 7], [5, 5, 7]]),
    (19, &[[5, 7, 7]]),
    (21, &[[7, 7, 7]]),
    (23, &[[5, 7, 11]]),
    (25, &[[3, 11, 11], [7, 7, 11]]),
    (27, &[[3, 11, 13], [5, 11, 11], [7, 7, 13]]),
    (29, &[[3, 13, 13], [5, 11, 13], [7, 11, 11]]),
    (31, &[[5, 13, 13], [7, 11, 13]]),
    (33, &[[7, 13, 13], [11, 11, 11]]),
    (35, &[[5, 13, 17], [7, 11, 17], [11, 11, 13]]),
    (37, &[[3, 17, 17], [7, 13, 17], [11, 13, 13]]),
    (39, &[[3, 17, 19], [5, 17, 17], [7, 13, 19], [11, 11, 17], [13, 13, 13]]),
    (41, &[[3, 19, 19], [5, 17, 19], [7, 17, 17], [11, 11, 19], [11, 13, 17]]),
    (43, &[[5, 19, 19], [7, 17, 19], [11, 13, 19], [13, 13, 17]]),
    (45, &[[7, 19, 19], [11, 17, 17], [13, 13, 19]]),
    (47, &[[5, 19, 23], [7, 17, 23], [11, 13, 23], [11, 17, 19], [13, 17, 17]]),
    (49, &[[3, 23, 23], [7, 19, 23], [11, 19, 19], [13, 13, 23], [13, 17, 19]]),
];

/// (n, t(n)) for odd n in 971..=999.
pub const TRIANGULAR_COUNTS: [(u64, u64); 15] = [
    (971, 232),
    (973, 210),
    (975, 158),
    (977, 244),
    (979, 228),
    (981, 161),
    (983, 251),
    (985, 218),
    (987, 170),
    (989, 260),
    (991, 220),
    (993, 167),
    (995, 233),
    (997, 231),
    (999, 176),
];

/// (n, t(n), binary code) for odd n in 9..=25.
pub const TRIANGULAR_CODES: [(u64, u64, i8); 9] = [
    (9, 1, 1),
    (11, 1, 1),
    (13, 1, 1),
    (15, 2, -1),
    (17, 2, -1),
    (19, 1, 1),
    (21, 1, 1),
    (23, 1, 1),
    (25, 2, -1),
];

/// Step-table strings of the 181 = 31 + 67 + 83 example with h(Ka) = 47,
/// h(Kb) = 99 at width 7.
pub const EXAMPLE_RESULTS: [(&str, &str); 7] = [
    ("Result1", "0010000"),
    ("Result2", "0100000"),
    ("Result3", "1101100"),
    ("Result4", "0010000"),
    ("Result5", "1111100"),
    ("Result6", "0110000"),
    ("Final Key", "1010011"),
];
