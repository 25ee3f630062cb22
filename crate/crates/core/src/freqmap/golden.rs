//! Reference frequencies for the printable ASCII alphabet, two decimals,
//! as published alongside the mapping. The generated table is checked
//! against these rows rather than against itself.

/// `(ascii_code, frequency_hz)` for every code in 32..=126.
pub const GOLDEN_FREQUENCIES: [(u8, f64); 95] = [
    (32, 220.00),
    (33, 233.08),
    (34, 246.94),
    (35, 261.63),
    (36, 277.18),
    (37, 293.66),
    (38, 311.13),
    (39, 329.63),
    (40, 349.23),
    (41, 369.99),
    (42, 392.00),
    (43, 415.30),
    (44, 440.00),
    (45, 466.16),
    (46, 493.88),
    (47, 523.25),
    (48, 554.37),
    (49, 587.33),
    (50, 622.25),
    (51, 659.26),
    (52, 698.46),
    (53, 739.99),
    (54, 783.99),
    (55, 830.61),
    (56, 880.00),
    (57, 932.33),
    (58, 987.77),
    (59, 1046.50),
    (60, 1108.73),
    (61, 1174.66),
    (62, 1244.51),
    (63, 1318.51),
    (64, 1396.91),
    (65, 1479.98),
    (66, 1567.98),
    (67, 1661.22),
    (68, 1760.00),
    (69, 1864.66),
    (70, 1975.53),
    (71, 2093.00),
    (72, 2217.46),
    (73, 2349.32),
    (74, 2489.02),
    (75, 2637.02),
    (76, 2793.83),
    (77, 2959.96),
    (78, 3135.96),
    (79, 3322.44),
    (80, 3520.00),
    (81, 3729.31),
    (82, 3951.07),
    (83, 4186.01),
    (84, 4434.92),
    (85, 4698.64),
    (86, 4978.03),
    (87, 5274.04),
    (88, 5587.65),
    (89, 5919.91),
    (90, 6271.93),
    (91, 6644.88),
    (92, 7040.00),
    (93, 7458.62),
    (94, 7902.13),
    (95, 8372.02),
    (96, 8869.84),
    (97, 9397.27),
    (98, 9956.06),
    (99, 10548.08),
    (100, 11175.30),
    (101, 11839.82),
    (102, 12543.85),
    (103, 13289.75),
    (104, 14080.00),
    (105, 14917.24),
    (106, 15804.27),
    (107, 16744.04),
    (108, 17739.69),
    (109, 18794.55),
    (110, 19912.13),
    (111, 21096.16),
    (112, 22350.61),
    (113, 23679.64),
    (114, 25087.71),
    (115, 26579.50),
    (116, 28160.00),
    (117, 29834.48),
    (118, 31608.53),
    (119, 33488.07),
    (120, 35479.38),
    (121, 37589.09),
    (122, 39824.25),
    (123, 42192.33),
    (124, 44701.21),
    (125, 47359.29),
    (126, 50175.42),
];
