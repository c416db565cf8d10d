//! Published per-stage metric tables: one column per strategy, one row per
//! stage (base first), plus the printed "average" row. `None` marks a
//! dash; Whisper tiny cells are means over orderings.

pub const STRATEGIES: [&str; 10] = ["FT", "ER", "A-GEM", "DER", "PNN", "PB", "L2P", "EWC", "LwF", "MAS"];

pub struct Table {
    pub metric: &'static str,
    pub model: &'static str,
    pub rows: &'static [(&'static str, [Option<f64>; 10])],
    pub average: [Option<f64>; 10],
}

pub const TABLES: &[Table] = &[
    Table {
        metric: "awer",
        model: "Whisper large-v2",
        rows: &[
            ("base", [Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63), Some(11.63)]),
            ("rw", [Some(107.92), Some(52.88), Some(92.22), Some(74.41), Some(43.64), Some(42.6), Some(63.82), Some(120.28), Some(111.64), Some(55.43)]),
            ("eo", [Some(83.67), Some(47.24), Some(72.4), Some(68.98), Some(35.78), Some(34.59), Some(82.88), Some(80.25), Some(79.3), Some(52.52)]),
            ("kab", [Some(121.42), Some(49.5), Some(86.72), Some(85.08), Some(44.82), Some(42.84), Some(119.41), Some(125.79), Some(114.88), Some(66.35)]),
            ("lg", [Some(106.34), Some(54.06), Some(84.1), Some(76.68), Some(49.11), Some(46.54), Some(117.13), Some(105.88), Some(98.64), Some(73.57)]),
            ("mhr", [Some(101.5), Some(51.53), Some(81.22), Some(68.22), Some(47.66), Some(47.95), Some(130.27), Some(98.3), Some(97.4), Some(75.3)]),
            ("ckb", [Some(102.77), Some(55.27), Some(88.15), Some(68.38), Some(49.55), Some(51.29), Some(145.23), Some(103.45), Some(104.78), Some(78.76)]),
            ("ab", [Some(102.52), Some(61.77), Some(87.12), Some(75.22), Some(52.46), Some(53.71), Some(147.58), Some(102.52), Some(103.88), Some(83.1)]),
            ("kmr", [Some(120.93), Some(59.52), Some(96.83), Some(75.91), Some(52.02), Some(52.92), Some(151.18), Some(117.54), Some(116.5), Some(84.96)]),
            ("fy-NL", [Some(118.29), Some(58.87), Some(94.33), Some(71.03), Some(50.65), Some(51.14), Some(146.56), Some(124.01), Some(110.9), Some(86.11)]),
            ("ia", [Some(106.53), Some(56.9), Some(97.12), Some(70.65), Some(47.95), Some(48.25), Some(145.51), Some(112.51), Some(103.78), Some(81.17)]),
        ],
        average: [Some(98.5), Some(50.83), Some(81.08), Some(67.84), Some(44.12), Some(43.95), Some(114.65), Some(100.2), Some(95.76), Some(68.08)],
    },
    Table {
        metric: "awer",
        model: "WavLM large",
        rows: &[
            ("base", [Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63), Some(38.63)]),
            ("rw", [Some(91.88), Some(62.79), Some(74.32), Some(64.2), Some(63.25), Some(62.31), Some(71.32), Some(93.89), Some(73.47), Some(71.03)]),
            ("eo", [Some(77.72), Some(54.77), Some(73.93), Some(61.66), Some(57.98), Some(55.76), Some(83.88), Some(76.39), Some(71.26), Some(74.64)]),
            ("kab", [Some(99.16), Some(62.41), Some(72.53), Some(70.43), Some(66.15), Some(63.32), Some(90.91), Some(99.78), Some(89.82), Some(82.22)]),
            ("lg", [Some(95.14), Some(65.16), Some(75.59), Some(74.67), Some(68.47), Some(65.96), Some(96.53), Some(95.41), Some(94.45), Some(86.42)]),
            ("mhr", [Some(96.18), Some(63.35), Some(77.19), Some(72.73), Some(68.34), Some(64.34), Some(100.61), Some(96.49), Some(96.69), Some(87.96)]),
            ("ckb", [Some(100.67), Some(65.11), Some(76.43), Some(76.17), Some(70.55), Some(65.85), Some(104.95), Some(100.51), Some(99.07), Some(90.44)]),
            ("ab", [Some(98.3), Some(65.29), Some(79.13), Some(80.54), Some(72.81), Some(67.36), Some(108.08), Some(98.49), Some(99.36), Some(92.08)]),
            ("kmr", [Some(106.7), Some(65.5), Some(77.26), Some(80.93), Some(73.48), Some(67.0), Some(108.29), Some(105.55), Some(99.26), Some(95.45)]),
            ("fy-NL", [Some(103.08), Some(63.26), Some(78.37), Some(83.2), Some(74.27), Some(66.49), Some(108.26), Some(100.43), Some(99.78), Some(97.91)]),
            ("ia", [Some(100.21), Some(62.45), Some(74.59), Some(80.27), Some(72.82), Some(63.55), Some(108.42), Some(99.78), Some(97.13), Some(96.85)]),
        ],
        average: [Some(91.61), Some(60.79), Some(72.54), Some(71.22), Some(66.07), Some(61.87), Some(92.72), Some(91.4), Some(87.17), Some(83.06)],
    },
    Table {
        metric: "awer",
        model: "Whisper tiny",
        rows: &[
            ("base", [Some(47.01), Some(47.01), None, None, None, None, None, None, None, None]),
            ("L1", [Some(104.46), Some(61.94), None, None, None, None, None, None, None, None]),
            ("L2", [Some(103.1), Some(64.19), None, None, None, None, None, None, None, None]),
            ("L3", [Some(111.2), Some(67.48), None, None, None, None, None, None, None, None]),
            ("L4", [Some(110.81), Some(70.33), None, None, None, None, None, None, None, None]),
            ("L5", [Some(112.56), Some(71.24), None, None, None, None, None, None, None, None]),
            ("L6", [Some(105.41), Some(71.29), None, None, None, None, None, None, None, None]),
            ("L7", [Some(110.32), Some(72.18), None, None, None, None, None, None, None, None]),
            ("L8", [Some(109.51), Some(71.38), None, None, None, None, None, None, None, None]),
            ("L9", [Some(108.85), Some(69.93), None, None, None, None, None, None, None, None]),
            ("L10", [Some(116.25), Some(70.38), None, None, None, None, None, None, None, None]),
        ],
        average: [Some(103.59), Some(67.03), None, None, None, None, None, None, None, None],
    },
    Table {
        metric: "bwt",
        model: "Whisper large-v2",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(-137.17), Some(-22.81), Some(-102.18), Some(-69.79), Some(0.0), Some(0.0), Some(0.0), Some(-161.27), Some(-139.43), Some(0.02)]),
            ("eo", [Some(-75.91), Some(-17.72), Some(-54.26), Some(-53.81), Some(0.0), Some(0.0), Some(0.0), Some(-71.24), Some(-66.43), Some(-0.1)]),
            ("kab", [Some(-108.17), Some(-8.62), Some(-57.42), Some(-58.53), Some(0.0), Some(0.0), Some(0.0), Some(-114.28), Some(-96.19), Some(-0.68)]),
            ("lg", [Some(-78.24), Some(-9.75), Some(-46.52), Some(-40.46), Some(0.0), Some(0.0), Some(0.0), Some(-78.19), Some(-65.83), Some(-0.12)]),
            ("mhr", [Some(-71.5), Some(-8.04), Some(-43.24), Some(-30.96), Some(0.0), Some(0.0), Some(0.0), Some(-67.98), Some(-63.63), Some(-0.27)]),
            ("ckb", [Some(-69.44), Some(-10.39), Some(-48.39), Some(-28.75), Some(0.0), Some(0.0), Some(0.0), Some(-70.23), Some(-68.33), Some(-0.15)]),
            ("ab", [Some(-65.03), Some(-14.9), Some(-43.41), Some(-33.51), Some(0.0), Some(0.0), Some(0.0), Some(-65.36), Some(-63.18), Some(-0.2)]),
            ("kmr", [Some(-85.57), Some(-12.69), Some(-54.11), Some(-34.34), Some(0.0), Some(0.0), Some(0.0), Some(-81.91), Some(-76.68), Some(-1.1)]),
            ("fy-NL", [Some(-83.04), Some(-13.27), Some(-51.93), Some(-30.18), Some(0.0), Some(0.0), Some(0.0), Some(-89.54), Some(-70.65), Some(-2.09)]),
            ("ia", [Some(-71.78), Some(-13.84), Some(-57.07), Some(-32.45), Some(0.0), Some(0.0), Some(0.0), Some(-78.57), Some(-64.6), Some(-1.11)]),
        ],
        average: [Some(-84.58), Some(-13.2), Some(-55.85), Some(-41.28), Some(0.0), Some(0.0), Some(0.0), Some(-87.86), Some(-77.5), Some(-0.58)],
    },
    Table {
        metric: "bwt",
        model: "WavLM large",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(-70.42), Some(-9.41), Some(-5.01), Some(-5.12), Some(0.0), Some(0.0), Some(0.0), Some(-72.95), Some(-13.0), Some(-0.42)]),
            ("eo", [Some(-44.33), Some(-8.37), Some(3.65), Some(-10.31), Some(0.0), Some(0.0), Some(0.0), Some(-40.67), Some(-14.6), Some(0.16)]),
            ("kab", [Some(-60.03), Some(-8.84), Some(15.32), Some(-12.69), Some(0.0), Some(0.0), Some(0.0), Some(-59.42), Some(-27.46), Some(0.13)]),
            ("lg", [Some(-50.95), Some(-10.49), Some(13.83), Some(-15.45), Some(0.0), Some(0.0), Some(0.0), Some(-49.9), Some(-27.53), Some(0.04)]),
            ("mhr", [Some(-51.71), Some(-8.78), Some(14.44), Some(-14.49), Some(0.0), Some(0.0), Some(0.0), Some(-50.8), Some(-29.43), Some(0.48)]),
            ("ckb", [Some(-53.98), Some(-9.26), Some(17.05), Some(-17.13), Some(0.0), Some(0.0), Some(0.0), Some(-52.66), Some(-30.51), Some(-0.16)]),
            ("ab", [Some(-48.9), Some(-8.15), Some(17.33), Some(-20.47), Some(0.0), Some(0.0), Some(0.0), Some(-48.18), Some(-29.01), Some(0.21)]),
            ("kmr", [Some(-58.37), Some(-9.12), Some(20.0), Some(-21.44), Some(0.0), Some(0.0), Some(0.0), Some(-56.13), Some(-29.37), Some(-2.86)]),
            ("fy-NL", [Some(-54.71), Some(-7.99), Some(18.87), Some(-25.0), Some(0.0), Some(0.0), Some(0.0), Some(-50.88), Some(-30.15), Some(-5.1)]),
            ("ia", [Some(-53.27), Some(-9.17), Some(20.39), Some(-24.35), Some(0.0), Some(0.0), Some(0.0), Some(-52.03), Some(-29.28), Some(-6.17)]),
        ],
        average: [Some(-54.67), Some(-8.96), Some(13.59), Some(-16.64), Some(0.0), Some(0.0), Some(0.0), Some(-53.36), Some(-26.03), Some(-1.37)],
    },
    Table {
        metric: "bwt",
        model: "Whisper tiny",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("L1", [Some(-104.27), Some(-16.68), None, None, None, None, None, None, None, None]),
            ("L2", [Some(-76.6), Some(-15.61), None, None, None, None, None, None, None, None]),
            ("L3", [Some(-74.94), Some(-14.14), None, None, None, None, None, None, None, None]),
            ("L4", [Some(-67.24), Some(-13.75), None, None, None, None, None, None, None, None]),
            ("L5", [Some(-65.42), Some(-13.02), None, None, None, None, None, None, None, None]),
            ("L6", [Some(-55.66), Some(-12.88), None, None, None, None, None, None, None, None]),
            ("L7", [Some(-59.35), Some(-12.68), None, None, None, None, None, None, None, None]),
            ("L8", [Some(-59.06), Some(-13.15), None, None, None, None, None, None, None, None]),
            ("L9", [Some(-58.28), Some(-12.11), None, None, None, None, None, None, None, None]),
            ("L10", [Some(-65.32), Some(-12.03), None, None, None, None, None, None, None, None]),
        ],
        average: [Some(-68.61), Some(-13.61), None, None, None, None, None, None, None, None],
    },
    Table {
        metric: "im",
        model: "Whisper large-v2",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(-2.18), Some(2.09), Some(1.42), Some(-1.81), Some(6.43), Some(4.36), Some(46.78), Some(-1.55), Some(3.0), Some(30.03)]),
            ("eo", [Some(0.39), Some(3.19), Some(6.26), Some(0.13), Some(-0.08), Some(-1.58), Some(100.86), Some(-1.17), Some(1.04), Some(26.34)]),
            ("kab", [Some(-11.61), Some(-7.73), Some(-7.59), Some(-8.14), Some(-1.61), Some(-5.99), Some(155.43), Some(-11.51), Some(-7.65), Some(32.43)]),
            ("lg", [Some(-2.7), Some(-1.11), Some(-0.53), Some(-3.48), Some(5.93), Some(1.03), Some(47.69), Some(-4.03), Some(-1.36), Some(43.69)]),
            ("mhr", [Some(-5.23), Some(-0.28), Some(-1.25), Some(-5.01), Some(2.5), Some(17.09), Some(158.06), Some(-4.62), Some(-1.64), Some(45.16)]),
            ("ckb", [Some(-6.21), Some(-1.95), Some(-1.92), Some(-5.84), Some(3.37), Some(13.79), Some(177.49), Some(-4.69), Some(-0.24), Some(42.49)]),
            ("ab", [Some(-2.18), Some(0.96), Some(1.98), Some(-3.25), Some(8.48), Some(6.36), Some(99.67), Some(-4.44), Some(0.99), Some(48.67)]),
            ("kmr", [Some(-8.37), Some(-2.98), Some(-1.69), Some(-6.09), Some(1.19), Some(-0.74), Some(132.72), Some(-7.33), Some(-1.01), Some(45.04)]),
            ("fy-NL", [Some(-3.32), Some(0.16), Some(2.35), Some(-4.79), Some(3.38), Some(0.16), Some(69.99), Some(-3.38), Some(3.08), Some(51.47)]),
            ("ia", [Some(-0.15), Some(-0.48), Some(2.98), Some(-4.66), Some(2.17), Some(0.66), Some(116.3), Some(-1.01), Some(3.76), Some(20.87)]),
        ],
        average: [Some(-4.16), Some(-0.81), Some(0.2), Some(-4.29), Some(3.18), Some(3.51), Some(110.5), Some(-4.37), Some(0.0), Some(38.62)],
    },
    Table {
        metric: "im",
        model: "WavLM large",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(-7.64), Some(-4.8), Some(22.66), Some(2.31), Some(5.53), Some(3.64), Some(21.66), Some(-6.15), Some(12.97), Some(20.66)]),
            ("eo", [Some(-5.38), Some(-5.12), Some(48.92), Some(4.53), Some(10.91), Some(6.14), Some(72.47), Some(-3.51), Some(14.11), Some(46.09)]),
            ("kab", [Some(-11.0), Some(-7.52), Some(23.95), Some(-3.76), Some(7.59), Some(2.96), Some(28.95), Some(-10.04), Some(9.26), Some(21.95)]),
            ("lg", [Some(-11.44), Some(-6.09), Some(30.41), Some(1.09), Some(10.97), Some(9.68), Some(52.19), Some(-10.22), Some(18.42), Some(36.19)]),
            ("mhr", [Some(-6.89), Some(-1.17), Some(48.47), Some(-1.15), Some(14.12), Some(2.75), Some(67.47), Some(-6.04), Some(17.31), Some(44.35)]),
            ("ckb", [Some(-7.0), Some(-5.27), Some(32.73), Some(-2.78), Some(14.57), Some(5.62), Some(61.73), Some(-6.62), Some(8.25), Some(32.73)]),
            ("ab", [Some(-6.08), Some(-4.31), Some(47.61), Some(1.23), Some(19.25), Some(8.57), Some(60.61), Some(-6.31), Some(11.88), Some(36.61)]),
            ("kmr", [Some(-17.03), Some(-15.0), Some(34.78), Some(-10.4), Some(12.64), Some(-2.11), Some(43.78), Some(-16.0), Some(0.38), Some(31.88)]),
            ("fy-NL", [Some(-6.91), Some(-7.78), Some(46.22), Some(-1.81), Some(29.37), Some(9.91), Some(56.0), Some(-6.52), Some(16.11), Some(44.95)]),
            ("ia", [Some(-22.5), Some(-19.16), Some(17.18), Some(-21.33), Some(4.54), Some(-19.62), Some(56.29), Some(-22.77), Some(-4.47), Some(16.75)]),
        ],
        average: [Some(-10.19), Some(-7.62), Some(35.29), Some(-3.21), Some(12.95), Some(2.75), Some(52.11), Some(-9.42), Some(10.42), Some(33.22)],
    },
    Table {
        metric: "im",
        model: "Whisper tiny",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("L1", [Some(-8.32), Some(-5.77), None, None, None, None, None, None, None, None]),
            ("L2", [Some(-8.94), Some(-6.24), None, None, None, None, None, None, None, None]),
            ("L3", [Some(-7.24), Some(-4.99), None, None, None, None, None, None, None, None]),
            ("L4", [Some(-6.51), Some(-2.41), None, None, None, None, None, None, None, None]),
            ("L5", [Some(-7.07), Some(-4.66), None, None, None, None, None, None, None, None]),
            ("L6", [Some(-5.95), Some(-2.12), None, None, None, None, None, None, None, None]),
            ("L7", [Some(-6.92), Some(-3.2), None, None, None, None, None, None, None, None]),
            ("L8", [Some(-6.68), Some(-4.15), None, None, None, None, None, None, None, None]),
            ("L9", [Some(-5.32), Some(-3.09), None, None, None, None, None, None, None, None]),
            ("L10", [Some(-5.41), Some(-3.45), None, None, None, None, None, None, None, None]),
        ],
        average: [Some(-6.84), Some(-4.01), None, None, None, None, None, None, None, None],
    },
    Table {
        metric: "fwt",
        model: "Whisper large-v2",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(0.0), Some(-4.27), Some(-3.6), Some(-0.37), Some(-8.61), Some(-6.54), Some(-48.96), Some(-0.63), Some(-5.18), Some(-32.21)]),
            ("eo", [Some(-2.08), Some(-4.88), Some(-7.95), Some(-1.82), Some(-1.61), Some(-0.11), Some(-102.55), Some(-0.52), Some(-2.73), Some(-28.03)]),
            ("kab", [Some(2.55), Some(-1.33), Some(-1.47), Some(-0.92), Some(-7.45), Some(-3.07), Some(-164.49), Some(2.45), Some(-1.41), Some(-41.49)]),
            ("lg", [Some(-1.89), Some(-3.48), Some(-4.06), Some(-1.11), Some(-10.52), Some(-5.62), Some(-52.28), Some(-0.56), Some(-3.23), Some(-48.28)]),
            ("mhr", [Some(-1.07), Some(-6.02), Some(-5.05), Some(-1.29), Some(-8.8), Some(-23.39), Some(-164.36), Some(-1.68), Some(-4.66), Some(-51.46)]),
            ("ckb", [Some(3.21), Some(-1.05), Some(-1.08), Some(2.84), Some(-6.37), Some(-16.79), Some(-180.49), Some(1.69), Some(-2.76), Some(-45.49)]),
            ("ab", [Some(-3.19), Some(-6.33), Some(-7.35), Some(-2.12), Some(-13.85), Some(-11.73), Some(-105.04), Some(-0.93), Some(-6.36), Some(-54.04)]),
            ("kmr", [Some(0.93), Some(-4.46), Some(-5.75), Some(-1.35), Some(-8.63), Some(-6.7), Some(-140.16), Some(-0.11), Some(-6.43), Some(-52.48)]),
            ("fy-NL", [Some(-3.43), Some(-6.91), Some(-9.1), Some(-1.96), Some(-10.13), Some(-6.91), Some(-76.74), Some(-3.37), Some(-9.83), Some(-58.22)]),
            ("ia", [Some(-3.33), Some(-3.0), Some(-6.46), Some(1.18), Some(-5.65), Some(-4.14), Some(-119.78), Some(-2.47), Some(-7.24), Some(-24.35)]),
        ],
        average: [Some(-0.83), Some(-4.17), Some(-5.19), Some(-0.69), Some(-8.16), Some(-8.5), Some(-115.48), Some(-0.61), Some(-4.98), Some(-43.61)],
    },
    Table {
        metric: "fwt",
        model: "WavLM large",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("rw", [Some(0.0), Some(-2.84), Some(-30.3), Some(-9.95), Some(-13.17), Some(-11.28), Some(-29.3), Some(-1.49), Some(-20.61), Some(-28.3)]),
            ("eo", [Some(-1.11), Some(-1.37), Some(-55.41), Some(-11.02), Some(-17.4), Some(-12.63), Some(-78.96), Some(-2.98), Some(-20.6), Some(-52.58)]),
            ("kab", [Some(0.75), Some(-2.73), Some(-34.2), Some(-6.49), Some(-17.84), Some(-13.21), Some(-39.2), Some(-0.21), Some(-19.51), Some(-32.2)]),
            ("lg", [Some(3.53), Some(-1.82), Some(-38.32), Some(-9.0), Some(-18.88), Some(-17.59), Some(-60.1), Some(2.31), Some(-26.33), Some(-44.1)]),
            ("mhr", [Some(-1.95), Some(-7.67), Some(-57.31), Some(-7.69), Some(-22.96), Some(-11.59), Some(-76.31), Some(-2.8), Some(-26.15), Some(-53.19)]),
            ("ckb", [Some(0.4), Some(-1.33), Some(-39.33), Some(-3.82), Some(-21.17), Some(-12.22), Some(-68.33), Some(0.02), Some(-14.85), Some(-39.33)]),
            ("ab", [Some(-1.0), Some(-2.77), Some(-54.69), Some(-8.31), Some(-26.33), Some(-15.65), Some(-67.69), Some(-0.77), Some(-18.96), Some(-43.69)]),
            ("kmr", [Some(1.41), Some(-0.62), Some(-50.4), Some(-5.22), Some(-28.26), Some(-13.51), Some(-59.4), Some(0.38), Some(-16.0), Some(-47.5)]),
            ("fy-NL", [Some(-1.27), Some(-0.4), Some(-54.4), Some(-6.37), Some(-37.55), Some(-18.09), Some(-64.18), Some(-1.66), Some(-24.29), Some(-53.13)]),
            ("ia", [Some(-2.85), Some(-6.19), Some(-42.53), Some(-4.02), Some(-29.89), Some(-5.73), Some(-81.64), Some(-2.58), Some(-20.88), Some(-42.1)]),
        ],
        average: [Some(-0.21), Some(-2.77), Some(-45.69), Some(-7.19), Some(-23.34), Some(-13.15), Some(-62.51), Some(-0.98), Some(-20.82), Some(-43.61)],
    },
    Table {
        metric: "fwt",
        model: "Whisper tiny",
        rows: &[
            ("base", [None, None, None, None, None, None, None, None, None, None]),
            ("L1", [Some(0.0), Some(-2.55), None, None, None, None, None, None, None, None]),
            ("L2", [Some(-1.24), Some(-3.94), None, None, None, None, None, None, None, None]),
            ("L3", [Some(-1.18), Some(-3.43), None, None, None, None, None, None, None, None]),
            ("L4", [Some(-0.75), Some(-4.86), None, None, None, None, None, None, None, None]),
            ("L5", [Some(-1.68), Some(-4.08), None, None, None, None, None, None, None, None]),
            ("L6", [Some(-1.41), Some(-5.24), None, None, None, None, None, None, None, None]),
            ("L7", [Some(-1.18), Some(-4.9), None, None, None, None, None, None, None, None]),
            ("L8", [Some(-2.8), Some(-5.34), None, None, None, None, None, None, None, None]),
            ("L9", [Some(-2.87), Some(-5.1), None, None, None, None, None, None, None, None]),
            ("L10", [Some(-2.73), Some(-4.68), None, None, None, None, None, None, None, None]),
        ],
        average: [Some(-1.58), Some(-4.41), None, None, None, None, None, None, None, None],
    },
];
