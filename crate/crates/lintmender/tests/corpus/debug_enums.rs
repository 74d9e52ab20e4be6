use std::fmt;

enum Direction {
    North,
    South,
}

enum Mode {
    Fast,
    Slow,
}

struct Shown;

impl fmt::Debug for Shown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Shown")
    }
}
