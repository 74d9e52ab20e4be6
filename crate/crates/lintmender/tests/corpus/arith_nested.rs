fn poly(a: i32, b: i32, c: i32) -> i32 {
    a + b * c
}

fn fold(k: usize, m: usize) -> usize {
    (k - m) % m
}
