fn add(a: i32, b: i32) -> i32 {
    a + b
}

fn sub(c: i32, d: i32) -> i32 {
    c - d
}

fn mul(e: i32, f: i32) -> i32 {
    e * f
}

fn div(g: i32, h: i32) -> i32 {
    g / h
}

fn rem(i: i32, j: i32) -> i32 {
    i % j
}
