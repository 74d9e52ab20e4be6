fn walk(mut i: i32, j: usize, p: i32, mut n: i32, c: &mut [i32]) {
    i += 1;
    c[(1 + j) as usize] = 1;
    n /= p;
}
