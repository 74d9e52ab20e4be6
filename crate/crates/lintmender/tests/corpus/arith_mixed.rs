fn stride(start: i32, step: i32, j: i32, p: i32) -> i32 {
    let mut total = start;
    total = total + step;
    let shifted = 1 + j;
    let gap = p - 1;
    total
}
