fn churn(mut i: i32, d: i32) -> i32 {
    i += d;
    i -= d;
    i *= d;
    i /= d;
    i %= d;
    i
}
