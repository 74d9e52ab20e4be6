fn zero() -> i32 {
    return 0;
}

fn one() -> i64 {
    return 1;
}

fn pi_ish() -> f64 {
    return 3.14;
}

fn both(flag: bool) -> u32 {
    if flag {
        return 10;
    }
    11
}
