fn emit(v: i32) -> i32 {
    v
}

fn pair(x: i32, y: i32) -> i32 {
    x
}

fn caller() -> i32 {
    let a = emit(9);
    let b = pair(12, 13);
    emit(14);
    b
}
