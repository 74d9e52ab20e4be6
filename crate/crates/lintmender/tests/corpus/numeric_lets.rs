fn locals() {
    let a = 1;
    let b = 2;
    let scale = 2.5;
    let c: i64 = 3;
    let d = 4 as u8;
    let e = [5, 6];
    let f = (7);
}
