fn floats() {
    let w = 0.5;
    let x = 1e3;
    let y = 2.5;
    let z: f32 = 9.5;
    let v = [3.5, 4.5];
}
