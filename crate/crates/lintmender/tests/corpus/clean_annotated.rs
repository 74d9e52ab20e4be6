fn config() -> u32 {
    let width: u32 = 80;
    let height = 24 as u32;
    let ratio: f64 = 1.5;
    width
}
