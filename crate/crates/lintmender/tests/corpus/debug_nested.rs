fn build() {
    struct Temp {
        val: u8,
    }
    let _ = Temp { val: 0_u8 };
}

mod inner {
    pub enum Depth {
        Shallow,
        Deep,
    }
}
