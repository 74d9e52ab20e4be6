struct Point {
    x: i32,
    y: i32,
}

#[derive(Clone)]
struct Label(String);

#[derive(Debug)]
enum Ready {
    Yes,
    No,
}

pub struct Wide {
    pub cols: u16,
}
