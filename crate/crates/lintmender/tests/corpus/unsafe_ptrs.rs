fn read_both(p: *const i32, q: *mut i32) -> i32 {
    let a = unsafe { *p };
    unsafe { q.write(a) };
    let b = unsafe { *q };
    unsafe { q.drop_in_place() };
    b
}
